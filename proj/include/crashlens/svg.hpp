#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "crashlens/errors.hpp"
#include "crashlens/time.hpp"

namespace crashlens {
namespace svg {

// Fixed-precision coordinate formatting keeps output byte-stable.
inline std::string fmt(double v) {
    if (!std::isfinite(v)) v = 0.0;
    if (v == 0.0) v = 0.0;  // normalise -0
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

inline std::string fmt_value(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4g", v);
    return buf;
}

inline std::string escape(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out.push_back(c);
        }
    }
    return out;
}

class Document {
public:
    Document(double width, double height) : width_(width), height_(height) {
        body_ << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
              << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(width_)
              << "\" height=\"" << fmt(height_) << "\" viewBox=\"0 0 " << fmt(width_)
              << " " << fmt(height_) << "\">\n";
        rect(0, 0, width_, height_, "#ffffff", "none");
    }

    void rect(double x, double y, double w, double h, const std::string& fill,
              const std::string& stroke, double opacity = 1.0) {
        body_ << "<rect x=\"" << fmt(x) << "\" y=\"" << fmt(y) << "\" width=\"" << fmt(w)
              << "\" height=\"" << fmt(h) << "\" fill=\"" << fill << "\" stroke=\""
              << stroke << "\"";
        if (opacity != 1.0) body_ << " fill-opacity=\"" << fmt(opacity) << "\"";
        body_ << " />\n";
    }

    void line(double x1, double y1, double x2, double y2, const std::string& stroke,
              double width = 1.0, const std::string& dash = "") {
        body_ << "<line x1=\"" << fmt(x1) << "\" y1=\"" << fmt(y1) << "\" x2=\"" << fmt(x2)
              << "\" y2=\"" << fmt(y2) << "\" stroke=\"" << stroke << "\" stroke-width=\""
              << fmt(width) << "\"";
        if (!dash.empty()) body_ << " stroke-dasharray=\"" << dash << "\"";
        body_ << " />\n";
    }

    void polyline(const std::vector<std::pair<double, double>>& pts,
                  const std::string& stroke, double width = 1.5) {
        if (pts.empty()) return;
        body_ << "<polyline fill=\"none\" stroke=\"" << stroke << "\" stroke-width=\""
              << fmt(width) << "\" points=\"";
        for (std::size_t i = 0; i < pts.size(); ++i) {
            if (i) body_ << ' ';
            body_ << fmt(pts[i].first) << ',' << fmt(pts[i].second);
        }
        body_ << "\" />\n";
    }

    void polygon(const std::vector<std::pair<double, double>>& pts,
                 const std::string& fill, double opacity) {
        if (pts.empty()) return;
        body_ << "<polygon fill=\"" << fill << "\" fill-opacity=\"" << fmt(opacity)
              << "\" stroke=\"none\" points=\"";
        for (std::size_t i = 0; i < pts.size(); ++i) {
            if (i) body_ << ' ';
            body_ << fmt(pts[i].first) << ',' << fmt(pts[i].second);
        }
        body_ << "\" />\n";
    }

    void circle(double cx, double cy, double r, const std::string& fill,
                const std::string& stroke = "none") {
        body_ << "<circle cx=\"" << fmt(cx) << "\" cy=\"" << fmt(cy) << "\" r=\"" << fmt(r)
              << "\" fill=\"" << fill << "\" stroke=\"" << stroke << "\" />\n";
    }

    void text(double x, double y, const std::string& s, double size = 12.0,
              const std::string& fill = "#111111", const std::string& anchor = "start",
              const std::string& weight = "normal") {
        body_ << "<text x=\"" << fmt(x) << "\" y=\"" << fmt(y) << "\" font-size=\""
              << fmt(size) << "\" font-family=\"sans-serif\" fill=\"" << fill
              << "\" text-anchor=\"" << anchor << "\" font-weight=\"" << weight << "\">"
              << escape(s) << "</text>\n";
    }

    std::string str() const { return body_.str() + "</svg>\n"; }

    double width() const { return width_; }
    double height() const { return height_; }

private:
    double width_;
    double height_;
    std::ostringstream body_;
};

inline const std::vector<std::string>& palette() {
    static const std::vector<std::string> colors{
        "#d62728", "#2ca02c", "#ff7f0e", "#1f77b4", "#9467bd",
        "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};
    return colors;
}

// 1-2-5 tick steps, roughly `target` ticks across [lo, hi]
inline std::vector<double> nice_ticks(double lo, double hi, int target = 6) {
    if (!(hi > lo)) return {lo};
    const double raw = (hi - lo) / target;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    double step = mag;
    for (const double m : {1.0, 2.0, 5.0, 10.0}) {
        if (mag * m >= raw) {
            step = mag * m;
            break;
        }
    }
    std::vector<double> ticks;
    double t = std::ceil(lo / step) * step;
    for (; t <= hi + step * 1e-9; t += step) ticks.push_back(t == 0.0 ? 0.0 : t);
    return ticks;
}

struct Series {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
    std::string color;
};

struct Band {
    std::string label;
    std::vector<double> x;
    std::vector<double> lo;
    std::vector<double> hi;
    std::string color = "#1f77b4";
    double opacity = 0.2;
};

struct Marker {
    std::string label;
    double x = 0.0;
};

struct LineChart {
    std::string title;
    std::string y_label;
    std::vector<Series> series;
    std::vector<Band> bands;
    std::vector<Marker> markers;  // dotted vertical event lines
    bool x_is_time = true;        // x values are epoch seconds
    bool log_y = false;
    double width = 960;
    double height = 480;
};

namespace detail {

struct Frame {
    double x0, y0, x1, y1;  // plot area
    double xmin, xmax, ymin, ymax;

    double px(double x) const { return x0 + (x - xmin) / (xmax - xmin) * (x1 - x0); }
    double py(double y) const { return y1 - (y - ymin) / (ymax - ymin) * (y1 - y0); }
};

inline void draw_time_axis(Document& doc, const Frame& f) {
    const double span = f.xmax - f.xmin;
    std::int64_t step = 86400;
    while (span / static_cast<double>(step) > 9.0) step += 86400;
    std::int64_t t = static_cast<std::int64_t>(std::ceil(f.xmin / static_cast<double>(step))) * step;
    for (; t <= static_cast<std::int64_t>(f.xmax); t += step) {
        const double x = f.px(static_cast<double>(t));
        doc.line(x, f.y1, x, f.y1 + 4, "#444444");
        doc.line(x, f.y0, x, f.y1, "#eeeeee");
        doc.text(x, f.y1 + 16, format_utc_date(t).substr(5), 10, "#444444", "middle");
    }
}

inline void draw_value_axis(Document& doc, const Frame& f) {
    for (const double v : nice_ticks(f.ymin, f.ymax)) {
        const double y = f.py(v);
        doc.line(f.x0 - 4, y, f.x0, y, "#444444");
        doc.line(f.x0, y, f.x1, y, "#eeeeee");
        doc.text(f.x0 - 7, y + 3.5, fmt_value(v), 10, "#444444", "end");
    }
}

}  // namespace detail

inline std::string render(const LineChart& c) {
    Document doc(c.width, c.height);
    const detail::Frame f = [&] {
        detail::Frame fr{64, 34, c.width - 16, c.height - 40, 0, 1, 0, 1};
        double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
        const auto eat = [&](const std::vector<double>& xs, const std::vector<double>& ys) {
            for (std::size_t i = 0; i < xs.size(); ++i) {
                xmin = std::min(xmin, xs[i]);
                xmax = std::max(xmax, xs[i]);
                ymin = std::min(ymin, ys[i]);
                ymax = std::max(ymax, ys[i]);
            }
        };
        for (const auto& s : c.series) eat(s.x, s.y);
        for (const auto& b : c.bands) {
            eat(b.x, b.lo);
            eat(b.x, b.hi);
        }
        if (xmax <= xmin) xmax = xmin + 1;
        if (ymax <= ymin) ymax = ymin + 1;
        const double pad = (ymax - ymin) * 0.05;
        fr.xmin = xmin;
        fr.xmax = xmax;
        fr.ymin = ymin - pad;
        fr.ymax = ymax + pad;
        return fr;
    }();

    doc.text(f.x0, 20, c.title, 14, "#111111", "start", "bold");
    if (c.x_is_time) detail::draw_time_axis(doc, f);
    detail::draw_value_axis(doc, f);
    doc.rect(f.x0, f.y0, f.x1 - f.x0, f.y1 - f.y0, "none", "#444444");
    if (!c.y_label.empty()) doc.text(f.x0, f.y0 - 6, c.y_label, 10, "#444444");

    for (const auto& b : c.bands) {
        std::vector<std::pair<double, double>> pts;
        for (std::size_t i = 0; i < b.x.size(); ++i)
            pts.emplace_back(f.px(b.x[i]), f.py(b.hi[i]));
        for (std::size_t i = b.x.size(); i-- > 0;)
            pts.emplace_back(f.px(b.x[i]), f.py(b.lo[i]));
        doc.polygon(pts, b.color, b.opacity);
    }
    for (const auto& s : c.series) {
        std::vector<std::pair<double, double>> pts;
        for (std::size_t i = 0; i < s.x.size(); ++i)
            pts.emplace_back(f.px(s.x[i]), f.py(s.y[i]));
        doc.polyline(pts, s.color);
    }
    for (const auto& m : c.markers) {
        if (m.x < f.xmin || m.x > f.xmax) continue;
        const double x = f.px(m.x);
        doc.line(x, f.y0, x, f.y1, "#333333", 1.0, "4,3");
        doc.text(x + 3, f.y0 + 12, m.label, 11, "#333333");
    }
    double lx = f.x0 + 8;
    for (std::size_t i = 0; i < c.series.size(); ++i) {
        const double ly = f.y0 + 10 + 14 * static_cast<double>(i);
        doc.line(lx, ly, lx + 18, ly, c.series[i].color, 2.0);
        doc.text(lx + 24, ly + 3.5, c.series[i].label, 11);
    }
    return doc.str();
}

struct ImbalanceChart {
    std::string title;
    std::vector<std::int64_t> hours;
    std::vector<double> imbalance;
    std::vector<Marker> markers;
    double width = 960;
    double height = 360;
};

// Positive bars red (selling pressure), negative green (buying pressure).
inline std::string render(const ImbalanceChart& c) {
    Document doc(c.width, c.height);
    detail::Frame f{64, 34, c.width - 16, c.height - 40, 0, 1, 0, 1};
    double ymin = 0.0, ymax = 0.0;
    for (const double v : c.imbalance) {
        ymin = std::min(ymin, v);
        ymax = std::max(ymax, v);
    }
    if (ymax == ymin) ymax = ymin + 1;
    const double pad = (ymax - ymin) * 0.05;
    f.ymin = ymin - pad;
    f.ymax = ymax + pad;
    f.xmin = c.hours.empty() ? 0 : static_cast<double>(c.hours.front());
    f.xmax = c.hours.empty() ? 1 : static_cast<double>(c.hours.back() + kSecondsPerHour);
    if (f.xmax <= f.xmin) f.xmax = f.xmin + 1;

    doc.text(f.x0, 20, c.title, 14, "#111111", "start", "bold");
    detail::draw_time_axis(doc, f);
    detail::draw_value_axis(doc, f);
    doc.rect(f.x0, f.y0, f.x1 - f.x0, f.y1 - f.y0, "none", "#444444");

    const double y0 = f.py(0.0);
    const double bar_w =
        c.hours.empty() ? 1.0
                        : std::max(0.5, (f.x1 - f.x0) / static_cast<double>(c.hours.size()));
    for (std::size_t i = 0; i < c.hours.size(); ++i) {
        const double v = c.imbalance[i];
        if (v == 0.0) continue;
        const double x = f.px(static_cast<double>(c.hours[i]));
        const double y = f.py(v);
        if (v > 0)
            doc.rect(x, y, bar_w, y0 - y, "#d62728", "none", 0.85);
        else
            doc.rect(x, y0, bar_w, y - y0, "#2ca02c", "none", 0.85);
    }
    doc.line(f.x0, y0, f.x1, y0, "#444444");
    for (const auto& m : c.markers) {
        if (m.x < f.xmin || m.x > f.xmax) continue;
        const double x = f.px(m.x);
        doc.line(x, f.y0, x, f.y1, "#333333", 1.0, "4,3");
        doc.text(x + 3, f.y0 + 12, m.label, 11, "#333333");
    }
    return doc.str();
}

struct NetworkNode {
    std::string label;
    double x = 0.0;  // layout coordinates in [0,1]
    double y = 0.0;
    double size = 4.0;
    bool highlight = false;
};

struct NetworkEdge {
    int a = 0;
    int b = 0;
    double weight = 0.0;
};

struct NetworkChart {
    std::string title;
    std::vector<NetworkNode> nodes;
    std::vector<NetworkEdge> edges;
    double width = 800;
    double height = 800;
};

inline std::string render(const NetworkChart& c) {
    Document doc(c.width, c.height);
    const double margin = 50;
    const auto px = [&](double x) { return margin + x * (c.width - 2 * margin); };
    const auto py = [&](double y) { return margin + y * (c.height - 2 * margin); };
    doc.text(margin, 24, c.title, 14, "#111111", "start", "bold");
    double wmax = 0.0;
    for (const auto& e : c.edges) wmax = std::max(wmax, std::abs(e.weight));
    if (wmax == 0.0) wmax = 1.0;
    for (const auto& e : c.edges) {
        const auto& na = c.nodes[static_cast<std::size_t>(e.a)];
        const auto& nb = c.nodes[static_cast<std::size_t>(e.b)];
        const double w = 0.4 + 1.6 * std::abs(e.weight) / wmax;
        doc.line(px(na.x), py(na.y), px(nb.x), py(nb.y),
                 e.weight >= 0 ? "#9db4c9" : "#d9a5a5", w);
    }
    for (const auto& n : c.nodes) {
        doc.circle(px(n.x), py(n.y), n.size, n.highlight ? "#d62728" : "#1f77b4",
                   "#ffffff");
        doc.text(px(n.x) + n.size + 2, py(n.y) + 3.5, n.label, 9, "#333333");
    }
    return doc.str();
}

}  // namespace svg
}  // namespace crashlens
