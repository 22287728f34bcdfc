#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "crashlens/tmfg.hpp"

namespace crashlens {

struct LayoutPoint {
    double x = 0.0;
    double y = 0.0;
};

// Fruchterman-Reingold force-directed layout with a fixed iteration budget.
// Deterministic for a given seed; presentation only.
inline std::vector<LayoutPoint> force_layout(const TmfgGraph& g, std::uint64_t seed,
                                             int iterations = 250) {
    const int n = g.n;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    std::vector<LayoutPoint> pos(static_cast<std::size_t>(n));
    for (auto& p : pos) {
        p.x = uni(rng);
        p.y = uni(rng);
    }
    if (n <= 1) return pos;
    const double k = std::sqrt(1.0 / static_cast<double>(n));
    std::vector<LayoutPoint> disp(static_cast<std::size_t>(n));
    for (int it = 0; it < iterations; ++it) {
        const double temp = 0.1 * (1.0 - static_cast<double>(it) / iterations) + 1e-3;
        for (auto& d : disp) d = {0.0, 0.0};
        for (int i = 0; i < n; ++i) {
            for (int j = i + 1; j < n; ++j) {
                double dx = pos[i].x - pos[j].x;
                double dy = pos[i].y - pos[j].y;
                double dist = std::sqrt(dx * dx + dy * dy);
                if (dist < 1e-9) {
                    dx = 1e-4 * (i - j);
                    dy = 1e-4;
                    dist = std::sqrt(dx * dx + dy * dy);
                }
                const double rep = k * k / dist;
                disp[i].x += dx / dist * rep;
                disp[i].y += dy / dist * rep;
                disp[j].x -= dx / dist * rep;
                disp[j].y -= dy / dist * rep;
            }
        }
        for (const auto& e : g.edges) {
            double dx = pos[e.i].x - pos[e.j].x;
            double dy = pos[e.i].y - pos[e.j].y;
            double dist = std::sqrt(dx * dx + dy * dy);
            if (dist < 1e-9) dist = 1e-9;
            const double att = dist * dist / k;
            disp[e.i].x -= dx / dist * att;
            disp[e.i].y -= dy / dist * att;
            disp[e.j].x += dx / dist * att;
            disp[e.j].y += dy / dist * att;
        }
        for (int i = 0; i < n; ++i) {
            const double len = std::sqrt(disp[i].x * disp[i].x + disp[i].y * disp[i].y);
            if (len > 1e-12) {
                const double lim = std::min(len, temp);
                pos[i].x += disp[i].x / len * lim;
                pos[i].y += disp[i].y / len * lim;
            }
        }
    }
    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (const auto& p : pos) {
        xmin = std::min(xmin, p.x);
        xmax = std::max(xmax, p.x);
        ymin = std::min(ymin, p.y);
        ymax = std::max(ymax, p.y);
    }
    const double sx = xmax > xmin ? xmax - xmin : 1.0;
    const double sy = ymax > ymin ? ymax - ymin : 1.0;
    for (auto& p : pos) {
        p.x = (p.x - xmin) / sx;
        p.y = (p.y - ymin) / sy;
    }
    return pos;
}

}  // namespace crashlens
