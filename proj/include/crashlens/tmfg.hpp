#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <set>
#include <string>
#include <vector>

#include "crashlens/errors.hpp"

namespace crashlens {

// Triangular face, vertices kept sorted.
using Face = std::array<int, 3>;

inline Face make_face(int a, int b, int c) {
    Face f{a, b, c};
    std::sort(f.begin(), f.end());
    return f;
}

struct TmfgEdge {
    int i = 0;  // i < j
    int j = 0;
    double weight = 0.0;
};

struct TmfgInsertion {
    int vertex = 0;
    Face host{};
    double gain = 0.0;
};

// Planar chordal graph retaining 3(n-2) of the strongest similarity edges.
// insertion_log reversed gives a perfect elimination ordering.
struct TmfgGraph {
    int n = 0;
    std::array<int, 4> seed{};
    std::vector<TmfgEdge> edges;       // 3(n-2), sorted (i, j)
    std::vector<Face> faces;           // 2(n-2)
    std::vector<TmfgInsertion> insertion_log;  // n-4 entries

    bool has_edge(int a, int b) const {
        if (a > b) std::swap(a, b);
        for (const auto& e : edges)
            if (e.i == a && e.j == b) return true;
        return false;
    }

    std::vector<std::vector<int>> adjacency() const {
        std::vector<std::vector<int>> adj(static_cast<std::size_t>(n));
        for (const auto& e : edges) {
            adj[static_cast<std::size_t>(e.i)].push_back(e.j);
            adj[static_cast<std::size_t>(e.j)].push_back(e.i);
        }
        return adj;
    }

    Eigen::MatrixXd weighted_adjacency(bool absolute = true) const {
        Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
        for (const auto& e : edges) {
            const double w = absolute ? std::abs(e.weight) : e.weight;
            a(e.i, e.j) = a(e.j, e.i) = w;
        }
        return a;
    }
};

namespace detail {

inline double face_gain(const Eigen::MatrixXd& s, int v, const Face& f) {
    return s(v, f[0]) + s(v, f[1]) + s(v, f[2]);
}

}  // namespace detail

// Greedy TMFG construction. Seed: the quadruple with maximal pairwise similarity
// sum, by exhaustive search (first in lexicographic order wins ties). Each of the
// remaining vertices is attached to the face with the largest gain
// S(v,a)+S(v,b)+S(v,c); ties break to the lowest vertex index, then the
// lexicographically smallest face.
inline TmfgGraph build_tmfg(const Eigen::MatrixXd& s) {
    const int n = static_cast<int>(s.rows());
    if (n < 4) throw TooFewVertices("TMFG needs at least 4 vertices");
    if (s.cols() != s.rows()) throw NonSymmetricInput("similarity matrix must be square");
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (s(i, j) != s(j, i))
                throw NonSymmetricInput("similarity matrix must be symmetric");

    TmfgGraph g;
    g.n = n;

    // seed tetrahedron
    std::array<int, 4> best{0, 1, 2, 3};
    double best_sum = -std::numeric_limits<double>::infinity();
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b)
            for (int c = b + 1; c < n; ++c)
                for (int d = c + 1; d < n; ++d) {
                    const double sum = s(a, b) + s(a, c) + s(a, d) + s(b, c) +
                                       s(b, d) + s(c, d);
                    if (sum > best_sum) {
                        best_sum = sum;
                        best = {a, b, c, d};
                    }
                }
    g.seed = best;

    std::vector<char> inserted(static_cast<std::size_t>(n), 0);
    for (int v : best) inserted[static_cast<std::size_t>(v)] = 1;
    const auto add_edge = [&](int a, int b) {
        if (a > b) std::swap(a, b);
        g.edges.push_back({a, b, s(a, b)});
    };
    add_edge(best[0], best[1]);
    add_edge(best[0], best[2]);
    add_edge(best[0], best[3]);
    add_edge(best[1], best[2]);
    add_edge(best[1], best[3]);
    add_edge(best[2], best[3]);
    g.faces = {make_face(best[0], best[1], best[2]),
               make_face(best[0], best[1], best[3]),
               make_face(best[0], best[2], best[3]),
               make_face(best[1], best[2], best[3])};

    for (int round = 0; round < n - 4; ++round) {
        int best_v = -1;
        std::size_t best_f = 0;
        double best_gain = -std::numeric_limits<double>::infinity();
        for (int v = 0; v < n; ++v) {
            if (inserted[static_cast<std::size_t>(v)]) continue;
            for (std::size_t fi = 0; fi < g.faces.size(); ++fi) {
                const double gain = detail::face_gain(s, v, g.faces[fi]);
                const bool better =
                    gain > best_gain ||
                    (gain == best_gain &&
                     (v < best_v || (v == best_v && g.faces[fi] < g.faces[best_f])));
                if (better) {
                    best_gain = gain;
                    best_v = v;
                    best_f = fi;
                }
            }
        }
        const Face host = g.faces[best_f];
        g.insertion_log.push_back({best_v, host, best_gain});
        inserted[static_cast<std::size_t>(best_v)] = 1;
        add_edge(best_v, host[0]);
        add_edge(best_v, host[1]);
        add_edge(best_v, host[2]);
        g.faces.erase(g.faces.begin() + static_cast<std::ptrdiff_t>(best_f));
        g.faces.push_back(make_face(best_v, host[0], host[1]));
        g.faces.push_back(make_face(best_v, host[0], host[2]));
        g.faces.push_back(make_face(best_v, host[1], host[2]));
    }

    std::sort(g.edges.begin(), g.edges.end(), [](const TmfgEdge& a, const TmfgEdge& b) {
        return a.i != b.i ? a.i < b.i : a.j < b.j;
    });
    return g;
}

struct TmfgCheck {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct TmfgReport {
    std::vector<TmfgCheck> checks;

    bool all_passed() const {
        for (const auto& c : checks)
            if (!c.passed) return false;
        return true;
    }
};

// Structural validation: edge/face counts, connectivity, the Euler relation
// V - E + F = 2 (stored faces include the outer one), and chordality via the
// reversed insertion log as a perfect elimination ordering.
inline TmfgReport validate(const TmfgGraph& g) {
    TmfgReport rep;
    const auto expect = [&](const std::string& name, bool ok, std::string detail = "") {
        rep.checks.push_back({name, ok, std::move(detail)});
    };

    const std::size_t want_edges = 3 * (static_cast<std::size_t>(g.n) - 2);
    const std::size_t want_faces = 2 * (static_cast<std::size_t>(g.n) - 2);
    expect("edge_count", g.edges.size() == want_edges,
           std::to_string(g.edges.size()) + " vs " + std::to_string(want_edges));
    expect("face_count", g.faces.size() == want_faces,
           std::to_string(g.faces.size()) + " vs " + std::to_string(want_faces));

    // connectivity by BFS
    const auto adj = g.adjacency();
    std::vector<char> seen(static_cast<std::size_t>(g.n), 0);
    std::vector<int> queue{0};
    seen[0] = 1;
    std::size_t reached = 1;
    while (!queue.empty()) {
        const int v = queue.back();
        queue.pop_back();
        for (int u : adj[static_cast<std::size_t>(v)]) {
            if (!seen[static_cast<std::size_t>(u)]) {
                seen[static_cast<std::size_t>(u)] = 1;
                ++reached;
                queue.push_back(u);
            }
        }
    }
    expect("connected", reached == static_cast<std::size_t>(g.n));

    const long long euler = static_cast<long long>(g.n) -
                            static_cast<long long>(g.edges.size()) +
                            static_cast<long long>(g.faces.size());
    expect("euler", euler == 2, "V-E+F = " + std::to_string(euler));

    // perfect elimination ordering: reverse insertion order, seed last
    bool peo_ok = g.insertion_log.size() + 4 == static_cast<std::size_t>(g.n);
    if (peo_ok) {
        std::vector<int> order;
        for (auto it = g.insertion_log.rbegin(); it != g.insertion_log.rend(); ++it)
            order.push_back(it->vertex);
        for (int v : g.seed) order.push_back(v);
        std::vector<char> remaining(static_cast<std::size_t>(g.n), 1);
        std::vector<std::set<int>> nbr(static_cast<std::size_t>(g.n));
        for (const auto& e : g.edges) {
            nbr[static_cast<std::size_t>(e.i)].insert(e.j);
            nbr[static_cast<std::size_t>(e.j)].insert(e.i);
        }
        for (int v : order) {
            std::vector<int> later;
            for (int u : nbr[static_cast<std::size_t>(v)])
                if (remaining[static_cast<std::size_t>(u)] && u != v) later.push_back(u);
            for (std::size_t a = 0; a < later.size() && peo_ok; ++a)
                for (std::size_t b = a + 1; b < later.size() && peo_ok; ++b)
                    if (!nbr[static_cast<std::size_t>(later[a])].count(later[b]))
                        peo_ok = false;
            remaining[static_cast<std::size_t>(v)] = 0;
            if (!peo_ok) break;
        }
    }
    expect("chordal_peo", peo_ok);
    return rep;
}

}  // namespace crashlens
