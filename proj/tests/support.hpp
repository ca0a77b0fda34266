#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "pwe/geometry.hpp"
#include "pwe/graph.hpp"
#include "pwe/scene.hpp"

namespace testsupport {

using pwe::Vec3;

inline pwe::WallPlane wall(int id, Vec3 center, Vec3 n, Vec3 u, double u_half, double v_half) {
    return pwe::WallPlane{id, center, n, u, pwe::cross(n, u), u_half, v_half};
}

/// Six inward-facing walls of an axis-aligned box; ids 0..5 are
/// floor, ceiling, x-low, x-high, y-low, y-high.
inline std::vector<pwe::WallPlane> box_walls(Vec3 lo, Vec3 hi, int first_id = 0) {
    const Vec3 c = 0.5 * (lo + hi);
    const Vec3 h = 0.5 * (hi - lo);
    const Vec3 ex{1, 0, 0}, ey{0, 1, 0}, ez{0, 0, 1};
    return {
        wall(first_id + 0, {c.x, c.y, lo.z}, ez, ex, h.x, h.y),
        wall(first_id + 1, {c.x, c.y, hi.z}, -ez, ex, h.x, h.y),
        wall(first_id + 2, {lo.x, c.y, c.z}, ex, ey, h.y, h.z),
        wall(first_id + 3, {hi.x, c.y, c.z}, -ex, ey, h.y, h.z),
        wall(first_id + 4, {c.x, lo.y, c.z}, ey, ex, h.x, h.z),
        wall(first_id + 5, {c.x, hi.y, c.z}, -ey, ex, h.x, h.z),
    };
}

inline pwe::RisUnit ris_on(const pwe::WallPlane &w, int id, double u, double v, double side) {
    return pwe::RisUnit{id, w.id, w.point_at(u, v), w.n, side, pwe::RisMode::Absorption};
}

/// Single closed box room with hand-placed RIS units, transmitter and antennas.
inline pwe::Scene box_scene(Vec3 lo, Vec3 hi, std::vector<pwe::RisUnit> ris, Vec3 tx, std::vector<Vec3> antennas) {
    pwe::Scene s;
    s.walls = box_walls(lo, hi);
    s.ris_units = std::move(ris);
    s.rooms.push_back(pwe::Box{lo, hi});
    s.tx = tx;
    s.rx.rows = 1;
    s.rx.cols = static_cast<int>(antennas.size());
    s.rx.antennas = std::move(antennas);
    return s;
}

inline Vec3 random_unit(std::mt19937_64 &rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    for (;;) {
        const Vec3 v{g(rng), g(rng), g(rng)};
        const double n = pwe::norm(v);
        if (n > 1e-6) {
            return v * (1.0 / n);
        }
    }
}

inline double uniform(std::mt19937_64 &rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

/// Graph over anonymous vertices (vertex 0 is Tx, the rest RIS) from an edge list.
inline pwe::PweGraph graph_from_edges(std::size_t n, const std::vector<std::pair<int, int>> &edges) {
    std::vector<pwe::Vertex> vs(n);
    for (std::size_t i = 0; i < n; ++i) {
        vs[i] = pwe::Vertex{i == 0 ? pwe::VertexKind::Tx : pwe::VertexKind::Ris, i == 0 ? 0 : static_cast<int>(i - 1),
                            Vec3{static_cast<double>(i), 0, 0}};
    }
    std::vector<std::vector<pwe::VertexId>> adj(n);
    for (auto [a, b] : edges) {
        adj[a].push_back(static_cast<pwe::VertexId>(b));
        adj[b].push_back(static_cast<pwe::VertexId>(a));
    }
    for (auto &l : adj) {
        std::sort(l.begin(), l.end());
        l.erase(std::unique(l.begin(), l.end()), l.end());
    }
    return pwe::PweGraph(std::move(vs), std::move(adj));
}

}  // namespace testsupport
