#include "pwe/graph.hpp"

#include <algorithm>

namespace pwe {

PweGraph::PweGraph(std::vector<Vertex> vertices, std::vector<std::vector<VertexId>> adjacency)
    : vertices_(std::move(vertices)), adjacency_(std::move(adjacency)) {
    adjacency_.resize(vertices_.size());
    ris_count_ = static_cast<std::size_t>(
        std::count_if(vertices_.begin(), vertices_.end(), [](const Vertex &v) { return v.kind == VertexKind::Ris; }));
    for (VertexId a = 0; a < adjacency_.size(); ++a) {
        for (VertexId b : adjacency_[a]) {
            if (b <= a) {
                continue;
            }
            ++edge_count_;
            const auto ka = vertices_[a].kind;
            const auto kb = vertices_[b].kind;
            if (ka == VertexKind::Tx && kb == VertexKind::Ris) {
                e_t_.emplace_back(a, b);
            } else if (ka == VertexKind::Ris && kb == VertexKind::RxAntenna) {
                e_u_.emplace_back(b, a);
            } else if (ka == VertexKind::RxAntenna && kb == VertexKind::Ris) {
                e_u_.emplace_back(a, b);
            }
        }
    }
}

bool PweGraph::adjacent(VertexId a, VertexId b) const {
    const auto &la = adjacency_[a];
    const auto &lb = adjacency_[b];
    return la.size() <= lb.size() ? std::binary_search(la.begin(), la.end(), b)
                                  : std::binary_search(lb.begin(), lb.end(), a);
}

namespace {

bool in_front(const Scene &scene, const Vertex &ris, const Vec3 &other) {
    const auto &unit = scene.ris_units[ris.index];
    return dot(other - unit.center, unit.normal) > kLengthTol;
}

}  // namespace

bool line_of_sight(const Scene &scene, const Vertex &a, const Vertex &b) {
    if (a.kind == VertexKind::Ris && !in_front(scene, a, b.position)) {
        return false;
    }
    if (b.kind == VertexKind::Ris && !in_front(scene, b, a.position)) {
        return false;
    }
    return segment_clear(a.position, b.position, scene.walls, scene.openings);
}

PweGraph build_graph(const Scene &scene) {
    std::vector<Vertex> vertices;
    vertices.reserve(1 + scene.ris_units.size() + scene.rx.size());
    vertices.push_back(Vertex{VertexKind::Tx, 0, scene.tx});
    for (const auto &r : scene.ris_units) {
        vertices.push_back(Vertex{VertexKind::Ris, r.id, r.center});
    }
    for (std::size_t i = 0; i < scene.rx.size(); ++i) {
        vertices.push_back(Vertex{VertexKind::RxAntenna, static_cast<int>(i), scene.rx.antennas[i]});
    }

    // Outer loop ascending, inner ascending: every list ends up sorted.
    std::vector<std::vector<VertexId>> adjacency(vertices.size());
    for (VertexId a = 0; a < vertices.size(); ++a) {
        for (VertexId b = a + 1; b < vertices.size(); ++b) {
            if (line_of_sight(scene, vertices[a], vertices[b])) {
                adjacency[a].push_back(b);
                adjacency[b].push_back(a);
            }
        }
    }

    PweGraph graph(std::move(vertices), std::move(adjacency));
    if (graph.e_t().empty()) {
        throw SceneError("transmitter has no line of sight to any RIS unit");
    }
    return graph;
}

std::optional<std::vector<VertexId>> bfs_shortest_path(const PweGraph &graph, VertexId source, VertexId target,
                                                       std::span<const bool> banned) {
    const std::size_t n = graph.vertex_count();
    const auto is_banned = [&](VertexId v) { return v < banned.size() && banned[v]; };
    if (source >= n || target >= n || is_banned(source) || is_banned(target)) {
        return std::nullopt;
    }
    if (source == target) {
        return std::vector<VertexId>{source};
    }

    constexpr VertexId kNone = static_cast<VertexId>(-1);
    std::vector<VertexId> parent(n, kNone);
    std::vector<bool> seen(n, false);
    seen[source] = true;

    const auto unwind = [&](VertexId last) {
        std::vector<VertexId> path{target, last};
        while (path.back() != source) {
            path.push_back(parent[path.back()]);
        }
        std::reverse(path.begin(), path.end());
        return path;
    };

    // Level-synchronous FIFO search. Before expanding a level, the first
    // frontier vertex (in queue order) adjacent to the target is exactly the
    // one a FIFO search would discover the target from.
    std::vector<VertexId> frontier{source};
    std::vector<VertexId> next;
    while (!frontier.empty()) {
        for (VertexId v : frontier) {
            if (graph.adjacent(v, target)) {
                return unwind(v);
            }
        }
        next.clear();
        for (VertexId v : frontier) {
            for (VertexId w : graph.neighbors(v)) {
                if (!seen[w] && !is_banned(w)) {
                    seen[w] = true;
                    parent[w] = v;
                    next.push_back(w);
                }
            }
        }
        frontier.swap(next);
    }
    return std::nullopt;
}

}  // namespace pwe
