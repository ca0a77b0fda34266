#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "pwe/geometry.hpp"
#include "pwe/scene.hpp"

namespace pwe {

using VertexId = std::uint32_t;

enum class VertexKind { Tx, Ris, RxAntenna };

struct Vertex {
    VertexKind kind = VertexKind::Tx;
    int index = 0;  // RIS id or antenna index; 0 for the transmitter
    Vec3 position;
};

using Edge = std::pair<VertexId, VertexId>;

/// Line-of-sight graph of a scene. Vertex order: transmitter, RIS units by id,
/// then antennas by index. Adjacency lists are sorted ascending.
class PweGraph {
public:
    PweGraph(std::vector<Vertex> vertices, std::vector<std::vector<VertexId>> adjacency);

    std::size_t vertex_count() const { return vertices_.size(); }
    std::size_t edge_count() const { return edge_count_; }
    const Vertex &vertex(VertexId v) const { return vertices_[v]; }
    std::span<const Vertex> vertices() const { return vertices_; }
    std::span<const VertexId> neighbors(VertexId v) const { return adjacency_[v]; }
    bool adjacent(VertexId a, VertexId b) const;

    VertexId tx_vertex() const { return 0; }
    VertexId ris_vertex(int ris_id) const { return static_cast<VertexId>(1 + ris_id); }
    VertexId antenna_vertex(int antenna) const { return static_cast<VertexId>(1 + ris_count_ + antenna); }
    std::size_t ris_count() const { return ris_count_; }
    std::size_t antenna_count() const { return vertices_.size() - 1 - ris_count_; }

    /// Antenna <-> RIS edges, antenna vertex first.
    const std::vector<Edge> &e_u() const { return e_u_; }
    /// Transmitter <-> RIS edges, transmitter vertex first.
    const std::vector<Edge> &e_t() const { return e_t_; }

private:
    std::vector<Vertex> vertices_;
    std::vector<std::vector<VertexId>> adjacency_;
    std::size_t ris_count_ = 0;
    std::size_t edge_count_ = 0;
    std::vector<Edge> e_u_;
    std::vector<Edge> e_t_;
};

/// Pairwise visibility used for edges: the segment is clear and, when either
/// end is a RIS, the other end lies strictly in front of that RIS's face.
bool line_of_sight(const Scene &scene, const Vertex &a, const Vertex &b);

/// Builds the LoS graph. Throws SceneError if the transmitter sees no RIS.
PweGraph build_graph(const Scene &scene);

/// Minimum-hop path source -> target avoiding `banned` (indexed by vertex;
/// may be empty). Neighbors are expanded in ascending order, so the result
/// is the path a plain FIFO breadth-first search would produce.
std::optional<std::vector<VertexId>> bfs_shortest_path(const PweGraph &graph, VertexId source, VertexId target,
                                                       std::span<const bool> banned = {});

}  // namespace pwe
