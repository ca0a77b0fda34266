#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <deque>
#include <limits>
#include <random>
#include <set>

#include "pwe/graph.hpp"
#include "pwe/scene.hpp"
#include "support.hpp"

using namespace pwe;
using testsupport::graph_from_edges;

namespace {

// Independent crossing test: parametric intersection of the open segment with
// each bounded rectangle, then doorway membership on that wall.
bool oracle_clear(const Scene &s, const Vec3 &a, const Vec3 &b) {
    const Vec3 d = b - a;
    const double len = norm(d);
    for (const auto &w : s.walls) {
        const double denom = dot(d, w.n);
        if (denom == 0.0) {
            continue;
        }
        const double t = dot(w.p0 - a, w.n) / denom;
        if (t * len <= 1e-9 || (1.0 - t) * len <= 1e-9) {
            continue;
        }
        const Vec3 q = a + t * d;
        const double u = dot(q - w.p0, w.u_axis);
        const double v = dot(q - w.p0, w.v_axis);
        if (std::abs(u) > w.u_extent + 1e-9 || std::abs(v) > w.v_extent + 1e-9) {
            continue;
        }
        bool in_door = false;
        for (const auto &o : s.openings) {
            in_door = in_door || (o.wall_id == w.id && u >= o.u_min - 1e-9 && u <= o.u_max + 1e-9 &&
                                  v >= o.v_min - 1e-9 && v <= o.v_max + 1e-9);
        }
        if (!in_door) {
            return false;
        }
    }
    return true;
}

bool faces(const RisUnit &r, const Vec3 &q) { return dot(q - r.center, r.normal) > 1e-9; }

std::set<std::pair<VertexId, VertexId>> edge_set(const PweGraph &g) {
    std::set<std::pair<VertexId, VertexId>> out;
    for (VertexId a = 0; a < g.vertex_count(); ++a) {
        for (VertexId b : g.neighbors(a)) {
            if (a < b) {
                out.emplace(a, b);
            }
        }
    }
    return out;
}

// Textbook FIFO breadth-first search with ascending neighbor order.
std::optional<std::vector<VertexId>> fifo_bfs(const PweGraph &g, VertexId s, VertexId t,
                                              const std::vector<char> &banned) {
    std::vector<VertexId> parent(g.vertex_count(), std::numeric_limits<VertexId>::max());
    std::vector<char> seen(g.vertex_count(), 0);
    std::deque<VertexId> q{s};
    seen[s] = 1;
    while (!q.empty()) {
        const VertexId v = q.front();
        q.pop_front();
        if (v == t) {
            std::vector<VertexId> path{t};
            while (path.back() != s) {
                path.push_back(parent[path.back()]);
            }
            return std::vector<VertexId>(path.rbegin(), path.rend());
        }
        for (VertexId w : g.neighbors(v)) {
            if (!seen[w] && !banned[w]) {
                seen[w] = 1;
                parent[w] = v;
                q.push_back(w);
            }
        }
    }
    return std::nullopt;
}

// Exhaustive simple-path enumeration with a running best bound.
void enumerate(const PweGraph &g, VertexId v, VertexId t, int depth, std::vector<char> &on_path,
               const std::vector<char> &banned, int &best) {
    if (v == t) {
        best = std::min(best, depth);
        return;
    }
    if (depth + 1 >= best) {
        return;
    }
    for (VertexId w : g.neighbors(v)) {
        if (!on_path[w] && !banned[w]) {
            on_path[w] = 1;
            enumerate(g, w, t, depth + 1, on_path, banned, best);
            on_path[w] = 0;
        }
    }
}

}  // namespace

TEST_CASE("one room, one RIS, one antenna: a triangle") {
    const auto walls = testsupport::box_walls({0, 0, 0}, {4, 4, 3});
    const Scene s = testsupport::box_scene({0, 0, 0}, {4, 4, 3}, {testsupport::ris_on(walls[1], 0, 0, 0, 0.5)},
                                           {1, 1, 1}, {{3, 3, 1}});
    const PweGraph g = build_graph(s);
    CHECK(g.vertex_count() == 3);
    CHECK(g.edge_count() == 3);
    CHECK(g.e_t().size() == 1);
    CHECK(g.e_u().size() == 1);
    CHECK(g.vertex(g.tx_vertex()).kind == VertexKind::Tx);
    CHECK(g.vertex(g.ris_vertex(0)).kind == VertexKind::Ris);
    CHECK(g.vertex(g.antenna_vertex(0)).kind == VertexKind::RxAntenna);
}

TEST_CASE("transmitter without any visible RIS is a scene fault") {
    const auto walls = testsupport::box_walls({0, 0, 0}, {4, 4, 3});
    // A RIS whose face points out of the room is invisible from inside it.
    auto r = testsupport::ris_on(walls[1], 0, 0, 0, 0.5);
    r.normal = -r.normal;
    const Scene s = testsupport::box_scene({0, 0, 0}, {4, 4, 3}, {r}, {1, 1, 1}, {{3, 3, 1}});
    CHECK_THROWS_AS(build_graph(s), SceneError);
}

TEST_CASE("a solid divider without a doorway separates the rooms") {
    const SceneParams p;
    Scene s = make_two_room_scene(p, 0.5, 2);
    s.openings.clear();
    const PweGraph g = build_graph(s);
    const auto room_of = [&](VertexId v) {
        const auto &vx = g.vertex(v);
        if (vx.kind == VertexKind::Ris) {
            return s.ris_units[vx.index].wall_id <= 5 ? 2 : 1;
        }
        return vx.position.x < p.room_length ? 1 : 2;
    };
    for (const auto &[a, b] : edge_set(g)) {
        CHECK(room_of(a) == room_of(b));
    }
}

TEST_CASE("default scene edges equal a brute-force all-pairs evaluation") {
    for (double d_r : {0.55, 0.8}) {
        const Scene s = make_two_room_scene(SceneParams{}, d_r, 2);
        const PweGraph g = build_graph(s);
        std::set<std::pair<VertexId, VertexId>> expected;
        std::size_t clear_only = 0;
        for (VertexId a = 0; a < g.vertex_count(); ++a) {
            for (VertexId b = a + 1; b < g.vertex_count(); ++b) {
                const auto &va = g.vertex(a);
                const auto &vb = g.vertex(b);
                if (!oracle_clear(s, va.position, vb.position)) {
                    continue;
                }
                ++clear_only;
                if (va.kind == VertexKind::Ris && !faces(s.ris_units[va.index], vb.position)) {
                    continue;
                }
                if (vb.kind == VertexKind::Ris && !faces(s.ris_units[vb.index], va.position)) {
                    continue;
                }
                expected.emplace(a, b);
            }
        }
        CAPTURE(d_r);
        CHECK(edge_set(g) == expected);
        CHECK(g.edge_count() == expected.size());
        // The facing rule only ever removes segment-clear pairs.
        CHECK(clear_only >= expected.size());
    }
}

TEST_CASE("graph structural invariants") {
    const Scene s = make_two_room_scene(SceneParams{}, 0.45, 3);
    const PweGraph g = build_graph(s);
    const PweGraph g2 = build_graph(s);
    CHECK(edge_set(g) == edge_set(g2));

    REQUIRE(g.vertex_count() == 1 + s.ris_units.size() + 9);
    for (VertexId v = 0; v < g.vertex_count(); ++v) {
        const auto nb = g.neighbors(v);
        CHECK(std::is_sorted(nb.begin(), nb.end()));
        CHECK(std::adjacent_find(nb.begin(), nb.end()) == nb.end());
        for (VertexId w : nb) {
            CHECK(w != v);
            CHECK(g.adjacent(w, v));
        }
        CHECK(g.vertex(v).position == g2.vertex(v).position);
    }
    for (const auto &[a, r] : g.e_u()) {
        CHECK(g.vertex(a).kind == VertexKind::RxAntenna);
        CHECK(g.vertex(r).kind == VertexKind::Ris);
        CHECK(g.adjacent(a, r));
    }
    for (const auto &[t, r] : g.e_t()) {
        CHECK(t == g.tx_vertex());
        CHECK(g.vertex(r).kind == VertexKind::Ris);
        CHECK(g.adjacent(t, r));
    }
    std::size_t n_eu = 0, n_et = 0;
    for (const auto &[a, b] : edge_set(g)) {
        const auto ka = g.vertex(a).kind, kb = g.vertex(b).kind;
        n_eu += ((ka == VertexKind::RxAntenna && kb == VertexKind::Ris) ||
                 (ka == VertexKind::Ris && kb == VertexKind::RxAntenna))
                    ? 1
                    : 0;
        n_et += (ka == VertexKind::Tx && kb == VertexKind::Ris) ? 1 : 0;
    }
    CHECK(n_eu == g.e_u().size());
    CHECK(n_et == g.e_t().size());
    CHECK_FALSE(g.e_u().empty());
}

TEST_CASE("bfs hand examples") {
    const auto g = graph_from_edges(3, {{0, 1}, {1, 2}});
    const auto p = bfs_shortest_path(g, 0, 2);
    REQUIRE(p);
    CHECK(*p == std::vector<VertexId>{0, 1, 2});

    const bool banned[3] = {false, true, false};
    CHECK_FALSE(bfs_shortest_path(g, 0, 2, banned));

    const auto self = bfs_shortest_path(g, 1, 1);
    REQUIRE(self);
    CHECK(*self == std::vector<VertexId>{1});

    const bool banned_src[3] = {true, false, false};
    CHECK_FALSE(bfs_shortest_path(g, 0, 2, banned_src));
}

TEST_CASE("bfs breaks ties toward lower vertex ids") {
    // Diamond 0-{1,2}-3 and a longer detour.
    const auto g = graph_from_edges(6, {{0, 2}, {0, 1}, {1, 3}, {2, 3}, {0, 4}, {4, 5}, {5, 3}});
    const auto p = bfs_shortest_path(g, 0, 3);
    REQUIRE(p);
    CHECK(*p == std::vector<VertexId>{0, 1, 3});
    const bool banned[6] = {false, true, false, false, false, false};
    const auto q = bfs_shortest_path(g, 0, 3, banned);
    REQUIRE(q);
    CHECK(*q == std::vector<VertexId>{0, 2, 3});
}

TEST_CASE("bfs matches exhaustive enumeration and plain FIFO search on random graphs") {
    std::mt19937_64 rng(77);
    int reachable = 0, unreachable = 0;
    for (int iter = 0; iter < 300; ++iter) {
        const int n = std::uniform_int_distribution<int>(2, 30)(rng);
        const double p = testsupport::uniform(rng, 0.03, 0.25);
        std::vector<std::pair<int, int>> edges;
        for (int a = 0; a < n; ++a) {
            for (int b = a + 1; b < n; ++b) {
                if (testsupport::uniform(rng, 0, 1) < p) {
                    edges.emplace_back(a, b);
                }
            }
        }
        const auto g = graph_from_edges(static_cast<std::size_t>(n), edges);
        const auto s = static_cast<VertexId>(std::uniform_int_distribution<int>(0, n - 1)(rng));
        auto t = static_cast<VertexId>(std::uniform_int_distribution<int>(0, n - 1)(rng));
        if (t == s) {
            t = static_cast<VertexId>((s + 1) % n);
        }
        std::vector<char> banned(n, 0);
        for (int v = 0; v < n; ++v) {
            if (v != static_cast<int>(s) && v != static_cast<int>(t) && testsupport::uniform(rng, 0, 1) < 0.1) {
                banned[v] = 1;
            }
        }
        auto banned_b = std::make_unique<bool[]>(n);
        for (int v = 0; v < n; ++v) {
            banned_b[v] = banned[v] != 0;
        }

        const auto path = bfs_shortest_path(g, s, t, std::span<const bool>(banned_b.get(), n));
        std::vector<char> on_path(n, 0);
        on_path[s] = 1;
        int best = std::numeric_limits<int>::max();
        enumerate(g, s, t, 0, on_path, banned, best);

        CAPTURE(iter);
        if (best == std::numeric_limits<int>::max()) {
            CHECK_FALSE(path);
            ++unreachable;
            continue;
        }
        ++reachable;
        REQUIRE(path);
        CHECK(static_cast<int>(path->size()) - 1 == best);
        CHECK(path->front() == s);
        CHECK(path->back() == t);
        for (std::size_t i = 0; i + 1 < path->size(); ++i) {
            CHECK(g.adjacent((*path)[i], (*path)[i + 1]));
            CHECK_FALSE(banned[(*path)[i]]);
        }
        const auto fifo = fifo_bfs(g, s, t, banned);
        REQUIRE(fifo);
        CHECK(*fifo == *path);
    }
    CHECK(reachable > 50);
    CHECK(unreachable > 10);
}
