#include "pwe/scene.hpp"

#include <cmath>
#include <string>

namespace pwe {

namespace {

WallPlane make_wall(int id, Vec3 center, Vec3 n, Vec3 u, double u_half, double v_half) {
    return WallPlane{id, center, n, u, cross(n, u), u_half, v_half};
}

void require(bool ok, const std::string &what) {
    if (!ok) {
        throw SceneError(what);
    }
}

}  // namespace

Scene make_two_room_scene(const SceneParams &p, double d_r, int m_side) {
    require(p.room_length > 0.0 && p.room_width > 0.0 && p.room_height > 0.0, "room dimensions must be positive");
    require(p.wall_thickness >= 0.0, "wall_thickness must be non-negative");
    require(p.door_width > 0.0 && p.door_width < p.room_width, "door_width must lie in (0, room_width)");
    require(p.door_height > 0.0 && p.door_height < p.room_height, "door_height must lie in (0, room_height)");
    require(d_r > 0.0, "d_r must be positive");
    require(m_side >= 1, "m_side must be at least 1");

    const double L = p.room_length;
    const double W = p.room_width;
    const double H = p.room_height;
    const double x2 = L + p.wall_thickness;  // receiver room starts here
    const double c1 = 0.5 * L;
    const double c2 = x2 + 0.5 * L;

    const Vec3 ex{1, 0, 0};
    const Vec3 ey{0, 1, 0};
    const Vec3 ez{0, 0, 1};

    Scene s;
    auto &w = s.walls;
    // Receiver room (2).
    w.push_back(make_wall(0, {c2, 0.5 * W, 0.0}, ez, ex, 0.5 * L, 0.5 * W));
    w.push_back(make_wall(1, {c2, 0.5 * W, H}, -ez, ex, 0.5 * L, 0.5 * W));
    w.push_back(make_wall(2, {x2, 0.5 * W, 0.5 * H}, ex, ey, 0.5 * W, 0.5 * H));
    w.push_back(make_wall(3, {x2 + L, 0.5 * W, 0.5 * H}, -ex, ey, 0.5 * W, 0.5 * H));
    w.push_back(make_wall(4, {c2, 0.0, 0.5 * H}, ey, ex, 0.5 * L, 0.5 * H));
    w.push_back(make_wall(5, {c2, W, 0.5 * H}, -ey, ex, 0.5 * L, 0.5 * H));
    // Transmitter room (1).
    w.push_back(make_wall(6, {c1, 0.5 * W, 0.0}, ez, ex, 0.5 * L, 0.5 * W));
    w.push_back(make_wall(7, {c1, 0.5 * W, H}, -ez, ex, 0.5 * L, 0.5 * W));
    w.push_back(make_wall(8, {0.0, 0.5 * W, 0.5 * H}, ex, ey, 0.5 * W, 0.5 * H));
    w.push_back(make_wall(9, {L, 0.5 * W, 0.5 * H}, -ex, -ey, 0.5 * W, 0.5 * H));
    w.push_back(make_wall(10, {c1, 0.0, 0.5 * H}, ey, ex, 0.5 * L, 0.5 * H));
    w.push_back(make_wall(11, {c1, W, 0.5 * H}, -ey, ex, 0.5 * L, 0.5 * H));

    // Doorway through both faces of the divider. Both faces have v along +z.
    for (int wall_id : {2, 9}) {
        s.openings.push_back(
            Opening{wall_id, -0.5 * p.door_width, 0.5 * p.door_width, -0.5 * H, -0.5 * H + p.door_height});
    }

    for (int wall_id : {1, 2, 3, 4, 5, 8, 9, 10, 11}) {
        auto units = tile_wall(w[wall_id], d_r, p.ris_margin, s.openings, static_cast<int>(s.ris_units.size()));
        s.ris_units.insert(s.ris_units.end(), units.begin(), units.end());
    }
    require(!s.ris_units.empty(), "no RIS unit of side " + std::to_string(d_r) + " m fits on any wall");

    s.rooms.push_back(Box{{0.0, 0.0, 0.0}, {L, W, H}});
    s.rooms.push_back(Box{{x2, 0.0, 0.0}, {x2 + L, W, H}});
    s.tx = p.tx_position;
    require(is_unit(normalized(p.rx_boresight)), "rx_boresight must be a nonzero vector");
    s.rx = make_antenna_array(p.rx_center, p.rx_boresight, m_side, m_side, p.rx_spacing);

    validate_scene(s);
    return s;
}

void validate_scene(const Scene &s) {
    constexpr double tol = 1e-9;
    for (std::size_t i = 0; i < s.walls.size(); ++i) {
        const auto &w = s.walls[i];
        const std::string tag = "wall " + std::to_string(i);
        require(w.id == static_cast<int>(i), tag + ": id must equal its index");
        require(is_unit(w.n) && is_unit(w.u_axis) && is_unit(w.v_axis), tag + ": axes must be unit vectors");
        require(std::abs(dot(w.n, w.u_axis)) <= tol && std::abs(dot(w.n, w.v_axis)) <= tol &&
                    std::abs(dot(w.u_axis, w.v_axis)) <= tol,
                tag + ": axes must be orthonormal");
        require(w.u_extent > 0.0 && w.v_extent > 0.0, tag + ": extents must be positive");
    }
    for (const auto &o : s.openings) {
        require(o.wall_id >= 0 && o.wall_id < static_cast<int>(s.walls.size()), "opening references unknown wall");
        require(o.u_min < o.u_max && o.v_min < o.v_max, "opening must have positive area");
    }
    for (std::size_t i = 0; i < s.ris_units.size(); ++i) {
        const auto &r = s.ris_units[i];
        const std::string tag = "RIS " + std::to_string(i);
        require(r.id == static_cast<int>(i), tag + ": id must equal its index");
        require(r.wall_id >= 0 && r.wall_id < static_cast<int>(s.walls.size()), tag + ": unknown host wall");
        require(r.side > 0.0, tag + ": side must be positive");
        const auto &w = s.walls[r.wall_id];
        require(std::abs(w.signed_distance(r.center)) <= tol, tag + ": center is off its wall plane");
        const double h = 0.5 * r.side;
        require(std::abs(w.u_of(r.center)) + h <= w.u_extent + tol && std::abs(w.v_of(r.center)) + h <= w.v_extent + tol,
                tag + ": footprint exceeds wall extents");
    }
    require(!s.rooms.empty(), "scene has no rooms");
    const auto inside = [&](const Vec3 &p) {
        for (const auto &room : s.rooms) {
            if (room.strictly_contains(p)) {
                return true;
            }
        }
        return false;
    };
    require(inside(s.tx), "transmitter lies outside every room");
    require(s.rx.size() == static_cast<std::size_t>(s.rx.rows) * s.rx.cols && !s.rx.antennas.empty(),
            "antenna count must equal rows x cols");
    for (std::size_t i = 0; i < s.rx.size(); ++i) {
        require(inside(s.rx.antennas[i]), "antenna " + std::to_string(i) + " lies outside every room");
    }
}

}  // namespace pwe
