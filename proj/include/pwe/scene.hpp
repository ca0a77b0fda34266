#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "pwe/geometry.hpp"

namespace pwe {

/// A scene that cannot be built or cannot route anything.
class SceneError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Axis-aligned room volume, used to check that tx/rx sit inside a room.
struct Box {
    Vec3 lo;
    Vec3 hi;

    bool strictly_contains(const Vec3 &p) const {
        return p.x > lo.x && p.x < hi.x && p.y > lo.y && p.y < hi.y && p.z > lo.z && p.z < hi.z;
    }
};

struct Scene {
    std::vector<WallPlane> walls;  // ids equal their index
    std::vector<Opening> openings;
    std::vector<RisUnit> ris_units;  // ids equal their index
    std::vector<Box> rooms;
    Vec3 tx;
    AntennaArray rx;
};

/// Geometry of the two-room environment. Room 1 (transmitter) spans
/// x in [0, room_length]; a divider of `wall_thickness` (default: a shared
/// zero-thickness wall) separates it from room 2 (receiver). Both rooms share
/// width (y) and height (z).
struct SceneParams {
    double room_length = 5.0;
    double room_width = 5.0;
    double room_height = 3.0;
    double wall_thickness = 0.0;
    double door_width = 1.2;   // centered along y
    double door_height = 2.2;  // from the floor up
    Vec3 tx_position{0.5, 2.5, 1.5};
    Vec3 rx_center{7.5, 2.5, 1.5};
    Vec3 rx_boresight{0.0, 0.0, 1.0};
    double rx_spacing = 0.05;
    double ris_margin = 0.0;
};

/// Builds the two-room scene with RIS side `d_r` and an m_side x m_side array.
/// Receiver-room walls get the lowest ids so a ray cast from inside room 2
/// meets one of them first. Tiled: the four side walls of each room plus the
/// receiver-room ceiling.
Scene make_two_room_scene(const SceneParams &params, double d_r, int m_side);

/// Throws SceneError describing the first violated scene invariant.
void validate_scene(const Scene &scene);

}  // namespace pwe
