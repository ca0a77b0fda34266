#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace pwe {

/// Tolerance (meters) for wall/opening membership and endpoint-touching tests.
inline constexpr double kLengthTol = 1e-9;
/// |doa . n| below this counts as a ray parallel to a plane.
inline constexpr double kParallelTol = 1e-12;

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    constexpr Vec3 &operator+=(const Vec3 &o) { x += o.x; y += o.y; z += o.z; return *this; }
    constexpr Vec3 &operator-=(const Vec3 &o) { x -= o.x; y -= o.y; z -= o.z; return *this; }
    constexpr Vec3 &operator*=(double s) { x *= s; y *= s; z *= s; return *this; }

    friend constexpr Vec3 operator+(Vec3 a, const Vec3 &b) { return a += b; }
    friend constexpr Vec3 operator-(Vec3 a, const Vec3 &b) { return a -= b; }
    friend constexpr Vec3 operator*(Vec3 a, double s) { return a *= s; }
    friend constexpr Vec3 operator*(double s, Vec3 a) { return a *= s; }
    friend constexpr Vec3 operator-(const Vec3 &a) { return {-a.x, -a.y, -a.z}; }
    friend constexpr bool operator==(const Vec3 &, const Vec3 &) = default;
};

constexpr double dot(const Vec3 &a, const Vec3 &b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
constexpr Vec3 cross(const Vec3 &a, const Vec3 &b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double norm(const Vec3 &a) { return std::sqrt(dot(a, a)); }
inline double distance(const Vec3 &a, const Vec3 &b) { return norm(a - b); }
constexpr double distance_sq(const Vec3 &a, const Vec3 &b) { return dot(a - b, a - b); }
inline Vec3 normalized(const Vec3 &a) { return a * (1.0 / norm(a)); }
inline bool is_unit(const Vec3 &a, double tol = 1e-9) { return std::abs(norm(a) - 1.0) <= tol; }

/// Bounded rectangular wall. `p0` is the rectangle center; the wall spans
/// p0 + u*u_axis + v*v_axis for |u| <= u_extent, |v| <= v_extent.
/// `n` points into the room the wall bounds.
struct WallPlane {
    int id = 0;
    Vec3 p0;
    Vec3 n;
    Vec3 u_axis;
    Vec3 v_axis;
    double u_extent = 0.0;
    double v_extent = 0.0;

    /// In-plane coordinates of `p` relative to the wall center.
    double u_of(const Vec3 &p) const { return dot(p - p0, u_axis); }
    double v_of(const Vec3 &p) const { return dot(p - p0, v_axis); }
    double signed_distance(const Vec3 &p) const { return dot(p - p0, n); }

    /// Membership of an on-plane point in the wall rectangle (inclusive, kLengthTol slack).
    bool contains(const Vec3 &p) const {
        return std::abs(u_of(p)) <= u_extent + kLengthTol && std::abs(v_of(p)) <= v_extent + kLengthTol;
    }
    Vec3 point_at(double u, double v) const { return p0 + u * u_axis + v * v_axis; }
};

/// Rectangular aperture (doorway) cut into a wall, in that wall's in-plane coordinates.
struct Opening {
    int wall_id = 0;
    double u_min = 0.0;
    double u_max = 0.0;
    double v_min = 0.0;
    double v_max = 0.0;

    bool contains(double u, double v) const {
        return u >= u_min - kLengthTol && u <= u_max + kLengthTol && v >= v_min - kLengthTol &&
               v <= v_max + kLengthTol;
    }
};

enum class RisMode { Diffusion, BeamSteering, Absorption };

struct RisUnit {
    int id = 0;
    int wall_id = 0;
    Vec3 center;
    Vec3 normal;
    double side = 0.0;
    RisMode mode = RisMode::Absorption;
};

struct AntennaArray {
    std::vector<Vec3> antennas;  // row-major
    int rows = 0;
    int cols = 0;
    double spacing = 0.0;
    Vec3 boresight{0.0, 0.0, 1.0};

    std::size_t size() const { return antennas.size(); }
};

struct WallHit {
    Vec3 point;
    int wall_id = 0;
};

/// Scale factor d such that ant + d*doa lies on the wall's (unbounded) plane.
/// Empty when the ray is parallel to the plane or the plane is behind the antenna.
std::optional<double> ray_wall_scale(const Vec3 &ant, const Vec3 &doa, const WallPlane &wall);

/// First wall (in the given order) whose rectangle contains the ray's plane
/// intersection. Openings are not consulted; a doorway still counts as wall.
std::optional<WallHit> ray_wall_point(const Vec3 &ant, const Vec3 &doa, std::span<const WallPlane> walls);

/// True when the open segment (a, b) crosses no wall rectangle outside a
/// declared opening. Crossings within kLengthTol of an endpoint are ignored.
bool segment_clear(const Vec3 &a, const Vec3 &b, std::span<const WallPlane> walls,
                   std::span<const Opening> openings);

/// Regular grid of d_r x d_r units centered on the wall with at least `margin`
/// to every edge, omitting units that overlap an opening on this wall.
/// Ids start at `first_id` and ascend row-major (rows along v, columns along u).
std::vector<RisUnit> tile_wall(const WallPlane &wall, double d_r, double margin,
                               std::span<const Opening> openings = {}, int first_id = 0);

/// rows x cols planar array centered at `center`, perpendicular to `boresight`.
AntennaArray make_antenna_array(const Vec3 &center, const Vec3 &boresight, int rows, int cols,
                                double spacing);

/// Unit vector orthogonal to `n` (deterministic choice).
Vec3 any_orthogonal(const Vec3 &n);

}  // namespace pwe
