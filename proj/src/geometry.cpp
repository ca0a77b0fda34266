#include "pwe/geometry.hpp"

#include <algorithm>
#include <tuple>

namespace pwe {

std::optional<double> ray_wall_scale(const Vec3 &ant, const Vec3 &doa, const WallPlane &wall) {
    const double denom = dot(doa, wall.n);
    if (std::abs(denom) < kParallelTol) {
        return std::nullopt;
    }
    const double d = dot(wall.p0 - ant, wall.n) / denom;
    if (d <= 0.0) {
        return std::nullopt;
    }
    return d;
}

namespace {

bool lex_less(const Vec3 &a, const Vec3 &b) { return std::tie(a.x, a.y, a.z) < std::tie(b.x, b.y, b.z); }

bool in_opening(const WallPlane &wall, const Vec3 &q, std::span<const Opening> openings) {
    const double u = wall.u_of(q);
    const double v = wall.v_of(q);
    return std::any_of(openings.begin(), openings.end(),
                       [&](const Opening &o) { return o.wall_id == wall.id && o.contains(u, v); });
}

}  // namespace

std::optional<WallHit> ray_wall_point(const Vec3 &ant, const Vec3 &doa, std::span<const WallPlane> walls) {
    for (const auto &wall : walls) {
        const auto d = ray_wall_scale(ant, doa, wall);
        if (!d) {
            continue;
        }
        const Vec3 p = ant + *d * doa;
        if (wall.contains(p)) {
            return WallHit{p, wall.id};
        }
    }
    return std::nullopt;
}

bool segment_clear(const Vec3 &a_in, const Vec3 &b_in, std::span<const WallPlane> walls,
                   std::span<const Opening> openings) {
    // Fixed endpoint order makes the predicate exactly symmetric.
    const bool swap = lex_less(b_in, a_in);
    const Vec3 &a = swap ? b_in : a_in;
    const Vec3 &b = swap ? a_in : b_in;

    for (const auto &wall : walls) {
        const double da = wall.signed_distance(a);
        const double db = wall.signed_distance(b);
        if ((da > 0.0 && db > 0.0) || (da < 0.0 && db < 0.0) || da == db) {
            continue;
        }
        const double t = da / (da - db);
        const Vec3 q = a + t * (b - a);
        if (distance(q, a) <= kLengthTol || distance(q, b) <= kLengthTol) {
            continue;
        }
        if (!wall.contains(q)) {
            continue;
        }
        if (!in_opening(wall, q, openings)) {
            return false;
        }
    }
    return true;
}

std::vector<RisUnit> tile_wall(const WallPlane &wall, double d_r, double margin, std::span<const Opening> openings,
                               int first_id) {
    std::vector<RisUnit> units;
    if (!(d_r > 0.0) || margin < 0.0) {
        return units;
    }
    const auto fit = [&](double half_extent) {
        const double usable = 2.0 * half_extent - 2.0 * margin;
        return usable <= 0.0 ? 0 : static_cast<int>(std::floor(usable / d_r + 1e-9));
    };
    const int n_u = fit(wall.u_extent);
    const int n_v = fit(wall.v_extent);
    const double half = 0.5 * d_r;

    int next_id = first_id;
    for (int row = 0; row < n_v; ++row) {
        const double vc = (row - 0.5 * (n_v - 1)) * d_r;
        for (int col = 0; col < n_u; ++col) {
            const double uc = (col - 0.5 * (n_u - 1)) * d_r;
            const bool blocked = std::any_of(openings.begin(), openings.end(), [&](const Opening &o) {
                return o.wall_id == wall.id && uc + half > o.u_min + kLengthTol && uc - half < o.u_max - kLengthTol &&
                       vc + half > o.v_min + kLengthTol && vc - half < o.v_max - kLengthTol;
            });
            if (blocked) {
                continue;
            }
            units.push_back(RisUnit{next_id++, wall.id, wall.point_at(uc, vc), wall.n, d_r, RisMode::Absorption});
        }
    }
    return units;
}

Vec3 any_orthogonal(const Vec3 &n) {
    const double ax = std::abs(n.x);
    const double ay = std::abs(n.y);
    const double az = std::abs(n.z);
    Vec3 axis{0.0, 0.0, 1.0};
    if (ax <= ay && ax <= az) {
        axis = {1.0, 0.0, 0.0};
    } else if (ay <= az) {
        axis = {0.0, 1.0, 0.0};
    }
    return normalized(cross(n, axis));
}

AntennaArray make_antenna_array(const Vec3 &center, const Vec3 &boresight, int rows, int cols, double spacing) {
    AntennaArray array;
    array.rows = rows;
    array.cols = cols;
    array.spacing = spacing;
    array.boresight = normalized(boresight);
    const Vec3 u = any_orthogonal(array.boresight);
    const Vec3 v = cross(array.boresight, u);
    array.antennas.reserve(static_cast<std::size_t>(rows) * cols);
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            const double du = (c - 0.5 * (cols - 1)) * spacing;
            const double dv = (r - 0.5 * (rows - 1)) * spacing;
            array.antennas.push_back(center + du * u + dv * v);
        }
    }
    return array;
}

}  // namespace pwe
