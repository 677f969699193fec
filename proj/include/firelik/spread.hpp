#pragma once

#include "firelik/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <queue>
#include <stdexcept>
#include <utility>
#include <vector>

namespace firelik {

/// A hypothesized fire origin: where and when.
template <class Scalar>
struct IgnitionCandidate {
    Vec2<Scalar> point = Vec2<Scalar>::Zero();  // [m]
    Scalar t0 = Scalar(0);                      // ignition time [s]
};

/// Rate-of-spread model for the lattice solver: base rate with a tailwind
/// boost and an exponential slope factor. Effective speed is clamped to
/// [0.01, 100] * r0.
template <class Scalar>
struct RosParams {
    Scalar r0 = Scalar(1);                        // base rate of spread [m/s]
    Vec2<Scalar> wind = Vec2<Scalar>::Zero();     // constant wind [m/s]
    Scalar wind_coeff = Scalar(0);
    Scalar slope_coeff = Scalar(0);
    std::optional<ScalarField<Scalar>> terrain;   // height z [m]

    Scalar r_min() const { return Scalar(0.01) * r0; }
    Scalar r_max() const { return Scalar(100) * r0; }
};

/// Radially symmetric arrival time: T = |x - ignition| / R + t0.
template <class Scalar>
ScalarField<Scalar> cone_arrival(const IgnitionCandidate<Scalar>& ign, Scalar ros,
                                 const GridSpec<Scalar>& grid) {
    if (!(ros > Scalar(0))) {
        throw std::invalid_argument("rate of spread must be positive, got " +
                                    std::to_string(double(ros)));
    }
    if (!grid.contains(ign.point)) {
        throw std::out_of_range("ignition point outside grid domain");
    }
    ArrayX<Scalar> xs(grid.nx);
    for (int ix = 0; ix < grid.nx; ++ix) xs[ix] = grid.origin.x() + Scalar(ix) * grid.dx;
    const ArrayX<Scalar> rx2 = (xs - ign.point.x()).square();

    ArrayX<Scalar> values(Eigen::Index(grid.size()));
    for (int iy = 0; iy < grid.ny; ++iy) {
        const Scalar ry = grid.origin.y() + Scalar(iy) * grid.dy - ign.point.y();
        values.segment(Eigen::Index(grid.flat(0, iy)), grid.nx) =
            (rx2 + ry * ry).sqrt() / ros + ign.t0;
    }
    return ScalarField<Scalar>(grid, std::move(values));
}

/// Terrain height gradient at a node by central differences (one-sided at
/// the domain edge).
template <class Scalar>
Vec2<Scalar> terrain_gradient(const ScalarField<Scalar>& z, const GridIndex& i) {
    const GridSpec<Scalar>& g = z.spec;
    const int xm = std::max(i.ix - 1, 0), xp = std::min(i.ix + 1, g.nx - 1);
    const int ym = std::max(i.iy - 1, 0), yp = std::min(i.iy + 1, g.ny - 1);
    Vec2<Scalar> grad;
    grad.x() = (z.at(xp, i.iy) - z.at(xm, i.iy)) / (Scalar(xp - xm) * g.dx);
    grad.y() = (z.at(i.ix, yp) - z.at(i.ix, ym)) / (Scalar(yp - ym) * g.dy);
    return grad;
}

/// Directional rate of spread at a world point. `u` must be a unit vector.
template <class Scalar>
Scalar ros(const Vec2<Scalar>& x, const Vec2<Scalar>& u, const RosParams<Scalar>& p) {
    if (std::abs(double(u.norm()) - 1.0) > 1e-9) {
        throw std::invalid_argument("direction must be a unit vector");
    }
    // wind term is made dimensionless against a 1 m/s reference speed;
    // headwinds are floored at zero rather than slowing the fire
    Scalar speed = p.r0 * (Scalar(1) + p.wind_coeff * std::max(Scalar(0), p.wind.dot(u)));
    if (p.terrain) {
        const Vec2<Scalar> grad = terrain_gradient(*p.terrain, p.terrain->spec.index_of(x));
        speed *= std::exp(p.slope_coeff * grad.dot(u));
    }
    return std::clamp(speed, p.r_min(), p.r_max());
}

namespace detail {

struct LatticeMove {
    int dx_i;
    int dy_i;
};

// 8 axis/diagonal moves plus 8 knight moves
inline constexpr LatticeMove kLatticeMoves[16] = {
    {1, 0},  {-1, 0}, {0, 1},  {0, -1}, {1, 1},  {1, -1}, {-1, 1}, {-1, -1},
    {1, 2},  {2, 1},  {-1, 2}, {-2, 1}, {1, -2}, {2, -1}, {-1, -2}, {-2, -1},
};

}  // namespace detail

/// Single-source shortest arrival time over the 16-neighbor lattice. Edge
/// traversal time is edge length over the directional speed sampled at the
/// edge midpoint. The node nearest the ignition point gets exactly t0.
template <class Scalar>
ScalarField<Scalar> solve_arrival(const IgnitionCandidate<Scalar>& ign,
                                  const RosParams<Scalar>& p, const GridSpec<Scalar>& grid) {
    const GridIndex start = grid.index_of(ign.point);  // throws when out of domain

    struct Edge {
        Scalar len;
        Vec2<Scalar> dir;
        Vec2<Scalar> half_step;  // node-to-midpoint offset
    };
    Edge edges[16];
    for (int k = 0; k < 16; ++k) {
        const auto& mv = detail::kLatticeMoves[k];
        const Vec2<Scalar> step(Scalar(mv.dx_i) * grid.dx, Scalar(mv.dy_i) * grid.dy);
        edges[k].len = step.norm();
        edges[k].dir = step / edges[k].len;
        edges[k].half_step = step / Scalar(2);
    }

    ArrayX<Scalar> arrival =
        ArrayX<Scalar>::Constant(Eigen::Index(grid.size()), unburned<Scalar>());
    arrival[Eigen::Index(grid.flat(start))] = ign.t0;

    using Entry = std::pair<Scalar, std::size_t>;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<Entry>> queue;
    queue.emplace(ign.t0, grid.flat(start));

    while (!queue.empty()) {
        const auto [t, flat] = queue.top();
        queue.pop();
        if (t > arrival[Eigen::Index(flat)]) continue;  // stale entry
        const int ix = int(flat % std::size_t(grid.nx));
        const int iy = int(flat / std::size_t(grid.nx));
        const Vec2<Scalar> here = grid.world_of({ix, iy});
        for (int k = 0; k < 16; ++k) {
            const auto& mv = detail::kLatticeMoves[k];
            const int jx = ix + mv.dx_i;
            const int jy = iy + mv.dy_i;
            if (jx < 0 || jx >= grid.nx || jy < 0 || jy >= grid.ny) continue;
            const Scalar speed = ros<Scalar>(here + edges[k].half_step, edges[k].dir, p);
            const Scalar cand = t + edges[k].len / speed;
            const std::size_t jflat = grid.flat(jx, jy);
            if (cand < arrival[Eigen::Index(jflat)]) {
                arrival[Eigen::Index(jflat)] = cand;
                queue.emplace(cand, jflat);
            }
        }
    }
    return ScalarField<Scalar>(grid, std::move(arrival));
}

/// Smooth compactly supported dome: z = height * max(0, 1 - (r/radius)^2)^2.
template <class Scalar>
ScalarField<Scalar> dome_terrain(const GridSpec<Scalar>& grid, const Vec2<Scalar>& center,
                                 Scalar height, Scalar radius) {
    if (!(radius > Scalar(0))) {
        throw std::invalid_argument("dome radius must be positive");
    }
    ArrayX<Scalar> xs(grid.nx);
    for (int ix = 0; ix < grid.nx; ++ix) xs[ix] = grid.origin.x() + Scalar(ix) * grid.dx;
    const ArrayX<Scalar> rx2 = (xs - center.x()).square();

    ArrayX<Scalar> values(Eigen::Index(grid.size()));
    const Scalar inv_r2 = Scalar(1) / (radius * radius);
    for (int iy = 0; iy < grid.ny; ++iy) {
        const Scalar ry = grid.origin.y() + Scalar(iy) * grid.dy - center.y();
        values.segment(Eigen::Index(grid.flat(0, iy)), grid.nx) =
            height * ((Scalar(1) - (rx2 + ry * ry) * inv_r2).max(Scalar(0))).square();
    }
    return ScalarField<Scalar>(grid, std::move(values));
}

using IgnitionCandidated = IgnitionCandidate<double>;
using RosParamsd = RosParams<double>;

}  // namespace firelik
