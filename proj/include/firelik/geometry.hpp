#pragma once

#include <Eigen/Core>

#include <cmath>
#include <cstddef>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <type_traits>

namespace firelik {

template <class Scalar>
using Vec2 = Eigen::Matrix<Scalar, 2, 1>;

template <class Scalar>
using ArrayX = Eigen::Array<Scalar, Eigen::Dynamic, 1>;

struct GridIndex {
    int ix = 0;
    int iy = 0;

    friend bool operator==(const GridIndex& a, const GridIndex& b) {
        return a.ix == b.ix && a.iy == b.iy;
    }
};

/// Uniform rectangular grid of nodes. Node (ix, iy) sits at
/// origin + (ix*dx, iy*dy); values indexed x-fastest (flat = iy*nx + ix).
template <class Scalar>
struct GridSpec {
    static_assert(std::is_floating_point_v<Scalar>);

    int nx = 2;
    int ny = 2;
    Scalar dx = Scalar(1);
    Scalar dy = Scalar(1);
    Vec2<Scalar> origin = Vec2<Scalar>::Zero();

    GridSpec() = default;

    GridSpec(int nx_, int ny_, Scalar dx_, Scalar dy_,
             const Vec2<Scalar>& origin_ = Vec2<Scalar>::Zero())
        : nx(nx_), ny(ny_), dx(dx_), dy(dy_), origin(origin_) {
        if (nx < 2 || ny < 2) {
            throw std::invalid_argument("grid needs at least 2 nodes per axis, got nx=" +
                                        std::to_string(nx) + " ny=" + std::to_string(ny));
        }
        if (!(dx > Scalar(0)) || !(dy > Scalar(0))) {
            throw std::invalid_argument("grid spacing must be positive, got dx=" +
                                        std::to_string(double(dx)) + " dy=" +
                                        std::to_string(double(dy)));
        }
    }

    std::size_t size() const { return std::size_t(nx) * std::size_t(ny); }

    std::size_t flat(int ix, int iy) const {
        return std::size_t(iy) * std::size_t(nx) + std::size_t(ix);
    }
    std::size_t flat(const GridIndex& i) const { return flat(i.ix, i.iy); }

    bool valid(const GridIndex& i) const {
        return i.ix >= 0 && i.ix < nx && i.iy >= 0 && i.iy < ny;
    }

    Scalar max_x() const { return origin.x() + Scalar(nx - 1) * dx; }
    Scalar max_y() const { return origin.y() + Scalar(ny - 1) * dy; }

    bool contains(const Vec2<Scalar>& p) const {
        return p.x() >= origin.x() && p.x() <= max_x() &&
               p.y() >= origin.y() && p.y() <= max_y();
    }

    /// Nearest grid node to a world point; the point must lie inside the
    /// grid bounding box (inclusive).
    GridIndex index_of(const Vec2<Scalar>& p) const {
        if (p.x() < origin.x() || p.x() > max_x()) {
            std::ostringstream os;
            os << "point x=" << p.x() << " outside grid x-range [" << origin.x()
               << ", " << max_x() << "]";
            throw std::out_of_range(os.str());
        }
        if (p.y() < origin.y() || p.y() > max_y()) {
            std::ostringstream os;
            os << "point y=" << p.y() << " outside grid y-range [" << origin.y()
               << ", " << max_y() << "]";
            throw std::out_of_range(os.str());
        }
        GridIndex i;
        i.ix = int(std::lround(double((p.x() - origin.x()) / dx)));
        i.iy = int(std::lround(double((p.y() - origin.y()) / dy)));
        // rounding can land one past the end when p sits exactly on the far edge
        i.ix = std::min(std::max(i.ix, 0), nx - 1);
        i.iy = std::min(std::max(i.iy, 0), ny - 1);
        return i;
    }

    Vec2<Scalar> world_of(const GridIndex& i) const {
        if (!valid(i)) {
            std::ostringstream os;
            os << "grid index (" << i.ix << ", " << i.iy << ") outside [0, " << nx - 1
               << "] x [0, " << ny - 1 << "]";
            throw std::out_of_range(os.str());
        }
        return origin + Vec2<Scalar>(Scalar(i.ix) * dx, Scalar(i.iy) * dy);
    }

    friend bool operator==(const GridSpec& a, const GridSpec& b) {
        return a.nx == b.nx && a.ny == b.ny && a.dx == b.dx && a.dy == b.dy &&
               a.origin == b.origin;
    }
};

/// A real value per grid node. Arrival-time fields use +inf for ground the
/// fire never reaches; all finite entries are then >= the ignition time.
template <class Scalar>
struct ScalarField {
    GridSpec<Scalar> spec;
    ArrayX<Scalar> values;

    ScalarField() = default;

    ScalarField(const GridSpec<Scalar>& spec_, ArrayX<Scalar> values_)
        : spec(spec_), values(std::move(values_)) {
        if (std::size_t(values.size()) != spec.size()) {
            throw std::invalid_argument("field has " + std::to_string(values.size()) +
                                        " values for a grid of " +
                                        std::to_string(spec.size()) + " nodes");
        }
    }

    static ScalarField constant(const GridSpec<Scalar>& spec, Scalar v) {
        return ScalarField(spec, ArrayX<Scalar>::Constant(Eigen::Index(spec.size()), v));
    }

    Scalar& at(int ix, int iy) { return values[Eigen::Index(spec.flat(ix, iy))]; }
    Scalar at(int ix, int iy) const { return values[Eigen::Index(spec.flat(ix, iy))]; }
    Scalar& at(const GridIndex& i) { return at(i.ix, i.iy); }
    Scalar at(const GridIndex& i) const { return at(i.ix, i.iy); }
};

template <class Scalar>
constexpr Scalar unburned() {
    return std::numeric_limits<Scalar>::infinity();
}

using GridSpecd = GridSpec<double>;
using ScalarFieldd = ScalarField<double>;
using Vec2d = Vec2<double>;

}  // namespace firelik
