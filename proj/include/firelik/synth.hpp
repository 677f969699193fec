#pragma once

#include "firelik/detection.hpp"
#include "firelik/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <unordered_map>
#include <utility>
#include <vector>

namespace firelik {

/// How to lay synthetic detection pixels on a fire perimeter.
template <class Scalar>
struct PerimeterPlacement {
    Scalar level_time;             // perimeter = level set {T = level_time} [s]
    int n_pixels = 8;
    Scalar scan_time;              // imaging time, >= level_time [s]
    Scalar confidence = Scalar(1);
};

template <class Scalar>
struct ContourPolyline {
    std::vector<Vec2<Scalar>> points;
    bool closed = false;

    Scalar length() const {
        Scalar len = 0;
        for (std::size_t i = 1; i < points.size(); ++i) {
            len += (points[i] - points[i - 1]).norm();
        }
        if (closed && points.size() > 1) len += (points.front() - points.back()).norm();
        return len;
    }
};

namespace detail {

// Grid edges carry the level crossings; keying segments by edge id keeps the
// stitching independent of coordinate roundoff.
inline std::int64_t edge_id(int ix, int iy, int nx, bool vertical) {
    return 2 * (std::int64_t(iy) * nx + ix) + (vertical ? 1 : 0);
}

template <class Scalar>
Scalar crossing_fraction(Scalar a, Scalar b, Scalar level) {
    // unburned (+inf) endpoints pin the crossing at the finite node
    if (!std::isfinite(a)) return Scalar(1);
    if (!std::isfinite(b)) return Scalar(0);
    if (a == b) return Scalar(0.5);
    return std::clamp((level - a) / (b - a), Scalar(0), Scalar(1));
}

template <class Scalar>
bool lex_less(const Vec2<Scalar>& p, const Vec2<Scalar>& q) {
    if (p.x() != q.x()) return p.x() < q.x();
    return p.y() < q.y();
}

template <class Scalar>
void canonicalize(ContourPolyline<Scalar>& poly) {
    auto& pts = poly.points;
    if (pts.size() < 2) return;
    if (poly.closed) {
        std::size_t m = 0;
        for (std::size_t i = 1; i < pts.size(); ++i) {
            if (lex_less(pts[i], pts[m])) m = i;
        }
        std::rotate(pts.begin(), pts.begin() + long(m), pts.end());
        // orient toward the lex-smaller neighbor of the start
        if (lex_less(pts.back(), pts[1])) {
            std::reverse(pts.begin() + 1, pts.end());
        }
    } else {
        if (lex_less(pts.back(), pts.front())) std::reverse(pts.begin(), pts.end());
    }
}

}  // namespace detail

/// Level-set contours {T = level} by marching squares with linear
/// interpolation. Output polylines are canonically ordered: starting vertex
/// is the lexicographic minimum, direction toward its smaller neighbor.
template <class Scalar>
std::vector<ContourPolyline<Scalar>> extract_contours(const ScalarField<Scalar>& field,
                                                      Scalar level) {
    const GridSpec<Scalar>& g = field.spec;
    const auto inside = [&](Scalar v) { return v <= level; };
    const auto node_x = [&](int ix) { return g.origin.x() + Scalar(ix) * g.dx; };
    const auto node_y = [&](int iy) { return g.origin.y() + Scalar(iy) * g.dy; };

    std::unordered_map<std::int64_t, Vec2<Scalar>> crossing;
    for (int iy = 0; iy < g.ny; ++iy) {
        for (int ix = 0; ix + 1 < g.nx; ++ix) {
            const Scalar a = field.at(ix, iy), b = field.at(ix + 1, iy);
            if (inside(a) == inside(b)) continue;
            const Scalar t = detail::crossing_fraction(a, b, level);
            crossing.emplace(detail::edge_id(ix, iy, g.nx, false),
                             Vec2<Scalar>(node_x(ix) + t * g.dx, node_y(iy)));
        }
    }
    for (int iy = 0; iy + 1 < g.ny; ++iy) {
        for (int ix = 0; ix < g.nx; ++ix) {
            const Scalar a = field.at(ix, iy), b = field.at(ix, iy + 1);
            if (inside(a) == inside(b)) continue;
            const Scalar t = detail::crossing_fraction(a, b, level);
            crossing.emplace(detail::edge_id(ix, iy, g.nx, true),
                             Vec2<Scalar>(node_x(ix), node_y(iy) + t * g.dy));
        }
    }

    // per-cell segments as unordered pairs of edge ids
    std::vector<std::pair<std::int64_t, std::int64_t>> segments;
    for (int iy = 0; iy + 1 < g.ny; ++iy) {
        for (int ix = 0; ix + 1 < g.nx; ++ix) {
            const bool b0 = inside(field.at(ix, iy));          // bottom-left
            const bool b1 = inside(field.at(ix + 1, iy));      // bottom-right
            const bool b2 = inside(field.at(ix + 1, iy + 1));  // top-right
            const bool b3 = inside(field.at(ix, iy + 1));      // top-left
            const int code = int(b0) | int(b1) << 1 | int(b2) << 2 | int(b3) << 3;
            if (code == 0 || code == 15) continue;

            const std::int64_t bottom = detail::edge_id(ix, iy, g.nx, false);
            const std::int64_t top = detail::edge_id(ix, iy + 1, g.nx, false);
            const std::int64_t left = detail::edge_id(ix, iy, g.nx, true);
            const std::int64_t right = detail::edge_id(ix + 1, iy, g.nx, true);

            switch (code) {
                case 1: case 14: segments.emplace_back(left, bottom); break;
                case 2: case 13: segments.emplace_back(bottom, right); break;
                case 3: case 12: segments.emplace_back(left, right); break;
                case 4: case 11: segments.emplace_back(right, top); break;
                case 6: case 9:  segments.emplace_back(bottom, top); break;
                case 7: case 8:  segments.emplace_back(top, left); break;
                case 5: case 10: {
                    // saddle; the cell-center average picks the connection
                    Scalar center;
                    {
                        const Scalar v0 = field.at(ix, iy), v1 = field.at(ix + 1, iy);
                        const Scalar v2 = field.at(ix + 1, iy + 1), v3 = field.at(ix, iy + 1);
                        center = std::isfinite(v0 + v1 + v2 + v3)
                                     ? (v0 + v1 + v2 + v3) / Scalar(4)
                                     : unburned<Scalar>();
                    }
                    const bool center_in = inside(center);
                    const bool join_diag = (code == 5) == center_in;
                    if (join_diag) {
                        segments.emplace_back(left, top);
                        segments.emplace_back(bottom, right);
                    } else {
                        segments.emplace_back(left, bottom);
                        segments.emplace_back(right, top);
                    }
                    break;
                }
                default: break;
            }
        }
    }

    // stitch segments into polylines via shared edge ids
    std::unordered_map<std::int64_t, std::vector<std::size_t>> at_edge;
    for (std::size_t s = 0; s < segments.size(); ++s) {
        at_edge[segments[s].first].push_back(s);
        at_edge[segments[s].second].push_back(s);
    }
    std::vector<bool> used(segments.size(), false);
    std::vector<ContourPolyline<Scalar>> polylines;
    for (std::size_t s0 = 0; s0 < segments.size(); ++s0) {
        if (used[s0]) continue;
        std::vector<std::int64_t> chain{segments[s0].first, segments[s0].second};
        used[s0] = true;
        bool closed = false;
        for (int dir = 0; dir < 2 && !closed; ++dir) {
            while (true) {
                const std::int64_t tip = dir == 0 ? chain.back() : chain.front();
                std::size_t next = segments.size();
                for (std::size_t s : at_edge[tip]) {
                    if (!used[s]) { next = s; break; }
                }
                if (next == segments.size()) break;
                used[next] = true;
                const std::int64_t other =
                    segments[next].first == tip ? segments[next].second : segments[next].first;
                if (other == (dir == 0 ? chain.front() : chain.back())) {
                    closed = true;
                    break;
                }
                if (dir == 0) chain.push_back(other);
                else chain.insert(chain.begin(), other);
            }
        }
        ContourPolyline<Scalar> poly;
        poly.closed = closed;
        poly.points.reserve(chain.size());
        for (const auto id : chain) poly.points.push_back(crossing.at(id));
        detail::canonicalize(poly);
        polylines.push_back(std::move(poly));
    }
    return polylines;
}

namespace detail {

template <class Scalar>
Vec2<Scalar> point_at_arclength(const ContourPolyline<Scalar>& poly, Scalar s) {
    const auto& pts = poly.points;
    const std::size_t n = pts.size();
    Scalar walked = 0;
    const std::size_t n_seg = poly.closed ? n : n - 1;
    for (std::size_t i = 0; i < n_seg; ++i) {
        const Vec2<Scalar>& a = pts[i];
        const Vec2<Scalar>& b = pts[(i + 1) % n];
        const Scalar len = (b - a).norm();
        if (walked + len >= s && len > Scalar(0)) {
            const Scalar t = (s - walked) / len;
            return a + t * (b - a);
        }
        walked += len;
    }
    return poly.closed ? pts.front() : pts.back();
}

}  // namespace detail

/// Synthetic detections along a fire perimeter: centers at equal arc-length
/// spacing on the longest contour component of {T = level_time}, each a d=1
/// observation at the placement's scan time.
template <class Scalar>
DetectionScene<Scalar> pixels_on_perimeter(const ScalarField<Scalar>& arrival,
                                           const PerimeterPlacement<Scalar>& pl) {
    if (pl.n_pixels < 1) {
        throw std::invalid_argument("n_pixels must be >= 1, got " +
                                    std::to_string(pl.n_pixels));
    }
    if (!(pl.scan_time >= pl.level_time)) {
        throw std::invalid_argument("scan_time must be >= level_time (pixels cannot "
                                    "observe the future perimeter)");
    }
    if (!(pl.confidence >= Scalar(0)) || !(pl.confidence <= Scalar(1))) {
        throw std::invalid_argument("confidence must lie in [0, 1]");
    }
    auto contours = extract_contours(arrival, pl.level_time);
    const ContourPolyline<Scalar>* best = nullptr;
    Scalar best_len = Scalar(0);
    for (const auto& c : contours) {
        const Scalar len = c.length();
        if (best == nullptr || len > best_len) {
            best = &c;
            best_len = len;
        }
    }
    if (best == nullptr || !(best_len > Scalar(0))) {
        throw std::invalid_argument("no perimeter at time " + std::to_string(double(pl.level_time)));
    }

    DetectionScene<Scalar> scene;
    scene.pixels.reserve(std::size_t(pl.n_pixels));
    for (int j = 0; j < pl.n_pixels; ++j) {
        Scalar s;
        if (best->closed) {
            s = best_len * Scalar(j) / Scalar(pl.n_pixels);
        } else if (pl.n_pixels == 1) {
            s = best_len / Scalar(2);
        } else {
            s = best_len * Scalar(j) / Scalar(pl.n_pixels - 1);
        }
        DetectionPixel<Scalar> px;
        px.center = detail::point_at_arclength(*best, s);
        px.detect = 1;
        px.confidence = pl.confidence;
        px.t_scan = pl.scan_time;
        scene.pixels.push_back(px);
    }
    return scene;
}

/// Draw detections from the generative model: Gaussian geolocation offset,
/// then a Bernoulli flip at the blurred point's detection probability.
/// Reproducible from the seed; offsets landing outside the grid are redrawn
/// up to 100 times and then clamped (counted in *clamped_count).
template <class Scalar>
DetectionScene<Scalar> sample_detections(const ScalarField<Scalar>& arrival,
                                         const std::vector<Vec2<Scalar>>& centers,
                                         Scalar t_scan, const LikelihoodParams<Scalar>& p,
                                         std::uint64_t seed, long* clamped_count = nullptr) {
    const GridSpec<Scalar>& g = arrival.spec;
    for (const auto& c : centers) {
        if (!g.contains(c)) {
            throw std::out_of_range("sample center outside grid domain");
        }
    }
    std::mt19937_64 rng(seed);
    std::normal_distribution<Scalar> offset(Scalar(0), p.sigma);
    long clamped = 0;

    DetectionScene<Scalar> scene;
    scene.pixels.reserve(centers.size());
    for (const auto& c : centers) {
        Vec2<Scalar> look;
        bool in = false;
        for (int attempt = 0; attempt < 100 && !in; ++attempt) {
            look = c + Vec2<Scalar>(offset(rng), offset(rng));
            in = g.contains(look);
        }
        if (!in) {
            look.x() = std::clamp(look.x(), g.origin.x(), g.max_x());
            look.y() = std::clamp(look.y(), g.origin.y(), g.max_y());
            ++clamped;
        }
        const Scalar t_arrival = arrival.at(g.index_of(look));
        const Scalar prob = detect_prob(heat_fraction(t_scan, t_arrival, p.c_decay), p);
        std::bernoulli_distribution flip{double(prob)};

        DetectionPixel<Scalar> px;
        px.center = c;
        px.detect = flip(rng) ? 1 : 0;
        px.confidence = Scalar(1);
        px.t_scan = t_scan;
        scene.pixels.push_back(px);
    }
    if (clamped_count != nullptr) *clamped_count = clamped;
    return scene;
}

using PerimeterPlacementd = PerimeterPlacement<double>;
using ContourPolylined = ContourPolyline<double>;

}  // namespace firelik
