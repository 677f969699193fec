#pragma once

#include "firelik/likelihood.hpp"
#include "firelik/spread.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <vector>

namespace firelik {

enum class SpreadModelKind { cone, lattice };

/// Forward model selector for the search: the analytic cone or the lattice
/// solver. The cone uses ros.r0 as its (isotropic) rate of spread.
template <class Scalar>
struct ForwardModel {
    SpreadModelKind kind = SpreadModelKind::cone;
    RosParams<Scalar> ros;

    ScalarField<Scalar> run(const IgnitionCandidate<Scalar>& ign,
                            const GridSpec<Scalar>& grid) const {
        if (kind == SpreadModelKind::cone) return cone_arrival(ign, ros.r0, grid);
        return solve_arrival(ign, ros, grid);
    }
};

/// Space-time grid of ignition hypotheses; candidates are the Cartesian
/// product points x times.
template <class Scalar>
struct CandidateGrid {
    std::vector<Vec2<Scalar>> points;
    std::vector<Scalar> times;

    std::size_t size() const { return points.size() * times.size(); }
};

template <class Scalar>
struct SurfaceSample {
    Vec2<Scalar> point;
    Scalar t0;
    Scalar loglik;
};

template <class Scalar>
struct SearchResult {
    IgnitionCandidate<Scalar> best;
    Scalar best_loglik = -std::numeric_limits<Scalar>::infinity();
    std::vector<SurfaceSample<Scalar>> surface;  // every evaluated candidate
    long n_evaluated = 0;
};

namespace detail {

// earliest time first, then lexicographic (x, then y)
template <class Scalar>
bool candidate_beats(const SurfaceSample<Scalar>& a, const SurfaceSample<Scalar>& b) {
    if (a.loglik != b.loglik) return a.loglik > b.loglik;
    if (a.t0 != b.t0) return a.t0 < b.t0;
    if (a.point.x() != b.point.x()) return a.point.x() < b.point.x();
    return a.point.y() < b.point.y();
}

}  // namespace detail

/// Evaluate the summed scene log-likelihood of every candidate ignition and
/// return the argmax with a deterministic tie-break plus the full surface.
/// Candidates whose forward run cannot cover some pixel score -inf.
template <class Scalar>
SearchResult<Scalar> grid_search(const CandidateGrid<Scalar>& cands,
                                 const std::vector<DetectionScene<Scalar>>& scenes,
                                 const ForwardModel<Scalar>& model,
                                 const LikelihoodParams<Scalar>& lparams,
                                 const GridSpec<Scalar>& grid, unsigned workers = 0) {
    if (cands.points.empty() || cands.times.empty()) {
        throw std::invalid_argument("candidate grid is empty");
    }
    for (const auto& pt : cands.points) {
        if (!grid.contains(pt)) {
            std::ostringstream os;
            os << "candidate point (" << pt.x() << ", " << pt.y() << ") outside grid domain";
            throw std::out_of_range(os.str());
        }
    }
    Scalar total_confidence = 0;
    for (const auto& scene : scenes) {
        for (const auto& px : scene.pixels) total_confidence += px.confidence;
    }
    if (!(total_confidence > Scalar(0))) {
        throw std::invalid_argument("scenes carry no confidence; nothing to fit");
    }

    const std::size_t n = cands.size();
    const std::size_t n_points = cands.points.size();
    SearchResult<Scalar> result;
    result.surface.resize(n);

    const auto evaluate = [&](std::size_t c) {
        const std::size_t it = c / n_points;
        const std::size_t ip = c % n_points;
        SurfaceSample<Scalar>& out = result.surface[c];
        out.point = cands.points[ip];
        out.t0 = cands.times[it];
        const IgnitionCandidate<Scalar> ign{out.point, out.t0};
        try {
            const ScalarField<Scalar> arrival = model.run(ign, grid);
            CompensatedSum<Scalar> ll;
            for (const auto& scene : scenes) {
                ll.add(scene_log_likelihood(scene, arrival, lparams));
            }
            out.loglik = ll.value();
        } catch (const CoverageError&) {
            // this ignition cannot explain an out-of-domain pixel
            out.loglik = -std::numeric_limits<Scalar>::infinity();
        }
    };

    unsigned n_workers = workers != 0 ? workers : std::thread::hardware_concurrency();
    n_workers = std::max(1u, std::min<unsigned>(n_workers, unsigned(n)));
    if (n_workers == 1) {
        for (std::size_t c = 0; c < n; ++c) evaluate(c);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        pool.reserve(n_workers);
        for (unsigned w = 0; w < n_workers; ++w) {
            pool.emplace_back([&] {
                for (std::size_t c = next.fetch_add(1); c < n; c = next.fetch_add(1)) {
                    evaluate(c);
                }
            });
        }
        for (auto& th : pool) th.join();
    }

    std::size_t best_i = 0;
    for (std::size_t c = 1; c < n; ++c) {
        if (detail::candidate_beats(result.surface[c], result.surface[best_i])) best_i = c;
    }
    result.best = IgnitionCandidate<Scalar>{result.surface[best_i].point,
                                            result.surface[best_i].t0};
    result.best_loglik = result.surface[best_i].loglik;
    result.n_evaluated = long(n);
    return result;
}

/// The fixed-ignition-time slice of a search surface, for contour plots.
template <class Scalar>
std::vector<SurfaceSample<Scalar>> surface_slice(const SearchResult<Scalar>& result,
                                                 Scalar t0) {
    std::vector<SurfaceSample<Scalar>> slice;
    std::vector<Scalar> available;
    for (const auto& s : result.surface) {
        if (s.t0 == t0) {
            slice.push_back(s);
        } else if (std::find(available.begin(), available.end(), s.t0) == available.end()) {
            available.push_back(s.t0);
        }
    }
    if (slice.empty()) {
        std::ostringstream os;
        os << "no candidates at ignition time " << t0 << "; available times:";
        for (const auto& t : available) os << " " << t;
        throw std::invalid_argument(os.str());
    }
    return slice;
}

using ForwardModeld = ForwardModel<double>;
using CandidateGridd = CandidateGrid<double>;
using SurfaceSampled = SurfaceSample<double>;
using SearchResultd = SearchResult<double>;

}  // namespace firelik
