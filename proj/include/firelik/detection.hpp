#pragma once

#include "firelik/accum.hpp"
#include "firelik/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace firelik {

/// Pixel whose confidence-weighted likelihood term would need grid nodes
/// outside the modeled domain.
class CoverageError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Logistic constants from the false detection rate and the heat fraction at
/// 50% detection: b = ln(1/p_false - 1), a = b / f_half.
template <class Scalar>
std::pair<Scalar, Scalar> logistic_params(Scalar p_false, Scalar f_half) {
    if (!(p_false > Scalar(0)) || !(p_false < Scalar(0.5))) {
        throw std::invalid_argument("p_false must lie in (0, 0.5), got " +
                                    std::to_string(double(p_false)));
    }
    if (!(f_half > Scalar(0)) || !(f_half <= Scalar(1))) {
        throw std::invalid_argument("f_half must lie in (0, 1], got " +
                                    std::to_string(double(f_half)));
    }
    const Scalar b = std::log((Scalar(1) - p_false) / p_false);
    const Scalar a = b / f_half;
    return {a, b};
}

template <class Scalar>
struct LikelihoodParams {
    Scalar p_false;        // false detection rate, (0, 0.5)
    Scalar f_half;         // heat fraction at 50% detection, (0, 1]
    Scalar a;              // logistic slope, a = b / f_half
    Scalar b;              // logistic intercept, b = ln(1/p_false - 1)
    Scalar sigma;          // geolocation standard deviation [m]
    Scalar c_decay;        // heat decay characteristic time [s]
    Scalar kernel_radius;  // Gaussian truncation radius in units of sigma

    static LikelihoodParams make(Scalar p_false, Scalar f_half, Scalar sigma,
                                 Scalar c_decay, Scalar kernel_radius = Scalar(4)) {
        auto [a, b] = logistic_params(p_false, f_half);
        if (!(sigma > Scalar(0))) {
            throw std::invalid_argument("sigma must be positive, got " +
                                        std::to_string(double(sigma)));
        }
        if (!(c_decay > Scalar(0))) {
            throw std::invalid_argument("c_decay must be positive, got " +
                                        std::to_string(double(c_decay)));
        }
        if (!(kernel_radius >= Scalar(3))) {
            throw std::invalid_argument("kernel_radius must be >= 3, got " +
                                        std::to_string(double(kernel_radius)));
        }
        LikelihoodParams p;
        p.p_false = p_false;
        p.f_half = f_half;
        p.a = a;
        p.b = b;
        p.sigma = sigma;
        p.c_decay = c_decay;
        p.kernel_radius = kernel_radius;
        return p;
    }
};

/// One satellite pixel observation.
template <class Scalar>
struct DetectionPixel {
    Vec2<Scalar> center = Vec2<Scalar>::Zero();  // nominal look point [m]
    int detect = 0;                              // 1 fire seen, 0 clear ground
    Scalar confidence = Scalar(1);               // weight in [0,1]; 0 = missing data
    Scalar t_scan = Scalar(0);                   // imaging time [s]
};

template <class Scalar>
struct DetectionScene {
    std::vector<DetectionPixel<Scalar>> pixels;
};

/// Fraction of maximum heat flux at t_now for ground the fire reached at
/// t_arrival: 0 before arrival, exp(-(t_now - t_arrival)/c_decay) after.
template <class Scalar>
Scalar heat_fraction(Scalar t_now, Scalar t_arrival, Scalar c_decay) {
    if (t_now < t_arrival) return Scalar(0);
    return std::exp(-(t_now - t_arrival) / c_decay);
}

/// Logistic detection probability 1 / (1 + exp(-a*F + b)).
template <class Scalar>
Scalar detect_prob(Scalar heat, const LikelihoodParams<Scalar>& p) {
    // exp(b) written as (1-p_false)/p_false so the F=0 floor reproduces
    // p_false to the last bit
    const Scalar odds0 = (Scalar(1) - p.p_false) / p.p_false;
    return Scalar(1) / (Scalar(1) + odds0 * std::exp(-p.a * heat));
}

namespace detail {

// Index window covering the truncation disc around a pixel center,
// intersected with the grid. Empty windows surface as CoverageError.
template <class Scalar>
struct KernelWindow {
    int ix0, ix1, iy0, iy1;
};

template <class Scalar>
KernelWindow<Scalar> kernel_window(const GridSpec<Scalar>& g, const Vec2<Scalar>& center,
                                   Scalar radius) {
    KernelWindow<Scalar> w;
    w.ix0 = std::max(0, int(std::ceil(double((center.x() - radius - g.origin.x()) / g.dx))));
    w.ix1 = std::min(g.nx - 1,
                     int(std::floor(double((center.x() + radius - g.origin.x()) / g.dx))));
    w.iy0 = std::max(0, int(std::ceil(double((center.y() - radius - g.origin.y()) / g.dy))));
    w.iy1 = std::min(g.ny - 1,
                     int(std::floor(double((center.y() + radius - g.origin.y()) / g.dy))));
    return w;
}

}  // namespace detail

/// Probability of the pixel's detection outcome given an arrival-time field:
/// Gaussian geolocation mixture of the logistic detection probability over
/// the grid nodes within kernel_radius*sigma of the pixel center, with the
/// kernel weights normalized over that node set.
template <class Scalar>
Scalar pixel_prob(const DetectionPixel<Scalar>& px, const ScalarField<Scalar>& T,
                  const LikelihoodParams<Scalar>& p) {
    if (px.detect != 0 && px.detect != 1) {
        throw std::invalid_argument("detect flag must be 0 or 1, got " +
                                    std::to_string(px.detect));
    }
    const GridSpec<Scalar>& g = T.spec;
    const Scalar radius = p.kernel_radius * p.sigma;
    const Scalar r2max = radius * radius;
    const Scalar inv_two_sigma2 = Scalar(1) / (Scalar(2) * p.sigma * p.sigma);

    const auto w = detail::kernel_window(g, px.center, radius);
    CompensatedSum<Scalar> kernel_mass;
    CompensatedSum<Scalar> mixture;
    long n_nodes = 0;
    for (int iy = w.iy0; iy <= w.iy1; ++iy) {
        const Scalar ry = g.origin.y() + Scalar(iy) * g.dy - px.center.y();
        const Scalar ry2 = ry * ry;
        for (int ix = w.ix0; ix <= w.ix1; ++ix) {
            const Scalar rx = g.origin.x() + Scalar(ix) * g.dx - px.center.x();
            const Scalar r2 = rx * rx + ry2;
            if (r2 > r2max) continue;
            const Scalar k = std::exp(-r2 * inv_two_sigma2);
            const Scalar q =
                detect_prob(heat_fraction(px.t_scan, T.values[Eigen::Index(g.flat(ix, iy))],
                                          p.c_decay),
                            p);
            const Scalar term = px.detect ? q : Scalar(1) - q;
            kernel_mass.add(k);
            mixture.add(k * term);
            ++n_nodes;
        }
    }
    if (n_nodes == 0) {
        std::ostringstream os;
        os << "no grid node within " << radius << " m of pixel at (" << px.center.x()
           << ", " << px.center.y() << "); pixel outside modeled domain";
        throw CoverageError(os.str());
    }
    Scalar prob = mixture.value() / kernel_mass.value();
    prob = std::min(prob, Scalar(1));
    prob = std::max(prob, Scalar(1e-300));
    return prob;
}

using LikelihoodParamsd = LikelihoodParams<double>;
using DetectionPixeld = DetectionPixel<double>;
using DetectionScened = DetectionScene<double>;

}  // namespace firelik
