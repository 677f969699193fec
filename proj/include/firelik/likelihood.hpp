#pragma once

#include "firelik/accum.hpp"
#include "firelik/detection.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace firelik {

/// Scene log-likelihood: sum of confidence * ln(pixel_prob) over the pixels
/// in scene order. Confidence-0 pixels are missing data and are skipped
/// without touching the grid.
template <class Scalar>
Scalar scene_log_likelihood(const DetectionScene<Scalar>& scene, const ScalarField<Scalar>& T,
                            const LikelihoodParams<Scalar>& p) {
    CompensatedSum<Scalar> sum;
    for (std::size_t i = 0; i < scene.pixels.size(); ++i) {
        const auto& px = scene.pixels[i];
        if (!(px.confidence >= Scalar(0)) || !(px.confidence <= Scalar(1))) {
            throw std::invalid_argument("pixel " + std::to_string(i) +
                                        ": confidence outside [0, 1]");
        }
        if (px.confidence == Scalar(0)) continue;
        Scalar prob;
        try {
            prob = pixel_prob(px, T, p);
        } catch (const CoverageError& e) {
            throw CoverageError("pixel " + std::to_string(i) + ": " + e.what());
        }
        sum.add(px.confidence * std::log(prob));
    }
    return sum.value();
}

/// Log detection probability of a single pixel against a straight fire line,
/// sampled over offsets delta_t = t_scan - T(x).
template <class Scalar>
struct LikelihoodProfile {
    ArrayX<Scalar> delta_t;  // strictly increasing offsets [s]
    ArrayX<Scalar> log_p;    // log probability per offset, <= 0
};

/// Detection probability for one offset of the straight-fire-line geometry:
/// normalized midpoint tensor-product quadrature of the Gaussian-blurred
/// logistic response, extent kernel_radius*sigma, spacing <= sigma/8.
template <class Scalar>
Scalar line_detect_prob(Scalar delta_t, Scalar ros, const LikelihoodParams<Scalar>& p) {
    const Scalar extent = p.kernel_radius * p.sigma;
    const int n = int(std::ceil(double(Scalar(16) * p.kernel_radius)));  // step = sigma/8
    const Scalar step = Scalar(2) * extent / Scalar(n);
    const Scalar inv_two_sigma2 = Scalar(1) / (Scalar(2) * p.sigma * p.sigma);

    CompensatedSum<Scalar> mass;
    CompensatedSum<Scalar> mix;
    for (int k2 = 0; k2 < n; ++k2) {
        const Scalar y2 = -extent + (Scalar(k2) + Scalar(0.5)) * step;
        const Scalar w2 = std::exp(-y2 * y2 * inv_two_sigma2);
        for (int k1 = 0; k1 < n; ++k1) {
            const Scalar y1 = -extent + (Scalar(k1) + Scalar(0.5)) * step;
            const Scalar w = w2 * std::exp(-y1 * y1 * inv_two_sigma2);
            // arrival at y lags the pixel's own arrival by y1 / ros
            const Scalar q = detect_prob(heat_fraction(delta_t, y1 / ros, p.c_decay), p);
            mass.add(w);
            mix.add(w * q);
        }
    }
    Scalar prob = mix.value() / mass.value();
    prob = std::min(prob, Scalar(1));
    prob = std::max(prob, Scalar(1e-300));
    return prob;
}

template <class Scalar>
LikelihoodProfile<Scalar> likelihood_profile(Scalar t_min, Scalar t_max, int n_samples,
                                             Scalar ros, const LikelihoodParams<Scalar>& p) {
    if (!(ros > Scalar(0))) {
        throw std::invalid_argument("rate of spread must be positive, got " +
                                    std::to_string(double(ros)));
    }
    if (n_samples < 2) {
        throw std::invalid_argument("profile needs at least 2 samples, got " +
                                    std::to_string(n_samples));
    }
    if (!(t_min < t_max)) {
        throw std::invalid_argument("profile offset range is empty");
    }
    LikelihoodProfile<Scalar> out;
    out.delta_t = ArrayX<Scalar>::LinSpaced(n_samples, t_min, t_max);
    out.log_p.resize(n_samples);
    for (int i = 0; i < n_samples; ++i) {
        out.log_p[i] = std::log(line_detect_prob(out.delta_t[i], ros, p));
    }
    return out;
}

template <class Scalar>
struct ProfileSummary {
    Scalar floor_value;  // leading-plateau level, ~ln(p_false)
    Scalar peak;
    Scalar rise_width;  // floor+1 upcrossing to peak-0.1 upcrossing [s]
    Scalar fall_width;  // peak-0.1 downcrossing to floor+1 downcrossing [s]
};

namespace detail {

template <class Scalar>
Scalar cross_interp(Scalar t0, Scalar v0, Scalar t1, Scalar v1, Scalar level) {
    if (v1 == v0) return t1;
    return t0 + (level - v0) / (v1 - v0) * (t1 - t0);
}

}  // namespace detail

/// Peak, floor, and edge widths of a profile. The trailing edge of the
/// detection likelihood is wider than the leading edge; the widths quantify
/// that asymmetry.
template <class Scalar>
ProfileSummary<Scalar> summarize_profile(const LikelihoodProfile<Scalar>& prof) {
    const auto& t = prof.delta_t;
    const auto& v = prof.log_p;
    const Eigen::Index n = t.size();
    ProfileSummary<Scalar> s;
    s.floor_value = v[0];
    Eigen::Index imax = 0;
    v.maxCoeff(&imax);
    s.peak = v[imax];

    const Scalar low = s.floor_value + Scalar(1);
    const Scalar high = s.peak - Scalar(0.1);

    Scalar t_low_up = t[0], t_high_up = t[imax];
    for (Eigen::Index i = 1; i <= imax; ++i) {
        if (v[i - 1] < low && v[i] >= low) {
            t_low_up = detail::cross_interp(t[i - 1], v[i - 1], t[i], v[i], low);
            break;
        }
    }
    for (Eigen::Index i = 1; i <= imax; ++i) {
        if (v[i - 1] < high && v[i] >= high) {
            t_high_up = detail::cross_interp(t[i - 1], v[i - 1], t[i], v[i], high);
            break;
        }
    }
    s.rise_width = t_high_up - t_low_up;

    // last sample still within 0.1 of the peak, then the drop to floor+1
    Eigen::Index i_high_dn = n - 1;
    for (Eigen::Index i = imax; i < n; ++i) {
        if (v[i] >= high) i_high_dn = i;
    }
    Scalar t_high_dn = t[i_high_dn];
    if (i_high_dn + 1 < n && v[i_high_dn + 1] < high) {
        t_high_dn = detail::cross_interp(t[i_high_dn], v[i_high_dn], t[i_high_dn + 1],
                                         v[i_high_dn + 1], high);
    }
    Scalar t_low_dn = t[n - 1];
    for (Eigen::Index i = i_high_dn + 1; i < n; ++i) {
        if (v[i] <= low) {
            t_low_dn = detail::cross_interp(t[i - 1], v[i - 1], t[i], v[i], low);
            break;
        }
    }
    s.fall_width = t_low_dn - t_high_dn;
    return s;
}

using LikelihoodProfiled = LikelihoodProfile<double>;
using ProfileSummaryd = ProfileSummary<double>;

}  // namespace firelik
