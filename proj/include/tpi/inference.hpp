#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "tpi/errors.hpp"
#include "tpi/random.hpp"
#include "tpi/stats.hpp"
#include "tpi/vec.hpp"

namespace tpi {

struct MixtureWeights {
    std::vector<double> p; ///< one probability per spike, ordered as the input betas
};

/// Debiased spike-strength estimate: beta_hat + (k/2 - 1) / beta_hat.
inline double debias_beta(double beta_hat, int k) {
    if (beta_hat == 0.0)
        throw invalid_parameter_error("debias_beta: beta_hat must be nonzero");
    return beta_hat + (static_cast<double>(k) / 2.0 - 1.0) / beta_hat;
}

/// sqrt(n) (debias(beta_hat) - beta_true); asymptotically N(0,1).
inline double normalized_beta_stat(double beta_hat, double beta_true, int k, int n) {
    return std::sqrt(static_cast<double>(n)) * (debias_beta(beta_hat, k) - beta_true);
}

namespace detail {

inline double projected_variance(std::span<const double> a, std::span<const double> v_hat) {
    // <a, (I - v v^T) a> for unit v
    const double av = dot(a, v_hat);
    return dot(a, a) - av * av;
}

} // namespace detail

/// The studentized linear-functional statistic
///   sqrt(n) b / sqrt(<a,(I - v v^T)a>) [ (1 - 1/(2 b^2))^{-1} <a,v> - target ],
/// asymptotically N(0,1) when target is the case-appropriate limit of <a, v>.
inline double normalized_linear_stat(std::span<const double> a, std::span<const double> v_hat,
                                     double beta_hat, double target, int n) {
    if (beta_hat == 0.0)
        throw invalid_parameter_error("normalized_linear_stat: beta_hat must be nonzero");
    const double shrink = 1.0 - 1.0 / (2.0 * beta_hat * beta_hat);
    if (shrink == 0.0)
        throw invalid_parameter_error("normalized_linear_stat: 1 - 1/(2 beta^2) vanishes");
    const double proj = detail::projected_variance(a, v_hat);
    if (!(proj > 0.0))
        throw degenerate_direction_error(
            "normalized_linear_stat: direction a is parallel to v_hat");
    return std::sqrt(static_cast<double>(n)) * beta_hat / std::sqrt(proj) *
           (dot(a, v_hat) / shrink - target);
}

/// Confidence interval for <a, v>: the plug-in interval around <a, v_hat>
/// with half-width z sqrt(<a,(I-vv^T)a>)/(sqrt(n) beta_hat), both endpoints
/// scaled by 1/(1 - 1/(2 beta_hat^2)).
inline Interval ci_linear_functional(std::span<const double> a, std::span<const double> v_hat,
                                     double beta_hat, int n, double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw invalid_parameter_error("ci_linear_functional: alpha must lie in (0,1)");
    if (beta_hat == 0.0)
        throw invalid_parameter_error("ci_linear_functional: beta_hat must be nonzero");
    const double shrink = 1.0 - 1.0 / (2.0 * beta_hat * beta_hat);
    if (shrink == 0.0)
        throw invalid_parameter_error("ci_linear_functional: 1 - 1/(2 beta^2) vanishes");
    const double proj = detail::projected_variance(a, v_hat);
    if (!(proj > 0.0))
        throw degenerate_direction_error("ci_linear_functional: direction a is parallel to v_hat");
    const double z = normal_quantile(1.0 - alpha / 2.0);
    const double av = dot(a, v_hat);
    const double hw = z * std::sqrt(proj) / (std::sqrt(static_cast<double>(n)) * beta_hat);
    const double lo = (av - hw) / shrink;
    const double hi = (av + hw) / shrink;
    return {std::min(lo, hi), std::max(lo, hi), 1.0 - alpha};
}

/// Confidence interval for a spike strength, centered at the debiased
/// estimate with half-width z / sqrt(n).
inline Interval ci_beta(double beta_hat, int k, int n, double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw invalid_parameter_error("ci_beta: alpha must lie in (0,1)");
    const double center = debias_beta(beta_hat, k);
    const double hw = normal_quantile(1.0 - alpha / 2.0) / std::sqrt(static_cast<double>(n));
    return {center - hw, center + hw, 1.0 - alpha};
}

namespace detail {

// Recursive adaptive Simpson with the standard /15 error estimate.
template <class F>
inline double adaptive_simpson_rec(const F& f, double a, double b, double fa, double fb,
                                   double fm, double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::fabs(delta) <= 15.0 * tol)
        return left + right + delta / 15.0;
    return adaptive_simpson_rec(f, a, m, fa, fm, flm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson_rec(f, m, b, fm, fb, frm, right, 0.5 * tol, depth - 1);
}

template <class F>
inline double adaptive_simpson(const F& f, double a, double b, double tol, int depth = 48) {
    const double fa = f(a);
    const double fb = f(b);
    const double m = 0.5 * (a + b);
    const double fm = f(m);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return adaptive_simpson_rec(f, a, b, fa, fb, fm, whole, tol, depth);
}

inline void validate_mixture_args(std::span<const double> betas, int k) {
    if (betas.empty())
        throw invalid_parameter_error("mixture weights: need at least one spike");
    if (k == 2)
        throw unsupported_order_error(
            "mixture weights: undefined at k = 2 (the 1/(k-2) exponent degenerates)");
    if (k < 2) throw invalid_parameter_error("mixture weights: k must be >= 3");
    for (double b : betas)
        if (b == 0.0) throw invalid_parameter_error("mixture weights: betas must be nonzero");
}

} // namespace detail

/// Probability that spike i maximizes |beta_j <u, v_j>^{k-2}| under uniform
/// random initialization:
///   p_i = Int_0^inf sqrt(2/pi) e^{-x^2/2} prod_{l != i} P(|g| < (|b_i|/|b_l|)^{1/(k-2)} x) dx,
/// with the inner factors evaluated through erf and the outer integral by
/// adaptive Simpson on [0, 12] (the truncated Gaussian tail is < 1e-31).
inline MixtureWeights mixture_weights(std::span<const double> betas, int k) {
    detail::validate_mixture_args(betas, k);
    const std::size_t r = betas.size();
    MixtureWeights w;
    w.p.resize(r);
    if (r == 1) {
        w.p[0] = 1.0;
        return w;
    }
    constexpr double sqrt_2_over_pi = 0.79788456080286535588;
    constexpr double inv_sqrt2 = 0.70710678118654752440;
    const double inv_exp = 1.0 / static_cast<double>(k - 2);
    for (std::size_t i = 0; i < r; ++i) {
        std::vector<double> ratio;
        ratio.reserve(r - 1);
        for (std::size_t l = 0; l < r; ++l)
            if (l != i)
                ratio.push_back(std::pow(std::fabs(betas[i]) / std::fabs(betas[l]), inv_exp));
        auto integrand = [&](double x) {
            double f = sqrt_2_over_pi * std::exp(-0.5 * x * x);
            for (double c : ratio) f *= tpi::erf(c * x * inv_sqrt2);
            return f;
        };
        w.p[i] = detail::adaptive_simpson(integrand, 0.0, 12.0, 1e-10);
    }
    return w;
}

/// Monte Carlo version of the same probabilities: the scores
/// |beta_j| |g_j|^{k-2} with i.i.d. standard Gaussian g reproduce the
/// sphere formulation because the common norm cancels inside the argmax.
inline MixtureWeights mixture_weights_mc(std::span<const double> betas, int k,
                                         std::int64_t samples, RandomStream& stream) {
    detail::validate_mixture_args(betas, k);
    if (samples < 1)
        throw invalid_parameter_error("mixture_weights_mc: need at least one sample");
    const std::size_t r = betas.size();
    std::vector<std::int64_t> counts(r, 0);
    for (std::int64_t s = 0; s < samples; ++s) {
        int best = 0;
        double best_score = -1.0;
        for (std::size_t j = 0; j < r; ++j) {
            const double g = stream.next_gaussian();
            const double score =
                std::fabs(betas[j]) * std::pow(std::fabs(g), static_cast<double>(k - 2));
            if (score > best_score) {
                best_score = score;
                best = static_cast<int>(j);
            }
        }
        ++counts[static_cast<std::size_t>(best)];
    }
    MixtureWeights w;
    w.p.resize(r);
    for (std::size_t j = 0; j < r; ++j)
        w.p[j] = static_cast<double>(counts[j]) / static_cast<double>(samples);
    return w;
}

} // namespace tpi
