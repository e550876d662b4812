#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tpi/errors.hpp"
#include "tpi/model.hpp"
#include "tpi/vec.hpp"

namespace tpi {

struct IterationConfig {
    int t_max = 100;          ///< hard cap on contraction steps
    double tol = 1e-10;       ///< stop once |1 - |<u_{t+1}, u_t>|| < tol
    bool record_trajectory = false;
};

enum class IterationStatus { Converged, Alternating, NotConverged };

inline const char* to_string(IterationStatus s) {
    switch (s) {
        case IterationStatus::Converged: return "Converged";
        case IterationStatus::Alternating: return "Alternating";
        case IterationStatus::NotConverged: return "NotConverged";
    }
    return "?";
}

struct IterationResult {
    std::vector<double> v_hat;      ///< final iterate (even-step one when alternating)
    double beta_hat = 0.0;          ///< Rayleigh value at v_hat
    IterationStatus status = IterationStatus::NotConverged;
    int iterations_used = 0;        ///< contraction applications performed
    std::optional<std::vector<std::pair<int, double>>> overlaps; ///< (t, <u_{t+1}, u_t>)
};

/// Expected limit of the recursion by the parity of k and the sign of beta:
/// odd k converges to (|beta|, sign(beta) v); even k picks the sign of the
/// initial overlap, and with beta < 0 the iterates alternate in sign.
struct ExpectedLimit {
    double beta_limit = 0.0;
    int v_sign = +1;
    bool alternating = false;
};

inline ExpectedLimit classify_expected_limit(int k, double beta, int init_overlap_sign = +1) {
    if (beta == 0.0)
        throw invalid_parameter_error("classify_expected_limit: beta must be nonzero");
    if (init_overlap_sign != 1 && init_overlap_sign != -1)
        throw invalid_parameter_error("classify_expected_limit: sign must be +1 or -1");
    const bool odd = (k % 2) != 0;
    if (odd) {
        if (beta > 0) return {beta, +1, false};
        return {-beta, -1, false};
    }
    if (beta > 0) return {beta, init_overlap_sign, false};
    return {beta, init_overlap_sign, true};
}

/// Iteration count sufficient for the convergence guarantees:
///   T = 1 + (1/eps)(1/2 + 2 log|beta| / log n)  [+ loglog(sqrt(n)|beta|)/log(k-1)]
/// rounded up; the bracketed term applies to the rank-r analysis.
inline int theory_iterations(double beta_min_abs, int n, int k, double eps, bool rank_r) {
    if (k < 2) throw invalid_parameter_error("theory_iterations: k must be >= 2");
    if (!(beta_min_abs > 0.0) || n < 2 || !(eps > 0.0))
        throw invalid_parameter_error("theory_iterations: need beta > 0, n >= 2, eps > 0");
    double t = 1.0 + (0.5 + 2.0 * std::log(beta_min_abs) / std::log(static_cast<double>(n))) / eps;
    if (rank_r) {
        const double arg = std::sqrt(static_cast<double>(n)) * beta_min_abs;
        if (arg > std::exp(1.0) && k > 2)
            t += std::log(std::log(arg)) / std::log(static_cast<double>(k - 1));
    }
    const double c = std::ceil(t);
    return c < 1.0 ? 1 : static_cast<int>(c);
}

/// Index the rank-r theory predicts the iteration will converge to:
/// argmax_j |beta_j <u0, v_j>^{k-2}|, ties broken by lowest index. For k = 2
/// the overlap exponent vanishes and the argmax is over |beta_j| alone.
inline int predicted_spike_index(std::span<const double> betas, std::span<const double> u0,
                                 std::span<const std::vector<double>> spikes, int k) {
    if (betas.empty() || spikes.empty() || betas.size() != spikes.size())
        throw invalid_parameter_error("predicted_spike_index: empty or mismatched spike data");
    if (k < 2) throw invalid_parameter_error("predicted_spike_index: k must be >= 2");
    int best = 0;
    double best_score = -1.0;
    for (std::size_t j = 0; j < betas.size(); ++j) {
        double score;
        if (k == 2) {
            score = std::fabs(betas[j]);
        } else {
            score = std::fabs(betas[j] * detail::ipow(dot(u0, spikes[j]), k - 2));
        }
        if (score > best_score) {
            best_score = score;
            best = static_cast<int>(j);
        }
    }
    return best;
}

/// The recursion u_{t+1} = X[u_t^{(x)(k-1)}] / ||X[u_t^{(x)(k-1)}]||.
/// Stops at t_max or once successive overlaps stabilize; a stable overlap
/// near -1 with even k is confirmed against the two-step overlap and
/// reported as Alternating, with the even-step iterate as v_hat.
inline IterationResult power_iterate(const SpikedModel& m, std::vector<double> u0,
                                     const IterationConfig& cfg, int threads = 1) {
    if (cfg.t_max < 1 || !(cfg.tol > 0.0 && cfg.tol < 1.0))
        throw invalid_parameter_error("power_iterate: need t_max >= 1 and tol in (0,1)");
    if (static_cast<int>(u0.size()) != m.n)
        throw invalid_parameter_error("power_iterate: u0 length differs from model dimension");
    if (std::fabs(norm(u0) - 1.0) > 1e-8)
        throw invalid_parameter_error("power_iterate: u0 must be unit norm within 1e-8");

    IterationResult res;
    if (cfg.record_trajectory) res.overlaps.emplace();

    auto step = [&](const std::vector<double>& u, int t) -> std::optional<std::vector<double>> {
        std::vector<double> y = contract(m, u, threads);
        if (!all_finite(y))
            throw numerical_error("power_iterate: non-finite contraction at iteration " +
                                  std::to_string(t));
        const double len = norm(y);
        if (len == 0.0) return std::nullopt;
        for (double& x : y) x /= len;
        return y;
    };

    std::vector<double> prev = std::move(u0); // u_t for even/odd bookkeeping below
    int t = 0;
    while (t < cfg.t_max) {
        auto next = step(prev, t);
        ++t;
        if (!next) {
            res.v_hat = std::move(prev);
            res.status = IterationStatus::NotConverged;
            res.iterations_used = t;
            res.beta_hat = rayleigh(m, res.v_hat, threads);
            return res;
        }
        const double o = dot(*next, prev);
        if (res.overlaps) res.overlaps->emplace_back(t - 1, o);
        if (std::fabs(1.0 - std::fabs(o)) < cfg.tol) {
            if (o > 0.0) {
                res.v_hat = std::move(*next);
                res.status = IterationStatus::Converged;
                res.iterations_used = t;
                res.beta_hat = rayleigh(m, res.v_hat, threads);
                return res;
            }
            if (m.k % 2 == 0) {
                // candidate alternating pair (prev = u_{t-1}, *next = u_t)
                auto confirm = step(*next, t);
                ++t;
                if (confirm) {
                    const double o2 = dot(*confirm, prev);
                    if (res.overlaps) res.overlaps->emplace_back(t - 1, dot(*confirm, *next));
                    if (o2 > 1.0 - cfg.tol) {
                        // pick the iterate with even time index: u_{t-1} vs u_t,
                        // where *next sits at index t-1 and *confirm at t
                        res.v_hat = ((t - 1) % 2 == 0) ? std::move(*next) : std::move(*confirm);
                        res.status = IterationStatus::Alternating;
                        res.iterations_used = t;
                        res.beta_hat = rayleigh(m, res.v_hat, threads);
                        return res;
                    }
                    prev = std::move(*confirm);
                    continue;
                }
                res.v_hat = std::move(*next);
                res.status = IterationStatus::NotConverged;
                res.iterations_used = t;
                res.beta_hat = rayleigh(m, res.v_hat, threads);
                return res;
            }
        }
        prev = std::move(*next);
    }
    res.v_hat = std::move(prev);
    res.status = IterationStatus::NotConverged;
    res.iterations_used = t;
    res.beta_hat = rayleigh(m, res.v_hat, threads);
    return res;
}

} // namespace tpi
