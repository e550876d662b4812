#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "tpi/errors.hpp"
#include "tpi/random.hpp"
#include "tpi/vec.hpp"

namespace tpi {

// ---------------------------------------------------------------------------
// The spiked tensor X = sum_j beta_j v_j^{(x)k} + Z, held as its low-rank
// part plus a noise backend. The only tensor operations the estimators need
// are the contraction X[u^{(x)(k-1)}] and the Rayleigh value <X, u^{(x)k}>,
// so the n^k noise entries are either materialized once (Dense) or
// regenerated from the seed on every pass (Streaming).
// ---------------------------------------------------------------------------

enum class NoiseBackend {
    Dense,     ///< materialized n^k array, fastest per contraction
    Streaming, ///< entries regenerated from noise_seed on each use
    Zero,      ///< no noise
    Injected,  ///< explicit array supplied by tests
};

struct Spike {
    double beta = 0.0;
    std::vector<double> v;
};

inline constexpr std::uint64_t kDefaultMemoryBudget = 2ULL << 30; // 2 GiB

struct SpikedModel {
    int n = 0;
    int k = 0;
    std::vector<Spike> spikes;
    std::uint64_t noise_seed = 0;
    NoiseBackend backend = NoiseBackend::Zero;
    std::vector<double> noise; // Dense / Injected storage, row-major

    int rank() const { return static_cast<int>(spikes.size()); }
    std::uint64_t entry_count() const {
        return detail::checked_tensor_size(n, k);
    }
};

/// Bytes a Dense backend would materialize for a given (n, k).
inline std::uint64_t dense_bytes_required(int n, int k) {
    const std::uint64_t count = detail::checked_tensor_size(n, k);
    if (count > UINT64_MAX / sizeof(double))
        throw resource_error("dense backend: byte count exceeds 64-bit range");
    return count * sizeof(double);
}

namespace detail {

inline void validate_spikes(int n, std::span<const Spike> spikes) {
    if (spikes.empty() || static_cast<int>(spikes.size()) > n)
        throw model_invariant_error("model: rank must satisfy 1 <= r <= n");
    constexpr double tol = 1e-10;
    for (std::size_t j = 0; j < spikes.size(); ++j) {
        if (static_cast<int>(spikes[j].v.size()) != n)
            throw model_invariant_error("model: spike vector length differs from n");
        if (std::fabs(dot(spikes[j].v, spikes[j].v) - 1.0) > tol)
            throw model_invariant_error("model: spike " + std::to_string(j) +
                                        " is not unit norm within 1e-10");
        for (std::size_t i = 0; i < j; ++i)
            if (std::fabs(dot(spikes[i].v, spikes[j].v)) > tol)
                throw model_invariant_error("model: spikes " + std::to_string(i) + " and " +
                                            std::to_string(j) +
                                            " are not orthogonal within 1e-10");
    }
}

} // namespace detail

/// Validates invariants and materializes the Dense backend if requested.
/// Dense materialization walks flat indices in row-major order, so Dense and
/// Streaming hold exactly the same entries for equal seeds.
inline SpikedModel build_model(int n, int k, std::vector<Spike> spikes, std::uint64_t noise_seed,
                               NoiseBackend backend,
                               std::uint64_t memory_budget_bytes = kDefaultMemoryBudget) {
    if (k < 2) throw invalid_parameter_error("model: order k must be >= 2");
    if (n < 1) throw invalid_parameter_error("model: dimension n must be >= 1");
    detail::validate_spikes(n, spikes);

    SpikedModel m;
    m.n = n;
    m.k = k;
    m.spikes = std::move(spikes);
    m.noise_seed = noise_seed;
    m.backend = backend;

    if (backend == NoiseBackend::Dense) {
        const std::uint64_t bytes = dense_bytes_required(n, k);
        if (bytes > memory_budget_bytes)
            throw resource_error("dense backend needs " + std::to_string(bytes) +
                                 " bytes, over the budget of " +
                                 std::to_string(memory_budget_bytes));
        const std::uint64_t count = m.entry_count();
        m.noise.resize(count);
        detail::NoiseCursor cursor(noise_seed, 1.0 / std::sqrt(static_cast<double>(n)));
        for (std::uint64_t f = 0; f < count; ++f) m.noise[f] = cursor.value(f);
    }
    return m;
}

/// Model with an explicit noise array (tests and oracles).
inline SpikedModel build_injected_model(int n, int k, std::vector<Spike> spikes,
                                        std::vector<double> noise_entries) {
    if (k < 2) throw invalid_parameter_error("model: order k must be >= 2");
    detail::validate_spikes(n, spikes);
    SpikedModel m;
    m.n = n;
    m.k = k;
    m.spikes = std::move(spikes);
    m.backend = NoiseBackend::Injected;
    if (noise_entries.size() != m.entry_count())
        throw invalid_parameter_error("injected noise array has wrong length");
    m.noise = std::move(noise_entries);
    return m;
}

namespace detail {

// Z[u^{(x)(k-1)}](i) for one output index, reading entries through `fetch`.
// The reduction is a fixed row-major walk: an inner dot over the last mode,
// accumulated across the k-2 middle modes in odometer order.
template <class Fetch>
inline double noise_contraction_at(int n, int k, std::uint64_t base, std::span<const double> u,
                                   Fetch&& fetch) {
    const std::size_t un = u.size();
    double acc = 0.0;
    const int mid = k - 2;
    if (mid == 0) {
        double row = 0.0;
        for (std::size_t j = 0; j < un; ++j) row += fetch(base + j) * u[j];
        return row;
    }
    std::vector<int> idx(static_cast<std::size_t>(mid), 0);
    std::uint64_t flat = base;
    while (true) {
        double w = 1.0;
        for (int s = 0; s < mid; ++s) w *= u[static_cast<std::size_t>(idx[static_cast<std::size_t>(s)])];
        double row = 0.0;
        for (std::size_t j = 0; j < un; ++j) row += fetch(flat + j) * u[j];
        acc += w * row;
        flat += un;
        int s = mid - 1;
        while (s >= 0 && ++idx[static_cast<std::size_t>(s)] == n) {
            idx[static_cast<std::size_t>(s)] = 0;
            --s;
        }
        if (s < 0) break;
    }
    return acc;
}

inline double ipow(double x, int e) {
    double r = 1.0;
    for (int i = 0; i < e; ++i) r *= x;
    return r;
}

} // namespace detail

/// X[u^{(x)(k-1)}]: the vector with entry i = <X, e_i (x) u^{(x)(k-1)}>.
/// The low-rank part costs O(nr); the noise part walks all n^k entries.
/// Per output index the noise reduction order is fixed, so results do not
/// depend on how output indices are scheduled across threads.
inline std::vector<double> contract(const SpikedModel& m, std::span<const double> u,
                                    int threads = 1) {
    const int n = m.n;
    if (static_cast<int>(u.size()) != n)
        throw invalid_parameter_error("contract: input length differs from model dimension");

    std::vector<double> out(static_cast<std::size_t>(n), 0.0);

    const std::uint64_t stride = m.entry_count() / static_cast<std::uint64_t>(n);
    auto fill_range = [&](int lo, int hi) {
        detail::NoiseCursor cursor(m.noise_seed, 1.0 / std::sqrt(static_cast<double>(n)));
        for (int i = lo; i < hi; ++i) {
            const std::uint64_t base = static_cast<std::uint64_t>(i) * stride;
            double z = 0.0;
            switch (m.backend) {
                case NoiseBackend::Zero:
                    break;
                case NoiseBackend::Dense:
                case NoiseBackend::Injected:
                    z = detail::noise_contraction_at(n, m.k, base, u,
                                                     [&](std::uint64_t f) { return m.noise[f]; });
                    break;
                case NoiseBackend::Streaming:
                    z = detail::noise_contraction_at(n, m.k, base, u,
                                                     [&](std::uint64_t f) { return cursor.value(f); });
                    break;
            }
            double low = 0.0;
            for (const Spike& s : m.spikes)
                low += s.beta * detail::ipow(dot(u, s.v), m.k - 1) * s.v[static_cast<std::size_t>(i)];
            out[static_cast<std::size_t>(i)] = low + z;
        }
    };

    if (threads <= 1 || n < 2 * threads) {
        fill_range(0, n);
    } else {
        std::vector<std::thread> pool;
        const int chunk = (n + threads - 1) / threads;
        for (int t = 0; t < threads; ++t) {
            const int lo = t * chunk;
            const int hi = std::min(n, lo + chunk);
            if (lo >= hi) break;
            pool.emplace_back(fill_range, lo, hi);
        }
        for (auto& th : pool) th.join();
    }
    return out;
}

/// <X, u^{(x)k}>, evaluated as <u, X[u^{(x)(k-1)}]>.
inline double rayleigh(const SpikedModel& m, std::span<const double> u, int threads = 1) {
    const std::vector<double> y = contract(m, u, threads);
    return dot(u, y);
}

/// Explicit n^k array of the full tensor, for property tests only.
inline std::vector<double> materialize_dense_oracle(const SpikedModel& m) {
    const std::uint64_t count = m.entry_count();
    if (count > 10'000'000ULL)
        throw resource_error("materialize_dense_oracle: n^k exceeds the 1e7 test-scale guard");
    std::vector<double> out(count, 0.0);

    switch (m.backend) {
        case NoiseBackend::Zero:
            break;
        case NoiseBackend::Dense:
        case NoiseBackend::Injected:
            out = m.noise;
            break;
        case NoiseBackend::Streaming: {
            detail::NoiseCursor cursor(m.noise_seed, 1.0 / std::sqrt(static_cast<double>(m.n)));
            for (std::uint64_t f = 0; f < count; ++f) out[f] = cursor.value(f);
            break;
        }
    }

    std::vector<int> idx(static_cast<std::size_t>(m.k), 0);
    for (std::uint64_t f = 0; f < count; ++f) {
        double low = 0.0;
        for (const Spike& s : m.spikes) {
            double prod = s.beta;
            for (int mode = 0; mode < m.k; ++mode)
                prod *= s.v[static_cast<std::size_t>(idx[static_cast<std::size_t>(mode)])];
            low += prod;
        }
        out[f] += low;
        int mode = m.k - 1;
        while (mode >= 0 && ++idx[static_cast<std::size_t>(mode)] == m.n) {
            idx[static_cast<std::size_t>(mode)] = 0;
            --mode;
        }
    }
    return out;
}

} // namespace tpi
