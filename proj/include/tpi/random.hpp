#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "tpi/errors.hpp"
#include "tpi/stats.hpp"

namespace tpi {

// ---------------------------------------------------------------------------
// Counter-based generation. One Philox4x64-10 block (Salmon et al., and the
// generator behind numpy.random.Philox) maps a (key, counter) pair to four
// 64-bit words, so any word of any stream is addressable in O(1) without
// storing generator state. Uniforms become Gaussians through the inverse CDF
// (AS 241) on 53-bit uniforms; that transform is the platform-stability
// contract for every random quantity in the library.
// ---------------------------------------------------------------------------

namespace detail {

inline constexpr std::uint64_t kPhiloxM0 = 0xD2E7470EE14C6C93ULL;
inline constexpr std::uint64_t kPhiloxM1 = 0xCA5A826395121157ULL;
inline constexpr std::uint64_t kPhiloxW0 = 0x9E3779B97F4A7C15ULL;
inline constexpr std::uint64_t kPhiloxW1 = 0xBB67AE8584CAA73BULL;

// Counter salts keeping library streams away from the all-zero counter plane.
inline constexpr std::uint64_t kCounterSalt2 = 0x243F6A8885A308D3ULL;
inline constexpr std::uint64_t kCounterSalt3 = 0x452821E638D01377ULL;

inline void mulhilo64(std::uint64_t a, std::uint64_t b, std::uint64_t& hi, std::uint64_t& lo) {
    const unsigned __int128 p = static_cast<unsigned __int128>(a) * b;
    hi = static_cast<std::uint64_t>(p >> 64);
    lo = static_cast<std::uint64_t>(p);
}

using PhiloxBlock = std::array<std::uint64_t, 4>;

inline PhiloxBlock philox4x64_10(PhiloxBlock ctr, std::uint64_t k0, std::uint64_t k1) {
    for (int round = 0; round < 10; ++round) {
        if (round != 0) {
            k0 += kPhiloxW0;
            k1 += kPhiloxW1;
        }
        std::uint64_t hi0, lo0, hi1, lo1;
        mulhilo64(kPhiloxM0, ctr[0], hi0, lo0);
        mulhilo64(kPhiloxM1, ctr[2], hi1, lo1);
        ctr = {hi1 ^ ctr[1] ^ k0, lo1, hi0 ^ ctr[3] ^ k1, lo0};
    }
    return ctr;
}

inline constexpr std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (char c : s) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001B3ULL;
    }
    return h;
}

/// 53-bit uniform strictly inside (0,1); every value is exactly representable.
inline double uniform53(std::uint64_t word) {
    return (static_cast<double>(word >> 11) + 0.5) * 0x1.0p-53;
}

} // namespace detail

/// Identifies one independent random stream. Streams are pure functions of
/// the key, so a trial rerun with the same key replays bit-identically.
struct StreamKey {
    std::uint64_t master_seed = 0;
    std::string label;
    std::uint64_t index = 0;
};

/// Sequential view over the words of one keyed stream. Value-like and cheap;
/// each instance is used by a single worker.
class RandomStream {
  public:
    RandomStream(std::uint64_t key0, std::uint64_t key1, std::uint64_t counter1)
        : k0_(key0), k1_(key1), c1_(counter1) {}

    std::uint64_t next_u64() {
        if (pos_ == 4) {
            block_ = detail::philox4x64_10(
                {next_block_, c1_, detail::kCounterSalt2, detail::kCounterSalt3}, k0_, k1_);
            ++next_block_;
            pos_ = 0;
        }
        return block_[pos_++];
    }

    /// Uniform in (0,1) on a 53-bit lattice.
    double next_uniform() { return detail::uniform53(next_u64()); }

    /// Centered Gaussian with standard deviation `sd` via the inverse CDF.
    double next_gaussian(double sd = 1.0) { return normal_quantile(next_uniform()) * sd; }

  private:
    std::uint64_t k0_, k1_, c1_;
    std::uint64_t next_block_ = 0;
    detail::PhiloxBlock block_{};
    int pos_ = 4;
};

inline RandomStream derive_stream(const StreamKey& key) {
    return RandomStream(key.master_seed, detail::fnv1a64(key.label), key.index);
}

inline RandomStream derive_stream(std::uint64_t master_seed, std::string_view label,
                                  std::uint64_t index) {
    return RandomStream(master_seed, detail::fnv1a64(label), index);
}

/// `count` i.i.d. draws from N(0, variance).
inline std::vector<double> gaussian(RandomStream& stream, std::size_t count, double variance) {
    if (!(variance > 0.0))
        throw invalid_parameter_error("gaussian: variance must be positive");
    const double sd = std::sqrt(variance);
    std::vector<double> out(count);
    for (double& x : out) x = stream.next_gaussian(sd);
    return out;
}

/// Uniform draw from the unit sphere in R^n (normalized Gaussian vector).
inline std::vector<double> unit_sphere(RandomStream& stream, int n) {
    if (n < 1) throw invalid_parameter_error("unit_sphere: n must be >= 1");
    std::vector<double> v(static_cast<std::size_t>(n));
    double norm2 = 0.0;
    do {
        norm2 = 0.0;
        for (double& x : v) {
            x = stream.next_gaussian();
            norm2 += x * x;
        }
    } while (norm2 == 0.0);
    const double inv = 1.0 / std::sqrt(norm2);
    for (double& x : v) x *= inv;
    return v;
}

namespace detail {

inline constexpr std::uint64_t kNoiseEntryLabel = fnv1a64("noise-entry");

/// Block-cached walker over noise entries of one tensor. Sequential walks
/// cost one Philox block per four entries; arbitrary jumps are still exact.
class NoiseCursor {
  public:
    NoiseCursor(std::uint64_t noise_seed, double entry_sd)
        : k0_(noise_seed), sd_(entry_sd) {}

    double value(std::uint64_t flat_index) {
        const std::uint64_t block = flat_index >> 2;
        if (block != cur_block_) {
            const PhiloxBlock words =
                philox4x64_10({block, 0, kCounterSalt2, kCounterSalt3}, k0_, kNoiseEntryLabel);
            for (int lane = 0; lane < 4; ++lane)
                values_[lane] = normal_quantile(uniform53(words[lane])) * sd_;
            cur_block_ = block;
        }
        return values_[flat_index & 3];
    }

  private:
    std::uint64_t k0_;
    double sd_;
    std::uint64_t cur_block_ = ~std::uint64_t{0};
    std::array<double, 4> values_{};
};

inline std::uint64_t checked_tensor_size(int n, int k) {
    if (n < 1 || k < 2)
        throw invalid_parameter_error("tensor size: need n >= 1 and k >= 2");
    unsigned __int128 size = 1;
    for (int i = 0; i < k; ++i) {
        size *= static_cast<unsigned>(n);
        if (size > (unsigned __int128)UINT64_MAX)
            throw resource_error("tensor size n^k exceeds 64-bit index range");
    }
    return static_cast<std::uint64_t>(size);
}

} // namespace detail

/// Entry of the noise tensor Z at a row-major flat index, N(0, 1/n), as a
/// pure function of (noise_seed, flat_index, n). Entries at distinct flat
/// indices are independent; nothing is symmetrized.
inline double noise_entry(std::uint64_t noise_seed, std::uint64_t flat_index, int n, int k) {
    const std::uint64_t size = detail::checked_tensor_size(n, k);
    if (flat_index >= size)
        throw invalid_parameter_error("noise_entry: flat_index out of range for n^k entries");
    detail::NoiseCursor cursor(noise_seed, 1.0 / std::sqrt(static_cast<double>(n)));
    return cursor.value(flat_index);
}

/// r orthonormal vectors spanning a uniformly random r-frame in R^n
/// (Gaussian matrix, modified Gram-Schmidt run twice).
inline std::vector<std::vector<double>> orthonormal_spikes(RandomStream& stream, int n, int r) {
    if (n < 1 || r < 1 || r > n)
        throw invalid_parameter_error("orthonormal_spikes: need 1 <= r <= n");
    std::vector<std::vector<double>> v(static_cast<std::size_t>(r));
    for (auto& col : v) col = unit_sphere(stream, n);
    for (int pass = 0; pass < 2; ++pass) {
        for (int j = 0; j < r; ++j) {
            auto& col = v[static_cast<std::size_t>(j)];
            for (int i = 0; i < j; ++i) {
                const auto& prev = v[static_cast<std::size_t>(i)];
                double proj = 0.0;
                for (int s = 0; s < n; ++s) proj += col[static_cast<std::size_t>(s)] * prev[static_cast<std::size_t>(s)];
                for (int s = 0; s < n; ++s) col[static_cast<std::size_t>(s)] -= proj * prev[static_cast<std::size_t>(s)];
            }
            double norm2 = 0.0;
            for (double x : col) norm2 += x * x;
            if (norm2 < 1e-24)
                throw numerical_error("orthonormal_spikes: degenerate Gaussian frame");
            const double inv = 1.0 / std::sqrt(norm2);
            for (double& x : col) x *= inv;
        }
    }
    return v;
}

} // namespace tpi
