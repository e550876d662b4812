#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace tpi {

inline double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

inline void normalize(std::vector<double>& a) {
    const double inv = 1.0 / norm(a);
    for (double& x : a) x *= inv;
}

inline std::vector<double> basis_vector(int n, int i) {
    std::vector<double> e(static_cast<std::size_t>(n), 0.0);
    e[static_cast<std::size_t>(i)] = 1.0;
    return e;
}

inline bool all_finite(std::span<const double> a) {
    for (double x : a)
        if (!std::isfinite(x)) return false;
    return true;
}

} // namespace tpi
