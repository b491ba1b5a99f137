#pragma once

// Shared small types: vectors, three-valued classification, error types.

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace garding {

using Vec = std::vector<double>;

// Three-valued membership: "boundary" is a tolerance band, never an exact set.
enum class Classification { Outside, Boundary, Inside };

inline const char* to_string(Classification c) {
    switch (c) {
        case Classification::Outside: return "outside";
        case Classification::Boundary: return "boundary";
        case Classification::Inside: return "inside";
    }
    return "?";
}

// Classify a signed excess value against a symmetric band.
inline Classification classify_excess(double excess, double tol) {
    if (excess > tol) return Classification::Inside;
    if (excess < -tol) return Classification::Outside;
    return Classification::Boundary;
}

struct DimensionError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// p(a) vanished (within tolerance): eigenvalues along a are undefined.
struct DegenerateDirection : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Root extraction hit non-real roots: the input is not hyperbolic at this point.
struct NotRealError : std::runtime_error {
    double residue;
    explicit NotRealError(double r)
        : std::runtime_error("non-real roots, worst imaginary residue " + std::to_string(r)),
          residue(r) {}
};

struct ConeViolation : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

inline Vec axpy(double alpha, std::span<const double> x, std::span<const double> y) {
    Vec r(y.begin(), y.end());
    for (std::size_t i = 0; i < x.size(); ++i) r[i] += alpha * x[i];
    return r;
}

inline Vec scaled(double alpha, std::span<const double> x) {
    Vec r(x.begin(), x.end());
    for (double& v : r) v *= alpha;
    return r;
}

inline Vec negated(std::span<const double> x) { return scaled(-1.0, x); }

inline double max_abs(std::span<const double> a) {
    double m = 0.0;
    for (double v : a) m = std::max(m, std::abs(v));
    return m;
}

inline long long binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    k = std::min(k, n - k);
    long long r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

inline long long factorial(int n) {
    long long r = 1;
    for (int i = 2; i <= n; ++i) r *= i;
    return r;
}

}  // namespace garding
