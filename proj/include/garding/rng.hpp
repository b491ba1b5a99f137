#pragma once

// Seeded sampling helpers. All randomized checks in the library and CLI go
// through this type so that a fixed seed reproduces every sample sequence
// byte for byte. Samplers are built on raw uniform bits (not on the
// implementation-defined std distributions) to keep streams stable.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include "garding/common.hpp"

namespace garding {

class Rng {
   public:
    explicit Rng(std::uint64_t seed = 0) : eng_(seed) {}

    // Uniform in [0, 1).
    double uniform() {
        return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Box-Muller on explicit uniforms.
    double normal() {
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) *
               std::cos(2.0 * std::numbers::pi * u2);
    }

    std::uint64_t bits() { return eng_(); }

    int index(int n) { return static_cast<int>(eng_() % static_cast<std::uint64_t>(n)); }

    Vec vector(int d, double scale = 1.0) {
        Vec v(d);
        for (double& x : v) x = scale * normal();
        return v;
    }

    Vec unit_vector(int d) {
        Vec v = vector(d);
        double n = norm2(v);
        while (n < 1e-12) {
            v = vector(d);
            n = norm2(v);
        }
        for (double& x : v) x /= n;
        return v;
    }

    // Entrywise uniform in [lo, hi].
    Vec box(int d, double lo, double hi) {
        Vec v(d);
        for (double& x : v) x = uniform(lo, hi);
        return v;
    }

    std::vector<int> permutation(int n) {
        std::vector<int> p(n);
        for (int i = 0; i < n; ++i) p[i] = i;
        for (int i = n - 1; i > 0; --i) std::swap(p[i], p[index(i + 1)]);
        return p;
    }

   private:
    std::mt19937_64 eng_;
};

}  // namespace garding
