#pragma once

// Real root extraction for the univariate restrictions t -> p(ta+x).
//
// Pipeline: balanced companion matrix eigenvalues, a short Newton polish,
// then multiplicity-aware cluster acceptance. A backward error eps in the
// coefficients scatters an l-fold root over a disk of radius ~eps^(1/l), so
// raw imaginary parts cannot be compared against a flat tolerance; clusters
// of l roots within the eps^(1/l) radius are collapsed to their centroid and
// accepted as one real root of multiplicity l. Genuinely complex pairs sit
// far outside that radius and are rejected.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "garding/common.hpp"

namespace garding {

struct RealRootResult {
    std::vector<double> roots;  // all m roots, with multiplicity, unsorted
    double max_imag = 0.0;      // largest imaginary residue discarded
};

namespace detail {

// Parlett–Reinsch style diagonal balancing (base 2) before the QR solve.
inline void balance(Eigen::MatrixXd& A) {
    const int n = static_cast<int>(A.rows());
    bool converged = false;
    while (!converged) {
        converged = true;
        for (int i = 0; i < n; ++i) {
            double r = 0.0, c = 0.0;
            for (int j = 0; j < n; ++j) {
                if (j == i) continue;
                c += std::abs(A(j, i));
                r += std::abs(A(i, j));
            }
            if (c == 0.0 || r == 0.0) continue;
            double f = 1.0;
            const double s = c + r;
            while (c < r / 2.0) {
                c *= 2.0;
                r /= 2.0;
                f *= 2.0;
            }
            while (c >= r * 2.0) {
                c /= 2.0;
                r *= 2.0;
                f /= 2.0;
            }
            if ((c + r) < 0.95 * s) {
                converged = false;
                A.row(i) /= f;
                A.col(i) *= f;
            }
        }
    }
}

inline std::complex<double> horner(const std::vector<double>& monic,
                                   std::complex<double> z) {
    std::complex<double> v = 0.0;
    for (double c : monic) v = v * z + c;
    return v;
}

inline std::complex<double> horner_deriv(const std::vector<double>& monic,
                                         std::complex<double> z) {
    const int m = static_cast<int>(monic.size()) - 1;
    std::complex<double> v = 0.0;
    for (int i = 0; i < m; ++i) v = v * z + monic[i] * double(m - i);
    return v;
}

}  // namespace detail

// Complex roots of a monic polynomial given as coefficients highest first
// (coeffs[0] == 1). Degenerate leading behaviour must be handled by callers.
inline std::vector<std::complex<double>> complex_roots_monic(
    const std::vector<double>& monic) {
    const int m = static_cast<int>(monic.size()) - 1;
    std::vector<std::complex<double>> out;
    if (m <= 0) return out;
    if (m == 1) {
        out.push_back(-monic[1]);
        return out;
    }
    if (m == 2) {
        const double b = monic[1], c = monic[2];
        const double disc = b * b - 4.0 * c;
        if (disc >= 0.0) {
            const double s = std::sqrt(disc);
            // Stable quadratic formula.
            const double q = -0.5 * (b + (b >= 0.0 ? s : -s));
            double r1 = q;
            double r2 = (q != 0.0) ? c / q : -b - q;
            out.push_back(r1);
            out.push_back(r2);
        } else {
            const double s = std::sqrt(-disc);
            out.emplace_back(-0.5 * b, 0.5 * s);
            out.emplace_back(-0.5 * b, -0.5 * s);
        }
        return out;
    }

    Eigen::MatrixXd C = Eigen::MatrixXd::Zero(m, m);
    for (int i = 1; i < m; ++i) C(i, i - 1) = 1.0;
    for (int i = 0; i < m; ++i) C(i, m - 1) = -monic[m - i];
    detail::balance(C);
    Eigen::EigenSolver<Eigen::MatrixXd> es(C, /*computeEigenvectors=*/false);
    for (int i = 0; i < m; ++i) out.push_back(es.eigenvalues()[i]);

    // Newton polish against the original coefficients; simple roots sharpen
    // to machine accuracy, clusters are left to the acceptance stage.
    for (auto& z : out) {
        for (int it = 0; it < 4; ++it) {
            const std::complex<double> p = detail::horner(monic, z);
            const std::complex<double> dp = detail::horner_deriv(monic, z);
            if (std::abs(dp) < 1e-300) break;
            const std::complex<double> step = p / dp;
            if (std::abs(step) > 0.25 * (1.0 + std::abs(z))) break;
            z -= step;
        }
    }
    return out;
}

// Extract m real roots (with multiplicity) from a monic polynomial, or throw
// NotRealError. `tol` is the per-root reality tolerance |Im| <= tol*(1+|Re|).
inline RealRootResult real_roots_monic(const std::vector<double>& monic,
                                       double tol = 1e-7) {
    const int m = static_cast<int>(monic.size()) - 1;
    RealRootResult res;
    if (m <= 0) return res;

    auto z = complex_roots_monic(monic);

    // Cluster acceptance, largest multiplicity hypothesis first.
    constexpr double kClusterEps = 1e-12;
    std::vector<bool> used(z.size(), false);
    struct Cluster {
        std::complex<double> centroid;
        int size;
    };
    std::vector<Cluster> clusters;

    for (int ell = m; ell >= 2; --ell) {
        bool again = true;
        while (again) {
            again = false;
            // Connected components of the unused roots at the radius for
            // multiplicity ell.
            std::vector<int> comp(z.size(), -1);
            int ncomp = 0;
            for (std::size_t i = 0; i < z.size(); ++i) {
                if (used[i] || comp[i] >= 0) continue;
                std::vector<std::size_t> stack{i};
                comp[i] = ncomp;
                while (!stack.empty()) {
                    const std::size_t a = stack.back();
                    stack.pop_back();
                    const double rad =
                        (1.0 + std::abs(z[a])) * std::pow(kClusterEps, 1.0 / ell);
                    for (std::size_t b = 0; b < z.size(); ++b) {
                        if (used[b] || comp[b] >= 0) continue;
                        if (std::abs(z[a] - z[b]) <= rad) {
                            comp[b] = ncomp;
                            stack.push_back(b);
                        }
                    }
                }
                ++ncomp;
            }
            for (int c = 0; c < ncomp; ++c) {
                std::vector<std::size_t> members;
                for (std::size_t i = 0; i < z.size(); ++i)
                    if (!used[i] && comp[i] == c) members.push_back(i);
                if (static_cast<int>(members.size()) != ell) continue;
                std::complex<double> cent = 0.0;
                for (auto i : members) cent += z[i];
                cent /= double(ell);
                for (auto i : members) used[i] = true;
                clusters.push_back({cent, ell});
                again = true;
            }
        }
    }
    std::vector<std::size_t> singles;
    for (std::size_t i = 0; i < z.size(); ++i)
        if (!used[i]) singles.push_back(i);

    // First-moment correction: when exactly one multiple cluster exists, its
    // centroid is recovered exactly from the trace coefficient.
    if (clusters.size() == 1 && m >= 2) {
        double rest = 0.0;
        for (auto i : singles) rest += z[i].real();
        clusters[0].centroid =
            std::complex<double>((-monic[1] - rest) / clusters[0].size,
                                 clusters[0].centroid.imag());
    }

    for (const auto& cl : clusters) {
        const double im = std::abs(cl.centroid.imag());
        const double band = tol * (1.0 + std::abs(cl.centroid.real()));
        if (im > band) throw NotRealError(im);
        res.max_imag = std::max(res.max_imag, im);
        for (int i = 0; i < cl.size; ++i) res.roots.push_back(cl.centroid.real());
    }
    for (auto i : singles) {
        const double im = std::abs(z[i].imag());
        const double band = tol * (1.0 + std::abs(z[i].real()));
        if (im > band) throw NotRealError(im);
        res.max_imag = std::max(res.max_imag, im);
        res.roots.push_back(z[i].real());
    }
    return res;
}

}  // namespace garding
