#pragma once

// Garding cone and branch membership, the Descartes sign-variation
// classifier, edge detection, Dirichlet duality for branches, the +/- norms
// on the trace-zero hyperplane, and the Structure Theorem graph function.

#include <cstdint>
#include <functional>
#include <vector>

#include "garding/common.hpp"
#include "garding/spectra.hpp"

namespace garding {

inline double membership_tol(std::span<const double> x, double base = 1e-8) {
    return base * (1.0 + norm2(x));
}

inline bool in_garding_cone(const EigenMap& em, std::span<const double> x,
                            double tol) {
    return em.lambda(x).values.front() > tol;
}

inline bool in_garding_cone(const MonomialPoly& p, std::span<const double> a,
                            std::span<const double> x, double tol = 1e-8) {
    return eigenvalues(p, a, x).values.front() > tol;
}

// Branch F_k = {lambda^_k >= 0}; boundary is a band of width tol.
inline Classification branch_membership_eigen(const EigenMap& em,
                                              std::span<const double> x, int k,
                                              double tol) {
    if (k < 1 || k > em.degree)
        throw std::invalid_argument("branch index out of range");
    return classify_excess(em.lambda(x).values[k - 1], tol);
}

inline Classification branch_membership_eigen(const MonomialPoly& p,
                                              std::span<const double> a,
                                              std::span<const double> x, int k,
                                              double tol = 1e-8) {
    if (k < 1 || k > p.degree())
        throw std::invalid_argument("branch index out of range");
    return classify_excess(eigenvalues(p, a, x).values[k - 1], tol);
}

// Strict consecutive sign changes after dropping entries within zero_tol.
inline int sign_variation(std::span<const double> sigma, double zero_tol) {
    int var = 0;
    double prev = 0.0;
    for (double s : sigma) {
        if (std::abs(s) <= zero_tol) continue;
        if (prev != 0.0 && ((prev > 0.0) != (s > 0.0))) ++var;
        prev = s;
    }
    return var;
}

inline double default_sigma_zero_tol(std::span<const double> sigma_with_one) {
    return 1e-9 * max_abs(sigma_with_one);
}

// Lemma A.1: x in F_k  <=>  Var(1, sigma_1(x), ..., sigma_m(x)) <= k-1.
inline bool branch_membership_descartes(const MonomialPoly& p,
                                        std::span<const double> a,
                                        std::span<const double> x, int k,
                                        double zero_tol = -1.0) {
    Vec sig = sigma_values(p, a, x);
    Vec full(1, 1.0);
    full.insert(full.end(), sig.begin(), sig.end());
    if (zero_tol < 0.0) zero_tol = default_sigma_zero_tol(full);
    return sign_variation(full, zero_tol) <= k - 1;
}

struct SignVector {
    std::vector<int> entries;  // length m+1, entries in {-1, 0, +1}, first +1
};

struct OrthantDecomposition {
    SignVector signs;
    // All eps with eps_0 = 1 and eps_j sigma_j >= 0; entries 1..m hold +-1.
    std::vector<std::vector<int>> cells;
};

inline OrthantDecomposition sign_orthant_decomposition(
    const MonomialPoly& p, std::span<const double> a, std::span<const double> x,
    double zero_tol = -1.0) {
    Vec sig = sigma_values(p, a, x);
    Vec full(1, 1.0);
    full.insert(full.end(), sig.begin(), sig.end());
    if (zero_tol < 0.0) zero_tol = default_sigma_zero_tol(full);
    OrthantDecomposition out;
    out.signs.entries.resize(full.size());
    std::vector<int> free_idx;
    for (std::size_t j = 0; j < full.size(); ++j) {
        if (std::abs(full[j]) <= zero_tol) {
            out.signs.entries[j] = 0;
            if (j > 0) free_idx.push_back(static_cast<int>(j));
        } else {
            out.signs.entries[j] = full[j] > 0.0 ? 1 : -1;
        }
    }
    const std::size_t n_free = free_idx.size();
    for (std::uint64_t mask = 0; mask < (1ull << n_free); ++mask) {
        std::vector<int> eps(full.size());
        eps[0] = 1;
        for (std::size_t j = 1; j < full.size(); ++j)
            eps[j] = out.signs.entries[j] != 0 ? out.signs.entries[j] : 0;
        for (std::size_t t = 0; t < n_free; ++t)
            eps[free_idx[t]] = (mask >> t) & 1 ? 1 : -1;
        out.cells.push_back(std::move(eps));
    }
    return out;
}

// Classification of x in the Dirichlet dual of F_k, which is F_{m-k+1}.
// The definitional route (x in ~(-Int F_k)) is evaluated as a cross-check;
// a disagreement outside the tolerance band is a hard error.
inline Classification dual_branch_membership(const EigenMap& em,
                                             std::span<const double> x, int k,
                                             double tol) {
    const int m = em.degree;
    Classification via_index = branch_membership_eigen(em, x, m - k + 1, tol);
    Vec nx = negated(x);
    Classification neg_in_fk = branch_membership_eigen(em, nx, k, tol);
    // x in dual(F_k) <=> -x not in Int F_k.
    Classification via_def = neg_in_fk == Classification::Inside
                                 ? Classification::Outside
                             : neg_in_fk == Classification::Outside
                                 ? Classification::Inside
                                 : Classification::Boundary;
    if (via_index != via_def && via_index != Classification::Boundary &&
        via_def != Classification::Boundary)
        throw std::logic_error("dual branch classification inconsistent");
    return via_index;
}

inline Classification dual_branch_membership(const MonomialPoly& p,
                                             std::span<const double> a,
                                             std::span<const double> x, int k,
                                             double tol = 1e-8) {
    return dual_branch_membership(make_eigen_map(p, Vec(a.begin(), a.end())), x,
                                  k, tol);
}

// Theorem 2.31 (c): x lies on the edge iff the directional derivative p'_x
// vanishes identically, tested on the exact monomial coefficients.
inline bool edge_test(const MonomialPoly& p, std::span<const double> x,
                      double tol = 1e-10) {
    if (max_abs(x) == 0.0) return true;
    MonomialPoly d = p.directional_derivative(x);
    const double scale = p.coefficient_scale() * std::max(1.0, max_abs(x));
    return d.all_coefficients_below(tol * scale);
}

struct PlusMinusNorms {
    double plus;   // -lambda_min(x)
    double minus;  // lambda_max(x)
};

struct NotOnHyperplane : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline PlusMinusNorms norms_pm(const EigenMap& em, std::span<const double> x) {
    Vec sig = em.sigma(x);
    if (std::abs(sig[0]) > 1e-8 * std::max(norm2(x), 1e-300) && norm2(x) > 0.0)
        throw NotOnHyperplane("norms_pm: trace_a(x) must vanish");
    EigenList l = em.lambda(x);
    return {-l.values.front(), l.values.back()};
}

inline PlusMinusNorms norms_pm(const MonomialPoly& p, std::span<const double> a,
                               std::span<const double> x) {
    return norms_pm(make_eigen_map(p, Vec(a.begin(), a.end())), x);
}

struct BracketFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Structure Theorem graph function: the unique t with t*a + x0 on the
// boundary of a Garding-monotone set F, located by bracketed bisection.
// `inside` must be monotone along a (true for large t, false for small t).
inline double graph_function(const EigenMap& em,
                             const std::function<bool(std::span<const double>)>& inside,
                             std::span<const double> x0, double bracket_lo,
                             double bracket_hi, double tol = 1e-10) {
    auto probe = [&](double t) {
        Vec pt = axpy(t, em.direction, x0);
        return inside(pt);
    };
    double lo = bracket_lo, hi = bracket_hi;
    const double initial_width = hi - lo;
    const double cap = std::ldexp(initial_width, 40);  // 2^40 * width
    while (!probe(hi)) {
        lo = hi;
        hi += std::max(hi - bracket_lo, initial_width);
        if (hi - bracket_lo > cap)
            throw BracketFailure("graph_function: no boundary above (F empty?)");
    }
    while (probe(lo)) {
        hi = lo;
        lo -= std::max(bracket_hi - lo, initial_width);
        if (bracket_hi - lo > cap)
            throw BracketFailure("graph_function: no boundary below (F everything?)");
    }
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if (probe(mid))
            hi = mid;
        else
            lo = mid;
    }
    return 0.5 * (lo + hi);
}

// Graph function of the branch F_k itself: by the shift property
// lambda^_k(ta + x0) = t + lambda^_k(x0), the boundary height is closed-form.
// The generic bisection path is exercised against this in the tests.
inline double branch_graph_function(const EigenMap& em, int k,
                                    std::span<const double> x0) {
    EigenList l = em.lambda(x0);
    return -l.values[k - 1];
}

}  // namespace garding
