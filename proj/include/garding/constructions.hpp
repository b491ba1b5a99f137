#pragma once

// Building new hyperbolic structures from old ones. Two realization paths:
// exact monomial arithmetic (products, restrictions, derivatives, sigma_k)
// and spectral recipes that transform eigenvalue lists without ever
// expanding a polynomial (compositions, k-fold sums, delta perturbation,
// permuted linear products). Recipes compose with any EigenMap base, so the
// same machinery serves polynomials and matrix models.

#include <optional>
#include <string>

#include "garding/branches.hpp"
#include "garding/common.hpp"
#include "garding/spectra.hpp"

namespace garding {

struct DerivedPoly {
    std::string kind;
    EigenMap map;                       // realized eigenvalue map
    std::optional<MonomialPoly> exact;  // present on the exact path
    // parameters, kept for serialization of the construction tree
    int k = 0;
    double delta = 0.0;
    Vec w;
};

struct InterlacingViolation : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

inline void require_in_cone(const EigenMap& base, std::span<const double> b,
                            const char* who) {
    EigenList l = base.lambda(b);
    if (l.values.front() <= 1e-8 * std::max(1.0, norm2(b)))
        throw ConeViolation(std::string(who) + ": direction not in the cone");
}

}  // namespace detail

// I. Products: Gamma(pq) = Gamma(p) cap Gamma(q).
inline DerivedPoly product(const MonomialPoly& p, const MonomialPoly& q,
                           const Vec& a, int verify_samples = 32) {
    if (p.dim() != q.dim()) throw DimensionError("product: dimension mismatch");
    if (!is_hyperbolic(p, a, verify_samples).confirmed ||
        !is_hyperbolic(q, a, verify_samples).confirmed)
        throw ConeViolation("product: factors must share the hyperbolic direction");
    DerivedPoly d;
    d.kind = "product";
    d.exact = p * q;
    d.map = make_eigen_map(*d.exact, a);
    return d;
}

// II. Restriction to a subspace W = span(basis); b_in_W in W-coordinates.
inline DerivedPoly restrict_subspace(const MonomialPoly& p,
                                     const std::vector<Vec>& basis,
                                     const Vec& b_in_w) {
    const int r = static_cast<int>(basis.size());
    if (static_cast<int>(b_in_w.size()) != r)
        throw DimensionError("restrict_subspace: direction has wrong length");
    Vec b_ambient(p.dim(), 0.0);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < p.dim(); ++j) b_ambient[j] += b_in_w[i] * basis[i][j];
    if (p.eval(b_ambient) <= 0.0 || !is_hyperbolic(p, b_ambient, 16).confirmed)
        throw ConeViolation("restrict_subspace: b outside the cone");
    DerivedPoly d;
    d.kind = "restriction";
    d.exact = p.pullback(basis);
    d.map = make_eigen_map(*d.exact, b_in_w);
    return d;
}

// IV. Directional derivative with interlacing verification (2.23).
inline DerivedPoly derivative_poly(const MonomialPoly& p, const Vec& a,
                                   const Vec& b, int verify_samples = 16,
                                   std::uint64_t seed = 7) {
    if (p.degree() < 2)
        throw std::invalid_argument("derivative_poly: degree must be >= 2");
    detail::require_in_cone(make_eigen_map(p, a), b, "derivative_poly");
    DerivedPoly d;
    d.kind = "derivative";
    d.exact = p.directional_derivative(b);
    d.map = make_eigen_map(*d.exact, a);

    Rng rng(seed);
    for (int s = 0; s < verify_samples; ++s) {
        Vec x = rng.vector(p.dim());
        Vec lam = eigenvalues(p, b, x).values;
        Vec lamd = eigenvalues(*d.exact, b, x).values;
        const double slack = 1e-7 * (1.0 + max_abs(lam));
        for (int k = 0; k + 1 < p.degree(); ++k) {
            if (lamd[k] < lam[k] - slack || lamd[k] > lam[k + 1] + slack)
                throw InterlacingViolation(
                    "derivative eigenvalues fail to interlace");
        }
    }
    return d;
}

// V. Elementary symmetric polynomial sigma_j of the eigenvalues, realized
// exactly as the rescaled (m-j)-th derivative in the direction a (2.26).
inline DerivedPoly sigma_poly(const MonomialPoly& p, const Vec& a, int j) {
    const int m = p.degree();
    if (j < 1 || j > m) throw std::invalid_argument("sigma_poly: 1 <= j <= m");
    MonomialPoly q = p;
    for (int i = 0; i < m - j; ++i) q = q.directional_derivative(a);
    const double scale = 1.0 / (static_cast<double>(factorial(m - j)) * p.eval(a));
    DerivedPoly d;
    d.kind = "sigma";
    d.k = j;
    d.exact = q * scale;
    d.map = make_eigen_map(*d.exact, a);
    return d;
}

// VI. Universal composition q(x) = Q(lambda(x)) for a symmetric e-hyperbolic
// Q on R^m; eigenvalues are Q's e-eigenvalues evaluated on lambda(x).
// Never expanded: the recipe is evaluated spectrally.
inline DerivedPoly universal_compose(const MonomialPoly& Q, const EigenMap& base,
                                     std::uint64_t seed = 11) {
    const int m = base.degree;
    if (Q.dim() != m)
        throw DimensionError("universal_compose: Q must live on R^m");
    Vec e(m, 1.0);
    if (Q.eval(e) <= 0.0)
        throw std::invalid_argument("universal_compose: Q(e) must be positive");
    {
        Rng rng(seed);
        for (int t = 0; t < 20; ++t) {
            Vec pt = rng.vector(m);
            const double v = Q.eval(pt);
            for (int s = 0; s < 10; ++s) {
                auto perm = rng.permutation(m);
                Vec pp(m);
                for (int i = 0; i < m; ++i) pp[i] = pt[perm[i]];
                if (std::abs(Q.eval(pp) - v) > 1e-9 * (1.0 + std::abs(v)))
                    throw std::invalid_argument("universal_compose: Q not symmetric");
            }
        }
        if (!is_hyperbolic(Q, e, 50).confirmed)
            throw std::invalid_argument("universal_compose: Q not e-hyperbolic");
    }
    auto Qs = std::make_shared<MonomialPoly>(Q);
    auto base_sp = std::make_shared<EigenMap>(base);
    DerivedPoly d;
    d.kind = "composed";
    d.map = make_recipe_map(
        base.dim, Q.degree(), base.direction,
        [Qs, base_sp, e](std::span<const double> x) {
            Vec lam = base_sp->lambda(x).values;
            return eigenvalues(*Qs, e, lam).values;
        },
        [Qs, base_sp](std::span<const double> x) {
            Vec lam = base_sp->lambda(x).values;
            return Qs->eval(lam);
        });
    return d;
}

// k-fold sums (Prop 2.29): eigenvalues (1/k)(lambda_{i1}+...+lambda_{ik}),
// value prod over subsets of the raw k-fold sums.
inline DerivedPoly kfold_sum_poly(const EigenMap& base, int k) {
    const int m = base.degree;
    if (k < 1 || k > m) throw std::invalid_argument("kfold_sum_poly: 1 <= k <= m");
    auto base_sp = std::make_shared<EigenMap>(base);
    auto subset_sums = [m, k, base_sp](std::span<const double> x) {
        Vec lam = base_sp->lambda(x).values;
        Vec sums;
        std::vector<int> idx(k);
        for (int i = 0; i < k; ++i) idx[i] = i;
        while (true) {
            double s = 0.0;
            for (int i : idx) s += lam[i];
            sums.push_back(s);
            int pos = k - 1;
            while (pos >= 0 && idx[pos] == m - k + pos) --pos;
            if (pos < 0) break;
            ++idx[pos];
            for (int i = pos + 1; i < k; ++i) idx[i] = idx[i - 1] + 1;
        }
        return sums;
    };
    DerivedPoly d;
    d.kind = "kfold";
    d.k = k;
    d.map = make_recipe_map(
        base.dim, static_cast<int>(binomial(m, k)), base.direction,
        [subset_sums, k](std::span<const double> x) {
            Vec s = subset_sums(x);
            for (double& v : s) v /= k;
            return s;
        },
        [subset_sums](std::span<const double> x) {
            double v = 1.0;
            for (double s : subset_sums(x)) v *= s;
            return v;
        });
    return d;
}

// Delta-uniformly-elliptic perturbation (Prop 2.30): eigenvalues
// (lambda_k + delta tr lambda)/(1 + m delta), value prod(lambda_k + delta tr).
inline DerivedPoly delta_elliptic(const EigenMap& base, double delta) {
    if (delta <= 0.0) throw std::invalid_argument("delta_elliptic: delta > 0");
    const int m = base.degree;
    auto base_sp = std::make_shared<EigenMap>(base);
    DerivedPoly d;
    d.kind = "delta";
    d.delta = delta;
    d.map = make_recipe_map(
        base.dim, m, base.direction,
        [base_sp, delta, m](std::span<const double> x) {
            Vec lam = base_sp->lambda(x).values;
            double tr = 0.0;
            for (double l : lam) tr += l;
            for (double& l : lam) l = (l + delta * tr) / (1.0 + m * delta);
            return lam;
        },
        [base_sp, delta](std::span<const double> x) {
            Vec lam = base_sp->lambda(x).values;
            double tr = 0.0;
            for (double l : lam) tr += l;
            double v = 1.0;
            for (double l : lam) v *= l + delta * tr;
            return v;
        });
    return d;
}

// Permuted linear products (Prop 2.27): degree m!, eigenvalues
// (sigma w).lambda / (w.e) over all permutations sigma.
inline DerivedPoly perm_product_poly(const EigenMap& base, const Vec& w) {
    const int m = base.degree;
    if (static_cast<int>(w.size()) != m)
        throw DimensionError("perm_product_poly: weight length");
    double we = 0.0;
    for (double v : w) we += v;
    if (we <= 0.0) throw std::invalid_argument("perm_product_poly: w.e > 0 required");
    if (m > 5)
        throw std::invalid_argument("perm_product_poly: m <= 5 (factorial guard)");
    auto base_sp = std::make_shared<EigenMap>(base);
    Vec wc = w;
    auto dots = [base_sp, wc, m](std::span<const double> x) {
        Vec lam = base_sp->lambda(x).values;
        Vec out;
        std::vector<int> perm(m);
        for (int i = 0; i < m; ++i) perm[i] = i;
        do {
            double s = 0.0;
            for (int i = 0; i < m; ++i) s += wc[perm[i]] * lam[i];
            out.push_back(s);
        } while (std::next_permutation(perm.begin(), perm.end()));
        return out;
    };
    DerivedPoly d;
    d.kind = "perm_product";
    d.w = w;
    d.map = make_recipe_map(
        base.dim, static_cast<int>(factorial(m)), base.direction,
        [dots, we](std::span<const double> x) {
            Vec s = dots(x);
            for (double& v : s) v /= we;
            return s;
        },
        [dots](std::span<const double> x) {
            double v = 1.0;
            for (double s : dots(x)) v *= s;
            return v;
        });
    return d;
}

// Krylov-type membership (Ex 5.29): sign of p(x) - sum_k c_k p^(k)(x) on the
// closed cone, with p^(k) the k-th derivative in the direction a.
inline Classification krylov_membership(const MonomialPoly& p, const Vec& a,
                                        std::span<const double> x,
                                        const Vec& c, double tol = 1e-8) {
    const int m = p.degree();
    if (static_cast<int>(c.size()) != m)
        throw std::invalid_argument("krylov_membership: need c_0..c_{m-1}");
    for (double ck : c)
        if (ck < 0.0)
            throw std::invalid_argument("krylov_membership: coefficients >= 0");
    EigenList l = eigenvalues(p, a, x);
    if (l.values.front() < -membership_tol(x))
        throw ConeViolation("krylov_membership: x outside the closed cone");
    double v = p.eval(x);
    double scale = 1.0 + std::abs(v);
    MonomialPoly q = p;
    for (int k = 0; k < m; ++k) {
        if (c[k] != 0.0) {
            const double term = c[k] * q.eval(x);
            v -= term;
            scale += std::abs(term);
        }
        if (k + 1 < m) q = q.directional_derivative(a);
    }
    return classify_excess(v, tol * scale);
}

// Convenience overloads on (p, a).
inline DerivedPoly kfold_sum_poly(const MonomialPoly& p, const Vec& a, int k) {
    return kfold_sum_poly(make_eigen_map(p, a), k);
}
inline DerivedPoly delta_elliptic(const MonomialPoly& p, const Vec& a,
                                  double delta) {
    return delta_elliptic(make_eigen_map(p, a), delta);
}
inline DerivedPoly perm_product_poly(const MonomialPoly& p, const Vec& a,
                                     const Vec& w) {
    return perm_product_poly(make_eigen_map(p, a), w);
}
inline DerivedPoly universal_compose(const MonomialPoly& Q, const MonomialPoly& p,
                                     const Vec& a) {
    return universal_compose(Q, make_eigen_map(p, a));
}

}  // namespace garding
