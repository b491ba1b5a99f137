#pragma once

// Exact sparse representation of homogeneous polynomials on R^d, with the
// operations needed downstream: evaluation, directional derivatives,
// restriction to lines, polarization, products and subspace pullbacks.
// Everything here is plain monomial arithmetic in double precision.

#include <algorithm>
#include <map>
#include <numeric>
#include <span>
#include <vector>

#include "garding/common.hpp"

namespace garding {

struct UnivariatePoly {
    // Coefficients of t -> p(ta+x), highest degree first; coeffs[0] = p(a).
    std::vector<double> coeffs;

    int degree() const { return static_cast<int>(coeffs.size()) - 1; }

    double eval(double t) const {
        double v = 0.0;
        for (double c : coeffs) v = v * t + c;
        return v;
    }

    UnivariatePoly derivative() const {
        const int m = degree();
        UnivariatePoly d;
        if (m <= 0) return d;
        d.coeffs.resize(m);
        for (int i = 0; i < m; ++i) d.coeffs[i] = coeffs[i] * double(m - i);
        return d;
    }
};

class MonomialPoly {
   public:
    using Exponent = std::vector<int>;
    using TermMap = std::map<Exponent, double>;

    MonomialPoly() = default;

    MonomialPoly(int dim, int degree, TermMap terms)
        : dim_(dim), degree_(degree), terms_(std::move(terms)) {
        for (const auto& [e, c] : terms_) {
            if (static_cast<int>(e.size()) != dim_)
                throw DimensionError("exponent length does not match dim");
            if (std::accumulate(e.begin(), e.end(), 0) != degree_)
                throw DimensionError("exponent does not sum to degree");
        }
        prune();
    }

    int dim() const { return dim_; }
    int degree() const { return degree_; }
    const TermMap& terms() const { return terms_; }

    double coefficient_scale() const {
        double s = 0.0;
        for (const auto& [e, c] : terms_) s = std::max(s, std::abs(c));
        return s;
    }

    double eval(std::span<const double> x) const {
        if (static_cast<int>(x.size()) != dim_)
            throw DimensionError("eval: point has wrong dimension");
        double sum = 0.0;
        for (const auto& [e, c] : terms_) {
            double t = c;
            for (int j = 0; j < dim_; ++j)
                for (int k = 0; k < e[j]; ++k) t *= x[j];
            sum += t;
        }
        return sum;
    }

    // d/dt p(y + t b) at t = 0, exactly on monomials. Degree drops by one.
    MonomialPoly directional_derivative(std::span<const double> b) const {
        if (static_cast<int>(b.size()) != dim_)
            throw DimensionError("directional_derivative: direction dimension");
        if (degree_ < 1)
            throw std::invalid_argument("directional_derivative: degree must be >= 1");
        TermMap out;
        for (const auto& [e, c] : terms_) {
            for (int j = 0; j < dim_; ++j) {
                if (e[j] == 0 || b[j] == 0.0) continue;
                Exponent f = e;
                f[j] -= 1;
                out[f] += c * e[j] * b[j];
            }
        }
        return MonomialPoly(dim_, degree_ - 1, std::move(out));
    }

    // Coefficients of t -> p(ta + x), highest degree first.
    // Leading coefficient is p(a), constant term is p(x).
    UnivariatePoly restrict_line(std::span<const double> a,
                                 std::span<const double> x) const {
        if (static_cast<int>(a.size()) != dim_ || static_cast<int>(x.size()) != dim_)
            throw DimensionError("restrict_line: vector dimensions");
        const double pa = eval(a);
        const double scale = coefficient_scale();
        double an = 0.0;
        for (double v : a) an = std::max(an, std::abs(v));
        double gate = 1e-10 * scale;
        for (int k = 0; k < degree_; ++k) gate *= std::max(an, 1e-30);
        if (std::abs(pa) <= gate)
            throw DegenerateDirection("restrict_line: p(a) vanishes");

        std::vector<double> acc(degree_ + 1, 0.0);  // lowest degree first
        std::vector<double> term, next;
        for (const auto& [e, c] : terms_) {
            term.assign(1, c);
            for (int j = 0; j < dim_; ++j) {
                for (int k = 0; k < e[j]; ++k) {
                    // multiply by (a_j t + x_j)
                    next.assign(term.size() + 1, 0.0);
                    for (std::size_t i = 0; i < term.size(); ++i) {
                        next[i] += term[i] * x[j];
                        next[i + 1] += term[i] * a[j];
                    }
                    term.swap(next);
                }
            }
            for (std::size_t i = 0; i < term.size(); ++i) acc[i] += term[i];
        }
        UnivariatePoly u;
        u.coeffs.assign(acc.rbegin(), acc.rend());
        return u;
    }

    MonomialPoly operator*(const MonomialPoly& q) const {
        if (dim_ != q.dim_) throw DimensionError("product: dimension mismatch");
        TermMap out;
        for (const auto& [e1, c1] : terms_)
            for (const auto& [e2, c2] : q.terms_) {
                Exponent e = e1;
                for (int j = 0; j < dim_; ++j) e[j] += e2[j];
                out[e] += c1 * c2;
            }
        return MonomialPoly(dim_, degree_ + q.degree_, std::move(out));
    }

    MonomialPoly operator*(double s) const {
        TermMap out = terms_;
        for (auto& [e, c] : out) c *= s;
        return MonomialPoly(dim_, degree_, std::move(out));
    }

    MonomialPoly operator+(const MonomialPoly& q) const {
        if (dim_ != q.dim_ || degree_ != q.degree_)
            throw DimensionError("sum: shape mismatch");
        TermMap out = terms_;
        for (const auto& [e, c] : q.terms_) out[e] += c;
        return MonomialPoly(dim_, degree_, std::move(out));
    }

    // Pullback along the linear map y -> W y, where the columns of W
    // (given as basis vectors in V) span the subspace. Result lives on R^r.
    MonomialPoly pullback(const std::vector<Vec>& basis) const {
        const int r = static_cast<int>(basis.size());
        for (const auto& w : basis)
            if (static_cast<int>(w.size()) != dim_)
                throw DimensionError("pullback: basis vector dimension");
        // Linear forms x_j = sum_i basis[i][j] y_i as degree-1 polynomials.
        std::vector<MonomialPoly> forms;
        forms.reserve(dim_);
        for (int j = 0; j < dim_; ++j) {
            TermMap t;
            for (int i = 0; i < r; ++i) {
                if (basis[i][j] == 0.0) continue;
                Exponent e(r, 0);
                e[i] = 1;
                t[e] = basis[i][j];
            }
            if (t.empty()) {
                Exponent e(r, 0);
                e[0] = 1;
                t[e] = 0.0;
            }
            forms.push_back(MonomialPoly(r, 1, std::move(t)));
        }
        TermMap out;
        MonomialPoly acc(r, 0, TermMap{});
        bool first = true;
        for (const auto& [e, c] : terms_) {
            TermMap unit;
            unit[Exponent(r, 0)] = c;
            MonomialPoly term(r, 0, std::move(unit));
            for (int j = 0; j < dim_; ++j)
                for (int k = 0; k < e[j]; ++k) term = term * forms[j];
            if (first) {
                acc = term;
                first = false;
            } else {
                acc = acc + term;
            }
        }
        return acc;
    }

    bool all_coefficients_below(double threshold) const {
        for (const auto& [e, c] : terms_)
            if (std::abs(c) > threshold) return false;
        return true;
    }

   private:
    void prune() {
        const double gate = 1e-14 * coefficient_scale();
        for (auto it = terms_.begin(); it != terms_.end();) {
            if (std::abs(it->second) <= gate)
                it = terms_.erase(it);
            else
                ++it;
        }
    }

    int dim_ = 0;
    int degree_ = 0;
    TermMap terms_;
};

// Completely polarized form: (1/m!) * d^m/dt_1..dt_m p(t_1 b_1 + ... + t_m b_m),
// computed by m exact nested directional derivatives. The nesting ends in a
// degree-zero polynomial; constancy is verified by evaluating at two points.
inline double polarized_value(const MonomialPoly& p,
                              const std::vector<Vec>& dirs) {
    if (static_cast<int>(dirs.size()) != p.degree())
        throw DimensionError("polarized_value: need exactly m directions");
    MonomialPoly q = p;
    for (const auto& b : dirs) q = q.directional_derivative(b);
    Vec zero(p.dim(), 0.0);
    Vec ones(p.dim(), 1.0);
    const double v0 = q.eval(zero);
    const double v1 = q.eval(ones);
    if (std::abs(v0 - v1) > 1e-9 * (1.0 + std::abs(v0)))
        throw std::logic_error("polarized_value: nested derivative not constant");
    return v0 / static_cast<double>(factorial(p.degree()));
}

// ----- Stock polynomials used by tests, instances and the CLI -----

namespace poly {

// x_1^2 - x_2^2 - ... - x_d^2 (Lorentz form), hyperbolic in e_1.
inline MonomialPoly lorentz(int d) {
    MonomialPoly::TermMap t;
    for (int j = 0; j < d; ++j) {
        MonomialPoly::Exponent e(d, 0);
        e[j] = 2;
        t[e] = (j == 0) ? 1.0 : -1.0;
    }
    return MonomialPoly(d, 2, std::move(t));
}

// x_1 x_2 ... x_m on R^m, hyperbolic in e = (1,..,1).
inline MonomialPoly coordinate_product(int m) {
    MonomialPoly::Exponent e(m, 1);
    MonomialPoly::TermMap t;
    t[e] = 1.0;
    return MonomialPoly(m, m, std::move(t));
}

// (1/3)(xy + xz + yz) on R^3, hyperbolic in (1,1,1).
inline MonomialPoly sigma2_r3() {
    MonomialPoly::TermMap t;
    t[{1, 1, 0}] = 1.0 / 3.0;
    t[{1, 0, 1}] = 1.0 / 3.0;
    t[{0, 1, 1}] = 1.0 / 3.0;
    return MonomialPoly(3, 2, std::move(t));
}

// (c . x)^m on R^d.
inline MonomialPoly linear_power(const Vec& c, int m) {
    const int d = static_cast<int>(c.size());
    MonomialPoly::TermMap t;
    for (int j = 0; j < d; ++j) {
        if (c[j] == 0.0) continue;
        MonomialPoly::Exponent e(d, 0);
        e[j] = 1;
        t[e] = c[j];
    }
    MonomialPoly lin(d, 1, std::move(t));
    MonomialPoly out = lin;
    for (int k = 1; k < m; ++k) out = out * lin;
    return out;
}

// Index of entry (i,j), i<=j, in the upper-triangular coordinates of
// Sym^2(R^n): row-major over the upper triangle.
inline int sym_index(int n, int i, int j) {
    if (i > j) std::swap(i, j);
    return i * n - i * (i - 1) / 2 + (j - i);
}

inline int sym_dim(int n) { return n * (n + 1) / 2; }

// Expanded determinant of a symmetric n x n matrix as a polynomial in the
// n(n+1)/2 upper-triangular coordinates. n <= 4 (n! terms).
inline MonomialPoly sym_determinant(int n) {
    if (n < 1 || n > 4)
        throw std::invalid_argument("sym_determinant: supported for n <= 4 only");
    const int d = sym_dim(n);
    MonomialPoly::TermMap t;
    std::vector<int> perm(n);
    for (int i = 0; i < n; ++i) perm[i] = i;
    do {
        int inversions = 0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                if (perm[i] > perm[j]) ++inversions;
        const double sgn = (inversions % 2 == 0) ? 1.0 : -1.0;
        MonomialPoly::Exponent e(d, 0);
        for (int i = 0; i < n; ++i) e[sym_index(n, i, perm[i])] += 1;
        t[e] += sgn;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return MonomialPoly(d, n, std::move(t));
}

// The identity matrix in upper-triangular coordinates.
inline Vec sym_identity(int n) {
    Vec v(sym_dim(n), 0.0);
    for (int i = 0; i < n; ++i) v[sym_index(n, i, i)] = 1.0;
    return v;
}

}  // namespace poly

}  // namespace garding
