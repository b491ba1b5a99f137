#pragma once

// Eigenvalues along a hyperbolic direction, hyperbolicity verdicts, ranks,
// elementary symmetric functions, and the analytic arrangement of the
// restricted eigenvalue curves.
//
// The central abstraction is EigenMap: anything with an ambient dimension,
// a degree m, and a sorted eigenvalue map x -> lambda^(x). Monomial
// polynomials, spectral matrix models and derived recipes all adapt to it,
// and the branch / universal-set / Dirichlet layers consume only this.

#include <functional>
#include <limits>
#include <memory>
#include <string>

#include "garding/common.hpp"
#include "garding/monomial.hpp"
#include "garding/rng.hpp"
#include "garding/roots.hpp"

namespace garding {

struct EigenList {
    Vec values;            // sorted nondecreasing, length m
    double max_imag = 0.0; // largest imaginary residue discarded
};

struct RankProfile {
    int plus_rank = 0;
    int minus_rank = 0;
    int nullity = 0;
};

struct HyperbolicityVerdict {
    bool confirmed = true;
    int samples_checked = 0;
    Vec witness;          // set when refuted
    double residue = 0.0; // worst imaginary residue at the witness
};

struct TrackingAmbiguous : std::runtime_error {
    double t;
    explicit TrackingAmbiguous(double t_)
        : std::runtime_error("eigenvalue curve matching ambiguous near t=" +
                             std::to_string(t_)),
          t(t_) {}
};

struct CurveBundle {
    Vec t_samples;
    std::vector<Vec> curves;  // m rows, one eigenvalue path each
    std::string arrangement = "analytic-continuation";
    bool strictly_increasing = true;
};

// A hyperbolic structure presented through its eigenvalue map. `direction`
// is the hyperbolic direction a expressed in the same coordinates as x.
struct EigenMap {
    int dim = 0;
    int degree = 0;
    Vec direction;
    double value_at_direction = 1.0;  // p(a) after sign normalization
    bool sign_flipped = false;        // polynomial negated at load (p(a) < 0)
    std::function<EigenList(std::span<const double>)> lambda;
    std::function<double(std::span<const double>)> value;
    std::function<Vec(std::span<const double>)> sigma;  // sigma_1..sigma_m
};

// ----- free functions on (polynomial, direction) -----

inline EigenList eigenvalues(const MonomialPoly& p, std::span<const double> a,
                             std::span<const double> x, double tol = 1e-7) {
    UnivariatePoly r = p.restrict_line(a, x);
    const double pa = r.coeffs[0];
    std::vector<double> monic(r.coeffs.size());
    for (std::size_t i = 0; i < r.coeffs.size(); ++i) monic[i] = r.coeffs[i] / pa;
    RealRootResult rr = real_roots_monic(monic, tol);
    EigenList out;
    out.max_imag = rr.max_imag;
    out.values.reserve(rr.roots.size());
    for (double t : rr.roots) out.values.push_back(-t);
    std::sort(out.values.begin(), out.values.end());
    return out;
}

// sigma_1..sigma_m of lambda(x), read from the normalized restriction
// coefficients; no root extraction involved.
inline Vec sigma_values(const MonomialPoly& p, std::span<const double> a,
                        std::span<const double> x) {
    UnivariatePoly r = p.restrict_line(a, x);
    const double pa = r.coeffs[0];
    Vec s(p.degree());
    for (int j = 1; j <= p.degree(); ++j) s[j - 1] = r.coeffs[j] / pa;
    return s;
}

inline double trace_a(const MonomialPoly& p, std::span<const double> a,
                      std::span<const double> x) {
    return sigma_values(p, a, x)[0];
}

inline double shift_identity_residue(const MonomialPoly& p,
                                     std::span<const double> a,
                                     std::span<const double> x, double t,
                                     double tol = 1e-7) {
    EigenList base = eigenvalues(p, a, x, tol);
    Vec shifted = axpy(t, a, x);
    EigenList moved = eigenvalues(p, a, shifted, tol);
    double worst = 0.0;
    for (int k = 0; k < p.degree(); ++k)
        worst = std::max(worst, std::abs(moved.values[k] - (t + base.values[k])));
    return worst;
}

inline RankProfile rank_profile_of(const Vec& lambda_sorted, double tol) {
    RankProfile r;
    for (double v : lambda_sorted) {
        if (v > tol)
            ++r.plus_rank;
        else if (v < -tol)
            ++r.minus_rank;
        else
            ++r.nullity;
    }
    return r;
}

inline RankProfile rank_profile(const MonomialPoly& p, std::span<const double> a,
                                std::span<const double> x, double tol = 1e-8) {
    return rank_profile_of(eigenvalues(p, a, x).values, tol);
}

// Deterministic stress set: all +-basis vectors and their pairwise sums.
inline std::vector<Vec> basis_probe_points(int d) {
    std::vector<Vec> pts;
    std::vector<Vec> signed_basis;
    for (int j = 0; j < d; ++j)
        for (double s : {1.0, -1.0}) {
            Vec e(d, 0.0);
            e[j] = s;
            signed_basis.push_back(e);
            pts.push_back(e);
        }
    for (std::size_t i = 0; i < signed_basis.size(); ++i)
        for (std::size_t j = i + 1; j < signed_basis.size(); ++j) {
            Vec s = axpy(1.0, signed_basis[i], signed_basis[j]);
            if (max_abs(s) > 0.0) pts.push_back(s);
        }
    return pts;
}

inline HyperbolicityVerdict is_hyperbolic(const MonomialPoly& p,
                                          std::span<const double> a,
                                          int sample_count = 200,
                                          double tol = 1e-7,
                                          std::uint64_t seed = 12345) {
    HyperbolicityVerdict v;
    Rng rng(seed);
    std::vector<Vec> pts = basis_probe_points(p.dim());
    for (int i = 0; i < sample_count; ++i) pts.push_back(rng.unit_vector(p.dim()));
    for (const auto& x : pts) {
        try {
            (void)eigenvalues(p, a, x, tol);
        } catch (const NotRealError& e) {
            v.confirmed = false;
            v.witness = x;
            v.residue = e.residue;
            return v;
        } catch (const DegenerateDirection&) {
            v.confirmed = false;
            v.witness = x;
            v.residue = std::numeric_limits<double>::quiet_NaN();
            return v;
        }
        ++v.samples_checked;
    }
    return v;
}

// ----- EigenMap adapters and helpers -----

// Adapt (p, a). If p(a) < 0 the polynomial is negated once here, so the map
// always satisfies p(a) > 0 (recorded in sign_flipped).
inline EigenMap make_eigen_map(MonomialPoly p, Vec a, double tol = 1e-7) {
    const double pa = p.eval(a);
    if (pa == 0.0) throw DegenerateDirection("make_eigen_map: p(a) = 0");
    EigenMap em;
    em.sign_flipped = pa < 0.0;
    if (em.sign_flipped) p = p * -1.0;
    auto sp = std::make_shared<MonomialPoly>(std::move(p));
    em.dim = sp->dim();
    em.degree = sp->degree();
    em.direction = std::move(a);
    em.value_at_direction = sp->eval(em.direction);
    Vec dir = em.direction;
    em.lambda = [sp, dir, tol](std::span<const double> x) {
        return eigenvalues(*sp, dir, x, tol);
    };
    em.value = [sp](std::span<const double> x) { return sp->eval(x); };
    em.sigma = [sp, dir](std::span<const double> x) {
        return sigma_values(*sp, dir, x);
    };
    return em;
}

// Monic coefficients of prod_k (t + lambda_k), highest degree first.
inline std::vector<double> monic_from_lambda(const Vec& lambda) {
    std::vector<double> c{1.0};
    for (double l : lambda) {
        std::vector<double> n(c.size() + 1, 0.0);
        for (std::size_t i = 0; i < c.size(); ++i) {
            n[i] += c[i];
            n[i + 1] += c[i] * l;
        }
        c.swap(n);
    }
    return c;
}

inline Vec sigma_from_lambda(const Vec& lambda) {
    auto c = monic_from_lambda(lambda);
    return Vec(c.begin() + 1, c.end());
}

// Build an EigenMap from an arbitrary sorted-eigenvalue recipe.
inline EigenMap make_recipe_map(int dim, int degree, Vec direction,
                                std::function<Vec(std::span<const double>)> lam,
                                std::function<double(std::span<const double>)> val) {
    EigenMap em;
    em.dim = dim;
    em.degree = degree;
    em.direction = std::move(direction);
    auto lam_sp = std::make_shared<decltype(lam)>(std::move(lam));
    em.lambda = [lam_sp](std::span<const double> x) {
        EigenList e;
        e.values = (*lam_sp)(x);
        std::sort(e.values.begin(), e.values.end());
        return e;
    };
    em.sigma = [lam_sp](std::span<const double> x) {
        Vec l = (*lam_sp)(x);
        return sigma_from_lambda(l);
    };
    if (val) {
        em.value = std::move(val);
    } else {
        // Fall back to p(a) * prod lambda_k (eq. 2.1 with the map's own scale).
        em.value = [lam_sp](std::span<const double> x) {
            double v = 1.0;
            for (double l : (*lam_sp)(x)) v *= l;
            return v;
        };
    }
    em.value_at_direction = em.value(em.direction);
    return em;
}

inline HyperbolicityVerdict is_hyperbolic(const EigenMap& em,
                                          int sample_count = 200,
                                          double tol = 1e-7,
                                          std::uint64_t seed = 12345) {
    (void)tol;
    HyperbolicityVerdict v;
    Rng rng(seed);
    std::vector<Vec> pts = basis_probe_points(em.dim);
    for (int i = 0; i < sample_count; ++i) pts.push_back(rng.unit_vector(em.dim));
    for (const auto& x : pts) {
        try {
            (void)em.lambda(x);
        } catch (const NotRealError& e) {
            v.confirmed = false;
            v.witness = x;
            v.residue = e.residue;
            return v;
        }
        ++v.samples_checked;
    }
    return v;
}

// ----- Restricted eigenvalue curves (analytic arrangement) -----

namespace detail {

// Match the sorted new values to curves so that values stay close to the
// linear predictions; both lists are sorted, so the order-preserving
// assignment is optimal.
struct CurveState {
    Vec values;
    Vec slopes;
};

inline double min_distinct_gap(const Vec& sorted_vals) {
    double g = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < sorted_vals.size(); ++i) {
        const double d = sorted_vals[i] - sorted_vals[i - 1];
        if (d > 1e-14) g = std::min(g, d);
    }
    return g;
}

}  // namespace detail

// Track the m eigenvalue curves t -> lambda_k(x + t b) for b in the Garding
// cone, arranged by analytic continuation (nearest-neighbour matching on
// linear predictions, with adaptive step halving at close encounters).
inline CurveBundle track_curves(const EigenMap& em, std::span<const double> b,
                                std::span<const double> x, double t_min,
                                double t_max, int steps) {
    if (steps < 2) throw std::invalid_argument("track_curves: steps >= 2");
    {
        EigenList lb = em.lambda(b);
        if (lb.values.front() <= 1e-8 * norm2(b))
            throw ConeViolation("track_curves: b is not interior to the cone");
    }
    const int m = em.degree;
    CurveBundle out;
    out.t_samples.resize(steps);
    out.curves.assign(m, Vec(steps));
    for (int i = 0; i < steps; ++i)
        out.t_samples[i] = t_min + (t_max - t_min) * i / (steps - 1);

    auto lambda_at = [&](double t) {
        Vec pt = axpy(t, b, x);
        return em.lambda(pt).values;  // sorted
    };

    detail::CurveState st;
    st.values = lambda_at(t_min);
    st.slopes.assign(m, 0.0);
    for (int k = 0; k < m; ++k) out.curves[k][0] = st.values[k];

    const double floor_step = 1e-9 * (t_max - t_min);
    double t_cur = t_min;
    // Bootstrap slopes with one short plain-sorted step.
    {
        const double dt0 = (t_max - t_min) / (steps - 1) / 8.0;
        Vec nv = lambda_at(t_cur + dt0);
        for (int k = 0; k < m; ++k) st.slopes[k] = (nv[k] - st.values[k]) / dt0;
    }

    for (int i = 1; i < steps; ++i) {
        const double t_target = out.t_samples[i];
        while (t_cur < t_target - 1e-15 * std::max(1.0, std::abs(t_target))) {
            double dt = t_target - t_cur;
            bool accepted = false;
            while (!accepted) {
                Vec nv = lambda_at(t_cur + dt);  // sorted
                // Predictions, sorted by predicted value (positive slopes keep
                // the curve order induced by predictions).
                Vec pred(m);
                for (int k = 0; k < m; ++k) pred[k] = st.values[k] + st.slopes[k] * dt;
                std::vector<int> order(m);
                for (int k = 0; k < m; ++k) order[k] = k;
                std::sort(order.begin(), order.end(),
                          [&](int u, int v) { return pred[u] < pred[v]; });
                double gap = 0.0;
                for (int r = 0; r < m; ++r)
                    gap = std::max(gap, std::abs(nv[r] - pred[order[r]]));
                const double scale = 1.0 + max_abs(nv);
                const double threshold =
                    std::max(0.5 * detail::min_distinct_gap(nv), 1e-6 * scale);
                if (gap <= threshold || m == 1) {
                    Vec newvals(m);
                    for (int r = 0; r < m; ++r) newvals[order[r]] = nv[r];
                    for (int k = 0; k < m; ++k)
                        st.slopes[k] = (newvals[k] - st.values[k]) / dt;
                    st.values = std::move(newvals);
                    t_cur += dt;
                    accepted = true;
                } else {
                    dt *= 0.5;
                    if (dt < floor_step) throw TrackingAmbiguous(t_cur);
                }
            }
        }
        for (int k = 0; k < m; ++k) out.curves[k][i] = st.values[k];
    }

    for (int k = 0; k < m && out.strictly_increasing; ++k)
        for (int i = 1; i < steps; ++i)
            if (out.curves[k][i] <= out.curves[k][i - 1]) {
                out.strictly_increasing = false;
                break;
            }
    return out;
}

inline CurveBundle track_curves(const MonomialPoly& p, std::span<const double> a,
                                std::span<const double> b,
                                std::span<const double> x, double t_min,
                                double t_max, int steps) {
    return track_curves(make_eigen_map(p, Vec(a.begin(), a.end())), b, x, t_min,
                        t_max, steps);
}

}  // namespace garding
