#pragma once

// Numerical verification of the Garding and Gurvits inequalities, equality
// diagnostics, and the capacity Cap(p; b_1..b_m) = inf p(sum t_i b_i)/prod t_i.
// The capacity optimizer works in log coordinates with the scale gauge
// pinned at s_m = 0; no convexity of the objective is assumed, so it runs
// multi-start with a stationarity residual in the result.

#include <cstdint>
#include <string>

#include "garding/branches.hpp"
#include "garding/common.hpp"
#include "garding/monomial.hpp"
#include "garding/spectra.hpp"

namespace garding {

struct InequalityReport {
    double lhs = 0.0;
    double rhs = 0.0;
    double slack = 0.0;  // oriented: pass condition is slack >= -tol
    bool equality = false;
    std::string diagnostic;
};

struct CapacityConfig {
    int restarts = 8;
    int max_iter = 4000;
    double grad_tol = 1e-9;
    std::uint64_t seed = 1;
};

struct CapacityResult {
    double value = 0.0;
    Vec minimizer;  // positive t, gauge t_m = 1
    double stationarity_residual = 0.0;
    int restarts_used = 0;
    bool converged = false;
    bool boundary_tuple = false;  // some b_i on the cone boundary: unvalidated regime
};

namespace detail {

inline void require_gamma(const MonomialPoly& p, std::span<const double> a,
                          std::span<const double> b, const char* who) {
    EigenList l = eigenvalues(p, a, b);
    if (l.values.front() <= 0.0)
        throw ConeViolation(std::string(who) + ": vector outside the Garding cone");
}

inline std::string eigen_spread_diagnostic(const Vec& lam) {
    const double spread = lam.back() - lam.front();
    return spread <= 1e-7 * (1.0 + std::abs(lam.back())) ? "equal-eigenvalues"
                                                         : "strict";
}

}  // namespace detail

// Fit the two-direction restriction p(sa + tb) to a pure power
// (alpha s + beta t)^m; returns the relative residual of the fit
// (Lemma B.1 (iii) diagnostic).
inline double pure_power_fit_residual(const MonomialPoly& p,
                                      std::span<const double> a,
                                      std::span<const double> b) {
    const int m = p.degree();
    UnivariatePoly u = p.restrict_line(a, b);  // coefficients of s^j in p(sa+b)
    const double pa = u.coeffs[0], pb = u.coeffs[m];
    if (pa <= 0.0 || pb <= 0.0) return 1.0;
    const double alpha = std::pow(pa, 1.0 / m);
    const double beta = std::pow(pb, 1.0 / m);
    double worst = 0.0, scale = 0.0;
    for (int j = 0; j <= m; ++j) {
        const double expect = static_cast<double>(binomial(m, j)) *
                              std::pow(alpha, m - j) * std::pow(beta, j);
        worst = std::max(worst, std::abs(u.coeffs[j] - expect));
        scale = std::max(scale, std::abs(expect));
    }
    return worst / scale;
}

// Garding's basic inequality (B.6): p(b) <= p(a)^(1-m) ((1/m) p'_b(a))^m.
inline InequalityReport garding_basic(const MonomialPoly& p,
                                      std::span<const double> a,
                                      std::span<const double> b,
                                      double tol = 1e-7) {
    detail::require_gamma(p, a, b, "garding_basic");
    const int m = p.degree();
    InequalityReport r;
    r.lhs = p.eval(b);
    const double pa = p.eval(a);
    const double dpb = p.directional_derivative(b).eval(a);
    r.rhs = std::pow(pa, 1.0 - m) * std::pow(dpb / m, m);
    r.slack = r.rhs - r.lhs;
    r.equality = std::abs(r.slack) <= tol * (1.0 + std::abs(r.rhs));
    r.diagnostic = detail::eigen_spread_diagnostic(eigenvalues(p, a, b).values);
    return r;
}

// Pairwise proportionality modulo the edge: for every pair (i, j), some
// scale mu taken from the eigenvalue ratios puts b_i - mu b_j on the edge.
inline bool pairwise_proportional_mod_edge(const MonomialPoly& p,
                                           std::span<const double> a,
                                           const std::vector<Vec>& bs,
                                           double tol = 1e-7) {
    for (std::size_t i = 0; i < bs.size(); ++i)
        for (std::size_t j = i + 1; j < bs.size(); ++j) {
            Vec li = eigenvalues(p, a, bs[i]).values;
            Vec lj = eigenvalues(p, a, bs[j]).values;
            std::vector<double> candidates;
            for (int k = 0; k < p.degree(); ++k)
                if (std::abs(lj[k]) > 1e-12) candidates.push_back(li[k] / lj[k]);
            double ti = 0.0, tj = 0.0;
            for (int k = 0; k < p.degree(); ++k) {
                ti += li[k];
                tj += lj[k];
            }
            if (std::abs(tj) > 1e-12) candidates.push_back(ti / tj);
            bool ok = false;
            for (double mu : candidates) {
                Vec d = axpy(-mu, bs[j], bs[i]);
                if (edge_test(p, d, tol)) {
                    ok = true;
                    break;
                }
            }
            if (!ok) return false;
        }
    return true;
}

// Garding's mixed inequality (B.9): prod p(b_i)^(1/m) <= (1/m!) p^(m)_{b_1..b_m}.
inline InequalityReport garding_mixed(const MonomialPoly& p,
                                      std::span<const double> a,
                                      const std::vector<Vec>& bs,
                                      double tol = 1e-7) {
    const int m = p.degree();
    if (static_cast<int>(bs.size()) != m)
        throw DimensionError("garding_mixed: need exactly m directions");
    for (const auto& b : bs) detail::require_gamma(p, a, b, "garding_mixed");
    InequalityReport r;
    r.lhs = 1.0;
    for (const auto& b : bs) r.lhs *= std::pow(p.eval(b), 1.0 / m);
    r.rhs = polarized_value(p, bs);
    r.slack = r.rhs - r.lhs;
    r.equality = std::abs(r.slack) <= tol * (1.0 + std::abs(r.rhs));
    r.diagnostic = r.equality && pairwise_proportional_mod_edge(p, a, bs)
                       ? "pairwise-proportional-mod-edge"
                       : (r.equality ? "equality" : "strict");
    return r;
}

// Capacity by multi-start gradient descent in log coordinates.
inline CapacityResult capacity(const MonomialPoly& p, const std::vector<Vec>& bs,
                               const CapacityConfig& cfg = {}) {
    const int m = p.degree();
    if (static_cast<int>(bs.size()) != m)
        throw DimensionError("capacity: need exactly m vectors");
    CapacityResult res;
    for (const auto& b : bs) {
        EigenList l = eigenvalues(p, bs[0], b);
        if (l.values.front() < -1e-10 * (1.0 + norm2(b)))
            throw ConeViolation("capacity: vector outside the closed cone");
        if (l.values.front() <= 1e-10 * (1.0 + norm2(b))) res.boundary_tuple = true;
    }

    std::vector<MonomialPoly> grads;  // p'_{b_i}
    grads.reserve(m);
    for (const auto& b : bs) grads.push_back(p.directional_derivative(b));

    const int nv = m - 1;  // gauge: s_m = 0
    auto assemble = [&](const Vec& s) {
        Vec y(p.dim(), 0.0);
        for (int i = 0; i < m; ++i) {
            const double t = std::exp(i < nv ? s[i] : 0.0);
            for (int j = 0; j < p.dim(); ++j) y[j] += t * bs[i][j];
        }
        return y;
    };
    auto objective = [&](const Vec& s) {
        Vec y = assemble(s);
        double g = std::log(p.eval(y));
        for (int i = 0; i < nv; ++i) g -= s[i];
        return g;
    };
    auto gradient = [&](const Vec& s) {
        Vec y = assemble(s);
        const double py = p.eval(y);
        Vec g(nv);
        for (int i = 0; i < nv; ++i)
            g[i] = std::exp(s[i]) * grads[i].eval(y) / py - 1.0;
        return g;
    };

    Rng rng(cfg.seed);
    double best_val = std::numeric_limits<double>::infinity();
    Vec best_s(nv, 0.0);
    double best_res = std::numeric_limits<double>::infinity();

    for (int restart = 0; restart <= cfg.restarts; ++restart) {
        ++res.restarts_used;
        Vec s = restart == 0 ? Vec(nv, 0.0) : rng.box(nv, -2.0, 2.0);
        double f = objective(s);
        Vec g = gradient(s);
        double step = 1.0;
        Vec s_prev = s, g_prev = g;
        for (int it = 0; it < cfg.max_iter; ++it) {
            const double gn = norm2(g);
            if (gn <= cfg.grad_tol) break;
            // Backtracking line search along -g.
            double alpha = step;
            bool moved = false;
            for (int bt = 0; bt < 40; ++bt) {
                Vec cand(nv);
                for (int i = 0; i < nv; ++i) cand[i] = s[i] - alpha * g[i];
                const double fc = objective(cand);
                if (fc <= f - 1e-4 * alpha * gn * gn) {
                    s_prev = s;
                    g_prev = g;
                    s = cand;
                    f = fc;
                    g = gradient(s);
                    moved = true;
                    break;
                }
                alpha *= 0.5;
            }
            if (!moved) break;
            // Barzilai-Borwein step for the next iteration.
            Vec ds(nv), dg(nv);
            for (int i = 0; i < nv; ++i) {
                ds[i] = s[i] - s_prev[i];
                dg[i] = g[i] - g_prev[i];
            }
            const double num = dot(ds, ds), den = dot(ds, dg);
            step = den > 1e-300 ? std::min(num / den, 1e3) : 1.0;
            if (step <= 0.0) step = 1.0;
        }
        const double resid = norm2(gradient(s));
        if (f < best_val) {
            best_val = f;
            best_s = s;
            best_res = resid;
        }
    }

    res.value = std::exp(best_val);
    res.stationarity_residual = best_res;
    res.converged = best_res <= std::max(cfg.grad_tol, 1e-8);
    res.minimizer.assign(m, 1.0);
    for (int i = 0; i < nv; ++i) res.minimizer[i] = std::exp(best_s[i]);
    return res;
}

// Gurvits' two-point inequality (B.7):
// ((m-1)^(m-1)/m^m) inf_t p(a+tb)/t <= (1/m) p'_b(a).
inline InequalityReport gurvits_two_point(const MonomialPoly& p,
                                          std::span<const double> a,
                                          std::span<const double> b,
                                          double tol = 1e-7) {
    const int m = p.degree();
    if (m < 2) throw std::invalid_argument("gurvits_two_point: m >= 2");
    detail::require_gamma(p, a, b, "gurvits_two_point");
    UnivariatePoly u = p.restrict_line(b, a);  // t -> p(tb + a)
    auto h = [&](double t) { return u.eval(t) / t; };
    // Logarithmic scan then golden section; h blows up at both ends.
    double best_t = 1.0, best = h(1.0);
    for (int i = 0; i < 64; ++i) {
        const double t = std::pow(10.0, -8.0 + 16.0 * i / 63.0);
        const double v = h(t);
        if (v < best) {
            best = v;
            best_t = t;
        }
    }
    double lo = best_t / 10.0, hi = best_t * 10.0;
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
    double f1 = h(x1), f2 = h(x2);
    while ((hi - lo) > 1e-10 * hi) {
        if (f1 < f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - gr * (hi - lo);
            f1 = h(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + gr * (hi - lo);
            f2 = h(x2);
        }
    }
    const double inf_val = h(0.5 * (lo + hi));

    InequalityReport r;
    r.lhs = std::pow(m - 1.0, m - 1) / std::pow(double(m), m) * inf_val;
    r.rhs = p.directional_derivative(b).eval(a) / m;
    r.slack = r.rhs - r.lhs;
    r.equality = std::abs(r.slack) <= tol * (1.0 + std::abs(r.rhs));
    r.diagnostic = detail::eigen_spread_diagnostic(eigenvalues(p, a, b).values);
    return r;
}

// Gurvits' capacity inequality (B.14): (1/m^m) Cap(p) <= (1/m!) p^(m).
inline InequalityReport gurvits_capacity(const MonomialPoly& p,
                                         const std::vector<Vec>& bs,
                                         const CapacityConfig& cfg = {},
                                         double tol = 1e-7) {
    const int m = p.degree();
    CapacityResult cap = capacity(p, bs, cfg);
    InequalityReport r;
    r.lhs = cap.value / std::pow(double(m), m);
    r.rhs = polarized_value(p, bs);
    r.slack = r.rhs - r.lhs;
    const double band = tol * (1.0 + std::abs(r.rhs)) + cap.stationarity_residual;
    r.equality = std::abs(r.slack) <= band;
    r.diagnostic = cap.boundary_tuple ? "unvalidated regime (boundary tuple)"
                                      : (r.equality ? "equality" : "strict");
    return r;
}

}  // namespace garding
