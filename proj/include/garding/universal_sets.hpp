#pragma once

// Universal eigenvalue subequations E in R^m: symmetric, closed,
// positive-orphant-monotone sets given as predicate families. Each variant
// exposes two quantities:
//   excess(lambda): the defining inequality's slack (>= 0 inside),
//   shift_excess(lambda): the t with lambda - t e on the boundary of E,
// which is what the Dirichlet discretization consumes. For every variant
// except the special Lagrangian family the shift excess is closed-form.

#include <cstdint>
#include <functional>
#include <memory>
#include <numbers>
#include <string>

#include "garding/common.hpp"
#include "garding/matrix_models.hpp"
#include "garding/roots.hpp"
#include "garding/spectra.hpp"

namespace garding {

class UniversalSet {
   public:
    std::string variant;
    int m = 0;
    int k = 0;  // branch index
    int p = 0;  // subset size (elem_symmetric / pconvex)
    int r = 0;  // required count (pconvex)
    double delta = 0.0;
    double c = 0.0;
    Vec w;
    std::function<double(std::span<const double>)> graph_f;  // variant "graph"
    std::shared_ptr<const UniversalSet> base;                // variant "dual"

    double excess(std::span<const double> lambda) const;
    double shift_excess(std::span<const double> lambda) const;
};

inline UniversalSet branch_set(int m, int k) {
    UniversalSet e;
    e.variant = "branch";
    e.m = m;
    e.k = k;
    return e;
}

inline UniversalSet elem_symmetric_set(int m, int p, int k) {
    UniversalSet e;
    e.variant = "elem_symmetric_branch";
    e.m = m;
    e.p = p;
    e.k = k;
    return e;
}

inline UniversalSet pconvex_set(int m, int p, int r) {
    UniversalSet e;
    e.variant = "pconvex_branch";
    e.m = m;
    e.p = p;
    e.r = r;
    return e;
}

inline UniversalSet delta_set(int m, double delta, int k) {
    UniversalSet e;
    e.variant = "delta_branch";
    e.m = m;
    e.delta = delta;
    e.k = k;
    return e;
}

inline UniversalSet special_lagrangian_set(int m, double c) {
    UniversalSet e;
    e.variant = "special_lagrangian";
    e.m = m;
    e.c = c;
    return e;
}

inline UniversalSet halfspace_set(Vec w, double c) {
    UniversalSet e;
    e.variant = "halfspace";
    e.m = static_cast<int>(w.size());
    e.w = std::move(w);
    e.c = c;
    return e;
}

inline UniversalSet graph_set(int m,
                              std::function<double(std::span<const double>)> f) {
    UniversalSet e;
    e.variant = "graph";
    e.m = m;
    e.graph_f = std::move(f);
    return e;
}

inline UniversalSet dual_set(const UniversalSet& e) {
    UniversalSet d;
    d.variant = "dual";
    d.m = e.m;
    d.base = std::make_shared<UniversalSet>(e);
    return d;
}

namespace detail {

inline Vec sorted_copy(std::span<const double> v) {
    Vec s(v.begin(), v.end());
    std::sort(s.begin(), s.end());
    return s;
}

// Ordered e-eigenvalues of sigma_p at lambda, from the closed-form
// restriction sigma_p(lambda + t e) = sum_j C(m-j, p-j) sigma_j(lambda) t^(p-j).
inline Vec elem_symmetric_eigenvalues(std::span<const double> lambda, int m,
                                      int p) {
    Vec sig = sigma_from_lambda(Vec(lambda.begin(), lambda.end()));
    // highest degree first: the t^(p-j) coefficient is C(m-j, p-j) sigma_j.
    std::vector<double> monic(p + 1);
    const double lead = static_cast<double>(binomial(m, p));
    for (int j = 0; j <= p; ++j) {
        const double sj = (j == 0) ? 1.0 : sig[j - 1];
        monic[j] = static_cast<double>(binomial(m - j, p - j)) * sj / lead;
    }
    RealRootResult rr = real_roots_monic(monic, 1e-7);
    Vec out;
    for (double t : rr.roots) out.push_back(-t);
    std::sort(out.begin(), out.end());
    return out;
}

inline Vec pfold_sums(std::span<const double> lambda, int m, int p) {
    Vec sums;
    std::vector<int> idx(p);
    for (int i = 0; i < p; ++i) idx[i] = i;
    while (true) {
        double s = 0.0;
        for (int i : idx) s += lambda[i];
        sums.push_back(s);
        int pos = p - 1;
        while (pos >= 0 && idx[pos] == m - p + pos) --pos;
        if (pos < 0) break;
        ++idx[pos];
        for (int i = pos + 1; i < p; ++i) idx[i] = idx[i - 1] + 1;
    }
    std::sort(sums.begin(), sums.end());
    return sums;
}

}  // namespace detail

inline double UniversalSet::excess(std::span<const double> lambda) const {
    if (static_cast<int>(lambda.size()) != m)
        throw DimensionError("UniversalSet: lambda has wrong length");
    if (variant == "branch") {
        return detail::sorted_copy(lambda)[k - 1];
    } else if (variant == "elem_symmetric_branch") {
        return detail::elem_symmetric_eigenvalues(lambda, m, p)[k - 1];
    } else if (variant == "pconvex_branch") {
        Vec sums = detail::pfold_sums(lambda, m, p);
        const int N = static_cast<int>(sums.size());
        return sums[N - r] / p;  // r-th largest p-fold sum, eigenvalue scale
    } else if (variant == "delta_branch") {
        Vec l(lambda.begin(), lambda.end());
        double tr = 0.0;
        for (double v : l) tr += v;
        for (double& v : l) v = (v + delta * tr) / (1.0 + m * delta);
        std::sort(l.begin(), l.end());
        return l[k - 1];
    } else if (variant == "special_lagrangian") {
        double s = 0.0;
        for (double v : lambda) s += std::atan(v);
        return s - c;
    } else if (variant == "halfspace") {
        return dot(w, lambda) - c;
    } else if (variant == "graph") {
        double t = 0.0;
        for (double v : lambda) t += v;
        t /= m;
        Vec perp(lambda.begin(), lambda.end());
        for (double& v : perp) v -= t;
        return t - graph_f(perp);
    } else if (variant == "dual") {
        return -base->excess(negated(lambda));
    }
    throw std::invalid_argument("unknown universal set variant: " + variant);
}

inline double UniversalSet::shift_excess(std::span<const double> lambda) const {
    if (variant == "special_lagrangian") {
        // Sum of arctans is strictly increasing along e: bisect.
        Vec l(lambda.begin(), lambda.end());
        auto val = [&](double t) {
            double s = 0.0;
            for (double v : l) s += std::atan(v - t);
            return s - c;
        };
        double lo = -1.0, hi = 1.0;
        double width = 1.0;
        while (val(hi) > 0.0) {
            lo = hi;
            hi += width;
            width *= 2.0;
            if (width > 1e12) throw std::runtime_error("shift_excess: unbounded");
        }
        width = 1.0;
        while (val(lo) < 0.0) {
            hi = lo;
            lo -= width;
            width *= 2.0;
            if (width > 1e12) throw std::runtime_error("shift_excess: unbounded");
        }
        for (int it = 0; it < 200 && hi - lo > 1e-13 * (1.0 + std::abs(hi)); ++it) {
            const double mid = 0.5 * (lo + hi);
            if (val(mid) >= 0.0)
                lo = mid;
            else
                hi = mid;
        }
        return 0.5 * (lo + hi);
    }
    if (variant == "halfspace") {
        double we = 0.0;
        for (double v : w) we += v;
        if (we <= 0.0)
            throw std::invalid_argument("halfspace shift excess needs w.e > 0");
        return (dot(w, lambda) - c) / we;
    }
    if (variant == "dual") {
        return -base->shift_excess(negated(lambda));
    }
    // branch / elem_symmetric / pconvex / delta / graph excesses are exact
    // shifts: excess(lambda + t e) = excess(lambda) + t.
    return excess(lambda);
}

inline Classification contains(const UniversalSet& e,
                               std::span<const double> lambda, double tol) {
    return classify_excess(e.excess(lambda), tol);
}

inline Classification induced_membership(const UniversalSet& e,
                                         const SpectralModel& model,
                                         const SymMatrix& A, double tol) {
    if (e.m != model.degree)
        throw DimensionError("induced_membership: degree mismatch");
    return contains(e, lambda_map(model, A).values, tol);
}

// Structure graph: boundary height over the hyperplane normal to e.
inline double structure_graph(const UniversalSet& e,
                              std::span<const double> lambda_perp,
                              double tol = 1e-10) {
    double s = 0.0;
    for (double v : lambda_perp) s += v;
    if (std::abs(s) > 1e-8 * (1.0 + max_abs(lambda_perp)))
        throw std::invalid_argument("structure_graph: point not on e-perp");
    Vec l(lambda_perp.begin(), lambda_perp.end());
    const double t = e.shift_excess(l);
    // lambda_perp - (-f) e on the boundary: f = -shift excess at lambda_perp.
    (void)tol;
    return -t;
}

struct SetVerdict {
    bool confirmed = true;
    Vec witness_lambda;
    Vec witness_mu;
};

namespace detail {

// A point of E near its boundary plus a nonnegative offset.
inline Vec sample_in_set(const UniversalSet& e, Rng& rng, double spread = 2.0) {
    Vec perp = rng.vector(e.m, spread);
    double mean = 0.0;
    for (double v : perp) mean += v;
    mean /= e.m;
    for (double& v : perp) v -= mean;
    const double f = structure_graph(e, perp);
    Vec pt(e.m);
    const double lift = rng.uniform(0.0, 1.0);
    for (int i = 0; i < e.m; ++i) pt[i] = perp[i] + f + lift;
    return pt;
}

}  // namespace detail

// Positive-orphant monotonicity probe: lambda in E, mu >= 0 componentwise
// imply lambda + mu in E.
inline SetVerdict monotonicity_check(const UniversalSet& e, int sample_count,
                                     std::uint64_t seed = 31) {
    SetVerdict v;
    Rng rng(seed);
    for (int s = 0; s < sample_count; ++s) {
        Vec lam = detail::sample_in_set(e, rng);
        Vec mu = rng.box(e.m, 0.0, 2.0);
        Vec sum = axpy(1.0, mu, lam);
        if (contains(e, sum, 1e-9) == Classification::Outside) {
            v.confirmed = false;
            v.witness_lambda = lam;
            v.witness_mu = mu;
            return v;
        }
    }
    return v;
}

// Monotonicity against the conical neighborhood (R^m_+)_delta:
// offsets mu with mu_k + delta tr(mu) >= 0 for all k.
inline SetVerdict delta_monotonicity_check(const UniversalSet& e, double delta,
                                           int sample_count,
                                           std::uint64_t seed = 32) {
    SetVerdict v;
    Rng rng(seed);
    int accepted = 0;
    while (accepted < sample_count) {
        Vec mu = rng.box(e.m, -1.0, 2.0);
        double tr = 0.0;
        for (double x : mu) tr += x;
        bool ok = true;
        for (double x : mu)
            if (x + delta * tr < 0.0) ok = false;
        if (!ok) continue;
        ++accepted;
        Vec lam = detail::sample_in_set(e, rng);
        Vec sum = axpy(1.0, mu, lam);
        if (contains(e, sum, 1e-9) == Classification::Outside) {
            v.confirmed = false;
            v.witness_lambda = lam;
            v.witness_mu = mu;
            return v;
        }
    }
    return v;
}

// Random midpoint convexity probe; reports the first violating pair.
inline SetVerdict convexity_probe(const UniversalSet& e, int pair_count,
                                  std::uint64_t seed = 33) {
    SetVerdict v;
    Rng rng(seed);
    for (int s = 0; s < pair_count; ++s) {
        Vec a = detail::sample_in_set(e, rng);
        Vec b = detail::sample_in_set(e, rng);
        Vec mid(e.m);
        for (int i = 0; i < e.m; ++i) mid[i] = 0.5 * (a[i] + b[i]);
        if (e.excess(mid) < -1e-10) {
            v.confirmed = false;
            v.witness_lambda = a;
            v.witness_mu = b;
            return v;
        }
    }
    return v;
}

// Directed search for midpoint violations of the special Lagrangian set
// below the Yuan threshold. Violations concentrate on boundary points with
// one very negative coordinate, so the probe walks the two-parameter family
// lambda(u) = (A, ..., A, -u) with (m-1) arctan A = c + arctan u, then
// refines the worst pair by coordinate descent. Returns a violating pair if
// one is found.
inline SetVerdict special_lagrangian_violation_search(int m, double c,
                                                      int grid = 12) {
    SetVerdict v;
    UniversalSet e = special_lagrangian_set(m, c);
    const double half_pi = std::numbers::pi / 2.0;
    auto boundary_point = [&](double u) -> Vec {
        const double phase = (c + std::atan(u)) / (m - 1);
        if (phase >= half_pi) return {};
        const double A = std::tan(phase);
        Vec pt(m, A);
        pt[m - 1] = -u;
        return pt;
    };
    auto midpoint_excess = [&](double u, double w) {
        Vec a = boundary_point(u), b = boundary_point(w);
        if (a.empty() || b.empty()) return 1.0;
        Vec mid(m);
        for (int i = 0; i < m; ++i) mid[i] = 0.5 * (a[i] + b[i]);
        return e.excess(mid);
    };
    const double u0 = std::tan(half_pi - 0.1);
    double best = 0.0, bu = 0.0, bw = 0.0;
    for (int i = 0; i < grid; ++i)
        for (int j = i + 1; j < grid; ++j) {
            const double u = u0 * std::pow(1.7, i);
            const double w = u0 * std::pow(1.7, j);
            const double ex = midpoint_excess(u, w);
            if (ex < best) {
                best = ex;
                bu = u;
                bw = w;
            }
        }
    // Coordinate descent in log(u), log(w).
    if (best < 0.0) {
        double step = 0.35;
        for (int it = 0; it < 60; ++it) {
            bool improved = false;
            for (int dim = 0; dim < 2; ++dim)
                for (double sgn : {1.0, -1.0}) {
                    const double u = dim == 0 ? bu * std::exp(sgn * step) : bu;
                    const double w = dim == 1 ? bw * std::exp(sgn * step) : bw;
                    const double ex = midpoint_excess(u, w);
                    if (ex < best) {
                        best = ex;
                        bu = u;
                        bw = w;
                        improved = true;
                    }
                }
            if (!improved) step *= 0.5;
            if (step < 1e-4) break;
        }
    }
    if (best < -1e-8) {
        v.confirmed = false;
        v.witness_lambda = boundary_point(bu);
        v.witness_mu = boundary_point(bw);
    }
    return v;
}

}  // namespace garding
