#pragma once

// Dirichlet-Garding polynomials on Sym^2(R^n) defined spectrally: the real,
// complex and quaternionic determinants, the trace, and the Lagrangian /
// isotropic family. Eigenvalue maps are computed by symmetric
// eigendecomposition of the relevant component of A; nothing here is ever
// expanded into monomials.
//
// Fixed representations: J is the block-diagonal 2x2 rotation; I, J, K for
// quaternions are the standard 4x4 left-multiplication blocks.

#include <Eigen/Dense>
#include <cstdint>
#include <memory>
#include <string>

#include "garding/common.hpp"
#include "garding/rng.hpp"
#include "garding/spectra.hpp"

namespace garding {

class SymMatrix {
   public:
    SymMatrix() = default;
    explicit SymMatrix(int n) : m_(Eigen::MatrixXd::Zero(n, n)) {}
    explicit SymMatrix(Eigen::MatrixXd m) : m_(0.5 * (m + m.transpose())) {}

    static SymMatrix identity(int n) { return SymMatrix(Eigen::MatrixXd::Identity(n, n)); }

    static SymMatrix from_rows(int n, std::span<const double> rowmajor) {
        if (static_cast<int>(rowmajor.size()) != n * n)
            throw DimensionError("SymMatrix: row-major data size");
        Eigen::MatrixXd m(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) m(i, j) = rowmajor[i * n + j];
        const double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
        if (asym > 1e-12 * std::max(1.0, m.cwiseAbs().maxCoeff()))
            throw std::invalid_argument("SymMatrix: input not symmetric");
        return SymMatrix(std::move(m));
    }

    // Upper-triangular flat coordinates shared with poly::sym_determinant.
    static SymMatrix from_upper(int n, std::span<const double> flat) {
        if (static_cast<int>(flat.size()) != n * (n + 1) / 2)
            throw DimensionError("SymMatrix: upper-triangular data size");
        Eigen::MatrixXd m(n, n);
        int idx = 0;
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j) {
                m(i, j) = flat[idx];
                m(j, i) = flat[idx];
                ++idx;
            }
        return SymMatrix(std::move(m));
    }

    Vec to_upper() const {
        const int n = size();
        Vec flat;
        flat.reserve(n * (n + 1) / 2);
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j) flat.push_back(m_(i, j));
        return flat;
    }

    int size() const { return static_cast<int>(m_.rows()); }
    double operator()(int i, int j) const { return m_(i, j); }
    double& at(int i, int j) { return m_(i, j); }
    const Eigen::MatrixXd& mat() const { return m_; }

    Vec eigenvalues_sorted() const {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m_);
        if (es.info() != Eigen::Success)
            throw std::runtime_error("symmetric eigendecomposition failed");
        Vec v(es.eigenvalues().data(), es.eigenvalues().data() + size());
        return v;  // Eigen returns them sorted increasing
    }

   private:
    Eigen::MatrixXd m_;
};

namespace models {

// Standard complex structure on R^{2n}: block-diagonal [[0,-1],[1,0]].
inline Eigen::MatrixXd standard_J(int ambient) {
    if (ambient % 2 != 0) throw DimensionError("standard_J: ambient must be even");
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(ambient, ambient);
    for (int b = 0; b < ambient / 2; ++b) {
        J(2 * b, 2 * b + 1) = -1.0;
        J(2 * b + 1, 2 * b) = 1.0;
    }
    return J;
}

// Left multiplication by i, j, k on H^n = R^{4n}, basis (1, i, j, k) per block.
inline Eigen::MatrixXd quaternion_unit(int ambient, char which) {
    if (ambient % 4 != 0)
        throw DimensionError("quaternion_unit: ambient must be divisible by 4");
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(ambient, ambient);
    for (int b = 0; b < ambient / 4; ++b) {
        const int o = 4 * b;
        auto set = [&](int r, int c, double v) { M(o + r, o + c) = v; };
        if (which == 'i') {
            // 1 -> i, i -> -1, j -> k, k -> -j
            set(1, 0, 1);  set(0, 1, -1);  set(3, 2, 1);  set(2, 3, -1);
        } else if (which == 'j') {
            // 1 -> j, i -> -k, j -> -1, k -> i
            set(2, 0, 1);  set(3, 1, -1);  set(0, 2, -1); set(1, 3, 1);
        } else {
            // 1 -> k, i -> j, j -> -i, k -> -1
            set(3, 0, 1);  set(2, 1, 1);   set(1, 2, -1); set(0, 3, -1);
        }
    }
    return M;
}

}  // namespace models

// Hermitian symmetric component A_C = (A - JAJ)/2; commutes with J.
inline SymMatrix hermitian_part(const SymMatrix& A) {
    const Eigen::MatrixXd J = models::standard_J(A.size());
    return SymMatrix(0.5 * (A.mat() - J * A.mat() * J));
}

// Skew hermitian component A_skew = (A + JAJ)/2; anti-commutes with J and
// has eigenvalues in opposite pairs +-mu.
inline SymMatrix skew_part(const SymMatrix& A) {
    const Eigen::MatrixXd J = models::standard_J(A.size());
    return SymMatrix(0.5 * (A.mat() + J * A.mat() * J));
}

// Quaternionic hermitian component A_H = (A - IAI - JAJ - KAK)/4.
inline SymMatrix quaternionic_part(const SymMatrix& A) {
    const Eigen::MatrixXd I = models::quaternion_unit(A.size(), 'i');
    const Eigen::MatrixXd J = models::quaternion_unit(A.size(), 'j');
    const Eigen::MatrixXd K = models::quaternion_unit(A.size(), 'k');
    return SymMatrix(0.25 * (A.mat() - I * A.mat() * I - J * A.mat() * J -
                             K * A.mat() * K));
}

namespace detail {

// Collapse sorted eigenvalues appearing in groups of `mult` to one value per
// group, verifying the grouping.
inline Vec collapse_multiplicity(const Vec& sorted, int mult, double tol) {
    if (sorted.size() % mult != 0)
        throw std::runtime_error("eigenvalue multiplicity structure violated");
    Vec out;
    for (std::size_t g = 0; g < sorted.size(); g += mult) {
        double mean = 0.0;
        for (int i = 0; i < mult; ++i) mean += sorted[g + i];
        mean /= mult;
        for (int i = 0; i < mult; ++i)
            if (std::abs(sorted[g + i] - mean) > tol)
                throw std::runtime_error("eigenvalue multiplicity structure violated");
        out.push_back(mean);
    }
    return out;
}

// Pair the eigenvalues of a skew-hermitian part as (v, -v); returns the n
// nonnegative representatives mu_1..mu_n.
inline Vec pair_pm(const Vec& sorted, double scale_tol) {
    const int n2 = static_cast<int>(sorted.size());
    Vec mu;
    int lo = 0, hi = n2 - 1;
    while (lo < hi) {
        if (std::abs(sorted[lo] + sorted[hi]) > scale_tol)
            throw std::runtime_error("skew part eigenvalues not in +- pairs");
        mu.push_back(std::abs(0.5 * (sorted[hi] - sorted[lo])));
        ++lo;
        --hi;
    }
    return mu;
}

}  // namespace detail

// tau and mu_1..mu_n of the Lagrangian decomposition of A in Sym^2(R^{2n}).
struct LagrangianData {
    double tau;
    Vec mu;
};

inline LagrangianData lagrangian_data(const SymMatrix& A) {
    LagrangianData d;
    d.tau = 0.5 * A.mat().trace();
    const SymMatrix S = skew_part(A);
    const double tol = 1e-8 * std::max(1.0, A.mat().norm());
    d.mu = detail::pair_pm(S.eigenvalues_sorted(), tol);
    return d;
}

// All values (tau +- mu_{i1} +- ... +- mu_{ip}) / n over p-subsets and sign
// patterns, sorted. The division by n makes lambda(Identity) = e: the factors
// of M(tI + A) are n(t + (tau +- ...)/n) since tau(tI + A) = tau(A) + tn.
inline Vec isotropic_eigenvalues(const SymMatrix& A, int p) {
    const int ambient = A.size();
    if (ambient % 2 != 0)
        throw DimensionError("isotropic_eigenvalues: ambient must be even");
    const int n = ambient / 2;
    if (p < 1 || p > n) throw std::invalid_argument("isotropic: 1 <= p <= n");
    LagrangianData d = lagrangian_data(A);
    Vec out;
    std::vector<int> idx(p);
    for (int i = 0; i < p; ++i) idx[i] = i;
    while (true) {
        for (std::uint64_t signs = 0; signs < (1ull << p); ++signs) {
            double v = d.tau;
            for (int i = 0; i < p; ++i)
                v += ((signs >> i) & 1) ? d.mu[idx[i]] : -d.mu[idx[i]];
            out.push_back(v / n);
        }
        int pos = p - 1;
        while (pos >= 0 && idx[pos] == n - p + pos) --pos;
        if (pos < 0) break;
        ++idx[pos];
        for (int i = pos + 1; i < p; ++i) idx[i] = idx[i - 1] + 1;
    }
    std::sort(out.begin(), out.end());
    return out;
}

struct SpectralModel {
    std::string kind;  // det_real, det_complex, det_quaternionic, trace,
                       // lagrangian, isotropic, derived
    int n = 0;         // model parameter (matrix size in the base field)
    int p = 0;         // isotropic subset size
    int ambient = 0;   // ambient real matrix dimension
    int degree = 0;    // number of eigenvalues m
    std::function<Vec(const SymMatrix&)> custom;  // kind == "derived"
};

inline SpectralModel make_model(const std::string& kind, int n, int p = 0) {
    SpectralModel m;
    m.kind = kind;
    m.n = n;
    m.p = p;
    if (kind == "det_real") {
        m.ambient = n;
        m.degree = n;
    } else if (kind == "trace") {
        m.ambient = n;
        m.degree = 1;
    } else if (kind == "det_complex") {
        m.ambient = 2 * n;
        m.degree = n;
    } else if (kind == "det_quaternionic") {
        m.ambient = 4 * n;
        m.degree = n;
    } else if (kind == "lagrangian") {
        if (n > 4)
            throw std::invalid_argument("lagrangian model limited to n <= 4");
        m.ambient = 2 * n;
        m.degree = 1 << n;
    } else if (kind == "isotropic") {
        if (p < 1 || p > n)
            throw std::invalid_argument("isotropic model needs 1 <= p <= n");
        m.ambient = 2 * n;
        m.degree = (1 << p) * static_cast<int>(binomial(n, p));
    } else {
        throw std::invalid_argument("unknown model kind: " + kind);
    }
    return m;
}

inline EigenList lambda_map(const SpectralModel& model, const SymMatrix& A) {
    if (A.size() != model.ambient)
        throw DimensionError("lambda_map: matrix does not match model ambient");
    EigenList out;
    const double tol = 1e-8 * std::max(1.0, A.mat().norm());
    if (model.kind == "det_real") {
        out.values = A.eigenvalues_sorted();
    } else if (model.kind == "trace") {
        out.values = {A.mat().trace() / model.n};
    } else if (model.kind == "det_complex") {
        out.values =
            detail::collapse_multiplicity(hermitian_part(A).eigenvalues_sorted(), 2, tol);
    } else if (model.kind == "det_quaternionic") {
        out.values = detail::collapse_multiplicity(
            quaternionic_part(A).eigenvalues_sorted(), 4, tol);
    } else if (model.kind == "lagrangian") {
        out.values = isotropic_eigenvalues(A, model.n);
    } else if (model.kind == "isotropic") {
        out.values = isotropic_eigenvalues(A, model.p);
    } else if (model.kind == "derived") {
        out.values = model.custom(A);
        std::sort(out.values.begin(), out.values.end());
    } else {
        throw std::invalid_argument("unknown model kind: " + model.kind);
    }
    return out;
}

// Adapt a model to the generic EigenMap interface. Points are passed in the
// upper-triangular flat coordinates of Sym^2(R^ambient) (the same coordinates
// as poly::sym_determinant), and the direction is the identity matrix.
inline EigenMap make_eigen_map(const SpectralModel& model) {
    EigenMap em;
    em.dim = model.ambient * (model.ambient + 1) / 2;
    em.degree = model.degree;
    em.direction = poly::sym_identity(model.ambient);
    auto sp = std::make_shared<SpectralModel>(model);
    const int ambient = model.ambient;
    em.lambda = [sp, ambient](std::span<const double> x) {
        return lambda_map(*sp, SymMatrix::from_upper(ambient, x));
    };
    em.sigma = [sp, ambient](std::span<const double> x) {
        return sigma_from_lambda(
            lambda_map(*sp, SymMatrix::from_upper(ambient, x)).values);
    };
    em.value = [sp, ambient](std::span<const double> x) {
        double v = 1.0;
        for (double l : lambda_map(*sp, SymMatrix::from_upper(ambient, x)).values)
            v *= l;
        return v;
    };
    em.value_at_direction = 1.0;
    return em;
}

struct PositivityVerdict {
    bool confirmed = true;
    int samples_checked = 0;
    Vec witness_direction;  // unit vector whose projection violated positivity
    double worst = 0.0;     // most negative smallest eigenvalue observed
};

// Remark 5.3 (3): positivity of the closed Garding cone reduces to rank-one
// projections P_e; sample unit vectors and check lambda_min(P_e) >= -1e-9.
inline PositivityVerdict dg_positivity_check(const SpectralModel& model,
                                             int unit_sample_count = 200,
                                             std::uint64_t seed = 20) {
    PositivityVerdict v;
    Rng rng(seed);
    const int n = model.ambient;
    std::vector<Vec> dirs;
    for (int j = 0; j < n; ++j) {
        Vec e(n, 0.0);
        e[j] = 1.0;
        dirs.push_back(e);
    }
    for (int s = 0; s < unit_sample_count; ++s) dirs.push_back(rng.unit_vector(n));
    for (const auto& e : dirs) {
        Eigen::MatrixXd P(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) P(i, j) = e[i] * e[j];
        EigenList l = lambda_map(model, SymMatrix(P));
        const double lmin = l.values.front();
        v.worst = std::min(v.worst, lmin);
        if (lmin < -1e-9) {
            v.confirmed = false;
            v.witness_direction = e;
            return v;
        }
        ++v.samples_checked;
    }
    return v;
}

}  // namespace garding
