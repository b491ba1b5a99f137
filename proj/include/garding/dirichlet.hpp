#pragma once

// Dirichlet solver for branch equations lambda^_k(D^2 u) = 0 and
// universal-set equations lambda(D^2 u) in dE on 2-D disks and squares.
//
// Discretization: wide-stencil second differences with unequal arms that
// shrink to the exact domain boundary (second differences with boundary
// anchoring are exact on quadratics). Two operator modes:
//   eigen   - order statistics of directional second differences
//             (min for k=1, max for k=m); monotone by construction.
//   hessian - assemble the discrete 2x2 Hessian, apply the model's
//             eigenvalue map and the branch / universal-set shift excess.
// The iteration is a damped Jacobi fixed point u <- u + dt G(u) with a
// per-node dt bounded by the operator's center sensitivity; the +-norm
// Lipschitz property of the ordered eigenvalues keeps that sensitivity at
// the stencil weight sum, which is what makes dt = O(h^2) stable.

#include <chrono>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>

#include "garding/common.hpp"
#include "garding/matrix_models.hpp"
#include "garding/universal_sets.hpp"

namespace garding {

enum class DomainKind { Disk, Square };

struct Domain2D {
    DomainKind kind = DomainKind::Disk;
    double radius = 1.0;  // disk radius, or half side length of the square

    bool inside(double x, double y) const {
        if (kind == DomainKind::Disk) return x * x + y * y < radius * radius;
        return std::abs(x) < radius && std::abs(y) < radius;
    }
};

enum class NodeType : unsigned char { Interior, Boundary, Exterior };

enum class OperatorMode { Eigen, Hessian };

struct DirichletEquation {
    SpectralModel model;               // ambient must be 2
    int branch_k = 1;                  // branch index when uset is absent
    std::optional<UniversalSet> uset;  // universal-set equation when present
    OperatorMode mode = OperatorMode::Hessian;

    DirichletEquation dual() const {
        DirichletEquation d = *this;
        if (uset)
            d.uset = dual_set(*uset);
        else
            d.branch_k = model.degree - branch_k + 1;
        return d;
    }
};

inline DirichletEquation branch_equation(const SpectralModel& model, int k) {
    DirichletEquation eq;
    eq.model = model;
    eq.branch_k = k;
    eq.mode = (model.kind == "det_real" && model.ambient == 2)
                  ? OperatorMode::Eigen
                  : OperatorMode::Hessian;
    return eq;
}

inline DirichletEquation set_equation(const SpectralModel& model,
                                      UniversalSet e) {
    DirichletEquation eq;
    eq.model = model;
    eq.uset = std::move(e);
    eq.mode = OperatorMode::Hessian;
    return eq;
}

struct StencilSet {
    // Direction lines with rational slopes; closed under negation by
    // construction (each line carries both arms).
    std::vector<std::pair<int, int>> offsets = {{1, 0}, {0, 1}, {1, 1}, {1, -1},
                                                {2, 1}, {1, 2}, {2, -1}, {1, -2}};
};

struct Grid2D {
    int n = 0;       // nodes per side
    double h = 0.0;  // spacing
    double extent = 0.0;  // nodes at -extent + i*h
    Domain2D domain;
    std::vector<NodeType> mask;
    Vec u;
    std::function<double(double, double)> data;

    int idx(int i, int j) const { return j * n + i; }
    double x_of(int i) const { return -extent + i * h; }
    double y_of(int j) const { return -extent + j * h; }
};

inline Grid2D make_grid(const Domain2D& domain, int n,
                        std::function<double(double, double)> data) {
    Grid2D g;
    g.n = n;
    g.domain = domain;
    g.extent = domain.radius;
    g.h = 2.0 * domain.radius / (n - 1);
    g.data = std::move(data);
    g.mask.assign(n * n, NodeType::Exterior);
    g.u.assign(n * n, 0.0);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            const double x = g.x_of(i), y = g.y_of(j);
            if (domain.kind == DomainKind::Square) {
                const bool edge = i == 0 || j == 0 || i == n - 1 || j == n - 1;
                if (edge) {
                    g.mask[g.idx(i, j)] = NodeType::Boundary;
                    g.u[g.idx(i, j)] = g.data(x, y);
                } else {
                    g.mask[g.idx(i, j)] = NodeType::Interior;
                }
            } else {
                if (domain.inside(x, y)) {
                    g.mask[g.idx(i, j)] = NodeType::Interior;
                } else {
                    g.mask[g.idx(i, j)] = NodeType::Exterior;
                }
            }
        }
    return g;
}

struct SolveReport {
    int iterations = 0;
    double residual = 0.0;
    double wall_seconds = 0.0;
    bool converged = false;
    bool diverged = false;
    std::vector<std::pair<int, double>> history;  // (iteration, max |G|)
};

struct SolveConfig {
    double cfl = 0.4;  // dt = cfl / center sensitivity; 0.2 h^2 on full arms
    double tol = 1e-7;
    int max_iter = 400000;
    std::optional<Vec> initial;  // warm start field (size n*n)
};

struct BoundaryConvexityVerdict {
    bool admitted = false;
    std::string status;  // "admitted", "nonsmooth-admitted", "rejected"
};

// Disk: checks (1/R) P_T + t P_n strictly inside F_k and its dual side for
// t in {1, 10, 100}/R. Squares are admitted with a nonsmooth caveat: the
// corners are not smooth and the boundary-convexity theorem is not claimed,
// but the scheme still converges in practice.
inline BoundaryConvexityVerdict boundary_convexity_check(
    const Domain2D& domain, const DirichletEquation& eq) {
    BoundaryConvexityVerdict v;
    if (domain.kind == DomainKind::Square) {
        v.admitted = true;
        v.status = "nonsmooth-admitted";
        return v;
    }
    const double R = domain.radius;
    auto classify = [&](const SymMatrix& B, const DirichletEquation& e) {
        EigenList l = lambda_map(e.model, B);
        if (e.uset) return contains(*e.uset, l.values, 1e-9);
        return classify_excess(l.values[e.branch_k - 1], 1e-9);
    };
    const DirichletEquation dual_eq = eq.dual();
    for (double t : {1.0 / R, 10.0 / R, 100.0 / R}) {
        Eigen::MatrixXd B(2, 2);
        B << t, 0.0, 0.0, 1.0 / R;  // t P_n + (1/R) P_T at the point (R, 0)
        const SymMatrix SB{B};
        if (t >= 100.0 / R - 1e-12) {
            if (classify(SB, eq) != Classification::Inside ||
                classify(SB, dual_eq) != Classification::Inside) {
                v.admitted = false;
                v.status = "rejected";
                return v;
            }
        }
    }
    v.admitted = true;
    v.status = "admitted";
    return v;
}

class DirichletSolver {
   public:
    DirichletSolver(Grid2D grid, DirichletEquation eq,
                    StencilSet stencil = StencilSet{})
        : grid_(std::move(grid)), eq_(std::move(eq)), stencil_(std::move(stencil)) {
        if (eq_.model.ambient != 2)
            throw DimensionError("DirichletSolver: 2-D models only");
        if (eq_.model.kind != "det_real" && eq_.model.kind != "trace" &&
            eq_.model.kind != "det_complex" && eq_.model.kind != "lagrangian" &&
            eq_.model.kind != "isotropic")
            throw std::invalid_argument("DirichletSolver: unsupported model kind");
        if (eq_.mode == OperatorMode::Eigen && eq_.branch_k != 1 &&
            eq_.branch_k != eq_.model.degree)
            throw std::invalid_argument(
                "eigen mode supports the extreme branches; use hessian mode");
        build_arms();
    }

    const Grid2D& grid() const { return grid_; }
    Grid2D& grid() { return grid_; }
    const std::vector<int>& interior_nodes() const { return interior_; }

    // The discrete operator G at one interior node.
    double residual_at(int node, const Vec& u) const {
        return residual_impl(node, u, +1.0);
    }

    double max_residual(const Vec& u) const {
        double r = 0.0;
        for (int node : interior_) r = std::max(r, std::abs(residual_at(node, u)));
        return r;
    }

    SolveReport solve(const SolveConfig& cfg = {}) {
        SolveReport rep;
        const auto t0 = std::chrono::steady_clock::now();
        if (cfg.initial) {
            if (cfg.initial->size() != grid_.u.size())
                throw DimensionError("solve: initial field size");
            for (int node : interior_) grid_.u[node] = (*cfg.initial)[node];
        }
        Vec next = grid_.u;
        const double r0 = max_residual(grid_.u);
        rep.history.emplace_back(0, r0);
        double res = r0;
        int high_count = 0;
        int it = 0;
        for (; it < cfg.max_iter; ++it) {
            res = 0.0;
            for (int node : interior_) {
                const double g = residual_at(node, grid_.u);
                res = std::max(res, std::abs(g));
                next[node] = grid_.u[node] + cfg.cfl / sensitivity_[node] * g;
            }
            grid_.u.swap(next);
            if ((it & 63) == 0) rep.history.emplace_back(it + 1, res);
            if (res <= cfg.tol) {
                ++it;
                break;
            }
            high_count = res > 10.0 * std::max(r0, 1e-12) ? high_count + 1 : 0;
            if (high_count >= 500) {
                rep.diverged = true;
                break;
            }
        }
        rep.iterations = it;
        rep.residual = max_residual(grid_.u);
        rep.converged = rep.residual <= cfg.tol;
        rep.history.emplace_back(it, rep.residual);
        rep.wall_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                .count();
        return rep;
    }

    struct CertificateReport {
        bool passed = true;
        int failing_nodes = 0;
        double worst_primal = 0.0;  // min over nodes of G_F(u)
        double worst_dual = 0.0;    // min over nodes of G_dual(-u)
    };

    // Discrete F-harmonicity: G_F(u) >= -tol and G_F~(-u) >= -tol everywhere.
    // The dual side evaluates the dual equation on -u; frozen ring values and
    // boundary crossings are negated along with the field.
    CertificateReport harmonic_certificate(double tol = 1e-6) const {
        CertificateReport rep;
        DirichletSolver dual_solver(grid_, eq_.dual(), stencil_);
        Vec neg = grid_.u;
        for (double& v : neg) v = -v;
        rep.worst_primal = std::numeric_limits<double>::infinity();
        rep.worst_dual = rep.worst_primal;
        for (int node : interior_) {
            const double gp = residual_at(node, grid_.u);
            const double gd = dual_solver.residual_impl(node, neg, -1.0);
            rep.worst_primal = std::min(rep.worst_primal, gp);
            rep.worst_dual = std::min(rep.worst_dual, gd);
            if (gp < -tol || gd < -tol) {
                rep.passed = false;
                ++rep.failing_nodes;
            }
        }
        return rep;
    }

   private:
    static constexpr std::size_t kAxisX = 0, kAxisY = 1, kDiag1 = 2, kDiag2 = 3;

    struct Arm {
        int neighbor = -1;  // node index, or -1 for a boundary crossing
        double bval = 0.0;  // Dirichlet value at the crossing
        double len = 0.0;   // physical arm length
    };
    struct Line {
        Arm plus, minus;
    };

    double second_difference(int node, std::size_t dir, const Vec& u,
                             double bsign) const {
        const Line& ln = arms_[arm_base_[node] + dir];
        const double u0 = u[node];
        const double up =
            ln.plus.neighbor >= 0 ? u[ln.plus.neighbor] : bsign * ln.plus.bval;
        const double um =
            ln.minus.neighbor >= 0 ? u[ln.minus.neighbor] : bsign * ln.minus.bval;
        const double hp = ln.plus.len, hm = ln.minus.len;
        return 2.0 * (um / (hm * (hm + hp)) + up / (hp * (hm + hp)) -
                      u0 / (hm * hp));
    }

    // Closed-form eigenvalue maps for the 2-D ambient models; keeps the hot
    // path free of allocations. Returns the number of eigenvalues written.
    int lambda_2x2(double axx, double axy, double ayy, double out[4]) const {
        const std::string& kind = eq_.model.kind;
        const double mean = 0.5 * (axx + ayy);
        const double rad = std::hypot(0.5 * (axx - ayy), axy);
        if (kind == "det_real") {
            out[0] = mean - rad;
            out[1] = mean + rad;
            return 2;
        }
        if (kind == "trace") {
            out[0] = mean;
            return 1;
        }
        if (kind == "det_complex") {
            out[0] = mean;  // A_C = mean * Id for 2x2
            return 1;
        }
        // lagrangian / isotropic with n = 1: tau +- mu coincides with the
        // ordinary eigenvalues.
        out[0] = mean - rad;
        out[1] = mean + rad;
        return 2;
    }

    double residual_impl(int node, const Vec& u, double bsign) const {
        if (eq_.mode == OperatorMode::Eigen) {
            const int k = eq_.branch_k;
            double mn = std::numeric_limits<double>::infinity();
            double mx = -mn;
            for (std::size_t d = 0; d < stencil_.offsets.size(); ++d) {
                const double s = second_difference(node, d, u, bsign);
                mn = std::min(mn, s);
                mx = std::max(mx, s);
            }
            return k == 1 ? mn : mx;
        }
        const double axx = second_difference(node, kAxisX, u, bsign);
        const double ayy = second_difference(node, kAxisY, u, bsign);
        const double d1 = second_difference(node, kDiag1, u, bsign);
        const double d2 = second_difference(node, kDiag2, u, bsign);
        const double axy = 0.5 * (d1 - d2);
        double lam[4];
        const int cnt = lambda_2x2(axx, axy, ayy, lam);
        if (eq_.uset)
            return eq_.uset->shift_excess(std::span<const double>(lam, cnt));
        return lam[eq_.branch_k - 1];
    }

    Arm make_arm(int i, int j, int dx, int dy) const {
        Arm arm;
        const int n = grid_.n;
        const double x = grid_.x_of(i), y = grid_.y_of(j);
        const double sx = dx * grid_.h, sy = dy * grid_.h;
        const double step = std::hypot(sx, sy);
        const int ni = i + dx, nj = j + dy;
        const bool in_range = ni >= 0 && nj >= 0 && ni < n && nj < n;
        if (in_range && grid_.mask[grid_.idx(ni, nj)] != NodeType::Exterior) {
            if (grid_.mask[grid_.idx(ni, nj)] == NodeType::Interior) {
                arm.neighbor = grid_.idx(ni, nj);
            } else {
                arm.neighbor = -1;  // frozen ring value, treated as data
                arm.bval = grid_.u[grid_.idx(ni, nj)];
            }
            arm.len = step;
            return arm;
        }
        // Shrink the arm to the boundary crossing; Dirichlet data is read at
        // the exact intersection point.
        double theta = 1.0;
        if (grid_.domain.kind == DomainKind::Disk) {
            const double R = grid_.domain.radius;
            const double a = sx * sx + sy * sy;
            const double b = 2.0 * (x * sx + y * sy);
            const double c = x * x + y * y - R * R;
            theta = (-b + std::sqrt(b * b - 4.0 * a * c)) / (2.0 * a);
        } else {
            const double L = grid_.domain.radius;
            theta = 1.0;
            if (sx > 0) theta = std::min(theta, (L - x) / sx);
            if (sx < 0) theta = std::min(theta, (-L - x) / sx);
            if (sy > 0) theta = std::min(theta, (L - y) / sy);
            if (sy < 0) theta = std::min(theta, (-L - y) / sy);
        }
        theta = std::clamp(theta, 1e-12, 1.0);
        arm.neighbor = -1;
        arm.bval = grid_.data(x + theta * sx, y + theta * sy);
        arm.len = theta * step;
        return arm;
    }

    void build_arms() {
        const int n = grid_.n;
        arm_base_.assign(n * n, -1);
        sensitivity_.assign(n * n, 1.0);
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i) {
                const int node = grid_.idx(i, j);
                if (grid_.mask[node] != NodeType::Interior) continue;
                arm_base_[node] = static_cast<int>(arms_.size());
                interior_.push_back(node);
                for (const auto& [dx, dy] : stencil_.offsets) {
                    Line ln;
                    ln.plus = make_arm(i, j, dx, dy);
                    ln.minus = make_arm(i, j, -dx, -dy);
                    arms_.push_back(ln);
                }
                // Center sensitivity of G: the worst single line in eigen
                // mode; axis lines plus the cross-term mismatch in hessian
                // mode, scaled by the model's eigenvalue Lipschitz factor.
                const int base = arm_base_[node];
                auto center = [&](std::size_t d) {
                    const Line& ln = arms_[base + d];
                    return 2.0 / (ln.plus.len * ln.minus.len);
                };
                double sens;
                if (eq_.mode == OperatorMode::Eigen) {
                    sens = 0.0;
                    for (std::size_t d = 0; d < stencil_.offsets.size(); ++d)
                        sens = std::max(sens, center(d));
                } else {
                    const double lip =
                        eq_.model.kind == "trace" ? 1.0 / eq_.model.n : 1.0;
                    sens = lip * (center(kAxisX) + center(kAxisY) +
                                  std::abs(center(kDiag1) - center(kDiag2)));
                }
                sensitivity_[node] = sens;
            }
    }

    Grid2D grid_;
    DirichletEquation eq_;
    StencilSet stencil_;
    std::vector<Line> arms_;
    std::vector<int> arm_base_;
    Vec sensitivity_;
    std::vector<int> interior_;
};

// Bilinear prolongation of a coarse solution onto a finer grid, used for
// warm starts; falls back to the Dirichlet data where the coarse cell is
// incomplete.
inline Vec prolong(const Grid2D& coarse, const Grid2D& fine) {
    Vec out(fine.u.size(), 0.0);
    for (int j = 0; j < fine.n; ++j)
        for (int i = 0; i < fine.n; ++i) {
            const int node = fine.idx(i, j);
            if (fine.mask[node] != NodeType::Interior) continue;
            const double x = fine.x_of(i), y = fine.y_of(j);
            const double fx = (x + coarse.extent) / coarse.h;
            const double fy = (y + coarse.extent) / coarse.h;
            const int ci = std::clamp(static_cast<int>(fx), 0, coarse.n - 2);
            const int cj = std::clamp(static_cast<int>(fy), 0, coarse.n - 2);
            const double tx = fx - ci, ty = fy - cj;
            bool ok = true;
            for (int b = 0; b < 4 && ok; ++b) {
                const int ii = ci + (b & 1), jj = cj + (b >> 1);
                if (coarse.mask[coarse.idx(ii, jj)] == NodeType::Exterior) ok = false;
            }
            if (!ok) {
                out[node] = fine.data(x, y);
                continue;
            }
            const double v00 = coarse.u[coarse.idx(ci, cj)];
            const double v10 = coarse.u[coarse.idx(ci + 1, cj)];
            const double v01 = coarse.u[coarse.idx(ci, cj + 1)];
            const double v11 = coarse.u[coarse.idx(ci + 1, cj + 1)];
            out[node] = (1 - tx) * (1 - ty) * v00 + tx * (1 - ty) * v10 +
                        (1 - tx) * ty * v01 + tx * ty * v11;
        }
    return out;
}

}  // namespace garding
