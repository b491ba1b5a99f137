#include <catch2/catch_amalgamated.hpp>

#include "garding/monomial.hpp"
#include "garding/rng.hpp"

using namespace garding;

namespace {

// Finite-difference oracle for the m-fold mixed derivative at 0:
// d^m/dt_1..dt_m p(t_1 b_1 + ... + t_m b_m), central differences.
double mixed_partial_fd(const MonomialPoly& p, const std::vector<Vec>& bs,
                        double h = 1e-2) {
    const int m = static_cast<int>(bs.size());
    double sum = 0.0;
    for (int mask = 0; mask < (1 << m); ++mask) {
        Vec pt(p.dim(), 0.0);
        int negs = 0;
        for (int i = 0; i < m; ++i) {
            const double s = (mask >> i) & 1 ? h : -h;
            if (((mask >> i) & 1) == 0) ++negs;
            for (int j = 0; j < p.dim(); ++j) pt[j] += s * bs[i][j];
        }
        sum += (negs % 2 == 0 ? 1.0 : -1.0) * p.eval(pt);
    }
    return sum / std::pow(2.0 * h, m);
}

}  // namespace

TEST_CASE("evaluation of stock polynomials") {
    MonomialPoly prod = poly::coordinate_product(3);
    CHECK(prod.eval(Vec{1, 1, 1}) == 1.0);

    MonomialPoly exa3 = poly::sigma2_r3();
    CHECK_THAT(exa3.eval(Vec{1, 1, 1}), Catch::Matchers::WithinAbs(1.0, 1e-15));

    MonomialPoly lc = poly::lorentz(3);
    CHECK(lc.eval(Vec{0, 1, 0}) == -1.0);

    CHECK_THROWS_AS(lc.eval(Vec{1, 0}), DimensionError);
}

TEST_CASE("directional derivative on monomials") {
    // p = x1 x2, b = (1,0) -> x2
    MonomialPoly p = poly::coordinate_product(2);
    MonomialPoly d = p.directional_derivative(Vec{1, 0});
    REQUIRE(d.degree() == 1);
    CHECK(d.eval(Vec{5, 7}) == 7.0);

    // det (n=2) in direction I -> trace polynomial x11 + x22
    MonomialPoly det2 = poly::sym_determinant(2);
    MonomialPoly tr = det2.directional_derivative(poly::sym_identity(2));
    REQUIRE(tr.degree() == 1);
    // coordinates (x11, x12, x22)
    CHECK(tr.eval(Vec{3, 100, 4}) == 7.0);

    // (x1+x2)^2 in direction (0,1) -> 2(x1+x2)
    MonomialPoly sq = poly::linear_power(Vec{1, 1}, 2);
    MonomialPoly ds = sq.directional_derivative(Vec{0, 1});
    CHECK(ds.eval(Vec{2, 3}) == 10.0);

    CHECK_THROWS(tr.directional_derivative(poly::sym_identity(2))
                     .directional_derivative(poly::sym_identity(2)));
}

TEST_CASE("derivatives commute exactly as monomial maps") {
    MonomialPoly det3 = poly::sym_determinant(3);
    Rng rng(42);
    Vec b = rng.vector(det3.dim());
    Vec c = rng.vector(det3.dim());
    MonomialPoly bc = det3.directional_derivative(b).directional_derivative(c);
    MonomialPoly cb = det3.directional_derivative(c).directional_derivative(b);
    REQUIRE(bc.terms().size() == cb.terms().size());
    for (const auto& [e, v] : bc.terms()) {
        auto it = cb.terms().find(e);
        REQUIRE(it != cb.terms().end());
        CHECK_THAT(v, Catch::Matchers::WithinRel(it->second, 1e-14));
    }
}

TEST_CASE("restriction to lines") {
    MonomialPoly exa3 = poly::sigma2_r3();
    Vec a{1, 1, 1};

    SECTION("matches the closed form t^2 + (2/3)sigma1 t + sigma2") {
        Rng rng(7);
        for (int trial = 0; trial < 5; ++trial) {
            Vec x = rng.vector(3);
            UnivariatePoly u = exa3.restrict_line(a, x);
            REQUIRE(u.degree() == 2);
            CHECK_THAT(u.coeffs[0], Catch::Matchers::WithinAbs(1.0, 1e-14));
            const double s1 = 2.0 / 3.0 * (x[0] + x[1] + x[2]);
            const double s2 = (x[0] * x[1] + x[0] * x[2] + x[1] * x[2]) / 3.0;
            CHECK_THAT(u.coeffs[1], Catch::Matchers::WithinAbs(s1, 1e-12));
            CHECK_THAT(u.coeffs[2], Catch::Matchers::WithinAbs(s2, 1e-12));
        }
    }

    SECTION("x = 0 gives p(a) t^m") {
        UnivariatePoly u = exa3.restrict_line(a, Vec{0, 0, 0});
        CHECK(u.coeffs[0] == 1.0);
        CHECK(u.coeffs[1] == 0.0);
        CHECK(u.coeffs[2] == 0.0);
    }

    SECTION("lorentz restriction: t^2 - 1") {
        MonomialPoly lc = poly::lorentz(3);
        UnivariatePoly u = lc.restrict_line(Vec{1, 0, 0}, Vec{0, 1, 0});
        CHECK(u.coeffs[0] == 1.0);
        CHECK(u.coeffs[1] == 0.0);
        CHECK(u.coeffs[2] == -1.0);
    }

    SECTION("degenerate direction is rejected") {
        CHECK_THROWS_AS(exa3.restrict_line(Vec{1, 0, 0}, Vec{1, 2, 3}),
                        DegenerateDirection);
    }

    SECTION("restriction agrees with direct evaluation at random t") {
        MonomialPoly det3 = poly::sym_determinant(3);
        Vec id = poly::sym_identity(3);
        Rng rng(11);
        Vec x = rng.vector(det3.dim());
        UnivariatePoly u = det3.restrict_line(id, x);
        for (int i = 0; i < 20; ++i) {
            const double t = rng.uniform(-3.0, 3.0);
            const double direct = det3.eval(axpy(t, id, x));
            CHECK_THAT(u.eval(t),
                       Catch::Matchers::WithinAbs(direct, 1e-12 * (1.0 + std::abs(direct))));
        }
    }
}

TEST_CASE("Euler identity x . grad p = m p") {
    for (const MonomialPoly& p :
         {poly::lorentz(3), poly::sym_determinant(3), poly::sigma2_r3()}) {
        Rng rng(3);
        // gradient assembled from directional derivatives along basis vectors
        std::vector<MonomialPoly> grad;
        for (int j = 0; j < p.dim(); ++j) {
            Vec e(p.dim(), 0.0);
            e[j] = 1.0;
            grad.push_back(p.directional_derivative(e));
        }
        for (int s = 0; s < 100; ++s) {
            Vec x = rng.vector(p.dim());
            double lhs = 0.0;
            for (int j = 0; j < p.dim(); ++j) lhs += x[j] * grad[j].eval(x);
            const double rhs = p.degree() * p.eval(x);
            const double scale = std::max(1.0, std::abs(rhs));
            CHECK(std::abs(lhs - rhs) <= 1e-10 * scale);
        }
    }
}

TEST_CASE("polarized values") {
    SECTION("coordinate product with the standard basis gives 1/m!") {
        for (int m : {2, 3, 4}) {
            MonomialPoly p = poly::coordinate_product(m);
            std::vector<Vec> dirs;
            for (int j = 0; j < m; ++j) {
                Vec e(m, 0.0);
                e[j] = 1.0;
                dirs.push_back(e);
            }
            CHECK_THAT(polarized_value(p, dirs),
                       Catch::Matchers::WithinRel(1.0 / factorial(m), 1e-12));
        }
    }

    SECTION("(x1+x2)^2 with b1 = b2 = e1 gives 1") {
        MonomialPoly sq = poly::linear_power(Vec{1, 1}, 2);
        std::vector<Vec> dirs{Vec{1, 0}, Vec{1, 0}};
        CHECK_THAT(polarized_value(sq, dirs), Catch::Matchers::WithinRel(1.0, 1e-12));
    }

    SECTION("det n=2 with identity pair gives 1, cross-checked by differences") {
        MonomialPoly det2 = poly::sym_determinant(2);
        std::vector<Vec> dirs{poly::sym_identity(2), poly::sym_identity(2)};
        const double exact = polarized_value(det2, dirs);
        CHECK_THAT(exact, Catch::Matchers::WithinRel(1.0, 1e-12));
        const double fd = mixed_partial_fd(det2, dirs) / factorial(2);
        CHECK_THAT(exact, Catch::Matchers::WithinAbs(fd, 1e-8));
    }

    SECTION("symmetric under permutations of the directions") {
        MonomialPoly det2 = poly::sym_determinant(2);
        Rng rng(5);
        Vec b1 = rng.vector(3), b2 = rng.vector(3);
        std::vector<Vec> d12{b1, b2}, d21{b2, b1};
        CHECK(polarized_value(det2, d12) == polarized_value(det2, d21));
    }

    SECTION("wrong direction count is rejected") {
        MonomialPoly det2 = poly::sym_determinant(2);
        std::vector<Vec> dirs{poly::sym_identity(2)};
        CHECK_THROWS_AS(polarized_value(det2, dirs), DimensionError);
    }
}

TEST_CASE("pullback to a subspace") {
    MonomialPoly lc = poly::lorentz(3);
    // restrict to {x3 = 0}
    MonomialPoly r = lc.pullback({Vec{1, 0, 0}, Vec{0, 1, 0}});
    REQUIRE(r.dim() == 2);
    CHECK(r.eval(Vec{2, 1}) == 3.0);  // x1^2 - x2^2
    CHECK(r.eval(Vec{1, 1}) == 0.0);
}

TEST_CASE("low-coefficient pruning keeps derivative chains sparse") {
    MonomialPoly::TermMap t;
    t[{2, 0}] = 1.0;
    t[{0, 2}] = 1e-20;
    MonomialPoly p(2, 2, std::move(t));
    CHECK(p.terms().size() == 1);
}
