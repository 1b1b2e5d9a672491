#include <doctest.h>

#include <numbers>
#include <random>

#include "liftkit/eig_backend.hpp"
#include "liftkit/lifting.hpp"
#include "liftkit/matgen.hpp"

using namespace liftkit;

namespace {

constexpr double kPi = std::numbers::pi;

Vector vec(std::initializer_list<Complex> xs) {
    Vector v(static_cast<Eigen::Index>(xs.size()));
    Eigen::Index i = 0;
    for (Complex x : xs) {
        v(i++) = x;
    }
    return v;
}

LiftVectors custom_lift(Vector v, Complex eta, Vector w, Complex omega) {
    LiftVectors l;
    l.v = std::move(v);
    l.eta = eta;
    l.w = std::move(w);
    l.omega = omega;
    l.strategy = LiftStrategy::Custom;
    return l;
}

// Random unit real vector, independent of the library generator.
Vector random_unit(Eigen::Index n, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Vector v(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        v(i) = u(rng);
    }
    return v / v.norm();
}

// Number of eigenvalues of m with modulus below `cut`.
int count_small(const Matrix& m, double cut) {
    const Vector ev = eig_all(m).values;
    int k = 0;
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
        k += std::abs(ev(i)) < cut ? 1 : 0;
    }
    return k;
}

}  // namespace

TEST_CASE("build_lift writes the bordered rank-one update") {
    const Matrix a = Matrix::Zero(1, 1);
    const LiftedSystem sys = build_lift(a, custom_lift(vec({1.0}), 1.0, vec({1.0}), 1.0));
    Matrix expected(2, 2);
    expected << 1, 1, 1, 1;
    CHECK(sys.lifted == expected);
}

TEST_CASE("build_lift is exact entrywise") {
    const TwoByTwoFamily f = make_2x2(1e-3);
    const Matrix a = f.shifted();
    const LiftVectors lift = random_lift_vectors(2, 0.7, 1.3, 5);
    const LiftedSystem sys = build_lift(a, lift);
    const Vector fv = lift.full_v();
    const Vector fw = lift.full_w();
    for (Eigen::Index i = 0; i < 3; ++i) {
        for (Eigen::Index j = 0; j < 3; ++j) {
            const Complex base = (i < 2 && j < 2) ? a(i, j) : Complex{};
            CHECK(sys.lifted(i, j) == base + fv(i) * fw(j));
        }
    }
}

TEST_CASE("build_lift on the defective 2x2 problem has a zero eigenvalue") {
    const TwoByTwoFamily f = make_2x2(0.0);
    const LiftedSystem sys = build_lift(f.shifted(), random_lift_vectors(2, 1.0, 1.0, 1));
    const EigenPair p = nearest_eigenpair(eig_all(sys.lifted), Complex{});
    CHECK(std::abs(p.value) <= 1e-12);
    CHECK(sys.checks.passed());
}

TEST_CASE("build_lift dimension errors") {
    CHECK_THROWS_AS(build_lift(Matrix::Zero(2, 3), random_lift_vectors(2, 1, 1, 1)),
                    DimensionMismatch);
    CHECK_THROWS_AS(build_lift(Matrix::Zero(2, 2), random_lift_vectors(3, 1, 1, 1)),
                    DimensionMismatch);
}

TEST_CASE("check_conditions flags") {
    const TwoByTwoFamily f = make_2x2(0.0);
    const Matrix a = f.shifted();
    const Vector phi = f.right_nullvector();
    const Vector psi = f.left_nullvector();

    SUBCASE("eta = 0 fails condition (iii)") {
        LiftVectors l = random_lift_vectors(2, 1.0, 1.0, 3);
        l.eta = 0.0;
        const ConditionReport rep = build_lift(a, l).checks;
        CHECK_FALSE(rep.eta_omega_ok);
        CHECK_FALSE(rep.passed());
    }
    SUBCASE("omega = 0 fails condition (iii)") {
        LiftVectors l = random_lift_vectors(2, 1.0, 1.0, 3);
        l.omega = 0.0;
        const ConditionReport rep = check_conditions(a, l, phi, psi);
        CHECK_FALSE(rep.eta_omega_ok);
        CHECK_FALSE(rep.lifted_inner_ok);
    }
    SUBCASE("pathological lift v = phi, eta = -1, omega = w^T phi") {
        std::mt19937_64 rng(11);
        const Vector w = random_unit(2, rng);
        const Complex omega = w.transpose() * phi;
        const ConditionReport rep = check_conditions(a, custom_lift(phi, -1.0, w, omega), phi, psi);
        CHECK(std::abs(rep.lifted_inner) < 1e-15);
        CHECK_FALSE(rep.lifted_inner_ok);
        CHECK_FALSE(rep.passed());
    }
    SUBCASE("random lifts pass on 1000 seeds") {
        int failures = 0;
        for (std::uint64_t seed = 0; seed < 1000; ++seed) {
            failures += check_conditions(a, random_lift_vectors(2, 1.0, 1.0, seed), phi, psi).passed() ? 0 : 1;
        }
        CHECK(failures == 0);
    }
    SUBCASE("length mismatch") {
        CHECK_THROWS_AS(check_conditions(a, random_lift_vectors(2, 1, 1, 1), vec({1.0}), psi),
                        DimensionMismatch);
    }
}

TEST_CASE("condition flags are invariant under positive scaling of A") {
    const TwoByTwoFamily f = make_2x2(0.0);
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const LiftVectors l = random_lift_vectors(2, 1.0, 1.0, seed);
        for (double c : {1e-6, 1e-2, 1.0, 1e3, 1e8}) {
            const ConditionReport base = build_lift(f.shifted(), l).checks;
            const ConditionReport scaled = build_lift(c * f.shifted(), l).checks;
            CHECK(base.w_dot_phi_ok == scaled.w_dot_phi_ok);
            CHECK(base.psi_dot_v_ok == scaled.psi_dot_v_ok);
            CHECK(base.eta_omega_ok == scaled.eta_omega_ok);
            CHECK(base.lifted_inner_ok == scaled.lifted_inner_ok);
        }
    }
}

TEST_CASE("solve_nullpair on the exactly defective 2x2 problem") {
    const TwoByTwoFamily f = make_2x2(0.0);
    const Vector phi = f.right_nullvector();
    const Vector psi = f.left_nullvector();
    for (std::uint64_t seed = 1; seed <= 25; ++seed) {
        const LiftVectors lift = random_lift_vectors(2, 1.0, 1.0, seed);
        const LiftedSystem sys = build_lift(f.shifted(), lift, phi, psi);
        REQUIRE(sys.checks.passed());
        const NullPair pair = solve_nullpair(sys);

        const Complex ratio = pair.phi_lifted(1) / pair.phi_lifted(0);
        CHECK(std::abs(ratio - Complex(-kPi / 2.0, 0.0)) <= 1e-12);

        const Complex w_phi = lift.w.transpose() * phi;
        const Complex want_xi = -w_phi / lift.omega;
        CHECK(std::abs(pair.xi / pair.r - want_xi) <= 1e-10 * std::abs(want_xi));

        const Complex psi_v = psi.transpose() * lift.v;
        const Complex want_zeta = -psi_v / lift.eta;
        CHECK(std::abs(pair.zeta / pair.s - want_zeta) <= 1e-10 * std::abs(want_zeta));

        CHECK(std::abs(pair.phi_lifted.norm() - 1.0) < 1e-14);
        CHECK((sys.lifted * pair.phi_lifted).norm() <= 100.0 * 3.0 * sys.lifted.norm() * kMachineEps);
        CHECK((pair.psi_lifted.transpose() * sys.lifted).norm() <= 100.0 * 3.0 * sys.lifted.norm() * kMachineEps);
    }
}

TEST_CASE("solve_nullpair raises DegenerateLift when xi vanishes") {
    Matrix a = Matrix::Zero(2, 2);
    a(1, 1) = 1.0;
    // w is orthogonal to the nullvector e_1, so xi = -r w^T phi / omega = 0.
    const LiftedSystem sys = build_lift(a, custom_lift(vec({1.0, 1.0}), 1.0, vec({0.0, 1.0}), 1.0));
    CHECK_FALSE(sys.checks.w_dot_phi_ok);
    CHECK_THROWS_AS(solve_nullpair(sys), DegenerateLift);
}

TEST_CASE("verify_alpha") {
    const TwoByTwoFamily f = make_2x2(0.0);
    const LiftVectors lift = random_lift_vectors(2, 1.0, 1.0, 9);
    const LiftedSystem sys = build_lift(f.shifted(), lift);
    NullPair pair = solve_nullpair(sys);
    CHECK(std::abs(verify_alpha(sys, pair)) <= 1e-12);

    NullPair zero = pair;
    zero.phi_lifted.setZero();
    CHECK(verify_alpha(sys, zero) == Complex{});

    NullPair bumped = pair;
    bumped.phi_lifted(2) += 1.0;
    CHECK(std::abs(verify_alpha(sys, bumped) - lift.omega) <= 1e-12);
}

TEST_CASE("recovery, alpha and inner-product identities on exactly defective generators") {
    struct Case {
        Matrix a;
        Vector phi;
        Vector psi;
        const char* name;
    };
    std::vector<Case> cases;
    {
        const TwoByTwoFamily f = make_2x2(0.0);
        cases.push_back({f.shifted(), f.right_nullvector(), f.left_nullvector(), "2x2"});
    }
    for (Eigen::Index n : {3, 6, 12}) {
        const LargeTestMatrix tm = make_large(n, 0.0, 17);
        cases.push_back({tm.a, tm.right_nullvector(), tm.left_nullvector(), "large"});
    }
    for (const auto& c : cases) {
        CAPTURE(c.name);
        CAPTURE(c.a.rows());
        for (std::uint64_t seed = 100; seed < 120; ++seed) {
            const LiftVectors lift = random_lift_vectors(c.a.rows(), 1.0, 1.0, seed);
            const LiftedSystem sys = build_lift(c.a, lift, c.phi, c.psi);
            REQUIRE(sys.checks.passed());
            const NullPair pair = solve_nullpair(sys);

            // Accuracy of the computed nullpair degrades as eps ||L|| / s(0).
            const double lnorm = sys.lifted.norm();
            const double s0 = std::abs(pair.psi_lifted.dot(pair.phi_lifted));
            const double resid = 100.0 * kMachineEps * lnorm / s0;
            CHECK((pair.recovered_right - phase_normalize(c.phi)).norm() <= resid);

            CHECK(std::abs(verify_alpha(sys, pair)) <= resid * lift.full_w().norm() * pair.phi_lifted.norm());

            const Complex lhs = pair.psi_lifted.transpose() * pair.phi_lifted;
            const Complex psi_phi = c.psi.transpose() * c.phi;
            const Complex rhs = pair.r * pair.s * psi_phi + pair.zeta * pair.xi;
            CHECK(std::abs(lhs - rhs) <= 1e-10);

            CHECK(count_small(sys.lifted, std::sqrt(kMachineEps) * lnorm) == 1);
        }
    }
}

TEST_CASE("lifted matrix has a simple small eigenvalue on the near-defective generators") {
    for (double eps : {1e-14, 1e-12, 1e-10, 1e-8}) {
        const TwoByTwoFamily f = make_2x2(eps);
        for (std::uint64_t seed = 0; seed < 20; ++seed) {
            const LiftedSystem sys = build_lift(f.shifted(), random_lift_vectors(2, 1.0, 1.0, seed));
            REQUIRE(sys.checks.lifted_inner_ok);
            CHECK(count_small(sys.lifted, std::sqrt(kMachineEps) * sys.lifted.norm()) == 1);
        }
    }
    const LargeTestMatrix tm = make_large(20, 1e-12, 3);
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const LiftedSystem sys = build_lift(tm.a, random_lift_vectors(20, 1.0, 1.0, seed));
        REQUIRE(sys.checks.lifted_inner_ok);
        CHECK(count_small(sys.lifted, std::sqrt(kMachineEps) * sys.lifted.norm()) == 1);
    }
}

TEST_CASE("gram_nondefect_check") {
    const Vector e1 = vec({1.0, 0.0});
    const Vector e2 = vec({0.0, 1.0});

    SUBCASE("nu = 1, Psi = Phi") {
        const std::vector<Vector> r{e1};
        const GramCheck g = gram_nondefect_check(r, r);
        CHECK(g.gram(0, 0) == Complex(1.0, 0.0));
        CHECK(g.nondefective);
    }
    SUBCASE("nu = 1, orthogonal") {
        const std::vector<Vector> r{e1};
        const std::vector<Vector> l{e2};
        const GramCheck g = gram_nondefect_check(r, l);
        CHECK(g.gram(0, 0) == Complex{});
        CHECK_FALSE(g.nondefective);
    }
    SUBCASE("nu = 2, rank deficient within tolerance") {
        const Vector f1 = vec({1.0, 0.0, 0.0});
        const Vector f2 = vec({0.0, 1.0, 0.0});
        const Vector g2 = vec({0.0, 1e-16, 1.0});
        const std::vector<Vector> r{f1, f2};
        const std::vector<Vector> l{f1, g2 / g2.norm()};
        const GramCheck g = gram_nondefect_check(r, l);
        CHECK(std::abs(g.gram(1, 1) - 1e-16) < 1e-30);
        CHECK_FALSE(g.nondefective);
    }
    SUBCASE("mismatched counts") {
        const std::vector<Vector> r{e1, e2};
        const std::vector<Vector> l{e1};
        CHECK_THROWS_AS(gram_nondefect_check(r, l), DimensionMismatch);
    }
}

TEST_CASE("gram check at nu = 1 reduces to |Psi^T Phi| (property)") {
    std::mt19937_64 rng(77);
    std::normal_distribution<double> g;
    for (int t = 0; t < 300; ++t) {
        const Eigen::Index n = 2 + t % 6;
        Vector phi(n);
        Vector psi(n);
        for (Eigen::Index i = 0; i < n; ++i) {
            phi(i) = Complex(g(rng), g(rng));
            psi(i) = Complex(g(rng), g(rng));
        }
        phi /= phi.norm();
        psi /= psi.norm();
        if (t % 3 == 0) {
            // Make Psi bilinear-orthogonal to Phi.
            psi -= (Complex(psi.transpose() * phi) / Complex(phi.transpose() * phi)) * phi;
            psi /= psi.norm();
        }
        const std::vector<Vector> r{phi};
        const std::vector<Vector> l{psi};
        const GramCheck gc = gram_nondefect_check(r, l);
        const double inner = std::abs(Complex(psi.transpose() * phi));
        CHECK(gc.sigma_min == inner);
        CHECK(gc.nondefective == (inner > kConditionTolFactor * kMachineEps));
    }
}
