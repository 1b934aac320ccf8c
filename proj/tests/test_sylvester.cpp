#include <doctest.h>

#include <random>

#include "lsmm/sylvester.hpp"
#include "support/kron_oracle.hpp"
#include "support/test_helpers.hpp"

using namespace lsmm;

TEST_CASE("spectra_disjoint on small examples") {
    CHECK(spectra_disjoint(Matrix::Constant(1, 1, -1.0), Matrix::Zero(1, 1)));
    CHECK_FALSE(spectra_disjoint(Matrix::Constant(1, 1, -1.0), Matrix::Constant(1, 1, -1.0)));

    Matrix a(2, 2), osc(2, 2);
    a << 0.0, 1.0, -2.0, -3.0;        // eigenvalues -1, -2
    osc << 0.0, 1.0, -1.0, 0.0;       // eigenvalues +/- i
    CHECK(spectra_disjoint(a, osc));
}

TEST_CASE("scalar Sylvester cases") {
    // -X + 1 = 0
    SylvesterSolution s1 = solve_sylvester(Matrix::Constant(1, 1, -1.0), Vector::Constant(1, 1.0),
                                           RowVector::Constant(1, 1.0), Matrix::Zero(1, 1));
    CHECK(s1.X(0, 0) == doctest::Approx(1.0).epsilon(1e-12));

    // -X + 1 = X
    SylvesterSolution s2 = solve_sylvester(Matrix::Constant(1, 1, -1.0), Vector::Constant(1, 1.0),
                                           RowVector::Constant(1, 1.0), Matrix::Constant(1, 1, 1.0));
    CHECK(s2.X(0, 0) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("2x2 system with S = 0 reduces to A X = -B") {
    Matrix A(2, 2);
    A << 0.0, 1.0, -2.0, -3.0;
    Vector B(2);
    B << 0.0, 1.0;
    SylvesterSolution sol =
        solve_sylvester(A, B, RowVector::Constant(1, 1.0), Matrix::Zero(1, 1));
    CHECK(sol.X(0, 0) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(sol.X(1, 0) == doctest::Approx(0.0));
}

TEST_CASE("overlapping spectra are rejected") {
    Matrix A = Matrix::Constant(1, 1, -1.0);
    CHECK_THROWS_AS(solve_sylvester(A, Vector::Constant(1, 1.0), RowVector::Constant(1, 1.0),
                                    Matrix::Constant(1, 1, -1.0)),
                    SpectraOverlap);
}

TEST_CASE("residuals stay small on random well-separated instances") {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 25; ++trial) {
        Eigen::Index n = 3 + static_cast<Eigen::Index>(trial % 10) * 6;  // up to 57
        StateSpace sys = testing::random_stable_system(rng, n);
        SignalGenerator gen =
            build_generator(testing::random_skew_spec(rng, 2 + trial % 11));  // nu up to 24
        SylvesterSolution sol = solve_sylvester(sys.A, sys.B, gen.L, gen.S);
        double rel = (sys.A * sol.X + sys.B * gen.L - sol.X * gen.S).norm() /
                     std::max(1.0, sol.X.norm());
        CHECK(rel <= 1e-9);
        CHECK(sol.residual_norm == doctest::Approx((sys.A * sol.X + sys.B * gen.L - sol.X * gen.S).norm()));
    }
}

TEST_CASE("solution is invariant under similarity transforms of the generator") {
    std::mt19937_64 rng(37);
    for (int trial = 0; trial < 10; ++trial) {
        StateSpace sys = testing::random_stable_system(rng, 5);
        SignalGenerator gen = build_generator(testing::random_skew_spec(rng, 2));
        const Eigen::Index nu = gen.nu();

        SylvesterSolution direct = solve_sylvester(sys.A, sys.B, gen.L, gen.S);

        Matrix W = Matrix::Identity(nu, nu);
        W += 0.3 * testing::random_vector(rng, nu) * testing::random_vector(rng, nu).transpose();
        Matrix Winv = W.inverse();
        // A (XW) + B (LW) = (XW) (W^{-1} S W)
        Matrix Stili = Winv * gen.S * W;
        RowVector Ltil = gen.L * W;
        SylvesterSolution transformed = solve_sylvester(sys.A, sys.B, Ltil, Stili);
        Matrix back = transformed.X * Winv;
        CHECK((back - direct.X).norm() <= 1e-8 * std::max(1.0, direct.X.norm()));
    }
}

TEST_CASE("Schur path matches the Kronecker oracle on small instances") {
    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 30; ++trial) {
        Eigen::Index n = 2 + trial % 4;   // <= 5
        Eigen::Index pairs = 1 + trial % 2;
        StateSpace sys = testing::random_stable_system(rng, n);
        SignalGenerator gen = build_generator(testing::random_skew_spec(rng, static_cast<int>(pairs)));
        SylvesterSolution fast = solve_sylvester(sys.A, sys.B, gen.L, gen.S);
        Matrix oracle = testing::kron_sylvester_solve(sys.A, sys.B, gen.L, gen.S);
        CHECK((fast.X - oracle).norm() <= 1e-10 * std::max(1.0, oracle.norm()));
    }
}
