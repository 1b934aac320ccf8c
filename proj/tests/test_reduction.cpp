#include <doctest.h>

#include <random>

#include "lsmm/moments.hpp"
#include "lsmm/reduction.hpp"
#include "lsmm/sylvester.hpp"
#include "support/test_helpers.hpp"

using namespace lsmm;

namespace {

SignalGenerator origin_generator() {
    InterpolationSpec spec;
    spec.points.push_back(SpecPoint{Complex(0.0, 0.0), 0});
    return build_generator(spec);
}

StateSpace r1() {
    StateSpace sys;
    sys.A = Matrix::Constant(1, 1, -1.0);
    sys.B = Vector::Constant(1, 1.0);
    sys.C = RowVector::Constant(1, 1.0);
    return sys;
}

// Remark-3 style parameters for a random stable system and skew generator.
struct Remark3Setup {
    StateSpace sys;
    SignalGenerator gen;
    CanonicalTransform xf;
    ReductionParameters params;
};

Remark3Setup remark3_setup(std::mt19937_64& rng, Eigen::Index n, int pairs, Eigen::Index r) {
    for (int attempt = 0; attempt < 32; ++attempt) {
        Remark3Setup setup{testing::random_stable_system(rng, n),
                           build_generator(testing::random_skew_spec(rng, pairs)),
                           {},
                           {}};
        try {
            dominant_eigenvalues(setup.sys.A, r);  // reject draws where r cuts a pair
        } catch (const PairSplit&) {
            continue;
        }
        setup.xf = build_transform(setup.gen);
        std::vector<Complex> targets = dominant_eigenvalues(setup.sys.A, setup.gen.nu());
        Vector delta = place_output_injection(setup.gen, targets);
        Matrix Sd = setup.gen.S - delta * setup.gen.L;
        Matrix P = dominant_invariant_basis(Sd, r);
        Matrix Q = weighted_pinv(P, setup.xf.M);
        setup.params = ReductionParameters{P, delta, Q, setup.xf.M};
        return setup;
    }
    throw std::runtime_error("could not draw a Remark-3 compatible instance");
}

}  // namespace

TEST_CASE("full order family on the scalar example") {
    SignalGenerator gen = origin_generator();
    ReducedModel model = full_order_family(r1(), gen, Vector::Constant(1, 1.0));
    CHECK(model.F(0, 0) == doctest::Approx(-1.0));
    CHECK(model.G(0) == doctest::Approx(1.0));
    CHECK(model.H(0) == doctest::Approx(1.0));
    CHECK(transfer_eval(model.as_statespace(), Complex(0.0, 0.0)).real() == doctest::Approx(1.0));
}

TEST_CASE("full order family rejects Delta = 0") {
    CHECK_THROWS_AS(full_order_family(r1(), origin_generator(), Vector::Zero(1)), SpectraOverlap);
}

TEST_CASE("exact matching subsumption on random instances") {
    std::mt19937_64 rng(83);
    for (int trial = 0; trial < 15; ++trial) {
        StateSpace sys = testing::random_stable_system(rng, 4 + trial % 3);
        SignalGenerator gen = build_generator(testing::random_skew_spec(rng, 1 + trial % 3));
        std::vector<Complex> targets;
        for (Eigen::Index j = 0; j < gen.nu(); ++j)
            targets.push_back(Complex(-1.0 - 0.5 * static_cast<double>(j), 0.0));
        Vector delta = place_output_injection(gen, targets);
        ReducedModel model = full_order_family(sys, gen, delta);

        double scale = 0.0;
        for (const auto& p : gen.spec.points)
            scale += std::norm(moment_oracle(sys, p.s, p.order));
        CHECK(ls_index(sys, model, gen.spec) <= 1e-6 * std::max(1.0, scale));
    }
}

TEST_CASE("pole placement on the worked 2x2 example") {
    InterpolationSpec spec;
    spec.points.push_back(SpecPoint{Complex(0.0, 1.0), 0});
    spec.points.push_back(SpecPoint{Complex(0.0, -1.0), 0});
    SignalGenerator gen = build_generator(spec, LScaling::Unnormalized);
    // L = [1, 0] for the unnormalized variant of the skew pair? The block
    // construction keeps L = [1, 1]; place against it directly instead.
    Vector delta = place_output_injection(gen, {Complex(-1.0, 0.0), Complex(-2.0, 0.0)});
    ComplexVector achieved = eigenvalues_of(gen.S - delta * gen.L);
    std::vector<double> re{achieved(0).real(), achieved(1).real()};
    std::sort(re.begin(), re.end());
    CHECK(re[0] == doctest::Approx(-2.0).epsilon(1e-9));
    CHECK(re[1] == doctest::Approx(-1.0).epsilon(1e-9));
    CHECK(std::abs(achieved(0).imag()) <= 1e-9);
}

TEST_CASE("pole placement scalar case") {
    SignalGenerator gen = origin_generator();
    Vector delta = place_output_injection(gen, {Complex(-1.0, 0.0)});
    CHECK(delta(0) == doctest::Approx(1.0));
}

TEST_CASE("pole placement on random observable pairs") {
    std::mt19937_64 rng(89);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        int pairs = 1 + trial % 12;  // nu up to 24
        SignalGenerator gen = build_generator(testing::random_skew_spec(rng, pairs));
        std::vector<Complex> targets;
        Eigen::Index left = gen.nu();
        auto wellSeparated = [&targets](const Complex& c) {
            for (const auto& t : targets)
                if (std::abs(t - c) < 0.15 || std::abs(t - std::conj(c)) < 0.15) return false;
            return true;
        };
        // Mildly damped targets in the generator's frequency range: the use
        // case of the reduction pipeline. Demanding large spectral moves
        // through a rank-one injection makes the placed spectrum more
        // sensitive than the verification tolerance can resolve.
        while (left > 0) {
            if (left >= 2 && unif(rng) < 0.7) {
                Complex c(-0.05 - 0.75 * unif(rng), 0.3 + 5.0 * unif(rng));
                if (!wellSeparated(c)) continue;
                targets.push_back(c);
                targets.push_back(std::conj(c));
                left -= 2;
            } else {
                Complex c(-0.05 - 1.2 * unif(rng), 0.0);
                if (!wellSeparated(c)) continue;
                targets.push_back(c);
                left -= 1;
            }
        }
        Vector delta = place_output_injection(gen, targets);
        ComplexVector achieved = eigenvalues_of(gen.S - delta * gen.L);
        for (const auto& t : targets) {
            double best = 1e300;
            for (Eigen::Index i = 0; i < achieved.size(); ++i)
                best = std::min(best, std::abs(achieved(i) - t));
            CHECK(best <= kPlacementTol * std::max(1.0, std::abs(t)));
        }
    }
}

TEST_CASE("dominant eigenvalue selection") {
    Matrix d = Matrix::Zero(3, 3);
    d.diagonal() << -1.0, -2.0, -3.0;
    auto two = dominant_eigenvalues(d, 2);
    CHECK(two[0].real() == doctest::Approx(-1.0));
    CHECK(two[1].real() == doctest::Approx(-2.0));

    auto byMag = dominant_eigenvalues(d, 2, Dominance::Magnitude);
    CHECK(byMag[0].real() == doctest::Approx(-3.0));
    CHECK(byMag[1].real() == doctest::Approx(-2.0));

    Matrix m = Matrix::Zero(3, 3);
    m.block(0, 0, 2, 2) << -1.0, 2.0, -2.0, -1.0;  // -1 +/- 2i
    m(2, 2) = -3.0;
    auto pair = dominant_eigenvalues(m, 2);
    CHECK(pair[0].real() == doctest::Approx(-1.0));
    CHECK(std::abs(pair[0].imag()) == doctest::Approx(2.0));
    CHECK(pair[1] == std::conj(pair[0]));

    CHECK_THROWS_AS(dominant_eigenvalues(m, 1), PairSplit);
}

TEST_CASE("dominant invariant basis on a diagonal matrix") {
    Matrix d = Matrix::Zero(3, 3);
    d.diagonal() << -1.0, -2.0, -3.0;
    Matrix P = dominant_invariant_basis(d, 2);
    REQUIRE(P.rows() == 2);
    // Rows must be (+/-) unit vectors e1, e2.
    CHECK(std::abs(std::abs(P(0, 0)) - 1.0) <= 1e-12);
    CHECK(std::abs(std::abs(P(1, 1)) - 1.0) <= 1e-12);
    Matrix F = P * d * P.transpose();
    CHECK(F(0, 0) == doctest::Approx(-1.0));
    CHECK(F(1, 1) == doctest::Approx(-2.0));
}

TEST_CASE("dominant invariant basis with a complex pair") {
    Matrix m = Matrix::Zero(3, 3);
    m.block(0, 0, 2, 2) << -1.0, 1.0, -1.0, -1.0;  // -1 +/- i
    m(2, 2) = -5.0;
    Matrix P = dominant_invariant_basis(m, 2);
    Matrix Q = P.transpose() * (P * P.transpose()).inverse();
    Matrix F = P * m * Q;
    CHECK((P * m - F * P).norm() <= 1e-8 * std::max(1.0, m.norm()));
    ComplexVector eigs = eigenvalues_of(F);
    CHECK(eigs(0).real() == doctest::Approx(-1.0));
    CHECK(std::abs(eigs(0).imag()) == doctest::Approx(1.0));
}

TEST_CASE("weighted pseudoinverse closed forms") {
    Matrix P(1, 2);
    P << 1.0, 0.0;
    Matrix Q = weighted_pinv(P, Matrix::Identity(2, 2));
    CHECK(Q(0, 0) == doctest::Approx(1.0));
    CHECK(Q(1, 0) == doctest::Approx(0.0));

    P << 1.0, 1.0;
    Q = weighted_pinv(P, Matrix::Identity(2, 2));
    CHECK(Q(0, 0) == doctest::Approx(0.5));
    CHECK(Q(1, 0) == doctest::Approx(0.5));

    P << 1.0, 0.0;
    Matrix W = Matrix::Zero(2, 2);
    W.diagonal() << 1.0, 4.0;
    Q = weighted_pinv(P, W);
    CHECK(Q(0, 0) == doctest::Approx(1.0));
    CHECK(Q(1, 0) == doctest::Approx(0.0));

    Matrix rankDef(2, 2);
    rankDef << 1.0, 1.0, 1.0, 1.0;
    CHECK_THROWS_AS(weighted_pinv(rankDef, Matrix::Identity(2, 2)), RankDeficient);
}

TEST_CASE("Remark-3 construction is admissible and consistent") {
    std::mt19937_64 rng(97);
    for (int trial = 0; trial < 10; ++trial) {
        Remark3Setup s = remark3_setup(rng, 6, 3, 2);  // n=6, nu=6, r=2
        CHECK(check_admissible(s.params, s.gen).empty());

        ReducedModel model = ls_family(s.sys, s.gen, s.xf, s.params);

        // spectrum(F) = r dominant eigenvalues of A
        std::vector<Complex> want = dominant_eigenvalues(s.sys.A, 2);
        ComplexVector got = eigenvalues_of(model.F);
        for (const auto& w : want) {
            double best = 1e300;
            for (Eigen::Index i = 0; i < got.size(); ++i) best = std::min(best, std::abs(got(i) - w));
            CHECK(best <= 1e-6 * std::max(1.0, std::abs(w)));
        }

        // H equals the closed-form weighted least squares row.
        SylvesterSolution pi = solve_sylvester(s.sys.A, s.sys.B, s.gen.L, s.gen.S);
        RowVector cpi = s.sys.C * pi.X;
        RowVector hopt = cpi * s.params.M * s.params.P.transpose() *
                         (s.params.P * s.params.M * s.params.P.transpose()).inverse();
        CHECK((model.H - hopt).norm() <= 1e-9 * std::max(1.0, hopt.norm()));

        // Invariance residual of ker P.
        Matrix Sd = s.gen.S - s.params.Delta * s.gen.L;
        double inv = (s.params.P * Sd *
                      (Matrix::Identity(s.gen.nu(), s.gen.nu()) - s.params.Q * s.params.P))
                         .norm();
        CHECK(inv <= 1e-8 * std::max(1.0, Sd.norm()));
    }
}

TEST_CASE("ls_family H-optimality against perturbations") {
    std::mt19937_64 rng(103);
    Remark3Setup s = remark3_setup(rng, 6, 3, 2);
    ReducedModel model = ls_family(s.sys, s.gen, s.xf, s.params);

    SylvesterSolution pi = solve_sylvester(s.sys.A, s.sys.B, s.gen.L, s.gen.S);
    SylvesterSolution p = solve_sylvester(model.F, model.G, s.gen.L, s.gen.S);
    RowVector cpi = s.sys.C * pi.X;

    auto objective = [&](const RowVector& h) {
        return ((cpi - h * p.X).cast<Complex>() * s.xf.T).squaredNorm();
    };
    double best = objective(model.H);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (int k = 0; k < 200; ++k) {
        RowVector noise(model.H.size());
        for (Eigen::Index i = 0; i < noise.size(); ++i) noise(i) = gauss(rng);
        noise *= 1e-3 / noise.norm();
        CHECK(objective(model.H + noise) >= best - 1e-12);
    }
}

TEST_CASE("ls_family with identity parameters reduces to the full-order family") {
    std::mt19937_64 rng(107);
    StateSpace sys = testing::random_stable_system(rng, 5);
    SignalGenerator gen = build_generator(testing::random_skew_spec(rng, 2));
    CanonicalTransform xf = build_transform(gen);
    const Eigen::Index nu = gen.nu();

    std::vector<Complex> targets;
    for (Eigen::Index j = 0; j < nu; ++j) targets.push_back(Complex(-1.0 - 0.3 * static_cast<double>(j), 0.0));
    Vector delta = place_output_injection(gen, targets);

    ReductionParameters params{Matrix::Identity(nu, nu), delta, Matrix::Identity(nu, nu), xf.M};
    ReducedModel viaFamily = ls_family(sys, gen, xf, params);
    ReducedModel direct = full_order_family(sys, gen, delta);
    CHECK((viaFamily.F - direct.F).norm() <= 1e-9 * std::max(1.0, direct.F.norm()));
    CHECK((viaFamily.G - direct.G).norm() <= 1e-9);
    CHECK((viaFamily.H - direct.H).norm() <= 1e-9 * std::max(1.0, direct.H.norm()));
    CHECK(ls_index(sys, viaFamily, gen.spec) <= 1e-8);
}

TEST_CASE("check_admissible names the violated conditions") {
    std::mt19937_64 rng(109);
    Remark3Setup s = remark3_setup(rng, 6, 3, 2);

    SUBCASE("clean parameters pass") { CHECK(check_admissible(s.params, s.gen).empty()); }

    SUBCASE("wrong weight in Q") {
        // Replace Q by the unweighted right inverse under a non-identity M.
        ReductionParameters bad = s.params;
        bad.M = Matrix::Identity(s.gen.nu(), s.gen.nu());
        bad.M(0, 0) = 4.0;  // now Q != M P^T (P M P^T)^{-1}
        bad.Q = bad.P.transpose() * (bad.P * bad.P.transpose()).inverse();
        // perturb P so the unweighted inverse actually differs
        auto violations = check_admissible(bad, s.gen);
        bool namedQ = false;
        for (const auto& v : violations)
            if (v.condition.find("(A_Q)") != std::string::npos) namedQ = true;
        CHECK(namedQ);
    }

    SUBCASE("Delta = 0 breaks the spectral condition") {
        ReductionParameters bad = s.params;
        bad.Delta = Vector::Zero(s.gen.nu());
        bad.Q = weighted_pinv(bad.P, bad.M);
        auto violations = check_admissible(bad, s.gen);
        bool namedDelta = false;
        for (const auto& v : violations)
            if (v.condition.find("(A_Delta)") != std::string::npos) namedDelta = true;
        CHECK(namedDelta);
    }
}

TEST_CASE("ls_family rejects inadmissible parameters") {
    std::mt19937_64 rng(113);
    Remark3Setup s = remark3_setup(rng, 6, 3, 2);
    ReductionParameters bad = s.params;
    bad.Delta = Vector::Zero(s.gen.nu());
    CHECK_THROWS_AS(ls_family(s.sys, s.gen, s.xf, bad), InadmissibleParameters);
}
