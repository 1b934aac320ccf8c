#include <doctest.h>

#include "lsmm/fss.hpp"
#include "lsmm/statespace.hpp"

using namespace lsmm;

TEST_CASE("splitmix64 stream is stable") {
    SplitMix64 a(42), b(42);
    for (int i = 0; i < 100; ++i) CHECK(a.next() == b.next());
    SplitMix64 c(42);
    double u = c.uniform01();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    CHECK(c.open(2.0, 3.0) > 2.0);
}

TEST_CASE("single-mode structure matches the block formulas") {
    // For chi=0.0005, phi=10, b=0.5, cr=1, cd=2 the mode block is
    // A = [[-0.01, -10], [10, 0]], B = [0.5; 0], C = [1, 0.2].
    StateSpace probe;
    probe.A.resize(2, 2);
    probe.A << -2.0 * 0.0005 * 10.0, -10.0, 10.0, 0.0;
    probe.B.resize(2);
    probe.B << 0.5, 0.0;
    probe.C.resize(2);
    probe.C << 1.0, 2.0 / 10.0;
    CHECK(probe.A(0, 0) == doctest::Approx(-0.01));
    CHECK(is_hurwitz(probe.A));

    // Generated systems share the same block pattern.
    StateSpace sys = build_fss(FSSConfig{1, 7});
    CHECK(sys.order() == 2);
    CHECK(sys.A(0, 1) == doctest::Approx(-sys.A(1, 0)));
    CHECK(sys.A(1, 1) == 0.0);
    CHECK(sys.B(1) == 0.0);
    CHECK(sys.A(0, 0) == doctest::Approx(-2.0 * 0.001 * sys.A(1, 0)).epsilon(1.0));  // chi < 0.001
    CHECK(sys.A(0, 0) < 0.0);
}

TEST_CASE("benchmark dimensions: K=30 gives n=60, nu=24") {
    StateSpace sys = build_fss(FSSConfig{30, 6});
    CHECK(sys.order() == 60);
    SignalGenerator gen = build_generator(benchmark_frequencies_spec());
    CHECK(gen.nu() == 24);
    CHECK(gen.L.norm() == doctest::Approx(1.0));
    for (Eigen::Index i = 0; i < gen.nu(); ++i)
        CHECK(gen.L(i) == doctest::Approx(1.0 / std::sqrt(24.0)));
}

TEST_CASE("generated systems are stable and minimal across seeds") {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        StateSpace sys = build_fss(FSSConfig{8, seed});
        CHECK(is_hurwitz(sys.A));
        CHECK(check_minimal(sys).minimal());
    }
}

TEST_CASE("generation is deterministic in (K, seed)") {
    StateSpace a = build_fss(FSSConfig{12, 99});
    StateSpace b = build_fss(FSSConfig{12, 99});
    CHECK(a.A == b.A);
    CHECK(a.B == b.B);
    CHECK(a.C == b.C);
    StateSpace c = build_fss(FSSConfig{12, 100});
    CHECK(a.A != c.A);
}

TEST_CASE("experiment report is deterministic and satisfies the bound") {
    ExperimentConfig cfg;  // default seed, K=30, r=10
    cfg.grid_points = 50;
    ExperimentReport r1 = run_benchmark_experiment(cfg);
    ExperimentReport r2 = run_benchmark_experiment(cfg);
    CHECK(r1.ls_index == r2.ls_index);
    CHECK(r1.bound == r2.bound);
    CHECK(r1.rms_ess == r2.rms_ess);
    CHECK(serialize_report(r1) == serialize_report(r2));

    CHECK(r1.rms_ess / r1.rms_input <= r1.bound + 1e-6);
    CHECK(r1.placement_error <= 1e-6);
    CHECK(r1.rom_spectrum_error <= 1e-6);
    CHECK(r1.admissibility.empty());
}

TEST_CASE("experiment bound inequality over working seeds") {
    // Placement difficulty depends on where the dominant modes fall; seeds
    // whose draws demand out-of-precision gains raise instead of producing a
    // bad model, and are skipped here.
    int done = 0, tried = 0;
    for (std::uint64_t seed = 1; done < 20 && tried < 80; ++seed, ++tried) {
        ExperimentConfig cfg;
        cfg.fss.seed = seed;
        try {
            ExperimentReport r = run_benchmark_experiment(cfg);
            CHECK(r.rms_ess / r.rms_input <= r.bound + 1e-6);
            ++done;
        } catch (const Error&) {
            continue;
        }
    }
    CHECK(done == 20);
}
