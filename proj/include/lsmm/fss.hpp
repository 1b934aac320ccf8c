#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lsmm/reduction.hpp"
#include "lsmm/types.hpp"

namespace lsmm {

// splitmix64: tiny, documented, reproducible across platforms. The benchmark
// family depends only on (K, seed), never on library-internal RNG state.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // Uniform draw from the open interval (lo, hi).
    double open(double lo, double hi) {
        double u = uniform01();
        while (u == 0.0) u = uniform01();
        return lo + u * (hi - lo);
    }

private:
    std::uint64_t state_;
};

// Randomized flexible-space-structure family: K lightly damped modes with
// chi in (0, 0.001), phi in (0, 100), b in (0, 1), output weights in (0, 10).
struct FSSConfig {
    int modes = 30;
    std::uint64_t seed = 6;
};

struct ExperimentConfig {
    FSSConfig fss;
    Eigen::Index order = 10;  // reduced-model order r
    Dominance dominance = Dominance::RealPart;
    std::string out_dir;      // when non-empty, CSV and JSON artifacts are written here
    int grid_points = 500;    // log-spaced over [1e-2, 1e4] rad/s
};

struct ExperimentReport {
    double ls_index = 0.0;
    double bound = 0.0;
    double rms_ess = 0.0;
    double rms_input = 0.0;
    std::vector<Complex> spectrum_F;
    std::vector<Complex> dominant_of_A;
    double placement_error = 0.0;   // relative pairing error of spectrum(S - Delta L)
    double rom_spectrum_error = 0.0; // relative pairing error of spectrum(F)
    std::vector<AdmissibilityViolation> admissibility;
    std::string model_path, reduced_path, sys_csv, rom_csv, rel_err_csv, report_path;
};

StateSpace build_fss(const FSSConfig& cfg);

// The 12 interpolation frequencies of the stock benchmark experiment, +/- i w_i.
InterpolationSpec benchmark_frequencies_spec();

// End-to-end pipeline: build the FSS system, the order-24 skew generator,
// place the 24 dominant eigenvalues through Delta, reduce to order r with the
// dominant invariant basis, and evaluate index, bound and r.m.s. values with
// omega0 = L^T. Deterministic in (K, seed).
ExperimentReport run_benchmark_experiment(const ExperimentConfig& cfg);

std::string serialize_report(const ExperimentReport& report);

}  // namespace lsmm
