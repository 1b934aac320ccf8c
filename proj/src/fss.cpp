#include "lsmm/fss.hpp"

#include <cmath>
#include <filesystem>

#include "lsmm/analysis.hpp"
#include "lsmm/io.hpp"
#include "lsmm/moments.hpp"
#include "lsmm/statespace.hpp"

namespace lsmm {

StateSpace build_fss(const FSSConfig& cfg) {
    if (cfg.modes < 1) throw DimensionMismatch("mode count must be positive");
    const Eigen::Index K = cfg.modes;
    SplitMix64 rng(cfg.seed);

    StateSpace sys;
    sys.A = Matrix::Zero(2 * K, 2 * K);
    sys.B = Vector::Zero(2 * K);
    sys.C = RowVector::Zero(2 * K);

    for (Eigen::Index k = 0; k < K; ++k) {
        const double chi = rng.open(0.0, 0.001);
        double phi = rng.open(0.0, 100.0);
        while (phi < 1e-9) phi = rng.open(0.0, 100.0);  // degenerate draw, resample
        const double b = rng.open(0.0, 1.0);
        const double cr = rng.open(0.0, 10.0);
        const double cd = rng.open(0.0, 10.0);

        sys.A.block(2 * k, 2 * k, 2, 2) << -2.0 * chi * phi, -phi, phi, 0.0;
        sys.B(2 * k) = b;
        sys.C(2 * k) = cr;
        sys.C(2 * k + 1) = cd / phi;
    }
    return sys;
}

InterpolationSpec benchmark_frequencies_spec() {
    const double freqs[] = {0.01, 0.1, 1.0, 5.5, 10.0, 16.0, 20.0, 30.0, 50.0, 100.0, 1000.0, 10000.0};
    InterpolationSpec spec;
    for (double w : freqs) {
        spec.points.push_back(SpecPoint{Complex(0.0, w), 0});
        spec.points.push_back(SpecPoint{Complex(0.0, -w), 0});
    }
    return spec;
}

namespace {

double pairing_error(const std::vector<Complex>& achieved, const std::vector<Complex>& targets) {
    std::vector<Complex> pool = achieved;
    double worst = 0.0;
    for (const auto& t : targets) {
        double best = std::numeric_limits<double>::infinity();
        std::size_t bestIdx = 0;
        for (std::size_t i = 0; i < pool.size(); ++i) {
            double d = std::abs(pool[i] - t);
            if (d < best) {
                best = d;
                bestIdx = i;
            }
        }
        worst = std::max(worst, best / std::max(1.0, std::abs(t)));
        pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(bestIdx));
    }
    return worst;
}

std::vector<double> log_grid(double lo, double hi, int count) {
    std::vector<double> grid(static_cast<std::size_t>(count));
    const double step = (std::log10(hi) - std::log10(lo)) / (count - 1);
    for (int k = 0; k < count; ++k) grid[static_cast<std::size_t>(k)] = std::pow(10.0, std::log10(lo) + k * step);
    return grid;
}

}  // namespace

ExperimentReport run_benchmark_experiment(const ExperimentConfig& cfg) {
    ExperimentReport report;

    StateSpace sys = build_fss(cfg.fss);
    SignalGenerator gen = build_generator(benchmark_frequencies_spec());
    CanonicalTransform xf = build_transform(gen);
    const Eigen::Index nu = gen.nu();

    // Output injection lands the generator on the nu dominant eigenvalues of A.
    // Best-effort: at this scale the exact gain is ~1e6 and the placed spectrum
    // is more sensitive than double precision can express, so the experiment
    // records the achieved error instead of refusing to continue.
    std::vector<Complex> targets = dominant_eigenvalues(sys.A, nu, cfg.dominance);
    PlacementResult placement = place_output_injection_best(gen, targets);
    Vector delta = placement.delta;
    report.placement_error = placement.achieved_error;
    Matrix Sd = gen.S - delta * gen.L;

    Matrix P = dominant_invariant_basis(Sd, cfg.order, cfg.dominance);
    Matrix Q = weighted_pinv(P, xf.M);
    ReductionParameters params{P, delta, Q, xf.M};
    report.admissibility = check_admissible(params, gen);

    ReducedModel rom = ls_family(sys, gen, xf, params);
    report.ls_index = ls_index(sys, rom, gen.spec);

    ComplexVector fEigs = eigenvalues_of(rom.F);
    report.spectrum_F.assign(fEigs.data(), fEigs.data() + fEigs.size());
    report.dominant_of_A = dominant_eigenvalues(sys.A, cfg.order, cfg.dominance);
    report.rom_spectrum_error = pairing_error(report.spectrum_F, report.dominant_of_A);

    SteadyStateReport ss = rms_gain_bound(sys, rom, gen, xf, gen.L.transpose());
    report.bound = ss.bound;
    report.rms_ess = ss.rms_ess;
    report.rms_input = ss.rms_input;

    if (!cfg.out_dir.empty()) {
        namespace fs = std::filesystem;
        fs::create_directories(cfg.out_dir);
        auto at = [&](const char* name) { return (fs::path(cfg.out_dir) / name).string(); };

        report.model_path = at("model.json");
        report.reduced_path = at("reduced.json");
        report.sys_csv = at("sys_response.csv");
        report.rom_csv = at("rom_response.csv");
        report.rel_err_csv = at("rel_error.csv");
        report.report_path = at("report.json");

        write_model(report.model_path, sys);
        write_model(report.reduced_path, rom);
        std::vector<double> grid = log_grid(1e-2, 1e4, cfg.grid_points);
        write_frequency_csv(report.sys_csv, frequency_response(sys, grid));
        write_frequency_csv(report.rom_csv, frequency_response(rom.as_statespace(), grid));
        write_relative_error_csv(report.rel_err_csv, relative_error_response(sys, rom, grid));
        write_text_file(report.report_path, serialize_report(report));
    }
    return report;
}

std::string serialize_report(const ExperimentReport& report) {
    auto complex_list = [](const std::vector<Complex>& values) {
        std::string out = "[";
        for (std::size_t i = 0; i < values.size(); ++i) {
            if (i) out += ", ";
            out += "[" + format_double(values[i].real()) + ", " + format_double(values[i].imag()) + "]";
        }
        return out + "]";
    };

    std::string out = "{\n";
    out += "  \"ls_index\": " + format_double(report.ls_index) + ",\n";
    out += "  \"bound\": " + format_double(report.bound) + ",\n";
    out += "  \"rms_ess\": " + format_double(report.rms_ess) + ",\n";
    out += "  \"rms_input\": " + format_double(report.rms_input) + ",\n";
    out += "  \"placement_error\": " + format_double(report.placement_error) + ",\n";
    out += "  \"rom_spectrum_error\": " + format_double(report.rom_spectrum_error) + ",\n";
    out += "  \"spectrum_F\": " + complex_list(report.spectrum_F) + ",\n";
    out += "  \"dominant_of_A\": " + complex_list(report.dominant_of_A) + ",\n";
    out += "  \"admissibility_violations\": [";
    for (std::size_t i = 0; i < report.admissibility.size(); ++i) {
        if (i) out += ", ";
        out += "{\"condition\": \"" + report.admissibility[i].condition +
               "\", \"residual\": " + format_double(report.admissibility[i].residual) + "}";
    }
    out += "],\n";
    out += "  \"files\": {\"model\": \"" + report.model_path + "\", \"reduced\": \"" +
           report.reduced_path + "\", \"sys_response\": \"" + report.sys_csv +
           "\", \"rom_response\": \"" + report.rom_csv + "\", \"rel_error\": \"" +
           report.rel_err_csv + "\"}\n";
    out += "}\n";
    return out;
}

}  // namespace lsmm
