#include <CLI11.hpp>
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "lsmm/analysis.hpp"
#include "lsmm/fss.hpp"
#include "lsmm/io.hpp"
#include "lsmm/moments.hpp"
#include "lsmm/reduction.hpp"
#include "lsmm/statespace.hpp"
#include "lsmm/sylvester.hpp"

namespace {

using namespace lsmm;

std::string g_stage = "startup";
bool g_jsonErrors = false;

void fail_numeric(const Error& e) {
    if (g_jsonErrors) {
        std::cerr << "{\"stage\": \"" << g_stage << "\", \"error\": \"" << e.kind()
                  << "\", \"message\": \"" << e.what() << "\"}\n";
    } else {
        std::cerr << "error [" << g_stage << "] " << e.what() << "\n";
    }
}

Vector parse_omega0(const std::string& text, Eigen::Index nu) {
    Vector w0(nu);
    std::size_t pos = 0;
    for (Eigen::Index i = 0; i < nu; ++i) {
        std::size_t next = text.find(',', pos);
        std::string tok = text.substr(pos, next == std::string::npos ? next : next - pos);
        try {
            w0(i) = std::stod(tok);
        } catch (...) {
            throw DimensionMismatch("omega0 entry '" + tok + "' is not a number");
        }
        if (next == std::string::npos) {
            if (i + 1 != nu) throw DimensionMismatch("omega0 needs nu = " + std::to_string(nu) + " entries");
            return w0;
        }
        pos = next + 1;
    }
    throw DimensionMismatch("omega0 has more than nu entries");
}

struct ReduceOutput {
    ReducedModel model;
    double index = 0.0;
    double bound = 0.0;
    std::vector<Complex> spectrumF;
    std::vector<AdmissibilityViolation> violations;
};

ReduceOutput run_reduce(const StateSpace& sys, const InterpolationSpec& spec, Eigen::Index order,
                        Dominance dominance) {
    if (spec.nu() > sys.order())
        throw DimensionMismatch("spec needs nu <= n: the construction places the nu dominant "
                                "eigenvalues of A, and A has only " + std::to_string(sys.order()));
    g_stage = "generator";
    SignalGenerator gen = build_generator(spec);
    CanonicalTransform xf = build_transform(gen);

    g_stage = "placement";
    std::vector<Complex> targets = dominant_eigenvalues(sys.A, gen.nu(), dominance);
    Vector delta = place_output_injection(gen, targets);

    g_stage = "basis";
    Matrix P = dominant_invariant_basis(gen.S - delta * gen.L, order, dominance);
    Matrix Q = weighted_pinv(P, xf.M);
    ReductionParameters params{P, delta, Q, xf.M};

    g_stage = "reduction";
    ReduceOutput out;
    out.violations = check_admissible(params, gen);
    out.model = ls_family(sys, gen, xf, params);

    g_stage = "sylvester";
    RowVector R = steady_state_row(sys, out.model, gen);
    out.bound = R.norm();

    g_stage = "moments";
    out.index = ls_index(sys, out.model, gen.spec);
    ComplexVector eigs = eigenvalues_of(out.model.F);
    out.spectrumF.assign(eigs.data(), eigs.data() + eigs.size());
    return out;
}

std::string reduce_report_json(const ReduceOutput& out) {
    std::string s = "{\n  \"ls_index\": " + format_double(out.index) + ",\n  \"bound\": " +
                    format_double(out.bound) + ",\n  \"spectrum_F\": [";
    for (std::size_t i = 0; i < out.spectrumF.size(); ++i) {
        if (i) s += ", ";
        s += "[" + format_double(out.spectrumF[i].real()) + ", " +
             format_double(out.spectrumF[i].imag()) + "]";
    }
    s += "],\n  \"admissibility_violations\": [";
    for (std::size_t i = 0; i < out.violations.size(); ++i) {
        if (i) s += ", ";
        s += "{\"condition\": \"" + out.violations[i].condition +
             "\", \"residual\": " + format_double(out.violations[i].residual) + "}";
    }
    s += "]\n}\n";
    return s;
}

std::string steady_state_json(const SteadyStateReport& report) {
    std::string s = "{\n  \"bound\": " + format_double(report.bound) +
                    ",\n  \"rms_ess\": " + format_double(report.rms_ess) +
                    ",\n  \"rms_input\": " + format_double(report.rms_input) + ",\n  \"R\": [";
    for (Eigen::Index i = 0; i < report.R.size(); ++i) {
        if (i) s += ", ";
        s += format_double(report.R(i));
    }
    s += "],\n  \"omega0\": [";
    for (Eigen::Index i = 0; i < report.omega0.size(); ++i) {
        if (i) s += ", ";
        s += format_double(report.omega0(i));
    }
    s += "]\n}\n";
    return s;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Model order reduction by least-squares moment matching\n"
                 "LSMM_THREADS caps the threads used by frequency sweeps."};
    app.require_subcommand(1);
    app.add_flag("--json-errors", g_jsonErrors, "Machine-readable errors on stderr");

    std::string modelPath, reducedPath, specPath, outPath, reportPath, omega0Text, dominanceText = "real";
    std::uint64_t seed = 6;
    int modes = 30;
    Eigen::Index order = 10;
    double horizon = 100.0, step = 0.01;

    auto* cmdMoments = app.add_subcommand("moments", "Print system moments at the spec points");
    cmdMoments->add_option("--model", modelPath, "model JSON")->required();
    cmdMoments->add_option("--spec", specPath, "interpolation spec JSON")->required();

    auto* cmdReduce = app.add_subcommand("reduce", "Build a reduced model via the LS family");
    cmdReduce->add_option("--model", modelPath, "model JSON")->required();
    cmdReduce->add_option("--spec", specPath, "interpolation spec JSON")->required();
    cmdReduce->add_option("--order", order, "reduced order r")->required();
    cmdReduce->add_option("--dominance", dominanceText, "real|magnitude (default real)");
    cmdReduce->add_option("--out", outPath, "write reduced model JSON here instead of stdout");
    cmdReduce->add_option("--report", reportPath, "write the reduction report JSON here");

    auto* cmdAnalyze = app.add_subcommand("analyze", "Steady-state error report for a model pair");
    cmdAnalyze->add_option("--model", modelPath, "model JSON")->required();
    cmdAnalyze->add_option("--reduced", reducedPath, "reduced model JSON")->required();
    cmdAnalyze->add_option("--spec", specPath, "interpolation spec JSON")->required();
    cmdAnalyze->add_option("--omega0", omega0Text, "comma-separated initial condition (default L^T)");
    cmdAnalyze->add_option("--timeseries", outPath, "write t,e,e_ss_pred CSV here");
    cmdAnalyze->add_option("--horizon", horizon, "simulation horizon for --timeseries");
    cmdAnalyze->add_option("--step", step, "simulation step for --timeseries");

    auto* cmdSimulate = app.add_subcommand("simulate", "Time series of the interconnected error system");
    cmdSimulate->add_option("--model", modelPath, "model JSON")->required();
    cmdSimulate->add_option("--reduced", reducedPath, "reduced model JSON")->required();
    cmdSimulate->add_option("--spec", specPath, "interpolation spec JSON")->required();
    cmdSimulate->add_option("--omega0", omega0Text, "comma-separated initial condition (default L^T)");
    cmdSimulate->add_option("--horizon", horizon, "horizon")->required();
    cmdSimulate->add_option("--step", step, "step")->required();
    cmdSimulate->add_option("--out", outPath, "CSV output path (default stdout)");

    auto* cmdBench = app.add_subcommand("bench", "Randomized flexible-structure benchmark run");
    cmdBench->add_option("--modes", modes, "number of modes K (default 30)");
    cmdBench->add_option("--seed", seed, "PRNG seed");
    cmdBench->add_option("--order", order, "reduced order r (default 10)");
    cmdBench->add_option("--out", outPath, "output directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (app.exit(e) == 0) return 0;  // --help
        return 1;
    }

    try {
        if (*cmdReduce && order < 1) {
            std::cerr << "order must be >= 1\n";
            return 1;
        }
        Dominance dominance = Dominance::RealPart;
        if (dominanceText == "magnitude") {
            dominance = Dominance::Magnitude;
        } else if (dominanceText != "real") {
            std::cerr << "dominance must be 'real' or 'magnitude'\n";
            return 1;
        }

        if (*cmdMoments) {
            g_stage = "io";
            StateSpace sys = read_model(modelPath);
            SpecReadResult spec = read_spec(specPath);
            if (spec.completed_conjugates)
                std::cerr << "note: completed " << spec.completed_conjugates
                          << " conjugate point(s)\n";
            g_stage = "generator";
            SignalGenerator gen = build_generator(spec.spec);
            CanonicalTransform xf = build_transform(gen);
            g_stage = "moments";
            MomentVector mv = moments_via_sylvester(sys, gen, xf);
            std::printf("%-24s %-6s %-26s %-26s\n", "point", "order", "Re eta", "Im eta");
            for (const auto& entry : mv.entries) {
                std::string point = "(" + format_double(entry.point.real()) + ", " +
                                    format_double(entry.point.imag()) + ")";
                std::printf("%-24s %-6d %-26s %-26s\n", point.c_str(), entry.order,
                            format_double(entry.value.real()).c_str(),
                            format_double(entry.value.imag()).c_str());
            }
            return 0;
        }

        if (*cmdReduce) {
            g_stage = "io";
            StateSpace sys = read_model(modelPath);
            SpecReadResult spec = read_spec(specPath);
            if (static_cast<Eigen::Index>(order) > spec.spec.nu()) {
                std::cerr << "order must not exceed nu = " << spec.spec.nu() << "\n";
                return 1;
            }
            ReduceOutput out = run_reduce(sys, spec.spec, order, dominance);
            if (outPath.empty())
                std::cout << serialize_model(out.model);
            else
                write_model(outPath, out.model);
            if (reportPath.empty())
                std::cerr << reduce_report_json(out);
            else
                write_text_file(reportPath, reduce_report_json(out));
            return 0;
        }

        if (*cmdAnalyze || *cmdSimulate) {
            g_stage = "io";
            StateSpace sys = read_model(modelPath);
            StateSpace reducedSys = read_model(reducedPath);
            ReducedModel model{reducedSys.A, reducedSys.B, reducedSys.C};
            SpecReadResult spec = read_spec(specPath);
            g_stage = "generator";
            SignalGenerator gen = build_generator(spec.spec);
            CanonicalTransform xf = build_transform(gen);
            Vector w0 = omega0Text.empty() ? Vector(gen.L.transpose())
                                           : parse_omega0(omega0Text, gen.nu());

            if (*cmdAnalyze) {
                g_stage = "sylvester";
                steady_state_row(sys, model, gen);  // overlap fails here, stage-labeled
                g_stage = "analysis";
                SteadyStateReport report = rms_gain_bound(sys, model, gen, xf, w0);
                std::cout << steady_state_json(report);
                if (!outPath.empty()) {
                    SimulationResult sim =
                        simulate_interconnection(sys, model, gen, w0, horizon, step);
                    write_timeseries_csv(outPath, sim);
                }
                return 0;
            }
            g_stage = "simulate";
            SimulationResult sim = simulate_interconnection(sys, model, gen, w0, horizon, step);
            if (outPath.empty()) {
                std::cout << "t,e,e_ss_pred\n";
                for (std::size_t k = 0; k < sim.t.size(); ++k)
                    std::cout << format_double(sim.t[k]) << ","
                              << format_double(sim.e(static_cast<Eigen::Index>(k))) << ","
                              << format_double(sim.e_ss_pred(static_cast<Eigen::Index>(k))) << "\n";
            } else {
                write_timeseries_csv(outPath, sim);
            }
            return 0;
        }

        if (*cmdBench) {
            if (modes < 1) {
                std::cerr << "modes must be >= 1\n";
                return 1;
            }
            if (order < 1) {
                std::cerr << "order must be >= 1\n";
                return 1;
            }
            g_stage = "bench";
            ExperimentConfig cfg;
            cfg.fss.modes = modes;
            cfg.fss.seed = seed;
            cfg.order = order;
            cfg.out_dir = outPath;
            ExperimentReport report = run_benchmark_experiment(cfg);
            std::cout << serialize_report(report);
            return 0;
        }
    } catch (const DimensionMismatch& e) {
        std::cerr << e.what() << "\n";
        return 1;
    } catch (const Error& e) {
        fail_numeric(e);
        return 2;
    }
    return 0;
}
