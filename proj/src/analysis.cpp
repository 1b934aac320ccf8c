#include "lsmm/analysis.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <unsupported/Eigen/MatrixFunctions>

#include "lsmm/statespace.hpp"
#include "lsmm/sylvester.hpp"

namespace lsmm {

namespace {

void require_skew(const Matrix& S) {
    if ((S + S.transpose()).norm() > 1e-9 * std::max(1.0, S.norm()))
        throw NotSkew("S + S^T is not numerically zero");
}

struct HarmonicDecomposition {
    // One (frequency, cosine amplitude, sine amplitude) triple per distinct
    // nonzero frequency, plus the constant component.
    std::vector<double> freq;
    std::vector<double> cosAmp;
    std::vector<double> sinAmp;
    double constant = 0.0;
};

// Splits t -> R exp(S t) w into harmonics using the real Schur form of the
// skew matrix S (block diagonal with 2x2 rotations and 1x1 zeros).
HarmonicDecomposition decompose(const RowVector& R, const Matrix& S, const Vector& w) {
    const Eigen::Index nu = S.rows();
    Eigen::RealSchur<Matrix> schur(S);
    if (schur.info() != Eigen::Success) throw EigenFailure("Schur decomposition did not converge");
    const Matrix& T = schur.matrixT();
    const Matrix& U = schur.matrixU();
    RowVector Rt = R * U;
    Vector wt = U.transpose() * w;

    const double scale = std::max(1.0, S.norm());
    HarmonicDecomposition dec;
    Eigen::Index i = 0;
    while (i < nu) {
        if (i + 1 < nu && std::abs(T(i + 1, i)) > 1e-12 * scale) {
            const double b = 0.5 * (T(i, i + 1) - T(i + 1, i));  // rotation rate of the block
            const double a = Rt(i) * wt(i) + Rt(i + 1) * wt(i + 1);
            const double c = Rt(i) * wt(i + 1) - Rt(i + 1) * wt(i);
            const double f = std::abs(b);
            const double sgn = b >= 0 ? 1.0 : -1.0;
            bool merged = false;
            for (std::size_t g = 0; g < dec.freq.size(); ++g) {
                if (std::abs(dec.freq[g] - f) <= 1e-9 * std::max(1.0, f)) {
                    dec.cosAmp[g] += a;
                    dec.sinAmp[g] += sgn * c;
                    merged = true;
                    break;
                }
            }
            if (!merged) {
                dec.freq.push_back(f);
                dec.cosAmp.push_back(a);
                dec.sinAmp.push_back(sgn * c);
            }
            i += 2;
        } else {
            dec.constant += Rt(i) * wt(i);
            i += 1;
        }
    }
    return dec;
}

}  // namespace

RowVector steady_state_row(const StateSpace& sys, const ReducedModel& model,
                           const SignalGenerator& gen) {
    SylvesterSolution pi = solve_sylvester(sys.A, sys.B, gen.L, gen.S);
    SylvesterSolution p = solve_sylvester(model.F, model.G, gen.L, gen.S);
    return sys.C * pi.X - model.H * p.X;
}

double rms_periodic(const RowVector& R, const SignalGenerator& gen, const Vector& omega0) {
    if (R.size() != gen.nu() || omega0.size() != gen.nu())
        throw DimensionMismatch("R and omega0 must have length nu");
    require_skew(gen.S);
    HarmonicDecomposition dec = decompose(R, gen.S, omega0);
    double power = dec.constant * dec.constant;
    for (std::size_t g = 0; g < dec.freq.size(); ++g)
        power += 0.5 * (dec.cosAmp[g] * dec.cosAmp[g] + dec.sinAmp[g] * dec.sinAmp[g]);
    return std::sqrt(power);
}

double rms_quadrature(const RowVector& R, const Matrix& S, const Vector& omega0,
                      int periods, int samples_per_period) {
    require_skew(S);
    ComplexVector eigs = eigenvalues_of(S);
    double wmin = std::numeric_limits<double>::infinity();
    double wmax = 0.0;
    for (Eigen::Index i = 0; i < eigs.size(); ++i) {
        double w = std::abs(eigs(i).imag());
        if (w > 1e-12 * std::max(1.0, S.norm())) {
            wmin = std::min(wmin, w);
            wmax = std::max(wmax, w);
        }
    }
    if (!std::isfinite(wmin)) return std::abs((R * omega0).value());  // constant signal

    const double horizon = periods * 2.0 * M_PI / wmin;
    const double step = (2.0 * M_PI / wmax) / samples_per_period;
    const auto steps = static_cast<std::size_t>(std::ceil(horizon / step));

    Matrix E = (S * step).exp();
    Vector w = omega0;
    // Hann-weighted mean estimates the infinite-horizon limit far more
    // accurately than a flat average over the same window.
    double weighted = 0.0, mass = 0.0;
    for (std::size_t k = 0; k <= steps; ++k) {
        double t = static_cast<double>(k) * step;
        double window = 0.5 * (1.0 - std::cos(2.0 * M_PI * t / horizon));
        double v = (R * w).value();
        weighted += window * v * v;
        mass += window;
        w = E * w;
    }
    return std::sqrt(weighted / mass);
}

SteadyStateReport rms_gain_bound(const StateSpace& sys, const ReducedModel& model,
                                 const SignalGenerator& gen, const CanonicalTransform& xf,
                                 const Vector& omega0) {
    if (!is_hurwitz(sys.A)) throw HypothesisViolated("A is not Hurwitz");
    if (!is_hurwitz(model.F)) throw HypothesisViolated("F is not Hurwitz");
    if ((gen.S + gen.S.transpose()).norm() > 1e-9 * std::max(1.0, gen.S.norm()))
        throw HypothesisViolated("S is not skew-symmetric");
    if (std::abs(gen.L.norm() - 1.0) > 1e-9)
        throw HypothesisViolated("L does not have unit norm");
    // With S normal and ||L|| = 1 the weight must be a multiple of the identity.
    const double mScale = xf.M.trace() / static_cast<double>(xf.M.rows());
    if ((xf.M - mScale * Matrix::Identity(xf.M.rows(), xf.M.cols())).norm() >
        1e-6 * std::max(1.0, xf.M.norm()))
        throw HypothesisViolated("canonical weight is not proportional to the identity");

    SteadyStateReport report;
    report.R = steady_state_row(sys, model, gen);
    report.bound = report.R.norm();
    report.omega0 = omega0;
    report.rms_ess = rms_periodic(report.R, gen, omega0);
    report.rms_input = rms_periodic(gen.L, gen, omega0);
    return report;
}

SimulationResult simulate_interconnection(const StateSpace& sys, const ReducedModel& model,
                                          const SignalGenerator& gen, const Vector& omega0,
                                          double horizon, double step,
                                          const Vector* x0, const Vector* xi0) {
    sys.validate();
    model.validate();
    if (step <= 0.0 || horizon <= 0.0)
        throw DimensionMismatch("horizon and step must be positive");
    const Eigen::Index nu = gen.nu();
    const Eigen::Index n = sys.order();
    const Eigen::Index r = model.order();
    if (omega0.size() != nu) throw DimensionMismatch("omega0 must have length nu");

    Matrix blk = Matrix::Zero(nu + n + r, nu + n + r);
    blk.topLeftCorner(nu, nu) = gen.S;
    blk.block(nu, 0, n, nu) = sys.B * gen.L;
    blk.block(nu, nu, n, n) = sys.A;
    blk.block(nu + n, 0, r, nu) = model.G * gen.L;
    blk.block(nu + n, nu + n, r, r) = model.F;
    Matrix E = (blk * step).exp();

    RowVector R = steady_state_row(sys, model, gen);

    const auto steps = static_cast<std::size_t>(std::ceil(horizon / step));
    SimulationResult out;
    out.t.resize(steps + 1);
    out.omega.resize(nu, steps + 1);
    out.x.resize(n, steps + 1);
    out.xi.resize(r, steps + 1);
    out.e.resize(steps + 1);
    out.e_ss_pred.resize(steps + 1);

    Vector z = Vector::Zero(nu + n + r);
    z.head(nu) = omega0;
    if (x0) z.segment(nu, n) = *x0;
    if (xi0) z.tail(r) = *xi0;

    for (std::size_t k = 0; k <= steps; ++k) {
        if (!z.allFinite()) throw IllConditioned("simulation state overflowed");
        out.t[k] = static_cast<double>(k) * step;
        out.omega.col(k) = z.head(nu);
        out.x.col(k) = z.segment(nu, n);
        out.xi.col(k) = z.tail(r);
        out.e(k) = (sys.C * z.segment(nu, n)).value() - (model.H * z.tail(r)).value();
        out.e_ss_pred(k) = (R * z.head(nu)).value();
        if (k < steps) z = E * z;
    }
    return out;
}

RelativeErrorResponse relative_error_response(const StateSpace& sys, const ReducedModel& model,
                                              const std::vector<double>& grid) {
    FrequencyResponse full = frequency_response(sys, grid);
    FrequencyResponse reduced = frequency_response(model.as_statespace(), grid);

    RelativeErrorResponse out;
    out.response.grid = grid;
    out.response.values.resize(grid.size());
    for (std::size_t k = 0; k < grid.size(); ++k) {
        double denom = std::abs(full.values[k]);
        if (denom < 1e-14) {
            out.near_zero.push_back(k);
            out.response.values[k] = Complex(std::numeric_limits<double>::infinity(), 0.0);
            continue;
        }
        out.response.values[k] = Complex(std::abs(full.values[k] - reduced.values[k]) / denom, 0.0);
    }
    return out;
}

}  // namespace lsmm
