#pragma once

#include <vector>

#include "lsmm/generator.hpp"
#include "lsmm/types.hpp"

namespace lsmm {

// Steady-state error data for the interconnection of a system, a reduced
// model, and a signal generator driving both.
struct SteadyStateReport {
    RowVector R;       // C Pi - H P
    double rms_ess;    // r.m.s. of e_ss(t) = R exp(S t) omega0
    double bound;      // ||C Pi - H P||_2
    Vector omega0;
    double rms_input;  // r.m.s. of u(t) = L exp(S t) omega0
};

struct SimulationResult {
    std::vector<double> t;
    Matrix omega;  // nu x N
    Matrix x;      // n x N
    Matrix xi;     // r x N
    Vector e;        // measured error C x - H xi
    Vector e_ss_pred;  // predicted steady state R omega(t)
};

struct RelativeErrorResponse {
    FrequencyResponse response;          // values hold |W - What| / |W| (real)
    std::vector<std::size_t> near_zero;  // grid indices where |W| < 1e-14
};

// R = C Pi - H P from the two Sylvester solutions.
RowVector steady_state_row(const StateSpace& sys, const ReducedModel& model,
                           const SignalGenerator& gen);

// Exact r.m.s. of t -> R exp(S t) omega0 for skew S: half-power per rotating
// block frequency plus full power of the constant part. Amplitudes at equal
// frequencies are combined before squaring.
double rms_periodic(const RowVector& R, const SignalGenerator& gen, const Vector& omega0);

// Windowed trapezoid estimate of the r.m.s. limit over `periods` cycles of the
// slowest mode, propagating omega by matrix-exponential steps. Kept separate
// from the analytic path so the two can cross-check each other.
double rms_quadrature(const RowVector& R, const Matrix& S, const Vector& omega0,
                      int periods = 200, int samples_per_period = 64);

// Theorem-style report: bound = ||R||_2 together with the achieved r.m.s.
// values for the supplied initial condition. Requires A and F Hurwitz, S skew
// and ||L||_2 = 1; violations are reported by name.
SteadyStateReport rms_gain_bound(const StateSpace& sys, const ReducedModel& model,
                                 const SignalGenerator& gen, const CanonicalTransform& xf,
                                 const Vector& omega0);

// Propagates the interconnected (omega, x, xi) block system with a single
// matrix exponential per fixed step; exact for LTI dynamics.
SimulationResult simulate_interconnection(const StateSpace& sys, const ReducedModel& model,
                                          const SignalGenerator& gen, const Vector& omega0,
                                          double horizon, double step,
                                          const Vector* x0 = nullptr, const Vector* xi0 = nullptr);

// |W(iw) - What(iw)| / |W(iw)| over the grid.
RelativeErrorResponse relative_error_response(const StateSpace& sys, const ReducedModel& model,
                                              const std::vector<double>& grid);

}  // namespace lsmm
