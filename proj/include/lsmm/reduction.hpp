#pragma once

#include <string>
#include <vector>

#include "lsmm/generator.hpp"
#include "lsmm/types.hpp"

namespace lsmm {

inline constexpr double kPlacementTol = 1e-6;      // relative spectrum-matching tolerance
inline constexpr double kInvarianceTol = 1e-8;     // ker P invariance residual, scaled
inline constexpr double kWeightedPinvTol = 1e-9;

enum class Dominance {
    RealPart,   // descending real part (slowest-decaying stable modes)
    Magnitude,  // descending |lambda|
};

// Parameters (P, Delta, Q) of the reduced family, with the SPD weight M that
// defines Q as the weighted right inverse of P.
struct ReductionParameters {
    Matrix P;      // r x nu, full row rank
    Vector Delta;  // nu x 1 output-injection gain
    Matrix Q;      // nu x r
    Matrix M;      // nu x nu SPD weight
};

struct AdmissibilityViolation {
    std::string condition;
    double residual;
};

// Order-nu family F = S - Delta L, G = Delta, H = C Pi: exact moment matching
// at the spectrum of S.
ReducedModel full_order_family(const StateSpace& sys, const SignalGenerator& gen,
                               const Vector& Delta);

struct PlacementResult {
    Vector delta;
    double achieved_error;  // worst relative deviation after pairing
};

// Picks Delta so that spectrum(S - Delta L) lands on the given conjugate-closed
// targets. Ackermann on the dual single-input pair is tried first; if the
// achieved spectrum misses the tolerance, eigenstructure assignment (residue
// form, then resolvent rows, Newton-polished) takes over. The best-effort
// variant returns the closest gain found together with its verified error
// instead of throwing; placements with very large gains are limited by the
// spectrum's own double-precision sensitivity, not by the solve.
PlacementResult place_output_injection_best(const SignalGenerator& gen,
                                            const std::vector<Complex>& targets);
Vector place_output_injection(const SignalGenerator& gen, const std::vector<Complex>& targets);

// The m most dominant eigenvalues, conjugate-closed; throws PairSplit when m
// would cut a complex pair in half.
std::vector<Complex> dominant_eigenvalues(const Matrix& M, Eigen::Index m,
                                          Dominance ordering = Dominance::RealPart);

// Rows spanning the left-invariant subspace of the r dominant (simple)
// eigenvalues of Sd, so that P Sd = F P with spectrum(F) the dominant set.
Matrix dominant_invariant_basis(const Matrix& Sd, Eigen::Index r,
                                Dominance ordering = Dominance::RealPart);

// Q = M P^T (P M P^T)^{-1}, the minimum-M-norm right inverse of P.
Matrix weighted_pinv(const Matrix& P, const Matrix& M);

// Empty iff (P, Delta, Q) are admissible for the reduced family.
std::vector<AdmissibilityViolation> check_admissible(const ReductionParameters& params,
                                                     const SignalGenerator& gen);

// The reduced model F = P(S - Delta L)Q, G = P Delta, H = C Pi Q. H is the
// closed-form weighted least-squares row, so the model minimizes the moment
// mismatch over H for the fixed (F, G).
ReducedModel ls_family(const StateSpace& sys, const SignalGenerator& gen,
                       const CanonicalTransform& xf, const ReductionParameters& params);

}  // namespace lsmm
