#pragma once

#include <vector>

#include "lsmm/types.hpp"

namespace lsmm {

// Numerical policy shared by the structural checks.
inline constexpr double kHurwitzMargin = 1e-10;   // Re < -margin counts as stable
inline constexpr double kResolventRcondMin = 1e-12;
inline constexpr double kRankTolerance = 1e-10;   // sigma_min/sigma_max below this is rank deficient

struct MinimalityReport {
    bool controllable = false;
    bool observable = false;
    bool minimal() const { return controllable && observable; }
};

// W(s) = C (sI - A)^{-1} B via a single linear solve.
Complex transfer_eval(const StateSpace& sys, Complex s);

// Evaluates W(i*omega) over the grid. The parallel variant splits grid points
// across OpenMP threads; outputs are written by index so the ordering (and the
// bits) match the serial reference exactly. LSMM_THREADS caps the team size.
FrequencyResponse frequency_response(const StateSpace& sys, const std::vector<double>& grid);
FrequencyResponse frequency_response_serial(const StateSpace& sys, const std::vector<double>& grid);

// PBH rank tests at every eigenvalue of A.
MinimalityReport check_minimal(const StateSpace& sys);

// True iff every eigenvalue of M has real part < -kHurwitzMargin.
bool is_hurwitz(const Matrix& M);

// Eigenvalues of a real matrix (throws EigenFailure if the solver stalls).
// The matrix is balanced first; badly scaled matrices (e.g. after large
// output-injection gains) lose many digits otherwise.
ComplexVector eigenvalues_of(const Matrix& M);

struct EigenPairs {
    ComplexVector values;
    ComplexMatrix vectors;  // columns, unit norm
};

// Balanced eigendecomposition (values and right eigenvectors).
EigenPairs eigenpairs_of(const Matrix& M);

// Parlett-Reinsch balancing: returns diagonal D (powers of two) with
// D^{-1} M D written into `balanced`.
Vector balance_matrix(const Matrix& M, Matrix& balanced);

// sigma_min/sigma_max rank decision on an arbitrary complex matrix.
Eigen::Index numerical_rank(const ComplexMatrix& M, double tol = kRankTolerance);

}  // namespace lsmm
