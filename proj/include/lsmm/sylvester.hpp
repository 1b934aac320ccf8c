#pragma once

#include "lsmm/types.hpp"

namespace lsmm {

inline constexpr double kSpectraGapRel = 1e-8;   // relative spectral gap below which spectra count as overlapping
inline constexpr double kSylvesterTol = 1e-9;    // relative residual ceiling for an accepted solution

struct SylvesterSolution {
    Matrix X;              // n x nu
    double residual_norm;  // ||A X + B L - X S||_F
};

// True iff min |lambda_i(M1) - lambda_j(M2)| exceeds kSpectraGapRel times the
// joint spectral-radius scale.
bool spectra_disjoint(const Matrix& M1, const Matrix& M2);

// Solves A X + B L = X S by Schur decomposition of A and S followed by
// quasi-triangular back substitution (O(n^3 + nu^3) instead of the O((n nu)^3)
// Kronecker route, which the tests keep as an independent oracle).
//
// Throws SpectraOverlap when the spectra of A and S are not disjoint and
// IllConditioned when the computed solution fails the residual ceiling.
SylvesterSolution solve_sylvester(const Matrix& A, const Vector& B,
                                  const RowVector& L, const Matrix& S);

}  // namespace lsmm
