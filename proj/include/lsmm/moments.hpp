#pragma once

#include <vector>

#include "lsmm/generator.hpp"
#include "lsmm/types.hpp"

namespace lsmm {

struct MomentEntry {
    Complex point;
    int order = 0;
    Complex value;
};

// Moments ordered by canonical spec point, then derivative order 0..k_i.
struct MomentVector {
    std::vector<MomentEntry> entries;
};

struct NormIdentity {
    double lhs;  // ||(C Pi - H P) T||^2
    double rhs;  // sum of squared moment mismatches
};

// eta_k(s) = C (sI - A)^{-(k+1)} B via k+1 successive resolvent solves.
Complex moment_oracle(const StateSpace& sys, Complex s, int k);

// Per-block alternating signs (+1, -1, ...) relating C Pi T to the moment row.
Vector signature_for(const std::vector<int>& orders);

// Moments through the Sylvester solution: C * Pi * T, sign-corrected blockwise.
// Agrees with moment_oracle entrywise whenever spectra are disjoint.
MomentVector moments_via_sylvester(const StateSpace& sys, const SignalGenerator& gen,
                                   const CanonicalTransform& xf);

// Least-squares moment-matching index: sum of |eta - eta_hat|^2 over the spec.
double ls_index(const StateSpace& sys, const ReducedModel& model, const InterpolationSpec& spec);

// Both sides of the norm identity tying the weighted row norm to the index.
NormIdentity verify_norm_identity(const StateSpace& sys, const ReducedModel& model,
                                  const SignalGenerator& gen, const CanonicalTransform& xf);

}  // namespace lsmm
