#pragma once

#include <vector>

#include "lsmm/types.hpp"

namespace lsmm {

inline constexpr double kDuplicateTol = 1e-10;  // two spec points closer than this are duplicates
inline constexpr double kCharPolyTol = 1e-8;

struct SpecPoint {
    Complex s;
    int order = 0;  // highest matched derivative order k_i; block size is k_i + 1
};

// Interpolation points with orders. Must be conjugate-closed so a real
// generator exists; validate() enforces that together with distinctness.
struct InterpolationSpec {
    std::vector<SpecPoint> points;

    Eigen::Index nu() const;
    void validate() const;

    // Conjugate partners made exact and placed adjacently (Im > 0 first),
    // preserving the first-occurrence order of representatives. All generator
    // and moment orderings follow the canonical form.
    InterpolationSpec canonicalized() const;
};

enum class LScaling {
    Auto,          // normalize exactly when all points are simple and on the imaginary axis
    Normalized,    // force ||L||_2 = 1
    Unnormalized,  // keep the raw unit block entries
};

// Autonomous exosystem  d(omega)/dt = S omega,  theta = L omega, realized with
// real blocks: Jordan blocks for real points, real Jordan blocks for complex
// pairs, and skew blocks [[0, w], [-w, 0]] for simple imaginary pairs.
struct SignalGenerator {
    Matrix S;
    RowVector L;
    InterpolationSpec spec;  // canonical order; defines block layout

    Eigen::Index nu() const { return S.rows(); }
};

// T is the unique matrix with S T = T J and L T = Lambda; J collects the
// (complex) Jordan blocks of the spec points and Lambda the e1^T block rows.
// M = Re(T T^H) is the SPD weight consumed by the weighted pseudoinverse.
struct CanonicalTransform {
    ComplexMatrix T;
    ComplexMatrix J;
    ComplexRowVector Lambda;
    Matrix M;
};

SignalGenerator build_generator(const InterpolationSpec& spec, LScaling scaling = LScaling::Auto);

CanonicalTransform build_transform(const SignalGenerator& gen);

// PBH controllability of (S, omega0): can omega0 excite every generator mode.
bool check_excitable(const SignalGenerator& gen, const Vector& omega0);

// Coefficients of prod_i (s - s_i)^(k_i + 1), ascending degree, real part
// (imaginary parts cancel for conjugate-closed specs).
std::vector<double> char_poly_from_spec(const InterpolationSpec& spec);

// Coefficients of det(sI - M) from the eigenvalues, ascending degree.
std::vector<double> char_poly_coeffs(const Matrix& M);

// Every eigenvalue of S has geometric multiplicity one.
bool is_non_derogatory(const Matrix& S);

}  // namespace lsmm
