#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "lsmm/errors.hpp"

namespace lsmm {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using RowVector = Eigen::RowVectorXd;
using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using ComplexRowVector = Eigen::RowVectorXcd;

// Continuous-time SISO system  dx/dt = A x + B u,  y = C x.
struct StateSpace {
    Matrix A;
    Vector B;
    RowVector C;

    Eigen::Index order() const { return A.rows(); }

    void validate() const {
        if (A.rows() == 0 || A.rows() != A.cols())
            throw DimensionMismatch("A must be square and non-empty");
        if (B.size() != A.rows())
            throw DimensionMismatch("B must be a column of height n");
        if (C.size() != A.rows())
            throw DimensionMismatch("C must be a row of width n");
    }
};

// Reduced model  dxi/dt = F xi + G v,  psi = H xi.
struct ReducedModel {
    Matrix F;
    Vector G;
    RowVector H;

    Eigen::Index order() const { return F.rows(); }

    void validate() const {
        if (F.rows() == 0 || F.rows() != F.cols())
            throw DimensionMismatch("F must be square and non-empty");
        if (G.size() != F.rows())
            throw DimensionMismatch("G must be a column of height r");
        if (H.size() != F.rows())
            throw DimensionMismatch("H must be a row of width r");
    }

    StateSpace as_statespace() const { return StateSpace{F, G, H}; }
};

// Sampled transfer function values W(i*omega) on an angular-frequency grid.
struct FrequencyResponse {
    std::vector<double> grid;
    std::vector<Complex> values;
};

}  // namespace lsmm
