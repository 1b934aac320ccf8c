#include "lsmm/sylvester.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <string>
#include <vector>

#include "lsmm/statespace.hpp"

namespace lsmm {

namespace {

// Start indices of the 1x1 / 2x2 diagonal blocks of a real quasi-triangular
// Schur factor. Eigen zeroes converged subdiagonal entries exactly.
std::vector<Eigen::Index> block_starts(const Matrix& T) {
    std::vector<Eigen::Index> starts;
    Eigen::Index i = 0;
    while (i < T.rows()) {
        starts.push_back(i);
        if (i + 1 < T.rows() && T(i + 1, i) != 0.0)
            i += 2;
        else
            i += 1;
    }
    return starts;
}

Eigen::Index block_size(const std::vector<Eigen::Index>& starts, std::size_t k, Eigen::Index total) {
    Eigen::Index next = (k + 1 < starts.size()) ? starts[k + 1] : total;
    return next - starts[k];
}

}  // namespace

bool spectra_disjoint(const Matrix& M1, const Matrix& M2) {
    ComplexVector e1 = eigenvalues_of(M1);
    ComplexVector e2 = eigenvalues_of(M2);
    double scale = 1.0;
    for (Eigen::Index i = 0; i < e1.size(); ++i) scale = std::max(scale, std::abs(e1(i)));
    for (Eigen::Index j = 0; j < e2.size(); ++j) scale = std::max(scale, std::abs(e2(j)));
    double gap = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < e1.size(); ++i)
        for (Eigen::Index j = 0; j < e2.size(); ++j)
            gap = std::min(gap, std::abs(e1(i) - e2(j)));
    return gap > kSpectraGapRel * scale;
}

SylvesterSolution solve_sylvester(const Matrix& A, const Vector& B,
                                  const RowVector& L, const Matrix& S) {
    const Eigen::Index n = A.rows();
    const Eigen::Index nu = S.rows();
    if (A.cols() != n || S.cols() != nu)
        throw DimensionMismatch("A and S must be square");
    if (B.size() != n || L.size() != nu)
        throw DimensionMismatch("B must have length n and L length nu");
    if (!spectra_disjoint(A, S))
        throw SpectraOverlap("spectra of A and S are not disjoint; Sylvester solution not unique");

    // A X - X S = -B L  ->  Ta Y - Y Ts = Ct  with  Y = U^T X V.
    Eigen::RealSchur<Matrix> schurA(A);
    Eigen::RealSchur<Matrix> schurS(S);
    if (schurA.info() != Eigen::Success || schurS.info() != Eigen::Success)
        throw EigenFailure("Schur decomposition did not converge");
    const Matrix& Ta = schurA.matrixT();
    const Matrix& U = schurA.matrixU();
    const Matrix& Ts = schurS.matrixT();
    const Matrix& V = schurS.matrixU();

    Matrix Ct = -(U.transpose() * B) * (L * V);
    Matrix Y = Matrix::Zero(n, nu);

    const auto rowStarts = block_starts(Ta);
    const auto colStarts = block_starts(Ts);

    for (std::size_t k = 0; k < colStarts.size(); ++k) {
        const Eigen::Index c = colStarts[k];
        const Eigen::Index q = block_size(colStarts, k, nu);
        const Matrix Skk = Ts.block(c, c, q, q);

        // Right-hand side picks up the already-solved column blocks.
        Matrix Rk = Ct.middleCols(c, q);
        if (c > 0) Rk += Y.leftCols(c) * Ts.block(0, c, c, q);

        for (std::size_t bi = rowStarts.size(); bi-- > 0;) {
            const Eigen::Index r = rowStarts[bi];
            const Eigen::Index p = block_size(rowStarts, bi, n);

            Matrix rhs = Rk.middleRows(r, p);
            const Eigen::Index below = n - (r + p);
            if (below > 0)
                rhs -= Ta.block(r, r + p, p, below) * Y.block(r + p, c, below, q);

            // (I_q (x) Ta_ii - Skk^T (x) I_p) vec(Yik) = vec(rhs), p*q <= 4.
            Matrix small = Matrix::Zero(p * q, p * q);
            const Matrix Aii = Ta.block(r, r, p, p);
            for (Eigen::Index cq = 0; cq < q; ++cq) {
                small.block(cq * p, cq * p, p, p) = Aii;
                for (Eigen::Index cq2 = 0; cq2 < q; ++cq2)
                    small.block(cq * p, cq2 * p, p, p) -= Skk(cq2, cq) * Matrix::Identity(p, p);
            }
            Vector vecRhs(p * q);
            for (Eigen::Index cq = 0; cq < q; ++cq) vecRhs.segment(cq * p, p) = rhs.col(cq);

            Eigen::FullPivLU<Matrix> lu(small);
            if (!lu.isInvertible())
                throw IllConditioned("quasi-triangular Sylvester step is singular");
            Vector sol = lu.solve(vecRhs);
            for (Eigen::Index cq = 0; cq < q; ++cq) Y.block(r, c + cq, p, 1) = sol.segment(cq * p, p);
        }
    }

    SylvesterSolution out;
    out.X = U * Y * V.transpose();
    out.residual_norm = (A * out.X + B * L - out.X * S).norm();

    const double scale = std::max(1.0, (A.norm() + S.norm()) * std::max(out.X.norm(), 1.0));
    if (out.residual_norm > kSylvesterTol * scale)
        throw IllConditioned("Sylvester residual " + std::to_string(out.residual_norm) +
                             " exceeds tolerance; system too ill-conditioned");
    return out;
}

}  // namespace lsmm
