#include "lsmm/statespace.hpp"

#include <Eigen/Eigenvalues>
#include <cstdlib>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace lsmm {

Complex transfer_eval(const StateSpace& sys, Complex s) {
    sys.validate();
    const Eigen::Index n = sys.order();
    ComplexMatrix resolvent = s * ComplexMatrix::Identity(n, n) - sys.A.cast<Complex>();
    Eigen::PartialPivLU<ComplexMatrix> lu(resolvent);
    double rcond = lu.rcond();
    if (!(rcond > kResolventRcondMin)) {
        throw SingularResolvent("sI - A is numerically singular at s = (" +
                                std::to_string(s.real()) + ", " + std::to_string(s.imag()) +
                                "), rcond = " + std::to_string(rcond));
    }
    ComplexVector x = lu.solve(sys.B.cast<Complex>());
    return sys.C.cast<Complex>() * x;
}

FrequencyResponse frequency_response_serial(const StateSpace& sys, const std::vector<double>& grid) {
    FrequencyResponse out;
    out.grid = grid;
    out.values.resize(grid.size());
    for (std::size_t k = 0; k < grid.size(); ++k) {
        try {
            out.values[k] = transfer_eval(sys, Complex(0.0, grid[k]));
        } catch (const SingularResolvent&) {
            throw SingularResolvent("resolvent singular at omega = " + std::to_string(grid[k]));
        }
    }
    return out;
}

namespace {

int thread_cap() {
#ifdef _OPENMP
    int cap = omp_get_max_threads();
    if (const char* env = std::getenv("LSMM_THREADS")) {
        int requested = std::atoi(env);
        if (requested >= 1 && requested < cap) cap = requested;
    }
    return cap;
#else
    return 1;
#endif
}

}  // namespace

FrequencyResponse frequency_response(const StateSpace& sys, const std::vector<double>& grid) {
    sys.validate();
    FrequencyResponse out;
    out.grid = grid;
    out.values.resize(grid.size());
    const auto npts = static_cast<std::ptrdiff_t>(grid.size());

    // Exceptions must not cross the parallel region; record the first failing
    // grid index and rethrow afterwards.
    std::ptrdiff_t failed = -1;
#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(thread_cap())
#endif
    for (std::ptrdiff_t k = 0; k < npts; ++k) {
        try {
            out.values[static_cast<std::size_t>(k)] = transfer_eval(sys, Complex(0.0, grid[static_cast<std::size_t>(k)]));
        } catch (const SingularResolvent&) {
#ifdef _OPENMP
#pragma omp critical
#endif
            {
                if (failed < 0 || k < failed) failed = k;
            }
        }
    }
    if (failed >= 0) {
        throw SingularResolvent("resolvent singular at omega = " +
                                std::to_string(grid[static_cast<std::size_t>(failed)]));
    }
    return out;
}

Vector balance_matrix(const Matrix& M, Matrix& balanced) {
    const Eigen::Index n = M.rows();
    balanced = M;
    Vector d = Vector::Ones(n);
    const double radix = 2.0;
    bool converged = false;
    while (!converged) {
        converged = true;
        for (Eigen::Index i = 0; i < n; ++i) {
            double r = balanced.row(i).lpNorm<1>() - std::abs(balanced(i, i));
            double c = balanced.col(i).lpNorm<1>() - std::abs(balanced(i, i));
            if (r == 0.0 || c == 0.0) continue;
            double f = 1.0;
            const double s = c + r;
            while (c < r / radix) {
                c *= radix;
                r /= radix;
                f *= radix;
            }
            while (c >= r * radix) {
                c /= radix;
                r *= radix;
                f /= radix;
            }
            if ((c + r) < 0.95 * s) {
                converged = false;
                d(i) *= f;
                balanced.col(i) *= f;
                balanced.row(i) /= f;
            }
        }
    }
    return d;
}

ComplexVector eigenvalues_of(const Matrix& M) {
    if (M.rows() != M.cols()) throw DimensionMismatch("eigenvalues_of expects a square matrix");
    Matrix balanced;
    balance_matrix(M, balanced);
    Eigen::EigenSolver<Matrix> solver(balanced, /*computeEigenvectors=*/false);
    if (solver.info() != Eigen::Success) throw EigenFailure("eigenvalue iteration did not converge");
    return solver.eigenvalues();
}

EigenPairs eigenpairs_of(const Matrix& M) {
    if (M.rows() != M.cols()) throw DimensionMismatch("eigenpairs_of expects a square matrix");
    Matrix balanced;
    Vector d = balance_matrix(M, balanced);
    Eigen::EigenSolver<Matrix> solver(balanced, /*computeEigenvectors=*/true);
    if (solver.info() != Eigen::Success) throw EigenFailure("eigenvalue iteration did not converge");
    EigenPairs out{solver.eigenvalues(), solver.eigenvectors()};
    for (Eigen::Index c = 0; c < out.vectors.cols(); ++c) {
        out.vectors.col(c).array() *= d.array().cast<Complex>();
        out.vectors.col(c) /= out.vectors.col(c).norm();
    }
    return out;
}

Eigen::Index numerical_rank(const ComplexMatrix& M, double tol) {
    Eigen::JacobiSVD<ComplexMatrix> svd(M);
    const auto& sv = svd.singularValues();
    if (sv.size() == 0) return 0;
    double smax = sv(0);
    if (smax == 0.0) return 0;
    Eigen::Index rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) / smax >= tol) ++rank;
    return rank;
}

MinimalityReport check_minimal(const StateSpace& sys) {
    sys.validate();
    const Eigen::Index n = sys.order();
    ComplexVector eigs = eigenvalues_of(sys.A);

    MinimalityReport report{true, true};
    ComplexMatrix Ac = sys.A.cast<Complex>();
    for (Eigen::Index i = 0; i < n; ++i) {
        ComplexMatrix shifted = eigs(i) * ComplexMatrix::Identity(n, n) - Ac;

        ComplexMatrix ctrb(n, n + 1);
        ctrb.leftCols(n) = shifted;
        ctrb.col(n) = sys.B.cast<Complex>();
        if (numerical_rank(ctrb) < n) report.controllable = false;

        ComplexMatrix obsv(n + 1, n);
        obsv.topRows(n) = shifted;
        obsv.row(n) = sys.C.cast<Complex>();
        if (numerical_rank(obsv) < n) report.observable = false;

        if (!report.controllable && !report.observable) break;
    }
    return report;
}

bool is_hurwitz(const Matrix& M) {
    ComplexVector eigs = eigenvalues_of(M);
    for (Eigen::Index i = 0; i < eigs.size(); ++i)
        if (eigs(i).real() >= -kHurwitzMargin) return false;
    return true;
}

}  // namespace lsmm
