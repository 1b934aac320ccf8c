#include "lsmm/generator.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <string>

#include "lsmm/statespace.hpp"

namespace lsmm {

namespace {

// A point within duplicate tolerance of an axis is indistinguishable from a
// point on it, so snap rather than risk a phantom conjugate partner.
bool is_real_point(const Complex& s) {
    return std::abs(s.imag()) <= std::max(0.5 * kDuplicateTol, 1e-14 * std::abs(s));
}

bool on_imaginary_axis(const Complex& s) {
    return std::abs(s.real()) <= std::max(0.5 * kDuplicateTol, 1e-14 * std::abs(s));
}

std::string point_str(const Complex& s) {
    return "(" + std::to_string(s.real()) + ", " + std::to_string(s.imag()) + ")";
}

}  // namespace

Eigen::Index InterpolationSpec::nu() const {
    Eigen::Index total = 0;
    for (const auto& p : points) total += p.order + 1;
    return total;
}

void InterpolationSpec::validate() const {
    if (points.empty()) throw DimensionMismatch("interpolation spec has no points");
    for (const auto& p : points)
        if (p.order < 0) throw DimensionMismatch("interpolation order must be non-negative");

    for (std::size_t i = 0; i < points.size(); ++i)
        for (std::size_t j = i + 1; j < points.size(); ++j)
            if (std::abs(points[i].s - points[j].s) <= kDuplicateTol)
                throw DuplicatePoint("points " + point_str(points[i].s) + " and " +
                                     point_str(points[j].s) + " coincide");

    for (const auto& p : points) {
        if (is_real_point(p.s)) continue;
        bool matched = false;
        for (const auto& q : points) {
            if (std::abs(q.s - std::conj(p.s)) <= kDuplicateTol) {
                if (q.order != p.order)
                    throw ConjugateClosureViolation("conjugate of " + point_str(p.s) +
                                                    " present with mismatched order");
                matched = true;
                break;
            }
        }
        if (!matched)
            throw ConjugateClosureViolation("missing conjugate of " + point_str(p.s));
    }
}

InterpolationSpec InterpolationSpec::canonicalized() const {
    validate();
    InterpolationSpec out;
    std::vector<bool> used(points.size(), false);
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (used[i]) continue;
        used[i] = true;
        SpecPoint p = points[i];
        if (is_real_point(p.s)) {
            p.s = Complex(p.s.real(), 0.0);
            out.points.push_back(p);
            continue;
        }
        std::size_t partner = i;
        for (std::size_t j = i + 1; j < points.size(); ++j) {
            if (!used[j] && std::abs(points[j].s - std::conj(p.s)) <= kDuplicateTol) {
                partner = j;
                break;
            }
        }
        used[partner] = true;
        SpecPoint rep = p.s.imag() > 0 ? p : points[partner];
        if (rep.s.imag() <= 0) rep.s = std::conj(rep.s);
        out.points.push_back(rep);
        out.points.push_back(SpecPoint{std::conj(rep.s), rep.order});
    }
    return out;
}

std::vector<double> char_poly_from_spec(const InterpolationSpec& spec) {
    std::vector<Complex> coeffs{1.0};
    for (const auto& p : spec.points) {
        for (int rep = 0; rep <= p.order; ++rep) {
            std::vector<Complex> next(coeffs.size() + 1, 0.0);
            for (std::size_t i = 0; i < coeffs.size(); ++i) {
                next[i + 1] += coeffs[i];
                next[i] -= p.s * coeffs[i];
            }
            coeffs = std::move(next);
        }
    }
    std::vector<double> out(coeffs.size());
    for (std::size_t i = 0; i < coeffs.size(); ++i) out[i] = coeffs[i].real();
    return out;
}

std::vector<double> char_poly_coeffs(const Matrix& M) {
    ComplexVector eigs = eigenvalues_of(M);
    std::vector<Complex> coeffs{1.0};
    for (Eigen::Index k = 0; k < eigs.size(); ++k) {
        std::vector<Complex> next(coeffs.size() + 1, 0.0);
        for (std::size_t i = 0; i < coeffs.size(); ++i) {
            next[i + 1] += coeffs[i];
            next[i] -= eigs(k) * coeffs[i];
        }
        coeffs = std::move(next);
    }
    std::vector<double> out(coeffs.size());
    for (std::size_t i = 0; i < coeffs.size(); ++i) out[i] = coeffs[i].real();
    return out;
}

bool is_non_derogatory(const Matrix& S) {
    const Eigen::Index nu = S.rows();
    ComplexVector eigs = eigenvalues_of(S);
    std::vector<Complex> distinct;
    for (Eigen::Index i = 0; i < eigs.size(); ++i) {
        bool seen = false;
        for (const auto& d : distinct)
            if (std::abs(d - eigs(i)) <= 1e-8 * std::max(1.0, std::abs(d))) seen = true;
        if (!seen) distinct.push_back(eigs(i));
    }
    ComplexMatrix Sc = S.cast<Complex>();
    for (const auto& lambda : distinct) {
        ComplexMatrix shifted = Sc - lambda * ComplexMatrix::Identity(nu, nu);
        if (numerical_rank(shifted) != nu - 1) return false;
    }
    return true;
}

SignalGenerator build_generator(const InterpolationSpec& rawSpec, LScaling scaling) {
    InterpolationSpec spec = rawSpec.canonicalized();
    const Eigen::Index nu = spec.nu();

    bool allSimpleImaginary = true;
    for (const auto& p : spec.points)
        if (p.order != 0 || !on_imaginary_axis(p.s)) allSimpleImaginary = false;

    Matrix S = Matrix::Zero(nu, nu);
    RowVector L = RowVector::Zero(nu);

    Eigen::Index pos = 0;
    std::size_t i = 0;
    while (i < spec.points.size()) {
        const SpecPoint& p = spec.points[i];
        const int k = p.order;
        if (is_real_point(p.s)) {
            // Jordan block J_s of size k + 1 with e1^T output row.
            const Eigen::Index m = k + 1;
            for (Eigen::Index j = 0; j < m; ++j) {
                S(pos + j, pos + j) = p.s.real();
                if (j + 1 < m) S(pos + j, pos + j + 1) = 1.0;
            }
            L(pos) = 1.0;
            pos += m;
            i += 1;
            continue;
        }
        // Conjugate pair: one real block of size 2(k + 1).
        const double sigma = p.s.real();
        const double omega = p.s.imag();
        const Eigen::Index m = 2 * (k + 1);
        if (allSimpleImaginary) {
            S.block(pos, pos, 2, 2) << 0.0, omega, -omega, 0.0;
            L(pos) = 1.0;
            L(pos + 1) = 1.0;
        } else {
            for (int j = 0; j <= k; ++j) {
                S.block(pos + 2 * j, pos + 2 * j, 2, 2) << sigma, omega, -omega, sigma;
                if (j < k) S.block(pos + 2 * j, pos + 2 * (j + 1), 2, 2) = Matrix::Identity(2, 2);
            }
            L(pos) = 1.0;
        }
        pos += m;
        i += 2;  // skip the stored conjugate
    }

    const bool normalize =
        scaling == LScaling::Normalized || (scaling == LScaling::Auto && allSimpleImaginary);
    if (normalize) L /= L.norm();

    SignalGenerator gen{std::move(S), std::move(L), std::move(spec)};

    // Construction sanity: characteristic polynomial and observability.
    std::vector<double> want = char_poly_from_spec(gen.spec);
    std::vector<double> got = char_poly_coeffs(gen.S);
    for (std::size_t c = 0; c < want.size(); ++c) {
        if (std::abs(want[c] - got[c]) > kCharPolyTol * std::max(1.0, std::abs(want[c])))
            throw EigenFailure("generator characteristic polynomial mismatch at degree " +
                               std::to_string(c));
    }
    ComplexVector eigs = eigenvalues_of(gen.S);
    ComplexMatrix Sc = gen.S.cast<Complex>();
    for (Eigen::Index e = 0; e < eigs.size(); ++e) {
        ComplexMatrix pbh(nu + 1, nu);
        pbh.topRows(nu) = eigs(e) * ComplexMatrix::Identity(nu, nu) - Sc;
        pbh.row(nu) = gen.L.cast<Complex>();
        if (numerical_rank(pbh) < nu)
            throw EigenFailure("constructed generator is not observable");
    }
    return gen;
}

CanonicalTransform build_transform(const SignalGenerator& gen) {
    const Eigen::Index nu = gen.nu();

    CanonicalTransform xf;
    xf.J = ComplexMatrix::Zero(nu, nu);
    xf.Lambda = ComplexRowVector::Zero(nu);
    Eigen::Index pos = 0;
    for (const auto& p : gen.spec.points) {
        const Eigen::Index m = p.order + 1;
        for (Eigen::Index j = 0; j < m; ++j) {
            xf.J(pos + j, pos + j) = p.s;
            if (j + 1 < m) xf.J(pos + j, pos + j + 1) = 1.0;
        }
        xf.Lambda(pos) = 1.0;
        pos += m;
    }

    // S T = T J, L T = Lambda as one linear system in vec(T). The solution is
    // unique (observability of (S, L)), so least squares recovers it exactly.
    const Eigen::Index n2 = nu * nu;
    ComplexMatrix lhs = ComplexMatrix::Zero(n2 + nu, n2);
    ComplexVector rhs = ComplexVector::Zero(n2 + nu);
    ComplexMatrix Sc = gen.S.cast<Complex>();
    for (Eigen::Index col = 0; col < nu; ++col) {
        lhs.block(col * nu, col * nu, nu, nu) = Sc;
        for (Eigen::Index col2 = 0; col2 < nu; ++col2)
            lhs.block(col * nu, col2 * nu, nu, nu) -=
                xf.J(col2, col) * ComplexMatrix::Identity(nu, nu);
        lhs.block(n2 + col, col * nu, 1, nu) = gen.L.cast<Complex>();
        rhs(n2 + col) = xf.Lambda(col);
    }
    ComplexVector vecT = lhs.colPivHouseholderQr().solve(rhs);
    xf.T = ComplexMatrix::Zero(nu, nu);
    for (Eigen::Index col = 0; col < nu; ++col) xf.T.col(col) = vecT.segment(col * nu, nu);

    const double tScale = std::max(1.0, xf.T.norm());
    if ((Sc * xf.T - xf.T * xf.J).norm() > 1e-9 * tScale ||
        (gen.L.cast<Complex>() * xf.T - xf.Lambda).norm() > 1e-9 * tScale)
        throw TransformSingular("canonical transform residual too large");
    if (numerical_rank(xf.T, 1e-12) < nu)
        throw TransformSingular("canonical transform is numerically singular");

    ComplexMatrix Mc = xf.T * xf.T.adjoint();
    if (Mc.imag().norm() > 1e-9 * std::max(1.0, Mc.real().norm()))
        throw TransformSingular("weight T T^H has a non-negligible imaginary part");
    xf.M = 0.5 * (Mc.real() + Mc.real().transpose());
    Eigen::LLT<Matrix> llt(xf.M);
    if (llt.info() != Eigen::Success)
        throw TransformSingular("weight M = T T^H is not positive definite");
    return xf;
}

bool check_excitable(const SignalGenerator& gen, const Vector& omega0) {
    const Eigen::Index nu = gen.nu();
    if (omega0.size() != nu) throw DimensionMismatch("omega0 must have length nu");
    ComplexVector eigs = eigenvalues_of(gen.S);
    ComplexMatrix Sc = gen.S.cast<Complex>();
    for (Eigen::Index e = 0; e < eigs.size(); ++e) {
        ComplexMatrix pbh(nu, nu + 1);
        pbh.leftCols(nu) = eigs(e) * ComplexMatrix::Identity(nu, nu) - Sc;
        pbh.col(nu) = omega0.cast<Complex>();
        if (numerical_rank(pbh) < nu) return false;
    }
    return true;
}

}  // namespace lsmm
