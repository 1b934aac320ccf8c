#include "lsmm/reduction.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>

#include "lsmm/statespace.hpp"
#include "lsmm/sylvester.hpp"

namespace lsmm {

namespace {

void require_conjugate_closed(const std::vector<Complex>& values) {
    for (const auto& v : values) {
        if (std::abs(v.imag()) <= 1e-12 * std::max(1.0, std::abs(v))) continue;
        bool matched = false;
        for (const auto& w : values)
            if (std::abs(w - std::conj(v)) <= 1e-9 * std::max(1.0, std::abs(v))) matched = true;
        if (!matched)
            throw PlacementFailure("target list is not closed under conjugation");
    }
}

std::vector<Complex> sorted_spectrum(const Matrix& M) {
    ComplexVector eigs = eigenvalues_of(M);
    std::vector<Complex> out(eigs.data(), eigs.data() + eigs.size());
    std::sort(out.begin(), out.end(), [](const Complex& a, const Complex& b) {
        if (a.real() != b.real()) return a.real() > b.real();
        if (std::abs(a.imag()) != std::abs(b.imag())) return std::abs(a.imag()) < std::abs(b.imag());
        return a.imag() > b.imag();
    });
    return out;
}

// Greedy nearest-neighbour pairing; spectra that genuinely match are far
// better separated than the tolerance, so this is enough.
double max_pairing_error(std::vector<Complex> achieved, const std::vector<Complex>& targets) {
    double worst = 0.0;
    for (const auto& t : targets) {
        double best = std::numeric_limits<double>::infinity();
        std::size_t bestIdx = 0;
        for (std::size_t i = 0; i < achieved.size(); ++i) {
            double d = std::abs(achieved[i] - t);
            if (d < best) {
                best = d;
                bestIdx = i;
            }
        }
        worst = std::max(worst, best / std::max(1.0, std::abs(t)));
        achieved.erase(achieved.begin() + static_cast<std::ptrdiff_t>(bestIdx));
    }
    return worst;
}

// Real coefficients of prod (s - mu_j), ascending degree, built from real
// linear and conjugate-pair quadratic factors.
std::vector<double> real_poly_from_roots(const std::vector<Complex>& roots) {
    std::vector<double> coeffs{1.0};
    std::vector<bool> used(roots.size(), false);
    auto multiply = [&coeffs](const std::vector<double>& factor) {
        std::vector<double> next(coeffs.size() + factor.size() - 1, 0.0);
        for (std::size_t i = 0; i < coeffs.size(); ++i)
            for (std::size_t j = 0; j < factor.size(); ++j) next[i + j] += coeffs[i] * factor[j];
        coeffs = std::move(next);
    };
    for (std::size_t i = 0; i < roots.size(); ++i) {
        if (used[i]) continue;
        used[i] = true;
        const Complex& mu = roots[i];
        if (std::abs(mu.imag()) <= 1e-12 * std::max(1.0, std::abs(mu))) {
            multiply({-mu.real(), 1.0});
            continue;
        }
        for (std::size_t j = i + 1; j < roots.size(); ++j) {
            if (!used[j] && std::abs(roots[j] - std::conj(mu)) <=
                                1e-9 * std::max(1.0, std::abs(mu))) {
                used[j] = true;
                break;
            }
        }
        multiply({std::norm(mu), -2.0 * mu.real(), 1.0});
    }
    return coeffs;
}

Vector ackermann_gain(const Matrix& S, const RowVector& L, const std::vector<Complex>& targets) {
    const Eigen::Index nu = S.rows();
    // Dual controllable pair (S^T, L^T); Delta = K^T.
    Matrix St = S.transpose();
    Matrix ctrb(nu, nu);
    Vector col = L.transpose();
    for (Eigen::Index j = 0; j < nu; ++j) {
        ctrb.col(j) = col;
        col = St * col;
    }
    std::vector<double> p = real_poly_from_roots(targets);
    Matrix pS = Matrix::Zero(nu, nu);
    for (std::size_t c = p.size(); c-- > 0;) {
        pS = pS * St;
        pS += p[c] * Matrix::Identity(nu, nu);
    }
    RowVector eLast = RowVector::Zero(nu);
    eLast(nu - 1) = 1.0;
    Eigen::FullPivLU<Matrix> lu(ctrb.transpose());
    RowVector K = (lu.solve(eLast.transpose())).transpose() * pS;
    return K.transpose();
}

// Partial-fraction form of det(sI - S + Delta L) = p_S(s) (1 + L (sI-S)^{-1} Delta):
// with S diagonalizable as S = V diag(lambda) V^{-1}, the gain is
// Delta = V d, d_k = p_t(lambda_k) / (p_S'(lambda_k) c_k), c_k = L v_k.
// Factors are accumulated as interleaved ratios so magnitudes stay bounded.
Vector residue_gain(const Matrix& S, const RowVector& L, const std::vector<Complex>& targets) {
    const Eigen::Index nu = S.rows();
    EigenPairs eig = eigenpairs_of(S);
    ComplexVector lambda = eig.values;
    ComplexMatrix V = eig.vectors;

    double scale = 1.0;
    for (Eigen::Index k = 0; k < nu; ++k) scale = std::max(scale, std::abs(lambda(k)));
    for (Eigen::Index k = 0; k < nu; ++k)
        for (Eigen::Index l = k + 1; l < nu; ++l)
            if (std::abs(lambda(k) - lambda(l)) <= 1e-9 * scale)
                throw PlacementFailure("generator spectrum has repeated eigenvalues");

    ComplexRowVector c = L.cast<Complex>() * V;
    auto by_imag = [](const Complex& a, const Complex& b) {
        if (a.imag() != b.imag()) return a.imag() < b.imag();
        return a.real() < b.real();
    };
    std::vector<Complex> mu = targets;
    std::sort(mu.begin(), mu.end(), by_imag);

    ComplexVector d(nu);
    for (Eigen::Index k = 0; k < nu; ++k) {
        if (std::abs(c(k)) <= 1e-14 * std::max(1.0, L.norm()))
            throw PlacementFailure("generator mode is unobservable through L");
        std::vector<Complex> poles;
        for (Eigen::Index l = 0; l < nu; ++l)
            if (l != k) poles.push_back(lambda(l));
        std::sort(poles.begin(), poles.end(), by_imag);

        Complex prod = 1.0;
        for (std::size_t j = 0; j < poles.size(); ++j)
            prod *= (lambda(k) - mu[j]) / (lambda(k) - poles[j]);
        prod *= lambda(k) - mu.back();
        d(k) = prod / c(k);
    }
    ComplexVector deltaC = V * d;
    if (deltaC.imag().norm() > 1e-6 * std::max(1.0, deltaC.real().norm()))
        throw PlacementFailure("residue-form gain is not real; targets may be inconsistent");
    return deltaC.real();
}

Vector resolvent_row_gain(const Matrix& S, const RowVector& L, const std::vector<Complex>& targets) {
    const Eigen::Index nu = S.rows();
    Matrix G = Matrix::Zero(nu, nu);
    Vector rhs = Vector::Zero(nu);
    ComplexMatrix Sc = S.cast<Complex>();
    ComplexRowVector Lc = L.cast<Complex>();

    Eigen::Index row = 0;
    std::vector<bool> used(targets.size(), false);
    for (std::size_t i = 0; i < targets.size(); ++i) {
        if (used[i]) continue;
        used[i] = true;
        const Complex mu = targets[i];
        ComplexMatrix shiftedT = (Sc - mu * ComplexMatrix::Identity(nu, nu)).transpose();
        Eigen::PartialPivLU<ComplexMatrix> lu(shiftedT);
        if (!(lu.rcond() > 1e-14))
            throw PlacementFailure("target eigenvalue coincides with the generator spectrum");
        // w = L (S - mu I)^{-1}; the gain must satisfy w Delta = 1 per target.
        ComplexRowVector w = lu.solve(Lc.transpose()).transpose();
        if (std::abs(mu.imag()) <= 1e-12 * std::max(1.0, std::abs(mu))) {
            G.row(row) = w.real();
            rhs(row) = 1.0;
            row += 1;
        } else {
            for (std::size_t j = i + 1; j < targets.size(); ++j) {
                if (!used[j] && std::abs(targets[j] - std::conj(mu)) <=
                                    1e-9 * std::max(1.0, std::abs(mu))) {
                    used[j] = true;
                    break;
                }
            }
            G.row(row) = w.real();
            rhs(row) = 1.0;
            G.row(row + 1) = w.imag();
            rhs(row + 1) = 0.0;
            row += 2;
        }
    }
    if (row != nu) throw PlacementFailure("target count does not fill the generator order");

    // Row equilibration plus one step of iterative refinement: the equations
    // are exact, so the only error is in this solve.
    for (Eigen::Index i = 0; i < nu; ++i) {
        double scale = G.row(i).norm();
        if (scale > 0) {
            G.row(i) /= scale;
            rhs(i) /= scale;
        }
    }
    Eigen::FullPivLU<Matrix> lu(G);
    if (!lu.isInvertible())
        throw PlacementFailure("placement system is singular; targets may be unreachable");
    Vector delta = lu.solve(rhs);
    delta += lu.solve(rhs - G * delta);
    return delta;
}

// One first-order correction of Delta from the eigenvalue sensitivities of
// S - Delta L: for each placed eigenvalue, d(lambda) = -(L v) (y dDelta) with
// v, y the matched right/left eigenvectors normalized by y v = 1.
Vector newton_polish(const Matrix& S, const RowVector& L, const Vector& delta,
                     const std::vector<Complex>& targets) {
    const Eigen::Index nu = S.rows();
    Matrix Sd = S - delta * L;
    EigenPairs eig = eigenpairs_of(Sd);
    ComplexVector lambda = eig.values;
    ComplexMatrix V = eig.vectors;
    Eigen::PartialPivLU<ComplexMatrix> vlu(V);
    if (!(vlu.rcond() > 1e-13)) return delta;
    ComplexMatrix W = vlu.inverse();  // rows are left eigenvectors, y_j v_j = 1

    // Match each target to its nearest achieved eigenvalue.
    std::vector<bool> taken(static_cast<std::size_t>(nu), false);
    Matrix G = Matrix::Zero(nu, nu);
    Vector rhs = Vector::Zero(nu);
    Eigen::Index row = 0;
    std::vector<bool> done(targets.size(), false);
    for (std::size_t i = 0; i < targets.size(); ++i) {
        if (done[i]) continue;
        done[i] = true;
        const Complex mu = targets[i];
        Eigen::Index best = -1;
        double bestDist = std::numeric_limits<double>::infinity();
        for (Eigen::Index e = 0; e < nu; ++e) {
            if (taken[static_cast<std::size_t>(e)]) continue;
            double d = std::abs(lambda(e) - mu);
            if (d < bestDist) {
                bestDist = d;
                best = e;
            }
        }
        if (best < 0) return delta;
        taken[static_cast<std::size_t>(best)] = true;

        Complex lv = (L.cast<Complex>() * V.col(best)).value();
        ComplexRowVector g = lv * W.row(best);
        Complex mismatch = lambda(best) - mu;
        if (std::abs(mu.imag()) <= 1e-12 * std::max(1.0, std::abs(mu))) {
            if (row >= nu) return delta;
            G.row(row) = g.real();
            rhs(row) = mismatch.real();
            row += 1;
        } else {
            for (std::size_t j = 0; j < targets.size(); ++j)
                if (!done[j] &&
                    std::abs(targets[j] - std::conj(mu)) <= 1e-9 * std::max(1.0, std::abs(mu)))
                    done[j] = true;
            for (Eigen::Index e = 0; e < nu; ++e)
                if (!taken[static_cast<std::size_t>(e)] &&
                    std::abs(lambda(e) - std::conj(lambda(best))) <=
                        1e-9 * std::max(1.0, std::abs(lambda(best)))) {
                    taken[static_cast<std::size_t>(e)] = true;
                    break;
                }
            if (row + 1 >= nu + 1) return delta;
            G.row(row) = g.real();
            rhs(row) = mismatch.real();
            G.row(row + 1) = g.imag();
            rhs(row + 1) = mismatch.imag();
            row += 2;
        }
    }
    if (row != nu) return delta;
    Eigen::FullPivLU<Matrix> lu(G);
    if (!lu.isInvertible()) return delta;
    return delta + lu.solve(rhs);
}

}  // namespace

ReducedModel full_order_family(const StateSpace& sys, const SignalGenerator& gen,
                               const Vector& Delta) {
    sys.validate();
    if (Delta.size() != gen.nu()) throw DimensionMismatch("Delta must have length nu");
    if (!spectra_disjoint(sys.A, gen.S))
        throw SpectraOverlap("spectrum of A intersects the generator spectrum");
    Matrix F = gen.S - Delta * gen.L;
    if (!spectra_disjoint(gen.S, F))
        throw SpectraOverlap("spectrum of S - Delta L intersects the generator spectrum");
    SylvesterSolution pi = solve_sylvester(sys.A, sys.B, gen.L, gen.S);
    return ReducedModel{std::move(F), Delta, sys.C * pi.X};
}

PlacementResult place_output_injection_best(const SignalGenerator& gen,
                                            const std::vector<Complex>& targets) {
    const Eigen::Index nu = gen.nu();
    if (static_cast<Eigen::Index>(targets.size()) != nu)
        throw DimensionMismatch("need exactly nu target eigenvalues");
    require_conjugate_closed(targets);

    auto achieved_error = [&](const Vector& delta) {
        Matrix Sd = gen.S - delta * gen.L;
        ComplexVector eigs = eigenvalues_of(Sd);
        std::vector<Complex> achieved(eigs.data(), eigs.data() + eigs.size());
        return max_pairing_error(achieved, targets);
    };

    Vector best;
    double bestErr = std::numeric_limits<double>::infinity();
    Vector delta = ackermann_gain(gen.S, gen.L, targets);
    if (delta.allFinite()) {
        bestErr = achieved_error(delta);
        best = delta;
        if (bestErr <= kPlacementTol) return {best, bestErr};
    }

    // Eigenstructure-assignment fallbacks: residue form first, then the
    // resolvent-row linear system, each refined by Newton steps on the
    // achieved spectrum. Keep whichever gain verifies best.
    for (int method = 0; method < 2; ++method) {
        Vector candidate;
        try {
            candidate = method == 0 ? residue_gain(gen.S, gen.L, targets)
                                    : resolvent_row_gain(gen.S, gen.L, targets);
        } catch (const Error&) {
            continue;
        }
        if (!candidate.allFinite()) continue;
        double err = achieved_error(candidate);
        for (int step = 0; step < 3 && err > 0.01 * kPlacementTol; ++step) {
            Vector polished = newton_polish(gen.S, gen.L, candidate, targets);
            if (!polished.allFinite()) break;
            double polishedErr = achieved_error(polished);
            if (polishedErr >= err) break;
            candidate = polished;
            err = polishedErr;
        }
        if (err < bestErr) {
            bestErr = err;
            best = candidate;
        }
        if (bestErr <= 0.01 * kPlacementTol) break;
    }
    if (!best.size())
        throw PlacementFailure("no placement method produced a finite gain");
    return {best, bestErr};
}

Vector place_output_injection(const SignalGenerator& gen, const std::vector<Complex>& targets) {
    PlacementResult result = place_output_injection_best(gen, targets);
    if (result.achieved_error > kPlacementTol)
        throw PlacementFailure("achieved spectrum deviates from targets by relative " +
                               std::to_string(result.achieved_error));
    return result.delta;
}

std::vector<Complex> dominant_eigenvalues(const Matrix& M, Eigen::Index m, Dominance ordering) {
    if (m < 1 || m > M.rows()) throw DimensionMismatch("requested eigenvalue count out of range");
    std::vector<Complex> eigs = sorted_spectrum(M);
    if (ordering == Dominance::Magnitude) {
        std::stable_sort(eigs.begin(), eigs.end(), [](const Complex& a, const Complex& b) {
            if (std::abs(a) != std::abs(b)) return std::abs(a) > std::abs(b);
            if (a.real() != b.real()) return a.real() > b.real();
            return a.imag() > b.imag();
        });
    }
    std::vector<Complex> out(eigs.begin(), eigs.begin() + m);
    // Real eigen-solvers return exact conjugate pairs, so a cut pair shows up
    // as the next entry conjugating the last taken one.
    if (m < static_cast<Eigen::Index>(eigs.size())) {
        const Complex& last = out.back();
        if (std::abs(last.imag()) > 0 &&
            std::abs(eigs[m] - std::conj(last)) <= 1e-12 * std::max(1.0, std::abs(last)))
            throw PairSplit("count " + std::to_string(m) + " splits a conjugate pair");
    }
    return out;
}

Matrix dominant_invariant_basis(const Matrix& Sd, Eigen::Index r, Dominance ordering) {
    const Eigen::Index nu = Sd.rows();
    std::vector<Complex> wanted = dominant_eigenvalues(Sd, r, ordering);

    // Left eigenrows of Sd are right eigenvectors of Sd^T.
    EigenPairs eig = eigenpairs_of(Sd.transpose());
    ComplexVector eigs = eig.values;
    ComplexMatrix vecs = eig.vectors;

    // Simplicity: every wanted eigenvalue must be isolated in the full spectrum.
    for (const auto& mu : wanted) {
        int hits = 0;
        for (Eigen::Index i = 0; i < eigs.size(); ++i)
            if (std::abs(eigs(i) - mu) <= 1e-6 * std::max(1.0, std::abs(mu))) ++hits;
        if (hits != 1)
            throw DefectiveEigenvalue("eigenvalue (" + std::to_string(mu.real()) + ", " +
                                      std::to_string(mu.imag()) +
                                      ") is repeated; perturb targets apart");
    }

    Matrix P = Matrix::Zero(r, nu);
    std::vector<bool> consumed(static_cast<std::size_t>(eigs.size()), false);
    std::vector<bool> done(wanted.size(), false);
    Eigen::Index row = 0;
    for (std::size_t i = 0; i < wanted.size(); ++i) {
        if (done[i]) continue;
        done[i] = true;
        const Complex mu = wanted[i];

        Eigen::Index best = -1;
        double bestDist = std::numeric_limits<double>::infinity();
        for (Eigen::Index e = 0; e < eigs.size(); ++e) {
            if (consumed[static_cast<std::size_t>(e)]) continue;
            double d = std::abs(eigs(e) - mu);
            if (d < bestDist) {
                bestDist = d;
                best = e;
            }
        }
        consumed[static_cast<std::size_t>(best)] = true;

        ComplexRowVector y = vecs.col(best).transpose();
        y /= y.norm();
        // Canonical phase: the largest entry is made real and positive.
        Eigen::Index peak = 0;
        for (Eigen::Index c = 1; c < nu; ++c)
            if (std::abs(y(c)) > std::abs(y(peak))) peak = c;
        y *= std::polar(1.0, -std::arg(y(peak)));

        if (std::abs(mu.imag()) <= 1e-12 * std::max(1.0, std::abs(mu))) {
            P.row(row++) = y.real();
            continue;
        }
        // Consume the conjugate partner from both lists.
        for (std::size_t j = 0; j < wanted.size(); ++j)
            if (!done[j] && std::abs(wanted[j] - std::conj(mu)) <=
                                1e-9 * std::max(1.0, std::abs(mu)))
                done[j] = true;
        for (Eigen::Index e = 0; e < eigs.size(); ++e)
            if (!consumed[static_cast<std::size_t>(e)] &&
                std::abs(eigs(e) - std::conj(mu)) <= 1e-9 * std::max(1.0, std::abs(mu))) {
                consumed[static_cast<std::size_t>(e)] = true;
                break;
            }
        P.row(row++) = y.real();
        P.row(row++) = y.imag();
    }
    if (row != r) throw DefectiveEigenvalue("conjugate pairing failed while assembling the basis");

    // P Sd = F P must hold for the block-diagonal F built from the pairs.
    Matrix Q = P.transpose() * (P * P.transpose()).inverse();
    Matrix F = P * Sd * Q;
    if ((P * Sd - F * P).norm() > kInvarianceTol * std::max(1.0, Sd.norm()))
        throw DefectiveEigenvalue("invariant-subspace residual too large");
    return P;
}

Matrix weighted_pinv(const Matrix& P, const Matrix& M) {
    const Eigen::Index r = P.rows();
    const Eigen::Index nu = P.cols();
    if (M.rows() != nu || M.cols() != nu) throw DimensionMismatch("M must be nu x nu");

    Eigen::JacobiSVD<Matrix> svd(P);
    const auto& sv = svd.singularValues();
    if (sv.size() == 0 || sv(0) == 0.0 || sv(sv.size() - 1) / sv(0) <= kRankTolerance)
        throw RankDeficient("P does not have full row rank");
    Eigen::LLT<Matrix> llt(0.5 * (M + M.transpose()));
    if (llt.info() != Eigen::Success) throw RankDeficient("weight M is not positive definite");

    Matrix PM = P * M;
    Matrix gram = PM * P.transpose();
    Matrix Q = M * P.transpose() * gram.inverse();
    if ((P * Q - Matrix::Identity(r, r)).norm() > kWeightedPinvTol * std::max(1.0, Q.norm()))
        throw RankDeficient("P Q deviates from identity; Gram matrix too ill-conditioned");
    return Q;
}

std::vector<AdmissibilityViolation> check_admissible(const ReductionParameters& params,
                                                     const SignalGenerator& gen) {
    std::vector<AdmissibilityViolation> violations;
    const Matrix& P = params.P;
    const Matrix Sd = gen.S - params.Delta * gen.L;

    Eigen::JacobiSVD<Matrix> svd(P);
    const auto& sv = svd.singularValues();
    double rankRatio = (sv.size() && sv(0) > 0) ? sv(sv.size() - 1) / sv(0) : 0.0;
    if (rankRatio <= kRankTolerance)
        violations.push_back({"(A_P) full row rank", rankRatio});

    Matrix wanted;
    bool weightOk = true;
    Eigen::LLT<Matrix> llt(0.5 * (params.M + params.M.transpose()));
    if (llt.info() != Eigen::Success) {
        violations.push_back({"(A_Q) weight M not SPD", 0.0});
        weightOk = false;
    }
    if (weightOk && rankRatio > kRankTolerance) {
        wanted = params.M * P.transpose() * (P * params.M * P.transpose()).inverse();
        double qResidual = (params.Q - wanted).norm() / std::max(1.0, wanted.norm());
        if (qResidual > kWeightedPinvTol)
            violations.push_back({"(A_Q) Q is not the M-weighted right inverse", qResidual});
    }

    double invResidual = (P * Sd * (Matrix::Identity(P.cols(), P.cols()) - params.Q * P)).norm() /
                         std::max(1.0, Sd.norm());
    if (invResidual > kInvarianceTol)
        violations.push_back({"(A_Delta) ker P is not (S - Delta L)-invariant", invResidual});

    if (!spectra_disjoint(gen.S, P * Sd * params.Q))
        violations.push_back({"(A_Delta) spectrum of F intersects spectrum of S", 0.0});

    return violations;
}

ReducedModel ls_family(const StateSpace& sys, const SignalGenerator& gen,
                       const CanonicalTransform& xf, const ReductionParameters& params) {
    sys.validate();
    auto violations = check_admissible(params, gen);
    if (!violations.empty()) {
        std::string msg = "parameters violate";
        for (const auto& v : violations) msg += " " + v.condition + ";";
        throw InadmissibleParameters(msg);
    }
    if (!spectra_disjoint(sys.A, gen.S))
        throw SpectraOverlap("spectrum of A intersects the generator spectrum");
    (void)xf;  // the weight enters through params.M = T T^H

    const Matrix Sd = gen.S - params.Delta * gen.L;
    SylvesterSolution pi = solve_sylvester(sys.A, sys.B, gen.L, gen.S);

    ReducedModel model;
    model.F = params.P * Sd * params.Q;
    model.G = params.P * params.Delta;
    model.H = sys.C * pi.X * params.Q;

    // The model's own Sylvester solution must reproduce P, otherwise the
    // moment bookkeeping downstream is meaningless.
    SylvesterSolution phat = solve_sylvester(model.F, model.G, gen.L, gen.S);
    double recovery = (phat.X - params.P).norm() / std::max(1.0, params.P.norm());
    if (recovery > 1e-7)
        throw InadmissibleParameters("model Sylvester solution deviates from P by relative " +
                                     std::to_string(recovery));
    return model;
}

}  // namespace lsmm
