#include "lsmm/moments.hpp"

#include <string>

#include "lsmm/statespace.hpp"
#include "lsmm/sylvester.hpp"

namespace lsmm {

Complex moment_oracle(const StateSpace& sys, Complex s, int k) {
    sys.validate();
    if (k < 0) throw DimensionMismatch("moment order must be non-negative");
    const Eigen::Index n = sys.order();
    ComplexMatrix resolvent = s * ComplexMatrix::Identity(n, n) - sys.A.cast<Complex>();
    Eigen::PartialPivLU<ComplexMatrix> lu(resolvent);
    if (!(lu.rcond() > kResolventRcondMin))
        throw SingularResolvent("sI - A singular at the moment point");
    ComplexVector x = lu.solve(sys.B.cast<Complex>());
    for (int j = 0; j < k; ++j) x = lu.solve(x);
    return sys.C.cast<Complex>() * x;
}

Vector signature_for(const std::vector<int>& orders) {
    Eigen::Index total = 0;
    for (int k : orders) {
        if (k < 0) throw DimensionMismatch("orders must be non-negative");
        total += k + 1;
    }
    Vector signs(total);
    Eigen::Index pos = 0;
    for (int k : orders)
        for (int j = 0; j <= k; ++j) signs(pos++) = (j % 2 == 0) ? 1.0 : -1.0;
    return signs;
}

MomentVector moments_via_sylvester(const StateSpace& sys, const SignalGenerator& gen,
                                   const CanonicalTransform& xf) {
    SylvesterSolution pi = solve_sylvester(sys.A, sys.B, gen.L, gen.S);
    ComplexRowVector row = sys.C.cast<Complex>() * pi.X.cast<Complex>() * xf.T;

    MomentVector out;
    Eigen::Index pos = 0;
    for (const auto& p : gen.spec.points) {
        for (int j = 0; j <= p.order; ++j) {
            const double sign = (j % 2 == 0) ? 1.0 : -1.0;
            out.entries.push_back(MomentEntry{p.s, j, sign * row(pos)});
            ++pos;
        }
    }
    return out;
}

double ls_index(const StateSpace& sys, const ReducedModel& model, const InterpolationSpec& rawSpec) {
    InterpolationSpec spec = rawSpec.canonicalized();
    StateSpace reduced = model.as_statespace();
    double total = 0.0;
    for (const auto& p : spec.points) {
        for (int j = 0; j <= p.order; ++j) {
            Complex eta, etaHat;
            try {
                eta = moment_oracle(sys, p.s, j);
            } catch (const SingularResolvent& e) {
                throw SingularResolvent(std::string("original system: ") + e.what());
            }
            try {
                etaHat = moment_oracle(reduced, p.s, j);
            } catch (const SingularResolvent& e) {
                throw SingularResolvent(std::string("reduced model: ") + e.what());
            }
            total += std::norm(eta - etaHat);
        }
    }
    return total;
}

NormIdentity verify_norm_identity(const StateSpace& sys, const ReducedModel& model,
                                  const SignalGenerator& gen, const CanonicalTransform& xf) {
    SylvesterSolution pi = solve_sylvester(sys.A, sys.B, gen.L, gen.S);
    SylvesterSolution p = solve_sylvester(model.F, model.G, gen.L, gen.S);
    RowVector mismatch = sys.C * pi.X - model.H * p.X;
    double lhs = (mismatch.cast<Complex>() * xf.T).squaredNorm();
    double rhs = ls_index(sys, model, gen.spec);
    return NormIdentity{lhs, rhs};
}

}  // namespace lsmm
