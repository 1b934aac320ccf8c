#pragma once

#include <stdexcept>
#include <string>

namespace lsmm {

// Base class for all numerical/validation failures raised by the library.
// kind() is a stable machine-readable tag (used by the CLI error contract);
// what() carries the human-readable detail.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& message)
        : std::runtime_error(kind + ": " + message), kind_(std::move(kind)) {}

    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

#define LSMM_DEFINE_ERROR(Name)                                   \
    class Name : public Error {                                   \
    public:                                                       \
        explicit Name(const std::string& message)                 \
            : Error(#Name, message) {}                            \
    }

LSMM_DEFINE_ERROR(DimensionMismatch);
LSMM_DEFINE_ERROR(SingularResolvent);
LSMM_DEFINE_ERROR(EigenFailure);
LSMM_DEFINE_ERROR(SpectraOverlap);
LSMM_DEFINE_ERROR(IllConditioned);
LSMM_DEFINE_ERROR(ConjugateClosureViolation);
LSMM_DEFINE_ERROR(DuplicatePoint);
LSMM_DEFINE_ERROR(TransformSingular);
LSMM_DEFINE_ERROR(PlacementFailure);
LSMM_DEFINE_ERROR(PairSplit);
LSMM_DEFINE_ERROR(DefectiveEigenvalue);
LSMM_DEFINE_ERROR(RankDeficient);
LSMM_DEFINE_ERROR(InadmissibleParameters);
LSMM_DEFINE_ERROR(NotSkew);
LSMM_DEFINE_ERROR(HypothesisViolated);
LSMM_DEFINE_ERROR(DegenerateDraw);

#undef LSMM_DEFINE_ERROR

}  // namespace lsmm
