#pragma once

#include <stdexcept>
#include <string>

namespace qdlab {

// Contract violations carry the name used in the module contracts so callers
// and tests can match on the concrete type.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

#define QDLAB_ERROR(Name)                                                      \
    struct Name : Error {                                                      \
        explicit Name(const std::string& what = #Name) : Error(what) {}       \
    }

QDLAB_ERROR(PoleOnPath);
QDLAB_ERROR(OutsideDisk);
QDLAB_ERROR(ArcTooLong);
QDLAB_ERROR(NotSimple);
QDLAB_ERROR(NotMarkov);
QDLAB_ERROR(Inadmissible);
QDLAB_ERROR(DeltaOutOfRange);
QDLAB_ERROR(BasepointSwallowed);
QDLAB_ERROR(Ineligible);
QDLAB_ERROR(NoPath);
QDLAB_ERROR(MaxStepsExceeded);
QDLAB_ERROR(EmptyIntersection);
QDLAB_ERROR(InsufficientHits);
QDLAB_ERROR(NotFound);
QDLAB_ERROR(TooFewScales);
QDLAB_ERROR(BudgetExceeded);
QDLAB_ERROR(ConfigError);

#undef QDLAB_ERROR

}  // namespace qdlab
