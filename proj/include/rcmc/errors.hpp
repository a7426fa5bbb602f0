#ifndef RCMC_ERRORS_HPP
#define RCMC_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace rcmc {

struct RcmcError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DisconnectedGraph : RcmcError {
    using RcmcError::RcmcError;
};

struct BalanceInconsistent : RcmcError {
    using RcmcError::RcmcError;
};

struct PivotBreakdown : RcmcError {
    using RcmcError::RcmcError;
};

struct UpdateBreakdown : RcmcError {
    using RcmcError::RcmcError;
};

struct NoConvergence : RcmcError {
    using RcmcError::RcmcError;
};

struct DenseLimitExceeded : RcmcError {
    using RcmcError::RcmcError;
};

struct EmptyAfterTruncation : RcmcError {
    using RcmcError::RcmcError;
};

struct ZeroPivot : RcmcError {
    using RcmcError::RcmcError;
};

struct TypeBWithoutMFactor : RcmcError {
    using RcmcError::RcmcError;
};

} // namespace rcmc

#endif
