#pragma once

#include <stdexcept>
#include <string>

namespace mmreg {

/// File could not be opened or read.
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// File exists but is not a format this library handles.
struct FormatError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A parameter value is outside its documented domain.
struct ParameterError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Caller violated an operation precondition (e.g. dimension mismatch).
struct ContractError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Config or JSON input failed to parse.
struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Too few samples to even attempt an estimation.
struct DegenerateInputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Point configuration does not constrain the requested model.
struct RankDeficiencyError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Consensus search ended without a stable model.
struct NoConsensusError : std::runtime_error {
    int best_inliers;
    explicit NoConsensusError(const std::string& msg, int best = 0)
        : std::runtime_error(msg), best_inliers(best) {}
};

}  // namespace mmreg
