#pragma once

#include <stdexcept>
#include <string>

namespace lagcast {

enum class ErrorCode {
    // configuration / usage
    InvalidConfig,
    // data
    EmptyInput,
    EmptyIntersection,
    DegenerateSplit,
    MalformedHeader,
    RaggedRow,
    UnparseableDate,
    UnparseableCount,
    NetworkError,
    HttpStatusError,
    TooShort,
    UnknownRole,
    RemovedUnknownTerm,
    NotEnoughRows,
    LengthMismatch,
    ZeroActual,
    TooFewRows,
    MissingLag,
    LabelMismatch,
    HistoryTooShort,
    NonFiniteInput,
    // numerical
    RankDeficient,
    NoFeasibleCandidate,
    MlpDiverged,
    FixedPointDiverged,
    AllCandidatesFailed,
};

const char* error_code_name(ErrorCode code);

/// Process exit code class for a failure: 1 usage/config, 2 data, 3 numerical.
int error_exit_code(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
          code_(code) {}

    ErrorCode code() const noexcept { return code_; }
    int exit_code() const noexcept { return error_exit_code(code_); }

private:
    ErrorCode code_;
};

} // namespace lagcast
