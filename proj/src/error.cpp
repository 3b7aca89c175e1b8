#include "lagcast/error.hpp"

namespace lagcast {

const char* error_code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::InvalidConfig: return "InvalidConfig";
        case ErrorCode::EmptyInput: return "EmptyInput";
        case ErrorCode::EmptyIntersection: return "EmptyIntersection";
        case ErrorCode::DegenerateSplit: return "DegenerateSplit";
        case ErrorCode::MalformedHeader: return "MalformedHeader";
        case ErrorCode::RaggedRow: return "RaggedRow";
        case ErrorCode::UnparseableDate: return "UnparseableDate";
        case ErrorCode::UnparseableCount: return "UnparseableCount";
        case ErrorCode::NetworkError: return "NetworkError";
        case ErrorCode::HttpStatusError: return "HttpStatusError";
        case ErrorCode::TooShort: return "TooShort";
        case ErrorCode::UnknownRole: return "UnknownRole";
        case ErrorCode::RemovedUnknownTerm: return "RemovedUnknownTerm";
        case ErrorCode::NotEnoughRows: return "NotEnoughRows";
        case ErrorCode::LengthMismatch: return "LengthMismatch";
        case ErrorCode::ZeroActual: return "ZeroActual";
        case ErrorCode::TooFewRows: return "TooFewRows";
        case ErrorCode::MissingLag: return "MissingLag";
        case ErrorCode::LabelMismatch: return "LabelMismatch";
        case ErrorCode::HistoryTooShort: return "HistoryTooShort";
        case ErrorCode::NonFiniteInput: return "NonFiniteInput";
        case ErrorCode::RankDeficient: return "RankDeficient";
        case ErrorCode::NoFeasibleCandidate: return "NoFeasibleCandidate";
        case ErrorCode::MlpDiverged: return "MlpDiverged";
        case ErrorCode::FixedPointDiverged: return "FixedPointDiverged";
        case ErrorCode::AllCandidatesFailed: return "AllCandidatesFailed";
    }
    return "UnknownError";
}

int error_exit_code(ErrorCode code) {
    switch (code) {
        case ErrorCode::InvalidConfig:
            return 1;
        case ErrorCode::RankDeficient:
        case ErrorCode::NoFeasibleCandidate:
        case ErrorCode::MlpDiverged:
        case ErrorCode::FixedPointDiverged:
        case ErrorCode::AllCandidatesFailed:
            return 3;
        default:
            return 2;
    }
}

} // namespace lagcast
