#include "msrcgr/error.hpp"

namespace msrcgr {

const char* error_code_name(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::InvalidArgument: return "invalid-argument";
        case ErrorCode::InvalidAlphabet: return "invalid-alphabet";
        case ErrorCode::OutOfRange: return "out-of-range";
        case ErrorCode::AlphabetTooLarge: return "alphabet-too-large";
        case ErrorCode::InvalidToken: return "invalid-token";
        case ErrorCode::SequenceTooShort: return "sequence-too-short";
        case ErrorCode::CorruptedTrajectory: return "corrupted-trajectory";
        case ErrorCode::InconsistentStream: return "inconsistent-stream";
        case ErrorCode::EmptyTrajectory: return "empty-trajectory";
        case ErrorCode::Dimension: return "dimension";
        case ErrorCode::Alignment: return "alignment";
        case ErrorCode::EmptyEmbedding: return "empty-embedding";
        case ErrorCode::DegenerateClass: return "degenerate-class";
        case ErrorCode::DegenerateLabels: return "degenerate-labels";
        case ErrorCode::Divergence: return "divergence";
        case ErrorCode::Parse: return "parse";
        case ErrorCode::Io: return "io";
    }
    return "unknown";
}

}  // namespace msrcgr
