#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace msrcgr {

// Values mirror msrcgr_status in msrcgr.h.
enum class ErrorCode : int {
    InvalidArgument = 1,
    InvalidAlphabet,
    OutOfRange,
    AlphabetTooLarge,
    InvalidToken,
    SequenceTooShort,
    CorruptedTrajectory,
    InconsistentStream,
    EmptyTrajectory,
    Dimension,
    Alignment,
    EmptyEmbedding,
    DegenerateClass,
    DegenerateLabels,
    Divergence,
    Parse,
    Io,
};

const char* error_code_name(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what,
          std::optional<std::size_t> position = std::nullopt)
        : std::runtime_error(what), code_(code), position_(position) {}

    ErrorCode code() const noexcept { return code_; }

    // Sequence position, trajectory step or file line, depending on the code.
    std::optional<std::size_t> position() const noexcept { return position_; }

private:
    ErrorCode code_;
    std::optional<std::size_t> position_;
};

}  // namespace msrcgr
