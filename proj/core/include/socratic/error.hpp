#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace socratic {

enum class Errc {
    InvalidArgument,      // precondition violated by the caller
    MalformedPlaceholder,
    MissingVariable,
    UnknownTemplate,
    NoJsonFound,
    MissingKey,
    InvalidValue,
    IncompleteSelection,
    ExtractionFailed,
    // Provider failures. All of these satisfy is_provider_error().
    ProviderError,
    Timeout,
    RateLimited,
    AuthFailed,
    Transport,
    ScriptExhausted,
    // Session lifecycle.
    SessionEnded,
    Busy,
    // Storage.
    UnknownSession,
    UnknownId,
    CorruptRecord,
    IoError,
    // Analytics.
    OutOfRange,
    EmptyDataset,
};

std::string_view to_string(Errc code) noexcept;

/// Every failure in the library is reported as an Error carrying a stable code.
/// `details` lists the offending names for MissingVariable, MissingKey and
/// IncompleteSelection.
class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& message, std::vector<std::string> details = {});

    Errc code() const noexcept { return code_; }
    const std::vector<std::string>& details() const noexcept { return details_; }
    bool is_provider_error() const noexcept;

private:
    Errc code_;
    std::vector<std::string> details_;
};

}  // namespace socratic
