#include "socratic/error.hpp"

namespace socratic {

std::string_view to_string(Errc code) noexcept {
    switch (code) {
        case Errc::InvalidArgument: return "InvalidArgument";
        case Errc::MalformedPlaceholder: return "MalformedPlaceholder";
        case Errc::MissingVariable: return "MissingVariable";
        case Errc::UnknownTemplate: return "UnknownTemplate";
        case Errc::NoJsonFound: return "NoJsonFound";
        case Errc::MissingKey: return "MissingKey";
        case Errc::InvalidValue: return "InvalidValue";
        case Errc::IncompleteSelection: return "IncompleteSelection";
        case Errc::ExtractionFailed: return "ExtractionFailed";
        case Errc::ProviderError: return "ProviderError";
        case Errc::Timeout: return "Timeout";
        case Errc::RateLimited: return "RateLimited";
        case Errc::AuthFailed: return "AuthFailed";
        case Errc::Transport: return "Transport";
        case Errc::ScriptExhausted: return "ScriptExhausted";
        case Errc::SessionEnded: return "SessionEnded";
        case Errc::Busy: return "Busy";
        case Errc::UnknownSession: return "UnknownSession";
        case Errc::UnknownId: return "UnknownId";
        case Errc::CorruptRecord: return "CorruptRecord";
        case Errc::IoError: return "IoError";
        case Errc::OutOfRange: return "OutOfRange";
        case Errc::EmptyDataset: return "EmptyDataset";
    }
    return "Unknown";
}

Error::Error(Errc code, const std::string& message, std::vector<std::string> details)
    : std::runtime_error(std::string(to_string(code)) + ": " + message),
      code_(code),
      details_(std::move(details)) {}

bool Error::is_provider_error() const noexcept {
    switch (code_) {
        case Errc::ProviderError:
        case Errc::Timeout:
        case Errc::RateLimited:
        case Errc::AuthFailed:
        case Errc::Transport:
        case Errc::ScriptExhausted:
            return true;
        default:
            return false;
    }
}

}  // namespace socratic
