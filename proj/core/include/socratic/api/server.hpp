#pragma once

#include <memory>
#include <string>

#include "socratic/llm/provider.hpp"
#include "socratic/prompt/template.hpp"
#include "socratic/store/store.hpp"

namespace socratic::api {

/// Error codes returned in {code, message} bodies:
///   400 InvalidBody, InvalidValue, MissingKey, OutOfRange, IncompleteSelection
///   404 NotFound, UnknownScenario, UnknownSession, EmptyDataset
///   409 SessionEnded, Busy, NoKnowledgeComponents, NoMatrix
///   502 ProviderError
///   500 Internal
struct ServiceOptions {
    int max_turns = 30;
    std::string expected_answer;  // applied to every new session when non-empty
};

/// HTTP facade over the store, scenario builder, dialogue engine and analytics.
class Service {
public:
    Service(store::Store& store, llm::Provider& provider, ServiceOptions options = {},
            const prompt::TemplateLibrary& templates = prompt::TemplateLibrary::bundled());
    ~Service();

    Service(const Service&) = delete;
    Service& operator=(const Service&) = delete;

    /// Binds to `host` on `port` (0 picks a free port) and returns the bound port.
    /// Throws Error(IoError) when binding fails.
    int bind(const std::string& host, int port);
    /// Serves until stop(). Blocks the calling thread.
    void listen();
    void stop();
    /// Blocks until the server is accepting connections.
    void wait_until_ready() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace socratic::api
