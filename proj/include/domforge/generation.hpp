#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "domforge/common.hpp"
#include "domforge/corpus.hpp"
#include "domforge/cot.hpp"
#include "domforge/knowledge.hpp"

namespace domforge::generation {

struct CompletionParams {
    int max_new_tokens = 256;
    std::vector<std::string> stop;
    double temperature = 0.0;
};

/// Stands in for the language model: returns the raw continuation of a prompt.
class CompletionBackend {
  public:
    virtual ~CompletionBackend() = default;
    virtual std::string complete(const std::string& prompt, const CompletionParams& params) = 0;
};

/// Recommends an API sequence for a signature; with a non-empty history,
/// the remaining sequence after it. An empty result ends stepwise generation.
class ApiInquirer {
  public:
    virtual ~ApiInquirer() = default;
    virtual std::vector<std::string> recommend(const std::string& signature,
                                               const std::vector<std::string>& history) = 0;
};

struct GenerationStep {
    cot::KnowledgeState knowledge;
    std::string chunk;
};

struct TokenCounts {
    std::size_t generated = 0;        // code tokens only
    std::size_t knowledge_state = 0;  // annotation-line tokens, never budgeted
};

struct GenerationResult {
    std::string code;
    std::string prompt_used;
    std::optional<std::vector<GenerationStep>> steps;
    TokenCounts token_counts;
    std::vector<std::string> recommended_apis;
    std::string transcript;  // stepwise runs: annotation lines + chunks
    bool truncated = false;
    bool degraded = false;  // inquirer had nothing; fell back to plain
};

// ---------------------------------------------------------------------------
// Inquirers

/// Nearest-signature retrieval over an indexed record set: recommends the
/// API sequence of the record whose signature has the highest Jaccard
/// overlap of identifier tokens with the query; ties break to the smallest
/// record id. With history, returns the suffix after the longest sequence
/// prefix matching the history's tail.
std::unique_ptr<ApiInquirer> retrieval_inquirer_build(
    const std::vector<corpus::FunctionRecord>& records);

// ---------------------------------------------------------------------------
// Backends

enum class RemoteStyle { Completion, Chat };

struct RetryOptions {
    int attempts = 3;
    int base_delay_ms = 250;  // doubled per retry
};

/// HTTP JSON completion endpoint: POST {"prompt", "max_tokens", "stop",
/// "temperature"} -> {"text"}; RemoteStyle::Chat adapts the same call to a
/// chat-shaped request/response. Retries transient failures.
std::unique_ptr<CompletionBackend> remote_backend(const std::string& endpoint_url,
                                                  const std::string& auth_token = "",
                                                  RemoteStyle style = RemoteStyle::Completion,
                                                  RetryOptions retry = {});

/// Record/replay file: JSON object mapping sha256(prompt) -> completion
/// text. Honors stop sequences; unknown prompts raise an error.
std::unique_ptr<CompletionBackend> mock_backend(const std::string& recordings_path);

std::string prompt_hash(std::string_view prompt);

// ---------------------------------------------------------------------------
// Generation strategies

struct TruncateResult {
    std::string text;
    bool balanced = false;
};

/// Prefix through the brace balancing the first '{', string-literal aware;
/// unbalanced input comes back whole with balanced=false.
TruncateResult truncate_to_function(std::string_view text, Language lang);

GenerationResult generate_plain(const std::string& signature, CompletionBackend& backend,
                                const CompletionParams& params, Language lang);

/// Recommended APIs injected as one comment line above the prompt.
GenerationResult generate_kg(const std::string& signature, ApiInquirer& inquirer,
                             CompletionBackend& backend, const CompletionParams& params,
                             Language lang);

/// Stepwise loop: predict one API state, render it as annotation lines,
/// complete one statement-sized chunk, repeat until the inquirer is done,
/// the function closes, or the code-token budget is reached.
GenerationResult generate_cot_pt(const std::string& signature, ApiInquirer& inquirer,
                                 const knowledge::KnowledgeBase& kb, CompletionBackend& backend,
                                 const CompletionParams& params, Language lang);

}  // namespace domforge::generation
