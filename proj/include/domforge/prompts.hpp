#pragma once

#include <optional>
#include <string>
#include <vector>

#include "domforge/knowledge.hpp"

namespace domforge::prompts {

enum class PromptKind {
    Signature,
    LibraryImport,
    Api,
    Docstring,
    ApiThenDocstring,
    DocstringThenApi,
};

PromptKind prompt_kind_from_string(const std::string& s);
std::string to_string(PromptKind kind);

struct PromptSpec {
    PromptKind kind = PromptKind::Signature;
    std::string signature;
    std::optional<std::string> library;
    std::vector<std::string> apis;
    const knowledge::KnowledgeBase* kb = nullptr;
};

/// Deterministic template instantiation. Multiple APIs join with ", " in the
/// "using" clause; docstring kinds render one line per API and raise an
/// error listing every API missing from the knowledge base.
std::string render_prompt(const PromptSpec& spec);

}  // namespace domforge::prompts
