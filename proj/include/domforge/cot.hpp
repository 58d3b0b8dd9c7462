#pragma once

#include <string>
#include <vector>

#include "domforge/corpus.hpp"
#include "domforge/knowledge.hpp"

namespace domforge::cot {

struct KnowledgeState {
    std::vector<std::string> api_state;  // empty = plain-code step
    std::string task_state;

    bool empty() const { return api_state.empty() && task_state.empty(); }
    bool operator==(const KnowledgeState&) const = default;
};

struct CotStep {
    KnowledgeState knowledge;
    std::string code;  // consecutive source lines; steps concatenate to the body

    bool operator==(const CotStep&) const = default;
};

struct CotSequence {
    std::string input;  // function signature
    std::vector<CotStep> steps;

    bool operator==(const CotSequence&) const = default;
};

/// Partitions the body at line granularity: each API-bearing statement
/// starts a step carrying that statement's API names; plain lines attach to
/// the preceding step or form a leading empty-state step. Chunks concatenate
/// to the body byte-exactly.
std::vector<CotStep> decompose_steps(const corpus::FunctionRecord& record);

/// Inserts `// [API] ...` (and `// [TASK] ...` when the knowledge base
/// resolves a docstring) above each API-bearing statement, at the
/// statement's indentation. Original lines are preserved byte-exactly.
std::string annotate_function(const corpus::FunctionRecord& record,
                              const knowledge::KnowledgeBase& kb);

/// Removes exactly the annotation lines; strip_states(annotate_function(x))
/// returns x's body byte-exactly.
std::string strip_states(std::string_view annotated);

/// Task text used in annotations: first sentence of the docstring, first
/// letter lowercased, trailing period dropped.
std::string task_text(const knowledge::KnowledgeEntry& entry);

struct TrainingSequence {
    CotSequence sequence;
    std::string serialized;  // signature + " " + annotated body
};

TrainingSequence build_training_sequence(const corpus::FunctionRecord& record,
                                         const knowledge::KnowledgeBase& kb);

/// Single annotation block (without trailing code) for a set of APIs, used
/// both here and by the stepwise generation loop.
std::string render_knowledge_lines(const std::vector<std::string>& apis,
                                   const knowledge::KnowledgeBase* kb,
                                   std::string_view indent);

}  // namespace domforge::cot
