#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "domforge/common.hpp"
#include "domforge/library_spec.hpp"

namespace domforge::knowledge {

enum class KnowledgeSource { LibrarySource };

struct KnowledgeEntry {
    std::string api_name;
    std::string docstring;
    KnowledgeSource source = KnowledgeSource::LibrarySource;

    bool operator==(const KnowledgeEntry&) const = default;
};

struct KnowledgeBase {
    std::string library;
    std::string built_at;
    std::map<std::string, KnowledgeEntry> entries;  // keyed by api_name, sorted

    /// Exact, case-sensitive lookup.
    const KnowledgeEntry* lookup(std::string_view api_name) const;
};

struct KbBuildOptions {
    /// Store only the first sentence of each docstring instead of the full text.
    bool first_sentence_only = false;
};

struct KbBuildResult {
    KnowledgeBase kb;
    std::size_t functions_seen = 0;
    std::size_t skipped_no_doc = 0;
};

/// Builds the API knowledge base from a library source checkout: one entry
/// per exported function/method carrying an adjacent doc comment.
KbBuildResult build_kb_from_library_source(const std::vector<std::string>& paths,
                                           const LibrarySpec& lib,
                                           const KbBuildOptions& options = {});

struct MergeResult {
    KnowledgeBase kb;
    std::size_t conflicts = 0;
};

/// Union of two bases for the same library; on key conflict `a` wins.
MergeResult merge(const KnowledgeBase& a, const KnowledgeBase& b);

void save_kb(const KnowledgeBase& kb, const std::string& path);
KnowledgeBase load_kb(const std::string& path);

/// Comment markers stripped and lines joined; a leading word equal to the
/// function's simple name is dropped; first letter recapitalized; one
/// trailing period removed.
std::string normalize_docstring(std::string_view raw_comment, std::string_view func_name);

/// Docstring as rendered into prompts: first sentence if over the cap,
/// otherwise the stored text, truncated at a sentence boundary near 400 chars.
std::string prompt_docstring(const KnowledgeEntry& entry);

}  // namespace domforge::knowledge
