#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "domforge/common.hpp"
#include "domforge/library_spec.hpp"
#include "domforge/syntax.hpp"

namespace domforge::corpus {

struct ManifestEntry {
    std::string repo_id;
    std::string local_path;
    std::uint64_t stargazers = 0;
    Language subject_language = Language::Go;
};

struct RepoManifest {
    std::vector<ManifestEntry> entries;

    /// Loads a manifest document; relative local_path values are resolved
    /// against the manifest file's directory. repo_id values must be unique.
    static RepoManifest load(const std::string& path);
};

/// One mined function. ApiCall spans are relative to `body`.
struct FunctionRecord {
    std::string id;
    std::string repo_id;
    std::string path;
    Language subject_language = Language::Go;
    std::string library;
    std::string name;
    std::string signature;
    std::string body;
    std::vector<syntax::ApiCall> api_calls;

    bool operator==(const FunctionRecord&) const = default;
};

struct ScanIssue {
    std::string repo_id;
    std::string path;
    std::string message;
};

struct ScanReport {
    std::vector<ScanIssue> errors;
    std::size_t files_scanned = 0;
    std::size_t files_matched = 0;
    std::size_t repos_skipped_low_stars = 0;
    std::size_t error_regions = 0;  // parse-error regions whose functions were dropped
};

struct ScanResult {
    std::vector<FunctionRecord> records;
    ScanReport report;
};

/// Walks every manifest repository with enough stargazers, extracts all
/// top-level functions from files whose import section matches the library,
/// in lexicographic (repo_id, path, byte offset) order. Unreadable paths are
/// collected in the report and scanning continues.
ScanResult scan_repositories(const RepoManifest& manifest, const LibrarySpec& lib,
                             std::uint64_t min_stars,
                             const std::vector<std::string>& exclude_globs = {});

/// Drops records with blocklisted names or whitespace-only bodies; keeps order.
std::vector<FunctionRecord> filter_functions(std::vector<FunctionRecord> records,
                                             const std::set<std::string>& blocklist);

/// Keeps the first record per normalized-body key (whitespace runs collapsed,
/// comments retained). Idempotent, order-preserving.
std::vector<FunctionRecord> deduplicate(std::vector<FunctionRecord> records);

void write_dataset(const std::vector<FunctionRecord>& records, const std::string& path);
std::vector<FunctionRecord> read_dataset(const std::string& path);

std::string dataset_to_jsonl(const std::vector<FunctionRecord>& records);
std::vector<FunctionRecord> dataset_from_jsonl(std::string_view text, const std::string& origin);

/// Deterministic pseudo-random sample of n records; n must not exceed the
/// record count. n == size yields a seeded permutation of the input.
std::vector<FunctionRecord> sample_eval_split(const std::vector<FunctionRecord>& records,
                                              std::size_t n, std::uint64_t seed);

LibrarySpec load_library_spec(const std::string& path);

inline const std::set<std::string>& default_blocklist() {
    static const std::set<std::string> names = {"main", "init"};
    return names;
}

}  // namespace domforge::corpus
