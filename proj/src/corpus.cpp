#include "domforge/corpus.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <unordered_set>

#include "domforge/util.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace domforge::corpus {

namespace {

Language language_field(const json& obj, const std::string& context) {
    if (!obj.contains("subject_language") || !obj["subject_language"].is_string())
        throw Error(context + ": missing subject_language");
    return language_from_string(obj["subject_language"].get<std::string>());
}

void reject_unknown_fields(const json& obj, const std::set<std::string>& allowed,
                           const std::string& context) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        if (!allowed.count(it.key()))
            throw Error(context + ": unknown field \"" + it.key() + "\"");
    }
}

ByteSpan span_from_json(const json& arr, const std::string& context) {
    if (!arr.is_array() || arr.size() != 2 || !arr[0].is_number_unsigned() ||
        !arr[1].is_number_unsigned())
        throw Error(context + ": span must be [start, end]");
    ByteSpan span{arr[0].get<std::size_t>(), arr[1].get<std::size_t>()};
    if (span.end < span.begin) throw Error(context + ": span end precedes start");
    return span;
}

json record_to_json(const FunctionRecord& rec) {
    json calls = json::array();
    for (const syntax::ApiCall& call : rec.api_calls) {
        calls.push_back({{"qualified_name", call.qualified_name},
                         {"call_byte_span", {call.call_span.begin, call.call_span.end}},
                         {"stmt_byte_span", {call.stmt_span.begin, call.stmt_span.end}}});
    }
    return json{{"id", rec.id},
                {"repo_id", rec.repo_id},
                {"path", rec.path},
                {"subject_language", to_string(rec.subject_language)},
                {"library", rec.library},
                {"name", rec.name},
                {"signature", rec.signature},
                {"body", rec.body},
                {"api_calls", std::move(calls)}};
}

FunctionRecord record_from_json(const json& obj, const std::string& context) {
    static const std::set<std::string> allowed = {
        "id",   "repo_id",   "path", "subject_language", "library",
        "name", "signature", "body", "api_calls"};
    static const std::set<std::string> call_allowed = {"qualified_name", "call_byte_span",
                                                       "stmt_byte_span"};
    if (!obj.is_object()) throw Error(context + ": not a JSON object");
    reject_unknown_fields(obj, allowed, context);
    for (const std::string& key : allowed) {
        if (!obj.contains(key)) throw Error(context + ": missing field \"" + key + "\"");
    }
    FunctionRecord rec;
    rec.id = obj["id"].get<std::string>();
    rec.repo_id = obj["repo_id"].get<std::string>();
    rec.path = obj["path"].get<std::string>();
    rec.subject_language = language_field(obj, context);
    rec.library = obj["library"].get<std::string>();
    rec.name = obj["name"].get<std::string>();
    rec.signature = obj["signature"].get<std::string>();
    rec.body = obj["body"].get<std::string>();
    if (!obj["api_calls"].is_array()) throw Error(context + ": api_calls must be an array");
    for (const json& call_obj : obj["api_calls"]) {
        reject_unknown_fields(call_obj, call_allowed, context);
        syntax::ApiCall call;
        call.qualified_name = call_obj.at("qualified_name").get<std::string>();
        call.call_span = span_from_json(call_obj.at("call_byte_span"), context);
        call.stmt_span = span_from_json(call_obj.at("stmt_byte_span"), context);
        rec.api_calls.push_back(std::move(call));
    }
    return rec;
}

bool has_wanted_extension(const fs::path& path, Language lang) {
    std::string ext = path.extension().string();
    if (lang == Language::Go) return ext == ".go";
    return ext == ".cpp" || ext == ".cc" || ext == ".cxx" || ext == ".h" || ext == ".hpp";
}

std::string record_id(const std::string& repo_id, const std::string& path, ByteSpan span) {
    std::string key = repo_id;
    key.push_back('\0');
    key += path;
    key.push_back('\0');
    key += std::to_string(span.begin) + "-" + std::to_string(span.end);
    return util::sha256_hex(key).substr(0, 16);
}

}  // namespace

RepoManifest RepoManifest::load(const std::string& path) {
    json doc;
    try {
        doc = json::parse(util::read_file(path));
    } catch (const json::exception& e) {
        throw Error("manifest " + path + ": " + e.what());
    }
    if (!doc.is_object() || !doc.contains("entries") || !doc["entries"].is_array())
        throw Error("manifest " + path + ": expected {\"entries\": [...]}");

    fs::path base = fs::path(path).parent_path();
    RepoManifest manifest;
    std::unordered_set<std::string> seen;
    for (const json& entry_obj : doc["entries"]) {
        static const std::set<std::string> allowed = {"repo_id", "local_path", "stargazers",
                                                      "subject_language"};
        reject_unknown_fields(entry_obj, allowed, "manifest " + path);
        ManifestEntry entry;
        entry.repo_id = entry_obj.at("repo_id").get<std::string>();
        std::string local = entry_obj.at("local_path").get<std::string>();
        fs::path resolved = fs::path(local);
        if (resolved.is_relative()) resolved = base / resolved;
        entry.local_path = resolved.lexically_normal().string();
        entry.stargazers = entry_obj.at("stargazers").get<std::uint64_t>();
        entry.subject_language = language_field(entry_obj, "manifest " + path);
        if (!seen.insert(entry.repo_id).second)
            throw Error("manifest " + path + ": duplicate repo_id \"" + entry.repo_id + "\"");
        manifest.entries.push_back(std::move(entry));
    }
    return manifest;
}

ScanResult scan_repositories(const RepoManifest& manifest, const LibrarySpec& lib,
                             std::uint64_t min_stars,
                             const std::vector<std::string>& exclude_globs) {
    lib.validate();
    ScanResult result;

    std::vector<const ManifestEntry*> entries;
    for (const ManifestEntry& entry : manifest.entries) {
        if (entry.subject_language != lib.subject_language) continue;
        if (entry.stargazers < min_stars) {
            ++result.report.repos_skipped_low_stars;
            continue;
        }
        entries.push_back(&entry);
    }
    std::sort(entries.begin(), entries.end(),
              [](const ManifestEntry* a, const ManifestEntry* b) { return a->repo_id < b->repo_id; });

    for (const ManifestEntry* entry : entries) {
        std::error_code ec;
        if (!fs::is_directory(entry->local_path, ec)) {
            result.report.errors.push_back(
                {entry->repo_id, entry->local_path, "not a readable directory"});
            continue;
        }
        std::vector<std::string> rel_paths;
        for (auto it = fs::recursive_directory_iterator(
                 entry->local_path, fs::directory_options::skip_permission_denied, ec);
             it != fs::recursive_directory_iterator(); it.increment(ec)) {
            if (ec) break;
            if (!it->is_regular_file(ec)) continue;
            if (!has_wanted_extension(it->path(), lib.subject_language)) continue;
            std::string rel = fs::relative(it->path(), entry->local_path, ec).generic_string();
            bool excluded = false;
            for (const std::string& pattern : exclude_globs)
                if (util::glob_match(pattern, rel)) excluded = true;
            if (!excluded) rel_paths.push_back(std::move(rel));
        }
        std::sort(rel_paths.begin(), rel_paths.end());

        for (const std::string& rel : rel_paths) {
            ++result.report.files_scanned;
            std::string text;
            try {
                text = util::read_file((fs::path(entry->local_path) / rel).string());
            } catch (const Error& e) {
                result.report.errors.push_back({entry->repo_id, rel, e.what()});
                continue;
            }
            if (!syntax::uses_library(text, lib)) continue;
            ++result.report.files_matched;

            syntax::SyntaxTree tree = syntax::parse_source(std::move(text), lib.subject_language);
            result.report.error_regions += syntax::error_region_count(tree);
            for (const syntax::FunctionSpan& fn : syntax::extract_functions(tree)) {
                FunctionRecord rec;
                rec.repo_id = entry->repo_id;
                rec.path = rel;
                rec.subject_language = lib.subject_language;
                rec.library = lib.name;
                rec.name = fn.name;
                rec.signature = std::string(tree.text_of(fn.signature_span));
                rec.body = std::string(tree.text_of(fn.body_span));
                rec.id = record_id(rec.repo_id, rec.path,
                                   {fn.signature_span.begin, fn.body_span.end});

                std::vector<syntax::TypedVar> vars = syntax::collect_typed_variables(tree, fn, lib);
                for (syntax::ApiCall call : syntax::extract_api_calls(tree, fn, lib, vars)) {
                    // records keep only the persisted fields; spans become
                    // body-relative and the receiver binding stays an
                    // extraction-time detail
                    call.call_span.begin -= fn.body_span.begin;
                    call.call_span.end -= fn.body_span.begin;
                    call.stmt_span.begin -= fn.body_span.begin;
                    call.stmt_span.end -= fn.body_span.begin;
                    call.receiver_var.reset();
                    rec.api_calls.push_back(std::move(call));
                }
                result.records.push_back(std::move(rec));
            }
        }
    }
    return result;
}

std::vector<FunctionRecord> filter_functions(std::vector<FunctionRecord> records,
                                             const std::set<std::string>& blocklist) {
    std::vector<FunctionRecord> kept;
    kept.reserve(records.size());
    for (FunctionRecord& rec : records) {
        if (rec.name.empty() || blocklist.count(rec.name)) continue;
        std::string_view interior = rec.body;
        if (interior.size() >= 2 && interior.front() == '{' && interior.back() == '}')
            interior = interior.substr(1, interior.size() - 2);
        if (util::collapse_whitespace(interior).empty()) continue;
        kept.push_back(std::move(rec));
    }
    return kept;
}

std::vector<FunctionRecord> deduplicate(std::vector<FunctionRecord> records) {
    std::vector<FunctionRecord> kept;
    kept.reserve(records.size());
    std::unordered_set<std::string> seen;
    for (FunctionRecord& rec : records) {
        std::string key = util::sha256_hex(util::collapse_whitespace(rec.body));
        if (!seen.insert(key).second) continue;
        kept.push_back(std::move(rec));
    }
    return kept;
}

std::string dataset_to_jsonl(const std::vector<FunctionRecord>& records) {
    std::string out;
    for (const FunctionRecord& rec : records) {
        out += record_to_json(rec).dump();
        out.push_back('\n');
    }
    return out;
}

std::vector<FunctionRecord> dataset_from_jsonl(std::string_view text, const std::string& origin) {
    std::vector<FunctionRecord> records;
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        if (start == text.size()) break;
        std::size_t nl = text.find('\n', start);
        std::string_view line =
            nl == std::string_view::npos ? text.substr(start) : text.substr(start, nl - start);
        ++line_no;
        std::string context = origin + ":" + std::to_string(line_no);
        if (!line.empty()) {
            json obj;
            try {
                obj = json::parse(line);
            } catch (const json::exception& e) {
                throw Error(context + ": " + e.what());
            }
            records.push_back(record_from_json(obj, context));
        }
        if (nl == std::string_view::npos) break;
        start = nl + 1;
    }
    return records;
}

void write_dataset(const std::vector<FunctionRecord>& records, const std::string& path) {
    util::write_file(path, dataset_to_jsonl(records));
}

std::vector<FunctionRecord> read_dataset(const std::string& path) {
    return dataset_from_jsonl(util::read_file(path), path);
}

std::vector<FunctionRecord> sample_eval_split(const std::vector<FunctionRecord>& records,
                                              std::size_t n, std::uint64_t seed) {
    if (n > records.size())
        throw Error("sample_eval_split: n=" + std::to_string(n) + " exceeds record count " +
                    std::to_string(records.size()));
    std::vector<FunctionRecord> shuffled = records;
    util::deterministic_shuffle(shuffled, seed);
    shuffled.resize(n);
    return shuffled;
}

LibrarySpec load_library_spec(const std::string& path) {
    json doc;
    try {
        doc = json::parse(util::read_file(path));
    } catch (const json::exception& e) {
        throw Error("library spec " + path + ": " + e.what());
    }
    LibrarySpec lib;
    lib.name = doc.at("name").get<std::string>();
    lib.subject_language = language_field(doc, "library spec " + path);
    lib.import_patterns = doc.at("import_patterns").get<std::vector<std::string>>();
    lib.qualifier_prefixes = doc.at("qualifier_prefixes").get<std::vector<std::string>>();
    if (doc.contains("lib_types")) lib.lib_types = doc["lib_types"].get<std::vector<std::string>>();
    if (doc.contains("type_map")) {
        for (auto it = doc["type_map"].begin(); it != doc["type_map"].end(); ++it)
            lib.type_map[it.key()] = it.value().get<std::vector<std::string>>();
    }
    lib.validate();
    return lib;
}

}  // namespace domforge::corpus
