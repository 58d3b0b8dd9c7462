#include <algorithm>
#include <filesystem>
#include <map>

#include "doctest.h"
#include "domforge/corpus.hpp"
#include "domforge/util.hpp"
#include "json.hpp"

using namespace domforge;
using namespace domforge::corpus;

namespace {

const std::string kFixtures = DOMFORGE_FIXTURES_DIR;

RepoManifest fixture_manifest() {
    return RepoManifest::load(kFixtures + "/manifest.json");
}

std::vector<FunctionRecord> scan_lib(const std::string& spec_file, std::uint64_t min_stars = 50) {
    LibrarySpec lib = load_library_spec(kFixtures + "/" + spec_file);
    return scan_repositories(fixture_manifest(), lib, min_stars).records;
}

FunctionRecord mini_record(const std::string& id, const std::string& name,
                           const std::string& body) {
    FunctionRecord rec;
    rec.id = id;
    rec.repo_id = "r";
    rec.path = "p.go";
    rec.subject_language = Language::Go;
    rec.library = "gin";
    rec.name = name;
    rec.signature = "func " + name + "()";
    rec.body = body;
    return rec;
}

}  // namespace

TEST_SUITE("corpus") {

TEST_CASE("scan matches the hand annotations exactly") {
    nlohmann::json doc = nlohmann::json::parse(util::read_file(kFixtures + "/annotations.json"));
    std::map<std::string, std::vector<std::string>> expected;
    std::map<std::string, bool> seen;
    for (const auto& fn : doc["functions"]) {
        std::string key = fn["repo_id"].get<std::string>() + "|" + fn["path"].get<std::string>() +
                          "|" + fn["name"].get<std::string>();
        expected[key] = fn["apis"].get<std::vector<std::string>>();
        seen[key] = false;
    }

    std::vector<FunctionRecord> records = scan_lib("gin_spec.json");
    std::vector<FunctionRecord> cocos = scan_lib("cocos_spec.json");
    records.insert(records.end(), cocos.begin(), cocos.end());

    for (const FunctionRecord& rec : records) {
        std::string key = rec.repo_id + "|" + rec.path + "|" + rec.name;
        INFO("function ", key);
        REQUIRE(expected.count(key));
        std::vector<std::string> apis;
        for (const syntax::ApiCall& call : rec.api_calls) apis.push_back(call.qualified_name);
        CHECK(apis == expected[key]);
        seen[key] = true;
    }
    for (const auto& [key, was_seen] : seen) {
        INFO("missing function ", key);
        CHECK(was_seen);
    }
}

TEST_CASE("min_stars excludes low-star repositories") {
    std::vector<FunctionRecord> records = scan_lib("gin_spec.json", 50);
    for (const FunctionRecord& rec : records) CHECK(rec.repo_id != "go-lowstar");

    std::vector<FunctionRecord> all = scan_lib("gin_spec.json", 0);
    bool found_lowstar = false;
    for (const FunctionRecord& rec : all)
        if (rec.repo_id == "go-lowstar") found_lowstar = true;
    CHECK(found_lowstar);

    std::vector<FunctionRecord> none = scan_lib("gin_spec.json", 1000);
    CHECK(none.empty());
}

TEST_CASE("scan order is lexicographic and ids are stable") {
    std::vector<FunctionRecord> a = scan_lib("gin_spec.json");
    std::vector<FunctionRecord> b = scan_lib("gin_spec.json");
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == b[i]);
    for (std::size_t i = 1; i < a.size(); ++i) {
        CHECK(std::pair(a[i - 1].repo_id, a[i - 1].path) <= std::pair(a[i].repo_id, a[i].path));
    }
}

TEST_CASE("unreadable manifest path is reported, scan continues") {
    RepoManifest manifest = fixture_manifest();
    manifest.entries.push_back({"ghost-repo", kFixtures + "/does-not-exist", 999, Language::Go});
    LibrarySpec lib = load_library_spec(kFixtures + "/gin_spec.json");
    ScanResult result = scan_repositories(manifest, lib, 50);
    REQUIRE(result.report.errors.size() == 1);
    CHECK(result.report.errors[0].repo_id == "ghost-repo");
    CHECK(!result.records.empty());
}

TEST_CASE("exclude globs drop matching files") {
    LibrarySpec lib = load_library_spec(kFixtures + "/gin_spec.json");
    ScanResult all = scan_repositories(fixture_manifest(), lib, 50);
    ScanResult filtered = scan_repositories(fixture_manifest(), lib, 50, {"*routes*"});
    CHECK(filtered.records.size() < all.records.size());
    for (const FunctionRecord& rec : filtered.records)
        CHECK(rec.path.find("routes") == std::string::npos);
}

TEST_CASE("filter removes blocklisted names and empty bodies") {
    std::vector<FunctionRecord> records;
    records.push_back(mini_record("1", "main", "{\n\tdo()\n}"));
    records.push_back(mini_record("2", "HandleGet", "{\n\tdo()\n}"));
    records.push_back(mini_record("3", "Spacer", "{ }"));
    records.push_back(mini_record("4", "init", "{\n\tdo()\n}"));
    auto kept = filter_functions(records, default_blocklist());
    REQUIRE(kept.size() == 1);
    CHECK(kept[0].name == "HandleGet");

    CHECK(filter_functions({}, default_blocklist()).empty());
}

TEST_CASE("deduplicate keeps first occurrence and is idempotent") {
    std::vector<FunctionRecord> records;
    records.push_back(mini_record("1", "A", "{\n\tx := 1\n}"));
    records.push_back(mini_record("2", "B", "{\n\tx  :=  1\n}"));  // same modulo whitespace
    records.push_back(mini_record("3", "C", "{\n\t// note\n\tx := 1\n}"));  // comment differs
    auto once = deduplicate(records);
    REQUIRE(once.size() == 2);
    CHECK(once[0].id == "1");
    CHECK(once[1].id == "3");
    auto twice = deduplicate(once);
    CHECK(twice == once);
}

TEST_CASE("dataset round-trips field for field") {
    std::vector<FunctionRecord> records = scan_lib("gin_spec.json");
    REQUIRE(!records.empty());
    std::string path = (std::filesystem::temp_directory_path() / "df_roundtrip.jsonl").string();
    write_dataset(records, path);
    std::vector<FunctionRecord> loaded = read_dataset(path);
    CHECK(loaded == records);
    std::filesystem::remove(path);
}

TEST_CASE("read rejects unknown fields and truncated lines with line numbers") {
    std::string good =
        R"js({"id":"a","repo_id":"r","path":"p.go","subject_language":"go","library":"gin","name":"F","signature":"func F()","body":"{}","api_calls":[]})js";

    CHECK(dataset_from_jsonl("", "mem").empty());

    CHECK_THROWS_WITH_AS(dataset_from_jsonl(good + "\n" + good.substr(0, 40) + "\n", "mem"),
                         doctest::Contains("mem:2"), Error);

    std::string unknown =
        R"js({"id":"a","repo_id":"r","path":"p.go","subject_language":"go","library":"gin","name":"F","signature":"func F()","body":"{}","api_calls":[],"extra":1})js";
    CHECK_THROWS_WITH_AS(dataset_from_jsonl(unknown + "\n", "mem"),
                         doctest::Contains("unknown field"), Error);

    std::string missing = R"({"id":"a"})";
    CHECK_THROWS_WITH_AS(dataset_from_jsonl(missing + "\n", "mem"),
                         doctest::Contains("missing field"), Error);
}

TEST_CASE("record invariants hold on the mined corpus") {
    for (const std::string spec : {"gin_spec.json", "cocos_spec.json"}) {
        LibrarySpec lib = load_library_spec(kFixtures + "/" + spec);
        std::vector<FunctionRecord> records = scan_lib(spec);
        for (const FunctionRecord& rec : records) {
            CHECK(!rec.name.empty());
            for (const syntax::ApiCall& call : rec.api_calls) {
                CHECK(call.stmt_span.contains(call.call_span));
                CHECK(call.stmt_span.end <= rec.body.size());
                bool prefixed = false;
                for (const std::string& prefix : lib.qualifier_prefixes) {
                    if (call.qualified_name.rfind(prefix + ".", 0) == 0 ||
                        call.qualified_name == prefix)
                        prefixed = true;
                }
                if (call.qualified_name.rfind(lib.name, 0) == 0) prefixed = true;
                CHECK(prefixed);
            }
        }
    }
}

TEST_CASE("sample_eval_split is deterministic and bounded") {
    std::vector<FunctionRecord> records;
    for (int i = 0; i < 5; ++i)
        records.push_back(mini_record(std::to_string(i), "F" + std::to_string(i),
                                      "{\n\tx := " + std::to_string(i) + "\n}"));

    CHECK(sample_eval_split(records, 0, 7).empty());

    auto all = sample_eval_split(records, 5, 7);
    CHECK(all.size() == 5);
    std::vector<std::string> ids;
    for (const auto& rec : all) ids.push_back(rec.id);
    std::sort(ids.begin(), ids.end());
    CHECK(ids == std::vector<std::string>{"0", "1", "2", "3", "4"});

    auto s1 = sample_eval_split(records, 2, 7);
    auto s2 = sample_eval_split(records, 2, 7);
    CHECK(s1 == s2);
    REQUIRE(s1.size() == 2);

    CHECK_THROWS_AS(sample_eval_split(records, 6, 7), Error);
}

TEST_CASE("manifest rejects duplicate repo ids") {
    std::string path = (std::filesystem::temp_directory_path() / "df_dup_manifest.json").string();
    util::write_file(path, R"({"entries":[
        {"repo_id":"x","local_path":".","stargazers":1,"subject_language":"go"},
        {"repo_id":"x","local_path":".","stargazers":2,"subject_language":"go"}]})");
    CHECK_THROWS_WITH_AS(RepoManifest::load(path), doctest::Contains("duplicate repo_id"), Error);
    std::filesystem::remove(path);
}

}
