#include "domforge/pipeline.hpp"

#include <algorithm>
#include <filesystem>
#include <iostream>
#include <map>

#include "domforge/cot.hpp"
#include "domforge/knowledge.hpp"
#include "domforge/util.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace domforge::pipeline {

namespace {

json library_to_json(const LibrarySpec& lib) {
    json type_map = json::object();
    for (const auto& [key, types] : lib.type_map) type_map[key] = types;
    return json{{"name", lib.name},
                {"subject_language", to_string(lib.subject_language)},
                {"import_patterns", lib.import_patterns},
                {"qualifier_prefixes", lib.qualifier_prefixes},
                {"lib_types", lib.lib_types},
                {"type_map", std::move(type_map)}};
}

LibrarySpec library_from_json(const json& obj, const std::string& context) {
    LibrarySpec lib;
    lib.name = obj.at("name").get<std::string>();
    lib.subject_language = language_from_string(obj.at("subject_language").get<std::string>());
    lib.import_patterns = obj.at("import_patterns").get<std::vector<std::string>>();
    lib.qualifier_prefixes = obj.at("qualifier_prefixes").get<std::vector<std::string>>();
    if (obj.contains("lib_types")) lib.lib_types = obj["lib_types"].get<std::vector<std::string>>();
    if (obj.contains("type_map")) {
        for (auto it = obj["type_map"].begin(); it != obj["type_map"].end(); ++it)
            lib.type_map[it.key()] = it.value().get<std::vector<std::string>>();
    }
    try {
        lib.validate();
    } catch (const Error& e) {
        throw Error(context + ": " + e.what());
    }
    return lib;
}

std::string resolve_against(const fs::path& base, const std::string& path) {
    if (path.empty()) return path;
    fs::path p(path);
    if (p.is_absolute()) return p.lexically_normal().string();
    return (base / p).lexically_normal().string();
}

}  // namespace

PipelineConfig PipelineConfig::load(const std::string& path) {
    json doc;
    try {
        doc = json::parse(util::read_file(path));
    } catch (const json::exception& e) {
        throw Error("config " + path + ": " + e.what());
    }
    fs::path base = fs::path(path).parent_path();
    PipelineConfig config;
    config.library = library_from_json(doc.at("library"), "config " + path);
    config.manifest_path = resolve_against(base, doc.value("manifest", ""));
    config.min_stars = doc.value("min_stars", std::uint64_t{50});
    if (doc.contains("blocklist"))
        config.blocklist = doc["blocklist"].get<std::vector<std::string>>();
    if (doc.contains("exclude_globs"))
        config.exclude_globs = doc["exclude_globs"].get<std::vector<std::string>>();
    if (doc.contains("lib_source")) {
        for (const json& entry : doc["lib_source"])
            config.lib_source_paths.push_back(resolve_against(base, entry.get<std::string>()));
    }
    config.out_dir = resolve_against(base, doc.value("out_dir", "out"));
    if (doc.contains("generation")) {
        const json& gen = doc["generation"];
        config.generation.strategy = gen.value("strategy", "kg");
        config.generation.backend = gen.value("backend", "");
        config.generation.max_new_tokens = gen.value("max_new_tokens", 256);
        config.generation.temperature = gen.value("temperature", 0.0);
        if (config.generation.backend.rfind("mock:", 0) == 0) {
            config.generation.backend =
                "mock:" + resolve_against(base, config.generation.backend.substr(5));
        }
    }
    if (doc.contains("metrics")) {
        const json& metrics_obj = doc["metrics"];
        if (metrics_obj.contains("weights")) {
            auto weights = metrics_obj["weights"].get<std::vector<double>>();
            if (weights.size() != 4)
                throw Error("config " + path + ": metrics.weights needs 4 values");
            std::copy(weights.begin(), weights.end(), config.metrics.weights.begin());
        }
        config.metrics.max_n = metrics_obj.value("max_n", 4);
        config.metrics.corpus_bleu = metrics_obj.value("corpus_bleu", false);
    }
    if (doc.contains("eval_sample")) {
        config.eval_sample.n = doc["eval_sample"].value("n", std::size_t{0});
        config.eval_sample.seed = doc["eval_sample"].value("seed", std::uint64_t{0});
    }
    config.seed = doc.value("seed", std::uint64_t{0});
    return config;
}

std::string PipelineConfig::canonical_json() const {
    json doc{{"library", library_to_json(library)},
             {"manifest", manifest_path},
             {"min_stars", min_stars},
             {"blocklist", blocklist},
             {"exclude_globs", exclude_globs},
             {"lib_source", lib_source_paths},
             {"generation",
              {{"strategy", generation.strategy},
               {"backend", generation.backend},
               {"max_new_tokens", generation.max_new_tokens},
               {"temperature", generation.temperature}}},
             {"metrics",
              {{"weights", metrics.weights},
               {"max_n", metrics.max_n},
               {"corpus_bleu", metrics.corpus_bleu}}},
             {"eval_sample", {{"n", eval_sample.n}, {"seed", eval_sample.seed}}},
             {"seed", seed}};
    return doc.dump();
}

std::string to_string(Stage stage) {
    switch (stage) {
        case Stage::Mine: return "mine";
        case Stage::Kb: return "kb";
        case Stage::Annotate: return "annotate";
        case Stage::Generate: return "generate";
        case Stage::Eval: return "eval";
    }
    return "?";
}

std::vector<Stage> all_stages() {
    return {Stage::Mine, Stage::Kb, Stage::Annotate, Stage::Generate, Stage::Eval};
}

std::vector<Stage> parse_stages(const std::string& csv) {
    if (csv.empty() || csv == "all") return all_stages();
    std::vector<Stage> stages;
    std::size_t start = 0;
    while (start <= csv.size()) {
        std::size_t comma = csv.find(',', start);
        std::string name =
            csv.substr(start, comma == std::string::npos ? csv.size() - start : comma - start);
        if (name == "mine") stages.push_back(Stage::Mine);
        else if (name == "kb") stages.push_back(Stage::Kb);
        else if (name == "annotate") stages.push_back(Stage::Annotate);
        else if (name == "generate") stages.push_back(Stage::Generate);
        else if (name == "eval") stages.push_back(Stage::Eval);
        else throw Error("unknown stage: \"" + name + "\"");
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    // run in canonical order regardless of listing order
    std::vector<Stage> ordered;
    for (Stage stage : all_stages())
        if (std::find(stages.begin(), stages.end(), stage) != stages.end())
            ordered.push_back(stage);
    return ordered;
}

void write_gen_rows(const std::vector<GenRow>& rows, const std::string& path) {
    std::string out;
    for (const GenRow& row : rows) {
        json obj{{"id", row.id},
                 {"strategy", row.strategy},
                 {"prompt", row.prompt},
                 {"code", row.code},
                 {"predicted_apis", row.predicted_apis},
                 {"token_counts",
                  {{"generated", row.generated_tokens},
                   {"knowledge_state", row.knowledge_state_tokens}}},
                 {"truncated", row.truncated},
                 {"degraded", row.degraded}};
        out += obj.dump();
        out.push_back('\n');
    }
    util::write_file(path, out);
}

std::vector<GenRow> read_gen_rows(const std::string& path) {
    std::string text = util::read_file(path);
    std::vector<GenRow> rows;
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start < text.size()) {
        std::size_t nl = text.find('\n', start);
        std::string_view line = nl == std::string::npos
                                    ? std::string_view(text).substr(start)
                                    : std::string_view(text).substr(start, nl - start);
        ++line_no;
        if (!line.empty()) {
            json obj;
            try {
                obj = json::parse(line);
            } catch (const json::exception& e) {
                throw Error(path + ":" + std::to_string(line_no) + ": " + e.what());
            }
            GenRow row;
            row.id = obj.at("id").get<std::string>();
            row.strategy = obj.value("strategy", "");
            row.prompt = obj.value("prompt", "");
            row.code = obj.at("code").get<std::string>();
            if (obj.contains("predicted_apis"))
                row.predicted_apis = obj["predicted_apis"].get<std::vector<std::string>>();
            if (obj.contains("token_counts")) {
                row.generated_tokens = obj["token_counts"].value("generated", std::size_t{0});
                row.knowledge_state_tokens =
                    obj["token_counts"].value("knowledge_state", std::size_t{0});
            }
            row.truncated = obj.value("truncated", false);
            row.degraded = obj.value("degraded", false);
            rows.push_back(std::move(row));
        }
        if (nl == std::string::npos) break;
        start = nl + 1;
    }
    return rows;
}

std::vector<std::string> apis_from_generated(const std::string& signature,
                                             const std::string& code, const LibrarySpec& lib) {
    std::string file_text = signature + " " + code;
    if (lib.subject_language == Language::Go) {
        // top-level extraction expects file-shaped input
        file_text = "package p\n\n" + file_text;
    }
    syntax::SyntaxTree tree = syntax::parse_source(file_text, lib.subject_language);
    std::vector<syntax::FunctionSpan> functions = syntax::extract_functions(tree);
    if (functions.empty()) return {};
    const syntax::FunctionSpan& fn = functions.front();
    std::vector<syntax::TypedVar> vars = syntax::collect_typed_variables(tree, fn, lib);
    std::vector<std::string> apis;
    for (const syntax::ApiCall& call : syntax::extract_api_calls(tree, fn, lib, vars))
        apis.push_back(call.qualified_name);
    return apis;
}

// ---------------------------------------------------------------------------
// Stage bodies

void mine_files(const std::string& manifest_path, const LibrarySpec& lib, std::uint64_t min_stars,
                const std::vector<std::string>& blocklist,
                const std::vector<std::string>& exclude_globs, const std::string& out_path) {
    corpus::RepoManifest manifest = corpus::RepoManifest::load(manifest_path);
    corpus::ScanResult scan = corpus::scan_repositories(manifest, lib, min_stars, exclude_globs);
    for (const corpus::ScanIssue& issue : scan.report.errors)
        std::cerr << "mine: " << issue.repo_id << " " << issue.path << ": " << issue.message
                  << "\n";
    std::set<std::string> names(blocklist.begin(), blocklist.end());
    std::vector<corpus::FunctionRecord> records =
        corpus::deduplicate(corpus::filter_functions(std::move(scan.records), names));
    corpus::write_dataset(records, out_path);
    std::cerr << "mine: " << records.size() << " records (" << scan.report.files_matched << "/"
              << scan.report.files_scanned << " files matched)\n";
}

void kb_build_files(const std::vector<std::string>& lib_source_paths, const LibrarySpec& lib,
                    const std::string& out_path) {
    knowledge::KbBuildResult built = knowledge::build_kb_from_library_source(lib_source_paths, lib);
    knowledge::save_kb(built.kb, out_path);
    std::cerr << "kb: " << built.kb.entries.size() << " entries, " << built.skipped_no_doc
              << " functions without docstrings\n";
}

void annotate_files(const std::string& dataset_path, const std::string& kb_path,
                    const std::string& out_path) {
    std::vector<corpus::FunctionRecord> records = corpus::read_dataset(dataset_path);
    knowledge::KnowledgeBase kb = knowledge::load_kb(kb_path);

    std::string out;
    for (const corpus::FunctionRecord& rec : records) {
        cot::TrainingSequence seq = cot::build_training_sequence(rec, kb);
        std::string annotated = cot::annotate_function(rec, kb);
        json steps = json::array();
        for (const cot::CotStep& step : seq.sequence.steps) {
            steps.push_back({{"api_state", step.knowledge.api_state},
                             {"task_state", step.knowledge.task_state},
                             {"code", step.code}});
        }
        json obj{{"id", rec.id},
                 {"signature", rec.signature},
                 {"annotated_body", annotated},
                 {"cot_sequence", {{"input", seq.sequence.input}, {"steps", std::move(steps)}}},
                 {"training_text", seq.serialized},
                 {"token_counts",
                  {{"raw", metrics::token_spans(seq.serialized).size()},
                   {"stripped", metrics::token_spans(rec.signature + " " + rec.body).size()}}}};
        out += obj.dump();
        out.push_back('\n');
    }
    util::write_file(out_path, out);
    std::cerr << "annotate: " << records.size() << " training sequences\n";
}

namespace {

std::unique_ptr<generation::CompletionBackend> open_backend(const std::string& spec) {
    if (spec.empty()) throw Error("generate: no backend configured");
    if (spec.rfind("mock:", 0) == 0) return generation::mock_backend(spec.substr(5));
    const char* token = std::getenv("DOMFORGE_BACKEND_TOKEN");
    return generation::remote_backend(spec, token ? token : "");
}

}  // namespace

void generate_files(const std::string& dataset_path, const std::string& kb_path,
                    const GenerationConfig& gen, const LibrarySpec* lib,
                    const EvalSampleConfig& sample, const std::string& out_path) {
    std::vector<corpus::FunctionRecord> records = corpus::read_dataset(dataset_path);
    std::vector<corpus::FunctionRecord> targets = records;
    if (sample.n > 0) targets = corpus::sample_eval_split(records, sample.n, sample.seed);

    if (gen.strategy != "plain" && gen.strategy != "kg" && gen.strategy != "cot-pt")
        throw Error("generate: unknown strategy \"" + gen.strategy + "\"");

    knowledge::KnowledgeBase kb;
    if (gen.strategy == "cot-pt") {
        if (kb_path.empty()) throw Error("generate: strategy cot-pt requires a knowledge base");
        kb = knowledge::load_kb(kb_path);
    }
    std::unique_ptr<generation::CompletionBackend> backend = open_backend(gen.backend);
    std::unique_ptr<generation::ApiInquirer> inquirer =
        generation::retrieval_inquirer_build(records);

    generation::CompletionParams params;
    params.max_new_tokens = gen.max_new_tokens;
    params.temperature = gen.temperature;

    std::vector<GenRow> rows;
    for (const corpus::FunctionRecord& rec : targets) {
        generation::GenerationResult result;
        if (gen.strategy == "plain") {
            result =
                generation::generate_plain(rec.signature, *backend, params, rec.subject_language);
        } else if (gen.strategy == "kg") {
            result = generation::generate_kg(rec.signature, *inquirer, *backend, params,
                                             rec.subject_language);
        } else {
            result = generation::generate_cot_pt(rec.signature, *inquirer, kb, *backend, params,
                                                 rec.subject_language);
        }
        GenRow row;
        row.id = rec.id;
        row.strategy = gen.strategy;
        row.prompt = result.prompt_used;
        row.code = result.code;
        row.predicted_apis = result.recommended_apis;
        if (row.predicted_apis.empty() && gen.strategy == "plain" && lib)
            row.predicted_apis = apis_from_generated(rec.signature, result.code, *lib);
        row.generated_tokens = result.token_counts.generated;
        row.knowledge_state_tokens = result.token_counts.knowledge_state;
        row.truncated = result.truncated;
        row.degraded = result.degraded;
        rows.push_back(std::move(row));
    }
    write_gen_rows(rows, out_path);
    std::cerr << "generate: " << rows.size() << " samples via " << gen.strategy << "\n";
}

void eval_files(const std::string& gen_path, const std::string& refs_path, Language lang,
                const MetricsConfig& metrics_config, const std::string& out_path) {
    std::vector<corpus::FunctionRecord> records = corpus::read_dataset(refs_path);
    std::vector<GenRow> rows = read_gen_rows(gen_path);

    std::map<std::string, const corpus::FunctionRecord*> by_id;
    for (const corpus::FunctionRecord& rec : records) by_id[rec.id] = &rec;

    std::vector<metrics::EvalPair> pairs;
    for (const GenRow& row : rows) {
        auto it = by_id.find(row.id);
        if (it == by_id.end()) continue;
        metrics::EvalPair pair;
        pair.id = row.id;
        pair.candidate = row.code;
        pair.reference = it->second->body;
        pair.subject_language = it->second->subject_language;
        pair.predicted_apis = row.predicted_apis;
        for (const syntax::ApiCall& call : it->second->api_calls)
            pair.reference_apis.push_back(call.qualified_name);
        pairs.push_back(std::move(pair));
    }

    metrics::EvalConfig eval_config;
    eval_config.weights = metrics_config.weights;
    eval_config.max_n = metrics_config.max_n;
    eval_config.corpus_bleu = metrics_config.corpus_bleu;
    eval_config.subject_language = lang;
    metrics::EvalReport report = metrics::evaluate_corpus(pairs, eval_config);
    metrics::save_report(report, out_path);
    if (report.aggregate) {
        std::cerr << "eval: " << report.per_sample.size() << " samples, BLEU "
                  << report.aggregate->bleu * 100.0 << ", CodeBLEU "
                  << report.aggregate->codebleu * 100.0 << ", HitRatio "
                  << report.aggregate->hit_ratio << "\n";
    } else {
        std::cerr << "eval: no samples\n";
    }
}

// ---------------------------------------------------------------------------
// Pipeline driver

namespace {

struct PipelineContext {
    const PipelineConfig& config;
    fs::path out;

    std::string dataset_path() const { return (out / "dataset.jsonl").string(); }
    std::string kb_path() const { return (out / "kb.json").string(); }
    std::string train_path() const { return (out / "train.jsonl").string(); }
    std::string gen_path() const { return (out / "gen.jsonl").string(); }
    std::string report_path() const { return (out / "report.json").string(); }

    void require(const std::string& artifact, Stage stage) const {
        if (!fs::exists(artifact))
            throw Error("stage " + to_string(stage) + ": missing artifact " + artifact +
                        " (run an earlier stage first)");
    }
};

void write_run_manifest(const PipelineContext& ctx, const std::vector<StageOutcome>& outcomes) {
    json artifacts = json::object();
    for (const StageOutcome& outcome : outcomes) {
        if (fs::exists(outcome.artifact)) {
            artifacts[fs::path(outcome.artifact).filename().string()] =
                util::sha256_hex(util::read_file(outcome.artifact));
        }
    }
    json inputs = json::object();
    if (!ctx.config.manifest_path.empty() && fs::exists(ctx.config.manifest_path))
        inputs["manifest"] = util::sha256_hex(util::read_file(ctx.config.manifest_path));
    json doc{{"version", kVersion},
             {"config_sha256", util::sha256_hex(ctx.config.canonical_json())},
             {"inputs", std::move(inputs)},
             {"artifacts", std::move(artifacts)}};
    util::write_file((ctx.out / "run_manifest.json").string(), doc.dump(2) + "\n");
}

}  // namespace

std::vector<StageOutcome> run_pipeline(const PipelineConfig& config,
                                       const std::vector<Stage>& stages) {
    PipelineContext ctx{config, fs::path(config.out_dir)};
    std::error_code ec;
    fs::create_directories(ctx.out, ec);
    if (ec) throw Error("cannot create out_dir " + config.out_dir + ": " + ec.message());

    std::vector<StageOutcome> outcomes;
    for (Stage stage : stages) {
        switch (stage) {
            case Stage::Mine:
                if (config.manifest_path.empty())
                    throw Error("stage mine: config has no manifest path");
                mine_files(config.manifest_path, config.library, config.min_stars,
                           config.blocklist, config.exclude_globs, ctx.dataset_path());
                outcomes.push_back({stage, ctx.dataset_path()});
                break;
            case Stage::Kb:
                if (config.lib_source_paths.empty())
                    throw Error("stage kb: config has no lib_source paths");
                kb_build_files(config.lib_source_paths, config.library, ctx.kb_path());
                outcomes.push_back({stage, ctx.kb_path()});
                break;
            case Stage::Annotate:
                ctx.require(ctx.dataset_path(), Stage::Annotate);
                ctx.require(ctx.kb_path(), Stage::Annotate);
                annotate_files(ctx.dataset_path(), ctx.kb_path(), ctx.train_path());
                outcomes.push_back({stage, ctx.train_path()});
                break;
            case Stage::Generate: {
                ctx.require(ctx.dataset_path(), Stage::Generate);
                std::string kb_path;
                if (config.generation.strategy == "cot-pt") {
                    ctx.require(ctx.kb_path(), Stage::Generate);
                    kb_path = ctx.kb_path();
                }
                generate_files(ctx.dataset_path(), kb_path, config.generation, &config.library,
                               config.eval_sample, ctx.gen_path());
                outcomes.push_back({stage, ctx.gen_path()});
                break;
            }
            case Stage::Eval:
                ctx.require(ctx.gen_path(), Stage::Eval);
                ctx.require(ctx.dataset_path(), Stage::Eval);
                eval_files(ctx.gen_path(), ctx.dataset_path(),
                           config.library.subject_language, config.metrics, ctx.report_path());
                outcomes.push_back({stage, ctx.report_path()});
                break;
        }
    }
    write_run_manifest(ctx, outcomes);
    return outcomes;
}

}  // namespace domforge::pipeline
