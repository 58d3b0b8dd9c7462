#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "domforge/cot.hpp"
#include "domforge/pipeline.hpp"
#include "domforge/prompts.hpp"
#include "domforge/util.hpp"

using namespace domforge;

namespace {

/// Library spec from --library FILE, or from --config when given.
LibrarySpec resolve_library(const std::string& library_file, const std::string& config_file) {
    if (!library_file.empty()) return corpus::load_library_spec(library_file);
    if (!config_file.empty()) return pipeline::PipelineConfig::load(config_file).library;
    throw Error("either --library or --config is required");
}

int run(int argc, char** argv) {
    CLI::App app{"domain-aware code corpus, prompt and evaluation toolkit"};
    app.require_subcommand(1);

    std::string config_file;
    std::uint64_t seed = 0;
    app.add_option("--config", config_file, "pipeline config file")->configurable(false);
    app.add_option("--seed", seed, "seed for sampling operations");

    // mine
    auto* mine = app.add_subcommand("mine", "scan repositories into a dataset");
    std::string manifest_path, library_file, out_path;
    std::uint64_t min_stars = 50;
    std::vector<std::string> exclude_globs, blocklist{"main", "init"};
    mine->add_option("--manifest", manifest_path, "repository manifest JSON");
    mine->add_option("--library", library_file, "library spec JSON");
    mine->add_option("--min-stars", min_stars, "stargazer threshold")->capture_default_str();
    mine->add_option("--out", out_path, "output dataset (JSONL)")->required();
    mine->add_option("--exclude-glob", exclude_globs, "repo-relative path globs to skip");
    mine->add_option("--blocklist", blocklist, "simple function names to drop")
        ->capture_default_str();

    // kb build / kb lookup
    auto* kb = app.add_subcommand("kb", "knowledge base operations");
    kb->require_subcommand(1);
    auto* kb_build = kb->add_subcommand("build", "build a knowledge base from library source");
    std::vector<std::string> lib_src;
    std::string kb_out, kb_library_file;
    bool first_sentence = false;
    kb_build->add_option("--lib-src", lib_src, "library source paths")->required();
    kb_build->add_option("--library", kb_library_file, "library spec JSON");
    kb_build->add_option("--out", kb_out, "output kb.json")->required();
    kb_build->add_flag("--first-sentence", first_sentence, "store first sentences only");

    auto* kb_lookup = kb->add_subcommand("lookup", "look up one API docstring");
    std::string kb_path, api_name;
    kb_lookup->add_option("--kb", kb_path, "knowledge base file")->required();
    kb_lookup->add_option("--api", api_name, "qualified API name")->required();

    // prompt
    auto* prompt_cmd = app.add_subcommand("prompt", "render a knowledge-enhanced prompt");
    std::string prompt_kind = "signature", record_path, prompt_kb_path, record_id;
    prompt_cmd->add_option("--kind", prompt_kind,
                           "signature|library-import|api|docstring|api-docstring|docstring-api")
        ->capture_default_str();
    prompt_cmd->add_option("--record", record_path, "dataset file holding the record")->required();
    prompt_cmd->add_option("--id", record_id, "record id (default: first record)");
    prompt_cmd->add_option("--kb", prompt_kb_path, "knowledge base file");

    // annotate
    auto* annotate = app.add_subcommand("annotate", "insert knowledge states into a dataset");
    std::string dataset_path, annotate_kb, annotate_out;
    annotate->add_option("--dataset", dataset_path, "dataset JSONL")->required();
    annotate->add_option("--kb", annotate_kb, "knowledge base file")->required();
    annotate->add_option("--out", annotate_out, "training export (JSONL)")->required();

    // generate
    auto* generate = app.add_subcommand("generate", "complete dataset signatures via a backend");
    std::string gen_dataset, gen_kb, gen_backend, gen_out, gen_strategy = "plain";
    std::string gen_library_file;
    int max_new_tokens = 256;
    double temperature = 0.0;
    std::size_t gen_sample_n = 0;
    generate->add_option("--strategy", gen_strategy, "plain|kg|cot-pt")->capture_default_str();
    generate->add_option("--dataset", gen_dataset, "dataset JSONL")->required();
    generate->add_option("--kb", gen_kb, "knowledge base file (cot-pt)");
    generate->add_option("--backend", gen_backend, "endpoint URL or mock:FILE")->required();
    generate->add_option("--library", gen_library_file, "library spec JSON");
    generate->add_option("--out", gen_out, "output gen.jsonl")->required();
    generate->add_option("--max-new-tokens", max_new_tokens)->capture_default_str();
    generate->add_option("--temperature", temperature)->capture_default_str();
    generate->add_option("--sample-n", gen_sample_n, "generate for a seeded sample only");

    // eval
    auto* eval = app.add_subcommand("eval", "score generated code against references");
    std::string eval_gen, eval_refs, eval_lang = "go", eval_out;
    bool corpus_bleu = false;
    std::vector<double> weights;
    eval->add_option("--gen", eval_gen, "gen.jsonl")->required();
    eval->add_option("--refs", eval_refs, "reference dataset JSONL")->required();
    eval->add_option("--lang", eval_lang, "go|cpp")->capture_default_str();
    eval->add_option("--out", eval_out, "report.json")->required();
    eval->add_option("--weights", weights, "four metric weights")->expected(4);
    eval->add_flag("--corpus-bleu", corpus_bleu, "add pooled-count corpus BLEU");

    // pipeline
    auto* pipe = app.add_subcommand("pipeline", "run mine|kb|annotate|generate|eval stages");
    std::string stages_csv = "all", out_dir_override;
    pipe->add_option("--stages", stages_csv, "comma-separated stage subset")
        ->capture_default_str();
    pipe->add_option("--out-dir", out_dir_override, "override the config's out_dir");

    CLI11_PARSE(app, argc, argv);

    if (mine->parsed()) {
        LibrarySpec lib = resolve_library(library_file, config_file);
        if (manifest_path.empty() && !config_file.empty())
            manifest_path = pipeline::PipelineConfig::load(config_file).manifest_path;
        if (manifest_path.empty()) throw Error("mine: --manifest is required");
        pipeline::mine_files(manifest_path, lib, min_stars, blocklist, exclude_globs, out_path);
        return 0;
    }
    if (kb_build->parsed()) {
        LibrarySpec lib = resolve_library(kb_library_file, config_file);
        knowledge::KbBuildOptions options;
        options.first_sentence_only = first_sentence;
        knowledge::KbBuildResult built =
            knowledge::build_kb_from_library_source(lib_src, lib, options);
        knowledge::save_kb(built.kb, kb_out);
        std::cerr << "kb: " << built.kb.entries.size() << " entries, " << built.skipped_no_doc
                  << " functions without docstrings\n";
        return 0;
    }
    if (kb_lookup->parsed()) {
        knowledge::KnowledgeBase base = knowledge::load_kb(kb_path);
        const knowledge::KnowledgeEntry* entry = base.lookup(api_name);
        if (!entry) {
            std::cerr << "kb lookup: no entry for \"" << api_name << "\"\n";
            return 1;
        }
        std::cout << entry->docstring << "\n";
        return 0;
    }
    if (prompt_cmd->parsed()) {
        std::vector<corpus::FunctionRecord> records = corpus::read_dataset(record_path);
        if (records.empty()) throw Error("prompt: no records in " + record_path);
        const corpus::FunctionRecord* rec = &records.front();
        if (!record_id.empty()) {
            rec = nullptr;
            for (const corpus::FunctionRecord& candidate : records)
                if (candidate.id == record_id) rec = &candidate;
            if (!rec) throw Error("prompt: no record with id " + record_id);
        }
        knowledge::KnowledgeBase base;
        prompts::PromptSpec spec;
        spec.kind = prompts::prompt_kind_from_string(prompt_kind);
        spec.signature = rec->signature;
        spec.library = rec->library;
        for (const syntax::ApiCall& call : rec->api_calls) {
            if (std::find(spec.apis.begin(), spec.apis.end(), call.qualified_name) ==
                spec.apis.end())
                spec.apis.push_back(call.qualified_name);
        }
        if (!prompt_kb_path.empty()) {
            base = knowledge::load_kb(prompt_kb_path);
            spec.kb = &base;
        }
        std::cout << prompts::render_prompt(spec) << "\n";
        return 0;
    }
    if (annotate->parsed()) {
        pipeline::annotate_files(dataset_path, annotate_kb, annotate_out);
        return 0;
    }
    if (generate->parsed()) {
        pipeline::GenerationConfig gen_config;
        gen_config.strategy = gen_strategy;
        gen_config.backend = gen_backend;
        gen_config.max_new_tokens = max_new_tokens;
        gen_config.temperature = temperature;
        pipeline::EvalSampleConfig sample;
        sample.n = gen_sample_n;
        sample.seed = seed;
        std::optional<LibrarySpec> lib;
        if (!gen_library_file.empty() || !config_file.empty())
            lib = resolve_library(gen_library_file, config_file);
        pipeline::generate_files(gen_dataset, gen_kb, gen_config, lib ? &*lib : nullptr, sample,
                                 gen_out);
        return 0;
    }
    if (eval->parsed()) {
        pipeline::MetricsConfig metrics_config;
        if (!weights.empty())
            std::copy(weights.begin(), weights.end(), metrics_config.weights.begin());
        metrics_config.corpus_bleu = corpus_bleu;
        pipeline::eval_files(eval_gen, eval_refs, language_from_string(eval_lang), metrics_config,
                             eval_out);
        return 0;
    }
    if (pipe->parsed()) {
        if (config_file.empty()) throw Error("pipeline: --config is required");
        pipeline::PipelineConfig config = pipeline::PipelineConfig::load(config_file);
        if (!out_dir_override.empty()) config.out_dir = out_dir_override;
        pipeline::run_pipeline(config, pipeline::parse_stages(stages_csv));
        return 0;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const Error& e) {
        std::cerr << "domforge: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "domforge: " << e.what() << "\n";
        return 1;
    }
}
