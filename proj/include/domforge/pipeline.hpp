#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "domforge/common.hpp"
#include "domforge/corpus.hpp"
#include "domforge/generation.hpp"
#include "domforge/metrics.hpp"

namespace domforge::pipeline {

struct GenerationConfig {
    std::string strategy = "kg";  // plain | kg | cot-pt
    std::string backend;          // "mock:FILE" or an http endpoint URL
    int max_new_tokens = 256;
    double temperature = 0.0;
};

struct MetricsConfig {
    std::array<double, 4> weights = {0.25, 0.25, 0.25, 0.25};
    int max_n = 4;
    bool corpus_bleu = false;
};

struct EvalSampleConfig {
    std::size_t n = 0;  // 0: evaluate every record
    std::uint64_t seed = 0;
};

struct PipelineConfig {
    LibrarySpec library;
    std::string manifest_path;
    std::uint64_t min_stars = 50;
    std::vector<std::string> blocklist = {"main", "init"};
    std::vector<std::string> exclude_globs;
    std::vector<std::string> lib_source_paths;
    std::string out_dir;
    GenerationConfig generation;
    MetricsConfig metrics;
    EvalSampleConfig eval_sample;
    std::uint64_t seed = 0;

    /// Loads a config document; relative paths resolve against the config
    /// file's directory. Referenced inputs are validated before stages run.
    static PipelineConfig load(const std::string& path);

    std::string canonical_json() const;
};

enum class Stage { Mine, Kb, Annotate, Generate, Eval };

std::vector<Stage> parse_stages(const std::string& csv);
std::string to_string(Stage stage);
std::vector<Stage> all_stages();

/// One generated sample as persisted to gen.jsonl.
struct GenRow {
    std::string id;
    std::string strategy;
    std::string prompt;
    std::string code;
    std::vector<std::string> predicted_apis;
    std::size_t generated_tokens = 0;
    std::size_t knowledge_state_tokens = 0;
    bool truncated = false;
    bool degraded = false;
};

void write_gen_rows(const std::vector<GenRow>& rows, const std::string& path);
std::vector<GenRow> read_gen_rows(const std::string& path);

struct StageOutcome {
    Stage stage;
    std::string artifact;  // file the stage wrote
};

/// Runs the requested stages in pipeline order; each writes its artifact
/// under config.out_dir and a run manifest accompanies the outputs. Missing
/// stage dependencies fail with the stage and artifact named.
std::vector<StageOutcome> run_pipeline(const PipelineConfig& config,
                                       const std::vector<Stage>& stages);

// Stage bodies, also driven directly by the CLI subcommands.
void mine_files(const std::string& manifest_path, const LibrarySpec& lib, std::uint64_t min_stars,
                const std::vector<std::string>& blocklist,
                const std::vector<std::string>& exclude_globs, const std::string& out_path);
void kb_build_files(const std::vector<std::string>& lib_source_paths, const LibrarySpec& lib,
                    const std::string& out_path);
void annotate_files(const std::string& dataset_path, const std::string& kb_path,
                    const std::string& out_path);
void generate_files(const std::string& dataset_path, const std::string& kb_path,
                    const GenerationConfig& gen, const LibrarySpec* lib,
                    const EvalSampleConfig& sample, const std::string& out_path);
void eval_files(const std::string& gen_path, const std::string& refs_path, Language lang,
                const MetricsConfig& metrics_config, const std::string& out_path);

/// APIs extracted from generated code; the recommendation sequence scored
/// for strategies that never ran an inquirer.
std::vector<std::string> apis_from_generated(const std::string& signature,
                                             const std::string& code, const LibrarySpec& lib);

}  // namespace domforge::pipeline
