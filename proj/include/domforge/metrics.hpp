#pragma once

#include <array>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "domforge/common.hpp"

namespace domforge::metrics {

/// Whitespace-and-punctuation tokenizer: identifier/number runs stay whole,
/// every other non-space character is its own token, string literals
/// (quotes included) are single tokens.
std::vector<std::string> tokenize_code(std::string_view text);

/// Byte spans of the same tokens, for token-budget cuts.
std::vector<ByteSpan> token_spans(std::string_view text);

/// Per-order modified-precision counts, reusable for pooled corpus scores.
struct BleuStats {
    std::vector<double> matched;  // index 0 = unigrams
    std::vector<double> total;
    std::size_t candidate_len = 0;
    std::size_t reference_len = 0;

    void accumulate(const BleuStats& other);
};

BleuStats collect_bleu_stats(const std::vector<std::string>& candidate,
                             const std::vector<std::string>& reference, int max_n,
                             const std::set<std::string>* keyword_set = nullptr,
                             double keyword_weight = 5.0);

/// Geometric mean of modified n-gram precisions times the brevity penalty.
/// Zero-valued precisions of order >= 2 are smoothed add-one; a zero unigram
/// precision yields 0.
double bleu_from_stats(const BleuStats& stats, int max_n);

double bleu(const std::vector<std::string>& candidate, const std::vector<std::string>& reference,
            int max_n = 4);

/// BLEU with keyword tokens weighted 5x in the unigram precision.
double weighted_ngram_match(const std::vector<std::string>& candidate,
                            const std::vector<std::string>& reference,
                            const std::set<std::string>& keyword_set, int max_n = 4);

struct ComponentScore {
    double score = 0.0;
    bool has_signal = true;  // false: reference had nothing to match (score is vacuous 1.0)
};

/// Fraction of reference subtrees (node-kind serialization, depth >= 2)
/// present in the candidate tree; error regions are excluded.
ComponentScore syntax_match_detailed(const std::string& candidate, const std::string& reference,
                                     Language lang);
double syntax_match(const std::string& candidate, const std::string& reference, Language lang);

/// Fraction of reference def-use events present in the candidate, over
/// normalized variable slots; invariant under consistent renaming.
ComponentScore dataflow_match_detailed(const std::string& candidate, const std::string& reference,
                                       Language lang);
double dataflow_match(const std::string& candidate, const std::string& reference, Language lang);

struct CodeBleuComponents {
    double ngram = 0.0;
    double weighted_ngram = 0.0;
    double syntax = 0.0;
    double dataflow = 0.0;
};

struct CodeBleuResult {
    double score = 0.0;
    CodeBleuComponents components;
    bool dataflow_dropped = false;  // reference had no def-use events
    bool syntax_dropped = false;    // reference had no qualifying subtrees
};

/// Weighted combination of the four components; weights must sum to 1.
/// Components without reference signal are dropped and the remaining
/// weights renormalized.
CodeBleuResult codebleu(const std::string& candidate, const std::string& reference, Language lang,
                        std::array<double, 4> weights = {0.25, 0.25, 0.25, 0.25}, int max_n = 4);

/// Multiset intersection over predicted, divided by |predicted|; empty
/// predictions score 0.
double hit_ratio(const std::vector<std::string>& predicted,
                 const std::vector<std::string>& reference);

struct EvalPair {
    std::string id;
    std::string candidate;
    std::string reference;
    Language subject_language = Language::Go;
    std::vector<std::string> predicted_apis;
    std::vector<std::string> reference_apis;
};

struct EvalConfig {
    std::array<double, 4> weights = {0.25, 0.25, 0.25, 0.25};
    int max_n = 4;
    bool corpus_bleu = false;
    Language subject_language = Language::Go;
};

struct SampleScore {
    std::string id;
    double bleu = 0.0;
    double codebleu = 0.0;
    CodeBleuComponents components;
    double hit_ratio = 0.0;
};

struct EvalFailure {
    std::string id;
    std::string message;
};

struct Aggregate {
    double bleu = 0.0;
    double codebleu = 0.0;
    CodeBleuComponents components;
    double hit_ratio = 0.0;
    std::size_t count = 0;
};

struct EvalReport {
    EvalConfig config;
    std::vector<SampleScore> per_sample;  // ordered by id
    std::optional<Aggregate> aggregate;
    std::vector<EvalFailure> failures;
    std::optional<double> corpus_bleu;  // pooled-count variant, on request
};

EvalReport evaluate_corpus(const std::vector<EvalPair>& pairs, const EvalConfig& config);

std::string report_to_json(const EvalReport& report);
void save_report(const EvalReport& report, const std::string& path);

}  // namespace domforge::metrics
