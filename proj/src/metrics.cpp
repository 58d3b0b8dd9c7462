#include "domforge/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <unordered_map>

#include "domforge/syntax.hpp"
#include "domforge/util.hpp"
#include "json.hpp"

using nlohmann::json;

namespace domforge::metrics {

namespace {

bool is_word_char(unsigned char ch) {
    return std::isalnum(ch) || ch == '_' || ch >= 0x80;
}

}  // namespace

std::vector<ByteSpan> token_spans(std::string_view text) {
    std::vector<ByteSpan> spans;
    std::size_t i = 0;
    while (i < text.size()) {
        char ch = text[i];
        if (std::isspace(static_cast<unsigned char>(ch))) {
            ++i;
            continue;
        }
        if (ch == '"' || ch == '\'') {
            std::size_t start = i++;
            while (i < text.size() && text[i] != ch && text[i] != '\n') {
                if (text[i] == '\\' && i + 1 < text.size()) ++i;
                ++i;
            }
            if (i < text.size() && text[i] == ch) ++i;
            spans.push_back({start, i});
            continue;
        }
        if (ch == '`') {
            std::size_t start = i++;
            while (i < text.size() && text[i] != '`') ++i;
            if (i < text.size()) ++i;
            spans.push_back({start, i});
            continue;
        }
        if (is_word_char(static_cast<unsigned char>(ch))) {
            std::size_t start = i;
            while (i < text.size() && is_word_char(static_cast<unsigned char>(text[i]))) ++i;
            spans.push_back({start, i});
            continue;
        }
        spans.push_back({i, i + 1});
        ++i;
    }
    return spans;
}

std::vector<std::string> tokenize_code(std::string_view text) {
    std::vector<std::string> tokens;
    for (const ByteSpan& span : token_spans(text))
        tokens.emplace_back(text.substr(span.begin, span.size()));
    return tokens;
}

void BleuStats::accumulate(const BleuStats& other) {
    if (matched.size() < other.matched.size()) {
        matched.resize(other.matched.size(), 0.0);
        total.resize(other.total.size(), 0.0);
    }
    for (std::size_t i = 0; i < other.matched.size(); ++i) {
        matched[i] += other.matched[i];
        total[i] += other.total[i];
    }
    candidate_len += other.candidate_len;
    reference_len += other.reference_len;
}

BleuStats collect_bleu_stats(const std::vector<std::string>& candidate,
                             const std::vector<std::string>& reference, int max_n,
                             const std::set<std::string>* keyword_set, double keyword_weight) {
    BleuStats stats;
    stats.matched.assign(static_cast<std::size_t>(max_n), 0.0);
    stats.total.assign(static_cast<std::size_t>(max_n), 0.0);
    stats.candidate_len = candidate.size();
    stats.reference_len = reference.size();

    auto weight_of = [&](const std::string& token) {
        return (keyword_set && keyword_set->count(token)) ? keyword_weight : 1.0;
    };

    for (int n = 1; n <= max_n; ++n) {
        auto ngram_key = [&](const std::vector<std::string>& toks, std::size_t at) {
            std::string key;
            for (int k = 0; k < n; ++k) {
                key += toks[at + static_cast<std::size_t>(k)];
                key.push_back('\x1f');
            }
            return key;
        };
        std::unordered_map<std::string, int> ref_counts;
        if (reference.size() >= static_cast<std::size_t>(n)) {
            for (std::size_t at = 0; at + n <= reference.size(); ++at)
                ++ref_counts[ngram_key(reference, at)];
        }
        std::unordered_map<std::string, int> cand_counts;
        if (candidate.size() >= static_cast<std::size_t>(n)) {
            for (std::size_t at = 0; at + n <= candidate.size(); ++at)
                ++cand_counts[ngram_key(candidate, at)];
        }
        double matched = 0.0, total = 0.0;
        bool weighted = keyword_set && n == 1;
        for (const auto& [key, count] : cand_counts) {
            int clipped = 0;
            auto it = ref_counts.find(key);
            if (it != ref_counts.end()) clipped = std::min(count, it->second);
            double w = 1.0;
            if (weighted) {
                std::string token = key.substr(0, key.size() - 1);  // strip '\x1f'
                w = weight_of(token);
            }
            matched += w * clipped;
            total += w * count;
        }
        stats.matched[static_cast<std::size_t>(n - 1)] = matched;
        stats.total[static_cast<std::size_t>(n - 1)] = total;
    }
    return stats;
}

double bleu_from_stats(const BleuStats& stats, int max_n) {
    if (stats.candidate_len == 0) return 0.0;
    double log_sum = 0.0;
    for (int n = 1; n <= max_n; ++n) {
        double matched = stats.matched[static_cast<std::size_t>(n - 1)];
        double total = stats.total[static_cast<std::size_t>(n - 1)];
        if (n >= 2 && matched == 0.0) {  // add-one smoothing for zero precisions
            matched += 1.0;
            total += 1.0;
        }
        if (matched == 0.0) return 0.0;  // unigram precision zero
        log_sum += std::log(matched / total);
    }
    double brevity = 1.0;
    if (stats.candidate_len < stats.reference_len) {
        brevity = std::exp(1.0 - static_cast<double>(stats.reference_len) /
                                     static_cast<double>(stats.candidate_len));
    }
    return brevity * std::exp(log_sum / max_n);
}

double bleu(const std::vector<std::string>& candidate, const std::vector<std::string>& reference,
            int max_n) {
    if (reference.empty()) throw Error("bleu: reference must be non-empty");
    return bleu_from_stats(collect_bleu_stats(candidate, reference, max_n), max_n);
}

double weighted_ngram_match(const std::vector<std::string>& candidate,
                            const std::vector<std::string>& reference,
                            const std::set<std::string>& keyword_set, int max_n) {
    if (reference.empty()) throw Error("weighted_ngram_match: reference must be non-empty");
    return bleu_from_stats(collect_bleu_stats(candidate, reference, max_n, &keyword_set), max_n);
}

// ---------------------------------------------------------------------------
// Syntax match

namespace {

using syntax::Node;
using syntax::NodeKind;

/// Kind-only preorder serialization; nullopt when the subtree contains an
/// error region.
std::optional<std::string> serialize_subtree(const Node& node) {
    if (node.kind == NodeKind::Error) return std::nullopt;
    std::string out;
    out.push_back('(');
    out += syntax::node_kind_name(node.kind);
    if (node.kind == NodeKind::OperatorLeaf || node.kind == NodeKind::KeywordLeaf) {
        out.push_back(':');
        out += node.leaf_text;
    }
    for (const Node& child : node.children) {
        auto sub = serialize_subtree(child);
        if (!sub) return std::nullopt;
        out.push_back(' ');
        out += *sub;
    }
    out.push_back(')');
    return out;
}

void collect_subtrees(const Node& node, std::map<std::string, int>& out) {
    if (!node.children.empty()) {
        if (auto repr = serialize_subtree(node)) ++out[*repr];
    }
    for (const Node& child : node.children) collect_subtrees(child, out);
}

std::map<std::string, int> subtree_multiset(const std::string& code, Language lang) {
    syntax::SyntaxTree tree = syntax::parse_source(code, lang);
    std::map<std::string, int> out;
    collect_subtrees(tree.root, out);
    // the whole-file node itself is not a comparable subtree
    if (auto whole = serialize_subtree(tree.root)) {
        auto it = out.find(*whole);
        if (it != out.end() && --it->second == 0) out.erase(it);
    }
    return out;
}

double multiset_overlap(const std::map<std::string, int>& reference,
                        const std::map<std::string, int>& candidate, std::size_t& ref_total) {
    ref_total = 0;
    double matched = 0.0;
    for (const auto& [key, count] : reference) {
        ref_total += static_cast<std::size_t>(count);
        auto it = candidate.find(key);
        if (it != candidate.end()) matched += std::min(count, it->second);
    }
    return matched;
}

}  // namespace

ComponentScore syntax_match_detailed(const std::string& candidate, const std::string& reference,
                                     Language lang) {
    std::map<std::string, int> ref_trees = subtree_multiset(reference, lang);
    std::map<std::string, int> cand_trees = subtree_multiset(candidate, lang);
    std::size_t ref_total = 0;
    double matched = multiset_overlap(ref_trees, cand_trees, ref_total);
    if (ref_total == 0) return {1.0, false};
    return {matched / static_cast<double>(ref_total), true};
}

double syntax_match(const std::string& candidate, const std::string& reference, Language lang) {
    return syntax_match_detailed(candidate, reference, lang).score;
}

// ---------------------------------------------------------------------------
// Dataflow match

namespace {

/// Def-use events over normalized variable slots. A definition event records
/// the defined variable's slot and the slots it was computed from; a bare
/// use records the used slot. Multisets of these events are compared.
class DataflowExtractor {
  public:
    std::vector<std::string> run(const Node& root) {
        walk(root);
        return std::move(events_);
    }

  private:
    int slot_of(const std::string& name, bool define) {
        auto it = slots_.find(name);
        if (it != slots_.end()) return it->second;
        if (!define) return -1;
        int slot = static_cast<int>(slots_.size());
        slots_.emplace(name, slot);
        return slot;
    }

    void collect_uses(const Node& node, std::vector<int>& uses) {
        if (node.kind == NodeKind::Identifier) {
            int slot = slot_of(node.leaf_text, false);
            if (slot >= 0) uses.push_back(slot);
            return;
        }
        if (node.kind == NodeKind::SelectorExpr && node.children.size() == 2) {
            collect_uses(node.children[0], uses);  // field names are not variables
            return;
        }
        for (const Node& child : node.children) collect_uses(child, uses);
    }

    void emit_def(const std::string& name, const std::vector<int>& uses) {
        int slot = slot_of(name, true);
        std::string event = "d:" + std::to_string(slot) + ":";
        for (std::size_t i = 0; i < uses.size(); ++i) {
            if (i) event.push_back(',');
            event += std::to_string(uses[i]);
        }
        events_.push_back(std::move(event));
    }

    void emit_uses(const std::vector<int>& uses) {
        for (int slot : uses) events_.push_back("u:" + std::to_string(slot));
    }

    void walk(const Node& node) {
        switch (node.kind) {
            case NodeKind::FunctionDecl: {
                for (const Node& child : node.children) {
                    if (child.kind == NodeKind::ParamList || child.kind == NodeKind::Receiver) {
                        for (const Node& param : child.children) {
                            for (const Node& part : param.children)
                                if (part.kind == NodeKind::Name) emit_def(part.leaf_text, {});
                        }
                    }
                }
                for (const Node& child : node.children)
                    if (child.kind == NodeKind::Block) walk(child);
                return;
            }
            case NodeKind::DeclStmt: {
                std::vector<int> uses;
                for (const Node& child : node.children) {
                    if (child.kind == NodeKind::Name || child.kind == NodeKind::TypeRef ||
                        child.kind == NodeKind::KeywordLeaf || child.kind == NodeKind::OperatorLeaf)
                        continue;
                    collect_uses(child, uses);
                }
                for (const Node& child : node.children)
                    if (child.kind == NodeKind::Name) emit_def(child.leaf_text, uses);
                return;
            }
            case NodeKind::AssignStmt: {
                std::size_t op_idx = node.children.size();
                for (std::size_t i = 0; i < node.children.size(); ++i) {
                    if (node.children[i].kind == NodeKind::OperatorLeaf) {
                        op_idx = i;
                        break;
                    }
                }
                std::vector<int> rhs_uses;
                for (std::size_t i = op_idx + 1; i < node.children.size(); ++i)
                    collect_uses(node.children[i], rhs_uses);
                bool compound = op_idx < node.children.size() &&
                                node.children[op_idx].leaf_text != "=" &&
                                node.children[op_idx].leaf_text != ":=";
                std::vector<int> lhs_uses;
                for (std::size_t i = 0; i < op_idx; ++i) {
                    const Node& lhs = node.children[i];
                    if (lhs.kind == NodeKind::Identifier) {
                        if (compound) {
                            int slot = slot_of(lhs.leaf_text, false);
                            if (slot >= 0) lhs_uses.push_back(slot);
                        }
                    } else {
                        collect_uses(lhs, lhs_uses);  // a[i] = x, s.f = x: uses
                    }
                }
                std::vector<int> uses = lhs_uses;
                uses.insert(uses.end(), rhs_uses.begin(), rhs_uses.end());
                bool any_def = false;
                for (std::size_t i = 0; i < op_idx; ++i) {
                    if (node.children[i].kind == NodeKind::Identifier) {
                        emit_def(node.children[i].leaf_text, uses);
                        any_def = true;
                    }
                }
                if (!any_def) emit_uses(uses);
                return;
            }
            default:
                break;
        }
        if (node.kind == NodeKind::Identifier) {
            std::vector<int> uses;
            collect_uses(node, uses);
            emit_uses(uses);
            return;
        }
        if (node.kind == NodeKind::SelectorExpr) {
            std::vector<int> uses;
            collect_uses(node, uses);
            emit_uses(uses);
            return;
        }
        for (const Node& child : node.children) walk(child);
    }

    std::unordered_map<std::string, int> slots_;
    std::vector<std::string> events_;
};

std::map<std::string, int> dataflow_multiset(const std::string& code, Language lang) {
    syntax::SyntaxTree tree = syntax::parse_source(code, lang);
    DataflowExtractor extractor;
    std::map<std::string, int> out;
    for (std::string& event : extractor.run(tree.root)) ++out[std::move(event)];
    return out;
}

}  // namespace

ComponentScore dataflow_match_detailed(const std::string& candidate, const std::string& reference,
                                       Language lang) {
    std::map<std::string, int> ref_events = dataflow_multiset(reference, lang);
    std::map<std::string, int> cand_events = dataflow_multiset(candidate, lang);
    std::size_t ref_total = 0;
    double matched = multiset_overlap(ref_events, cand_events, ref_total);
    if (ref_total == 0) return {1.0, false};
    return {matched / static_cast<double>(ref_total), true};
}

double dataflow_match(const std::string& candidate, const std::string& reference, Language lang) {
    return dataflow_match_detailed(candidate, reference, lang).score;
}

// ---------------------------------------------------------------------------
// CodeBLEU & Hit Ratio

CodeBleuResult codebleu(const std::string& candidate, const std::string& reference, Language lang,
                        std::array<double, 4> weights, int max_n) {
    double weight_sum = weights[0] + weights[1] + weights[2] + weights[3];
    if (std::abs(weight_sum - 1.0) > 1e-9)
        throw Error("codebleu: weights must sum to 1");

    std::vector<std::string> cand_tokens = tokenize_code(candidate);
    std::vector<std::string> ref_tokens = tokenize_code(reference);
    if (ref_tokens.empty()) throw Error("codebleu: reference must be non-empty");

    static const std::set<std::string> go_keywords(syntax::keywords(Language::Go).begin(),
                                                   syntax::keywords(Language::Go).end());
    static const std::set<std::string> cpp_keywords(syntax::keywords(Language::Cpp).begin(),
                                                    syntax::keywords(Language::Cpp).end());
    const std::set<std::string>& kw = lang == Language::Go ? go_keywords : cpp_keywords;

    CodeBleuResult result;
    result.components.ngram = bleu(cand_tokens, ref_tokens, max_n);
    result.components.weighted_ngram = weighted_ngram_match(cand_tokens, ref_tokens, kw, max_n);
    ComponentScore syn = syntax_match_detailed(candidate, reference, lang);
    ComponentScore flow = dataflow_match_detailed(candidate, reference, lang);
    result.components.syntax = syn.score;
    result.components.dataflow = flow.score;
    result.syntax_dropped = !syn.has_signal;
    result.dataflow_dropped = !flow.has_signal;

    double num = weights[0] * result.components.ngram +
                 weights[1] * result.components.weighted_ngram;
    double den = weights[0] + weights[1];
    if (syn.has_signal) {
        num += weights[2] * syn.score;
        den += weights[2];
    }
    if (flow.has_signal) {
        num += weights[3] * flow.score;
        den += weights[3];
    }
    result.score = den > 0.0 ? num / den : 0.0;
    return result;
}

double hit_ratio(const std::vector<std::string>& predicted,
                 const std::vector<std::string>& reference) {
    if (predicted.empty()) return 0.0;
    std::map<std::string, int> ref_counts;
    for (const std::string& api : reference) ++ref_counts[api];
    std::size_t hits = 0;
    for (const std::string& api : predicted) {
        auto it = ref_counts.find(api);
        if (it != ref_counts.end() && it->second > 0) {
            --it->second;
            ++hits;
        }
    }
    return static_cast<double>(hits) / static_cast<double>(predicted.size());
}

// ---------------------------------------------------------------------------
// Corpus evaluation

EvalReport evaluate_corpus(const std::vector<EvalPair>& pairs, const EvalConfig& config) {
    EvalReport report;
    report.config = config;

    std::vector<const EvalPair*> ordered;
    ordered.reserve(pairs.size());
    for (const EvalPair& pair : pairs) ordered.push_back(&pair);
    std::stable_sort(ordered.begin(), ordered.end(),
                     [](const EvalPair* a, const EvalPair* b) { return a->id < b->id; });

    BleuStats pooled;
    Aggregate sums;
    for (const EvalPair* pair : ordered) {
        try {
            if (pair->reference.empty()) throw Error("empty reference");
            std::vector<std::string> cand_tokens = tokenize_code(pair->candidate);
            std::vector<std::string> ref_tokens = tokenize_code(pair->reference);
            if (ref_tokens.empty()) throw Error("reference has no tokens");

            SampleScore sample;
            sample.id = pair->id;
            sample.bleu = bleu(cand_tokens, ref_tokens, config.max_n);
            CodeBleuResult cb = codebleu(pair->candidate, pair->reference,
                                         pair->subject_language, config.weights, config.max_n);
            sample.codebleu = cb.score;
            sample.components = cb.components;
            sample.hit_ratio = hit_ratio(pair->predicted_apis, pair->reference_apis);

            if (config.corpus_bleu)
                pooled.accumulate(collect_bleu_stats(cand_tokens, ref_tokens, config.max_n));

            sums.bleu += sample.bleu;
            sums.codebleu += sample.codebleu;
            sums.components.ngram += sample.components.ngram;
            sums.components.weighted_ngram += sample.components.weighted_ngram;
            sums.components.syntax += sample.components.syntax;
            sums.components.dataflow += sample.components.dataflow;
            sums.hit_ratio += sample.hit_ratio;
            ++sums.count;
            report.per_sample.push_back(std::move(sample));
        } catch (const Error& e) {
            report.failures.push_back({pair->id, e.what()});
        }
    }

    if (sums.count > 0) {
        double n = static_cast<double>(sums.count);
        Aggregate agg = sums;
        agg.bleu /= n;
        agg.codebleu /= n;
        agg.components.ngram /= n;
        agg.components.weighted_ngram /= n;
        agg.components.syntax /= n;
        agg.components.dataflow /= n;
        agg.hit_ratio /= n;
        report.aggregate = agg;
        if (config.corpus_bleu) report.corpus_bleu = bleu_from_stats(pooled, config.max_n);
    }
    return report;
}

namespace {

json components_to_json(const CodeBleuComponents& components) {
    return json{{"ngram", components.ngram},
                {"weighted_ngram", components.weighted_ngram},
                {"syntax", components.syntax},
                {"dataflow", components.dataflow}};
}

}  // namespace

std::string report_to_json(const EvalReport& report) {
    json doc;
    doc["config"] = {{"weights", report.config.weights},
                     {"max_n", report.config.max_n},
                     {"corpus_bleu", report.config.corpus_bleu},
                     {"subject_language", to_string(report.config.subject_language)}};
    json samples = json::array();
    for (const SampleScore& sample : report.per_sample) {
        samples.push_back({{"id", sample.id},
                           {"bleu", sample.bleu},
                           {"codebleu", sample.codebleu},
                           {"components", components_to_json(sample.components)},
                           {"hit_ratio", sample.hit_ratio}});
    }
    doc["per_sample"] = std::move(samples);
    if (report.aggregate) {
        doc["aggregate"] = {{"bleu", report.aggregate->bleu},
                            {"codebleu", report.aggregate->codebleu},
                            {"components", components_to_json(report.aggregate->components)},
                            {"hit_ratio", report.aggregate->hit_ratio},
                            {"count", report.aggregate->count}};
        if (report.corpus_bleu) doc["aggregate"]["corpus_bleu"] = *report.corpus_bleu;
    }
    json failures = json::array();
    for (const EvalFailure& failure : report.failures)
        failures.push_back({{"id", failure.id}, {"message", failure.message}});
    doc["failures"] = std::move(failures);
    return doc.dump(2) + "\n";
}

void save_report(const EvalReport& report, const std::string& path) {
    util::write_file(path, report_to_json(report));
}

}  // namespace domforge::metrics
