#include "domforge/generation.hpp"

#include <algorithm>
#include <chrono>
#include <map>
#include <set>
#include <thread>

#include "domforge/metrics.hpp"
#include "domforge/prompts.hpp"
#include "domforge/util.hpp"
#include "httplib.h"
#include "json.hpp"

using nlohmann::json;

namespace domforge::generation {

std::string prompt_hash(std::string_view prompt) {
    return util::sha256_hex(prompt);
}

// ---------------------------------------------------------------------------
// Retrieval inquirer

namespace {

bool ident_shaped(const std::string& token) {
    if (token.empty()) return false;
    unsigned char first = static_cast<unsigned char>(token[0]);
    return std::isalpha(first) || first == '_' || first >= 0x80;
}

std::set<std::string> identifier_tokens(const std::string& signature) {
    std::set<std::string> out;
    for (std::string& token : metrics::tokenize_code(signature))
        if (ident_shaped(token)) out.insert(std::move(token));
    return out;
}

double jaccard(const std::set<std::string>& a, const std::set<std::string>& b) {
    if (a.empty() && b.empty()) return 0.0;
    std::size_t inter = 0;
    for (const std::string& token : a)
        if (b.count(token)) ++inter;
    std::size_t uni = a.size() + b.size() - inter;
    return uni == 0 ? 0.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

class RetrievalInquirer : public ApiInquirer {
  public:
    explicit RetrievalInquirer(const std::vector<corpus::FunctionRecord>& records) {
        for (const corpus::FunctionRecord& rec : records) {
            Entry entry;
            entry.id = rec.id;
            entry.tokens = identifier_tokens(rec.signature);
            for (const syntax::ApiCall& call : rec.api_calls)
                entry.apis.push_back(call.qualified_name);
            entries_.push_back(std::move(entry));
        }
    }

    std::vector<std::string> recommend(const std::string& signature,
                                       const std::vector<std::string>& history) override {
        if (entries_.empty()) return {};
        std::set<std::string> query = identifier_tokens(signature);
        const Entry* best = nullptr;
        double best_sim = -1.0;
        for (const Entry& entry : entries_) {
            double sim = jaccard(query, entry.tokens);
            if (sim > best_sim || (sim == best_sim && best && entry.id < best->id)) {
                best_sim = sim;
                best = &entry;
            }
        }
        if (!best) return {};
        const std::vector<std::string>& seq = best->apis;
        // longest sequence prefix equal to the history's tail
        std::size_t max_k = std::min(seq.size(), history.size());
        std::size_t match = 0;
        for (std::size_t k = max_k; k > 0; --k) {
            bool ok = true;
            for (std::size_t i = 0; i < k; ++i) {
                if (seq[i] != history[history.size() - k + i]) {
                    ok = false;
                    break;
                }
            }
            if (ok) {
                match = k;
                break;
            }
        }
        return std::vector<std::string>(seq.begin() + static_cast<std::ptrdiff_t>(match),
                                        seq.end());
    }

  private:
    struct Entry {
        std::string id;
        std::set<std::string> tokens;
        std::vector<std::string> apis;
    };
    std::vector<Entry> entries_;
};

}  // namespace

std::unique_ptr<ApiInquirer> retrieval_inquirer_build(
    const std::vector<corpus::FunctionRecord>& records) {
    return std::make_unique<RetrievalInquirer>(records);
}

// ---------------------------------------------------------------------------
// Backends

namespace {

std::string apply_stops(std::string text, const std::vector<std::string>& stops) {
    std::size_t cut = std::string::npos;
    for (const std::string& stop : stops) {
        if (stop.empty()) continue;
        std::size_t at = text.find(stop);
        if (at != std::string::npos && at < cut) cut = at;
    }
    if (cut != std::string::npos) text.resize(cut);
    return text;
}

class MockBackend : public CompletionBackend {
  public:
    explicit MockBackend(const std::string& path) : path_(path) {
        json doc;
        try {
            doc = json::parse(util::read_file(path));
        } catch (const json::exception& e) {
            throw Error("mock backend " + path + ": " + e.what());
        }
        for (auto it = doc.begin(); it != doc.end(); ++it)
            recordings_[it.key()] = it.value().get<std::string>();
    }

    std::string complete(const std::string& prompt, const CompletionParams& params) override {
        auto it = recordings_.find(prompt_hash(prompt));
        if (it == recordings_.end())
            throw Error("mock backend " + path_ + ": no recording for prompt hash " +
                        prompt_hash(prompt));
        return apply_stops(it->second, params.stop);
    }

  private:
    std::string path_;
    std::map<std::string, std::string> recordings_;
};

class RemoteBackend : public CompletionBackend {
  public:
    RemoteBackend(std::string url, std::string auth, RemoteStyle style, RetryOptions retry)
        : style_(style), retry_(retry), auth_(std::move(auth)) {
        std::size_t scheme = url.find("://");
        std::size_t path_at = scheme == std::string::npos ? url.find('/')
                                                          : url.find('/', scheme + 3);
        if (path_at == std::string::npos) {
            base_ = std::move(url);
            path_ = "/";
        } else {
            base_ = url.substr(0, path_at);
            path_ = url.substr(path_at);
        }
    }

    std::string complete(const std::string& prompt, const CompletionParams& params) override {
        json body;
        if (style_ == RemoteStyle::Completion) {
            body = {{"prompt", prompt},
                    {"max_tokens", params.max_new_tokens},
                    {"stop", params.stop},
                    {"temperature", params.temperature}};
        } else {
            body = {{"messages", json::array({{{"role", "user"}, {"content", prompt}}})},
                    {"max_tokens", params.max_new_tokens},
                    {"stop", params.stop},
                    {"temperature", params.temperature}};
        }
        std::string payload = body.dump();

        int status = 0;
        std::string response_body;
        for (int attempt = 0; attempt < retry_.attempts; ++attempt) {
            if (attempt > 0) {
                std::this_thread::sleep_for(
                    std::chrono::milliseconds(retry_.base_delay_ms << (attempt - 1)));
            }
            httplib::Client client(base_);
            client.set_read_timeout(60, 0);
            httplib::Headers headers;
            if (!auth_.empty()) headers.emplace("Authorization", "Bearer " + auth_);
            auto res = client.Post(path_, headers, payload, "application/json");
            if (!res) {
                status = 0;
                response_body = "connection failed";
                continue;
            }
            status = res->status;
            response_body = res->body;
            if (status >= 200 && status < 300) return parse_response(response_body);
            if (status < 500) break;  // client errors are not transient
        }
        throw Error("backend " + base_ + path_ + ": status " + std::to_string(status) + ": " +
                    response_body.substr(0, 200));
    }

  private:
    std::string parse_response(const std::string& body) const {
        json doc;
        try {
            doc = json::parse(body);
        } catch (const json::exception& e) {
            throw Error("backend response: " + std::string(e.what()));
        }
        if (style_ == RemoteStyle::Completion) {
            if (doc.contains("text")) return doc["text"].get<std::string>();
        } else if (doc.contains("choices") && !doc["choices"].empty()) {
            const json& choice = doc["choices"][0];
            if (choice.contains("message")) return choice["message"]["content"].get<std::string>();
            if (choice.contains("text")) return choice["text"].get<std::string>();
        }
        throw Error("backend response: missing completion text");
    }

    RemoteStyle style_;
    RetryOptions retry_;
    std::string auth_;
    std::string base_;
    std::string path_;
};

}  // namespace

std::unique_ptr<CompletionBackend> mock_backend(const std::string& recordings_path) {
    return std::make_unique<MockBackend>(recordings_path);
}

std::unique_ptr<CompletionBackend> remote_backend(const std::string& endpoint_url,
                                                  const std::string& auth_token, RemoteStyle style,
                                                  RetryOptions retry) {
    return std::make_unique<RemoteBackend>(endpoint_url, auth_token, style, retry);
}

// ---------------------------------------------------------------------------
// Strategies

namespace {

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) out += sep;
        out += parts[i];
    }
    return out;
}

/// Cuts `text` to its first `max_tokens` tokens; false when nothing was cut.
bool budget_cut(std::string& text, std::size_t max_tokens) {
    std::vector<ByteSpan> spans = metrics::token_spans(text);
    if (spans.size() <= max_tokens) return false;
    text.resize(max_tokens == 0 ? 0 : spans[max_tokens - 1].end);
    return true;
}

void finish_single_shot(GenerationResult& result, std::string prompt, std::string raw,
                        const CompletionParams& params, Language lang) {
    TruncateResult trunc = truncate_to_function(raw, lang);
    std::string code = trunc.balanced ? std::move(trunc.text) : std::move(raw);
    bool cut = budget_cut(code, static_cast<std::size_t>(params.max_new_tokens));
    result.code = std::move(code);
    result.prompt_used = std::move(prompt);
    result.truncated = !trunc.balanced || cut;
    result.token_counts.generated = metrics::token_spans(result.code).size();
    result.token_counts.knowledge_state = 0;
}

/// Brace balance over code tokens; string literals never count.
void update_brace_balance(std::string_view chunk, bool& opened, long& depth) {
    std::vector<ByteSpan> spans = metrics::token_spans(chunk);
    for (const ByteSpan& span : spans) {
        if (span.size() != 1) continue;
        char ch = chunk[span.begin];
        if (ch == '{') {
            opened = true;
            ++depth;
        } else if (ch == '}') {
            --depth;
        }
    }
}

long pair_imbalance(std::string_view chunk, char open, char close) {
    long depth = 0;
    std::vector<ByteSpan> spans = metrics::token_spans(chunk);
    for (const ByteSpan& span : spans) {
        if (span.size() != 1) continue;
        if (chunk[span.begin] == open) ++depth;
        if (chunk[span.begin] == close) --depth;
    }
    return depth;
}

/// One statement-sized chunk: ask with stop at newline, continue while the
/// parentheses/brackets say we stopped mid-statement.
std::string complete_statement(CompletionBackend& backend, const std::string& prompt,
                               const CompletionParams& params) {
    CompletionParams step_params = params;
    step_params.stop = {"\n"};
    std::string chunk = backend.complete(prompt, step_params);
    for (int retry = 0; retry < 4; ++retry) {
        if (chunk.empty()) break;
        if (pair_imbalance(chunk, '(', ')') <= 0 && pair_imbalance(chunk, '[', ']') <= 0) break;
        std::string more = backend.complete(prompt + chunk + "\n", step_params);
        chunk += "\n" + more;
        if (more.empty()) break;
    }
    return chunk;
}

}  // namespace

TruncateResult truncate_to_function(std::string_view text, Language lang) {
    syntax::LexOutput lexed = syntax::lex(text, lang);
    long depth = 0;
    bool opened = false;
    for (const syntax::Token& tok : lexed.tokens) {
        if (tok.kind != syntax::TokKind::Punct || tok.end - tok.begin != 1) continue;
        char ch = text[tok.begin];
        if (ch == '{') {
            opened = true;
            ++depth;
        } else if (ch == '}') {
            --depth;
            if (opened && depth == 0) {
                return {std::string(text.substr(0, tok.end)), true};
            }
        }
    }
    return {std::string(text), false};
}

GenerationResult generate_plain(const std::string& signature, CompletionBackend& backend,
                                const CompletionParams& params, Language lang) {
    prompts::PromptSpec spec;
    spec.kind = prompts::PromptKind::Signature;
    spec.signature = signature;
    std::string prompt = prompts::render_prompt(spec);
    std::string raw = backend.complete(prompt, params);
    GenerationResult result;
    finish_single_shot(result, std::move(prompt), std::move(raw), params, lang);
    return result;
}

GenerationResult generate_kg(const std::string& signature, ApiInquirer& inquirer,
                             CompletionBackend& backend, const CompletionParams& params,
                             Language lang) {
    std::vector<std::string> recommended = inquirer.recommend(signature, {});
    if (recommended.empty()) {
        GenerationResult result = generate_plain(signature, backend, params, lang);
        result.degraded = true;
        return result;
    }
    prompts::PromptSpec spec;
    spec.kind = prompts::PromptKind::Signature;
    spec.signature = signature;
    std::string prompt = "// [API] " + join(recommended, ", ") + "\n" + prompts::render_prompt(spec);
    std::string raw = backend.complete(prompt, params);
    GenerationResult result;
    result.recommended_apis = std::move(recommended);
    finish_single_shot(result, std::move(prompt), std::move(raw), params, lang);
    return result;
}

GenerationResult generate_cot_pt(const std::string& signature, ApiInquirer& inquirer,
                                 const knowledge::KnowledgeBase& kb, CompletionBackend& backend,
                                 const CompletionParams& params, Language lang) {
    constexpr int kMaxSteps = 32;
    GenerationResult result;
    std::vector<GenerationStep> steps;
    std::vector<std::string> history;
    std::string transcript;
    std::string last_prompt;
    long depth = 0;
    bool opened = false;
    std::size_t generated_tokens = 0;
    std::size_t knowledge_tokens = 0;
    std::size_t budget = static_cast<std::size_t>(params.max_new_tokens);

    for (int iter = 0; iter < kMaxSteps; ++iter) {
        std::vector<std::string> recs = inquirer.recommend(signature, history);
        if (recs.empty()) {
            if (iter == 0) {
                GenerationResult plain = generate_plain(signature, backend, params, lang);
                plain.degraded = true;
                return plain;
            }
            break;
        }
        std::string api = recs.front();

        cot::KnowledgeState state;
        state.api_state = {api};
        if (const knowledge::KnowledgeEntry* entry = kb.lookup(api))
            state.task_state = cot::task_text(*entry);
        std::string k_lines = cot::render_knowledge_lines(state.api_state, &kb, "");

        last_prompt = signature + "\n" + transcript + k_lines;
        std::string chunk = complete_statement(backend, last_prompt, params);

        std::size_t remaining = budget > generated_tokens ? budget - generated_tokens : 0;
        bool budget_hit = budget_cut(chunk, remaining);

        transcript += k_lines;
        transcript += chunk;
        if (chunk.empty() || chunk.back() != '\n') transcript.push_back('\n');

        generated_tokens += metrics::token_spans(chunk).size();
        knowledge_tokens += metrics::token_spans(k_lines).size();
        update_brace_balance(chunk, opened, depth);
        steps.push_back({std::move(state), std::move(chunk)});
        history.push_back(std::move(api));

        if (budget_hit || generated_tokens >= budget) {
            result.truncated = true;
            break;
        }
        if (opened && depth <= 0) break;
    }

    result.code = cot::strip_states(transcript);
    TruncateResult trunc = truncate_to_function(result.code, lang);
    if (trunc.balanced) result.code = std::move(trunc.text);
    else if (opened) result.truncated = true;
    result.prompt_used = std::move(last_prompt);
    result.steps = std::move(steps);
    result.transcript = std::move(transcript);
    result.token_counts.generated = generated_tokens;
    result.token_counts.knowledge_state = knowledge_tokens;
    result.recommended_apis = std::move(history);
    return result;
}

}  // namespace domforge::generation
