#include "domforge/knowledge.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <set>

#include "domforge/syntax.hpp"
#include "domforge/util.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace domforge::knowledge {

namespace {

std::string iso_build_time() {
    long long epoch = 0;
    if (const char* env = std::getenv("SOURCE_DATE_EPOCH")) epoch = std::atoll(env);
    std::time_t t = static_cast<std::time_t>(epoch);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string strip_comment_markers(std::string_view comment) {
    if (comment.rfind("//", 0) == 0) {
        std::string_view body = comment.substr(2);
        while (!body.empty() && body.front() == '/') body.remove_prefix(1);
        if (!body.empty() && body.front() == ' ') body.remove_prefix(1);
        return std::string(body);
    }
    if (comment.rfind("/*", 0) == 0) {
        std::string_view body = comment.substr(2);
        while (!body.empty() && body.front() == '*') body.remove_prefix(1);
        if (body.size() >= 2 && body.substr(body.size() - 2) == "*/") body.remove_suffix(2);
        std::string joined;
        for (std::string_view line : util::split_lines_keep_ends(body)) {
            std::string_view trimmed = line;
            while (!trimmed.empty() && (trimmed.front() == ' ' || trimmed.front() == '\t'))
                trimmed.remove_prefix(1);
            if (!trimmed.empty() && trimmed.front() == '*') {
                trimmed.remove_prefix(1);
                if (!trimmed.empty() && trimmed.front() == ' ') trimmed.remove_prefix(1);
            }
            if (!joined.empty()) joined.push_back(' ');
            joined += std::string(trimmed);
        }
        return joined;
    }
    return std::string(comment);
}

std::uint32_t newlines_in(std::string_view text, std::size_t begin, std::size_t end) {
    std::uint32_t n = 0;
    for (std::size_t i = begin; i < end && i < text.size(); ++i)
        if (text[i] == '\n') ++n;
    return n;
}

struct CommentInfo {
    std::uint32_t start_line;
    std::uint32_t end_line;
    std::string text;  // markers stripped
};

/// Comments that share no line with code (trailing comments documenting the
/// line they sit on are not doc comments for the next declaration).
std::vector<CommentInfo> standalone_comments(std::string_view text,
                                             const std::vector<syntax::Token>& code,
                                             const std::vector<syntax::Token>& trivia) {
    std::set<std::uint32_t> code_lines;
    for (const syntax::Token& tok : code) {
        std::uint32_t span = newlines_in(text, tok.begin, tok.end);
        for (std::uint32_t l = tok.line; l <= tok.line + span; ++l) code_lines.insert(l);
    }
    std::vector<CommentInfo> out;
    for (const syntax::Token& tok : trivia) {
        if (tok.kind != syntax::TokKind::Comment) continue;
        std::uint32_t span = newlines_in(text, tok.begin, tok.end);
        bool shares = false;
        for (std::uint32_t l = tok.line; l <= tok.line + span; ++l)
            if (code_lines.count(l)) shares = true;
        if (shares) continue;
        out.push_back({tok.line, tok.line + span,
                       strip_comment_markers(text.substr(tok.begin, tok.end - tok.begin))});
    }
    return out;
}

/// Joined text of the comment run ending directly above `decl_line`.
std::string doc_text_above(const std::vector<CommentInfo>& comments, std::uint32_t decl_line) {
    if (decl_line == 0) return {};
    std::vector<const CommentInfo*> run;
    std::int64_t want = static_cast<std::int64_t>(decl_line) - 1;
    for (auto it = comments.rbegin(); it != comments.rend(); ++it) {
        if (static_cast<std::int64_t>(it->end_line) > want) continue;
        if (static_cast<std::int64_t>(it->end_line) < want) break;
        run.push_back(&*it);
        want = static_cast<std::int64_t>(it->start_line) - 1;
    }
    std::reverse(run.begin(), run.end());
    std::string out;
    for (const CommentInfo* part : run) {
        if (!out.empty()) out.push_back(' ');
        out += part->text;
    }
    return util::collapse_whitespace(out);
}

std::uint32_t line_of(const std::vector<std::size_t>& line_starts, std::size_t offset) {
    auto it = std::upper_bound(line_starts.begin(), line_starts.end(), offset);
    return static_cast<std::uint32_t>(it - line_starts.begin() - 1);
}

std::vector<std::size_t> compute_line_starts(std::string_view text) {
    std::vector<std::size_t> starts{0};
    for (std::size_t i = 0; i < text.size(); ++i)
        if (text[i] == '\n') starts.push_back(i + 1);
    return starts;
}

std::string type_base_name(std::string_view type_text) {
    std::string stripped;
    for (char ch : type_text)
        if (ch != '*' && ch != '&' && ch != ' ') stripped.push_back(ch);
    std::size_t dot = stripped.find_last_of('.');
    std::size_t colons = stripped.rfind("::");
    std::size_t cut = std::string::npos;
    if (dot != std::string::npos) cut = dot + 1;
    if (colons != std::string::npos && (cut == std::string::npos || colons + 2 > cut))
        cut = colons + 2;
    return cut == std::string::npos ? stripped : stripped.substr(cut);
}

bool exported_go_name(std::string_view name) {
    return !name.empty() && std::isupper(static_cast<unsigned char>(name[0]));
}

std::string finalize_docstring(std::string text, bool first_sentence_only) {
    if (!first_sentence_only) return text;
    std::string sentence(util::first_sentence(text));
    if (!sentence.empty() && sentence.back() == '.') sentence.pop_back();
    return sentence;
}

void add_entry(KbBuildResult& result, std::string api_name, std::string docstring) {
    KnowledgeEntry entry;
    entry.api_name = api_name;
    entry.docstring = std::move(docstring);
    entry.source = KnowledgeSource::LibrarySource;
    result.kb.entries.emplace(std::move(api_name), std::move(entry));  // first wins
}

void build_from_go(const std::string& text, const LibrarySpec& lib,
                   const KbBuildOptions& options, KbBuildResult& result) {
    syntax::SyntaxTree tree = syntax::parse_source(text, Language::Go);
    std::vector<CommentInfo> comments = standalone_comments(tree.text, tree.tokens, tree.trivia);
    std::vector<std::size_t> line_starts = compute_line_starts(tree.text);

    for (const syntax::FunctionSpan& fn : syntax::extract_functions(tree)) {
        if (!exported_go_name(fn.name)) continue;
        ++result.functions_seen;
        std::uint32_t decl_line = line_of(line_starts, fn.signature_span.begin);
        std::string raw = doc_text_above(comments, decl_line);
        std::string doc = normalize_docstring(raw, fn.name);
        if (doc.empty()) {
            ++result.skipped_no_doc;
            continue;
        }
        std::string api_name = lib.canonical_prefix();
        if (fn.receiver && !fn.receiver->type_text.empty())
            api_name += "." + type_base_name(fn.receiver->type_text);
        api_name += "." + fn.name;
        add_entry(result, std::move(api_name), finalize_docstring(std::move(doc), options.first_sentence_only));
    }
}

// ---------------------------------------------------------------------------
// C++ header/source scanner. Tracks namespace/class scope and access
// sections so in-class declarations (where header docstrings live) are
// reachable without full parsing.

struct CppScope {
    enum Kind { Namespace, Class, Opaque } kind;
    std::string name;
    bool is_public = true;
};

void build_from_cpp(const std::string& text, const LibrarySpec& lib,
                    const KbBuildOptions& options, KbBuildResult& result) {
    syntax::LexOutput lexed = syntax::lex(text, Language::Cpp);
    const std::vector<syntax::Token>& toks = lexed.tokens;
    std::vector<CommentInfo> comments = standalone_comments(text, toks, lexed.trivia);

    auto tok_text = [&](std::size_t i) {
        return std::string_view(text).substr(toks[i].begin, toks[i].end - toks[i].begin);
    };

    std::vector<CppScope> scopes;
    std::size_t stmt_start = 0;

    auto inside_opaque = [&] {
        for (const CppScope& scope : scopes)
            if (scope.kind == CppScope::Opaque) return true;
        return false;
    };
    auto in_private_section = [&] {
        return !scopes.empty() && scopes.back().kind == CppScope::Class &&
               !scopes.back().is_public;
    };

    for (std::size_t i = 0; i < toks.size(); ++i) {
        std::string_view t = tok_text(i);
        if (toks[i].kind != syntax::TokKind::Punct) continue;

        if (t == "{") {
            CppScope scope{CppScope::Opaque, "", true};
            if (stmt_start < i) {
                std::string_view head = tok_text(stmt_start);
                if (head == "namespace" && stmt_start + 1 < i &&
                    toks[stmt_start + 1].kind == syntax::TokKind::Ident) {
                    scope = {CppScope::Namespace, std::string(tok_text(stmt_start + 1)), true};
                } else if ((head == "class" || head == "struct") && stmt_start + 1 < i &&
                           toks[stmt_start + 1].kind == syntax::TokKind::Ident) {
                    scope = {CppScope::Class, std::string(tok_text(stmt_start + 1)),
                             head == "struct"};
                }
            }
            scopes.push_back(std::move(scope));
            stmt_start = i + 1;
            continue;
        }
        if (t == "}") {
            if (!scopes.empty()) scopes.pop_back();
            stmt_start = i + 1;
            continue;
        }
        if (t == ";") {
            stmt_start = i + 1;
            continue;
        }
        if (t == ":" && i > 0 &&
            (tok_text(i - 1) == "public" || tok_text(i - 1) == "private" ||
             tok_text(i - 1) == "protected")) {
            if (!scopes.empty() && scopes.back().kind == CppScope::Class)
                scopes.back().is_public = tok_text(i - 1) == "public";
            stmt_start = i + 1;
            continue;
        }
        if (t != "(") continue;

        // candidate declaration: IDENT '(' at namespace/class scope
        if (inside_opaque()) continue;
        if (i == 0 || toks[i - 1].kind != syntax::TokKind::Ident) continue;
        std::string_view name = tok_text(i - 1);
        if (syntax::is_keyword(name, Language::Cpp)) continue;
        if (i >= 2 && (tok_text(i - 2) == "~" || tok_text(i - 2) == "operator")) continue;

        // matching ')'
        std::size_t depth = 1;
        std::size_t j = i + 1;
        while (j < toks.size() && depth > 0) {
            std::string_view u = tok_text(j);
            if (u == "(") ++depth;
            else if (u == ")") --depth;
            ++j;
        }
        if (depth != 0) continue;
        // qualifiers until ';' (declaration) or '{' (definition)
        bool is_function = false;
        std::size_t k = j;
        while (k < toks.size()) {
            std::string_view u = tok_text(k);
            if (u == ";" || u == "{") {
                is_function = true;
                break;
            }
            if (u == "const" || u == "noexcept" || u == "override" || u == "final" ||
                u == "=" || u == "0" || u == "default" || u == "delete" || u == "->" ||
                u == "::" || u == "*" || u == "&" || u == "&&" || u == "<" || u == ">" ||
                toks[k].kind == syntax::TokKind::Ident) {
                ++k;
                continue;
            }
            if (u == "(") {  // noexcept(...)
                std::size_t d2 = 1;
                ++k;
                while (k < toks.size() && d2 > 0) {
                    if (tok_text(k) == "(") ++d2;
                    else if (tok_text(k) == ")") --d2;
                    ++k;
                }
                continue;
            }
            break;
        }
        if (!is_function) continue;
        if (in_private_section()) continue;

        // qualified path: IDENT (:: IDENT)* ending at the name
        std::vector<std::string> path{std::string(name)};
        std::size_t back = i - 1;
        while (back >= 2 && tok_text(back - 1) == "::" &&
               toks[back - 2].kind == syntax::TokKind::Ident) {
            path.insert(path.begin(), std::string(tok_text(back - 2)));
            back -= 2;
        }
        // constructors document the type, not a callable API
        std::string enclosing_class;
        for (auto it = scopes.rbegin(); it != scopes.rend(); ++it) {
            if (it->kind == CppScope::Class) {
                enclosing_class = it->name;
                break;
            }
        }
        if (!enclosing_class.empty() && path.back() == enclosing_class) continue;
        if (path.size() >= 2 && path[path.size() - 2] == path.back()) continue;

        ++result.functions_seen;
        std::uint32_t decl_line = toks[stmt_start <= i ? stmt_start : i].line;
        std::string raw = doc_text_above(comments, decl_line);
        std::string doc = normalize_docstring(raw, path.back());
        if (doc.empty()) {
            ++result.skipped_no_doc;
            continue;
        }

        std::vector<std::string> parts;
        for (const CppScope& scope : scopes)
            if (scope.kind != CppScope::Opaque) parts.push_back(scope.name);
        parts.insert(parts.end(), path.begin(), path.end());
        bool prefixed = false;
        for (const std::string& prefix : lib.qualifier_prefixes)
            if (!parts.empty() && parts.front() == prefix) prefixed = true;
        std::string api_name = prefixed ? "" : lib.canonical_prefix();
        for (const std::string& part : parts) {
            if (!api_name.empty()) api_name.push_back('.');
            api_name += part;
        }
        add_entry(result, std::move(api_name),
                  finalize_docstring(std::move(doc), options.first_sentence_only));
    }
}

bool kb_wants_extension(const fs::path& path, Language lang) {
    std::string ext = path.extension().string();
    if (lang == Language::Go) return ext == ".go";
    return ext == ".cpp" || ext == ".cc" || ext == ".cxx" || ext == ".h" || ext == ".hpp";
}

}  // namespace

std::string normalize_docstring(std::string_view raw_comment, std::string_view func_name) {
    std::string text = util::collapse_whitespace(raw_comment);
    if (text.size() > func_name.size() && text.compare(0, func_name.size(), func_name) == 0 &&
        text[func_name.size()] == ' ') {
        text = text.substr(func_name.size() + 1);
    }
    text = util::upper_first(std::move(text));
    if (!text.empty() && text.back() == '.') text.pop_back();
    return text;
}

const KnowledgeEntry* KnowledgeBase::lookup(std::string_view api_name) const {
    auto it = entries.find(std::string(api_name));
    return it == entries.end() ? nullptr : &it->second;
}

std::string prompt_docstring(const KnowledgeEntry& entry) {
    constexpr std::size_t kCap = 400;
    std::string_view text = entry.docstring;
    if (text.size() <= kCap) return std::string(text);
    std::string_view head = text.substr(0, kCap);
    std::size_t cut = head.rfind(". ");
    if (cut != std::string_view::npos) return std::string(head.substr(0, cut));
    std::string_view sentence = util::first_sentence(text);
    return std::string(sentence.substr(0, std::min(sentence.size(), kCap)));
}

KbBuildResult build_kb_from_library_source(const std::vector<std::string>& paths,
                                           const LibrarySpec& lib,
                                           const KbBuildOptions& options) {
    lib.validate();
    std::vector<std::string> files;
    for (const std::string& path : paths) {
        std::error_code ec;
        if (fs::is_directory(path, ec)) {
            for (auto it = fs::recursive_directory_iterator(
                     path, fs::directory_options::skip_permission_denied, ec);
                 it != fs::recursive_directory_iterator(); it.increment(ec)) {
                if (ec) break;
                if (it->is_regular_file(ec) && kb_wants_extension(it->path(), lib.subject_language))
                    files.push_back(it->path().string());
            }
        } else if (fs::is_regular_file(path, ec)) {
            files.push_back(path);
        } else {
            throw Error("kb build: unreadable path: " + path);
        }
    }
    std::sort(files.begin(), files.end());

    KbBuildResult result;
    result.kb.library = lib.name;
    result.kb.built_at = iso_build_time();
    for (const std::string& file : files) {
        std::string text = util::read_file(file);
        if (lib.subject_language == Language::Go)
            build_from_go(text, lib, options, result);
        else
            build_from_cpp(text, lib, options, result);
    }
    return result;
}

MergeResult merge(const KnowledgeBase& a, const KnowledgeBase& b) {
    if (a.library != b.library)
        throw Error("merge: library mismatch: \"" + a.library + "\" vs \"" + b.library + "\"");
    MergeResult result;
    result.kb = a;
    for (const auto& [key, entry] : b.entries) {
        auto [it, inserted] = result.kb.entries.emplace(key, entry);
        if (!inserted) ++result.conflicts;
    }
    return result;
}

void save_kb(const KnowledgeBase& kb, const std::string& path) {
    json entries = json::array();
    for (const auto& [key, entry] : kb.entries) {
        entries.push_back({{"api_name", entry.api_name},
                           {"docstring", entry.docstring},
                           {"source", "library_source"}});
    }
    json doc{{"library", kb.library}, {"built_at", kb.built_at}, {"entries", std::move(entries)}};
    util::write_file(path, doc.dump(2) + "\n");
}

KnowledgeBase load_kb(const std::string& path) {
    json doc;
    try {
        doc = json::parse(util::read_file(path));
    } catch (const json::exception& e) {
        throw Error("kb " + path + ": " + e.what());
    }
    KnowledgeBase kb;
    kb.library = doc.at("library").get<std::string>();
    kb.built_at = doc.value("built_at", "");
    for (const json& entry_obj : doc.at("entries")) {
        KnowledgeEntry entry;
        entry.api_name = entry_obj.at("api_name").get<std::string>();
        entry.docstring = entry_obj.at("docstring").get<std::string>();
        entry.source = KnowledgeSource::LibrarySource;
        kb.entries[entry.api_name] = std::move(entry);
    }
    return kb;
}

}  // namespace domforge::knowledge
