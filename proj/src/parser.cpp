#include <algorithm>
#include <cassert>
#include <set>

#include "domforge/syntax.hpp"

namespace domforge::syntax {

const std::vector<std::string>& keywords(Language lang) {
    static const std::vector<std::string> go = {
        "break",  "case", "chan", "const",    "continue", "default", "defer",
        "else",   "fallthrough", "for", "func", "go", "goto", "if", "import",
        "interface", "map", "package", "range", "return", "select", "struct",
        "switch", "type", "var"};
    static const std::vector<std::string> cpp = {
        "alignas", "alignof", "and", "and_eq", "asm", "auto", "bitand", "bitor",
        "bool", "break", "case", "catch", "char", "char16_t", "char32_t",
        "char8_t", "class", "co_await", "co_return", "co_yield", "compl",
        "concept", "const", "const_cast", "consteval", "constexpr", "constinit",
        "continue", "decltype", "default", "delete", "do", "double",
        "dynamic_cast", "else", "enum", "explicit", "export", "extern", "false",
        "float", "for", "friend", "goto", "if", "inline", "int", "long",
        "mutable", "namespace", "new", "noexcept", "not", "not_eq", "nullptr",
        "operator", "or", "or_eq", "private", "protected", "public", "register",
        "reinterpret_cast", "requires", "return", "short", "signed", "sizeof",
        "static", "static_assert", "static_cast", "struct", "switch", "template",
        "this", "thread_local", "throw", "true", "try", "typedef", "typeid",
        "typename", "union", "unsigned", "using", "virtual", "void", "volatile",
        "wchar_t", "while", "xor", "xor_eq"};
    return lang == Language::Go ? go : cpp;
}

bool is_keyword(std::string_view word, Language lang) {
    static const std::set<std::string, std::less<>> go_set(keywords(Language::Go).begin(),
                                                           keywords(Language::Go).end());
    static const std::set<std::string, std::less<>> cpp_set(keywords(Language::Cpp).begin(),
                                                            keywords(Language::Cpp).end());
    return lang == Language::Go ? go_set.count(word) > 0 : cpp_set.count(word) > 0;
}

std::string_view node_kind_name(NodeKind kind) {
    switch (kind) {
        case NodeKind::SourceFile: return "source_file";
        case NodeKind::FunctionDecl: return "function_decl";
        case NodeKind::Receiver: return "receiver";
        case NodeKind::Name: return "name";
        case NodeKind::ParamList: return "param_list";
        case NodeKind::Param: return "param";
        case NodeKind::TypeRef: return "type_ref";
        case NodeKind::ResultList: return "result_list";
        case NodeKind::Block: return "block";
        case NodeKind::ExprStmt: return "expr_stmt";
        case NodeKind::AssignStmt: return "assign_stmt";
        case NodeKind::DeclStmt: return "decl_stmt";
        case NodeKind::ReturnStmt: return "return_stmt";
        case NodeKind::IfStmt: return "if_stmt";
        case NodeKind::ForStmt: return "for_stmt";
        case NodeKind::WhileStmt: return "while_stmt";
        case NodeKind::DoStmt: return "do_stmt";
        case NodeKind::SwitchStmt: return "switch_stmt";
        case NodeKind::BranchStmt: return "branch_stmt";
        case NodeKind::GoStmt: return "go_stmt";
        case NodeKind::DeferStmt: return "defer_stmt";
        case NodeKind::KeywordStmt: return "keyword_stmt";
        case NodeKind::EmptyStmt: return "empty_stmt";
        case NodeKind::CallExpr: return "call_expr";
        case NodeKind::ArgList: return "arg_list";
        case NodeKind::SelectorExpr: return "selector_expr";
        case NodeKind::IndexExpr: return "index_expr";
        case NodeKind::ParenExpr: return "paren_expr";
        case NodeKind::BraceGroup: return "brace_group";
        case NodeKind::UnaryExpr: return "unary_expr";
        case NodeKind::BinaryExpr: return "binary_expr";
        case NodeKind::Identifier: return "identifier";
        case NodeKind::NumberLit: return "number_lit";
        case NodeKind::StringLit: return "string_lit";
        case NodeKind::OperatorLeaf: return "op";
        case NodeKind::KeywordLeaf: return "kw";
        case NodeKind::Error: return "error";
    }
    return "unknown";
}

namespace {

constexpr std::size_t kNpos = static_cast<std::size_t>(-1);

bool tok_is(const std::vector<Token>& toks, std::string_view text, std::size_t i,
            std::string_view want) {
    if (i >= toks.size()) return false;
    return text.substr(toks[i].begin, toks[i].end - toks[i].begin) == want;
}

class Parser {
  public:
    Parser(std::string_view text, Language lang, std::vector<Token> tokens)
        : text_(text), lang_(lang), toks_(std::move(tokens)) {
        build_match_table();
    }

    Node parse() {
        Node root{NodeKind::SourceFile, {0, text_.size()}, {}, {}};
        root.children = parse_scope(0, toks_.size(), /*top_level=*/true);
        return root;
    }

  private:
    std::string_view tok_text(std::size_t i) const {
        return text_.substr(toks_[i].begin, toks_[i].end - toks_[i].begin);
    }
    bool is(std::size_t i, std::string_view want) const { return tok_is(toks_, text_, i, want); }
    bool is_kind(std::size_t i, TokKind kind) const {
        return i < toks_.size() && toks_[i].kind == kind;
    }
    ByteSpan span_of(std::size_t lo, std::size_t hi_excl) const {
        if (lo >= hi_excl) return {0, 0};
        return {toks_[lo].begin, toks_[hi_excl - 1].end};
    }

    // Matching close-bracket index for every ( [ { token; kNpos if unbalanced.
    void build_match_table() {
        match_.assign(toks_.size(), kNpos);
        std::vector<std::size_t> stack;
        for (std::size_t i = 0; i < toks_.size(); ++i) {
            if (toks_[i].kind != TokKind::Punct) continue;
            std::string_view t = tok_text(i);
            if (t == "(" || t == "[" || t == "{") {
                stack.push_back(i);
            } else if (t == ")" || t == "]" || t == "}") {
                char want = t[0] == ')' ? '(' : (t[0] == ']' ? '[' : '{');
                // pop until a matching opener; drop mismatched openers
                while (!stack.empty() && tok_text(stack.back())[0] != want) stack.pop_back();
                if (!stack.empty()) {
                    match_[stack.back()] = i;
                    stack.pop_back();
                }
            }
        }
    }

    // ---------------------------------------------------------------
    // Scope / statement level

    std::vector<Node> parse_scope(std::size_t lo, std::size_t hi, bool top_level) {
        std::vector<Node> nodes;
        std::size_t i = lo;
        while (i < hi) {
            if (lang_ == Language::Go && top_level && is(i, "func")) {
                std::size_t next = i;
                if (auto fn = parse_go_function(next, hi)) {
                    nodes.push_back(std::move(*fn));
                    i = next;
                    continue;
                }
                // recovery: skip to the next line-initial `func`
                std::size_t anchor = recovery_anchor(i + 1, hi, "func");
                nodes.push_back(Node{NodeKind::Error, span_of(i, anchor), {}, {}});
                i = anchor;
                continue;
            }
            if (lang_ == Language::Cpp && top_level) {
                if (is(i, "namespace")) {
                    std::size_t brace = i + 1;
                    while (brace < hi && !is(brace, "{") && !is(brace, ";")) ++brace;
                    if (brace < hi && is(brace, "{") && match_[brace] != kNpos && match_[brace] < hi) {
                        Node ns{NodeKind::KeywordStmt, span_of(i, match_[brace] + 1), "namespace", {}};
                        ns.children = parse_scope(brace + 1, match_[brace], true);
                        nodes.push_back(std::move(ns));
                        i = match_[brace] + 1;
                        continue;
                    }
                }
                if (is(i, "extern") && is_kind(i + 1, TokKind::Str) && is(i + 2, "{") &&
                    match_[i + 2] != kNpos && match_[i + 2] < hi) {
                    Node ext{NodeKind::KeywordStmt, span_of(i, match_[i + 2] + 1), "extern", {}};
                    ext.children = parse_scope(i + 3, match_[i + 2], true);
                    nodes.push_back(std::move(ext));
                    i = match_[i + 2] + 1;
                    continue;
                }
                std::size_t next = i;
                if (auto fn = parse_cpp_function(next, hi)) {
                    nodes.push_back(std::move(*fn));
                    i = next;
                    continue;
                }
            }
            std::size_t end = statement_end(i, hi);
            if (end == i) {  // lone separator
                nodes.push_back(Node{NodeKind::EmptyStmt, span_of(i, i + 1), {}, {}});
                ++i;
                continue;
            }
            nodes.push_back(parse_stmt_fragment(i, end));
            i = end;
        }
        return nodes;
    }

    std::size_t recovery_anchor(std::size_t from, std::size_t hi, std::string_view keyword) {
        for (std::size_t k = from; k < hi; ++k) {
            if (!is(k, keyword)) continue;
            if (k == 0 || toks_[k].line > toks_[k - 1].line) return k;
        }
        return hi;
    }

    // One statement starting at `i`, returning one past its last token.
    // Handles (), [] nesting, attached {} groups, ';' and Go line breaks.
    std::size_t statement_end(std::size_t i, std::size_t hi) {
        std::size_t depth = 0;
        std::size_t j = i;
        if (is(j, ";")) return i;  // caller emits EmptyStmt
        if (is(j, "}")) return i + 1;
        while (j < hi) {
            std::string_view t = tok_text(j);
            if (toks_[j].kind == TokKind::Punct) {
                if (t == "(" || t == "[") {
                    std::size_t m = match_[j];
                    if (m == kNpos || m >= hi) return hi;
                    j = m + 1;
                    // Go: a closing ) or ] at line end finishes the statement
                    if (lang_ == Language::Go && j < hi && toks_[j].line > toks_[m].line)
                        return j;
                    continue;
                }
                if (t == "{") {
                    std::size_t m = match_[j];
                    if (m == kNpos || m >= hi) return hi;
                    j = m + 1;
                    // does the statement continue past the brace group?
                    if (j >= hi) return j;
                    if (is(j, "else") || (lang_ == Language::Cpp && is(j, "while") && starts_with_do(i)))
                        continue;
                    if (is(j, ";")) return j + 1;
                    if (toks_[j].kind == TokKind::Punct && toks_[j].line == toks_[m].line &&
                        !is(j, "{") && !is(j, "}")) {
                        continue;
                    }
                    return j;
                }
                if (t == ")" || t == "]" || t == "}") {
                    if (depth == 0) return j;  // dedent: statement ends before it
                    --depth;
                    ++j;
                    continue;
                }
                if (t == ";") return j + 1;
            }
            // Go automatic statement end at line break
            if (lang_ == Language::Go && j + 1 < hi && toks_[j + 1].line > toks_[j].line &&
                ends_go_statement(j)) {
                return j + 1;
            }
            ++j;
        }
        return hi;
    }

    bool starts_with_do(std::size_t stmt_start) const { return is(stmt_start, "do"); }

    bool ends_go_statement(std::size_t j) const {
        const Token& tok = toks_[j];
        if (tok.kind == TokKind::Ident) {
            std::string_view t = tok_text(j);
            if (is_keyword(t, Language::Go)) {
                return t == "return" || t == "break" || t == "continue" || t == "fallthrough";
            }
            return true;
        }
        if (tok.kind == TokKind::Number || tok.kind == TokKind::Str) return true;
        if (tok.kind == TokKind::Punct) {
            std::string_view t = tok_text(j);
            return t == ")" || t == "]" || t == "}" || t == "++" || t == "--";
        }
        return false;
    }

    // ---------------------------------------------------------------
    // Go functions

    std::optional<Node> parse_go_function(std::size_t& i, std::size_t hi) {
        std::size_t start = i;
        std::size_t j = i + 1;
        Node fn{NodeKind::FunctionDecl, {}, {}, {}};

        if (is(j, "(")) {  // method receiver
            std::size_t m = match_[j];
            if (m == kNpos || m >= hi) return std::nullopt;
            Node recv{NodeKind::Receiver, span_of(j, m + 1), {}, {}};
            recv.children = parse_param_list(j + 1, m);
            fn.children.push_back(std::move(recv));
            j = m + 1;
        }
        if (!is_kind(j, TokKind::Ident) || is_keyword(tok_text(j), Language::Go)) return std::nullopt;
        Node name{NodeKind::Name, span_of(j, j + 1), std::string(tok_text(j)), {}};
        fn.children.push_back(std::move(name));
        ++j;
        if (is(j, "[")) {  // type parameters
            std::size_t m = match_[j];
            if (m == kNpos || m >= hi) return std::nullopt;
            j = m + 1;
        }
        if (!is(j, "(")) return std::nullopt;
        std::size_t params_close = match_[j];
        if (params_close == kNpos || params_close >= hi) return std::nullopt;
        Node params{NodeKind::ParamList, span_of(j, params_close + 1), {}, {}};
        params.children = parse_param_list(j + 1, params_close);
        fn.children.push_back(std::move(params));
        j = params_close + 1;

        // result: everything up to the body brace
        std::size_t result_start = j;
        std::size_t depth = 0;
        while (j < hi) {
            std::string_view t = tok_text(j);
            if (toks_[j].kind == TokKind::Punct) {
                if (t == "(" || t == "[") {
                    std::size_t m = match_[j];
                    if (m == kNpos || m >= hi) return std::nullopt;
                    j = m + 1;
                    continue;
                }
                if (t == "{" && depth == 0) break;
                if (t == ";" || t == "}" || t == ")") return std::nullopt;
            }
            // new line before any '{': body-less declaration, not extracted
            if (j > result_start && toks_[j].line > toks_[j - 1].line) return std::nullopt;
            if (j == result_start && toks_[j].line > toks_[params_close].line) return std::nullopt;
            ++j;
        }
        if (j >= hi || !is(j, "{")) return std::nullopt;
        if (j > result_start) {
            Node result{NodeKind::ResultList, span_of(result_start, j), {}, {}};
            fn.children.push_back(std::move(result));
        }
        std::size_t body_close = match_[j];
        if (body_close == kNpos || body_close >= hi) return std::nullopt;
        Node block{NodeKind::Block, span_of(j, body_close + 1), {}, {}};
        block.children = parse_scope(j + 1, body_close, false);
        fn.children.push_back(std::move(block));
        fn.span = span_of(start, body_close + 1);
        i = body_close + 1;
        return fn;
    }

    // Parses "a, b int, c *gin.Context" into Param nodes. Go name groups
    // share the following group's type; type-only groups yield Param with
    // just a TypeRef.
    std::vector<Node> parse_param_list(std::size_t lo, std::size_t hi) {
        std::vector<Node> params;
        std::vector<std::pair<std::size_t, std::size_t>> groups = split_ranges(lo, hi, ",");
        if (lang_ == Language::Go) {
            std::vector<std::size_t> pending;  // single-ident groups awaiting a type
            for (auto [glo, ghi] : groups) {
                if (glo >= ghi) continue;
                bool single_ident = (ghi - glo == 1) && is_kind(glo, TokKind::Ident) &&
                                    !is_keyword(tok_text(glo), lang_);
                if (single_ident) {
                    pending.push_back(glo);
                    continue;
                }
                bool named = is_kind(glo, TokKind::Ident) && !is_keyword(tok_text(glo), lang_) &&
                             ghi - glo >= 2 && !is(glo + 1, ".");
                if (named) {
                    ByteSpan type_span = span_of(glo + 1, ghi);
                    for (std::size_t p : pending) params.push_back(make_param(p, type_span));
                    pending.clear();
                    params.push_back(make_param(glo, type_span));
                } else {
                    for (std::size_t p : pending)
                        params.push_back(make_param(p, ByteSpan{0, 0}));  // cannot resolve
                    pending.clear();
                    Node param{NodeKind::Param, span_of(glo, ghi), {}, {}};
                    param.children.push_back(Node{NodeKind::TypeRef, span_of(glo, ghi), {}, {}});
                    params.push_back(std::move(param));
                }
            }
            for (std::size_t p : pending) {
                // lone trailing ident: a type, not a name
                Node param{NodeKind::Param, span_of(p, p + 1), {}, {}};
                param.children.push_back(Node{NodeKind::TypeRef, span_of(p, p + 1), {}, {}});
                params.push_back(std::move(param));
            }
            return params;
        }
        // C++: type tokens followed by the declared name
        for (auto [glo, ghi] : groups) {
            if (glo >= ghi) continue;
            std::size_t end = ghi;
            for (std::size_t k = glo; k < ghi; ++k) {
                if (is(k, "=")) {  // default argument
                    end = k;
                    break;
                }
            }
            if (end - glo == 1 && is(glo, "void")) continue;
            std::size_t name_idx = kNpos;
            if (end > glo && is_kind(end - 1, TokKind::Ident) &&
                !is_keyword(tok_text(end - 1), lang_) && end - glo >= 2) {
                name_idx = end - 1;
            }
            Node param{NodeKind::Param, span_of(glo, ghi), {}, {}};
            if (name_idx != kNpos) {
                param.children.push_back(
                    Node{NodeKind::TypeRef, span_of(glo, name_idx), {}, {}});
                param.children.push_back(
                    Node{NodeKind::Name, span_of(name_idx, name_idx + 1),
                         std::string(tok_text(name_idx)), {}});
            } else {
                param.children.push_back(Node{NodeKind::TypeRef, span_of(glo, end), {}, {}});
            }
            params.push_back(std::move(param));
        }
        return params;
    }

    Node make_param(std::size_t name_idx, ByteSpan type_span) {
        Node param{NodeKind::Param, {toks_[name_idx].begin, type_span.end ? type_span.end : toks_[name_idx].end}, {}, {}};
        param.children.push_back(Node{NodeKind::Name, span_of(name_idx, name_idx + 1),
                                      std::string(tok_text(name_idx)), {}});
        if (type_span.end > type_span.begin)
            param.children.push_back(Node{NodeKind::TypeRef, type_span, {}, {}});
        return param;
    }

    // ---------------------------------------------------------------
    // C++ functions

    static bool allowed_between_params_and_body(std::string_view t) {
        return t == "const" || t == "noexcept" || t == "override" || t == "final" ||
               t == "mutable" || t == "throw" || t == "->" || t == ":" || t == "," ||
               t == "::" || t == "&" || t == "&&" || t == "*" || t == "<" || t == ">" ||
               t == "(" || t == ")" || t == "[" || t == "]" || t == "=" || t == "0";
    }

    std::optional<Node> parse_cpp_function(std::size_t& i, std::size_t hi) {
        std::size_t start = i;
        std::size_t j = i;
        if (is(j, "template") && is(j + 1, "<")) {
            int angle = 0;
            std::size_t k = j + 1;
            while (k < hi) {
                if (is(k, "<")) ++angle;
                else if (is(k, ">")) {
                    if (--angle == 0) break;
                } else if (is(k, ">>")) {
                    angle -= 2;
                    if (angle <= 0) break;
                } else if (is(k, ";") || is(k, "{")) {
                    return std::nullopt;
                }
                ++k;
            }
            if (k >= hi) return std::nullopt;
            j = k + 1;
        }
        if (is(j, "class") || is(j, "struct") || is(j, "enum") || is(j, "union") ||
            is(j, "using") || is(j, "typedef") || is(j, "namespace"))
            return std::nullopt;

        // find the parameter-list '(' : first depth-0 '(' preceded by a
        // non-keyword identifier
        std::size_t paren = kNpos, name_idx = kNpos;
        for (std::size_t k = j; k < hi; ++k) {
            std::string_view t = tok_text(k);
            if (toks_[k].kind == TokKind::Punct) {
                if (t == ";" || t == "{" || t == "}") break;
                if (t == "=") break;  // `int x = f();` is not a definition
                if (t == "[") {
                    if (match_[k] == kNpos || match_[k] >= hi) return std::nullopt;
                    k = match_[k];
                    continue;
                }
                if (t == "(") {
                    if (k > j && is_kind(k - 1, TokKind::Ident) &&
                        !is_keyword(tok_text(k - 1), lang_) &&
                        !(k >= 2 && is(k - 2, "~"))) {
                        paren = k;
                        name_idx = k - 1;
                    }
                    break;
                }
            }
        }
        if (paren == kNpos) return std::nullopt;
        std::size_t params_close = match_[paren];
        if (params_close == kNpos || params_close >= hi) return std::nullopt;

        // body brace must follow, via qualifier-ish tokens only
        std::size_t k = params_close + 1;
        while (k < hi && !is(k, "{")) {
            if (toks_[k].kind == TokKind::Ident) {
                if (!allowed_between_params_and_body(tok_text(k)) &&
                    is_keyword(tok_text(k), lang_) == false && !is(k, "const"))
                    return std::nullopt;
                ++k;
                continue;
            }
            std::string_view t = tok_text(k);
            if (t == "(") {
                if (match_[k] == kNpos || match_[k] >= hi) return std::nullopt;
                k = match_[k] + 1;
                continue;
            }
            if (!allowed_between_params_and_body(t)) return std::nullopt;
            ++k;
        }
        if (k >= hi || !is(k, "{")) return std::nullopt;
        std::size_t body_close = match_[k];
        if (body_close == kNpos || body_close >= hi) return std::nullopt;

        // qualified name: walk Ident (:: Ident)* backwards from name_idx
        std::size_t path_start = name_idx;
        while (path_start >= 2 && is(path_start - 1, "::") && is_kind(path_start - 2, TokKind::Ident))
            path_start -= 2;

        Node fn{NodeKind::FunctionDecl, span_of(start, body_close + 1), {}, {}};
        Node name{NodeKind::Name, span_of(path_start, name_idx + 1),
                  std::string(text_.substr(toks_[path_start].begin,
                                           toks_[name_idx].end - toks_[path_start].begin)),
                  {}};
        fn.children.push_back(std::move(name));
        Node params{NodeKind::ParamList, span_of(paren, params_close + 1), {}, {}};
        params.children = parse_param_list(paren + 1, params_close);
        fn.children.push_back(std::move(params));
        Node block{NodeKind::Block, span_of(k, body_close + 1), {}, {}};
        block.children = parse_scope(k + 1, body_close, false);
        fn.children.push_back(std::move(block));
        i = body_close + 1;
        return fn;
    }

    // ---------------------------------------------------------------
    // Statements & expressions

    std::vector<std::pair<std::size_t, std::size_t>> split_ranges(std::size_t lo, std::size_t hi,
                                                                  std::string_view sep) {
        std::vector<std::pair<std::size_t, std::size_t>> out;
        std::size_t cur = lo;
        std::size_t j = lo;
        while (j < hi) {
            std::string_view t = tok_text(j);
            if (toks_[j].kind == TokKind::Punct) {
                if (t == "(" || t == "[" || t == "{") {
                    std::size_t m = match_[j];
                    j = (m == kNpos || m >= hi) ? hi : m + 1;
                    continue;
                }
                if (t == sep) {
                    out.emplace_back(cur, j);
                    cur = j + 1;
                    ++j;
                    continue;
                }
            }
            ++j;
        }
        out.emplace_back(cur, hi);
        return out;
    }

    // index of a top-level assignment operator in [lo,hi), or kNpos
    std::size_t find_assign_op(std::size_t lo, std::size_t hi) {
        static const std::set<std::string_view> ops = {"=",  ":=", "+=", "-=",  "*=",  "/=", "%=",
                                                       "&=", "|=", "^=", "<<=", ">>=", "&^="};
        for (std::size_t j = lo; j < hi; ++j) {
            std::string_view t = tok_text(j);
            if (toks_[j].kind != TokKind::Punct) continue;
            if (t == "(" || t == "[" || t == "{") {
                std::size_t m = match_[j];
                if (m == kNpos || m >= hi) return kNpos;
                j = m;
                continue;
            }
            if (ops.count(t)) return j;
        }
        return kNpos;
    }

    Node parse_stmt_fragment(std::size_t lo, std::size_t hi) {
        if (lo >= hi) return Node{NodeKind::EmptyStmt, {0, 0}, {}, {}};
        std::string_view first = tok_text(lo);

        if (toks_[lo].kind == TokKind::Punct && first == "{") {
            std::size_t m = match_[lo];
            if (m != kNpos && m < hi) {
                Node block{NodeKind::Block, span_of(lo, m + 1), {}, {}};
                block.children = parse_scope(lo + 1, m, false);
                return block;
            }
            Node err{NodeKind::Error, span_of(lo, hi), {}, {}};
            return err;
        }

        // C++ declarations may start with type keywords (auto, int, const...)
        if (lang_ == Language::Cpp && toks_[lo].kind == TokKind::Ident) {
            if (auto decl = try_cpp_decl(lo, hi)) return std::move(*decl);
        }

        if (toks_[lo].kind == TokKind::Ident && is_keyword(first, lang_)) {
            NodeKind kind = NodeKind::KeywordStmt;
            if (first == "return") kind = NodeKind::ReturnStmt;
            else if (first == "if") kind = NodeKind::IfStmt;
            else if (first == "for") kind = NodeKind::ForStmt;
            else if (first == "while") kind = NodeKind::WhileStmt;
            else if (first == "do") kind = NodeKind::DoStmt;
            else if (first == "switch" || first == "select") kind = NodeKind::SwitchStmt;
            else if (first == "break" || first == "continue" || first == "goto" ||
                     first == "fallthrough")
                kind = NodeKind::BranchStmt;
            else if (first == "go") kind = NodeKind::GoStmt;
            else if (first == "defer") kind = NodeKind::DeferStmt;
            else if (first == "var" || first == "const" || first == "type")
                kind = lang_ == Language::Go ? NodeKind::DeclStmt : NodeKind::KeywordStmt;

            Node stmt{kind, span_of(lo, hi), std::string(first), {}};
            stmt.children.push_back(
                Node{NodeKind::KeywordLeaf, span_of(lo, lo + 1), std::string(first), {}});
            if (kind == NodeKind::DeclStmt && lang_ == Language::Go) {
                parse_go_var_decl(lo + 1, hi, stmt);
                return stmt;
            }
            append_fragments(stmt, lo + 1, hi);
            return stmt;
        }

        std::size_t assign = find_assign_op(lo, hi);
        if (assign != kNpos) {
            Node stmt{NodeKind::AssignStmt, span_of(lo, hi), {}, {}};
            for (auto [glo, ghi] : split_ranges(lo, assign, ","))
                if (glo < ghi) stmt.children.push_back(parse_expr(glo, ghi));
            stmt.children.push_back(Node{NodeKind::OperatorLeaf, span_of(assign, assign + 1),
                                         std::string(tok_text(assign)), {}});
            for (auto [glo, ghi] : split_ranges(assign + 1, hi, ","))
                if (glo < ghi) stmt.children.push_back(parse_expr(glo, ghi));
            return stmt;
        }

        std::size_t end = hi;
        if (end > lo && is(end - 1, ";")) --end;
        if (end == lo) return Node{NodeKind::EmptyStmt, span_of(lo, hi), {}, {}};
        Node stmt{NodeKind::ExprStmt, span_of(lo, hi), {}, {}};
        append_fragments(stmt, lo, end);
        return stmt;
    }

    // splits on top-level ';' then parses each piece (loop headers etc.)
    void append_fragments(Node& parent, std::size_t lo, std::size_t hi) {
        for (auto [flo, fhi] : split_ranges(lo, hi, ";")) {
            if (flo >= fhi) continue;
            std::size_t assign = find_assign_op(flo, fhi);
            if (assign != kNpos) {
                parent.children.push_back(parse_stmt_fragment(flo, fhi));
                continue;
            }
            for (auto [elo, ehi] : split_ranges(flo, fhi, ","))
                if (elo < ehi) parent.children.push_back(parse_expr(elo, ehi));
        }
    }

    // `var names... Type? (= exprs)?`
    void parse_go_var_decl(std::size_t lo, std::size_t hi, Node& stmt) {
        std::size_t end = hi;
        if (end > lo && is(end - 1, ";")) --end;
        if (lo < end && is(lo, "(")) {  // grouped declaration block
            append_fragments(stmt, lo, end);
            return;
        }
        std::size_t eq = kNpos;
        for (std::size_t j = lo; j < end; ++j) {
            if (is(j, "=")) {
                eq = j;
                break;
            }
            if (is(j, "(") || is(j, "[") || is(j, "{")) {
                std::size_t m = match_[j];
                if (m == kNpos || m >= end) break;
                j = m;
            }
        }
        std::size_t names_hi = (eq == kNpos) ? end : eq;
        // names are the leading comma-separated identifiers
        std::size_t j = lo;
        while (j < names_hi && is_kind(j, TokKind::Ident) && !is_keyword(tok_text(j), lang_)) {
            stmt.children.push_back(
                Node{NodeKind::Name, span_of(j, j + 1), std::string(tok_text(j)), {}});
            if (j + 1 < names_hi && is(j + 1, ",")) {
                j += 2;
                continue;
            }
            ++j;
            break;
        }
        if (j < names_hi)
            stmt.children.push_back(Node{NodeKind::TypeRef, span_of(j, names_hi), {}, {}});
        if (eq != kNpos) {
            stmt.children.push_back(
                Node{NodeKind::OperatorLeaf, span_of(eq, eq + 1), "=", {}});
            for (auto [elo, ehi] : split_ranges(eq + 1, end, ","))
                if (elo < ehi) stmt.children.push_back(parse_expr(elo, ehi));
        }
    }

    // `Type name = expr;` / `Type name(args);` / `Type name;` / `auto name = ...`
    std::optional<Node> try_cpp_decl(std::size_t lo, std::size_t hi) {
        std::size_t end = hi;
        if (end > lo && is(end - 1, ";")) --end;
        if (lo >= end) return std::nullopt;

        std::size_t j = lo;
        while (j < end && (is(j, "const") || is(j, "static") || is(j, "constexpr"))) ++j;
        std::size_t type_start = j;
        if (j >= end) return std::nullopt;
        bool type_seen = false;
        if (is_kind(j, TokKind::Ident)) {
            std::string_view t = tok_text(j);
            if (is_keyword(t, lang_) && t != "auto" && t != "unsigned" && t != "signed" &&
                t != "int" && t != "long" && t != "short" && t != "char" && t != "bool" &&
                t != "float" && t != "double" && t != "void")
                return std::nullopt;
            type_seen = true;
            ++j;
            // qualified path and template args
            while (j < end) {
                if (is(j, "::") && j + 1 < end && is_kind(j + 1, TokKind::Ident)) {
                    j += 2;
                    continue;
                }
                if (is(j, "<")) {
                    int angle = 1;
                    std::size_t k = j + 1;
                    while (k < end && angle > 0) {
                        if (is(k, "<")) ++angle;
                        else if (is(k, ">")) --angle;
                        else if (is(k, ">>")) angle -= 2;
                        else if (is(k, ";") || is(k, "(")) break;
                        ++k;
                    }
                    if (angle > 0) break;
                    j = k;
                    continue;
                }
                // multi-word builtin types: unsigned long long
                if (is_kind(j, TokKind::Ident) &&
                    (is(j, "int") || is(j, "long") || is(j, "short") || is(j, "char") ||
                     is(j, "unsigned") || is(j, "signed") || is(j, "double"))) {
                    ++j;
                    continue;
                }
                break;
            }
        }
        if (!type_seen) return std::nullopt;
        while (j < end && (is(j, "*") || is(j, "&") || is(j, "&&") || is(j, "const"))) ++j;
        if (j >= end || !is_kind(j, TokKind::Ident) || is_keyword(tok_text(j), lang_))
            return std::nullopt;
        std::size_t name_idx = j;
        ++j;
        // next must end the declarator or start an initializer
        bool ok = j == end || is(j, "=") || is(j, "{") || is(j, "(") || is(j, "[") || is(j, ",");
        if (!ok) return std::nullopt;
        if (j < end && is(j, "(")) {
            // reject prototypes `int f(int);` by requiring an argument-looking call
            std::size_t m = match_[j];
            if (m == kNpos || m > end) return std::nullopt;
            // heuristic: a parameter list contains a type keyword or is empty -> prototype
            if (m == j + 1) return std::nullopt;
            for (std::size_t k = j + 1; k < m; ++k) {
                std::string_view t = tok_text(k);
                if (is_kind(k, TokKind::Ident) && is_keyword(t, lang_) && t != "this" &&
                    t != "true" && t != "false" && t != "nullptr" && t != "new" &&
                    t != "sizeof" && t != "static_cast" && t != "reinterpret_cast" &&
                    t != "const_cast" && t != "dynamic_cast")
                    return std::nullopt;
            }
        }

        Node stmt{NodeKind::DeclStmt, span_of(lo, hi), {}, {}};
        stmt.children.push_back(Node{NodeKind::TypeRef, span_of(type_start, name_idx), {}, {}});
        stmt.children.push_back(Node{NodeKind::Name, span_of(name_idx, name_idx + 1),
                                     std::string(tok_text(name_idx)), {}});
        if (j < end && is(j, "=")) {
            stmt.children.push_back(Node{NodeKind::OperatorLeaf, span_of(j, j + 1), "=", {}});
            for (auto [elo, ehi] : split_ranges(j + 1, end, ","))
                if (elo < ehi) stmt.children.push_back(parse_expr(elo, ehi));
        } else if (j < end) {
            append_fragments(stmt, j, end);
        }
        return stmt;
    }

    Node parse_expr(std::size_t lo, std::size_t hi) {
        std::vector<Node> items;
        std::size_t j = lo;
        while (j < hi) {
            if (toks_[j].kind == TokKind::Punct) {
                std::string_view t = tok_text(j);
                if (t != "(" && t != "[" && t != "{") {
                    // operator position
                    items.push_back(
                        Node{NodeKind::OperatorLeaf, span_of(j, j + 1), std::string(t), {}});
                    ++j;
                    continue;
                }
            }
            items.push_back(parse_operand(j, hi));
        }
        if (items.empty()) return Node{NodeKind::EmptyStmt, span_of(lo, hi), {}, {}};
        if (items.size() == 1) return std::move(items.front());
        Node expr{NodeKind::BinaryExpr, span_of(lo, hi), {}, {}};
        expr.children = std::move(items);
        return expr;
    }

    // one operand plus its postfix chain; advances j
    Node parse_operand(std::size_t& j, std::size_t hi) {
        Node node;
        std::string_view t = tok_text(j);
        if (toks_[j].kind == TokKind::Ident) {
            if (is_keyword(t, lang_)) {
                node = Node{NodeKind::KeywordLeaf, span_of(j, j + 1), std::string(t), {}};
            } else {
                node = Node{NodeKind::Identifier, span_of(j, j + 1), std::string(t), {}};
            }
            ++j;
        } else if (toks_[j].kind == TokKind::Number) {
            node = Node{NodeKind::NumberLit, span_of(j, j + 1), {}, {}};
            ++j;
        } else if (toks_[j].kind == TokKind::Str) {
            node = Node{NodeKind::StringLit, span_of(j, j + 1), {}, {}};
            ++j;
        } else if (t == "(") {
            std::size_t m = match_[j];
            if (m == kNpos || m >= hi) {
                node = Node{NodeKind::Error, span_of(j, hi), {}, {}};
                j = hi;
                return node;
            }
            node = Node{NodeKind::ParenExpr, span_of(j, m + 1), {}, {}};
            for (auto [flo, fhi] : split_ranges(j + 1, m, ";"))
                for (auto [elo, ehi] : split_ranges(flo, fhi, ","))
                    if (elo < ehi) node.children.push_back(parse_stmt_like(elo, ehi));
            j = m + 1;
        } else if (t == "[") {
            std::size_t m = match_[j];
            if (m == kNpos || m >= hi) {
                node = Node{NodeKind::Error, span_of(j, hi), {}, {}};
                j = hi;
                return node;
            }
            node = Node{NodeKind::IndexExpr, span_of(j, m + 1), {}, {}};
            if (j + 1 < m) node.children.push_back(parse_expr(j + 1, m));
            j = m + 1;
        } else if (t == "{") {
            std::size_t m = match_[j];
            if (m == kNpos || m >= hi) {
                node = Node{NodeKind::Error, span_of(j, hi), {}, {}};
                j = hi;
                return node;
            }
            node = Node{NodeKind::BraceGroup, span_of(j, m + 1), {}, {}};
            node.children = parse_scope(j + 1, m, false);
            j = m + 1;
        } else {
            node = Node{NodeKind::OperatorLeaf, span_of(j, j + 1), std::string(t), {}};
            ++j;
            return node;
        }

        // postfix chain
        while (j < hi && toks_[j].kind == TokKind::Punct) {
            std::string_view p = tok_text(j);
            if ((p == "." || p == "->" || p == "::") && j + 1 < hi &&
                is_kind(j + 1, TokKind::Ident)) {
                Node sel{NodeKind::SelectorExpr, {node.span.begin, toks_[j + 1].end}, {}, {}};
                Node field{NodeKind::Identifier, span_of(j + 1, j + 2),
                           std::string(tok_text(j + 1)), {}};
                sel.children.push_back(std::move(node));
                sel.children.push_back(std::move(field));
                node = std::move(sel);
                j += 2;
                continue;
            }
            if (p == "(") {
                std::size_t m = match_[j];
                if (m == kNpos || m >= hi) break;
                Node call{NodeKind::CallExpr, {node.span.begin, toks_[m].end}, {}, {}};
                Node args{NodeKind::ArgList, span_of(j, m + 1), {}, {}};
                for (auto [elo, ehi] : split_ranges(j + 1, m, ","))
                    if (elo < ehi) args.children.push_back(parse_expr(elo, ehi));
                call.children.push_back(std::move(node));
                call.children.push_back(std::move(args));
                node = std::move(call);
                j = m + 1;
                continue;
            }
            if (p == "[") {
                std::size_t m = match_[j];
                if (m == kNpos || m >= hi) break;
                Node idx{NodeKind::IndexExpr, {node.span.begin, toks_[m].end}, {}, {}};
                idx.children.push_back(std::move(node));
                if (j + 1 < m) idx.children.push_back(parse_expr(j + 1, m));
                node = std::move(idx);
                j = m + 1;
                continue;
            }
            if (p == "{" && lang_ == Language::Go &&
                (node.kind == NodeKind::Identifier || node.kind == NodeKind::SelectorExpr ||
                 node.kind == NodeKind::IndexExpr)) {
                // composite literal T{...}
                std::size_t m = match_[j];
                if (m == kNpos || m >= hi) break;
                Node lit{NodeKind::BraceGroup, {node.span.begin, toks_[m].end}, {}, {}};
                lit.children.push_back(std::move(node));
                for (auto [elo, ehi] : split_ranges(j + 1, m, ","))
                    if (elo < ehi) lit.children.push_back(parse_expr(elo, ehi));
                node = std::move(lit);
                j = m + 1;
                continue;
            }
            break;
        }
        return node;
    }

    // fragment inside parens: assignment/decl aware
    Node parse_stmt_like(std::size_t lo, std::size_t hi) {
        std::size_t assign = find_assign_op(lo, hi);
        if (assign != kNpos) return parse_stmt_fragment(lo, hi);
        if (lang_ == Language::Cpp) {
            if (auto decl = try_cpp_decl(lo, hi)) return std::move(*decl);
        }
        return parse_expr(lo, hi);
    }

    std::string_view text_;
    Language lang_;
    std::vector<Token> toks_;
    std::vector<std::size_t> match_;
};

}  // namespace

SyntaxTree parse_source(std::string text, Language lang) {
    SyntaxTree tree;
    tree.lang = lang;
    tree.text = std::move(text);
    LexOutput lexed = lex(tree.text, lang);
    tree.tokens = lexed.tokens;
    tree.trivia = std::move(lexed.trivia);
    Parser parser(tree.text, lang, std::move(lexed.tokens));
    tree.root = parser.parse();
    return tree;
}

std::size_t error_region_count(const SyntaxTree& tree) {
    std::size_t n = 0;
    for (const Node& child : tree.root.children)
        if (child.kind == NodeKind::Error) ++n;
    return n;
}

}  // namespace domforge::syntax
