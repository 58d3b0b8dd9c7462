#include <algorithm>
#include <cctype>
#include <functional>
#include <map>
#include <set>

#include "domforge/syntax.hpp"

namespace domforge::syntax {

namespace {

std::string_view token_text(std::string_view text, const Token& tok) {
    return text.substr(tok.begin, tok.end - tok.begin);
}

void collect_function_nodes(const Node& node, std::vector<const Node*>& out) {
    for (const Node& child : node.children) {
        if (child.kind == NodeKind::FunctionDecl) {
            out.push_back(&child);
        } else if (child.kind == NodeKind::KeywordStmt &&
                   (child.leaf_text == "namespace" || child.leaf_text == "extern")) {
            collect_function_nodes(child, out);
        }
    }
}

const Node* child_of_kind(const Node& node, NodeKind kind) {
    for (const Node& child : node.children)
        if (child.kind == kind) return &child;
    return nullptr;
}

std::string trim_copy(std::string_view s) {
    std::size_t lo = 0, hi = s.size();
    while (lo < hi && std::isspace(static_cast<unsigned char>(s[lo]))) ++lo;
    while (hi > lo && std::isspace(static_cast<unsigned char>(s[hi - 1]))) --hi;
    return std::string(s.substr(lo, hi - lo));
}

std::vector<TypedVar> params_from_list(const SyntaxTree& tree, const Node& list) {
    std::vector<TypedVar> out;
    for (const Node& param : list.children) {
        if (param.kind != NodeKind::Param) continue;
        const Node* name = child_of_kind(param, NodeKind::Name);
        const Node* type = child_of_kind(param, NodeKind::TypeRef);
        if (!name) continue;  // unnamed parameter
        TypedVar var;
        var.var_name = name->leaf_text;
        if (type) var.type_text = trim_copy(tree.text_of(type->span));
        out.push_back(std::move(var));
    }
    return out;
}

bool is_statement_kind(NodeKind kind) {
    switch (kind) {
        case NodeKind::ExprStmt:
        case NodeKind::AssignStmt:
        case NodeKind::DeclStmt:
        case NodeKind::ReturnStmt:
        case NodeKind::IfStmt:
        case NodeKind::ForStmt:
        case NodeKind::WhileStmt:
        case NodeKind::DoStmt:
        case NodeKind::SwitchStmt:
        case NodeKind::BranchStmt:
        case NodeKind::GoStmt:
        case NodeKind::DeferStmt:
        case NodeKind::KeywordStmt:
            return true;
        default:
            return false;
    }
}

/// Strips pointer/reference sigils and `const` from a declared type.
std::string strip_type_sigils(std::string_view type_text) {
    std::string out;
    out.reserve(type_text.size());
    for (char ch : type_text) {
        if (ch == '*' || ch == '&') continue;
        out.push_back(ch);
    }
    std::string trimmed = trim_copy(out);
    for (std::string_view prefix : {"const ", "static ", "constexpr "}) {
        if (trimmed.rfind(prefix, 0) == 0) trimmed = trim_copy(trimmed.substr(prefix.size()));
    }
    // drop trailing template args: Vector<Sprite> -> Vector
    if (auto lt = trimmed.find('<'); lt != std::string::npos) trimmed = trim_copy(trimmed.substr(0, lt));
    return trimmed;
}

std::vector<std::string> split_path(std::string_view path) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    for (std::size_t i = 0; i < path.size(); ++i) {
        if (path[i] == '.') {
            parts.emplace_back(path.substr(start, i - start));
            start = i + 1;
        } else if (path[i] == ':' && i + 1 < path.size() && path[i + 1] == ':') {
            parts.emplace_back(path.substr(start, i - start));
            start = i + 2;
            ++i;
        }
    }
    parts.emplace_back(path.substr(start));
    return parts;
}

std::string join_dotted(const std::vector<std::string>& parts, std::size_t from = 0) {
    std::string out;
    for (std::size_t i = from; i < parts.size(); ++i) {
        if (i > from) out.push_back('.');
        out += parts[i];
    }
    return out;
}

struct LibMatcher {
    const LibrarySpec& lib;
    std::set<std::string, std::less<>> lib_types;

    explicit LibMatcher(const LibrarySpec& spec) : lib(spec) {
        lib_types.insert(spec.lib_types.begin(), spec.lib_types.end());
    }

    bool path_has_prefix(const std::string& dotted) const {
        for (const std::string& prefix : lib.qualifier_prefixes) {
            if (dotted == prefix) return true;
            if (dotted.size() > prefix.size() && dotted.compare(0, prefix.size(), prefix) == 0 &&
                dotted[prefix.size()] == '.')
                return true;
        }
        return false;
    }

    bool is_lib_type(std::string_view type_text) const {
        std::string stripped = strip_type_sigils(type_text);
        if (stripped.empty()) return false;
        std::vector<std::string> parts = split_path(stripped);
        if (path_has_prefix(join_dotted(parts))) return true;
        return lib_types.count(parts.back()) > 0;
    }

    /// "gin.Context" from "*gin.Context"; "Sprite" from "cocos2d::Sprite*".
    std::string type_base(std::string_view type_text) const {
        std::string stripped = strip_type_sigils(type_text);
        std::vector<std::string> parts = split_path(stripped);
        return parts.back();
    }
};

/// Dotted callee path of a call's callee when it is a plain ident/selector
/// chain; empty when the base is itself a call or other expression.
std::vector<std::string> callee_segments(const Node& callee, const Node** base_call) {
    *base_call = nullptr;
    std::vector<std::string> rev;
    const Node* node = &callee;
    while (node->kind == NodeKind::SelectorExpr && node->children.size() == 2) {
        rev.push_back(node->children[1].leaf_text);
        node = &node->children[0];
    }
    if (node->kind == NodeKind::Identifier) {
        rev.push_back(node->leaf_text);
    } else if (node->kind == NodeKind::CallExpr) {
        *base_call = node;
    } else {
        return {};
    }
    std::reverse(rev.begin(), rev.end());
    return rev;
}

struct CallSite {
    const Node* node;
    ByteSpan stmt;
};

void collect_calls(const Node& node, ByteSpan stmt, std::vector<CallSite>& out) {
    ByteSpan cur = is_statement_kind(node.kind) ? node.span : stmt;
    if (node.kind == NodeKind::CallExpr) out.push_back({&node, cur});
    for (const Node& child : node.children) collect_calls(child, cur, out);
}

class CallResolver {
  public:
    CallResolver(const LibrarySpec& lib, const std::vector<TypedVar>& typed_vars)
        : matcher_(lib) {
        for (const TypedVar& var : typed_vars)
            vars_.emplace(var.var_name, var.type_text);  // first definition wins
    }

    struct Resolution {
        std::string qualified;
        std::optional<std::string> receiver_var;
    };

    std::optional<Resolution> resolve(const Node& call) const {
        if (call.children.empty()) return std::nullopt;
        const Node* base_call = nullptr;
        std::vector<std::string> segs = callee_segments(call.children[0], &base_call);

        if (base_call) return resolve_chained(*base_call, segs);
        if (segs.empty()) return std::nullopt;
        std::string dotted = join_dotted(segs);

        if (matcher_.path_has_prefix(dotted)) return Resolution{dotted, std::nullopt};

        // static call through a library type: Sprite::create(...)
        if (segs.size() >= 2) {
            for (std::size_t i = 0; i + 1 < segs.size(); ++i) {
                if (matcher_.lib_types.count(segs[i])) {
                    return Resolution{matcher_.lib.canonical_prefix() + "." + join_dotted(segs, i),
                                      std::nullopt};
                }
            }
        }

        // method on a targeted variable
        if (segs.size() >= 2) {
            auto it = vars_.find(segs.front());
            if (it != vars_.end() && matcher_.is_lib_type(it->second)) {
                std::string base = matcher_.type_base(it->second);
                return Resolution{matcher_.lib.canonical_prefix() + "." + base + "." + segs.back(),
                                  segs.front()};
            }
        }
        return std::nullopt;
    }

  private:
    // method invoked on the result of another call: a.B().C()
    std::optional<Resolution> resolve_chained(const Node& inner,
                                              const std::vector<std::string>& segs) const {
        if (segs.empty()) return std::nullopt;
        auto inner_res = resolve(inner);
        if (!inner_res) return std::nullopt;
        const std::string& method = segs.back();

        auto mapped = matcher_.lib.type_map.find(inner_res->qualified);
        if (mapped != matcher_.lib.type_map.end() && !mapped->second.empty() &&
            matcher_.is_lib_type(mapped->second.front())) {
            std::string base = matcher_.type_base(mapped->second.front());
            return Resolution{matcher_.lib.canonical_prefix() + "." + base + "." + method,
                              std::nullopt};
        }
        // fallback: attribute to the inner call's receiver type when it has one
        std::vector<std::string> parts = split_path(inner_res->qualified);
        if (parts.size() >= 3) {
            return Resolution{matcher_.lib.canonical_prefix() + "." + parts[parts.size() - 2] +
                                  "." + method,
                              std::nullopt};
        }
        return std::nullopt;
    }

    LibMatcher matcher_;
    std::map<std::string, std::string> vars_;
};

}  // namespace

std::vector<FunctionSpan> extract_functions(const SyntaxTree& tree) {
    std::vector<const Node*> nodes;
    collect_function_nodes(tree.root, nodes);
    std::vector<FunctionSpan> out;
    out.reserve(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const Node& fn = *nodes[i];
        const Node* name = child_of_kind(fn, NodeKind::Name);
        const Node* block = child_of_kind(fn, NodeKind::Block);
        if (!name || !block) continue;

        FunctionSpan span;
        span.qualified_name = name->leaf_text;
        std::vector<std::string> parts = split_path(name->leaf_text);
        span.name = parts.back();
        span.node_index = i;
        span.body_span = block->span;

        std::size_t sig_end = block->span.begin;
        while (sig_end > fn.span.begin &&
               std::isspace(static_cast<unsigned char>(tree.text[sig_end - 1])))
            --sig_end;
        span.signature_span = {fn.span.begin, sig_end};

        if (const Node* params = child_of_kind(fn, NodeKind::ParamList))
            span.params = params_from_list(tree, *params);
        if (const Node* recv = child_of_kind(fn, NodeKind::Receiver)) {
            std::vector<TypedVar> recv_vars = params_from_list(tree, *recv);
            if (!recv_vars.empty()) span.receiver = recv_vars.front();
        }
        out.push_back(std::move(span));
    }
    return out;
}

std::vector<TypedVar> collect_typed_variables(const SyntaxTree& tree, const FunctionSpan& fn,
                                              const LibrarySpec& lib) {
    std::vector<TypedVar> vars;
    if (fn.receiver && !fn.receiver->type_text.empty()) vars.push_back(*fn.receiver);
    for (const TypedVar& param : fn.params)
        if (!param.type_text.empty()) vars.push_back(param);

    std::vector<const Node*> nodes;
    collect_function_nodes(tree.root, nodes);
    if (fn.node_index >= nodes.size()) return vars;
    const Node* block = child_of_kind(*nodes[fn.node_index], NodeKind::Block);
    if (!block) return vars;

    // resolve `x := call(...)` / `auto x = call(...)` via the library's
    // factory-return-type map, positionally for multi-value assignments;
    // keys are tried both as written and as the resolved qualified name
    // (method factories like `router.Group` resolve through the receiver)
    auto resolve_from_call = [&](const Node& rhs, const std::vector<std::string>& names) {
        if (rhs.kind != NodeKind::CallExpr || rhs.children.empty()) return;
        const Node* base_call = nullptr;
        std::vector<std::string> segs = callee_segments(rhs.children[0], &base_call);
        auto it = lib.type_map.end();
        if (!segs.empty()) it = lib.type_map.find(join_dotted(segs));
        if (it == lib.type_map.end()) {
            CallResolver resolver(lib, vars);
            if (auto res = resolver.resolve(rhs)) it = lib.type_map.find(res->qualified);
        }
        if (it == lib.type_map.end()) return;
        const std::vector<std::string>& types = it->second;
        for (std::size_t i = 0; i < names.size() && i < types.size(); ++i) {
            if (names[i] == "_") continue;
            vars.push_back({names[i], types[i]});
        }
    };

    // walk in source order
    std::function<void(const Node&)> walk = [&](const Node& node) {
        if (node.kind == NodeKind::DeclStmt) {
            const Node* type = child_of_kind(node, NodeKind::TypeRef);
            std::vector<std::string> names;
            for (const Node& child : node.children)
                if (child.kind == NodeKind::Name) names.push_back(child.leaf_text);
            if (type && !names.empty()) {
                std::string type_text = trim_copy(tree.text_of(type->span));
                bool is_auto = type_text == "auto" || type_text == "const auto" ||
                               type_text == "auto*" || type_text == "auto&";
                if (!is_auto) {
                    for (const std::string& name : names) vars.push_back({name, type_text});
                } else {
                    for (const Node& child : node.children)
                        if (child.kind == NodeKind::CallExpr) resolve_from_call(child, names);
                }
            } else if (!names.empty()) {
                for (const Node& child : node.children)
                    if (child.kind == NodeKind::CallExpr) resolve_from_call(child, names);
            }
        } else if (node.kind == NodeKind::AssignStmt) {
            // gather `a, b := call(...)`
            std::size_t op_idx = node.children.size();
            for (std::size_t i = 0; i < node.children.size(); ++i) {
                if (node.children[i].kind == NodeKind::OperatorLeaf) {
                    op_idx = i;
                    break;
                }
            }
            if (op_idx < node.children.size() && node.children[op_idx].leaf_text == ":=") {
                std::vector<std::string> names;
                bool all_idents = true;
                for (std::size_t i = 0; i < op_idx; ++i) {
                    if (node.children[i].kind == NodeKind::Identifier)
                        names.push_back(node.children[i].leaf_text);
                    else
                        all_idents = false;
                }
                if (all_idents && op_idx + 1 < node.children.size() && !names.empty())
                    resolve_from_call(node.children[op_idx + 1], names);
            }
        }
        for (const Node& child : node.children) walk(child);
    };
    walk(*block);
    return vars;
}

std::vector<ApiCall> extract_api_calls(const SyntaxTree& tree, const FunctionSpan& fn,
                                       const LibrarySpec& lib,
                                       const std::vector<TypedVar>& typed_vars) {
    std::vector<const Node*> nodes;
    collect_function_nodes(tree.root, nodes);
    if (fn.node_index >= nodes.size()) return {};
    const Node* block = child_of_kind(*nodes[fn.node_index], NodeKind::Block);
    if (!block) return {};

    std::vector<CallSite> sites;
    collect_calls(*block, block->span, sites);

    CallResolver resolver(lib, typed_vars);
    std::vector<ApiCall> calls;
    for (const CallSite& site : sites) {
        auto res = resolver.resolve(*site.node);
        if (!res) continue;
        ApiCall call;
        call.qualified_name = std::move(res->qualified);
        call.call_span = site.node->span;
        call.stmt_span = site.stmt;
        call.receiver_var = std::move(res->receiver_var);
        calls.push_back(std::move(call));
    }
    std::stable_sort(calls.begin(), calls.end(), [](const ApiCall& a, const ApiCall& b) {
        if (a.call_span.begin != b.call_span.begin) return a.call_span.begin < b.call_span.begin;
        return a.call_span.end < b.call_span.end;
    });
    return calls;
}

bool uses_library(std::string_view file_text, const LibrarySpec& lib) {
    LexOutput lexed = lex(file_text, lib.subject_language);
    auto matches = [&](std::string_view target) {
        for (const std::string& pattern : lib.import_patterns)
            if (target.find(pattern) != std::string_view::npos) return true;
        return false;
    };

    if (lib.subject_language == Language::Cpp) {
        for (const Token& tok : lexed.trivia) {
            if (tok.kind != TokKind::Preproc) continue;
            std::string_view line = file_text.substr(tok.begin, tok.end - tok.begin);
            std::size_t pos = line.find("include");
            if (pos == std::string_view::npos) continue;
            std::size_t open = line.find_first_of("<\"", pos);
            if (open == std::string_view::npos) continue;
            char closer = line[open] == '<' ? '>' : '"';
            std::size_t close = line.find(closer, open + 1);
            if (close == std::string_view::npos) continue;
            if (matches(line.substr(open + 1, close - open - 1))) return true;
        }
        return false;
    }

    const std::vector<Token>& toks = lexed.tokens;
    for (std::size_t i = 0; i < toks.size(); ++i) {
        if (toks[i].kind != TokKind::Ident) continue;
        if (token_text(file_text, toks[i]) != "import") continue;
        std::size_t j = i + 1;
        auto unquote = [&](const Token& tok) {
            std::string_view raw = token_text(file_text, tok);
            if (raw.size() >= 2) return raw.substr(1, raw.size() - 2);
            return raw;
        };
        if (j < toks.size() && toks[j].kind == TokKind::Str) {
            if (matches(unquote(toks[j]))) return true;
            continue;
        }
        if (j < toks.size() && token_text(file_text, toks[j]) == "(") {
            ++j;
            while (j < toks.size() && token_text(file_text, toks[j]) != ")") {
                if (toks[j].kind == TokKind::Str && matches(unquote(toks[j]))) return true;
                ++j;
            }
        }
    }
    return false;
}

}  // namespace domforge::syntax
