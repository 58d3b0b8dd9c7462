#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "domforge/common.hpp"
#include "domforge/library_spec.hpp"

namespace domforge::syntax {

// ---------------------------------------------------------------------------
// Tokens

enum class TokKind : std::uint8_t { Ident, Number, Str, Punct, Comment, Preproc };

struct Token {
    TokKind kind;
    std::uint32_t begin;
    std::uint32_t end;
    std::uint32_t line;  // 0-based line of the first byte
};

struct LexOutput {
    std::vector<Token> tokens;  // code tokens, trivia excluded
    std::vector<Token> trivia;  // comments and preprocessor directives
};

LexOutput lex(std::string_view text, Language lang);

// ---------------------------------------------------------------------------
// Tree

enum class NodeKind : std::uint8_t {
    SourceFile,
    FunctionDecl,
    Receiver,
    Name,
    ParamList,
    Param,
    TypeRef,
    ResultList,
    Block,
    ExprStmt,
    AssignStmt,
    DeclStmt,
    ReturnStmt,
    IfStmt,
    ForStmt,
    WhileStmt,
    DoStmt,
    SwitchStmt,
    BranchStmt,
    GoStmt,
    DeferStmt,
    KeywordStmt,
    EmptyStmt,
    CallExpr,
    ArgList,
    SelectorExpr,
    IndexExpr,
    ParenExpr,
    BraceGroup,
    UnaryExpr,
    BinaryExpr,
    Identifier,
    NumberLit,
    StringLit,
    OperatorLeaf,
    KeywordLeaf,
    Error,
};

std::string_view node_kind_name(NodeKind kind);

struct Node {
    NodeKind kind;
    ByteSpan span;
    /// For OperatorLeaf/KeywordLeaf: the token text; used in kind
    /// serialization so `a+b` and `a-b` stay distinguishable.
    std::string leaf_text;
    std::vector<Node> children;

    bool is_leaf() const { return children.empty(); }
};

/// Concrete syntax tree. Tolerant: malformed regions become Error nodes and
/// parsing continues after them.
struct SyntaxTree {
    Language lang = Language::Go;
    std::string text;
    Node root;
    std::vector<Token> tokens;
    std::vector<Token> trivia;

    std::string_view text_of(const ByteSpan& span) const {
        return std::string_view(text).substr(span.begin, span.size());
    }
};

SyntaxTree parse_source(std::string text, Language lang);

// ---------------------------------------------------------------------------
// Functions

struct TypedVar {
    std::string var_name;
    std::string type_text;
};

struct FunctionSpan {
    std::string name;            // simple name (last path segment)
    std::string qualified_name;  // e.g. "HelloWorld::init" for out-of-line methods
    ByteSpan signature_span;     // from the declaration keyword/type through the last pre-body token
    ByteSpan body_span;          // from '{' through matching '}'
    std::vector<TypedVar> params;
    std::optional<TypedVar> receiver;  // Go methods only
    std::size_t node_index = 0;        // position among the tree's function nodes
};

std::vector<FunctionSpan> extract_functions(const SyntaxTree& tree);

std::vector<TypedVar> collect_typed_variables(const SyntaxTree& tree, const FunctionSpan& fn,
                                              const LibrarySpec& lib);

struct ApiCall {
    std::string qualified_name;
    ByteSpan call_span;
    ByteSpan stmt_span;
    std::optional<std::string> receiver_var;

    bool operator==(const ApiCall&) const = default;
};

std::vector<ApiCall> extract_api_calls(const SyntaxTree& tree, const FunctionSpan& fn,
                                       const LibrarySpec& lib,
                                       const std::vector<TypedVar>& typed_vars);

/// True iff an import/include statement of `file_text` matches one of the
/// library's import_patterns (substring match inside the import target only).
bool uses_library(std::string_view file_text, const LibrarySpec& lib);

/// Number of top-level Error nodes in the tree (regions dropped by recovery).
std::size_t error_region_count(const SyntaxTree& tree);

/// Reserved words of the subject language (versioned data asset; Go 1.21 /
/// C++20 lists).
const std::vector<std::string>& keywords(Language lang);
bool is_keyword(std::string_view word, Language lang);

}  // namespace domforge::syntax
