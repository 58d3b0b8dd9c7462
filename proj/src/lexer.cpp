#include <array>
#include <cstring>
#include <string_view>

#include "domforge/syntax.hpp"

namespace domforge::syntax {

namespace {

bool is_ident_start(unsigned char ch) {
    return std::isalpha(ch) || ch == '_' || ch >= 0x80;
}

bool is_ident_char(unsigned char ch) {
    return std::isalnum(ch) || ch == '_' || ch >= 0x80;
}

// Longest-match operator table; entries ordered by length within lookup.
constexpr std::array<std::string_view, 12> kOps3 = {
    "<<=", ">>=", "...", "&^=", "->*", "<=>", "", "", "", "", "", ""};
constexpr std::array<std::string_view, 32> kOps2 = {
    ":=", "::", "->", "++", "--", "<<", ">>", "<=", ">=", "==", "!=", "&&",
    "||", "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", "<-", "&^", ".*",
    "",   "",   "",   "",   "",   "",   "",   ""};

class Lexer {
  public:
    Lexer(std::string_view text, Language lang) : text_(text), lang_(lang) {}

    LexOutput run() {
        while (pos_ < text_.size()) {
            char ch = text_[pos_];
            if (ch == '\n') {
                ++line_;
                ++pos_;
                at_line_start_ = true;
                continue;
            }
            if (ch == ' ' || ch == '\t' || ch == '\r' || ch == '\v' || ch == '\f') {
                ++pos_;
                continue;
            }
            std::size_t start = pos_;
            std::uint32_t start_line = line_;
            bool line_start = at_line_start_;
            at_line_start_ = false;

            if (lang_ == Language::Cpp && ch == '#' && line_start) {
                lex_preproc();
                emit_trivia(TokKind::Preproc, start, start_line);
                continue;
            }
            if (ch == '/' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '/') {
                while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
                emit_trivia(TokKind::Comment, start, start_line);
                continue;
            }
            if (ch == '/' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '*') {
                pos_ += 2;
                while (pos_ + 1 < text_.size() && !(text_[pos_] == '*' && text_[pos_ + 1] == '/')) {
                    if (text_[pos_] == '\n') ++line_;
                    ++pos_;
                }
                pos_ = (pos_ + 1 < text_.size()) ? pos_ + 2 : text_.size();
                emit_trivia(TokKind::Comment, start, start_line);
                continue;
            }
            if (ch == '"' || ch == '\'') {
                lex_quoted(ch);
                emit(TokKind::Str, start, start_line);
                continue;
            }
            if (ch == '`' && lang_ == Language::Go) {
                ++pos_;
                while (pos_ < text_.size() && text_[pos_] != '`') {
                    if (text_[pos_] == '\n') ++line_;
                    ++pos_;
                }
                if (pos_ < text_.size()) ++pos_;
                emit(TokKind::Str, start, start_line);
                continue;
            }
            if (is_ident_start(static_cast<unsigned char>(ch))) {
                while (pos_ < text_.size() && is_ident_char(static_cast<unsigned char>(text_[pos_]))) ++pos_;
                // C++ string prefixes: R"(..)", L"..", u8"..", etc.
                if (lang_ == Language::Cpp && pos_ < text_.size() && (text_[pos_] == '"' || text_[pos_] == '\'')) {
                    std::string_view prefix = text_.substr(start, pos_ - start);
                    if (prefix == "R" || prefix == "LR" || prefix == "uR" || prefix == "UR" || prefix == "u8R") {
                        lex_raw_cpp();
                        emit(TokKind::Str, start, start_line);
                        continue;
                    }
                    if (prefix == "L" || prefix == "u" || prefix == "U" || prefix == "u8") {
                        lex_quoted(text_[pos_]);
                        emit(TokKind::Str, start, start_line);
                        continue;
                    }
                }
                emit(TokKind::Ident, start, start_line);
                continue;
            }
            if (std::isdigit(static_cast<unsigned char>(ch)) ||
                (ch == '.' && pos_ + 1 < text_.size() &&
                 std::isdigit(static_cast<unsigned char>(text_[pos_ + 1])))) {
                lex_number();
                emit(TokKind::Number, start, start_line);
                continue;
            }
            lex_punct();
            emit(TokKind::Punct, start, start_line);
        }
        return std::move(out_);
    }

  private:
    void emit(TokKind kind, std::size_t start, std::uint32_t start_line) {
        out_.tokens.push_back({kind, static_cast<std::uint32_t>(start),
                               static_cast<std::uint32_t>(pos_), start_line});
    }
    void emit_trivia(TokKind kind, std::size_t start, std::uint32_t start_line) {
        out_.trivia.push_back({kind, static_cast<std::uint32_t>(start),
                               static_cast<std::uint32_t>(pos_), start_line});
    }

    void lex_preproc() {
        // directive runs to end of line, honoring backslash continuations
        while (pos_ < text_.size() && text_[pos_] != '\n') {
            if (text_[pos_] == '\\' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '\n') {
                ++line_;
                pos_ += 2;
                continue;
            }
            ++pos_;
        }
    }

    void lex_quoted(char quote) {
        ++pos_;  // opening quote
        while (pos_ < text_.size()) {
            char ch = text_[pos_];
            if (ch == '\\' && pos_ + 1 < text_.size()) {
                pos_ += 2;
                continue;
            }
            if (ch == quote) {
                ++pos_;
                return;
            }
            if (ch == '\n') return;  // unterminated: stop at line end
            ++pos_;
        }
    }

    void lex_raw_cpp() {
        // at '"' of R"delim( ... )delim"
        ++pos_;
        std::size_t delim_start = pos_;
        while (pos_ < text_.size() && text_[pos_] != '(' && text_[pos_] != '\n') ++pos_;
        if (pos_ >= text_.size() || text_[pos_] != '(') return;
        std::string closer = ")";
        closer.append(text_.substr(delim_start, pos_ - delim_start));
        closer.push_back('"');
        ++pos_;
        std::size_t found = text_.find(closer, pos_);
        if (found == std::string_view::npos) {
            for (; pos_ < text_.size(); ++pos_)
                if (text_[pos_] == '\n') ++line_;
            return;
        }
        for (std::size_t i = pos_; i < found; ++i)
            if (text_[i] == '\n') ++line_;
        pos_ = found + closer.size();
    }

    void lex_number() {
        ++pos_;
        while (pos_ < text_.size()) {
            char ch = text_[pos_];
            if (is_ident_char(static_cast<unsigned char>(ch)) || ch == '.') {
                ++pos_;
                continue;
            }
            // exponent signs: 1e+5, 0x1p-3
            if ((ch == '+' || ch == '-') && pos_ > 0 &&
                (text_[pos_ - 1] == 'e' || text_[pos_ - 1] == 'E' || text_[pos_ - 1] == 'p' ||
                 text_[pos_ - 1] == 'P')) {
                ++pos_;
                continue;
            }
            // C++ digit separator 1'000
            if (ch == '\'' && lang_ == Language::Cpp && pos_ + 1 < text_.size() &&
                std::isalnum(static_cast<unsigned char>(text_[pos_ + 1]))) {
                ++pos_;
                continue;
            }
            break;
        }
    }

    void lex_punct() {
        std::string_view rest = text_.substr(pos_);
        for (std::string_view op : kOps3) {
            if (!op.empty() && rest.substr(0, 3) == op) {
                if (op == "&^=" && lang_ != Language::Go) continue;
                pos_ += 3;
                return;
            }
        }
        for (std::string_view op : kOps2) {
            if (!op.empty() && rest.substr(0, 2) == op) {
                if ((op == ":=" || op == "<-" || op == "&^") && lang_ != Language::Go) continue;
                if ((op == "::" || op == "->" || op == ".*") && lang_ != Language::Cpp) continue;
                pos_ += 2;
                return;
            }
        }
        ++pos_;
    }

    std::string_view text_;
    Language lang_;
    std::size_t pos_ = 0;
    std::uint32_t line_ = 0;
    bool at_line_start_ = true;
    LexOutput out_;
};

}  // namespace

LexOutput lex(std::string_view text, Language lang) {
    return Lexer(text, lang).run();
}

}  // namespace domforge::syntax
