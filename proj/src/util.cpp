#include "domforge/util.hpp"

#include <openssl/sha.h>

#include <cctype>
#include <fstream>
#include <sstream>

#include "domforge/common.hpp"

namespace domforge {

std::string to_string(Language lang) {
    return lang == Language::Go ? "go" : "cpp";
}

Language language_from_string(const std::string& s) {
    if (s == "go" || s == "Go") return Language::Go;
    if (s == "cpp" || s == "Cpp" || s == "c++") return Language::Cpp;
    throw Error("unknown subject_language: \"" + s + "\" (expected \"go\" or \"cpp\")");
}

}  // namespace domforge

namespace domforge::util {

std::string sha256_hex(std::string_view data) {
    unsigned char digest[SHA256_DIGEST_LENGTH];
    SHA256(reinterpret_cast<const unsigned char*>(data.data()), data.size(), digest);
    static const char* hex = "0123456789abcdef";
    std::string out;
    out.reserve(SHA256_DIGEST_LENGTH * 2);
    for (unsigned char byte : digest) {
        out.push_back(hex[byte >> 4]);
        out.push_back(hex[byte & 0xf]);
    }
    return out;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open for reading: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) throw Error("read failed: " + path);
    return std::move(buf).str();
}

void write_file(const std::string& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open for writing: " + path);
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw Error("write failed: " + path);
}

std::vector<std::string_view> split_lines_keep_ends(std::string_view text) {
    std::vector<std::string_view> lines;
    std::size_t start = 0;
    for (std::size_t i = 0; i < text.size(); ++i) {
        if (text[i] == '\n') {
            lines.push_back(text.substr(start, i - start + 1));
            start = i + 1;
        }
    }
    if (start < text.size()) lines.push_back(text.substr(start));
    return lines;
}

std::string_view leading_indent(std::string_view line) {
    std::size_t n = 0;
    while (n < line.size() && (line[n] == ' ' || line[n] == '\t')) ++n;
    return line.substr(0, n);
}

std::string lower_first(std::string s) {
    if (!s.empty()) s[0] = static_cast<char>(std::tolower(static_cast<unsigned char>(s[0])));
    return s;
}

std::string upper_first(std::string s) {
    if (!s.empty()) s[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(s[0])));
    return s;
}

std::string collapse_whitespace(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    bool in_space = false;
    for (unsigned char ch : text) {
        if (std::isspace(ch)) {
            in_space = true;
            continue;
        }
        if (in_space && !out.empty()) out.push_back(' ');
        in_space = false;
        out.push_back(static_cast<char>(ch));
    }
    return out;
}

std::string_view first_sentence(std::string_view text) {
    for (std::size_t i = 0; i < text.size(); ++i) {
        if (text[i] != '.') continue;
        if (i + 1 == text.size() || std::isspace(static_cast<unsigned char>(text[i + 1]))) {
            return text.substr(0, i + 1);
        }
    }
    return text;
}

namespace {

bool class_match(std::string_view pattern, std::size_t& pi, char ch) {
    // pattern[pi] == '['; advances pi past the closing ']'
    std::size_t i = pi + 1;
    bool negate = false;
    if (i < pattern.size() && (pattern[i] == '!' || pattern[i] == '^')) {
        negate = true;
        ++i;
    }
    bool matched = false;
    bool first = true;
    while (i < pattern.size() && (first || pattern[i] != ']')) {
        first = false;
        char lo = pattern[i];
        if (i + 2 < pattern.size() && pattern[i + 1] == '-' && pattern[i + 2] != ']') {
            char hi = pattern[i + 2];
            if (lo <= ch && ch <= hi) matched = true;
            i += 3;
        } else {
            if (lo == ch) matched = true;
            ++i;
        }
    }
    pi = (i < pattern.size()) ? i + 1 : i;
    return matched != negate;
}

}  // namespace

bool glob_match(std::string_view pattern, std::string_view name) {
    std::size_t pi = 0, ni = 0;
    std::size_t star_pi = std::string_view::npos, star_ni = 0;
    while (ni < name.size()) {
        if (pi < pattern.size()) {
            char pc = pattern[pi];
            if (pc == '*') {
                star_pi = ++pi;
                star_ni = ni;
                continue;
            }
            if (pc == '?' || (pc != '[' && pc == name[ni])) {
                ++pi;
                ++ni;
                continue;
            }
            if (pc == '[') {
                std::size_t after = pi;
                if (class_match(pattern, after, name[ni])) {
                    pi = after;
                    ++ni;
                    continue;
                }
            }
        }
        if (star_pi == std::string_view::npos) return false;
        pi = star_pi;
        ni = ++star_ni;
    }
    while (pi < pattern.size() && pattern[pi] == '*') ++pi;
    return pi == pattern.size();
}

std::uint64_t SplitMix64::next() {
    state_ += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::uint64_t SplitMix64::bounded(std::uint64_t bound) {
    return next() % bound;
}

}  // namespace domforge::util
