#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace domforge {

inline constexpr const char* kVersion = "0.1.0";

enum class Language { Go, Cpp };

std::string to_string(Language lang);
Language language_from_string(const std::string& s);

/// Half-open byte range [begin, end) into some source text.
struct ByteSpan {
    std::size_t begin = 0;
    std::size_t end = 0;

    std::size_t size() const { return end - begin; }
    bool contains(const ByteSpan& inner) const {
        return begin <= inner.begin && inner.end <= end;
    }
    bool operator==(const ByteSpan&) const = default;
};

/// Base error type for all domforge failures.
class Error : public std::runtime_error {
  public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace domforge
