#pragma once

#include <map>
#include <string>
#include <vector>

#include "domforge/common.hpp"

namespace domforge {

/// Configuration describing one target library: how to recognize its
/// imports, how calls into it are qualified, which of its types appear in
/// user code, and the return types of known constructor/factory calls
/// (used to resolve `:=` / `auto` declarations and chained calls).
struct LibrarySpec {
    std::string name;
    Language subject_language = Language::Go;
    std::vector<std::string> import_patterns;
    std::vector<std::string> qualifier_prefixes;
    /// Type names defined by the library, as they appear unqualified in
    /// user code (mostly relevant for C++ after using-directives).
    std::vector<std::string> lib_types;
    /// Dotted callee path or qualified API name -> ordered return types.
    std::map<std::string, std::vector<std::string>> type_map;

    /// Canonical prefix used when constructing qualified API names.
    const std::string& canonical_prefix() const {
        if (qualifier_prefixes.empty()) throw Error("LibrarySpec \"" + name + "\": no qualifier_prefixes");
        return qualifier_prefixes.front();
    }

    void validate() const {
        if (import_patterns.empty()) throw Error("LibrarySpec \"" + name + "\": no import_patterns");
        if (qualifier_prefixes.empty()) throw Error("LibrarySpec \"" + name + "\": no qualifier_prefixes");
    }
};

}  // namespace domforge
