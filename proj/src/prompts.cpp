#include "domforge/prompts.hpp"

#include "domforge/util.hpp"

namespace domforge::prompts {

PromptKind prompt_kind_from_string(const std::string& s) {
    if (s == "signature") return PromptKind::Signature;
    if (s == "library-import" || s == "library_import") return PromptKind::LibraryImport;
    if (s == "api") return PromptKind::Api;
    if (s == "docstring") return PromptKind::Docstring;
    if (s == "api-docstring" || s == "api_docstring") return PromptKind::ApiThenDocstring;
    if (s == "docstring-api" || s == "docstring_api") return PromptKind::DocstringThenApi;
    throw Error("unknown prompt kind: \"" + s + "\"");
}

std::string to_string(PromptKind kind) {
    switch (kind) {
        case PromptKind::Signature: return "signature";
        case PromptKind::LibraryImport: return "library-import";
        case PromptKind::Api: return "api";
        case PromptKind::Docstring: return "docstring";
        case PromptKind::ApiThenDocstring: return "api-docstring";
        case PromptKind::DocstringThenApi: return "docstring-api";
    }
    return "signature";
}

namespace {

std::string joined_apis(const std::vector<std::string>& apis) {
    std::string out;
    for (std::size_t i = 0; i < apis.size(); ++i) {
        if (i) out += ", ";
        out += apis[i];
    }
    return out;
}

/// "gin.RouterGroup.Use adds middleware to the group.", one line per API.
std::vector<std::string> docstring_lines(const PromptSpec& spec) {
    if (!spec.kb) throw Error("prompt: docstring kind requires a knowledge base");
    std::vector<std::string> lines;
    std::vector<std::string> missing;
    for (const std::string& api : spec.apis) {
        const knowledge::KnowledgeEntry* entry = spec.kb->lookup(api);
        if (!entry) {
            missing.push_back(api);
            continue;
        }
        lines.push_back(api + " " + util::lower_first(knowledge::prompt_docstring(*entry)) + ".");
    }
    if (!missing.empty()) {
        std::string what = "prompt: no knowledge entry for: ";
        for (std::size_t i = 0; i < missing.size(); ++i) {
            if (i) what += ", ";
            what += missing[i];
        }
        throw Error(what);
    }
    return lines;
}

std::string joined_lines(const std::vector<std::string>& lines) {
    std::string out;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (i) out.push_back('\n');
        out += lines[i];
    }
    return out;
}

void require_apis(const PromptSpec& spec) {
    if (spec.apis.empty())
        throw Error("prompt: kind \"" + to_string(spec.kind) + "\" requires at least one API");
}

}  // namespace

std::string render_prompt(const PromptSpec& spec) {
    switch (spec.kind) {
        case PromptKind::Signature:
            return "Complete this function: " + spec.signature;
        case PromptKind::LibraryImport:
            if (!spec.library || spec.library->empty())
                throw Error("prompt: library-import kind requires a library name");
            return "Complete this function using " + *spec.library + ": " + spec.signature;
        case PromptKind::Api:
            require_apis(spec);
            return "Complete this function using " + joined_apis(spec.apis) + ": " +
                   spec.signature;
        case PromptKind::Docstring: {
            std::vector<std::string> lines = docstring_lines(spec);
            std::string prefix = lines.empty() ? "" : joined_lines(lines) + "\n";
            return prefix + "Complete this function: " + spec.signature;
        }
        case PromptKind::ApiThenDocstring: {
            require_apis(spec);
            std::vector<std::string> lines = docstring_lines(spec);
            return "Complete this function using " + joined_apis(spec.apis) + ".\n" +
                   joined_lines(lines) + " " + spec.signature;
        }
        case PromptKind::DocstringThenApi: {
            require_apis(spec);
            std::vector<std::string> lines = docstring_lines(spec);
            return joined_lines(lines) + "\nComplete this function using " +
                   joined_apis(spec.apis) + ": " + spec.signature;
        }
    }
    throw Error("prompt: unknown kind");
}

}  // namespace domforge::prompts
