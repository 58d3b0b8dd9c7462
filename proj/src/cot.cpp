#include "domforge/cot.hpp"

#include <algorithm>
#include <map>

#include "domforge/util.hpp"

namespace domforge::cot {

namespace {

struct StepStart {
    std::size_t line;
    std::vector<std::string> apis;
};

void add_unique(std::vector<std::string>& apis, const std::string& name) {
    if (std::find(apis.begin(), apis.end(), name) == apis.end()) apis.push_back(name);
}

/// Line index of each API-bearing statement, with that statement's API
/// names. Calls sharing a statement span (chains) or a starting line merge
/// into one start.
std::vector<StepStart> step_starts(const corpus::FunctionRecord& record,
                                   const std::vector<std::string_view>& lines) {
    std::vector<std::size_t> line_begin;
    line_begin.reserve(lines.size());
    std::size_t offset = 0;
    for (std::string_view line : lines) {
        line_begin.push_back(offset);
        offset += line.size();
    }
    auto line_of = [&](std::size_t pos) {
        auto it = std::upper_bound(line_begin.begin(), line_begin.end(), pos);
        return static_cast<std::size_t>(it - line_begin.begin()) - 1;
    };

    std::map<std::size_t, std::vector<std::string>> by_line;
    std::vector<std::size_t> order;
    for (const syntax::ApiCall& call : record.api_calls) {
        if (lines.empty()) break;
        std::size_t line = line_of(std::min(call.stmt_span.begin, record.body.size() - 1));
        auto [it, inserted] = by_line.try_emplace(line);
        if (inserted) order.push_back(line);
        add_unique(it->second, call.qualified_name);
    }
    std::sort(order.begin(), order.end());
    std::vector<StepStart> starts;
    starts.reserve(order.size());
    for (std::size_t line : order) starts.push_back({line, by_line[line]});
    return starts;
}

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) out += sep;
        out += parts[i];
    }
    return out;
}

std::vector<std::string> task_texts(const std::vector<std::string>& apis,
                                    const knowledge::KnowledgeBase* kb) {
    std::vector<std::string> tasks;
    if (!kb) return tasks;
    for (const std::string& api : apis) {
        if (const knowledge::KnowledgeEntry* entry = kb->lookup(api)) {
            std::string text = task_text(*entry);
            if (!text.empty()) tasks.push_back(std::move(text));
        }
    }
    return tasks;
}

constexpr std::string_view kApiMarker = "// [API] ";
constexpr std::string_view kTaskMarker = "// [TASK] ";

bool is_annotation_line(std::string_view line) {
    std::size_t i = 0;
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    std::string_view content = line.substr(i);
    return content.rfind(kApiMarker, 0) == 0 || content.rfind(kTaskMarker, 0) == 0;
}

}  // namespace

std::string task_text(const knowledge::KnowledgeEntry& entry) {
    std::string sentence(util::first_sentence(entry.docstring));
    if (!sentence.empty() && sentence.back() == '.') sentence.pop_back();
    return util::lower_first(std::move(sentence));
}

std::string render_knowledge_lines(const std::vector<std::string>& apis,
                                   const knowledge::KnowledgeBase* kb,
                                   std::string_view indent) {
    if (apis.empty()) return {};
    std::string out;
    out += indent;
    out += kApiMarker;
    out += join(apis, ", ");
    out.push_back('\n');
    std::vector<std::string> tasks = task_texts(apis, kb);
    if (!tasks.empty()) {
        out += indent;
        out += kTaskMarker;
        out += join(tasks, "; ");
        out.push_back('\n');
    }
    return out;
}

std::vector<CotStep> decompose_steps(const corpus::FunctionRecord& record) {
    if (record.body.empty()) return {};
    std::vector<std::string_view> lines = util::split_lines_keep_ends(record.body);
    std::vector<StepStart> starts = step_starts(record, lines);

    auto chunk = [&](std::size_t lo, std::size_t hi) {
        std::string out;
        for (std::size_t i = lo; i < hi && i < lines.size(); ++i) out += std::string(lines[i]);
        return out;
    };

    std::vector<CotStep> steps;
    if (starts.empty()) {
        steps.push_back({KnowledgeState{}, record.body});
        return steps;
    }
    if (starts.front().line > 0)
        steps.push_back({KnowledgeState{}, chunk(0, starts.front().line)});
    for (std::size_t i = 0; i < starts.size(); ++i) {
        std::size_t hi = (i + 1 < starts.size()) ? starts[i + 1].line : lines.size();
        CotStep step;
        step.knowledge.api_state = starts[i].apis;
        step.code = chunk(starts[i].line, hi);
        steps.push_back(std::move(step));
    }
    return steps;
}

std::string annotate_function(const corpus::FunctionRecord& record,
                              const knowledge::KnowledgeBase& kb) {
    std::vector<std::string_view> lines = util::split_lines_keep_ends(record.body);
    std::vector<StepStart> starts = step_starts(record, lines);
    std::map<std::size_t, const StepStart*> at_line;
    for (const StepStart& start : starts) at_line[start.line] = &start;

    std::string out;
    out.reserve(record.body.size());
    for (std::size_t i = 0; i < lines.size(); ++i) {
        auto it = at_line.find(i);
        if (it != at_line.end())
            out += render_knowledge_lines(it->second->apis, &kb, util::leading_indent(lines[i]));
        out += std::string(lines[i]);
    }
    return out;
}

std::string strip_states(std::string_view annotated) {
    std::string out;
    out.reserve(annotated.size());
    for (std::string_view line : util::split_lines_keep_ends(annotated)) {
        if (is_annotation_line(line)) continue;
        out += std::string(line);
    }
    return out;
}

TrainingSequence build_training_sequence(const corpus::FunctionRecord& record,
                                         const knowledge::KnowledgeBase& kb) {
    TrainingSequence out;
    out.sequence.input = record.signature;
    out.sequence.steps = decompose_steps(record);
    for (CotStep& step : out.sequence.steps) {
        if (step.knowledge.api_state.empty()) continue;
        step.knowledge.task_state = join(task_texts(step.knowledge.api_state, &kb), "; ");
    }
    out.serialized = record.signature + " " + annotate_function(record, kb);
    return out;
}

}  // namespace domforge::cot
