#include "compminer/report.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>
#include <utility>

#include <json.hpp>

namespace compminer {

namespace {

using nlohmann::json;

std::string fmt1(double value) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.1f", value);
    return buf;
}

void feed(std::uint64_t& hash, std::string_view text) {
    for (const char c : text) {
        hash ^= static_cast<unsigned char>(c);
        hash *= 0x100000001B3ull;
    }
    hash ^= 0x1F;  // field separator
    hash *= 0x100000001B3ull;
}

void feed(std::uint64_t& hash, const ElementRef& element) {
    feed(hash, element.class_fqn);
    switch (element.member_kind) {
        case MemberKind::Method: feed(hash, "m"); break;
        case MemberKind::Field: feed(hash, "f"); break;
        case MemberKind::Class: feed(hash, "c"); break;
    }
    feed(hash, element.member);
}

}  // namespace

std::string input_digest(const std::vector<RefactoringRecord>& records) {
    std::uint64_t hash = 0xCBF29CE484222325ull;
    for (const RefactoringRecord& record : records) {
        feed(hash, record.id);
        feed(hash, record.project);
        feed(hash, record.commit);
        feed(hash, record.timestamp ? format_timestamp(*record.timestamp) : "");
        feed(hash, to_tag(record.kind));
        feed(hash, record.source);
        feed(hash, record.target);
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(hash));
    return buf;
}

std::string render_record_message(const RefactoringRecord& record) {
    const ElementRef& s = record.source;
    const ElementRef& t = record.target;
    switch (record.kind) {
        case RefactoringKind::Extract:
            return "Extract Method " + t.member + " from " + s.member + " in class " +
                   s.class_fqn;
        case RefactoringKind::ExtractMove:
            return "Extract And Move Method " + t.member + " from " + s.member +
                   " in class " + s.class_fqn + " to class " + t.class_fqn;
        case RefactoringKind::PullUpField:
            return "Pull Up Attribute " + s.member + " from class " + s.class_fqn + " to " +
                   t.member + " in class " + t.class_fqn;
        case RefactoringKind::PushDownField:
            return "Push Down Attribute " + s.member + " from class " + s.class_fqn +
                   " to " + t.member + " in class " + t.class_fqn;
        default:
            return std::string(display_name(record.kind)) + " " + s.member + " from class " +
                   s.class_fqn + " to " + t.member + " in class " + t.class_fqn;
    }
}

namespace {

std::string join(const std::set<std::string>& items) {
    std::string out;
    for (const std::string& item : items) {
        if (!out.empty()) out += ", ";
        out += item;
    }
    return out;
}

}  // namespace

std::string render_composite_message(const Composite& composite) {
    const ElementRef& anchor = composite.anchor;
    std::set<std::string> entries;
    switch (composite.kind) {
        case CompositeKind::MethodComposition:
            for (const auto& m : composite.members) entries.insert(m.source.display());
            return "Compose method " + anchor.display() + " From: " + join(entries);
        case CompositeKind::MethodDecomposition:
            for (const auto& m : composite.members) entries.insert(m.target.display());
            return "Decompose method " + anchor.display() + " Into: " + join(entries);
        case CompositeKind::ClassDecomposition:
            for (const auto& m : composite.members) {
                // "m1() to Bar", or the renamed form "m1() to Bar.n1()".
                entries.insert(m.source.member == m.target.member
                                   ? m.source.member + " to " + m.target.class_fqn
                                   : m.source.member + " to " + m.target.display());
            }
            return "Decompose class " + anchor.class_fqn + " Moving: " + join(entries);
        case CompositeKind::InlineMethod:
            for (const auto& m : composite.members) entries.insert(m.target.display());
            return "Inline method " + anchor.display() + " Into: " + join(entries);
        case CompositeKind::PullUpMethod:
        case CompositeKind::PullUpField:
            for (const auto& m : composite.members) entries.insert(m.source.class_fqn);
            return std::string(composite.kind == CompositeKind::PullUpMethod
                                   ? "Pull Up method "
                                   : "Pull Up field ") +
                   anchor.member + " From: " + join(entries) + " To: " + anchor.member +
                   " in " + anchor.class_fqn;
        case CompositeKind::PushDownMethod:
        case CompositeKind::PushDownField:
            for (const auto& m : composite.members) entries.insert(m.target.class_fqn);
            return std::string(composite.kind == CompositeKind::PushDownMethod
                                   ? "Push Down method "
                                   : "Push Down field ") +
                   anchor.member + " From: " + anchor.member + " in " + anchor.class_fqn +
                   " To: " + join(entries);
    }
    return "";
}

// ---------------------------------------------------------------------------
// JSON report
// ---------------------------------------------------------------------------

namespace {

json filters_to_json(const FilterConfig& filters) {
    json out;
    out["excluded_package_fragments"] = filters.excluded_package_fragments;
    out["exclude_constructors"] = filters.exclude_constructors;
    if (filters.projects_allowlist) {
        out["projects_allowlist"] =
            std::vector<std::string>(filters.projects_allowlist->begin(),
                                     filters.projects_allowlist->end());
    } else {
        out["projects_allowlist"] = nullptr;
    }
    return out;
}

FilterConfig filters_from_json(const json& obj) {
    FilterConfig filters;
    filters.excluded_package_fragments =
        obj.at("excluded_package_fragments").get<std::vector<std::string>>();
    filters.exclude_constructors = obj.at("exclude_constructors").get<bool>();
    const json& allowlist = obj.at("projects_allowlist");
    if (!allowlist.is_null()) {
        const auto values = allowlist.get<std::vector<std::string>>();
        filters.projects_allowlist = std::set<std::string>(values.begin(), values.end());
    }
    return filters;
}

json distribution_to_json(const DistributionStats& distribution) {
    json histogram = json::object();
    for (const auto& [value, count] : distribution.histogram) {
        histogram[std::to_string(value)] = count;
    }
    return json{{"histogram", std::move(histogram)}, {"min", distribution.min},
                {"median", distribution.median},     {"p75", distribution.p75},
                {"p90", distribution.p90},           {"max", distribution.max}};
}

DistributionStats distribution_from_json(const json& obj) {
    DistributionStats distribution;
    for (const auto& [key, value] : obj.at("histogram").items()) {
        distribution.histogram[std::stoll(key)] = value.get<std::size_t>();
    }
    distribution.min = obj.at("min").get<std::int64_t>();
    distribution.median = obj.at("median").get<std::int64_t>();
    distribution.p75 = obj.at("p75").get<std::int64_t>();
    distribution.p90 = obj.at("p90").get<std::int64_t>();
    distribution.max = obj.at("max").get<std::int64_t>();
    return distribution;
}

json stats_to_json(const CorpusStats& stats) {
    json per_kind = json::object();
    for (const auto& [kind, kind_stats] : stats.per_kind) {
        per_kind[std::string(to_tag(kind))] = json{{"projects", kind_stats.projects},
                                                   {"operations", kind_stats.operations},
                                                   {"occurrences", kind_stats.composites},
                                                   {"percent", kind_stats.percent}};
    }
    json scopes = json::object();
    for (const auto& [kind, counts] : stats.scope_breakdown) {
        scopes[std::string(to_tag(kind))] = json{{"intra_class", counts.intra_class},
                                                 {"inter_class", counts.inter_class},
                                                 {"mixed", counts.mixed}};
    }
    return json{{"singles_total", stats.singles_total},
                {"singles_in_composites", stats.singles_in_composites},
                {"singles_in_composites_percent", stats.singles_in_composites_percent},
                {"composites_total", stats.composites_total},
                {"projects_with_composites", stats.projects_with_composites},
                {"per_kind", std::move(per_kind)},
                {"size_distribution", distribution_to_json(stats.size_distribution)},
                {"age_distribution", distribution_to_json(stats.age_distribution)},
                {"scope_breakdown", std::move(scopes)},
                {"multi_commit_count", stats.multi_commit_count},
                {"multi_commit_percent", stats.multi_commit_percent}};
}

CorpusStats stats_from_json(const json& obj) {
    CorpusStats stats;
    stats.singles_total = obj.at("singles_total").get<std::size_t>();
    stats.singles_in_composites = obj.at("singles_in_composites").get<std::size_t>();
    stats.singles_in_composites_percent =
        obj.at("singles_in_composites_percent").get<double>();
    stats.composites_total = obj.at("composites_total").get<std::size_t>();
    stats.projects_with_composites = obj.at("projects_with_composites").get<std::size_t>();
    for (const auto& [tag, value] : obj.at("per_kind").items()) {
        const auto kind = composite_kind_from_tag(tag);
        if (!kind) throw SchemaError("unknown composite kind '" + tag + "'");
        KindStats kind_stats;
        kind_stats.projects = value.at("projects").get<std::size_t>();
        kind_stats.operations = value.at("operations").get<std::size_t>();
        kind_stats.composites = value.at("occurrences").get<std::size_t>();
        kind_stats.percent = value.at("percent").get<double>();
        stats.per_kind[*kind] = kind_stats;
    }
    stats.size_distribution = distribution_from_json(obj.at("size_distribution"));
    stats.age_distribution = distribution_from_json(obj.at("age_distribution"));
    for (const auto& [tag, value] : obj.at("scope_breakdown").items()) {
        const auto kind = composite_kind_from_tag(tag);
        if (!kind) throw SchemaError("unknown composite kind '" + tag + "'");
        ScopeCounts counts;
        counts.intra_class = value.at("intra_class").get<std::size_t>();
        counts.inter_class = value.at("inter_class").get<std::size_t>();
        counts.mixed = value.at("mixed").get<std::size_t>();
        stats.scope_breakdown[*kind] = counts;
    }
    stats.multi_commit_count = obj.at("multi_commit_count").get<std::size_t>();
    stats.multi_commit_percent = obj.at("multi_commit_percent").get<double>();
    return stats;
}

json anchor_to_json(const ElementRef& anchor) {
    json out;
    out["class"] = anchor.class_fqn;
    if (anchor.member_kind == MemberKind::Class) {
        out["member"] = nullptr;
    } else {
        out["member"] = anchor.member;
    }
    return out;
}

ElementRef anchor_from_json(const json& obj) {
    const std::string class_fqn = obj.at("class").get<std::string>();
    const json& member = obj.at("member");
    if (member.is_null()) return ElementRef::whole_class(class_fqn);
    const std::string name = member.get<std::string>();
    // Canonical method signatures always carry a parameter list.
    return name.find('(') != std::string::npos ? ElementRef::method(class_fqn, name)
                                               : ElementRef::field(class_fqn, name);
}

json composite_to_json(const ReportComposite& composite) {
    json out;
    out["kind"] = std::string(to_tag(composite.kind));
    out["anchor"] = anchor_to_json(composite.anchor);
    out["size"] = composite.size;
    if (composite.scope) out["scope"] = std::string(to_tag(*composite.scope));
    if (composite.age_days) out["age_days"] = *composite.age_days;
    out["commits"] = composite.commits;
    out["members"] = composite.member_ids;
    out["message"] = composite.message;
    return out;
}

ReportComposite composite_from_json(const json& obj) {
    ReportComposite composite;
    const std::string tag = obj.at("kind").get<std::string>();
    const auto kind = composite_kind_from_tag(tag);
    if (!kind) throw SchemaError("unknown composite kind '" + tag + "'");
    composite.kind = *kind;
    composite.anchor = anchor_from_json(obj.at("anchor"));
    composite.size = obj.at("size").get<std::size_t>();
    if (const auto it = obj.find("scope"); it != obj.end() && !it->is_null()) {
        const auto scope = scope_from_tag(it->get<std::string>());
        if (!scope) throw SchemaError("unknown scope '" + it->get<std::string>() + "'");
        composite.scope = scope;
    }
    if (const auto it = obj.find("age_days"); it != obj.end() && !it->is_null()) {
        composite.age_days = it->get<std::int64_t>();
    }
    composite.commits = obj.at("commits").get<std::vector<std::string>>();
    composite.member_ids = obj.at("members").get<std::vector<std::string>>();
    composite.message = obj.at("message").get<std::string>();
    return composite;
}

ReportComposite to_report_composite(const Composite& composite) {
    ReportComposite out;
    out.kind = composite.kind;
    out.anchor = ElementRef{composite.anchor.class_fqn, composite.anchor.member_kind,
                            composite.anchor.member, std::nullopt};
    out.size = composite.size();
    out.scope = composite.scope;
    out.age_days = composite.age_days;
    out.commits.assign(composite.commits.begin(), composite.commits.end());
    for (const RefactoringRecord& member : composite.members) {
        out.member_ids.push_back(member.id);
    }
    out.message = render_composite_message(composite);
    return out;
}

json report_to_json(const ParsedReport& report) {
    json composites = json::array();
    for (const ReportComposite& composite : report.composites) {
        composites.push_back(composite_to_json(composite));
    }
    return json{{"schema_version", report.schema_version},
                {"metadata", json{{"tool_version", report.metadata.tool_version},
                                  {"input_digest", report.metadata.input_digest},
                                  {"generated_at", report.metadata.generated_at},
                                  {"filters", filters_to_json(report.metadata.filters)}}},
                {"stats", stats_to_json(report.stats)},
                {"composites", std::move(composites)}};
}

}  // namespace

std::string emit_json(const ParsedReport& report) {
    return report_to_json(report).dump(2) + "\n";
}

std::string emit_json(const ReportBundle& bundle) {
    ParsedReport report;
    report.schema_version = std::string(kReportSchemaVersion);
    report.metadata = bundle.metadata;
    report.stats = bundle.stats;
    report.composites.reserve(bundle.composites.size());
    for (const Composite& composite : bundle.composites) {
        report.composites.push_back(to_report_composite(composite));
    }
    return emit_json(report);
}

ParsedReport parse_report(std::string_view json_text) {
    json obj;
    try {
        obj = json::parse(json_text);
    } catch (const json::exception& e) {
        throw ParseError(std::string("malformed report: ") + e.what());
    }
    if (!obj.is_object()) throw ParseError("malformed report: not a JSON object");
    try {
        const std::string version = obj.at("schema_version").get<std::string>();
        if (version != kReportSchemaVersion) {
            throw SchemaError("unsupported report schema_version '" + version +
                              "' (expected '" + std::string(kReportSchemaVersion) + "')");
        }
        ParsedReport report;
        report.schema_version = version;
        const json& metadata = obj.at("metadata");
        report.metadata.tool_version = metadata.at("tool_version").get<std::string>();
        report.metadata.input_digest = metadata.at("input_digest").get<std::string>();
        report.metadata.generated_at = metadata.at("generated_at").get<std::string>();
        report.metadata.filters = filters_from_json(metadata.at("filters"));
        report.stats = stats_from_json(obj.at("stats"));
        for (const json& composite : obj.at("composites")) {
            report.composites.push_back(composite_from_json(composite));
        }
        return report;
    } catch (const json::exception& e) {
        throw ParseError(std::string("malformed report: ") + e.what());
    }
}

// ---------------------------------------------------------------------------
// Markdown
// ---------------------------------------------------------------------------

std::string render_frequency_table(const CorpusStats& stats) {
    std::ostringstream out;
    out << "| Name | Projects | Operations | Occurrences | % |\n";
    out << "| --- | ---: | ---: | ---: | ---: |\n";
    std::size_t total_operations = 0;
    for (CompositeKind kind : kAllCompositeKinds) {
        const KindStats& kind_stats = stats.per_kind.at(kind);
        total_operations += kind_stats.operations;
        out << "| " << display_name(kind) << " | " << kind_stats.projects << " | "
            << kind_stats.operations << " | " << kind_stats.composites << " | "
            << fmt1(kind_stats.percent) << " |\n";
    }
    out << "| All | " << stats.projects_with_composites << " | " << total_operations
        << " | " << stats.composites_total << " | "
        << fmt1(stats.composites_total == 0 ? 0.0 : 100.0) << " |\n";
    return out.str();
}

namespace {

void render_distribution(std::ostringstream& out, const DistributionStats& distribution,
                         std::string_view value_column) {
    out << "| Metric | Value |\n| --- | ---: |\n";
    out << "| min | " << distribution.min << " |\n";
    out << "| median | " << distribution.median << " |\n";
    out << "| p75 | " << distribution.p75 << " |\n";
    out << "| p90 | " << distribution.p90 << " |\n";
    out << "| max | " << distribution.max << " |\n";
    out << "\n| " << value_column << " | Composites |\n| ---: | ---: |\n";
    for (const auto& [value, count] : distribution.histogram) {
        out << "| " << value << " | " << count << " |\n";
    }
}

}  // namespace

std::string render_distribution_tables(const CorpusStats& stats) {
    std::ostringstream out;
    out << "## Size distribution\n\n";
    render_distribution(out, stats.size_distribution, "Size");
    out << "\n## Age distribution\n\n";
    if (stats.age_distribution.histogram.empty()) {
        out << "No composites with a defined age.\n";
    } else {
        render_distribution(out, stats.age_distribution, "Days");
    }
    out << "\n## Scope\n\n";
    out << "| Kind | Intra-class | Inter-class | Mixed |\n";
    out << "| --- | ---: | ---: | ---: |\n";
    for (const auto& [kind, counts] : stats.scope_breakdown) {
        out << "| " << display_name(kind) << " | " << counts.intra_class << " | "
            << counts.inter_class << " | " << counts.mixed << " |\n";
    }
    return out.str();
}

std::string emit_markdown(const ReportBundle& bundle) {
    std::ostringstream out;
    const CorpusStats& stats = bundle.stats;
    out << "# Composite refactoring report\n\n";
    out << "- tool version: " << bundle.metadata.tool_version << "\n";
    out << "- input digest: " << bundle.metadata.input_digest << "\n";
    out << "- generated at: " << bundle.metadata.generated_at << "\n";
    const FilterConfig& filters = bundle.metadata.filters;
    out << "- filters: excluded packages [";
    for (std::size_t i = 0; i < filters.excluded_package_fragments.size(); ++i) {
        if (i > 0) out << ", ";
        out << filters.excluded_package_fragments[i];
    }
    out << "]; constructors " << (filters.exclude_constructors ? "excluded" : "kept");
    if (filters.projects_allowlist) {
        out << "; projects [" << join(*filters.projects_allowlist) << "]";
    }
    out << "\n";
    out << "- singles: " << stats.singles_total << " total, " << stats.singles_in_composites
        << " in composites (" << fmt1(stats.singles_in_composites_percent) << "%)\n";
    out << "- composites: " << stats.composites_total << " total, "
        << stats.multi_commit_count << " spanning multiple commits ("
        << fmt1(stats.multi_commit_percent) << "%)\n";
    out << "\n## Frequency\n\n";
    out << render_frequency_table(stats);
    out << "\n" << render_distribution_tables(stats);

    std::size_t ordinal = 0;
    for (const Composite& composite : bundle.composites) {
        ++ordinal;
        out << "\n## composite-" << ordinal << "\n\n";
        out << render_composite_message(composite) << "\n\n";
        out << "- kind: " << to_tag(composite.kind) << "\n";
        out << "- anchor: " << composite.anchor.display() << "\n";
        out << "- size: " << composite.size() << "\n";
        if (composite.scope) out << "- scope: " << to_tag(*composite.scope) << "\n";
        if (composite.age_days) out << "- age days: " << *composite.age_days << "\n";
        out << "- commits: " << join(composite.commits) << "\n";
        out << "- members:\n";
        for (const RefactoringRecord& member : composite.members) {
            out << "  - " << member.id << " [" << member.commit << "] "
                << render_record_message(member) << "\n";
        }
    }
    return out.str();
}

// ---------------------------------------------------------------------------
// DOT
// ---------------------------------------------------------------------------

namespace {

std::string dot_quote(std::string_view text) {
    std::string out = "\"";
    for (const char c : text) {
        if (c == '"' || c == '\\') out.push_back('\\');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

}  // namespace

std::string emit_dot(const Composite& composite, std::string_view graph_name) {
    std::ostringstream out;
    out << "digraph " << dot_quote(graph_name) << " {\n";
    out << "  rankdir=LR;\n";
    out << "  node [shape=box];\n";
    std::set<std::string> nodes;
    for (const RefactoringRecord& member : composite.members) {
        nodes.insert(member.source.display());
        nodes.insert(member.target.display());
    }
    for (const std::string& node : nodes) {
        out << "  " << dot_quote(node) << ";\n";
    }
    for (const RefactoringRecord& member : composite.members) {
        out << "  " << dot_quote(member.source.display()) << " -> "
            << dot_quote(member.target.display()) << " [label="
            << dot_quote(std::string(to_tag(member.kind)) + " " + member.commit) << "];\n";
    }
    out << "}\n";
    return out.str();
}

std::string dot_file_name(const Composite& composite, std::size_t ordinal) {
    return "composite_" + std::string(to_tag(composite.kind)) + "_" +
           std::to_string(ordinal) + ".dot";
}

}  // namespace compminer
