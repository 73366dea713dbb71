#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "compminer/ingest.hpp"
#include "compminer/metrics.hpp"
#include "compminer/model.hpp"

namespace compminer {

inline constexpr std::string_view kReportSchemaVersion = "1";

struct ReportMetadata {
    std::string tool_version;
    std::string input_digest;
    std::string generated_at;
    FilterConfig filters;
};

struct ReportBundle {
    CorpusStats stats;
    std::vector<Composite> composites;
    ReportMetadata metadata;
};

/// Content hash (FNV-1a 64, hex) of the canonicalized record list; identical
/// record lists produce identical digests.
std::string input_digest(const std::vector<RefactoringRecord>& records);

/// Canonical single-operation message, re-parseable by parse_miner_message.
std::string render_record_message(const RefactoringRecord& record);

/// One comprehensive human-readable message per composite, e.g.
/// "Pull Up method m() From: SubFoo1, SubFoo2, SubFoo3 To: m() in SuperFoo".
/// Listed elements are sorted lexicographically by class, then signature.
std::string render_composite_message(const Composite& composite);

std::string emit_json(const ReportBundle& bundle);
std::string emit_markdown(const ReportBundle& bundle);

/// One digraph per composite: nodes are element labels "Class.member", one
/// edge per member record from source to target, labeled kind and commit.
std::string emit_dot(const Composite& composite, std::string_view graph_name = "composite");
std::string dot_file_name(const Composite& composite, std::size_t ordinal);

/// Serialized view of one composite as stored in the JSON report.
struct ReportComposite {
    CompositeKind kind = CompositeKind::MethodComposition;
    ElementRef anchor;
    std::size_t size = 0;
    std::optional<Scope> scope;
    std::optional<std::int64_t> age_days;
    std::vector<std::string> commits;
    std::vector<std::string> member_ids;
    std::string message;
};

struct ParsedReport {
    std::string schema_version;
    ReportMetadata metadata;
    CorpusStats stats;
    std::vector<ReportComposite> composites;
};

/// Loads a JSON report: ParseError for malformed documents, SchemaError for a
/// schema_version other than "1".
ParsedReport parse_report(std::string_view json_text);

/// Re-serialization; emit_json(parse_report(emit_json(b))) == emit_json(b).
std::string emit_json(const ParsedReport& report);

/// Markdown frequency table (Name | Projects | Operations | Occurrences | %),
/// one row per composite kind plus an All row.
std::string render_frequency_table(const CorpusStats& stats);

/// Size/age distribution and scope tables.
std::string render_distribution_tables(const CorpusStats& stats);

}  // namespace compminer
