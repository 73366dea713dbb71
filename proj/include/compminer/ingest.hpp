#pragma once

#include <cstddef>
#include <istream>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "compminer/model.hpp"

namespace compminer {

/// Dataset cleanup applied between parsing and clustering.
struct FilterConfig {
    std::vector<std::string> excluded_package_fragments{"test", "sample", "docs"};
    bool exclude_constructors = true;
    std::optional<std::set<std::string>> projects_allowlist;
};

/// Commit context for line-oriented miner messages, which carry none themselves.
struct MessageContext {
    std::string project;
    std::string commit;
    std::optional<Timestamp> timestamp;
    std::string id;  // empty: callers assign (stream mode uses line numbers)
};

/// Parses one human-readable miner message, e.g.
///   "Pull Up Method public m() : void from class SubFoo1
///    to public m() : void from class SuperFoo".
/// Throws UnsupportedOperation for unknown kind phrases and ParseError for
/// malformed signatures or missing clauses.
RefactoringRecord parse_miner_message(std::string_view text, const MessageContext& ctx);

struct MinerTextResult {
    std::vector<RefactoringRecord> records;
    std::size_t skipped_unsupported = 0;
};

/// One message per line; blank lines ignored; unsupported operations skipped
/// with a warning. Record ids are line numbers.
MinerTextResult parse_miner_text(std::istream& in, const MessageContext& ctx);

/// One JSON object per line (schema in the README). Record ids default to the
/// line number; duplicate ids and malformed lines raise errors naming the line.
std::vector<RefactoringRecord> parse_jsonl(std::istream& in);

struct OracleCsvResult {
    std::vector<RefactoringRecord> records;
    std::size_t skipped_unselected = 0;  // rows whose operation cannot form composites
};

/// Loads the normalized oracle export: header columns project, commit,
/// timestamp (optional), refactoring_type, source_class, source_member,
/// target_class, target_member.
OracleCsvResult parse_oracle_csv(std::istream& in);

struct FilterResult {
    std::vector<RefactoringRecord> kept;
    std::size_t dropped_package = 0;
    std::size_t dropped_constructor = 0;
    std::size_t dropped_project = 0;

    std::size_t dropped_total() const {
        return dropped_package + dropped_constructor + dropped_project;
    }
};

/// Order-preserving sublist projection. A record is dropped iff a whole
/// FQN/path segment of either endpoint equals an excluded fragment
/// (lowercased), or an endpoint is a constructor of its own class, or the
/// project is outside the allowlist.
FilterResult apply_filters(const std::vector<RefactoringRecord>& records,
                           const FilterConfig& config);

}  // namespace compminer
