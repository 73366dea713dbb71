#include "compminer/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <utility>

#include <json.hpp>

#include "compminer/log.hpp"

namespace compminer {

namespace {

using nlohmann::json;

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

bool is_blank(std::string_view s) { return trim(s).empty(); }

// Finds `keyword` outside any <> or () nesting, so signature contents never
// shadow the grammar's connective words.
std::size_t find_top_level(std::string_view text, std::string_view keyword) {
    int depth = 0;
    for (std::size_t i = 0; i + keyword.size() <= text.size(); ++i) {
        const char c = text[i];
        if (c == '(' || c == '<') ++depth;
        else if (c == ')' || c == '>') { if (depth > 0) --depth; }
        if (depth == 0 && text.compare(i, keyword.size(), keyword) == 0) return i;
    }
    return std::string_view::npos;
}

struct KindPhrase {
    std::string_view phrase;
    RefactoringKind kind;
};

// Longest phrases first so "Extract And Move Method" wins over "Extract Method".
constexpr KindPhrase kKindPhrases[] = {
    {"extract and move method", RefactoringKind::ExtractMove},
    {"move and rename method", RefactoringKind::MoveRename},
    {"push down attribute", RefactoringKind::PushDownField},
    {"pull up attribute", RefactoringKind::PullUpField},
    {"push down method", RefactoringKind::PushDownMethod},
    {"push down field", RefactoringKind::PushDownField},
    {"pull up method", RefactoringKind::PullUpMethod},
    {"pull up field", RefactoringKind::PullUpField},
    {"extract method", RefactoringKind::Extract},
    {"inline method", RefactoringKind::Inline},
    {"move method", RefactoringKind::Move},
};

std::string require_fqn(std::string_view text, std::string_view message) {
    const std::string_view fqn = trim(text);
    if (fqn.empty() || fqn.find_first_of(" \t") != std::string_view::npos) {
        throw ParseError("malformed class name '" + std::string(text) + "' in message: '" +
                         std::string(message) + "'");
    }
    return std::string(fqn);
}

// `<target-sig> from <source-sig> in class <C> [to class <D>]`; the extracted
// method is named first, the origin method second.
std::pair<ElementRef, ElementRef> parse_extract_clauses(std::string_view rest,
                                                        bool moved,
                                                        std::string_view message) {
    const std::size_t from_pos = find_top_level(rest, " from ");
    if (from_pos == std::string_view::npos) {
        throw ParseError("missing 'from' clause in message: '" + std::string(message) + "'");
    }
    const std::string target_sig = normalize_signature(rest.substr(0, from_pos));
    std::string_view tail = rest.substr(from_pos + 6);

    std::size_t class_pos = find_top_level(tail, " in class ");
    std::size_t class_len = 10;
    if (class_pos == std::string_view::npos) {
        class_pos = find_top_level(tail, " from class ");
        class_len = 12;
    }
    if (class_pos == std::string_view::npos) {
        throw ParseError("missing class clause in message: '" + std::string(message) + "'");
    }
    const std::string source_sig = normalize_signature(tail.substr(0, class_pos));
    std::string_view classes = tail.substr(class_pos + class_len);

    std::string source_class, target_class;
    const std::size_t to_pos = find_top_level(classes, " to class ");
    if (moved) {
        if (to_pos == std::string_view::npos) {
            throw ParseError("missing 'to class' clause in message: '" +
                             std::string(message) + "'");
        }
        source_class = require_fqn(classes.substr(0, to_pos), message);
        target_class = require_fqn(classes.substr(to_pos + 10), message);
    } else {
        if (to_pos != std::string_view::npos) {
            throw ParseError("unexpected 'to class' clause in extract message: '" +
                             std::string(message) + "'");
        }
        source_class = require_fqn(classes, message);
        target_class = source_class;
    }
    return {ElementRef::method(source_class, source_sig),
            ElementRef::method(target_class, target_sig)};
}

// `<source> from class <C1> to <target> (from|in) class <C2>`
std::pair<ElementRef, ElementRef> parse_pair_clauses(std::string_view rest,
                                                     RefactoringKind kind,
                                                     std::string_view message) {
    const std::size_t from_class = find_top_level(rest, " from class ");
    if (from_class == std::string_view::npos) {
        throw ParseError("missing 'from class' clause in message: '" +
                         std::string(message) + "'");
    }
    const std::string_view source_part = rest.substr(0, from_class);
    std::string_view tail = rest.substr(from_class + 12);

    const std::size_t to_pos = find_top_level(tail, " to ");
    if (to_pos == std::string_view::npos) {
        throw ParseError("missing 'to' clause in message: '" + std::string(message) + "'");
    }
    const std::string source_class = require_fqn(tail.substr(0, to_pos), message);
    tail = tail.substr(to_pos + 4);

    std::size_t class_pos = find_top_level(tail, " from class ");
    std::size_t class_len = 12;
    if (class_pos == std::string_view::npos) {
        class_pos = find_top_level(tail, " in class ");
        class_len = 10;
    }
    if (class_pos == std::string_view::npos) {
        throw ParseError("missing target class clause in message: '" +
                         std::string(message) + "'");
    }
    const std::string_view target_part = tail.substr(0, class_pos);
    const std::string target_class = require_fqn(tail.substr(class_pos + class_len), message);

    if (is_method_level(kind)) {
        return {ElementRef::method(source_class, normalize_signature(source_part)),
                ElementRef::method(target_class, normalize_signature(target_part))};
    }
    return {ElementRef::field(source_class, normalize_field_name(source_part)),
            ElementRef::field(target_class, normalize_field_name(target_part))};
}

}  // namespace

RefactoringRecord parse_miner_message(std::string_view text, const MessageContext& ctx) {
    const std::string_view message = trim(text);
    const std::string folded = lower(message);

    RefactoringKind kind{};
    std::string_view rest;
    bool matched = false;
    for (const KindPhrase& entry : kKindPhrases) {
        if (folded.size() > entry.phrase.size() &&
            folded.compare(0, entry.phrase.size(), entry.phrase) == 0 &&
            std::isspace(static_cast<unsigned char>(folded[entry.phrase.size()]))) {
            kind = entry.kind;
            rest = trim(message.substr(entry.phrase.size()));
            matched = true;
            break;
        }
    }
    if (!matched) {
        throw UnsupportedOperation("unsupported operation in message: '" +
                                   std::string(text) + "'");
    }

    auto [source, target] =
        (kind == RefactoringKind::Extract || kind == RefactoringKind::ExtractMove)
            ? parse_extract_clauses(rest, kind == RefactoringKind::ExtractMove, message)
            : parse_pair_clauses(rest, kind, message);

    RefactoringRecord record;
    record.id = ctx.id;
    record.project = ctx.project;
    record.commit = ctx.commit;
    record.timestamp = ctx.timestamp;
    record.kind = kind;
    record.source = std::move(source);
    record.target = std::move(target);
    record.raw = std::string(text);
    validate_record(record);
    return record;
}

MinerTextResult parse_miner_text(std::istream& in, const MessageContext& ctx) {
    MinerTextResult result;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (is_blank(line)) continue;
        MessageContext line_ctx = ctx;
        line_ctx.id = std::to_string(line_no);
        try {
            result.records.push_back(parse_miner_message(line, line_ctx));
        } catch (const UnsupportedOperation& e) {
            ++result.skipped_unsupported;
            log_warn("line " + std::to_string(line_no) + " skipped: " + e.what());
        } catch (const Error& e) {
            throw ParseError("line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return result;
}

namespace {

const json& require_key(const json& obj, const char* key) {
    const auto it = obj.find(key);
    if (it == obj.end()) {
        throw SchemaError(std::string("missing key '") + key + "'");
    }
    return *it;
}

ElementRef parse_jsonl_element(const json& obj, RefactoringKind kind) {
    ElementRef element;
    element.class_fqn = require_key(obj, "class").get<std::string>();
    if (element.class_fqn.empty()) throw SchemaError("empty 'class'");
    if (is_method_level(kind)) {
        element.member_kind = MemberKind::Method;
        element.member = normalize_signature(require_key(obj, "method").get<std::string>());
    } else {
        element.member_kind = MemberKind::Field;
        element.member = normalize_field_name(require_key(obj, "field").get<std::string>());
    }
    if (const auto it = obj.find("file"); it != obj.end() && !it->is_null()) {
        element.file_path = it->get<std::string>();
    }
    return element;
}

}  // namespace

std::vector<RefactoringRecord> parse_jsonl(std::istream& in) {
    std::vector<RefactoringRecord> records;
    std::set<std::string> seen_ids;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (is_blank(line)) continue;
        const std::string where = "line " + std::to_string(line_no);
        try {
            const json obj = json::parse(line);
            RefactoringRecord record;
            record.project = require_key(obj, "project").get<std::string>();
            record.commit = require_key(obj, "commit").get<std::string>();
            const std::string type = require_key(obj, "type").get<std::string>();
            const auto kind = refactoring_kind_from_tag(type);
            if (!kind) throw SchemaError("unknown refactoring type '" + type + "'");
            record.kind = *kind;
            if (const auto it = obj.find("timestamp"); it != obj.end() && !it->is_null()) {
                record.timestamp = parse_timestamp(it->get<std::string>());
            }
            record.source = parse_jsonl_element(require_key(obj, "source"), record.kind);
            record.target = parse_jsonl_element(require_key(obj, "target"), record.kind);
            if (const auto it = obj.find("id"); it != obj.end() && !it->is_null()) {
                record.id = it->get<std::string>();
            } else {
                record.id = std::to_string(line_no);
            }
            validate_record(record);
            if (!seen_ids.insert(record.id).second) {
                throw SchemaError("duplicate record id '" + record.id + "'");
            }
            records.push_back(std::move(record));
        } catch (const json::exception& e) {
            throw ParseError(where + ": " + e.what());
        } catch (const Error& e) {
            throw ParseError(where + ": " + e.what());
        }
    }
    return records;
}

namespace {

// Minimal RFC 4180 row splitter; quoted fields may contain commas and
// doubled quotes. Rows never span lines.
std::vector<std::string> split_csv_row(const std::string& line, std::size_t line_no) {
    std::vector<std::string> cells;
    std::string cell;
    bool in_quotes = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cell.push_back('"');
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                cell.push_back(c);
            }
        } else if (c == '"') {
            in_quotes = true;
        } else if (c == ',') {
            cells.push_back(std::move(cell));
            cell.clear();
        } else if (c != '\r') {
            cell.push_back(c);
        }
    }
    if (in_quotes) {
        throw ParseError("line " + std::to_string(line_no) + ": unterminated quote");
    }
    cells.push_back(std::move(cell));
    return cells;
}

}  // namespace

OracleCsvResult parse_oracle_csv(std::istream& in) {
    OracleCsvResult result;
    std::string line;
    std::size_t line_no = 0;

    std::map<std::string, std::size_t> columns;
    while (std::getline(in, line)) {
        ++line_no;
        if (is_blank(line)) continue;
        const auto header = split_csv_row(line, line_no);
        for (std::size_t i = 0; i < header.size(); ++i) {
            columns[lower(trim(header[i]))] = i;
        }
        break;
    }
    if (columns.empty()) return result;  // empty stream

    const auto column = [&](const char* name) {
        const auto it = columns.find(name);
        if (it == columns.end()) {
            throw SchemaError(std::string("missing column '") + name + "'");
        }
        return it->second;
    };
    const std::size_t col_project = column("project");
    const std::size_t col_commit = column("commit");
    const std::size_t col_type = column("refactoring_type");
    const std::size_t col_source_class = column("source_class");
    const std::size_t col_source_member = column("source_member");
    const std::size_t col_target_class = column("target_class");
    const std::size_t col_target_member = column("target_member");
    const auto ts_it = columns.find("timestamp");

    while (std::getline(in, line)) {
        ++line_no;
        if (is_blank(line)) continue;
        const std::string where = "line " + std::to_string(line_no);
        const auto cells = split_csv_row(line, line_no);
        if (cells.size() != columns.size()) {
            throw ParseError(where + ": expected " + std::to_string(columns.size()) +
                             " cells, got " + std::to_string(cells.size()));
        }
        const auto kind = refactoring_kind_from_name(cells[col_type]);
        if (!kind) {
            // Mirrors the oracle selection step: operations that cannot form
            // composites are not loaded, only counted.
            ++result.skipped_unselected;
            continue;
        }
        try {
            RefactoringRecord record;
            record.id = std::to_string(line_no);
            record.project = std::string(trim(cells[col_project]));
            record.commit = std::string(trim(cells[col_commit]));
            record.kind = *kind;
            if (ts_it != columns.end() && !is_blank(cells[ts_it->second])) {
                record.timestamp = parse_timestamp(cells[ts_it->second]);
            }
            const bool methods = is_method_level(*kind);
            const auto element = [&](const std::string& cls, const std::string& member) {
                return methods
                           ? ElementRef::method(std::string(trim(cls)),
                                                normalize_signature(member))
                           : ElementRef::field(std::string(trim(cls)),
                                               normalize_field_name(member));
            };
            record.source = element(cells[col_source_class], cells[col_source_member]);
            record.target = element(cells[col_target_class], cells[col_target_member]);
            validate_record(record);
            result.records.push_back(std::move(record));
        } catch (const Error& e) {
            throw ParseError(where + ": " + e.what());
        }
    }
    return result;
}

namespace {

bool segment_matches(std::string_view text, char separator, const std::string& fragment) {
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find(separator, start);
        if (end == std::string_view::npos) end = text.size();
        if (lower(text.substr(start, end - start)) == fragment) return true;
        start = end + 1;
    }
    return false;
}

bool element_in_excluded_package(const ElementRef& element, const std::string& fragment) {
    if (segment_matches(element.class_fqn, '.', fragment)) return true;
    return element.file_path && segment_matches(*element.file_path, '/', fragment);
}

bool is_constructor(const ElementRef& element) {
    return element.member_kind == MemberKind::Method &&
           method_simple_name(element.member) == class_simple_name(element.class_fqn);
}

}  // namespace

FilterResult apply_filters(const std::vector<RefactoringRecord>& records,
                           const FilterConfig& config) {
    std::vector<std::string> fragments;
    for (const std::string& fragment : config.excluded_package_fragments) {
        if (!fragment.empty()) fragments.push_back(lower(fragment));
    }

    FilterResult result;
    for (const RefactoringRecord& record : records) {
        if (config.projects_allowlist &&
            !config.projects_allowlist->contains(record.project)) {
            ++result.dropped_project;
            continue;
        }
        const bool in_excluded = std::any_of(
            fragments.begin(), fragments.end(), [&](const std::string& fragment) {
                return element_in_excluded_package(record.source, fragment) ||
                       element_in_excluded_package(record.target, fragment);
            });
        if (in_excluded) {
            ++result.dropped_package;
            continue;
        }
        if (config.exclude_constructors &&
            (is_constructor(record.source) || is_constructor(record.target))) {
            ++result.dropped_constructor;
            continue;
        }
        result.kept.push_back(record);
    }
    return result;
}

}  // namespace compminer
