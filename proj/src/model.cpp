#include "compminer/model.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>

namespace compminer {

namespace {

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

}  // namespace

std::string_view to_tag(RefactoringKind kind) {
    switch (kind) {
        case RefactoringKind::Extract: return "extract";
        case RefactoringKind::ExtractMove: return "extract_move";
        case RefactoringKind::Move: return "move";
        case RefactoringKind::MoveRename: return "move_rename";
        case RefactoringKind::Inline: return "inline";
        case RefactoringKind::PullUpMethod: return "pull_up_method";
        case RefactoringKind::PushDownMethod: return "push_down_method";
        case RefactoringKind::PullUpField: return "pull_up_field";
        case RefactoringKind::PushDownField: return "push_down_field";
    }
    return "";
}

std::string_view display_name(RefactoringKind kind) {
    switch (kind) {
        case RefactoringKind::Extract: return "Extract Method";
        case RefactoringKind::ExtractMove: return "Extract And Move Method";
        case RefactoringKind::Move: return "Move Method";
        case RefactoringKind::MoveRename: return "Move And Rename Method";
        case RefactoringKind::Inline: return "Inline Method";
        case RefactoringKind::PullUpMethod: return "Pull Up Method";
        case RefactoringKind::PushDownMethod: return "Push Down Method";
        case RefactoringKind::PullUpField: return "Pull Up Field";
        case RefactoringKind::PushDownField: return "Push Down Field";
    }
    return "";
}

std::optional<RefactoringKind> refactoring_kind_from_tag(std::string_view tag) {
    for (RefactoringKind kind : kAllRefactoringKinds) {
        if (to_tag(kind) == tag) return kind;
    }
    return std::nullopt;
}

std::optional<RefactoringKind> refactoring_kind_from_name(std::string_view name) {
    const std::string needle = lower(trim(name));
    for (RefactoringKind kind : kAllRefactoringKinds) {
        if (needle == lower(display_name(kind)) || needle == to_tag(kind)) return kind;
    }
    // Miner versions differ in wording for field operations.
    if (needle == "pull up attribute") return RefactoringKind::PullUpField;
    if (needle == "push down attribute") return RefactoringKind::PushDownField;
    return std::nullopt;
}

bool is_method_level(RefactoringKind kind) {
    return kind != RefactoringKind::PullUpField && kind != RefactoringKind::PushDownField;
}

std::string_view to_tag(CompositeKind kind) {
    switch (kind) {
        case CompositeKind::MethodComposition: return "method_composition";
        case CompositeKind::MethodDecomposition: return "method_decomposition";
        case CompositeKind::ClassDecomposition: return "class_decomposition";
        case CompositeKind::InlineMethod: return "composite_inline_method";
        case CompositeKind::PullUpMethod: return "composite_pull_up_method";
        case CompositeKind::PushDownMethod: return "composite_push_down_method";
        case CompositeKind::PullUpField: return "composite_pull_up_field";
        case CompositeKind::PushDownField: return "composite_push_down_field";
    }
    return "";
}

std::string_view display_name(CompositeKind kind) {
    switch (kind) {
        case CompositeKind::MethodComposition: return "Method Composition";
        case CompositeKind::MethodDecomposition: return "Method Decomposition";
        case CompositeKind::ClassDecomposition: return "Class Decomposition";
        case CompositeKind::InlineMethod: return "Composite Inline Method";
        case CompositeKind::PullUpMethod: return "Composite Pull Up Method";
        case CompositeKind::PushDownMethod: return "Composite Push Down Method";
        case CompositeKind::PullUpField: return "Composite Pull Up Field";
        case CompositeKind::PushDownField: return "Composite Push Down Field";
    }
    return "";
}

std::optional<CompositeKind> composite_kind_from_tag(std::string_view tag) {
    for (CompositeKind kind : kAllCompositeKinds) {
        if (to_tag(kind) == tag) return kind;
    }
    return std::nullopt;
}

std::string_view to_tag(Scope scope) {
    switch (scope) {
        case Scope::IntraClass: return "intra_class";
        case Scope::InterClass: return "inter_class";
        case Scope::Mixed: return "mixed";
    }
    return "";
}

std::optional<Scope> scope_from_tag(std::string_view tag) {
    if (tag == "intra_class") return Scope::IntraClass;
    if (tag == "inter_class") return Scope::InterClass;
    if (tag == "mixed") return Scope::Mixed;
    return std::nullopt;
}

ElementRef ElementRef::method(std::string fqn, std::string signature,
                              std::optional<std::string> file) {
    return ElementRef{std::move(fqn), MemberKind::Method, std::move(signature), std::move(file)};
}

ElementRef ElementRef::field(std::string fqn, std::string name,
                             std::optional<std::string> file) {
    return ElementRef{std::move(fqn), MemberKind::Field, std::move(name), std::move(file)};
}

ElementRef ElementRef::whole_class(std::string fqn) {
    return ElementRef{std::move(fqn), MemberKind::Class, "", std::nullopt};
}

std::string ElementRef::display() const {
    if (member_kind == MemberKind::Class) return class_fqn;
    return class_fqn + "." + member;
}

void validate_record(const RefactoringRecord& record) {
    const MemberKind expected =
        is_method_level(record.kind) ? MemberKind::Method : MemberKind::Field;
    if (record.source.member_kind != expected || record.target.member_kind != expected) {
        throw SchemaError("record '" + record.id + "': " + std::string(to_tag(record.kind)) +
                          " requires " +
                          (expected == MemberKind::Method ? "method" : "field") +
                          " endpoints");
    }
    if (record.kind == RefactoringKind::Extract &&
        record.source.class_fqn != record.target.class_fqn) {
        throw SchemaError("record '" + record.id +
                          "': extract must stay within one class (got '" +
                          record.source.class_fqn + "' -> '" + record.target.class_fqn + "')");
    }
    if (record.kind == RefactoringKind::ExtractMove &&
        record.source.class_fqn == record.target.class_fqn) {
        throw SchemaError("record '" + record.id +
                          "': extract_move must cross classes (both in '" +
                          record.source.class_fqn + "')");
    }
}

namespace {

// Splits a parameter-list region on commas that sit outside <> and ().
std::vector<std::string_view> split_top_level(std::string_view region) {
    std::vector<std::string_view> parts;
    int angle = 0, paren = 0;
    std::size_t start = 0;
    for (std::size_t i = 0; i < region.size(); ++i) {
        switch (region[i]) {
            case '<': ++angle; break;
            case '>': if (angle > 0) --angle; break;
            case '(': ++paren; break;
            case ')': if (paren > 0) --paren; break;
            case ',':
                if (angle == 0 && paren == 0) {
                    parts.push_back(region.substr(start, i - start));
                    start = i + 1;
                }
                break;
            default: break;
        }
    }
    parts.push_back(region.substr(start));
    return parts;
}

// Tokenizes one parameter: whitespace at the top level separates tokens,
// whitespace inside <> or () is deleted (generics become one token).
std::vector<std::string> parameter_tokens(std::string_view param) {
    std::vector<std::string> tokens;
    std::string current;
    int depth = 0;
    for (char c : param) {
        if (c == '<' || c == '(') ++depth;
        else if (c == '>' || c == ')') { if (depth > 0) --depth; }
        if (std::isspace(static_cast<unsigned char>(c))) {
            if (depth > 0) continue;
            if (!current.empty()) { tokens.push_back(std::move(current)); current.clear(); }
            continue;
        }
        current.push_back(c);
    }
    if (!current.empty()) tokens.push_back(std::move(current));
    return tokens;
}

}  // namespace

std::string normalize_signature(std::string_view raw) {
    const std::string_view input = trim(raw);
    const std::size_t lparen = input.find('(');
    if (lparen == std::string_view::npos) {
        throw ParseError("malformed method signature (no parameter list): '" +
                         std::string(raw) + "'");
    }
    int depth = 0;
    std::size_t rparen = std::string_view::npos;
    for (std::size_t i = lparen; i < input.size(); ++i) {
        if (input[i] == '(') ++depth;
        else if (input[i] == ')') {
            if (--depth == 0) { rparen = i; break; }
        }
    }
    if (rparen == std::string_view::npos) {
        throw ParseError("malformed method signature (unbalanced parentheses): '" +
                         std::string(raw) + "'");
    }
    const std::string_view tail = trim(input.substr(rparen + 1));
    if (!tail.empty() && tail.front() != ':') {
        throw ParseError("malformed method signature (unexpected trailing text '" +
                         std::string(tail) + "'): '" + std::string(raw) + "'");
    }

    // The method name is the last whitespace token before '('; anything
    // before it (visibility, static, type parameters) is dropped.
    const std::string_view head = trim(input.substr(0, lparen));
    if (head.empty()) {
        throw ParseError("malformed method signature (no method name): '" +
                         std::string(raw) + "'");
    }
    std::size_t name_start = head.find_last_of(" \t");
    const std::string name(name_start == std::string_view::npos
                               ? head
                               : trim(head.substr(name_start + 1)));
    if (name.empty()) {
        throw ParseError("malformed method signature (no method name): '" +
                         std::string(raw) + "'");
    }

    std::string out = name + "(";
    const std::string_view params = input.substr(lparen + 1, rparen - lparen - 1);
    if (!trim(params).empty()) {
        bool first = true;
        for (std::string_view part : split_top_level(params)) {
            std::vector<std::string> tokens = parameter_tokens(part);
            std::erase(tokens, "final");
            if (tokens.empty()) {
                throw ParseError("malformed method signature (empty parameter): '" +
                                 std::string(raw) + "'");
            }
            if (!first) out += ", ";
            out += tokens.front();
            first = false;
        }
    }
    out += ")";
    return out;
}

std::string normalize_field_name(std::string_view raw) {
    std::string_view input = trim(raw);
    if (const std::size_t colon = input.find(':'); colon != std::string_view::npos) {
        input = trim(input.substr(0, colon));
    }
    const std::size_t last_space = input.find_last_of(" \t");
    const std::string_view name =
        last_space == std::string_view::npos ? input : trim(input.substr(last_space + 1));
    if (name.empty() || name.find('(') != std::string_view::npos) {
        throw ParseError("malformed field name: '" + std::string(raw) + "'");
    }
    return std::string(name);
}

std::string method_simple_name(std::string_view canonical_signature) {
    const std::size_t lparen = canonical_signature.find('(');
    return std::string(lparen == std::string_view::npos ? canonical_signature
                                                        : canonical_signature.substr(0, lparen));
}

std::string class_simple_name(std::string_view fqn) {
    const std::size_t dot = fqn.find_last_of('.');
    return std::string(dot == std::string_view::npos ? fqn : fqn.substr(dot + 1));
}

namespace {

int parse_int_field(std::string_view text, std::size_t pos, std::size_t len,
                    std::string_view whole) {
    if (pos + len > text.size()) {
        throw ParseError("malformed timestamp: '" + std::string(whole) + "'");
    }
    int value = 0;
    const auto* begin = text.data() + pos;
    const auto [ptr, ec] = std::from_chars(begin, begin + len, value);
    if (ec != std::errc{} || ptr != begin + len) {
        throw ParseError("malformed timestamp: '" + std::string(whole) + "'");
    }
    return value;
}

}  // namespace

Timestamp parse_timestamp(std::string_view text) {
    const std::string_view s = trim(text);
    const auto fail = [&]() -> ParseError {
        return ParseError("malformed timestamp: '" + std::string(text) + "'");
    };
    if (s.size() < 10 || s[4] != '-' || s[7] != '-') throw fail();
    const int y = parse_int_field(s, 0, 4, text);
    const int mo = parse_int_field(s, 5, 2, text);
    const int d = parse_int_field(s, 8, 2, text);
    int h = 0, mi = 0, se = 0;
    std::size_t pos = 10;
    if (pos < s.size() && (s[pos] == 'T' || s[pos] == ' ')) {
        ++pos;
        h = parse_int_field(s, pos, 2, text);
        if (pos + 2 >= s.size() || s[pos + 2] != ':') throw fail();
        mi = parse_int_field(s, pos + 3, 2, text);
        pos += 5;
        if (pos < s.size() && s[pos] == ':') {
            se = parse_int_field(s, pos + 1, 2, text);
            pos += 3;
        }
    }
    if (pos < s.size()) {
        const std::string_view suffix = s.substr(pos);
        if (suffix != "Z" && suffix != "+00:00") throw fail();  // UTC only
    }
    const std::chrono::year_month_day ymd{std::chrono::year{y},
                                          std::chrono::month{static_cast<unsigned>(mo)},
                                          std::chrono::day{static_cast<unsigned>(d)}};
    if (!ymd.ok() || h > 23 || mi > 59 || se > 60) throw fail();
    return std::chrono::sys_days{ymd} + std::chrono::hours{h} + std::chrono::minutes{mi} +
           std::chrono::seconds{se};
}

std::string format_timestamp(Timestamp instant) {
    const auto day_point = std::chrono::floor<std::chrono::days>(instant);
    const std::chrono::year_month_day ymd{day_point};
    const std::chrono::hh_mm_ss hms{instant - day_point};
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%04d-%02u-%02uT%02lld:%02lld:%02lldZ",
                  static_cast<int>(ymd.year()), static_cast<unsigned>(ymd.month()),
                  static_cast<unsigned>(ymd.day()),
                  static_cast<long long>(hms.hours().count()),
                  static_cast<long long>(hms.minutes().count()),
                  static_cast<long long>(hms.seconds().count()));
    return buf;
}

}  // namespace compminer
