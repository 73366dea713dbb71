#pragma once

#include <array>
#include <chrono>
#include <compare>
#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace compminer {

/// UTC instant with second precision.
using Timestamp = std::chrono::sys_seconds;

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed textual input (signatures, messages, timestamps, report files).
class ParseError : public Error {
public:
    using Error::Error;
};

/// A miner message whose kind phrase is not one of the supported operations.
/// In stream mode these are skipped with a warning instead of aborting.
class UnsupportedOperation : public ParseError {
public:
    using ParseError::ParseError;
};

/// Structurally invalid input: missing columns, wrong member kind for a
/// record's operation, unknown type tags, report schema mismatches.
class SchemaError : public Error {
public:
    using Error::Error;
};

/// Cross-referenced data that does not line up (e.g. a composite member id
/// absent from the single-operation list).
class IntegrityError : public Error {
public:
    using Error::Error;
};

// ---------------------------------------------------------------------------
// Operation and composite taxonomies
// ---------------------------------------------------------------------------

enum class RefactoringKind {
    Extract,
    ExtractMove,
    Move,
    MoveRename,
    Inline,
    PullUpMethod,
    PushDownMethod,
    PullUpField,
    PushDownField,
};

inline constexpr std::array<RefactoringKind, 9> kAllRefactoringKinds = {
    RefactoringKind::Extract,        RefactoringKind::ExtractMove,
    RefactoringKind::Move,           RefactoringKind::MoveRename,
    RefactoringKind::Inline,         RefactoringKind::PullUpMethod,
    RefactoringKind::PushDownMethod, RefactoringKind::PullUpField,
    RefactoringKind::PushDownField,
};

/// Machine tag used in JSON ("extract", "pull_up_field", ...).
std::string_view to_tag(RefactoringKind kind);
/// Human-readable operation name ("Extract Method", "Pull Up Field", ...).
std::string_view display_name(RefactoringKind kind);
std::optional<RefactoringKind> refactoring_kind_from_tag(std::string_view tag);
/// Accepts display names, "Attribute" synonyms for the field kinds, and
/// machine tags, case-insensitively.
std::optional<RefactoringKind> refactoring_kind_from_name(std::string_view name);

/// True for the seven kinds whose endpoints are methods.
bool is_method_level(RefactoringKind kind);

enum class CompositeKind {
    MethodComposition,
    MethodDecomposition,
    ClassDecomposition,
    InlineMethod,
    PullUpMethod,
    PushDownMethod,
    PullUpField,
    PushDownField,
};

inline constexpr std::array<CompositeKind, 8> kAllCompositeKinds = {
    CompositeKind::MethodComposition, CompositeKind::MethodDecomposition,
    CompositeKind::ClassDecomposition, CompositeKind::InlineMethod,
    CompositeKind::PullUpMethod,       CompositeKind::PushDownMethod,
    CompositeKind::PullUpField,        CompositeKind::PushDownField,
};

std::string_view to_tag(CompositeKind kind);
std::string_view display_name(CompositeKind kind);
std::optional<CompositeKind> composite_kind_from_tag(std::string_view tag);

enum class Scope {
    IntraClass,
    InterClass,
    Mixed,
};

std::string_view to_tag(Scope scope);
std::optional<Scope> scope_from_tag(std::string_view tag);

// ---------------------------------------------------------------------------
// Program-element identity
// ---------------------------------------------------------------------------

enum class MemberKind {
    Method,
    Field,
    Class,
};

/// Identity of a program element: a class plus optionally one of its members.
/// Equality and ordering ignore file_path; two refs denote the same element
/// iff (class_fqn, member kind, member) match after normalization.
struct ElementRef {
    std::string class_fqn;
    MemberKind member_kind = MemberKind::Class;
    std::string member;  // canonical signature / field name / empty for Class
    std::optional<std::string> file_path;

    static ElementRef method(std::string fqn, std::string signature,
                             std::optional<std::string> file = std::nullopt);
    static ElementRef field(std::string fqn, std::string name,
                            std::optional<std::string> file = std::nullopt);
    static ElementRef whole_class(std::string fqn);

    /// "Foo.m()", "Foo.counter", or "Foo" for a class ref.
    std::string display() const;

    friend bool operator==(const ElementRef& a, const ElementRef& b) {
        return a.class_fqn == b.class_fqn && a.member_kind == b.member_kind &&
               a.member == b.member;
    }
    friend std::strong_ordering operator<=>(const ElementRef& a, const ElementRef& b) {
        if (auto c = a.class_fqn <=> b.class_fqn; c != 0) return c;
        if (auto c = a.member_kind <=> b.member_kind; c != 0) return c;
        return a.member <=> b.member;
    }
};

// ---------------------------------------------------------------------------
// Records and composites
// ---------------------------------------------------------------------------

/// One single (atomic) refactoring operation as reported by a miner.
struct RefactoringRecord {
    std::string id;
    std::string project;
    std::string commit;
    std::optional<Timestamp> timestamp;
    RefactoringKind kind = RefactoringKind::Extract;
    ElementRef source;
    ElementRef target;
    std::optional<std::string> raw;  // original message text, not part of identity

    friend bool operator==(const RefactoringRecord& a, const RefactoringRecord& b) {
        return a.id == b.id && a.project == b.project && a.commit == b.commit &&
               a.timestamp == b.timestamp && a.kind == b.kind &&
               a.source == b.source && a.target == b.target;
    }
};

/// Checks the structural rules tying a record's kind to its endpoints:
/// method kinds carry method members, field kinds carry field members,
/// extract stays in one class, extract_move crosses classes.
/// Throws SchemaError when violated.
void validate_record(const RefactoringRecord& record);

/// A detected cluster of single operations sharing one anchor element.
struct Composite {
    CompositeKind kind = CompositeKind::MethodComposition;
    ElementRef anchor;
    std::vector<RefactoringRecord> members;  // sorted by (timestamp, commit, id)
    std::set<std::string> commits;
    std::optional<std::int64_t> age_days;
    std::optional<Scope> scope;

    std::size_t size() const { return members.size(); }
    const std::string& project() const { return members.front().project; }

    friend bool operator==(const Composite& a, const Composite& b) {
        return a.kind == b.kind && a.anchor == b.anchor && a.members == b.members &&
               a.commits == b.commits && a.age_days == b.age_days && a.scope == b.scope;
    }
};

// ---------------------------------------------------------------------------
// Normalization
// ---------------------------------------------------------------------------

/// Reduces a raw method signature such as "public m() : void" or
/// "protected static has(CFString key) : boolean" to the canonical form
/// "name(T1, T2)": visibility modifiers, return type, and parameter names
/// are stripped; generic arguments stay inside one type token with internal
/// whitespace removed. Idempotent. Throws ParseError when there is no
/// parenthesized parameter list.
std::string normalize_signature(std::string_view raw);

/// Reduces "private counter : int" / "int counter" / "counter" to "counter".
std::string normalize_field_name(std::string_view raw);

/// "m(int, Foo)" -> "m".
std::string method_simple_name(std::string_view canonical_signature);

/// "com.x.Foo" -> "Foo".
std::string class_simple_name(std::string_view fqn);

// ---------------------------------------------------------------------------
// Timestamps
// ---------------------------------------------------------------------------

/// Parses "YYYY-MM-DD[THH:MM[:SS]][Z|+00:00]" (UTC only).
Timestamp parse_timestamp(std::string_view text);
std::string format_timestamp(Timestamp instant);

}  // namespace compminer
