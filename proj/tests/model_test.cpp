#include <doctest.h>

#include "compminer/model.hpp"
#include "compminer/rng.hpp"
#include "testkit.hpp"

using namespace compminer;

TEST_CASE("normalize_signature strips modifiers and return type") {
    CHECK(normalize_signature("public m() : void") == "m()");
    CHECK(normalize_signature("m()") == "m()");
    CHECK(normalize_signature("protected static has(CFString key) : boolean") ==
          "has(CFString)");
}

TEST_CASE("normalize_signature keeps generic arguments as one token") {
    CHECK(normalize_signature("put(Map<String, Integer> entries, int n)") ==
          "put(Map<String,Integer>, int)");
    CHECK(normalize_signature("copy(List< String > xs)") == "copy(List<String>)");
    CHECK(normalize_signature("fill(byte[] buffer)") == "fill(byte[])");
    CHECK(normalize_signature("add(final int x)") == "add(int)");
}

TEST_CASE("normalize_signature rejects malformed input naming the text") {
    CHECK_THROWS_AS(normalize_signature("no parameter list"), ParseError);
    CHECK_THROWS_AS(normalize_signature("m(int"), ParseError);
    CHECK_THROWS_AS(normalize_signature("(int)"), ParseError);
    try {
        normalize_signature("just words");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("just words") != std::string::npos);
    }
}

TEST_CASE("normalize_signature is idempotent and agrees with the reference tokenizer") {
    SplitMix64 rng(42);
    for (int i = 0; i < 2000; ++i) {
        std::string canonical;
        const std::string raw = testkit::random_raw_signature(rng, &canonical);
        CAPTURE(raw);
        const std::string normalized = normalize_signature(raw);
        CHECK(normalized == canonical);
        CHECK(normalize_signature(normalized) == normalized);
        CHECK(testkit::reference_normalize(raw) == normalized);
    }
}

TEST_CASE("signatures differing only in noise normalize identically") {
    const std::string canonical = normalize_signature("resolve(Foo, int)");
    CHECK(normalize_signature("public resolve(Foo a, int b) : Bar") == canonical);
    CHECK(normalize_signature("  resolve(  Foo x ,int y )  ") == canonical);
    CHECK(normalize_signature("private static resolve(Foo value, int count) : void") ==
          canonical);
}

TEST_CASE("normalize_field_name") {
    CHECK(normalize_field_name("counter") == "counter");
    CHECK(normalize_field_name("private counter : int") == "counter");
    CHECK(normalize_field_name("int counter") == "counter");
    CHECK_THROWS_AS(normalize_field_name("   "), ParseError);
    CHECK_THROWS_AS(normalize_field_name("m()"), ParseError);
}

TEST_CASE("simple names") {
    CHECK(method_simple_name("m(int, Foo)") == "m");
    CHECK(method_simple_name("has(CFString)") == "has");
    CHECK(class_simple_name("com.x.Foo") == "Foo");
    CHECK(class_simple_name("Foo") == "Foo");
}

TEST_CASE("ElementRef identity ignores file_path") {
    const ElementRef a = ElementRef::method("com.x.Foo", "m()", "src/Foo.java");
    const ElementRef b = ElementRef::method("com.x.Foo", "m()");
    CHECK(a == b);
    CHECK(ElementRef::method("com.x.Foo", "m()") != ElementRef::field("com.x.Foo", "m"));
    CHECK(ElementRef::whole_class("Foo").display() == "Foo");
    CHECK(a.display() == "com.x.Foo.m()");
}

TEST_CASE("kind tags round-trip") {
    for (RefactoringKind kind : kAllRefactoringKinds) {
        CHECK(refactoring_kind_from_tag(to_tag(kind)) == kind);
        CHECK(refactoring_kind_from_name(display_name(kind)) == kind);
    }
    for (CompositeKind kind : kAllCompositeKinds) {
        CHECK(composite_kind_from_tag(to_tag(kind)) == kind);
    }
    CHECK(refactoring_kind_from_name("Pull Up Attribute") == RefactoringKind::PullUpField);
    CHECK(refactoring_kind_from_name("push down attribute") ==
          RefactoringKind::PushDownField);
    CHECK(!refactoring_kind_from_tag("rename_method").has_value());
}

TEST_CASE("record validation enforces kind/member rules") {
    RefactoringRecord record;
    record.id = "1";
    record.kind = RefactoringKind::Extract;
    record.source = ElementRef::method("A", "m()");
    record.target = ElementRef::method("A", "m1()");
    CHECK_NOTHROW(validate_record(record));

    record.target = ElementRef::method("B", "m1()");
    CHECK_THROWS_AS(validate_record(record), SchemaError);

    record.kind = RefactoringKind::ExtractMove;
    CHECK_NOTHROW(validate_record(record));
    record.target = ElementRef::method("A", "m1()");
    CHECK_THROWS_AS(validate_record(record), SchemaError);

    record.kind = RefactoringKind::PullUpField;
    record.source = ElementRef::method("A", "m()");
    record.target = ElementRef::method("B", "m()");
    CHECK_THROWS_AS(validate_record(record), SchemaError);
    record.source = ElementRef::field("A", "x");
    record.target = ElementRef::field("B", "x");
    CHECK_NOTHROW(validate_record(record));
}

TEST_CASE("timestamp parsing and formatting") {
    const Timestamp t = parse_timestamp("2020-07-05T00:00Z");
    CHECK(format_timestamp(t) == "2020-07-05T00:00:00Z");
    CHECK(parse_timestamp("2020-07-05T00:00:00Z") == t);
    CHECK(parse_timestamp("2020-07-05T00:00:00+00:00") == t);
    CHECK(parse_timestamp("2020-07-05") == t);
    CHECK(format_timestamp(parse_timestamp("2021-12-31T23:59:58Z")) ==
          "2021-12-31T23:59:58Z");
    CHECK_THROWS_AS(parse_timestamp("yesterday"), ParseError);
    CHECK_THROWS_AS(parse_timestamp("2020-13-01T00:00Z"), ParseError);
    CHECK_THROWS_AS(parse_timestamp("2020-02-30"), ParseError);
    CHECK_THROWS_AS(parse_timestamp("2020-07-05T10:00:00+02:00"), ParseError);
}
