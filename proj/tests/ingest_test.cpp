#include <doctest.h>

#include <sstream>

#include "compminer/ingest.hpp"
#include "compminer/report.hpp"
#include "testkit.hpp"

using namespace compminer;

namespace {

MessageContext ctx() {
    MessageContext context;
    context.project = "p";
    context.commit = "abc123";
    context.id = "1";
    return context;
}

}  // namespace

TEST_CASE("parse_miner_message: pull up") {
    const auto record = parse_miner_message(
        "Pull Up Method public m() : void from class SubFoo1 "
        "to public m() : void from class SuperFoo",
        ctx());
    CHECK(record.kind == RefactoringKind::PullUpMethod);
    CHECK(record.source == ElementRef::method("SubFoo1", "m()"));
    CHECK(record.target == ElementRef::method("SuperFoo", "m()"));
    CHECK(record.raw.value().find("SubFoo1") != std::string::npos);
}

TEST_CASE("parse_miner_message: inline within one class") {
    const auto record = parse_miner_message(
        "Inline Method public f() : void from class A to public g() : void from class A",
        ctx());
    CHECK(record.kind == RefactoringKind::Inline);
    CHECK(record.source == ElementRef::method("A", "f()"));
    CHECK(record.target == ElementRef::method("A", "g()"));
}

TEST_CASE("parse_miner_message: extract names the new method first") {
    const std::string message =
        "Extract Method private createCountsTracker() : CountsTracker "
        "from public shouldCreateAnEmptyCountsStore() : void in class CountsComputerTest";
    const auto record = parse_miner_message(message, ctx());
    CHECK(record.kind == RefactoringKind::Extract);
    CHECK(record.source ==
          ElementRef::method("CountsComputerTest", "shouldCreateAnEmptyCountsStore()"));
    CHECK(record.target ==
          ElementRef::method("CountsComputerTest", "createCountsTracker()"));

    // Round trip through the canonical renderer.
    const auto again = parse_miner_message(render_record_message(record), ctx());
    CHECK(again == record);
}

TEST_CASE("parse_miner_message: extract and move carries two classes") {
    const auto record = parse_miner_message(
        "Extract And Move Method isEmptyMap(Map) from send() in class "
        "com.a.DubboMonitor to class com.b.CollectionUtils",
        ctx());
    CHECK(record.kind == RefactoringKind::ExtractMove);
    CHECK(record.source == ElementRef::method("com.a.DubboMonitor", "send()"));
    CHECK(record.target == ElementRef::method("com.b.CollectionUtils", "isEmptyMap(Map)"));
}

TEST_CASE("parse_miner_message: field synonyms and case-insensitive phrases") {
    const auto a = parse_miner_message(
        "Pull Up Attribute private counter : int from class Sub to counter in class Super",
        ctx());
    const auto b = parse_miner_message(
        "pull up field counter from class Sub to counter in class Super", ctx());
    CHECK(a.kind == RefactoringKind::PullUpField);
    CHECK(a.kind == b.kind);
    CHECK(a.source == b.source);
    CHECK(a.target == ElementRef::field("Super", "counter"));
}

TEST_CASE("parse_miner_message: errors") {
    CHECK_THROWS_AS(parse_miner_message("Rename Method m() from class A to class B", ctx()),
                    UnsupportedOperation);
    CHECK_THROWS_AS(parse_miner_message("Extract Method no parens from fn in class A", ctx()),
                    ParseError);
    CHECK_THROWS_AS(parse_miner_message("Move Method m() from class A", ctx()), ParseError);
}

TEST_CASE("parse_miner_text skips unsupported lines and counts them") {
    std::istringstream in(
        "Pull Up Method m() from class A to m() in class S\n"
        "\n"
        "Rename Class Foo renamed to Bar\n"
        "Pull Up Method m() from class B to m() in class S\n");
    MessageContext context = ctx();
    const auto result = parse_miner_text(in, context);
    CHECK(result.records.size() == 2);
    CHECK(result.skipped_unsupported == 1);
    CHECK(result.records[0].id == "1");
    CHECK(result.records[1].id == "4");
}

TEST_CASE("parse_jsonl: schema instantiation") {
    std::istringstream in(
        R"json({"project":"p","commit":"abc","type":"extract","source":{"class":"A","method":"m()"},"target":{"class":"A","method":"m1()"}})json"
        "\n");
    const auto records = parse_jsonl(in);
    REQUIRE(records.size() == 1);
    CHECK(records[0].kind == RefactoringKind::Extract);
    CHECK(records[0].id == "1");
    CHECK(records[0].source == ElementRef::method("A", "m()"));
    CHECK(records[0].target == ElementRef::method("A", "m1()"));
    CHECK(!records[0].timestamp.has_value());
}

TEST_CASE("parse_jsonl: empty stream") {
    std::istringstream in("");
    CHECK(parse_jsonl(in).empty());
}

TEST_CASE("parse_jsonl: malformed line names the line number") {
    std::istringstream in(
        R"json({"project":"p","commit":"c","type":"inline","source":{"class":"A","method":"f()"},"target":{"class":"A","method":"g()"}})json"
        "\n"
        R"json({"project":"p","commit":"c","type":"inline","source":{"class":"B","method":"f()"},"target":{"class":"B","method":"g()"}})json"
        "\n"
        R"json({"project":"p","commit":"c","type":"inline","source":{"class":"C","method":"f()"},"target":{"class":"C","method":"g()"}})json"
        "\n"
        "{not json\n");
    try {
        parse_jsonl(in);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("line 4") != std::string::npos);
    }
}

TEST_CASE("parse_jsonl: duplicate explicit id") {
    std::istringstream in(
        R"json({"id":"x","project":"p","commit":"c","type":"move","source":{"class":"A","method":"m()"},"target":{"class":"B","method":"m()"}})json"
        "\n"
        R"json({"id":"x","project":"p","commit":"c","type":"move","source":{"class":"C","method":"m()"},"target":{"class":"D","method":"m()"}})json"
        "\n");
    CHECK_THROWS_AS(parse_jsonl(in), ParseError);
}

TEST_CASE("parse_jsonl: unknown type and invariant violations are schema errors") {
    std::istringstream unknown(
        R"json({"project":"p","commit":"c","type":"rename","source":{"class":"A","method":"m()"},"target":{"class":"B","method":"m()"}})json"
        "\n");
    CHECK_THROWS_AS(parse_jsonl(unknown), ParseError);

    std::istringstream cross_class_extract(
        R"json({"project":"p","commit":"c","type":"extract","source":{"class":"A","method":"m()"},"target":{"class":"B","method":"m1()"}})json"
        "\n");
    CHECK_THROWS_AS(parse_jsonl(cross_class_extract), ParseError);

    std::istringstream field_for_method(
        R"json({"project":"p","commit":"c","type":"move","source":{"class":"A","field":"x"},"target":{"class":"B","field":"x"}})json"
        "\n");
    CHECK_THROWS_AS(parse_jsonl(field_for_method), ParseError);
}

TEST_CASE("parse_oracle_csv: selection mirrors the oracle filter") {
    std::istringstream in(
        "project,commit,refactoring_type,source_class,source_member,target_class,target_member\n"
        "p1,c1,Extract Method,A,\"m(int, Foo)\",A,m1()\n"
        "p1,c1,Rename Method,A,m(),A,renamed()\n"
        "p1,c2,Move Attribute,A,x,B,x\n"
        "p2,c3,Pull Up Attribute,Sub,counter,Super,counter\n");
    const auto result = parse_oracle_csv(in);
    REQUIRE(result.records.size() == 2);
    CHECK(result.skipped_unselected == 2);
    CHECK(result.records[0].kind == RefactoringKind::Extract);
    CHECK(result.records[0].source == ElementRef::method("A", "m(int, Foo)"));
    CHECK(result.records[1].kind == RefactoringKind::PullUpField);
    CHECK(result.records[1].target == ElementRef::field("Super", "counter"));
}

TEST_CASE("parse_oracle_csv: header-only and missing columns") {
    std::istringstream only_header(
        "project,commit,refactoring_type,source_class,source_member,target_class,target_member\n");
    const auto result = parse_oracle_csv(only_header);
    CHECK(result.records.empty());
    CHECK(result.skipped_unselected == 0);

    std::istringstream missing(
        "project,commit,source_class,source_member,target_class,target_member\n");
    CHECK_THROWS_AS(parse_oracle_csv(missing), SchemaError);
}

TEST_CASE("parse_oracle_csv: optional timestamp column") {
    std::istringstream in(
        "project,commit,timestamp,refactoring_type,source_class,source_member,target_class,target_member\n"
        "p,c,2020-01-01T00:00:00Z,Inline Method,A,f(),B,g()\n"
        "p,c,,Inline Method,A,f(),C,h()\n");
    const auto result = parse_oracle_csv(in);
    REQUIRE(result.records.size() == 2);
    CHECK(result.records[0].timestamp.has_value());
    CHECK(!result.records[1].timestamp.has_value());
}

namespace {

RefactoringRecord extract_in(const std::string& cls, const std::string& src,
                             const std::string& dst, const std::string& id = "1") {
    RefactoringRecord record;
    record.id = id;
    record.project = "p";
    record.commit = "c";
    record.kind = RefactoringKind::Extract;
    record.source = ElementRef::method(cls, src);
    record.target = ElementRef::method(cls, dst);
    return record;
}

}  // namespace

TEST_CASE("apply_filters: package fragments match whole segments only") {
    const FilterConfig config;
    const std::vector<RefactoringRecord> records{
        extract_in("com.foo.test.Helper", "m()", "m1()", "1"),
        extract_in("com.latest.Engine", "m()", "m1()", "2"),
        extract_in("com.foo.core.Engine", "m()", "m1()", "3"),
    };
    const auto result = apply_filters(records, config);
    REQUIRE(result.kept.size() == 2);
    CHECK(result.kept[0].id == "2");  // "latest" must not match fragment "test"
    CHECK(result.kept[1].id == "3");
    CHECK(result.dropped_package == 1);
}

TEST_CASE("apply_filters: file path segments count too") {
    FilterConfig config;
    RefactoringRecord record = extract_in("com.foo.Engine", "m()", "m1()");
    record.source.file_path = "src/test/java/Engine.java";
    const auto result = apply_filters({record}, config);
    CHECK(result.kept.empty());
    CHECK(result.dropped_package == 1);
}

TEST_CASE("apply_filters: constructors") {
    const FilterConfig config;
    const std::vector<RefactoringRecord> records{
        extract_in("com.x.Foo", "Foo(int)", "helper()", "ctor-src"),
        extract_in("com.x.Foo", "make()", "Foo(int)", "ctor-dst"),
        extract_in("com.x.Foo", "m()", "m1()", "plain"),
    };
    const auto result = apply_filters(records, config);
    REQUIRE(result.kept.size() == 1);
    CHECK(result.kept[0].id == "plain");
    CHECK(result.dropped_constructor == 2);

    FilterConfig keep = config;
    keep.exclude_constructors = false;
    CHECK(apply_filters(records, keep).kept.size() == 3);
}

TEST_CASE("apply_filters: projects allowlist") {
    FilterConfig config;
    config.projects_allowlist = std::set<std::string>{"p"};
    RefactoringRecord other = extract_in("com.a.B", "m()", "m1()", "2");
    other.project = "q";
    const auto result =
        apply_filters({extract_in("com.a.B", "m()", "m1()", "1"), other}, config);
    CHECK(result.kept.size() == 1);
    CHECK(result.dropped_project == 1);
}

TEST_CASE("apply_filters is idempotent and order-preserving") {
    const auto records = testkit::random_records(99, 300);
    const FilterConfig config;
    const auto once = apply_filters(records, config);
    const auto twice = apply_filters(once.kept, config);
    CHECK(once.kept == twice.kept);
    CHECK(twice.dropped_total() == 0);

    // Sublist projection: kept records appear in the original order.
    std::size_t cursor = 0;
    for (const auto& kept : once.kept) {
        while (cursor < records.size() && !(records[cursor] == kept)) ++cursor;
        REQUIRE(cursor < records.size());
        ++cursor;
    }
}

TEST_CASE("miner message round-trips through the renderer for every kind") {
    SplitMix64 rng(7);
    const auto records = testkit::random_records(7, 400);
    for (const auto& record : records) {
        const std::string message = render_record_message(record);
        CAPTURE(message);
        MessageContext context;
        context.project = record.project;
        context.commit = record.commit;
        context.timestamp = record.timestamp;
        context.id = record.id;
        RefactoringRecord again = parse_miner_message(message, context);
        CHECK(again == record);
    }
}
