#include <doctest.h>

#include <algorithm>

#include "compminer/cluster.hpp"
#include "compminer/metrics.hpp"
#include "compminer/report.hpp"
#include "compminer/version.hpp"
#include "testkit.hpp"

using namespace compminer;

namespace {

ReportBundle bundle_of(const std::vector<RefactoringRecord>& records) {
    ReportBundle bundle;
    bundle.composites = cluster(records);
    bundle.stats = corpus_stats(records, bundle.composites);
    bundle.metadata.tool_version = std::string(kToolVersion);
    bundle.metadata.input_digest = input_digest(records);
    bundle.metadata.generated_at = "2024-01-01T00:00:00Z";
    return bundle;
}

std::size_t count_occurrences(const std::string& text, const std::string& needle) {
    std::size_t count = 0;
    for (std::size_t pos = text.find(needle); pos != std::string::npos;
         pos = text.find(needle, pos + needle.size())) {
        ++count;
    }
    return count;
}

}  // namespace

TEST_CASE("composite message: pull up") {
    const auto fixture = testkit::load_fixture("superfoo_pullup");
    const auto composites = cluster(fixture.records);
    REQUIRE(composites.size() == 1);
    CHECK(render_composite_message(composites[0]) ==
          "Pull Up method m() From: SubFoo1, SubFoo2, SubFoo3 To: m() in SuperFoo");
}

TEST_CASE("composite message: method decomposition") {
    std::vector<RefactoringRecord> records(2);
    records[0].id = "1";
    records[0].project = "p";
    records[0].commit = "c";
    records[0].kind = RefactoringKind::Extract;
    records[0].source = ElementRef::method("A", "m()");
    records[0].target = ElementRef::method("A", "m1()");
    records[1] = records[0];
    records[1].id = "2";
    records[1].kind = RefactoringKind::ExtractMove;
    records[1].target = ElementRef::method("B", "m2()");
    const auto composites = cluster(records);
    REQUIRE(composites.size() == 1);
    CHECK(render_composite_message(composites[0]) ==
          "Decompose method A.m() Into: A.m1(), B.m2()");
}

TEST_CASE("composite message: class decomposition") {
    std::vector<RefactoringRecord> records(2);
    records[0].id = "1";
    records[0].project = "p";
    records[0].commit = "c";
    records[0].kind = RefactoringKind::Move;
    records[0].source = ElementRef::method("Foo", "m1()");
    records[0].target = ElementRef::method("Bar", "m1()");
    records[1] = records[0];
    records[1].id = "2";
    records[1].source = ElementRef::method("Foo", "m2()");
    records[1].target = ElementRef::method("Baz", "m2()");
    const auto composites = cluster(records);
    REQUIRE(composites.size() == 1);
    CHECK(render_composite_message(composites[0]) ==
          "Decompose class Foo Moving: m1() to Bar, m2() to Baz");
}

TEST_CASE("composite message: remaining kinds are rendered") {
    std::set<CompositeKind> seen;
    for (std::uint64_t seed = 12; seed < 18; ++seed) {
        for (const auto& composite : cluster(testkit::random_records(seed, 300))) {
            seen.insert(composite.kind);
            CHECK(!render_composite_message(composite).empty());
        }
    }
    CHECK(seen.size() == kAllCompositeKinds.size());
}

TEST_CASE("json report round-trips losslessly") {
    const auto records = testkit::random_records(5, 250);
    const auto bundle = bundle_of(records);
    const std::string text = emit_json(bundle);
    const ParsedReport parsed = parse_report(text);
    CHECK(emit_json(parsed) == text);

    CHECK(parsed.schema_version == kReportSchemaVersion);
    CHECK(parsed.stats == bundle.stats);
    REQUIRE(parsed.composites.size() == bundle.composites.size());
    for (std::size_t i = 0; i < parsed.composites.size(); ++i) {
        const ReportComposite& a = parsed.composites[i];
        const Composite& b = bundle.composites[i];
        CHECK(a.kind == b.kind);
        CHECK(a.anchor == b.anchor);
        CHECK(a.size == b.size());
        CHECK(a.scope == b.scope);
        CHECK(a.age_days == b.age_days);
        CHECK(a.member_ids.size() == b.members.size());
        CHECK(a.message == render_composite_message(b));
    }
}

TEST_CASE("json report: scope and age are omitted when absent") {
    const auto fixture = testkit::load_fixture("superfoo_pullup");
    const std::string text = emit_json(bundle_of(fixture.records));
    CHECK(text.find("\"scope\"") == std::string::npos);
    CHECK(text.find("\"age_days\"") == std::string::npos);
    CHECK(text.find("\"schema_version\": \"1\"") != std::string::npos);
}

TEST_CASE("parse_report errors") {
    CHECK_THROWS_AS(parse_report("{ truncated"), ParseError);
    CHECK_THROWS_AS(parse_report("[]"), ParseError);
    try {
        parse_report("{ truncated");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("malformed report") != std::string::npos);
    }

    const auto fixture = testkit::load_fixture("superfoo_pullup");
    std::string text = emit_json(bundle_of(fixture.records));
    const std::size_t pos = text.find("\"schema_version\": \"1\"");
    REQUIRE(pos != std::string::npos);
    text.replace(pos, 21, "\"schema_version\": \"0\"");
    CHECK_THROWS_AS(parse_report(text), SchemaError);
}

TEST_CASE("empty bundle renders valid markdown and zeroed json") {
    const auto bundle = bundle_of({});
    const std::string markdown = emit_markdown(bundle);
    CHECK(markdown.find("| Name | Projects | Operations | Occurrences | % |") !=
          std::string::npos);
    CHECK(markdown.find("| All | 0 | 0 | 0 | 0.0 |") != std::string::npos);
    const ParsedReport parsed = parse_report(emit_json(bundle));
    CHECK(parsed.stats.singles_total == 0);
    CHECK(parsed.stats.composites_total == 0);
    CHECK(parsed.composites.empty());
}

TEST_CASE("markdown carries the frequency table and per-composite sections") {
    const auto fixture = testkit::load_fixture("spring_dodispatch");
    const auto bundle = bundle_of(fixture.records);
    const std::string markdown = emit_markdown(bundle);
    CHECK(markdown.find(render_frequency_table(bundle.stats)) != std::string::npos);
    CHECK(markdown.find(render_distribution_tables(bundle.stats)) != std::string::npos);
    CHECK(markdown.find("## composite-1") != std::string::npos);
    CHECK(markdown.find("| Method Decomposition | 1 | 6 | 1 | 100.0 |") != std::string::npos);
    CHECK(markdown.find("- scope: mixed") != std::string::npos);
}

TEST_CASE("dot: pull-up fixture has four nodes and three labeled edges") {
    const auto fixture = testkit::load_fixture("superfoo_pullup");
    const auto composites = cluster(fixture.records);
    REQUIRE(composites.size() == 1);
    const std::string dot = emit_dot(composites[0], "composite_pull_up_method_1");
    CHECK(testkit::dot_is_valid(dot));
    CHECK(count_occurrences(dot, "->") == 3);
    CHECK(count_occurrences(dot, "label=\"pull_up_method c0ffee01\"") == 3);
    for (const char* node : {"\"SubFoo1.m()\";", "\"SubFoo2.m()\";", "\"SubFoo3.m()\";",
                             "\"SuperFoo.m()\";"}) {
        CHECK(dot.find(node) != std::string::npos);
    }
    CHECK(dot.find("-> \"SuperFoo.m()\"") != std::string::npos);
}

TEST_CASE("dot: doDispatch decomposition fans out, two edges leave the class") {
    const auto fixture = testkit::load_fixture("spring_dodispatch");
    const auto composites = cluster(fixture.records);
    REQUIRE(composites.size() == 1);
    const std::string dot = emit_dot(composites[0]);
    CHECK(testkit::dot_is_valid(dot));
    CHECK(count_occurrences(
              dot, "\"org.springframework.web.servlet.DispatcherServlet.doDispatch("
                   "HttpServletRequest, HttpServletResponse)\" ->") == 6);
    CHECK(count_occurrences(dot, "-> \"org.springframework.web.servlet."
                                 "HandlerExecutionChain.") == 2);
}

TEST_CASE("dot output for every composite kind passes the grammar checker") {
    const auto records = testkit::random_records(77, 300);
    std::size_t ordinal = 0;
    for (const auto& composite : cluster(records)) {
        ++ordinal;
        const std::string name = dot_file_name(composite, ordinal);
        CHECK(name.starts_with("composite_"));
        CHECK(name.ends_with(".dot"));
        CHECK(testkit::dot_is_valid(emit_dot(composite, name.substr(0, name.size() - 4))));
    }
    CHECK(ordinal > 0);
}

TEST_CASE("rendering is deterministic") {
    const auto records = testkit::random_records(123, 200);
    CHECK(emit_json(bundle_of(records)) == emit_json(bundle_of(records)));
    CHECK(emit_markdown(bundle_of(records)) == emit_markdown(bundle_of(records)));
}

TEST_CASE("input digest is stable and content-sensitive") {
    const auto records = testkit::random_records(9, 50);
    CHECK(input_digest(records) == input_digest(records));
    CHECK(input_digest(records).size() == 16);
    auto changed = records;
    changed[0].commit = "different";
    CHECK(input_digest(changed) != input_digest(records));
    CHECK(input_digest({}) != input_digest(records));
}
