#include <catch2/catch_amalgamated.hpp>

#include "ccg/workbench.hpp"

using namespace ccg;

namespace {

const char* kSample = R"gw(# sample workbench
[group:Z]
kind = free_abelian
rank = 1

[group:Z2]
kind = free_abelian
rank = 2

[group:Z5]
kind = finite_cyclic
order = 5

[group:H]
kind = heisenberg

[group:QT3]
kind = rationals_truncated
depth = 3

[group:F2]
kind = free
rank = 2

[group:A]
kind = presented_abelian
generators = 3
relations = 2,0,0

[group:P]
kind = direct_product
factors = Z2, Z5

[weights:w1]
group = Z2
entries = (1,0):1, (0,1):1

[weights:wq]
group = QT3
entries = 1:1, 1/2:2, 1/6:3

[cover:C5]
group = Z
d = 5
r = 5
family = interval(6,12,0)
family = interval(6,12,6)

[cover:E]
group = Z
d = 2
r = 3
family = explicit({0, 1, 2}, {8, 9})
family = product(interval(3,7,0))

[series:heis]
polycyclic = true
quotient = presented(1)
quotient = presented(2)

[series:lamp]
polycyclic = false
quotient = declared(0, true, "torsion abelian base")
quotient = presented(1)
witness = 1
witness_note = "the Z factor embeds"

[hom:proj]
source = Z2
target = Z
images = 1, 0

[hom:abel]
source = H
target = Z2
images = (1,0), (0,1)
)gw";

}  // namespace

TEST_CASE("parsing the spec examples", "[workbench]") {
    SECTION("a free abelian group section") {
        WorkbenchFile f = parse_workbench("[group:Z2]\nkind = free_abelian\nrank = 2\n");
        REQUIRE(spec_equal(f.group("Z2"), make_free_abelian(2)));
    }
    SECTION("unit weights symmetrize automatically") {
        WorkbenchFile f = parse_workbench(
            "[group:Z2]\nkind = free_abelian\nrank = 2\n"
            "[weights:w1]\ngroup = Z2\nentries = (1,0):1, (0,1):1\n");
        const WeightFunction& wf = f.weights_def("w1").wf;
        REQUIRE(wf.symmetrized);
        REQUIRE(wf.entries.size() == 4);
    }
    SECTION("nonpositive weights are rejected with a position") {
        try {
            parse_workbench(
                "[group:Z]\nkind = free_abelian\nrank = 1\n"
                "[weights:w]\ngroup = Z\nentries = 1:0\n");
            FAIL("expected a parse error");
        } catch (const parse_error& e) {
            REQUIRE(e.line == 6);
            REQUIRE(std::string(e.what()).find("positive") != std::string::npos);
        }
    }
}

TEST_CASE("full sample parses and resolves", "[workbench]") {
    WorkbenchFile f = parse_workbench(kSample);
    REQUIRE(f.groups.size() == 8);
    REQUIRE(spec_equal(f.group("P"),
                       make_direct_product({make_free_abelian(2), make_finite_cyclic(5)})));
    REQUIRE(f.weights.size() == 2);
    REQUIRE(f.covers.size() == 2);
    REQUIRE(f.series.size() == 2);
    REQUIRE(f.homs.size() == 2);

    auto [cert, ctx] = f.cover_certificate("C5");
    REQUIRE(cert.d == 5);
    REQUIRE(verify_families(cert, ctx, Rat(40)).clean());

    REQUIRE(hirsch_length(f.series_spec("heis")) == Dim(3));
    REQUIRE(f.hom("abel").hom.images.size() == 3);
}

TEST_CASE("canonical printing round-trips", "[workbench]") {
    WorkbenchFile f1 = parse_workbench(kSample);
    std::string printed = print_workbench(f1);
    WorkbenchFile f2 = parse_workbench(printed);
    REQUIRE(print_workbench(f2) == printed);
    REQUIRE(f2.groups.size() == f1.groups.size());
    REQUIRE(f2.order.size() == f1.order.size());
    // Values survive: spot-check a norm through both parses.
    MetricContext c1 = f1.context("wq");
    MetricContext c2 = f2.context("wq");
    GroupElement x = parse_element(f1.group("QT3"), "5/6");
    REQUIRE(*c1.norm(x, Rat(10)) == *c2.norm(x, Rat(10)));
}

TEST_CASE("element literals round-trip", "[workbench]") {
    WorkbenchFile f = parse_workbench(kSample);
    struct Case {
        const char* group;
        const char* literal;
    };
    for (const Case& c : {Case{"Z", "-7"}, Case{"Z2", "(3,-4)"}, Case{"Z5", "3"},
                          Case{"H", "(1,-2,5)"}, Case{"QT3", "-5/6"},
                          Case{"F2", "[1,2,-1]"}, Case{"A", "(1,2,-3)"},
                          Case{"P", "((1,2),4)"}}) {
        const GroupSpec& g = f.group(c.group);
        GroupElement e = parse_element(g, c.literal);
        REQUIRE(element_equal(parse_element(g, element_str(g, e)), e));
    }
    // Canonicalization happens on parse.
    REQUIRE(element_str(f.group("Z5"), parse_element(f.group("Z5"), "12")) == "2");
    REQUIRE(element_str(f.group("A"), parse_element(f.group("A"), "(3,0,0)")) ==
            element_str(f.group("A"), parse_element(f.group("A"), "(1,0,0)")));
    REQUIRE(element_str(f.group("F2"), parse_element(f.group("F2"), "[1,2,-2,-1]")) == "[]");
}

TEST_CASE("parse errors carry positions and reasons", "[workbench]") {
    struct Bad {
        const char* text;
        int line;
        const char* needle;
    };
    for (const Bad& b : {
             Bad{"[group:Z]\nkind = free_abelian\n", 1, "missing key 'rank'"},
             Bad{"rank = 1\n", 1, "before any section"},
             Bad{"[group:Z]\nkind = mystery\n", 1, "unknown group kind"},
             Bad{"[group:Z]\nkind = free_abelian\nrank = 1\nbogus = 2\n", 4, "unknown key"},
             Bad{"[thing:Z]\n", 1, "unknown section kind"},
             Bad{"[group:Z]\nkind = free_abelian\nrank = 1\n[group:Z]\nkind = heisenberg\n", 4,
                 "duplicate name"},
             Bad{"[weights:w]\ngroup = nope\nentries = 1:1\n", 2, "unresolved group"},
             Bad{"[group:Z]\nkind = free_abelian\nrank = 1\n[hom:h]\nsource = Z\ntarget = Z\n"
                 "images = (1,2)\n",
                 7, "coordinate"},
         }) {
        try {
            parse_workbench(b.text);
            FAIL("expected a parse error for: " << b.text);
        } catch (const parse_error& e) {
            INFO(b.text);
            REQUIRE(e.line == b.line);
            REQUIRE(std::string(e.what()).find(b.needle) != std::string::npos);
        }
    }
}

TEST_CASE("forward references between groups are rejected", "[workbench]") {
    REQUIRE_THROWS_AS(parse_workbench("[group:P]\nkind = direct_product\nfactors = Z\n"
                                      "[group:Z]\nkind = free_abelian\nrank = 1\n"),
                      parse_error);
}

TEST_CASE("comments and blank lines are ignored", "[workbench]") {
    WorkbenchFile f = parse_workbench(
        "# leading comment\n\n[group:Z]\n# inner comment\nkind = free_abelian\n\nrank = 1\n");
    REQUIRE(spec_equal(f.group("Z"), make_free_abelian(1)));
}
