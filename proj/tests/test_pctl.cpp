#include <doctest.h>

#include <random>

#include "flycheck/errors.hpp"
#include "flycheck/pctl.hpp"

using namespace flycheck;
using namespace flycheck::pctl;

namespace {

StatePtr label(const char* name) { return make_atom(std::string(name)); }

bool same(const StatePtr& a, const StatePtr& b) { return equal(*a, *b); }

SourcePos error_pos(std::string_view text) {
    try {
        parse_property(text);
    } catch (const SyntaxError& e) {
        return e.pos();
    }
    FAIL("no syntax error for " << text);
    return {};
}

// Random formulas over the full surface syntax, for printer/parser tests.
class SurfaceGenerator {
public:
    explicit SurfaceGenerator(std::uint64_t seed) : rng_(seed) {}

    StatePtr state(int depth) {
        switch (pick(depth <= 0 ? 3 : 9)) {
            case 0: return make_atom("l" + std::to_string(pick(3)));
            case 1: return pick(2) ? make_true() : make_false();
            case 2: {
                InlinePredicate p{"v" + std::to_string(pick(2)), static_cast<Comparison>(pick(6)), pick(7) - 3, false};
                return make_atom(AtomId::inline_predicate(p));
            }
            case 3: return make_atom(AtomId::inline_predicate({"b", Comparison::eq, pick(2), true}));
            case 4: return make_not(state(depth - 1));
            case 5: return make_or(state(depth - 1), state(depth - 1));
            case 6: return make_and(state(depth - 1), state(depth - 1));
            case 7: return make_implies(state(depth - 1), state(depth - 1));
            default: return prob(depth, false);
        }
    }

    StatePtr prob(int depth, bool allow_query) {
        ProbBound b;
        b.kind = static_cast<BoundKind>(pick(allow_query ? 5 : 4));
        if (b.kind != BoundKind::query) b.p = std::uniform_real_distribution<double>(0.0, 1.0)(rng_);
        return make_prob(b, path(depth - 1));
    }

    PathPtr path(int depth) {
        auto k = static_cast<std::uint32_t>(pick(30));
        switch (pick(7)) {
            case 0: return make_next(state(depth));
            case 1: return make_bounded_until(state(depth), k, state(depth));
            case 2: return make_until(state(depth), state(depth));
            case 3: return make_eventually(std::nullopt, state(depth));
            case 4: return make_eventually(k, state(depth));
            case 5: return make_globally(std::nullopt, state(depth));
            default: return make_globally(k, state(depth));
        }
    }

private:
    int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng_); }
    std::mt19937_64 rng_;
};

}  // namespace

TEST_CASE("parse P>=1 [ true U \"stable\" ]") {
    auto q = parse_property("P>=1 [ true U \"stable\" ]");
    CHECK(same(q.formula, make_prob({BoundKind::ge, 1.0, false}, make_until(make_true(), label("stable")))));
    CHECK_FALSE(q.is_query());
}

TEST_CASE("parse P=? [ F<=50 \"stable\" ] as bounded until from true") {
    auto q = parse_property("P=? [ F<=50 \"stable\" ]");
    CHECK(q.is_query());
    CHECK(same(q.formula, make_prob({BoundKind::query, 0.0, false}, make_bounded_until(make_true(), 50, label("stable")))));
}

TEST_CASE("parse next over a disjunction") {
    auto q = parse_property("P>0.5 [ X (\"eat1\" | \"eat2\") ]");
    CHECK(same(q.formula, make_prob({BoundKind::gt, 0.5, false}, make_next(make_or(label("eat1"), label("eat2"))))));
}

TEST_CASE("operator precedence and associativity") {
    CHECK(same(parse_formula_raw("\"a\" | \"b\" & !\"c\""),
               make_or(label("a"), make_and(label("b"), make_not(label("c"))))));
    CHECK(same(parse_formula_raw("\"a\" => \"b\" => \"c\""),
               make_implies(label("a"), make_implies(label("b"), label("c")))));
    CHECK(same(parse_formula_raw("\"a\" | \"b\" | \"c\""), make_or(make_or(label("a"), label("b")), label("c"))));
}

TEST_CASE("inline comparison atoms") {
    auto f = parse_formula_raw("(x>=-2) & (done=true)");
    const auto& a = std::get<And>(f->node);
    const auto& lhs = std::get<Atom>(a.lhs->node).id;
    REQUIRE(lhs.is_inline());
    CHECK(lhs.name == "x>=-2");
    CHECK(lhs.predicate->op == Comparison::ge);
    CHECK(lhs.predicate->value == -2);
    const auto& rhs = std::get<Atom>(a.rhs->node).id;
    CHECK(rhs.predicate->boolean_literal);
    CHECK(rhs.predicate->value == 1);
    // a parenthesised formula is not an inline atom
    CHECK(std::holds_alternative<Or>(parse_formula_raw("(\"a\" | \"b\")")->node));
}

TEST_CASE("desugaring rules") {
    CHECK(same(desugar(parse_formula_raw("P>0 [ F \"goal\" ]")),
               make_prob({BoundKind::gt, 0.0, false}, make_until(make_true(), label("goal")))));
    CHECK(same(desugar(parse_formula_raw("P>=0.9 [ G \"safe\" ]")),
               make_prob({BoundKind::le, 1.0 - 0.9, false}, make_until(make_true(), make_not(label("safe"))))));
    CHECK(same(desugar(parse_formula_raw("P<0.25 [ G<=4 \"safe\" ]")),
               make_prob({BoundKind::gt, 0.75, false}, make_bounded_until(make_true(), 4, make_not(label("safe"))))));
    CHECK(same(desugar(parse_formula_raw("\"a\" => \"b\"")), make_or(make_not(label("a")), label("b"))));
    CHECK(same(desugar(parse_formula_raw("P=? [ G \"safe\" ]")),
               make_prob({BoundKind::query, 0.0, true}, make_until(make_true(), make_not(label("safe"))))));
}

TEST_CASE("complemented query prints back as G") {
    auto q = parse_property("P=? [ G<=7 \"safe\" ]");
    CHECK(to_string(*q.formula) == "P=? [ G<=7 \"safe\" ]");
    CHECK(same(parse_property(to_string(*q.formula)).formula, q.formula));
}

TEST_CASE("printer and parser are inverse on random formulas") {
    SurfaceGenerator gen(7);
    for (int i = 0; i < 500; ++i) {
        auto f = i % 5 == 0 ? gen.prob(3, true) : gen.state(3);
        const auto text = to_string(*f);
        CAPTURE(text);
        CHECK(same(parse_formula_raw(text), f));
        auto q = parse_property(text);
        CHECK(same(parse_property(to_string(*q.formula)).formula, q.formula));
    }
}

TEST_CASE("desugar is idempotent and yields the core grammar") {
    SurfaceGenerator gen(11);
    for (int i = 0; i < 500; ++i) {
        auto f = gen.state(3);
        auto once = desugar(f);
        CAPTURE(to_string(*f));
        CHECK(is_core(*once));
        CHECK(same(desugar(once), once));
    }
    CHECK_FALSE(is_core(*parse_formula_raw("P>0 [ F \"a\" ]")));
    CHECK_FALSE(is_core(*parse_formula_raw("\"a\" => \"b\"")));
}

TEST_CASE("collect_atoms lists distinct atoms in order") {
    auto atoms = collect_atoms(*parse_formula_raw("\"b\" & P>0 [ \"a\" U (x=1) ] | \"b\""));
    REQUIRE(atoms.size() == 3);
    CHECK(atoms[0].name == "b");
    CHECK(atoms[1].name == "a");
    CHECK(atoms[2].name == "x=1");
}

TEST_CASE("satisfies applies the comparison exactly unless widened") {
    CHECK(satisfies(0.5, {BoundKind::ge, 0.5, false}));
    CHECK_FALSE(satisfies(0.5, {BoundKind::gt, 0.5, false}));
    CHECK(satisfies(0.5, {BoundKind::gt, 0.5, false}, 1e-9));
    CHECK(satisfies(0.3, {BoundKind::lt, 0.5, false}));
    CHECK_FALSE(satisfies(0.6, {BoundKind::le, 0.5, false}));
    CHECK_THROWS_AS(satisfies(0.6, {BoundKind::query, 0.0, false}), Error);
}

TEST_CASE("syntax errors carry line and column") {
    auto pos = error_pos("P>=1 [ F \"a\" ");
    CHECK(pos.line == 1);
    CHECK(pos.column == 14);
    CHECK(error_pos("P>=1 [ \"a\" \"b\" ]").column == 12);
    CHECK(error_pos("P>=1.5 [ F \"a\" ]").column == 4);
    CHECK(error_pos("P>=-0.5 [ F \"a\" ]").column == 4);
    CHECK(error_pos("P>=0.5 [ F<=-1 \"a\" ]").column == 13);
    CHECK(error_pos("P>=0.5 [ X P=? [ F \"a\" ] ]").column == 12);
    CHECK(error_pos("P=? [ F \"a\" ] | \"b\"").column == 1);
    CHECK(error_pos("\"a\" # \"b\"").column == 5);
}

TEST_CASE("property files skip comments and blank lines and report the failing line") {
    auto props = parse_property_file("// header\n\nP>=1 [ F \"a\" ]  // trailing\n  P=? [ X \"b\" ]\n");
    REQUIRE(props.size() == 2);
    CHECK(props[0].source == "P>=1 [ F \"a\" ]");
    CHECK(props[0].line == 3);
    CHECK(props[1].line == 4);
    CHECK(props[1].is_query());

    try {
        parse_property_file("P>=1 [ F \"a\" ]\n\n   P>=2 [ F \"a\" ]\n");
        FAIL("expected a syntax error");
    } catch (const SyntaxError& e) {
        CHECK(e.pos().line == 3);
        CHECK(e.pos().column == 7);
    }
}
