#include <doctest.h>

#include <set>

#include "flycheck/bench.hpp"
#include "flycheck/errors.hpp"
#include "flycheck/oracle.hpp"
#include "flycheck/prism/model.hpp"
#include "flycheck/table_semantics.hpp"
#include "support.hpp"

using namespace flycheck;

namespace {

LayoutPtr small_layout() {
    return std::make_shared<const VariableLayout>(
        std::vector<VariableDecl>{{"y", -2, 2, false}, {"b", 0, 1, true}, {"x", 0, 300, false}});
}

}  // namespace

TEST_CASE("layout sorts variables by name and rejects duplicates") {
    auto layout = small_layout();
    REQUIRE(layout->size() == 3);
    CHECK((*layout)[0].name == "b");
    CHECK((*layout)[1].name == "x");
    CHECK((*layout)[2].name == "y");
    CHECK(layout->index_of("x") == 1u);
    CHECK_FALSE(layout->index_of("z").has_value());
    CHECK(layout->key_width(1) == 2);  // 301 values
    CHECK(layout->key_size() == 4);

    CHECK_THROWS_AS(VariableLayout({{"a", 0, 1, false}, {"a", 0, 2, false}}), std::invalid_argument);
    CHECK_THROWS_AS(VariableLayout({{"a", 3, 1, false}}), std::invalid_argument);
}

TEST_CASE("valuation entries are ordered and bounded") {
    auto layout = small_layout();
    StateValuation s(layout, {1, 42, -2});
    auto entries = s.entries();
    REQUIRE(entries.size() == 3);
    CHECK(entries[0] == std::pair<std::string, std::int32_t>{"b", 1});
    CHECK(entries[2] == std::pair<std::string, std::int32_t>{"y", -2});
    CHECK(s.value("x") == 42);
    CHECK(s.to_string() == "(b=true,x=42,y=-2)");
    CHECK_THROWS_AS(StateValuation(layout, {0, 301, 0}), ModelEvaluationError);
    CHECK_THROWS_AS(StateValuation(layout, {0, 0, -3}), ModelEvaluationError);
    CHECK_THROWS_AS(StateValuation(layout, {0, 0}), ModelEvaluationError);
}

TEST_CASE("canonical key is injective and round-trips on every valuation") {
    auto layout = std::make_shared<const VariableLayout>(
        std::vector<VariableDecl>{{"a", -1, 1, false}, {"b", 0, 1, true}, {"c", 0, 259, false}});
    std::set<StateKey> keys;
    std::size_t count = 0;
    for (int a = -1; a <= 1; ++a) {
        for (int b = 0; b <= 1; ++b) {
            for (int c = 0; c <= 259; ++c) {
                StateValuation s(layout, {a, b, c});
                auto k = canonical_key(s);
                CHECK(k == canonical_key(StateValuation(layout, {a, b, c})));
                keys.insert(k);
                ++count;
                if (!(decode_key(layout, k) == s)) FAIL("round trip failed for " << s.to_string());
            }
        }
    }
    CHECK(keys.size() == count);
}

TEST_CASE("keys of valuations differing in one variable differ") {
    auto layout = small_layout();
    CHECK_FALSE(canonical_key(StateValuation(layout, {0, 5, 0})) == canonical_key(StateValuation(layout, {0, 6, 0})));
}

TEST_CASE("transition lists merge duplicates, sort and validate") {
    auto layout = std::make_shared<const VariableLayout>(std::vector<VariableDecl>{{"s", 0, 3, false}});
    auto st = [&](int v) { return StateValuation(layout, {v}); };
    auto list = make_transition_list({{st(2), 0.25}, {st(1), 0.25}, {st(2), 0.5}});
    REQUIRE(list.items.size() == 2);
    CHECK(list.items[0].target == st(1));
    CHECK(list.items[0].prob == 0.25);
    CHECK(list.items[1].target == st(2));
    CHECK(list.items[1].prob == 0.75);
    CHECK_FALSE(list.deadlock);

    CHECK_THROWS_AS(make_transition_list({}), ModelEvaluationError);
    CHECK_THROWS_AS(make_transition_list({{st(0), 0.5}, {st(1), 0.6}}), ModelEvaluationError);
    CHECK_THROWS_AS(make_transition_list({{st(0), 1.0}, {st(1), 0.0}}), ModelEvaluationError);
}

TEST_CASE("absorbing table state returns a single self-loop") {
    TableSemantics t({{{0, 1.0}}}, {});
    auto next = t.next(t.initial_state());
    REQUIRE(next.items.size() == 1);
    CHECK(next.items[0].target == t.initial_state());
    CHECK(next.items[0].prob == 1.0);
}

TEST_CASE("table semantics labels and inline predicates") {
    auto g = testing::gambler();
    CHECK(g->lab_eval(g->state(0), AtomId::label("phi1")));
    CHECK_FALSE(g->lab_eval(g->state(1), AtomId::label("phi1")));
    CHECK(g->lab_eval(g->state(2), AtomId::inline_predicate({"s", Comparison::ge, 2, false})));
    CHECK_THROWS_AS(g->lab_eval(g->state(0), AtomId::label("nope")), UnknownLabelError);
    CHECK_FALSE(g->has_atom(AtomId::label("nope")));
    CHECK(g->atoms().size() == 2);
}

TEST_CASE("Herman-3 all-active state has eight equally likely successors") {
    auto model = prism::load_model(bench::generate_herman(3));
    auto init = model->initial_state();
    for (const char* v : {"x1", "x2", "x3"}) CHECK(init.value(v) == 0);
    auto next = model->next(init);
    REQUIRE(next.items.size() == 8);
    for (const auto& t : next.items) CHECK(t.prob == doctest::Approx(0.125).epsilon(1e-12));
    CHECK_FALSE(model->lab_eval(init, AtomId::label("stable")));
}

TEST_CASE("Herman-3 single-token state is stable") {
    auto model = prism::load_model(bench::generate_herman(3));
    // x1=1, x2=0, x3=0: only process 3 holds a token (x3 = x2)
    StateValuation s(model->layout(), {1, 0, 0});
    CHECK(model->lab_eval(s, AtomId::label("stable")));
    CHECK_FALSE(model->lab_eval(s, AtomId::label("token1")));
    StateValuation all(model->layout(), {1, 1, 1});
    CHECK_FALSE(model->lab_eval(all, AtomId::label("stable")));
    CHECK(model->lab_eval(all, AtomId::label("token1")));
}

TEST_CASE("label defined as true holds everywhere") {
    auto model = prism::load_model(R"(dtmc
module m
  x : [0..2] init 0;
  [] x<2 -> (x'=x+1);
endmodule
label "always" = true;
)");
    auto d = enumerate(model);
    REQUIRE(d.size() == 3);
    for (const auto& s : d.states) CHECK(model->lab_eval(s, AtomId::label("always")));
}

TEST_CASE("next and lab_eval are pure and normalised on every corpus state") {
    for (const auto& name : testing::corpus_models()) {
        CAPTURE(name);
        auto model = prism::load_model(testing::slurp(testing::corpus_path("models/" + name + ".pm")));
        auto d = enumerate(model);
        const auto labels = model->atoms();
        for (const auto& s : d.states) {
            auto a = model->next(s);
            auto b = model->next(s);
            double total = 0.0;
            REQUIRE(a.items.size() == b.items.size());
            for (std::size_t i = 0; i < a.items.size(); ++i) {
                CHECK(a.items[i].prob > 0.0);
                CHECK(a.items[i].target == b.items[i].target);
                CHECK(a.items[i].prob == b.items[i].prob);
                if (i) CHECK(canonical_key(a.items[i - 1].target) < canonical_key(a.items[i].target));
                total += a.items[i].prob;
            }
            CHECK(std::abs(total - 1.0) <= 1e-9);
            for (const auto& l : labels) CHECK(model->lab_eval(s, l) == model->lab_eval(s, l));
        }
    }
}
