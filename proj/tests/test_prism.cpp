#include <doctest.h>

#include "flycheck/bench.hpp"
#include "flycheck/errors.hpp"
#include "flycheck/oracle.hpp"
#include "flycheck/prism/model.hpp"
#include "support.hpp"

using namespace flycheck;
using namespace flycheck::prism;

namespace {

ModelErrc error_code(std::string_view text, const ConstantOverrides& overrides = {}) {
    try {
        load_model(text, overrides);
    } catch (const ModelError& e) {
        return e.code();
    }
    FAIL("no model error");
    return ModelErrc::unsupported_construct;
}

double prob_to(const TransitionList& t, const StateValuation& target) {
    for (const auto& item : t.items) {
        if (item.target == target) return item.prob;
    }
    return 0.0;
}

std::vector<std::int32_t> values(const StateValuation& s) { return {s.values().begin(), s.values().end()}; }

// Same transition structure and labels from the initial states, matched by valuation.
void check_isomorphic(const std::shared_ptr<const PrismSemantics>& a, const std::shared_ptr<const PrismSemantics>& b) {
    auto da = enumerate(a);
    auto db = enumerate(b);
    REQUIRE(da.size() == db.size());
    for (std::size_t i = 0; i < da.size(); ++i) {
        const auto s = da.states[i];
        const StateValuation t(b->layout(), values(s));
        auto ta = a->next(s);
        auto tb = b->next(t);
        REQUIRE(ta.items.size() == tb.items.size());
        for (std::size_t j = 0; j < ta.items.size(); ++j) {
            CHECK(values(ta.items[j].target) == values(tb.items[j].target));
            CHECK(ta.items[j].prob == doctest::Approx(tb.items[j].prob).epsilon(1e-15));
        }
        for (const auto& l : a->atoms()) CHECK(a->lab_eval(s, l) == b->lab_eval(t, l));
    }
}

constexpr const char* kMinimal = R"(dtmc
module m
  s : [0..2] init 0;
  [] s=0 -> 0.5:(s'=1) + 0.5:(s'=2);
  [] s>0 -> (s'=s);
endmodule
label "one" = s=1;
)";

}  // namespace

TEST_CASE("minimal model parses into one module with two commands") {
    auto ast = parse_model(kMinimal);
    CHECK(ast.kind == "dtmc");
    REQUIRE(ast.modules.size() == 1);
    CHECK(ast.modules[0].commands.size() == 2);
    CHECK(ast.labels.size() == 1);

    auto m = load_model(kMinimal);
    auto next = m->next(m->initial_state());
    REQUIRE(next.items.size() == 2);
    CHECK(next.items[0].prob == 0.5);
    CHECK(next.items[1].prob == 0.5);
    CHECK(m->lab_eval(next.items[0].target, AtomId::label("one")));
}

TEST_CASE("non-DTMC model types are rejected") {
    CHECK(error_code("mdp\nmodule m\n  s : [0..1] init 0;\n  [] true -> (s'=1);\nendmodule\n") ==
          ModelErrc::unsupported_construct);
    CHECK(error_code("ctmc\nmodule m\n  s : [0..1] init 0;\n  [] true -> (s'=1);\nendmodule\n") ==
          ModelErrc::unsupported_construct);
}

TEST_CASE("Herman-3 consists of one module and two renamings") {
    auto ast = parse_model(bench::generate_herman(3));
    REQUIRE(ast.modules.size() == 3);
    CHECK_FALSE(ast.modules[0].is_renaming());
    CHECK(ast.modules[1].is_renaming());
    CHECK(ast.modules[2].is_renaming());
    CHECK(ast.modules[2].renames == "process1");
    auto m = load_model(bench::generate_herman(3));
    CHECK(m->model().module_names.size() == 3);
    CHECK(m->layout()->size() == 3);
    REQUIRE(m->model().sync_groups.size() == 1);
    CHECK(m->model().sync_groups[0].modules.size() == 3);
}

TEST_CASE("constant update probabilities must sum to one") {
    CHECK(error_code("dtmc\nmodule m\n  s : [0..1] init 0;\n  [] true -> 0.5:(s'=0) + 0.6:(s'=1);\nendmodule\n") ==
          ModelErrc::probability_sum);
    CHECK(error_code("dtmc\nmodule m\n  s : [0..1] init 0;\n  [] true -> -0.5:(s'=0) + 1.5:(s'=1);\nendmodule\n") ==
          ModelErrc::invalid_probability);
}

TEST_CASE("constant overrides feed update probabilities") {
    const char* text = R"(dtmc
const double p;
module m
  s : [0..1] init 0;
  [] s=0 -> p:(s'=1) + (1-p):(s'=0);
  [] s=1 -> true;
endmodule
)";
    auto m = load_model(text, parse_overrides("p=0.3"));
    auto next = m->next(m->initial_state());
    REQUIRE(next.items.size() == 2);
    CHECK(prob_to(next, StateValuation(m->layout(), {1})) == doctest::Approx(0.3));
    CHECK(prob_to(next, StateValuation(m->layout(), {0})) == doctest::Approx(0.7));

    CHECK(error_code(text) == ModelErrc::unresolved_constant);
    CHECK(error_code(text, {{"q", "1"}}) == ModelErrc::bad_override);
    CHECK(error_code(text, {{"p", "abc"}}) == ModelErrc::bad_override);
}

TEST_CASE("override parsing") {
    auto o = parse_overrides("a=1,b=0.5, c = true");
    CHECK(o.size() == 3);
    CHECK(o["a"] == "1");
    CHECK(o["b"] == "0.5");
    CHECK(o["c"] == "true");
}

TEST_CASE("enabled commands are chosen uniformly") {
    const char* text = R"(dtmc
module m
  s : [0..2] init 0;
  [] s=0 -> (s'=1);
  [] s<2 -> (s'=2);
endmodule
)";
    auto m = load_model(text);
    auto next = m->next(m->initial_state());
    REQUIRE(next.items.size() == 2);
    CHECK(next.items[0].prob == 0.5);
    CHECK(next.items[1].prob == 0.5);
}

TEST_CASE("a state without enabled commands becomes a flagged self-loop") {
    auto m = load_model("dtmc\nmodule m\n  s : [0..1] init 0;\n  [] s=0 -> (s'=1);\nendmodule\n");
    const StateValuation end(m->layout(), {1});
    auto next = m->next(end);
    CHECK(next.deadlock);
    REQUIRE(next.items.size() == 1);
    CHECK(next.items[0].target == end);
    CHECK(next.items[0].prob == 1.0);
    CHECK_FALSE(m->next(m->initial_state()).deadlock);
}

TEST_CASE("synchronised commands multiply their distributions") {
    const char* text = R"(dtmc
module a
  x : [0..1] init 0;
  [go] x=0 -> 0.5:(x'=1) + 0.5:(x'=0);
endmodule
module b
  y : [0..1] init 0;
  [go] y=0 -> 0.25:(y'=1) + 0.75:(y'=0);
  [] y=0 -> (y'=1);
endmodule
)";
    auto m = load_model(text);
    auto next = m->next(m->initial_state());
    // two instances, each weighted 1/2
    CHECK(prob_to(next, StateValuation(m->layout(), {1, 1})) == doctest::Approx(0.5 * 0.5 * 0.25));
    CHECK(prob_to(next, StateValuation(m->layout(), {0, 1})) == doctest::Approx(0.5 * 0.5 * 0.25 + 0.5));
    CHECK(prob_to(next, StateValuation(m->layout(), {0, 0})) == doctest::Approx(0.5 * 0.5 * 0.75));
}

TEST_CASE("renaming matches the hand-written module") {
    const char* renamed = R"(dtmc
module p1
  a : [0..3] init 0;
  [t] a<3 -> 0.5:(a'=a+1) + 0.5:(a'=0);
endmodule
module p2 = p1 [a=b, t=t] endmodule
label "top" = a=3 | b=3;
)";
    const char* manual = R"(dtmc
module p1
  a : [0..3] init 0;
  [t] a<3 -> 0.5:(a'=a+1) + 0.5:(a'=0);
endmodule
module p2
  b : [0..3] init 0;
  [t] b<3 -> 0.5:(b'=b+1) + 0.5:(b'=0);
endmodule
label "top" = a=3 | b=3;
)";
    check_isomorphic(load_model(renamed), load_model(manual));
}

TEST_CASE("declaration order does not change the semantics") {
    const char* first = R"(dtmc
const int N = 2;
formula full = x=N;
module m
  x : [0..N] init 0;
  y : bool init false;
  [] !full -> 0.5:(x'=x+1) + 0.5:(y'=!y);
  [] full -> (x'=0);
endmodule
label "full" = full;
)";
    const char* second = R"(dtmc
label "full" = full;
module m
  y : bool init false;
  x : [0..N] init 0;
  [] full -> (x'=0);
  [] !full -> 0.5:(y'=!y) + 0.5:(x'=x+1);
endmodule
formula full = x=N;
const int N = 2;
)";
    check_isomorphic(load_model(first), load_model(second));
}

TEST_CASE("doubles are rejected outside probabilities") {
    CHECK(error_code("dtmc\nconst double h = 0.5;\nmodule m\n  s : [0..1] init 0;\n  [] s<h -> (s'=1);\nendmodule\n") ==
          ModelErrc::type_mismatch);
    CHECK(error_code("dtmc\nmodule m\n  s : [0..1] init 0;\n  [] s+1 -> (s'=1);\nendmodule\n") ==
          ModelErrc::type_mismatch);
}

TEST_CASE("static model errors") {
    CHECK(error_code("dtmc\nmodule m\n  s : [0..1] init 2;\n  [] true -> true;\nendmodule\n") ==
          ModelErrc::init_out_of_bounds);
    CHECK(error_code("dtmc\nmodule m\n  s : [2..1] init 2;\n  [] true -> true;\nendmodule\n") ==
          ModelErrc::invalid_bounds);
    CHECK(error_code("dtmc\nmodule m\n  s : [0..1] init 0;\n  [] t=0 -> true;\nendmodule\n") ==
          ModelErrc::undefined_identifier);
    CHECK(error_code("dtmc\nmodule m\n  s : [0..1] init 0;\nendmodule\nmodule n\n  s : [0..1] init 0;\nendmodule\n") ==
          ModelErrc::duplicate_name);
    CHECK(error_code("dtmc\nconst int a = b;\nconst int b = a;\nmodule m\n  s : [0..1] init 0;\nendmodule\n") ==
          ModelErrc::cyclic_definition);
    CHECK(error_code("dtmc\nmodule m\n  s : [0..1] init 0;\nendmodule\nmodule n\n  t : [0..1] init 0;\n  [] true -> "
                     "(s'=1);\nendmodule\n") == ModelErrc::unsupported_construct);
}

TEST_CASE("syntax errors report the position") {
    try {
        parse_model("dtmc\nmodule m\n  s : [0..1] init 0;\n  [] s=0 -> (s'=1)\nendmodule\n");
        FAIL("expected a syntax error");
    } catch (const SyntaxError& e) {
        CHECK(e.pos().line == 5);
        CHECK(e.pos().column == 1);
    }
}

TEST_CASE("out-of-range update names the command") {
    auto m = load_model("dtmc\nmodule m\n  s : [0..1] init 1;\n  [] true -> (s'=s+1);\nendmodule\n");
    try {
        m->next(m->initial_state());
        FAIL("expected an evaluation error");
    } catch (const ModelEvaluationError& e) {
        CHECK(std::string(e.what()).find("command 1 of module 'm'") != std::string::npos);
    }
}

TEST_CASE("model printer round-trips the corpus") {
    for (const auto& name : testing::corpus_models()) {
        CAPTURE(name);
        auto ast = parse_model(testing::slurp(testing::corpus_path("models/" + name + ".pm")));
        auto again = parse_model(to_string(ast));
        CHECK(to_string(again) == to_string(ast));
        CHECK(again == ast);
    }
}

TEST_CASE("labels live in their own namespace") {
    auto m = load_model("dtmc\nformula f = s=1;\nmodule m\n  s : [0..1] init 0;\n  [] true -> (s'=1);\nendmodule\n"
                        "label \"s\" = s=1;\nlabel \"f\" = f;\n");
    CHECK_FALSE(m->lab_eval(m->initial_state(), AtomId::label("s")));
    CHECK(m->lab_eval(StateValuation(m->layout(), {1}), AtomId::label("f")));
    CHECK(error_code("dtmc\nmodule m\n  s : [0..1] init 0;\nendmodule\nlabel \"a\" = true;\nlabel \"a\" = false;\n") ==
          ModelErrc::duplicate_name);
}
