#include <doctest.h>

#include <json.hpp>
#include <sstream>

#include "flycheck/bench.hpp"
#include "flycheck/prism/model.hpp"
#include "support.hpp"

using namespace flycheck;
using namespace flycheck::bench;

namespace {

RunConfig config_for(const std::string& model, std::vector<std::string> props) {
    RunConfig c;
    c.model_path = testing::corpus_path("models/" + model + ".pm");
    c.inline_props = std::move(props);
    return c;
}

RunReport run_quiet(const RunConfig& c, std::string* out_text = nullptr, std::string* err_text = nullptr) {
    std::ostringstream out, err;
    auto r = run(c, out, err);
    if (out_text) *out_text = out.str();
    if (err_text) *err_text = err.str();
    return r;
}

}  // namespace

TEST_CASE("a true property exits 0 and a false one exits 1") {
    auto ok = run_quiet(config_for("herman3", {"P>=1 [ F \"stable\" ]"}));
    CHECK(ok.exit_code == 0);
    REQUIRE(ok.properties.size() == 1);
    CHECK(ok.properties[0].verdict == true);

    auto bad = run_quiet(config_for("herman3", {"P<0.5 [ F \"stable\" ]"}));
    CHECK(bad.exit_code == 1);
    CHECK(bad.properties[0].verdict == false);

    auto lenient = config_for("herman3", {"P<0.5 [ F \"stable\" ]"});
    lenient.fail_on_false = false;
    CHECK(run_quiet(lenient).exit_code == 0);
}

TEST_CASE("errors exit 2 with a diagnostic") {
    std::string err;
    auto missing = run_quiet(config_for("no_such_model", {"P>=1 [ F \"a\" ]"}), nullptr, &err);
    CHECK(missing.exit_code == 2);
    CHECK(err.find("error:") != std::string::npos);

    auto unknown = run_quiet(config_for("herman3", {"P>=1 [ F \"nope\" ]"}), nullptr, &err);
    CHECK(unknown.exit_code == 2);
    CHECK(err.find("nope") != std::string::npos);

    auto syntax = run_quiet(config_for("herman3", {"P>=1 [ F \"stable\" "}));
    CHECK(syntax.exit_code == 2);
}

TEST_CASE("jsonl records carry the required keys") {
    auto c = config_for("herman3", {"P=? [ F<=5 \"stable\" ]", "P>=1 [ F \"stable\" ]"});
    c.format = OutputFormat::jsonl;
    std::string out;
    auto r = run_quiet(c, &out);
    CHECK(r.exit_code == 0);
    std::istringstream lines(out);
    std::string line;
    int n = 0;
    while (std::getline(lines, line)) {
        auto j = nlohmann::json::parse(line);
        for (const char* key : {"property", "verdict", "probability", "ms", "states", "iterations"}) {
            CHECK(j.contains(key));
        }
        if (n == 0) {
            CHECK(j["verdict"].is_null());
            CHECK(j["probability"].get<double>() > 0.0);
        } else {
            CHECK(j["verdict"].get<bool>());
        }
        ++n;
    }
    CHECK(n == 2);
}

TEST_CASE("text output and statistics") {
    auto c = config_for("phil3", {"P=? [ !\"eatother\" U<=20 \"eat1\" ]"});
    c.stats = true;
    std::string out;
    auto r = run_quiet(c, &out);
    CHECK(r.exit_code == 0);
    CHECK(out.find("U<=20 \"eat1\" ] : 0.") != std::string::npos);
    CHECK(out.find("states") != std::string::npos);
    CHECK(out.find("records-created") != std::string::npos);
    CHECK(r.properties[0].states > 0);
}

TEST_CASE("both engines agree on every corpus property") {
    const std::vector<std::pair<std::string, std::string>> suites{
        {"herman3", "herman"}, {"herman5", "herman"}, {"herman7", "herman"}, {"herman9", "herman"}, {"phil3", "phil"}, {"phil4", "phil"}};
    for (const auto& [model, props] : suites) {
        CAPTURE(model);
        auto c = config_for(model, {});
        c.props_path = testing::corpus_path("props/" + props + ".props");
        auto a = run_quiet(c);
        c.engine = EngineKind::global;
        auto b = run_quiet(c);
        CHECK(a.exit_code != 2);
        CHECK(b.exit_code != 2);
        REQUIRE(a.properties.size() == b.properties.size());
        for (std::size_t i = 0; i < a.properties.size(); ++i) {
            const auto& x = a.properties[i];
            const auto& y = b.properties[i];
            CAPTURE(x.property);
            CHECK(x.verdict == y.verdict);
            REQUIRE(x.probability.has_value() == y.probability.has_value());
            if (x.probability) {
                CHECK(*x.probability >= -1e-12);
                CHECK(*x.probability <= 1.0 + 1e-12);
                CHECK(std::abs(*x.probability - *y.probability) <= 1e-6 + 1e-9);
            }
        }
    }
}

TEST_CASE("G queries report the probability of G") {
    auto c = config_for("phil3", {"P=? [ G<=5 \"hungry1\" ]", "P=? [ F<=5 !\"hungry1\" ]"});
    auto r = run_quiet(c);
    REQUIRE(r.properties.size() == 2);
    CHECK(*r.properties[0].probability == doctest::Approx(1.0 - *r.properties[1].probability).epsilon(1e-12));
}

TEST_CASE("configuration validation") {
    RunConfig c = config_for("herman3", {"P>=1 [ F \"stable\" ]"});
    c.epsilon = 0.0;
    CHECK_THROWS_AS(validate(c), std::invalid_argument);
    c = config_for("herman3", {});
    CHECK_THROWS_AS(validate(c), std::invalid_argument);
    c = config_for("herman3", {"P>=1 [ F \"stable\" ]"});
    CHECK_NOTHROW(validate(c));
}

TEST_CASE("Herman generator") {
    const auto text = generate_herman(5);
    CHECK(text.find("module process5 = process1") != std::string::npos);
    CHECK(text.find("label \"stable\"") != std::string::npos);
    auto m = prism::load_model(text);
    CHECK(m->layout()->size() == 5);
    CHECK(enumerate(m).size() == 32);
    CHECK_THROWS_AS(generate_herman(4), std::invalid_argument);
    CHECK_THROWS_AS(generate_herman(1), std::invalid_argument);
    CHECK(testing::slurp(testing::corpus_path("models/herman7.pm")) == generate_herman(7));
}
