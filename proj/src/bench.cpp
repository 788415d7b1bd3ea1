#include "flycheck/bench.hpp"

#include <chrono>
#include <fstream>
#include <iomanip>
#include <json.hpp>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "flycheck/errors.hpp"
#include "flycheck/oracle.hpp"

namespace flycheck::bench {

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot read '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string format_probability(double p) {
    std::ostringstream os;
    os << std::setprecision(12) << p;
    return os.str();
}

void print_text(const PropertyReport& r, bool stats, std::ostream& out) {
    out << r.property << " : ";
    if (r.verdict) {
        out << (*r.verdict ? "true" : "false");
        if (r.probability) out << " (probability " << format_probability(*r.probability) << ")";
    } else if (r.probability) {
        out << format_probability(*r.probability);
    }
    out << "  [" << std::fixed << std::setprecision(3) << r.ms << std::defaultfloat << " ms, " << r.states
        << " states, " << r.iterations << " iterations]\n";
    if (stats) {
        out << "  records-created " << r.stats.records_created << ", until-evaluations " << r.stats.until_evaluations
            << ", deadlocks-patched " << r.stats.deadlocks_patched << "\n";
    }
}

// P~p [G f] is checked as P~'(1-p) [F !f]; reports should show Pr(G f).
bool bounded_globally(const pctl::PropertyQuery& q) {
    auto raw = pctl::parse_formula_raw(q.source);
    const auto* p = std::get_if<pctl::Prob>(&raw->node);
    return p && p->bound.kind != pctl::BoundKind::query && std::holds_alternative<pctl::Globally>(p->path->node);
}

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
    return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

}  // namespace

void validate(const RunConfig& config) {
    if (!(config.epsilon > 0.0) || config.epsilon >= 1.0) throw std::invalid_argument("epsilon must lie in (0,1)");
    if (config.state_cap == 0) throw std::invalid_argument("state cap must be positive");
    if (config.bound_tolerance < 0.0) throw std::invalid_argument("bound tolerance must be non-negative");
    if (!config.props_path && config.inline_props.empty()) throw std::invalid_argument("no properties given");
}

std::string to_json_line(const PropertyReport& r) {
    nlohmann::ordered_json j;
    j["property"] = r.property;
    j["verdict"] = r.verdict ? nlohmann::ordered_json(*r.verdict) : nlohmann::ordered_json(nullptr);
    j["probability"] = r.probability ? nlohmann::ordered_json(*r.probability) : nlohmann::ordered_json(nullptr);
    j["ms"] = r.ms;
    j["states"] = r.states;
    j["iterations"] = r.iterations;
    return j.dump();
}

RunReport run(const RunConfig& config, std::ostream& out, std::ostream& err) {
    RunReport report;
    std::shared_ptr<const prism::PrismSemantics> model;
    std::vector<pctl::PropertyQuery> props;
    std::string stage;
    try {
        validate(config);
        stage = config.model_path + ":";
        model = prism::load_model(read_file(config.model_path), config.overrides);
        if (config.props_path) {
            stage = *config.props_path + ":";
            props = pctl::parse_property_file(read_file(*config.props_path));
        }
        stage = "property:";
        for (const auto& text : config.inline_props) props.push_back(pctl::parse_property(text));
        stage.clear();
        for (const auto& q : props) {
            for (const auto& a : pctl::collect_atoms(*q.formula)) {
                if (!model->has_atom(a)) throw UnknownLabelError(a.name);
            }
        }
    } catch (const std::exception& e) {
        err << "error: " << stage << e.what() << "\n";
        report.exit_code = 2;
        return report;
    }

    std::optional<ExplicitDtmc> explicit_model;
    EngineOptions options;
    options.epsilon = config.epsilon;
    options.state_cap = config.state_cap;
    options.converge_initial_only = config.converge_initial_only;
    options.bound_tolerance = config.bound_tolerance;

    bool any_false = false;
    bool any_error = false;
    for (const auto& q : props) {
        PropertyReport r;
        r.property = q.source;
        const auto start = Clock::now();
        try {
            pctl::Evaluation ev;
            if (config.engine == EngineKind::onthefly) {
                Engine engine(model, options);
                ev = engine.evaluate(model->initial_state(), q.formula);
                r.stats = engine.read_stats();
                r.states = r.stats.states_expanded;
                r.iterations = r.stats.iterations;
            } else {
                if (!explicit_model) explicit_model = enumerate(model, config.state_cap);
                ev = oracle_evaluate(*explicit_model, 0, q.formula, config.bound_tolerance);
                r.states = explicit_model->size();
                r.stats.states_expanded = r.states;
                r.stats.deadlocks_patched = explicit_model->deadlocks;
            }
            r.probability = ev.probability;
            if (r.probability && bounded_globally(q)) r.probability = 1.0 - *r.probability;
            if (!q.is_query()) {
                r.verdict = ev.verdict;
                if (!ev.verdict) any_false = true;
            }
        } catch (const std::exception& e) {
            r.error = e.what();
            any_error = true;
        }
        r.ms = elapsed_ms(start);
        if (r.error) {
            err << "error: " << (q.line ? "property line " + std::to_string(q.line) + ": " : "") << *r.error << "\n";
        } else if (config.format == OutputFormat::jsonl) {
            out << to_json_line(r) << "\n";
        } else {
            print_text(r, config.stats, out);
        }
        report.properties.push_back(std::move(r));
    }
    report.exit_code = any_error ? 2 : (any_false && config.fail_on_false ? 1 : 0);
    return report;
}

}  // namespace flycheck::bench
