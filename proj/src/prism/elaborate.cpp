#include <cctype>
#include <charconv>
#include <cmath>
#include <limits>
#include <set>
#include <system_error>

#include "flycheck/prism/model.hpp"

namespace flycheck::prism {

namespace {

std::string at(SourcePos pos) { return " at " + std::to_string(pos.line) + ":" + std::to_string(pos.column); }

[[noreturn]] void raise(ModelErrc code, const std::string& msg) { throw ModelError(code, msg); }

bool is_numeric(ValueType t) { return t != ValueType::bool_type; }

/// What an expression is allowed to contain where it is compiled.
struct Context {
    const char* role;       // for messages: "guard", "label", ...
    bool allow_variables;   // false for constants, bounds, initial values
    bool allow_double;      // only probabilities may be double-valued
    std::string module;     // non-empty inside module bodies
};

struct FlatModule {
    std::string name;
    std::vector<VariableAst> variables;
    std::vector<CommandAst> commands;
};

std::string renamed(const std::map<std::string, std::string>& map, const std::string& name) {
    auto it = map.find(name);
    return it == map.end() ? name : it->second;
}

Expr rename_expr(const Expr& e, const std::map<std::string, std::string>& map) {
    Expr out = e;
    if (out.op == ExprOp::ident) out.name = renamed(map, out.name);
    for (auto& a : out.args) a = rename_expr(a, map);
    return out;
}

class Elaborator {
public:
    Elaborator(const ModelAst& ast, const ConstantOverrides& overrides) : ast_(ast), overrides_(overrides) {}

    ElaboratedModel run() {
        if (ast_.kind != "dtmc") raise(ModelErrc::unsupported_construct, "model type '" + ast_.kind + "'");
        index_declarations();
        resolve_constants();
        flatten_modules();
        declare_variables();
        compile_commands();
        compile_labels();
        for (const auto& [name, value] : constant_values_) model_.constants[name] = value;
        return std::move(model_);
    }

private:
    // -- declarations and constants ----------------------------------------

    void index_declarations() {
        for (const auto& c : ast_.constants) {
            if (!constant_decls_.emplace(c.name, &c).second) {
                raise(ModelErrc::duplicate_name, "constant '" + c.name + "'" + at(c.loc.pos));
            }
        }
        for (const auto& f : ast_.formulas) {
            if (constant_decls_.contains(f.name) || !formula_decls_.emplace(f.name, &f).second) {
                raise(ModelErrc::duplicate_name, "formula '" + f.name + "'" + at(f.loc.pos));
            }
        }
        for (const auto& [name, text] : overrides_) {
            if (!constant_decls_.contains(name)) {
                raise(ModelErrc::bad_override, "model declares no constant '" + name + "'");
            }
        }
    }

    static Value parse_literal(const std::string& name, ConstType type, const std::string& text) {
        const char* first = text.data();
        const char* last = text.data() + text.size();
        switch (type) {
            case ConstType::bool_type:
                if (text == "true") return Value::of_bool(true);
                if (text == "false") return Value::of_bool(false);
                break;
            case ConstType::int_type: {
                std::int64_t v = 0;
                auto res = std::from_chars(first, last, v);
                if (res.ec == std::errc{} && res.ptr == last) return Value::of_int(v);
                break;
            }
            case ConstType::double_type: {
                double v = 0;
                auto res = std::from_chars(first, last, v);
                if (res.ec == std::errc{} && res.ptr == last) return Value::of_double(v);
                break;
            }
        }
        raise(ModelErrc::bad_override, "value '" + text + "' is not a valid literal for constant '" + name + "'");
    }

    void resolve_constants() {
        for (const auto& c : ast_.constants) constant_value(c.name, c.loc.pos);
    }

    Value constant_value(const std::string& name, SourcePos use) {
        if (auto it = constant_values_.find(name); it != constant_values_.end()) return it->second;
        const ConstantDecl& decl = *constant_decls_.at(name);
        Value v;
        if (auto ov = overrides_.find(name); ov != overrides_.end()) {
            v = parse_literal(name, decl.type, ov->second);
        } else if (decl.value) {
            if (!constants_in_progress_.insert(name).second) {
                raise(ModelErrc::cyclic_definition, "constant '" + name + "' depends on itself" + at(use));
            }
            auto e = compile(*decl.value, Context{"constant definition", false, true, {}});
            constants_in_progress_.erase(name);
            if (!e.is_constant()) raise(ModelErrc::type_mismatch, "constant '" + name + "' is not constant");
            v = coerce(e.literal, decl.type, name, decl.loc.pos);
        } else {
            raise(ModelErrc::unresolved_constant,
                  "constant '" + name + "'" + at(decl.loc.pos) + " has no value (use -const " + name + "=...)");
        }
        constant_values_.emplace(name, v);
        return v;
    }

    static Value coerce(const Value& v, ConstType type, const std::string& name, SourcePos pos) {
        switch (type) {
            case ConstType::bool_type:
                if (v.type == ValueType::bool_type) return v;
                break;
            case ConstType::int_type:
                if (v.type == ValueType::int_type) return v;
                break;
            case ConstType::double_type:
                if (is_numeric(v.type)) return Value::of_double(v.as_double());
                break;
        }
        raise(ModelErrc::type_mismatch, "value of constant '" + name + "'" + at(pos) + " has type " +
                                            to_string(v.type));
    }

    // -- modules and variables ---------------------------------------------

    void flatten_modules() {
        std::map<std::string, const ModuleAst*> bases;
        for (const auto& m : ast_.modules) {
            if (!m.is_renaming()) bases.emplace(m.name, &m);
        }
        for (const auto& m : ast_.modules) {
            if (!m.is_renaming()) {
                modules_.push_back({m.name, m.variables, m.commands});
                continue;
            }
            auto base = bases.find(m.renames);
            if (base == bases.end()) {
                raise(ModelErrc::undefined_identifier,
                      "module '" + m.name + "' renames unknown module '" + m.renames + "'" + at(m.loc.pos));
            }
            std::map<std::string, std::string> map;
            for (const auto& [from, to] : m.renaming) {
                if (!map.emplace(from, to).second) {
                    raise(ModelErrc::duplicate_name, "'" + from + "' renamed twice in module '" + m.name + "'");
                }
            }
            FlatModule flat{m.name, {}, {}};
            for (auto v : base->second->variables) {
                v.name = renamed(map, v.name);
                v.lower = rename_expr(v.lower, map);
                v.upper = rename_expr(v.upper, map);
                if (v.init) v.init = rename_expr(*v.init, map);
                flat.variables.push_back(std::move(v));
            }
            for (auto c : base->second->commands) {
                if (!c.action.empty()) c.action = renamed(map, c.action);
                c.guard = rename_expr(c.guard, map);
                for (auto& u : c.updates) {
                    u.probability = rename_expr(u.probability, map);
                    for (auto& a : u.assignments) {
                        a.variable = renamed(map, a.variable);
                        a.value = rename_expr(a.value, map);
                    }
                }
                flat.commands.push_back(std::move(c));
            }
            modules_.push_back(std::move(flat));
        }
    }

    void declare_variables() {
        std::vector<VariableDecl> decls;
        std::map<std::string, std::int64_t> init;
        for (const auto& m : modules_) {
            model_.module_names.push_back(m.name);
            for (const auto& v : m.variables) {
                if (constant_decls_.contains(v.name) || formula_decls_.contains(v.name) || owner_.contains(v.name)) {
                    raise(ModelErrc::duplicate_name, "variable '" + v.name + "' in module '" + m.name + "'" +
                                                         at(v.loc.pos) + " is already declared");
                }
                owner_.emplace(v.name, m.name);
                VariableDecl d{v.name, 0, 1, v.is_bool};
                Context ctx{"variable bound", false, false, {}};
                if (!v.is_bool) {
                    d.lower = bound_value(v.lower, ctx, v.name);
                    d.upper = bound_value(v.upper, ctx, v.name);
                    if (d.lower > d.upper) {
                        raise(ModelErrc::invalid_bounds, "variable '" + v.name + "'" + at(v.loc.pos) + " has range [" +
                                                             std::to_string(d.lower) + ".." + std::to_string(d.upper) +
                                                             "]");
                    }
                }
                std::int64_t initial = d.lower;
                if (v.init) {
                    auto e = compile(*v.init, Context{"initial value", false, false, {}});
                    const auto want = v.is_bool ? ValueType::bool_type : ValueType::int_type;
                    if (!e.is_constant() || e.type != want) {
                        raise(ModelErrc::type_mismatch, "initial value of '" + v.name + "'" + at(v.loc.pos) +
                                                            " must be a constant " + to_string(want));
                    }
                    initial = e.literal.i;
                }
                if (initial < d.lower || initial > d.upper) {
                    raise(ModelErrc::init_out_of_bounds, "initial value " + std::to_string(initial) + " of '" +
                                                             v.name + "'" + at(v.loc.pos) + " outside [" +
                                                             std::to_string(d.lower) + ".." + std::to_string(d.upper) +
                                                             "]");
                }
                init.emplace(v.name, initial);
                decls.push_back(std::move(d));
            }
        }
        model_.layout = std::make_shared<const VariableLayout>(std::move(decls));
        for (std::size_t i = 0; i < model_.layout->size(); ++i) {
            const auto& d = (*model_.layout)[i];
            var_index_.emplace(d.name, static_cast<std::uint32_t>(i));
            model_.initial_values.push_back(static_cast<std::int32_t>(init.at(d.name)));
        }
    }

    std::int32_t bound_value(const Expr& e, const Context& ctx, const std::string& var) {
        auto c = compile(e, ctx);
        if (!c.is_constant() || c.type != ValueType::int_type) {
            raise(ModelErrc::type_mismatch, "bound of variable '" + var + "'" + at(e.loc.pos) +
                                                " must be a constant int");
        }
        if (c.literal.i < std::numeric_limits<std::int32_t>::min() ||
            c.literal.i > std::numeric_limits<std::int32_t>::max()) {
            raise(ModelErrc::invalid_bounds, "bound of variable '" + var + "' does not fit in 32 bits");
        }
        return static_cast<std::int32_t>(c.literal.i);
    }

    // -- commands -----------------------------------------------------------

    void compile_commands() {
        std::map<std::string, std::set<std::string>> action_modules;
        for (const auto& m : modules_) {
            for (const auto& c : m.commands) {
                if (!c.action.empty()) action_modules[c.action].insert(m.name);
            }
        }
        std::map<std::string, SyncGroup> groups;
        for (const auto& [action, mods] : action_modules) {
            if (mods.size() > 1) groups[action].action = action;
        }

        for (const auto& m : modules_) {
            std::map<std::string, std::vector<CompiledCommand>> synced;
            for (std::size_t i = 0; i < m.commands.size(); ++i) {
                auto cmd = compile_command(m, i);
                if (groups.contains(cmd.action)) {
                    synced[cmd.action].push_back(std::move(cmd));
                } else {
                    model_.local_commands.push_back(std::move(cmd));
                }
            }
            for (auto& [action, cmds] : synced) groups[action].modules.push_back(std::move(cmds));
        }
        for (auto& [action, group] : groups) model_.sync_groups.push_back(std::move(group));
    }

    CompiledCommand compile_command(const FlatModule& m, std::size_t index) {
        const CommandAst& c = m.commands[index];
        CompiledCommand out;
        out.module = m.name;
        out.index = index;
        out.action = c.action;
        out.pos = c.loc.pos;
        const std::string where = out.describe();

        out.guard = compile(c.guard, Context{"guard", true, false, m.name});
        if (out.guard.type != ValueType::bool_type) {
            raise(ModelErrc::type_mismatch, "guard of " + where + " has type " + to_string(out.guard.type));
        }

        bool all_constant = true;
        double total = 0.0;
        for (const auto& u : c.updates) {
            CompiledUpdate cu;
            cu.probability = compile(u.probability, Context{"update probability", true, true, m.name});
            if (!is_numeric(cu.probability.type)) {
                raise(ModelErrc::type_mismatch, "update probability of " + where + " is not numeric");
            }
            if (cu.probability.is_constant()) {
                const double p = cu.probability.literal.as_double();
                if (!(p > 0.0 && p <= 1.0)) {
                    raise(ModelErrc::invalid_probability,
                          "update probability " + std::to_string(p) + " of " + where + " outside (0,1]");
                }
                total += p;
            } else {
                all_constant = false;
            }
            std::set<std::uint32_t> assigned;
            for (const auto& a : u.assignments) {
                auto vi = var_index_.find(a.variable);
                if (vi == var_index_.end()) {
                    raise(ModelErrc::undefined_identifier,
                          "assignment to unknown variable '" + a.variable + "' in " + where);
                }
                if (owner_.at(a.variable) != m.name) {
                    raise(ModelErrc::unsupported_construct, where + " assigns variable '" + a.variable +
                                                                "' of module '" + owner_.at(a.variable) + "'");
                }
                if (!assigned.insert(vi->second).second) {
                    raise(ModelErrc::duplicate_name, "variable '" + a.variable + "' assigned twice in " + where);
                }
                CompiledAssignment ca{vi->second, compile(a.value, Context{"assignment", true, false, m.name})};
                const auto want = (*model_.layout)[vi->second].is_bool ? ValueType::bool_type : ValueType::int_type;
                if (ca.value.type != want) {
                    raise(ModelErrc::type_mismatch, "assignment to '" + a.variable + "' in " + where + " has type " +
                                                        to_string(ca.value.type) + ", expected " + to_string(want));
                }
                cu.assignments.push_back(std::move(ca));
            }
            out.updates.push_back(std::move(cu));
        }
        if (all_constant && std::abs(total - 1.0) > kDistributionTolerance) {
            raise(ModelErrc::probability_sum,
                  "update probabilities of " + where + " sum to " + std::to_string(total) + ", expected 1");
        }
        return out;
    }

    void compile_labels() {
        for (const auto& l : ast_.labels) {
            auto e = compile(l.expr, Context{"label", true, false, {}});
            if (e.type != ValueType::bool_type) {
                raise(ModelErrc::type_mismatch, "label \"" + l.name + "\"" + at(l.loc.pos) + " is not boolean");
            }
            model_.labels.emplace(l.name, std::move(e));
        }
    }

    // -- expressions --------------------------------------------------------

    CompiledExpr compile(const Expr& e, const Context& ctx) {
        CompiledExpr out = compile_node(e, ctx);
        if (!ctx.allow_double && out.type == ValueType::double_type) {
            raise(ModelErrc::type_mismatch,
                  std::string("double-valued expression '") + to_string(e) + "' not allowed in " + ctx.role + at(e.loc.pos));
        }
        return out;
    }

    CompiledExpr literal(Value v) {
        CompiledExpr out;
        out.type = v.type;
        out.literal = v;
        out.op = v.type == ValueType::bool_type     ? ExprOp::bool_lit
                 : v.type == ValueType::double_type ? ExprOp::double_lit
                                                    : ExprOp::int_lit;
        return out;
    }

    CompiledExpr compile_node(const Expr& e, const Context& ctx) {
        switch (e.op) {
            case ExprOp::int_lit: return literal(Value::of_int(e.int_value));
            case ExprOp::double_lit: return literal(Value::of_double(e.double_value));
            case ExprOp::bool_lit: return literal(Value::of_bool(e.int_value != 0));
            case ExprOp::ident: return compile_ident(e, ctx);
            default: break;
        }

        CompiledExpr out;
        out.op = e.op;
        for (const auto& a : e.args) out.args.push_back(compile(a, ctx));
        auto mismatch = [&](const char* need) {
            raise(ModelErrc::type_mismatch, std::string("operands of '") + to_string(e) + "'" + at(e.loc.pos) +
                                                " must be " + need);
        };
        auto all = [&](auto pred) {
            for (const auto& a : out.args) {
                if (!pred(a.type)) return false;
            }
            return true;
        };
        auto numeric_result = [&] {
            return all([](ValueType t) { return t == ValueType::int_type; }) ? ValueType::int_type
                                                                             : ValueType::double_type;
        };

        switch (e.op) {
            case ExprOp::neg:
                if (!is_numeric(out.args[0].type)) mismatch("numeric");
                out.type = out.args[0].type;
                break;
            case ExprOp::lnot:
            case ExprOp::land:
            case ExprOp::lor:
            case ExprOp::implies:
                if (!all([](ValueType t) { return t == ValueType::bool_type; })) mismatch("boolean");
                out.type = ValueType::bool_type;
                break;
            case ExprOp::add:
            case ExprOp::sub:
            case ExprOp::mul:
            case ExprOp::min:
            case ExprOp::max:
                if (!all(is_numeric)) mismatch("numeric");
                out.type = numeric_result();
                break;
            case ExprOp::div:
                if (!all(is_numeric)) mismatch("numeric");
                out.type = ValueType::double_type;
                break;
            case ExprOp::eq:
            case ExprOp::ne: {
                const bool bools = all([](ValueType t) { return t == ValueType::bool_type; });
                if (!bools && !all(is_numeric)) mismatch("both numeric or both boolean");
                out.type = ValueType::bool_type;
                break;
            }
            case ExprOp::lt:
            case ExprOp::le:
            case ExprOp::gt:
            case ExprOp::ge:
                if (!all(is_numeric)) mismatch("numeric");
                out.type = ValueType::bool_type;
                break;
            default: break;
        }

        if (all_constant(out)) return literal(out.eval({}));
        return out;
    }

    static bool all_constant(const CompiledExpr& e) {
        for (const auto& a : e.args) {
            if (!a.is_constant()) return false;
        }
        return true;
    }

    CompiledExpr compile_ident(const Expr& e, const Context& ctx) {
        const std::string& name = e.name;
        if (auto vi = var_index_.find(name); vi != var_index_.end()) {
            if (!ctx.allow_variables) {
                raise(ModelErrc::type_mismatch,
                      "variable '" + name + "' used in " + ctx.role + at(e.loc.pos) + " (constant expected)");
            }
            CompiledExpr out;
            out.op = ExprOp::ident;
            out.var = vi->second;
            out.type = (*model_.layout)[vi->second].is_bool ? ValueType::bool_type : ValueType::int_type;
            return out;
        }
        if (constant_decls_.contains(name)) return literal(constant_value(name, e.loc.pos));
        if (auto f = formula_decls_.find(name); f != formula_decls_.end()) {
            if (!formulas_in_progress_.insert(name).second) {
                raise(ModelErrc::cyclic_definition, "formula '" + name + "' depends on itself" + at(e.loc.pos));
            }
            auto out = compile(f->second->expr, ctx);
            formulas_in_progress_.erase(name);
            return out;
        }
        if (!ctx.allow_variables && owner_.empty() && is_declared_variable(name)) {
            raise(ModelErrc::type_mismatch,
                  "variable '" + name + "' used in " + ctx.role + at(e.loc.pos) + " (constant expected)");
        }
        raise(ModelErrc::undefined_identifier, "unknown identifier '" + name + "'" + at(e.loc.pos));
    }

    bool is_declared_variable(const std::string& name) const {
        for (const auto& m : modules_) {
            for (const auto& v : m.variables) {
                if (v.name == name) return true;
            }
        }
        return false;
    }

    const ModelAst& ast_;
    const ConstantOverrides& overrides_;
    ElaboratedModel model_;

    std::map<std::string, const ConstantDecl*> constant_decls_;
    std::map<std::string, Value> constant_values_;
    std::set<std::string> constants_in_progress_;
    std::map<std::string, const FormulaAst*> formula_decls_;
    std::set<std::string> formulas_in_progress_;

    std::vector<FlatModule> modules_;
    std::map<std::string, std::string> owner_;  // variable -> module
    std::map<std::string, std::uint32_t> var_index_;
};

}  // namespace

std::string CompiledCommand::describe() const {
    std::string s = "command " + std::to_string(index + 1) + " of module '" + module + "'";
    if (!action.empty()) s += " [" + action + "]";
    return s + " (line " + std::to_string(pos.line) + ")";
}

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

}  // namespace

ConstantOverrides parse_overrides(std::string_view text) {
    ConstantOverrides out;
    std::size_t start = 0;
    while (start < text.size()) {
        std::size_t end = text.find(',', start);
        if (end == std::string_view::npos) end = text.size();
        std::string_view item = text.substr(start, end - start);
        auto eq = item.find('=');
        const auto name = eq == std::string_view::npos ? item : trim(item.substr(0, eq));
        const auto value = eq == std::string_view::npos ? std::string_view{} : trim(item.substr(eq + 1));
        if (name.empty() || value.empty()) {
            throw ModelError(ModelErrc::bad_override, "expected name=value, got '" + std::string(item) + "'");
        }
        out[std::string(name)] = std::string(value);
        start = end + 1;
    }
    return out;
}

ElaboratedModel elaborate(const ModelAst& ast, const ConstantOverrides& overrides) {
    return Elaborator(ast, overrides).run();
}

}  // namespace flycheck::prism
