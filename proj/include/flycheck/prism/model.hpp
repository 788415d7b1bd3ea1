#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "flycheck/prism/ast.hpp"
#include "flycheck/state.hpp"

namespace flycheck::prism {

enum class ValueType { int_type, double_type, bool_type };

const char* to_string(ValueType t);

/// Result of evaluating an expression. Booleans are stored in `i` as 0/1.
struct Value {
    ValueType type = ValueType::int_type;
    std::int64_t i = 0;
    double d = 0.0;

    static Value of_int(std::int64_t v) { return {ValueType::int_type, v, 0.0}; }
    static Value of_double(double v) { return {ValueType::double_type, 0, v}; }
    static Value of_bool(bool v) { return {ValueType::bool_type, v ? 1 : 0, 0.0}; }

    double as_double() const { return type == ValueType::double_type ? d : static_cast<double>(i); }
    bool operator==(const Value&) const = default;
};

/// Type-checked expression with constants folded and formulas inlined.
/// Identifiers are resolved to indices into the state's value vector.
struct CompiledExpr {
    ExprOp op = ExprOp::int_lit;
    ValueType type = ValueType::int_type;
    Value literal;           // for folded constants
    std::uint32_t var = 0;   // for ExprOp::ident
    std::vector<CompiledExpr> args;

    bool is_constant() const { return op == ExprOp::int_lit || op == ExprOp::double_lit || op == ExprOp::bool_lit; }
    Value eval(std::span<const std::int32_t> state) const;
};

struct CompiledAssignment {
    std::uint32_t var;
    CompiledExpr value;
};

struct CompiledUpdate {
    CompiledExpr probability;
    std::vector<CompiledAssignment> assignments;
};

struct CompiledCommand {
    std::string module;
    std::size_t index = 0;  // position within its module, 0-based
    std::string action;
    SourcePos pos;
    CompiledExpr guard;
    std::vector<CompiledUpdate> updates;

    std::string describe() const;
};

/// Commands of one action label shared by several modules; each entry holds
/// the commands of one participating module.
struct SyncGroup {
    std::string action;
    std::vector<std::vector<CompiledCommand>> modules;
};

struct ElaboratedModel {
    LayoutPtr layout;
    std::vector<std::string> module_names;
    /// Unlabelled commands and commands whose label occurs in a single module.
    std::vector<CompiledCommand> local_commands;
    std::vector<SyncGroup> sync_groups;
    std::map<std::string, CompiledExpr> labels;
    std::map<std::string, Value> constants;
    std::vector<std::int32_t> initial_values;

    StateValuation initial_state() const { return StateValuation(layout, initial_values); }
};

using ConstantOverrides = std::map<std::string, std::string>;

/// Parses `name=value,name=value` as given to `-const`.
ConstantOverrides parse_overrides(std::string_view text);

/// Resolves constants, renamings and formulas and type-checks the model.
/// Throws ModelError.
ElaboratedModel elaborate(const ModelAst& ast, const ConstantOverrides& overrides = {});

/// ModelSemantics for an elaborated model under the uniform DTMC composition rule.
class PrismSemantics final : public ModelSemantics {
public:
    explicit PrismSemantics(ElaboratedModel model);

    const ElaboratedModel& model() const { return model_; }

    const LayoutPtr& layout() const override { return model_.layout; }
    StateValuation initial_state() const override { return model_.initial_state(); }
    TransitionList next(const StateValuation& s) const override;
    bool lab_eval(const StateValuation& s, const AtomId& a) const override;
    bool has_atom(const AtomId& a) const override;
    std::vector<AtomId> atoms() const override;

private:
    ElaboratedModel model_;
};

std::shared_ptr<const PrismSemantics> build_semantics(ElaboratedModel model);

/// parse_model + elaborate + build_semantics.
std::shared_ptr<const PrismSemantics> load_model(std::string_view text, const ConstantOverrides& overrides = {});

}  // namespace flycheck::prism
