#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "flycheck/errors.hpp"

namespace flycheck::prism {

/// Source location attached to AST nodes. Locations never take part in AST
/// equality, so a re-parsed printout compares equal to the original.
struct Loc {
    SourcePos pos;
    bool operator==(const Loc&) const { return true; }
};

enum class ExprOp {
    int_lit,
    double_lit,
    bool_lit,
    ident,
    neg,
    lnot,
    add,
    sub,
    mul,
    div,
    land,
    lor,
    implies,
    eq,
    ne,
    lt,
    le,
    gt,
    ge,
    min,
    max,
};

struct Expr {
    ExprOp op = ExprOp::int_lit;
    std::int64_t int_value = 0;  // int and bool literals
    double double_value = 0.0;
    std::string name;  // identifiers
    std::vector<Expr> args;
    Loc loc;

    static Expr int_literal(std::int64_t v, SourcePos pos = {});
    static Expr double_literal(double v, SourcePos pos = {});
    static Expr bool_literal(bool v, SourcePos pos = {});
    static Expr identifier(std::string name, SourcePos pos = {});
    static Expr apply(ExprOp op, std::vector<Expr> args, SourcePos pos = {});

    bool operator==(const Expr&) const = default;
};

enum class ConstType { int_type, double_type, bool_type };

struct ConstantDecl {
    std::string name;
    ConstType type = ConstType::int_type;
    std::optional<Expr> value;
    Loc loc;
    bool operator==(const ConstantDecl&) const = default;
};

struct VariableAst {
    std::string name;
    bool is_bool = false;
    Expr lower;  // unused for booleans
    Expr upper;
    std::optional<Expr> init;
    Loc loc;
    bool operator==(const VariableAst&) const = default;
};

struct Assignment {
    std::string variable;
    Expr value;
    Loc loc;
    bool operator==(const Assignment&) const = default;
};

/// One probabilistic branch `p : (x'=e) & ...`; no assignments means `true`.
struct UpdateAst {
    Expr probability;
    std::vector<Assignment> assignments;
    bool operator==(const UpdateAst&) const = default;
};

struct CommandAst {
    std::string action;  // empty for unlabelled commands
    Expr guard;
    std::vector<UpdateAst> updates;
    Loc loc;
    bool operator==(const CommandAst&) const = default;
};

/// Either a module body or a renaming `module M2 = M1 [a=b, ...] endmodule`.
struct ModuleAst {
    std::string name;
    std::vector<VariableAst> variables;
    std::vector<CommandAst> commands;
    std::string renames;  // base module; empty for ordinary modules
    std::vector<std::pair<std::string, std::string>> renaming;
    Loc loc;

    bool is_renaming() const { return !renames.empty(); }
    bool operator==(const ModuleAst&) const = default;
};

struct LabelAst {
    std::string name;
    Expr expr;
    Loc loc;
    bool operator==(const LabelAst&) const = default;
};

struct FormulaAst {
    std::string name;
    Expr expr;
    Loc loc;
    bool operator==(const FormulaAst&) const = default;
};

struct ModelAst {
    std::string kind = "dtmc";
    std::vector<ConstantDecl> constants;
    std::vector<ModuleAst> modules;
    std::vector<LabelAst> labels;
    std::vector<FormulaAst> formulas;
    bool operator==(const ModelAst&) const = default;
};

/// Parses the supported PRISM subset. Throws SyntaxError, or ModelError for
/// unsupported constructs and duplicate names.
ModelAst parse_model(std::string_view text);

/// Canonical model text; parse_model(to_string(ast)) == ast.
std::string to_string(const ModelAst& ast);
std::string to_string(const Expr& e);

}  // namespace flycheck::prism
