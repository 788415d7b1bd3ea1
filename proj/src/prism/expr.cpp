#include <algorithm>
#include <charconv>
#include <sstream>

#include "flycheck/prism/ast.hpp"
#include "flycheck/prism/model.hpp"

namespace flycheck::prism {

Expr Expr::int_literal(std::int64_t v, SourcePos pos) {
    Expr e;
    e.op = ExprOp::int_lit;
    e.int_value = v;
    e.loc.pos = pos;
    return e;
}

Expr Expr::double_literal(double v, SourcePos pos) {
    Expr e;
    e.op = ExprOp::double_lit;
    e.double_value = v;
    e.loc.pos = pos;
    return e;
}

Expr Expr::bool_literal(bool v, SourcePos pos) {
    Expr e;
    e.op = ExprOp::bool_lit;
    e.int_value = v ? 1 : 0;
    e.loc.pos = pos;
    return e;
}

Expr Expr::identifier(std::string name, SourcePos pos) {
    Expr e;
    e.op = ExprOp::ident;
    e.name = std::move(name);
    e.loc.pos = pos;
    return e;
}

Expr Expr::apply(ExprOp op, std::vector<Expr> args, SourcePos pos) {
    Expr e;
    e.op = op;
    e.args = std::move(args);
    e.loc.pos = pos;
    return e;
}

const char* to_string(ValueType t) {
    switch (t) {
        case ValueType::int_type: return "int";
        case ValueType::double_type: return "double";
        case ValueType::bool_type: return "bool";
    }
    return "?";
}

// ---------------------------------------------------------------------------
// Printing

namespace {

const char* infix(ExprOp op) {
    switch (op) {
        case ExprOp::add: return " + ";
        case ExprOp::sub: return " - ";
        case ExprOp::mul: return " * ";
        case ExprOp::div: return " / ";
        case ExprOp::land: return " & ";
        case ExprOp::lor: return " | ";
        case ExprOp::implies: return " => ";
        case ExprOp::eq: return "=";
        case ExprOp::ne: return "!=";
        case ExprOp::lt: return "<";
        case ExprOp::le: return "<=";
        case ExprOp::gt: return ">";
        case ExprOp::ge: return ">=";
        default: return nullptr;
    }
}

bool is_atomic(const Expr& e) {
    switch (e.op) {
        case ExprOp::int_lit:
        case ExprOp::double_lit:
        case ExprOp::bool_lit:
        case ExprOp::ident:
        case ExprOp::min:
        case ExprOp::max: return true;
        default: return false;
    }
}

std::string operand(const Expr& e) { return is_atomic(e) ? to_string(e) : "(" + to_string(e) + ")"; }

std::string format_real(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    std::string s(buf, res.ptr);
    if (s.find_first_of(".en") == std::string::npos) s += ".0";
    return s;
}

const char* const_type(ConstType t) {
    switch (t) {
        case ConstType::int_type: return "int";
        case ConstType::double_type: return "double";
        case ConstType::bool_type: return "bool";
    }
    return "int";
}

}  // namespace

std::string to_string(const Expr& e) {
    switch (e.op) {
        case ExprOp::int_lit: return std::to_string(e.int_value);
        case ExprOp::double_lit: return format_real(e.double_value);
        case ExprOp::bool_lit: return e.int_value ? "true" : "false";
        case ExprOp::ident: return e.name;
        case ExprOp::neg: return "-" + operand(e.args[0]);
        case ExprOp::lnot: return "!" + operand(e.args[0]);
        case ExprOp::min:
        case ExprOp::max: {
            std::string s = e.op == ExprOp::min ? "min(" : "max(";
            for (std::size_t i = 0; i < e.args.size(); ++i) {
                if (i) s += ", ";
                s += to_string(e.args[i]);
            }
            return s + ")";
        }
        default: return operand(e.args[0]) + infix(e.op) + operand(e.args[1]);
    }
}

std::string to_string(const ModelAst& ast) {
    std::ostringstream os;
    os << ast.kind << "\n";
    if (!ast.constants.empty()) os << "\n";
    for (const auto& c : ast.constants) {
        os << "const " << const_type(c.type) << " " << c.name;
        if (c.value) os << " = " << to_string(*c.value);
        os << ";\n";
    }
    if (!ast.formulas.empty()) os << "\n";
    for (const auto& f : ast.formulas) os << "formula " << f.name << " = " << to_string(f.expr) << ";\n";
    for (const auto& m : ast.modules) {
        os << "\nmodule " << m.name;
        if (m.is_renaming()) {
            os << " = " << m.renames << " [";
            for (std::size_t i = 0; i < m.renaming.size(); ++i) {
                if (i) os << ", ";
                os << m.renaming[i].first << "=" << m.renaming[i].second;
            }
            os << "] endmodule\n";
            continue;
        }
        os << "\n";
        for (const auto& v : m.variables) {
            os << "  " << v.name << " : ";
            if (v.is_bool) {
                os << "bool";
            } else {
                os << "[" << to_string(v.lower) << ".." << to_string(v.upper) << "]";
            }
            if (v.init) os << " init " << to_string(*v.init);
            os << ";\n";
        }
        if (!m.variables.empty() && !m.commands.empty()) os << "\n";
        for (const auto& c : m.commands) {
            os << "  [" << c.action << "] " << to_string(c.guard) << " -> ";
            for (std::size_t u = 0; u < c.updates.size(); ++u) {
                const auto& up = c.updates[u];
                if (u) os << " + ";
                os << operand(up.probability) << ":";
                if (up.assignments.empty()) os << "true";
                for (std::size_t a = 0; a < up.assignments.size(); ++a) {
                    if (a) os << "&";
                    os << "(" << up.assignments[a].variable << "'=" << to_string(up.assignments[a].value) << ")";
                }
            }
            os << ";\n";
        }
        os << "endmodule\n";
    }
    if (!ast.labels.empty()) os << "\n";
    for (const auto& l : ast.labels) os << "label \"" << l.name << "\" = " << to_string(l.expr) << ";\n";
    return os.str();
}

// ---------------------------------------------------------------------------
// Evaluation

namespace {

bool numeric_equal(const Value& a, const Value& b) {
    if (a.type == ValueType::double_type || b.type == ValueType::double_type) return a.as_double() == b.as_double();
    return a.i == b.i;
}

int numeric_order(const Value& a, const Value& b) {
    if (a.type == ValueType::double_type || b.type == ValueType::double_type) {
        const double x = a.as_double(), y = b.as_double();
        return x < y ? -1 : (x > y ? 1 : 0);
    }
    return a.i < b.i ? -1 : (a.i > b.i ? 1 : 0);
}

}  // namespace

Value CompiledExpr::eval(std::span<const std::int32_t> state) const {
    switch (op) {
        case ExprOp::int_lit:
        case ExprOp::double_lit:
        case ExprOp::bool_lit: return literal;
        case ExprOp::ident:
            return type == ValueType::bool_type ? Value::of_bool(state[var] != 0) : Value::of_int(state[var]);
        case ExprOp::neg: {
            auto v = args[0].eval(state);
            return type == ValueType::int_type ? Value::of_int(-v.i) : Value::of_double(-v.as_double());
        }
        case ExprOp::lnot: return Value::of_bool(args[0].eval(state).i == 0);
        case ExprOp::land: return Value::of_bool(args[0].eval(state).i != 0 && args[1].eval(state).i != 0);
        case ExprOp::lor: return Value::of_bool(args[0].eval(state).i != 0 || args[1].eval(state).i != 0);
        case ExprOp::implies: return Value::of_bool(args[0].eval(state).i == 0 || args[1].eval(state).i != 0);
        case ExprOp::add:
        case ExprOp::sub:
        case ExprOp::mul: {
            auto a = args[0].eval(state);
            auto b = args[1].eval(state);
            if (type == ValueType::int_type) {
                if (op == ExprOp::add) return Value::of_int(a.i + b.i);
                if (op == ExprOp::sub) return Value::of_int(a.i - b.i);
                return Value::of_int(a.i * b.i);
            }
            const double x = a.as_double(), y = b.as_double();
            if (op == ExprOp::add) return Value::of_double(x + y);
            if (op == ExprOp::sub) return Value::of_double(x - y);
            return Value::of_double(x * y);
        }
        case ExprOp::div: return Value::of_double(args[0].eval(state).as_double() / args[1].eval(state).as_double());
        case ExprOp::eq:
        case ExprOp::ne: {
            auto a = args[0].eval(state);
            auto b = args[1].eval(state);
            const bool same = a.type == ValueType::bool_type ? a.i == b.i : numeric_equal(a, b);
            return Value::of_bool(op == ExprOp::eq ? same : !same);
        }
        case ExprOp::lt: return Value::of_bool(numeric_order(args[0].eval(state), args[1].eval(state)) < 0);
        case ExprOp::le: return Value::of_bool(numeric_order(args[0].eval(state), args[1].eval(state)) <= 0);
        case ExprOp::gt: return Value::of_bool(numeric_order(args[0].eval(state), args[1].eval(state)) > 0);
        case ExprOp::ge: return Value::of_bool(numeric_order(args[0].eval(state), args[1].eval(state)) >= 0);
        case ExprOp::min:
        case ExprOp::max: {
            Value best = args[0].eval(state);
            for (std::size_t k = 1; k < args.size(); ++k) {
                auto v = args[k].eval(state);
                const int c = numeric_order(v, best);
                if ((op == ExprOp::min && c < 0) || (op == ExprOp::max && c > 0)) best = v;
            }
            if (type == ValueType::double_type) return Value::of_double(best.as_double());
            return best;
        }
    }
    return literal;
}

}  // namespace flycheck::prism
