#include <charconv>
#include <set>
#include <system_error>

#include "flycheck/prism/ast.hpp"
#include "lexer.hpp"

namespace flycheck::prism {

namespace {

const std::set<std::string, std::less<>> kKeywords = {
    "module",  "endmodule", "const",   "int",       "double",        "bool",       "formula",
    "label",   "init",      "endinit", "true",      "false",         "rewards",    "endrewards",
    "system",  "endsystem", "global",  "dtmc",      "mdp",           "ctmc",       "probabilistic",
    "nondeterministic",     "stochastic",         "pta",           "min",        "max",
};

class Parser {
public:
    explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

    ModelAst parse() {
        ModelAst ast;
        parse_header(ast);
        while (peek().kind != Tok::end) {
            if (is_kw("const")) {
                ast.constants.push_back(parse_constant());
            } else if (is_kw("formula")) {
                ast.formulas.push_back(parse_formula());
            } else if (is_kw("label")) {
                ast.labels.push_back(parse_label());
            } else if (is_kw("module")) {
                ast.modules.push_back(parse_module());
            } else if (is_kw("rewards")) {
                unsupported("reward structures (rewards ... endrewards)");
            } else if (is_kw("system")) {
                unsupported("system composition (system ... endsystem)");
            } else if (is_kw("init")) {
                unsupported("initial state sets (init ... endinit)");
            } else if (is_kw("global")) {
                unsupported("global variables");
            } else {
                fail(std::string("expected declaration, found ") + what(peek()));
            }
        }
        check_names(ast);
        return ast;
    }

private:
    // -- token helpers ------------------------------------------------------

    const Token& peek(std::size_t ahead = 0) const { return toks_[std::min(pos_ + ahead, toks_.size() - 1)]; }
    const Token& take() { return toks_[std::min(pos_++, toks_.size() - 1)]; }
    bool is_kw(std::string_view kw, std::size_t ahead = 0) const {
        return peek(ahead).kind == Tok::ident && peek(ahead).text == kw;
    }
    bool accept(Tok k) {
        if (peek().kind != k) return false;
        ++pos_;
        return true;
    }
    bool accept_kw(std::string_view kw) {
        if (!is_kw(kw)) return false;
        ++pos_;
        return true;
    }
    const Token& expect(Tok k) {
        if (peek().kind != k) fail(std::string("expected ") + describe(k) + ", found " + what(peek()));
        return take();
    }
    void expect_kw(std::string_view kw) {
        if (!accept_kw(kw)) fail("expected '" + std::string(kw) + "', found " + what(peek()));
    }
    std::string expect_name() {
        const Token& t = peek();
        if (t.kind != Tok::ident) fail(std::string("expected identifier, found ") + what(t));
        if (kKeywords.contains(t.text)) fail("keyword '" + t.text + "' cannot be used as a name");
        return take().text;
    }
    static std::string what(const Token& t) {
        if (t.kind == Tok::ident || t.kind == Tok::integer || t.kind == Tok::real) return "'" + t.text + "'";
        if (t.kind == Tok::string) return "\"" + t.text + "\"";
        return describe(t.kind);
    }
    [[noreturn]] void fail(const std::string& msg) const { throw SyntaxError(msg, peek().pos); }
    [[noreturn]] void unsupported(const std::string& what) const {
        const auto pos = peek().pos;
        throw ModelError(ModelErrc::unsupported_construct,
                         what + " at " + std::to_string(pos.line) + ":" + std::to_string(pos.column));
    }

    // -- declarations -------------------------------------------------------

    void parse_header(ModelAst& ast) {
        if (accept_kw("dtmc") || accept_kw("probabilistic")) {
            ast.kind = "dtmc";
            return;
        }
        for (const char* kind : {"mdp", "nondeterministic", "ctmc", "stochastic", "pta"}) {
            if (is_kw(kind)) unsupported("model type '" + std::string(kind) + "' (only dtmc is supported)");
        }
        fail("expected model type 'dtmc', found " + what(peek()));
    }

    ConstantDecl parse_constant() {
        ConstantDecl c;
        c.loc.pos = take().pos;
        if (accept_kw("int")) {
            c.type = ConstType::int_type;
        } else if (accept_kw("double")) {
            c.type = ConstType::double_type;
        } else if (accept_kw("bool")) {
            c.type = ConstType::bool_type;
        }
        c.name = expect_name();
        if (accept(Tok::assign_eq)) c.value = parse_expr();
        expect(Tok::semi);
        return c;
    }

    FormulaAst parse_formula() {
        FormulaAst f;
        f.loc.pos = take().pos;
        f.name = expect_name();
        expect(Tok::assign_eq);
        f.expr = parse_expr();
        expect(Tok::semi);
        return f;
    }

    LabelAst parse_label() {
        LabelAst l;
        l.loc.pos = take().pos;
        l.name = expect(Tok::string).text;
        if (l.name.empty()) fail("empty label name");
        expect(Tok::assign_eq);
        l.expr = parse_expr();
        expect(Tok::semi);
        return l;
    }

    ModuleAst parse_module() {
        ModuleAst m;
        m.loc.pos = take().pos;
        m.name = expect_name();
        if (accept(Tok::assign_eq)) {
            m.renames = expect_name();
            expect(Tok::lbrack);
            do {
                std::string from = expect_name();
                expect(Tok::assign_eq);
                std::string to = expect_name();
                m.renaming.emplace_back(std::move(from), std::move(to));
            } while (accept(Tok::comma));
            expect(Tok::rbrack);
            expect_kw("endmodule");
            return m;
        }
        while (!is_kw("endmodule")) {
            if (peek().kind == Tok::end) fail("missing 'endmodule' for module '" + m.name + "'");
            if (peek().kind == Tok::lbrack) {
                m.commands.push_back(parse_command());
            } else {
                m.variables.push_back(parse_variable());
            }
        }
        take();
        return m;
    }

    VariableAst parse_variable() {
        VariableAst v;
        v.loc.pos = peek().pos;
        v.name = expect_name();
        expect(Tok::colon);
        if (accept_kw("bool")) {
            v.is_bool = true;
            v.lower = Expr::bool_literal(false);
            v.upper = Expr::bool_literal(true);
        } else if (accept_kw("int")) {
            unsupported("unbounded integer variables");
        } else {
            expect(Tok::lbrack);
            v.lower = parse_expr();
            expect(Tok::dotdot);
            v.upper = parse_expr();
            expect(Tok::rbrack);
        }
        if (accept_kw("init")) v.init = parse_expr();
        expect(Tok::semi);
        return v;
    }

    CommandAst parse_command() {
        CommandAst c;
        c.loc.pos = expect(Tok::lbrack).pos;
        if (peek().kind != Tok::rbrack) c.action = expect_name();
        expect(Tok::rbrack);
        c.guard = parse_expr();
        expect(Tok::arrow);
        do {
            c.updates.push_back(parse_update());
        } while (accept(Tok::plus));
        expect(Tok::semi);
        return c;
    }

    bool at_assignment() const {
        return peek().kind == Tok::lparen && peek(1).kind == Tok::ident && peek(2).kind == Tok::prime;
    }

    UpdateAst parse_update() {
        UpdateAst u;
        if (at_assignment() || (is_kw("true") && peek(1).kind != Tok::colon)) {
            u.probability = Expr::int_literal(1, peek().pos);
        } else {
            u.probability = parse_expr();
            expect(Tok::colon);
        }
        if (accept_kw("true")) return u;
        do {
            Assignment a;
            a.loc.pos = expect(Tok::lparen).pos;
            a.variable = expect_name();
            expect(Tok::prime);
            expect(Tok::assign_eq);
            a.value = parse_expr();
            expect(Tok::rparen);
            u.assignments.push_back(std::move(a));
        } while (accept(Tok::amp));
        return u;
    }

    // -- expressions --------------------------------------------------------

    Expr parse_expr() { return parse_implies(); }

    Expr parse_implies() {
        auto lhs = parse_or();
        if (peek().kind == Tok::implies) {
            auto pos = take().pos;
            return Expr::apply(ExprOp::implies, {std::move(lhs), parse_implies()}, pos);
        }
        return lhs;
    }

    Expr parse_or() {
        auto lhs = parse_and();
        while (peek().kind == Tok::bar) {
            auto pos = take().pos;
            lhs = Expr::apply(ExprOp::lor, {std::move(lhs), parse_and()}, pos);
        }
        return lhs;
    }

    Expr parse_and() {
        auto lhs = parse_not();
        while (peek().kind == Tok::amp) {
            auto pos = take().pos;
            lhs = Expr::apply(ExprOp::land, {std::move(lhs), parse_not()}, pos);
        }
        return lhs;
    }

    Expr parse_not() {
        if (peek().kind == Tok::bang) {
            auto pos = take().pos;
            return Expr::apply(ExprOp::lnot, {parse_not()}, pos);
        }
        return parse_relation();
    }

    Expr parse_relation() {
        auto lhs = parse_additive();
        ExprOp op;
        switch (peek().kind) {
            case Tok::assign_eq: op = ExprOp::eq; break;
            case Tok::ne: op = ExprOp::ne; break;
            case Tok::lt: op = ExprOp::lt; break;
            case Tok::le: op = ExprOp::le; break;
            case Tok::gt: op = ExprOp::gt; break;
            case Tok::ge: op = ExprOp::ge; break;
            default: return lhs;
        }
        auto pos = take().pos;
        return Expr::apply(op, {std::move(lhs), parse_additive()}, pos);
    }

    Expr parse_additive() {
        auto lhs = parse_multiplicative();
        for (;;) {
            if (peek().kind == Tok::plus) {
                auto pos = take().pos;
                lhs = Expr::apply(ExprOp::add, {std::move(lhs), parse_multiplicative()}, pos);
            } else if (peek().kind == Tok::minus) {
                auto pos = take().pos;
                lhs = Expr::apply(ExprOp::sub, {std::move(lhs), parse_multiplicative()}, pos);
            } else {
                return lhs;
            }
        }
    }

    Expr parse_multiplicative() {
        auto lhs = parse_unary();
        for (;;) {
            if (peek().kind == Tok::star) {
                auto pos = take().pos;
                lhs = Expr::apply(ExprOp::mul, {std::move(lhs), parse_unary()}, pos);
            } else if (peek().kind == Tok::slash) {
                auto pos = take().pos;
                lhs = Expr::apply(ExprOp::div, {std::move(lhs), parse_unary()}, pos);
            } else {
                return lhs;
            }
        }
    }

    Expr parse_unary() {
        if (peek().kind == Tok::minus) {
            auto pos = take().pos;
            return Expr::apply(ExprOp::neg, {parse_unary()}, pos);
        }
        return parse_primary();
    }

    Expr parse_primary() {
        const Token& t = peek();
        switch (t.kind) {
            case Tok::integer: {
                std::int64_t v = 0;
                auto res = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
                if (res.ec != std::errc{}) fail("integer literal out of range");
                take();
                return Expr::int_literal(v, t.pos);
            }
            case Tok::real: {
                double v = 0;
                auto res = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
                if (res.ec != std::errc{}) fail("malformed number");
                take();
                return Expr::double_literal(v, t.pos);
            }
            case Tok::lparen: {
                take();
                auto e = parse_expr();
                expect(Tok::rparen);
                return e;
            }
            case Tok::ident: {
                if (t.text == "true" || t.text == "false") {
                    take();
                    return Expr::bool_literal(t.text == "true", t.pos);
                }
                if (t.text == "min" || t.text == "max") {
                    auto op = t.text == "min" ? ExprOp::min : ExprOp::max;
                    take();
                    expect(Tok::lparen);
                    std::vector<Expr> args;
                    do {
                        args.push_back(parse_expr());
                    } while (accept(Tok::comma));
                    expect(Tok::rparen);
                    if (args.size() < 2) throw SyntaxError("min/max need at least two arguments", t.pos);
                    return Expr::apply(op, std::move(args), t.pos);
                }
                if (peek(1).kind == Tok::lparen) fail("function '" + t.text + "' is not supported");
                auto name = expect_name();
                return Expr::identifier(std::move(name), t.pos);
            }
            case Tok::question: fail("conditional expressions (?:) are not supported");
            default: break;
        }
        fail("expected expression, found " + what(t));
    }

    // -- static name checks -------------------------------------------------

    static void check_names(const ModelAst& ast) {
        std::set<std::string> names;
        std::set<std::string> modules;
        std::set<std::string> labels;
        auto claim = [&](const std::string& name, SourcePos pos, const char* what) {
            if (!names.insert(name).second) {
                throw ModelError(ModelErrc::duplicate_name, std::string(what) + " '" + name + "' at " +
                                                                std::to_string(pos.line) + ":" +
                                                                std::to_string(pos.column) + " is already declared");
            }
        };
        for (const auto& c : ast.constants) claim(c.name, c.loc.pos, "constant");
        for (const auto& f : ast.formulas) claim(f.name, f.loc.pos, "formula");
        for (const auto& l : ast.labels) {
            if (!labels.insert(l.name).second) {
                throw ModelError(ModelErrc::duplicate_name, "label \"" + l.name + "\" at " +
                                                                std::to_string(l.loc.pos.line) + ":" +
                                                                std::to_string(l.loc.pos.column) + " is already declared");
            }
        }
        for (const auto& m : ast.modules) {
            if (!modules.insert(m.name).second) {
                throw ModelError(ModelErrc::duplicate_name, "module '" + m.name + "' is already declared");
            }
            for (const auto& v : m.variables) claim(v.name, v.loc.pos, "variable");
        }
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
};

}  // namespace

ModelAst parse_model(std::string_view text) { return Parser(lex(text)).parse(); }

}  // namespace flycheck::prism
