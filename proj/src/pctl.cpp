#include "flycheck/pctl.hpp"

#include <cctype>
#include <charconv>
#include <cstdlib>
#include <limits>
#include <system_error>

#include "flycheck/errors.hpp"

namespace flycheck::pctl {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};

std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

const char* bound_op(BoundKind k) {
    switch (k) {
        case BoundKind::le: return "<=";
        case BoundKind::lt: return "<";
        case BoundKind::gt: return ">";
        case BoundKind::ge: return ">=";
        case BoundKind::query: return "=?";
    }
    return "?";
}

BoundKind mirrored(BoundKind k) {
    switch (k) {
        case BoundKind::le: return BoundKind::ge;
        case BoundKind::lt: return BoundKind::gt;
        case BoundKind::gt: return BoundKind::lt;
        case BoundKind::ge: return BoundKind::le;
        case BoundKind::query: return BoundKind::query;
    }
    return k;
}

bool is_binary(const StateFormula& f) {
    return std::holds_alternative<Or>(f.node) || std::holds_alternative<And>(f.node) ||
           std::holds_alternative<Implies>(f.node);
}

std::string operand(const StatePtr& f) {
    auto s = to_string(*f);
    return is_binary(*f) ? "(" + s + ")" : s;
}

std::string horizon(std::optional<std::uint32_t> k) { return k ? "<=" + std::to_string(*k) : ""; }

// ---------------------------------------------------------------------------
// Lexer

enum class Tok {
    end,
    ident,
    string,
    number,
    lparen,
    rparen,
    lbrack,
    rbrack,
    bang,
    amp,
    bar,
    implies,
    eq,
    ne,
    lt,
    le,
    gt,
    ge,
    question,
    minus,
};

struct Token {
    Tok kind = Tok::end;
    std::string text;
    SourcePos pos;
};

class Lexer {
public:
    Lexer(std::string_view src, std::size_t line) : src_(src), line_(line) {}

    std::vector<Token> run() {
        std::vector<Token> out;
        while (true) {
            skip_space();
            Token t;
            t.pos = {line_, col_};
            if (i_ >= src_.size()) {
                out.push_back(t);
                return out;
            }
            char c = src_[i_];
            if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
                std::size_t start = i_;
                while (i_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[i_])) || src_[i_] == '_')) {
                    advance();
                }
                t.kind = Tok::ident;
                t.text = std::string(src_.substr(start, i_ - start));
            } else if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
                t.kind = Tok::number;
                t.text = lex_number();
            } else if (c == '"') {
                advance();
                std::size_t start = i_;
                while (i_ < src_.size() && src_[i_] != '"' && src_[i_] != '\n') advance();
                if (i_ >= src_.size() || src_[i_] != '"') throw SyntaxError("unterminated string", t.pos);
                t.kind = Tok::string;
                t.text = std::string(src_.substr(start, i_ - start));
                advance();
            } else {
                t.kind = lex_punct(t.pos);
            }
            out.push_back(std::move(t));
        }
    }

private:
    void advance() {
        if (src_[i_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++i_;
    }

    void skip_space() {
        while (i_ < src_.size()) {
            if (std::isspace(static_cast<unsigned char>(src_[i_]))) {
                advance();
            } else if (src_.substr(i_, 2) == "//") {
                while (i_ < src_.size() && src_[i_] != '\n') advance();
            } else {
                break;
            }
        }
    }

    std::string lex_number() {
        std::size_t start = i_;
        while (i_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[i_]))) advance();
        if (i_ < src_.size() && src_[i_] == '.') {
            advance();
            while (i_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[i_]))) advance();
        }
        if (i_ < src_.size() && (src_[i_] == 'e' || src_[i_] == 'E')) {
            std::size_t save = i_, save_col = col_;
            advance();
            if (i_ < src_.size() && (src_[i_] == '+' || src_[i_] == '-')) advance();
            if (i_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[i_]))) {
                while (i_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[i_]))) advance();
            } else {
                i_ = save;
                col_ = save_col;
            }
        }
        return std::string(src_.substr(start, i_ - start));
    }

    Tok lex_punct(SourcePos pos) {
        char c = src_[i_];
        char d = i_ + 1 < src_.size() ? src_[i_ + 1] : '\0';
        auto two = [&](Tok t) {
            advance();
            advance();
            return t;
        };
        auto one = [&](Tok t) {
            advance();
            return t;
        };
        switch (c) {
            case '(': return one(Tok::lparen);
            case ')': return one(Tok::rparen);
            case '[': return one(Tok::lbrack);
            case ']': return one(Tok::rbrack);
            case '&': return one(Tok::amp);
            case '|': return one(Tok::bar);
            case '?': return one(Tok::question);
            case '-': return one(Tok::minus);
            case '!': return d == '=' ? two(Tok::ne) : one(Tok::bang);
            case '=': return d == '>' ? two(Tok::implies) : one(Tok::eq);
            case '<': return d == '=' ? two(Tok::le) : one(Tok::lt);
            case '>': return d == '=' ? two(Tok::ge) : one(Tok::gt);
            default: break;
        }
        throw SyntaxError(std::string("unexpected character '") + c + "'", pos);
    }

    std::string_view src_;
    std::size_t i_ = 0;
    std::size_t line_;
    std::size_t col_ = 1;
};

std::size_t count_queries(const StateFormula& f);

std::size_t count_queries(const PathFormula& f) {
    return std::visit(overloaded{
                          [](const Next& n) { return count_queries(*n.arg); },
                          [](const BoundedUntil& u) { return count_queries(*u.lhs) + count_queries(*u.rhs); },
                          [](const Until& u) { return count_queries(*u.lhs) + count_queries(*u.rhs); },
                          [](const Eventually& e) { return count_queries(*e.arg); },
                          [](const Globally& g) { return count_queries(*g.arg); },
                      },
                      f.node);
}

std::size_t count_queries(const StateFormula& f) {
    return std::visit(overloaded{
                          [](const True&) -> std::size_t { return 0; },
                          [](const False&) -> std::size_t { return 0; },
                          [](const Atom&) -> std::size_t { return 0; },
                          [](const Not& n) { return count_queries(*n.arg); },
                          [](const Or& o) { return count_queries(*o.lhs) + count_queries(*o.rhs); },
                          [](const And& o) { return count_queries(*o.lhs) + count_queries(*o.rhs); },
                          [](const Implies& o) { return count_queries(*o.lhs) + count_queries(*o.rhs); },
                          [](const Prob& p) {
                              return (p.bound.kind == BoundKind::query ? 1 : 0) + count_queries(*p.path);
                          },
                      },
                      f.node);
}

// ---------------------------------------------------------------------------
// Parser

class Parser {
public:
    explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

    StatePtr parse_top() {
        const SourcePos start = peek().pos;
        auto f = parse_state(true);
        if (peek().kind != Tok::end) fail("unexpected '" + describe(peek()) + "' after formula");
        const auto* root = std::get_if<Prob>(&f->node);
        if (count_queries(*f) > (root && root->bound.kind == BoundKind::query ? 1 : 0)) {
            throw SyntaxError("P=? is only allowed as the outermost operator", start);
        }
        return f;
    }

private:
    const Token& peek(std::size_t ahead = 0) const {
        return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
    }
    const Token& take() { return toks_[std::min(pos_++, toks_.size() - 1)]; }
    bool accept(Tok k) {
        if (peek().kind != k) return false;
        ++pos_;
        return true;
    }
    bool is_keyword(const char* kw, std::size_t ahead = 0) const {
        return peek(ahead).kind == Tok::ident && peek(ahead).text == kw;
    }
    void expect(Tok k, const char* what) {
        if (!accept(k)) fail(std::string("expected ") + what + ", found '" + describe(peek()) + "'");
    }
    [[noreturn]] void fail(const std::string& msg) const { throw SyntaxError(msg, peek().pos); }

    static std::string describe(const Token& t) {
        if (t.kind == Tok::end) return "end of input";
        if (t.kind == Tok::string) return "\"" + t.text + "\"";
        if (!t.text.empty()) return t.text;
        switch (t.kind) {
            case Tok::lparen: return "(";
            case Tok::rparen: return ")";
            case Tok::lbrack: return "[";
            case Tok::rbrack: return "]";
            case Tok::bang: return "!";
            case Tok::amp: return "&";
            case Tok::bar: return "|";
            case Tok::implies: return "=>";
            case Tok::eq: return "=";
            case Tok::ne: return "!=";
            case Tok::lt: return "<";
            case Tok::le: return "<=";
            case Tok::gt: return ">";
            case Tok::ge: return ">=";
            case Tok::question: return "?";
            case Tok::minus: return "-";
            default: return "token";
        }
    }

    // top: whether a P=? operator is allowed at this position.
    StatePtr parse_state(bool top = false) {
        auto lhs = parse_or(top);
        if (accept(Tok::implies)) return make_implies(lhs, parse_state());
        return lhs;
    }

    StatePtr parse_or(bool top) {
        auto lhs = parse_and(top);
        while (accept(Tok::bar)) lhs = make_or(lhs, parse_and(false));
        return lhs;
    }

    StatePtr parse_and(bool top) {
        auto lhs = parse_unary(top);
        while (accept(Tok::amp)) lhs = make_and(lhs, parse_unary(false));
        return lhs;
    }

    StatePtr parse_unary(bool top) {
        if (accept(Tok::bang)) return make_not(parse_unary(false));
        return parse_primary(top);
    }

    static std::optional<Comparison> comparison(Tok k) {
        switch (k) {
            case Tok::eq: return Comparison::eq;
            case Tok::ne: return Comparison::ne;
            case Tok::lt: return Comparison::lt;
            case Tok::le: return Comparison::le;
            case Tok::gt: return Comparison::gt;
            case Tok::ge: return Comparison::ge;
            default: return std::nullopt;
        }
    }

    StatePtr parse_primary(bool top) {
        const Token& t = peek();
        if (t.kind == Tok::string) {
            take();
            if (t.text.empty()) fail("empty label name");
            return make_atom(AtomId::label(t.text));
        }
        if (is_keyword("true")) {
            take();
            return make_true();
        }
        if (is_keyword("false")) {
            take();
            return make_false();
        }
        if (is_keyword("P")) return parse_prob(top);
        if (t.kind == Tok::lparen) {
            if (inline_atom_ahead()) return parse_inline_atom();
            take();
            auto f = parse_state();
            expect(Tok::rparen, "')'");
            return f;
        }
        fail("expected state formula, found '" + describe(t) + "'");
    }

    // ( ident cmp [-]literal )
    bool inline_atom_ahead() const {
        if (peek(1).kind != Tok::ident || !comparison(peek(2).kind)) return false;
        std::size_t i = 3;
        if (peek(i).kind == Tok::minus) ++i;
        const auto& lit = peek(i);
        if (lit.kind != Tok::number && !(lit.kind == Tok::ident && (lit.text == "true" || lit.text == "false"))) {
            return false;
        }
        return peek(i + 1).kind == Tok::rparen;
    }

    StatePtr parse_inline_atom() {
        expect(Tok::lparen, "'('");
        InlinePredicate pred;
        pred.variable = take().text;
        pred.op = *comparison(take().kind);
        if (is_keyword("true") || is_keyword("false")) {
            pred.value = take().text == "true" ? 1 : 0;
            pred.boolean_literal = true;
        } else {
            bool negative = accept(Tok::minus);
            const Token& num = peek();
            if (num.kind != Tok::number) fail("expected integer literal in comparison");
            std::int64_t v = 0;
            auto res = std::from_chars(num.text.data(), num.text.data() + num.text.size(), v);
            if (res.ec != std::errc{} || res.ptr != num.text.data() + num.text.size() ||
                v > std::numeric_limits<std::int32_t>::max()) {
                fail("expected integer literal in comparison");
            }
            take();
            pred.value = static_cast<std::int32_t>(negative ? -v : v);
        }
        expect(Tok::rparen, "')'");
        return make_atom(AtomId::inline_predicate(std::move(pred)));
    }

    StatePtr parse_prob(bool top) {
        const SourcePos at = take().pos;  // P
        ProbBound bound;
        const Token& op = peek();
        if (op.kind == Tok::eq) {
            take();
            expect(Tok::question, "'?' after 'P='");
            if (!top) throw SyntaxError("P=? is only allowed as the outermost operator", at);
            bound.kind = BoundKind::query;
        } else {
            switch (op.kind) {
                case Tok::le: bound.kind = BoundKind::le; break;
                case Tok::lt: bound.kind = BoundKind::lt; break;
                case Tok::gt: bound.kind = BoundKind::gt; break;
                case Tok::ge: bound.kind = BoundKind::ge; break;
                default: fail("expected one of >=, >, <, <=, =? after 'P'");
            }
            take();
            const Token& num = peek();
            if (num.kind == Tok::minus) fail("probability bound must lie in [0,1]");
            if (num.kind != Tok::number) fail("expected probability bound");
            double p = 0.0;
            auto res = std::from_chars(num.text.data(), num.text.data() + num.text.size(), p);
            if (res.ec != std::errc{} || res.ptr != num.text.data() + num.text.size()) fail("malformed number");
            if (p < 0.0 || p > 1.0) fail("probability bound " + num.text + " outside [0,1]");
            take();
            bound.p = p;
        }
        expect(Tok::lbrack, "'['");
        auto path = parse_path();
        expect(Tok::rbrack, "']'");
        return make_prob(bound, std::move(path));
    }

    std::optional<std::uint32_t> parse_horizon() {
        if (!accept(Tok::le)) return std::nullopt;
        if (peek().kind == Tok::minus) fail("step bound must be non-negative");
        const Token& num = peek();
        std::uint64_t k = 0;
        auto res = std::from_chars(num.text.data(), num.text.data() + num.text.size(), k);
        if (num.kind != Tok::number || res.ec != std::errc{} || res.ptr != num.text.data() + num.text.size() ||
            k > std::numeric_limits<std::uint32_t>::max()) {
            fail("expected non-negative integer step bound");
        }
        take();
        return static_cast<std::uint32_t>(k);
    }

    PathPtr parse_path() {
        if (is_keyword("X")) {
            take();
            return make_next(parse_state());
        }
        if (is_keyword("F")) {
            take();
            auto k = parse_horizon();
            return make_eventually(k, parse_state());
        }
        if (is_keyword("G")) {
            take();
            auto k = parse_horizon();
            return make_globally(k, parse_state());
        }
        auto lhs = parse_state();
        if (!is_keyword("U")) fail("expected 'U' in path formula, found '" + describe(peek()) + "'");
        take();
        auto k = parse_horizon();
        auto rhs = parse_state();
        if (k) return make_bounded_until(lhs, *k, rhs);
        return make_until(lhs, rhs);
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
};

StatePtr parse_line(std::string_view text, std::size_t line) {
    Parser parser(Lexer(text, line).run());
    return parser.parse_top();
}

PathPtr desugar_path(const PathFormula& path);

}  // namespace

bool satisfies(double probability, const ProbBound& bound, double tolerance) {
    switch (bound.kind) {
        case BoundKind::le: return probability <= bound.p + tolerance;
        case BoundKind::lt: return probability < bound.p + tolerance;
        case BoundKind::gt: return probability > bound.p - tolerance;
        case BoundKind::ge: return probability >= bound.p - tolerance;
        case BoundKind::query: break;
    }
    throw Error("P=? has no truth value");
}

StatePtr make_true() { return std::make_shared<const StateFormula>(StateFormula{True{}}); }
StatePtr make_false() { return std::make_shared<const StateFormula>(StateFormula{False{}}); }
StatePtr make_atom(AtomId id) { return std::make_shared<const StateFormula>(StateFormula{Atom{std::move(id)}}); }
StatePtr make_atom(std::string label) { return make_atom(AtomId::label(std::move(label))); }
StatePtr make_not(StatePtr arg) { return std::make_shared<const StateFormula>(StateFormula{Not{std::move(arg)}}); }
StatePtr make_or(StatePtr lhs, StatePtr rhs) {
    return std::make_shared<const StateFormula>(StateFormula{Or{std::move(lhs), std::move(rhs)}});
}
StatePtr make_and(StatePtr lhs, StatePtr rhs) {
    return std::make_shared<const StateFormula>(StateFormula{And{std::move(lhs), std::move(rhs)}});
}
StatePtr make_implies(StatePtr lhs, StatePtr rhs) {
    return std::make_shared<const StateFormula>(StateFormula{Implies{std::move(lhs), std::move(rhs)}});
}
StatePtr make_prob(ProbBound bound, PathPtr path) {
    return std::make_shared<const StateFormula>(StateFormula{Prob{bound, std::move(path)}});
}
PathPtr make_next(StatePtr arg) { return std::make_shared<const PathFormula>(PathFormula{Next{std::move(arg)}}); }
PathPtr make_bounded_until(StatePtr lhs, std::uint32_t k, StatePtr rhs) {
    return std::make_shared<const PathFormula>(PathFormula{BoundedUntil{std::move(lhs), k, std::move(rhs)}});
}
PathPtr make_until(StatePtr lhs, StatePtr rhs) {
    return std::make_shared<const PathFormula>(PathFormula{Until{std::move(lhs), std::move(rhs)}});
}
PathPtr make_eventually(std::optional<std::uint32_t> k, StatePtr arg) {
    return std::make_shared<const PathFormula>(PathFormula{Eventually{k, std::move(arg)}});
}
PathPtr make_globally(std::optional<std::uint32_t> k, StatePtr arg) {
    return std::make_shared<const PathFormula>(PathFormula{Globally{k, std::move(arg)}});
}

bool equal(const StateFormula& a, const StateFormula& b) {
    if (a.node.index() != b.node.index()) return false;
    return std::visit(
        overloaded{
            [](const True&) { return true; },
            [](const False&) { return true; },
            [&](const Atom& x) { return x.id == std::get<Atom>(b.node).id; },
            [&](const Not& x) { return equal(*x.arg, *std::get<Not>(b.node).arg); },
            [&](const Or& x) {
                const auto& y = std::get<Or>(b.node);
                return equal(*x.lhs, *y.lhs) && equal(*x.rhs, *y.rhs);
            },
            [&](const And& x) {
                const auto& y = std::get<And>(b.node);
                return equal(*x.lhs, *y.lhs) && equal(*x.rhs, *y.rhs);
            },
            [&](const Implies& x) {
                const auto& y = std::get<Implies>(b.node);
                return equal(*x.lhs, *y.lhs) && equal(*x.rhs, *y.rhs);
            },
            [&](const Prob& x) {
                const auto& y = std::get<Prob>(b.node);
                return x.bound == y.bound && equal(*x.path, *y.path);
            },
        },
        a.node);
}

bool equal(const PathFormula& a, const PathFormula& b) {
    if (a.node.index() != b.node.index()) return false;
    return std::visit(
        overloaded{
            [&](const Next& x) { return equal(*x.arg, *std::get<Next>(b.node).arg); },
            [&](const BoundedUntil& x) {
                const auto& y = std::get<BoundedUntil>(b.node);
                return x.k == y.k && equal(*x.lhs, *y.lhs) && equal(*x.rhs, *y.rhs);
            },
            [&](const Until& x) {
                const auto& y = std::get<Until>(b.node);
                return equal(*x.lhs, *y.lhs) && equal(*x.rhs, *y.rhs);
            },
            [&](const Eventually& x) {
                const auto& y = std::get<Eventually>(b.node);
                return x.k == y.k && equal(*x.arg, *y.arg);
            },
            [&](const Globally& x) {
                const auto& y = std::get<Globally>(b.node);
                return x.k == y.k && equal(*x.arg, *y.arg);
            },
        },
        a.node);
}

std::string to_string(const StateFormula& f) {
    return std::visit(
        overloaded{
            [](const True&) -> std::string { return "true"; },
            [](const False&) -> std::string { return "false"; },
            [](const Atom& a) -> std::string { return a.id.is_inline() ? "(" + a.id.name + ")" : "\"" + a.id.name + "\""; },
            [](const Not& n) { return "!" + operand(n.arg); },
            [](const Or& o) { return operand(o.lhs) + " | " + operand(o.rhs); },
            [](const And& o) { return operand(o.lhs) + " & " + operand(o.rhs); },
            [](const Implies& o) { return operand(o.lhs) + " => " + operand(o.rhs); },
            [](const Prob& p) {
                std::string head = std::string("P") + bound_op(p.bound.kind);
                if (p.bound.kind != BoundKind::query) head += format_double(p.bound.p);
                // A complemented query is the rewriting of P=? [G f] into F !f.
                if (p.bound.complement) {
                    auto print_globally = [&](std::optional<std::uint32_t> k, const StatePtr& rhs, const StatePtr& lhs) {
                        const auto* neg = std::get_if<Not>(&rhs->node);
                        if (!neg || !std::holds_alternative<True>(lhs->node)) return std::string();
                        return head + " [ G" + horizon(k) + " " + operand(neg->arg) + " ]";
                    };
                    std::string out;
                    if (const auto* u = std::get_if<Until>(&p.path->node)) {
                        out = print_globally(std::nullopt, u->rhs, u->lhs);
                    } else if (const auto* bu = std::get_if<BoundedUntil>(&p.path->node)) {
                        out = print_globally(bu->k, bu->rhs, bu->lhs);
                    }
                    if (!out.empty()) return out;
                }
                return head + " [ " + to_string(*p.path) + " ]";
            },
        },
        f.node);
}

std::string to_string(const PathFormula& f) {
    return std::visit(
        overloaded{
            [](const Next& n) { return "X " + operand(n.arg); },
            [](const BoundedUntil& u) {
                return operand(u.lhs) + " U<=" + std::to_string(u.k) + " " + operand(u.rhs);
            },
            [](const Until& u) { return operand(u.lhs) + " U " + operand(u.rhs); },
            [](const Eventually& e) { return "F" + horizon(e.k) + " " + operand(e.arg); },
            [](const Globally& g) { return "G" + horizon(g.k) + " " + operand(g.arg); },
        },
        f.node);
}

namespace {

PathPtr until_of(std::optional<std::uint32_t> k, StatePtr lhs, StatePtr rhs) {
    if (k) return make_bounded_until(std::move(lhs), *k, std::move(rhs));
    return make_until(std::move(lhs), std::move(rhs));
}

PathPtr desugar_path(const PathFormula& path) {
    return std::visit(
        overloaded{
            [](const Next& n) { return make_next(desugar(n.arg)); },
            [](const BoundedUntil& u) { return make_bounded_until(desugar(u.lhs), u.k, desugar(u.rhs)); },
            [](const Until& u) { return make_until(desugar(u.lhs), desugar(u.rhs)); },
            [](const Eventually& e) { return until_of(e.k, make_true(), desugar(e.arg)); },
            // Globally is handled at the enclosing P operator.
            [](const Globally& g) { return until_of(g.k, make_true(), make_not(desugar(g.arg))); },
        },
        path.node);
}

}  // namespace

StatePtr desugar(const StatePtr& f) {
    return std::visit(
        overloaded{
            [&](const True&) { return f; },
            [&](const False&) { return f; },
            [&](const Atom&) { return f; },
            [](const Not& n) { return make_not(desugar(n.arg)); },
            [](const Or& o) { return make_or(desugar(o.lhs), desugar(o.rhs)); },
            [](const And& o) { return make_and(desugar(o.lhs), desugar(o.rhs)); },
            [](const Implies& o) { return make_or(make_not(desugar(o.lhs)), desugar(o.rhs)); },
            [](const Prob& p) {
                if (std::holds_alternative<Globally>(p.path->node)) {
                    // P~p [G f] == P~'(1-p) [F !f] with the comparison mirrored.
                    ProbBound bound = p.bound;
                    if (bound.kind == BoundKind::query) {
                        bound.complement = !bound.complement;
                    } else {
                        bound.kind = mirrored(bound.kind);
                        bound.p = 1.0 - bound.p;
                    }
                    return make_prob(bound, desugar_path(*p.path));
                }
                return make_prob(p.bound, desugar_path(*p.path));
            },
        },
        f->node);
}

bool is_core(const StateFormula& f) {
    return std::visit(
        overloaded{
            [](const True&) { return true; },
            [](const False&) { return true; },
            [](const Atom&) { return true; },
            [](const Not& n) { return is_core(*n.arg); },
            [](const Or& o) { return is_core(*o.lhs) && is_core(*o.rhs); },
            [](const And& o) { return is_core(*o.lhs) && is_core(*o.rhs); },
            [](const Implies&) { return false; },
            [](const Prob& p) {
                return std::visit(overloaded{
                                      [](const Next& n) { return is_core(*n.arg); },
                                      [](const BoundedUntil& u) { return is_core(*u.lhs) && is_core(*u.rhs); },
                                      [](const Until& u) { return is_core(*u.lhs) && is_core(*u.rhs); },
                                      [](const Eventually&) { return false; },
                                      [](const Globally&) { return false; },
                                  },
                                  p.path->node);
            },
        },
        f.node);
}

namespace {

void collect(const StateFormula& f, std::vector<AtomId>& out);

void collect(const PathFormula& f, std::vector<AtomId>& out) {
    std::visit(overloaded{
                   [&](const Next& n) { collect(*n.arg, out); },
                   [&](const BoundedUntil& u) {
                       collect(*u.lhs, out);
                       collect(*u.rhs, out);
                   },
                   [&](const Until& u) {
                       collect(*u.lhs, out);
                       collect(*u.rhs, out);
                   },
                   [&](const Eventually& e) { collect(*e.arg, out); },
                   [&](const Globally& g) { collect(*g.arg, out); },
               },
               f.node);
}

void collect(const StateFormula& f, std::vector<AtomId>& out) {
    std::visit(overloaded{
                   [](const True&) {},
                   [](const False&) {},
                   [&](const Atom& a) {
                       for (const auto& seen : out) {
                           if (seen == a.id) return;
                       }
                       out.push_back(a.id);
                   },
                   [&](const Not& n) { collect(*n.arg, out); },
                   [&](const Or& o) {
                       collect(*o.lhs, out);
                       collect(*o.rhs, out);
                   },
                   [&](const And& o) {
                       collect(*o.lhs, out);
                       collect(*o.rhs, out);
                   },
                   [&](const Implies& o) {
                       collect(*o.lhs, out);
                       collect(*o.rhs, out);
                   },
                   [&](const Prob& p) { collect(*p.path, out); },
               },
               f.node);
}

}  // namespace

std::vector<AtomId> collect_atoms(const StateFormula& f) {
    std::vector<AtomId> out;
    collect(f, out);
    return out;
}

bool PropertyQuery::is_query() const {
    const auto* p = std::get_if<Prob>(&formula->node);
    return p && p->bound.kind == BoundKind::query;
}

PropertyQuery parse_property(std::string_view text) {
    return PropertyQuery{std::string(text), desugar(parse_line(text, 1)), 0};
}

StatePtr parse_formula_raw(std::string_view text) { return parse_line(text, 1); }

std::vector<PropertyQuery> parse_property_file(std::string_view text) {
    std::vector<PropertyQuery> out;
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(start, end - start);
        ++line_no;
        if (auto cut = line.find("//"); cut != std::string_view::npos) line = line.substr(0, cut);
        std::string_view trimmed = line;
        while (!trimmed.empty() && std::isspace(static_cast<unsigned char>(trimmed.back()))) trimmed.remove_suffix(1);
        while (!trimmed.empty() && std::isspace(static_cast<unsigned char>(trimmed.front()))) trimmed.remove_prefix(1);
        if (!trimmed.empty()) {
            out.push_back(PropertyQuery{std::string(trimmed), desugar(parse_line(line, line_no)), line_no});
        }
        start = end + 1;
    }
    return out;
}

}  // namespace flycheck::pctl
