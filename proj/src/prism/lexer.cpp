#include "lexer.hpp"

#include <cctype>

namespace flycheck::prism {

namespace {

bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
bool is_digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) {}

    std::vector<Token> run() {
        std::vector<Token> out;
        for (;;) {
            skip_trivia();
            Token t;
            t.pos = {line_, col_};
            if (i_ >= src_.size()) {
                out.push_back(std::move(t));
                return out;
            }
            const char c = src_[i_];
            if (is_ident_start(c)) {
                std::size_t start = i_;
                while (i_ < src_.size() && is_ident_char(src_[i_])) advance();
                t.kind = Tok::ident;
                t.text = std::string(src_.substr(start, i_ - start));
            } else if (is_digit(c) || (c == '.' && i_ + 1 < src_.size() && is_digit(src_[i_ + 1]))) {
                lex_number(t);
            } else if (c == '"') {
                advance();
                std::size_t start = i_;
                while (i_ < src_.size() && src_[i_] != '"' && src_[i_] != '\n') advance();
                if (i_ >= src_.size() || src_[i_] != '"') throw SyntaxError("unterminated string literal", t.pos);
                t.kind = Tok::string;
                t.text = std::string(src_.substr(start, i_ - start));
                advance();
            } else {
                t.kind = punct(t.pos);
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

    void skip_trivia() {
        while (i_ < src_.size()) {
            if (std::isspace(static_cast<unsigned char>(src_[i_]))) {
                advance();
            } else if (src_.compare(i_, 2, "//") == 0) {
                while (i_ < src_.size() && src_[i_] != '\n') advance();
            } else {
                break;
            }
        }
    }

    void lex_number(Token& t) {
        std::size_t start = i_;
        bool real = false;
        while (i_ < src_.size() && is_digit(src_[i_])) advance();
        // "0..3" is a range, not a real literal.
        if (i_ < src_.size() && src_[i_] == '.' && src_.compare(i_, 2, "..") != 0) {
            real = true;
            advance();
            while (i_ < src_.size() && is_digit(src_[i_])) advance();
        }
        if (i_ < src_.size() && (src_[i_] == 'e' || src_[i_] == 'E')) {
            std::size_t j = i_ + 1;
            if (j < src_.size() && (src_[j] == '+' || src_[j] == '-')) ++j;
            if (j < src_.size() && is_digit(src_[j])) {
                real = true;
                while (i_ < j) advance();
                while (i_ < src_.size() && is_digit(src_[i_])) advance();
            }
        }
        t.kind = real ? Tok::real : Tok::integer;
        t.text = std::string(src_.substr(start, i_ - start));
    }

    Tok punct(SourcePos pos) {
        const char c = src_[i_];
        const char d = i_ + 1 < src_.size() ? src_[i_ + 1] : '\0';
        auto one = [&](Tok k) {
            advance();
            return k;
        };
        auto two = [&](Tok k) {
            advance();
            advance();
            return k;
        };
        switch (c) {
            case '[': return one(Tok::lbrack);
            case ']': return one(Tok::rbrack);
            case '(': return one(Tok::lparen);
            case ')': return one(Tok::rparen);
            case '{': return one(Tok::lbrace);
            case '}': return one(Tok::rbrace);
            case ';': return one(Tok::semi);
            case ':': return one(Tok::colon);
            case ',': return one(Tok::comma);
            case '\'': return one(Tok::prime);
            case '+': return one(Tok::plus);
            case '*': return one(Tok::star);
            case '/': return one(Tok::slash);
            case '&': return one(Tok::amp);
            case '|': return one(Tok::bar);
            case '?': return one(Tok::question);
            case '-': return d == '>' ? two(Tok::arrow) : one(Tok::minus);
            case '=': return d == '>' ? two(Tok::implies) : one(Tok::assign_eq);
            case '!': return d == '=' ? two(Tok::ne) : one(Tok::bang);
            case '<': return d == '=' ? two(Tok::le) : one(Tok::lt);
            case '>': return d == '=' ? two(Tok::ge) : one(Tok::gt);
            case '.':
                if (d == '.') return two(Tok::dotdot);
                break;
            default: break;
        }
        throw SyntaxError(std::string("unexpected character '") + c + "'", pos);
    }

    std::string_view src_;
    std::size_t i_ = 0;
    std::size_t line_ = 1;
    std::size_t col_ = 1;
};

}  // namespace

std::vector<Token> lex(std::string_view src) { return Lexer(src).run(); }

const char* describe(Tok kind) {
    switch (kind) {
        case Tok::end: return "end of input";
        case Tok::ident: return "identifier";
        case Tok::integer: return "integer";
        case Tok::real: return "number";
        case Tok::string: return "string";
        case Tok::lbrack: return "'['";
        case Tok::rbrack: return "']'";
        case Tok::lparen: return "'('";
        case Tok::rparen: return "')'";
        case Tok::lbrace: return "'{'";
        case Tok::rbrace: return "'}'";
        case Tok::semi: return "';'";
        case Tok::colon: return "':'";
        case Tok::comma: return "','";
        case Tok::arrow: return "'->'";
        case Tok::prime: return "'''";
        case Tok::assign_eq: return "'='";
        case Tok::ne: return "'!='";
        case Tok::lt: return "'<'";
        case Tok::le: return "'<='";
        case Tok::gt: return "'>'";
        case Tok::ge: return "'>='";
        case Tok::plus: return "'+'";
        case Tok::minus: return "'-'";
        case Tok::star: return "'*'";
        case Tok::slash: return "'/'";
        case Tok::amp: return "'&'";
        case Tok::bar: return "'|'";
        case Tok::bang: return "'!'";
        case Tok::implies: return "'=>'";
        case Tok::dotdot: return "'..'";
        case Tok::question: return "'?'";
    }
    return "token";
}

}  // namespace flycheck::prism
