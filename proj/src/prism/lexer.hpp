#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "flycheck/errors.hpp"

namespace flycheck::prism {

enum class Tok {
    end,
    ident,
    integer,
    real,
    string,
    lbrack,
    rbrack,
    lparen,
    rparen,
    lbrace,
    rbrace,
    semi,
    colon,
    comma,
    arrow,
    prime,
    assign_eq,  // '=' (also equality in expressions)
    ne,
    lt,
    le,
    gt,
    ge,
    plus,
    minus,
    star,
    slash,
    amp,
    bar,
    bang,
    implies,
    dotdot,
    question,
};

struct Token {
    Tok kind = Tok::end;
    std::string text;
    SourcePos pos;
};

std::vector<Token> lex(std::string_view src);

const char* describe(Tok kind);

}  // namespace flycheck::prism
