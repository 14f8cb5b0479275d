#pragma once

#include <optional>
#include <string>

#include "ddh/hensel.hpp"

namespace ddh {

struct SyntaxError : std::runtime_error {
    SyntaxError(int line, int col, const std::string& expected)
        : std::runtime_error("syntax error at " + std::to_string(line) + ":" +
                             std::to_string(col) + ": expected " + expected),
          line(line),
          col(col),
          expected(expected) {}
    int line, col;
    std::string expected;
};

struct UnknownSymbol : std::runtime_error {
    UnknownSymbol(int line, int col, const std::string& symbol)
        : std::runtime_error("unknown symbol at " + std::to_string(line) + ":" +
                             std::to_string(col) + ": " + symbol),
          line(line),
          col(col),
          symbol(symbol) {}
    int line, col;
    std::string symbol;
};

// Grammar (whitespace-tolerant; canonical renderings round-trip):
//   expr     := '-'? term (('+'|'-') term)*
//   term     := factor (('*'|'/') factor)*        -- '/' only by ring units
//   factor   := atom ('^' nat)?
//   atom     := rational | genvar | basis | indet | '(' expr ')'
//   indet    := derivs? 'x' nat ('_' nat)?        -- '_' forms need ell
//   derivs   := ('d' nat ('^' nat)?)+             -- whitespace before 'x'
//   genvar   := 't' nat
//   basis    := 'e' nat                           -- needs an algebra
//   rational := nat ('/' nat)?
struct ParseContext {
    FieldConfig fc;
    std::optional<int> ell;       // accept prolonged variables x<i>_<j>
    FiniteAlgebra::Ptr algebra;   // accept basis atoms e<j>
};

// Full parse with algebra-valued coefficients permitted by the context.
PolyR parse_poly_r(const std::string& text, const ParseContext& ctx);

// Scalar-coefficient parse; basis atoms are rejected.
PolyQ parse_poly(const std::string& text, const FieldConfig& fc,
                 std::optional<int> ell = std::nullopt);

// Canonical rendering matching the parser's grammar.
std::string render_poly(const PolyQ& f, std::optional<int> ell = std::nullopt);

}  // namespace ddh
