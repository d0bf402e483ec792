#pragma once

#include "mlc/formula.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace mlc {

// Concrete syntax for formulas.
//
//   expr    := sum [ "<=" rational | "=" "0" ]        (condition suffix)
//   sum     := operand { ("-." | "+.") operand }      (left-assoc, equal prec)
//   operand := rational
//            | "d" "(" term "," term ")"
//            | ident "(" term { "," term } ")"        (predicate)
//            | "half" "(" expr ")" | "not" "(" expr ")"
//            | "absdiff" "(" expr "," expr ")"
//            | "min" "(" [ expr { "," expr } ] ")"    (empty min = D)
//            | "max" "(" [ expr { "," expr } ] ")"    (empty max = 0)
//            | "cmin" "[" nat "]" "(" expr { "," expr } ")"
//            | "cmax" "[" nat "]" "(" expr { "," expr } ")"
//            | ("sup" | "inf") ident ":" ident "." expr
//            | "(" expr ")"
//   term    := ident | ident "(" term { "," term } ")"
//   rational:= digits | digits "/" digits | digits "." digits
//
// cmin/cmax written in this syntax carry the Identity shared modulus; other
// shared moduli are set through the library API.
struct ParsedFormula {
    FormulaPtr formula;
    bool has_condition = false;
    Rat threshold;       // condition: value(formula) <= threshold
    bool eq_zero = true; // condition was written "= 0"
};

// Parse a single formula (optionally with a condition suffix).
ParsedFormula parse_formula(std::string_view text);

// Parse a named-formula file: entries "name := expr [condition] ;" with
// '#' line comments. The terminating ';' is required.
std::vector<NamedFormula> parse_formula_file(std::string_view text);

// Canonical printer. parse(print(f)) reproduces f exactly.
std::string print_formula(const Formula& f);
std::string print_term(const Term& t);
std::string print_formula_file(const std::vector<NamedFormula>& entries);

} // namespace mlc
