#pragma once

#include <string_view>

#include "densitylab/set_expr.hpp"

namespace densitylab {

// Parses the canonical set-expression grammar:
//   expr := "nat" | "empty" | "finite{" ints "}" | "ap(" r "," m ")"
//         | "blocks(" b "," p ",on=[" residues "])"
//         | "union(" e "," e ")" | "inter(" e "," e ")" | "diff(" e "," e ")"
//         | "compl(" e ")" | "mcopy(" e "," m ["," rule] ")"
//   rule := "first" | "offset:" t | "seed:" u64
// Whitespace-insensitive. Throws ParseError with a byte offset.
// parse_set_expr(expr.text()) == expr for every expression.
SetExpr parse_set_expr(std::string_view text);

}  // namespace densitylab
