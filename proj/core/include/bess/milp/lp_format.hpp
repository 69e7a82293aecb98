#pragma once

#include <string>
#include <string_view>

#include "bess/milp/model.hpp"

namespace bess::milp {

/// Renders `model` in the LP text dialect below. Output is deterministic and
/// numbers use the shortest form that parses back to the same double.
///
///   Minimize
///    obj: 2 x - 1.5 y
///   Subject To
///    cap: 1 x + 1 y <= 10
///   Bounds
///    0 <= x <= 4
///    -inf <= y <= 3
///   Binaries
///    b
///   End
///
/// Every variable appears in Bounds, in insertion order, which fixes the ids
/// on reading. An empty expression is written as `0`.
std::string write_lp(const Model& model);

/// Parses the dialect written by write_lp. Also accepts omitted unit
/// coefficients, unnamed rows, single-sided bounds (`x >= 1`, `x <= 2`,
/// `x = 3`), `x free`, and `\` comments. Variables not listed in Bounds get
/// [0, inf). Throws ParseError with line and column on malformed input,
/// unknown sections, or duplicate variables.
Model read_lp(std::string_view text);

}  // namespace bess::milp
