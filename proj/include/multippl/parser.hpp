#pragma once

#include <string>
#include <string_view>

#include "multippl/ast.hpp"

namespace multippl {

/// Parses a `.mppl` source file.
///
/// Sugar is expanded on the way in: Disc `observe e in body` becomes
/// `let _ = observe e in body`, Cont `x ~ e; rest` becomes a let, `x <- e;`
/// becomes a let of `ret e`, a Cont statement `e;` binds `_`, and `a / b`
/// between numeric constants is folded to a real literal.
///
/// Throws ParseError with the position and the expected-token set.
Program parse(std::string_view source);

/// Parses a single expression of the given sublanguage (test helper).
ExprPtr parse_expression(std::string_view source, Lang lang);

/// Pretty-prints a program; parse(render(p)) is structurally equal to p.
std::string render(const Program& p);
std::string render(const Expr& e, Lang lang);

}  // namespace multippl
