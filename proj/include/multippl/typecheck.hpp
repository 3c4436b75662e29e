#pragma once

#include "multippl/ast.hpp"

namespace multippl {

/// A checked program: a deep copy of the input with every node annotated
/// (lang, type, and per-kind extras) and implicit boundaries made explicit.
struct TypedProgram {
  Program program;
  Type main_type;
};

/// Type-checks a parsed program.
///
/// Elaboration performed on the copy:
///  - a Disc-bound variable referenced from Cont code becomes `exact(x)`;
///  - a Cont-bound variable passed directly to an `exact fn` from Disc code
///    becomes `sample(x)`;
///  - integer literals in real-typed positions become real literals.
///
/// Throws TypeError. Idempotent: checking `check(p).program` again yields a
/// structurally equal program with the same annotations.
TypedProgram check(const Program& p);

}  // namespace multippl
