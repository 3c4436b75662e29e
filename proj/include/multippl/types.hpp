#pragma once

#include <string>
#include <vector>

namespace multippl {

enum class TypeKind { Unit, Bool, Real, Int, Prod, List };

/// A type of either sublanguage.
///
/// Disc types are the subset built from Unit, Bool, Int and Prod. Int carries
/// the one-hot arity on the Disc side; arity 0 means "not fixed" (function
/// signatures write plain `Int`). A List with no argument has an element type
/// that is not known yet (the type of `[]`).
struct Type {
  TypeKind kind = TypeKind::Unit;
  int arity = 0;
  std::vector<Type> args;

  static Type unit() { return {TypeKind::Unit, 0, {}}; }
  static Type boolean() { return {TypeKind::Bool, 0, {}}; }
  static Type real() { return {TypeKind::Real, 0, {}}; }
  static Type integer(int arity = 0) { return {TypeKind::Int, arity, {}}; }
  static Type prod(Type a, Type b) { return {TypeKind::Prod, 0, {std::move(a), std::move(b)}}; }
  static Type list() { return {TypeKind::List, 0, {}}; }
  static Type list(Type elem) { return {TypeKind::List, 0, {std::move(elem)}}; }

  bool is(TypeKind k) const { return kind == k; }
  const Type& first() const { return args.at(0); }
  const Type& second() const { return args.at(1); }
  bool list_elem_known() const { return kind == TypeKind::List && !args.empty(); }
};

/// Structural equality that ignores Int arity and treats an unknown list
/// element type as matching any element type.
bool compatible(const Type& a, const Type& b);

/// Exact structural equality, arity included.
bool operator==(const Type& a, const Type& b);

/// Merges two compatible types, keeping the more informative side.
Type join(const Type& a, const Type& b);

bool is_disc_type(const Type& t);

/// The convertibility relation between a Disc type and a Cont type:
/// unit ~ unit, bool ~ bool, Int(k) ~ Int, and products componentwise.
bool convertible(const Type& disc, const Type& cont);

/// Cont counterpart of a Disc type.
Type to_cont(const Type& disc);
/// Disc counterpart of a convertible Cont type.
Type to_disc(const Type& cont);

/// Number of components along the right spine of nested products; 1 for a
/// non-product type.
int tuple_width(const Type& t);
/// Type of component k of an n-tuple read as right-nested pairs.
const Type& tuple_component(const Type& t, int k);

std::string to_string(const Type& t);

}  // namespace multippl
