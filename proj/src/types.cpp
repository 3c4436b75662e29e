#include "multippl/types.hpp"

#include <stdexcept>

namespace multippl {

bool compatible(const Type& a, const Type& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case TypeKind::Prod:
      return compatible(a.first(), b.first()) && compatible(a.second(), b.second());
    case TypeKind::List:
      if (!a.list_elem_known() || !b.list_elem_known()) return true;
      return compatible(a.first(), b.first());
    default:
      return true;
  }
}

bool operator==(const Type& a, const Type& b) {
  return a.kind == b.kind && a.arity == b.arity && a.args == b.args;
}

Type join(const Type& a, const Type& b) {
  switch (a.kind) {
    case TypeKind::Int:
      return Type::integer(a.arity == 0 || b.arity == 0 ? 0 : std::max(a.arity, b.arity));
    case TypeKind::Prod:
      return Type::prod(join(a.first(), b.first()), join(a.second(), b.second()));
    case TypeKind::List:
      if (!a.list_elem_known()) return b;
      if (!b.list_elem_known()) return a;
      return Type::list(join(a.first(), b.first()));
    default:
      return a;
  }
}

bool is_disc_type(const Type& t) {
  switch (t.kind) {
    case TypeKind::Unit:
    case TypeKind::Bool:
    case TypeKind::Int:
      return true;
    case TypeKind::Prod:
      return is_disc_type(t.first()) && is_disc_type(t.second());
    default:
      return false;
  }
}

bool convertible(const Type& disc, const Type& cont) {
  if (disc.kind != cont.kind) return false;
  switch (disc.kind) {
    case TypeKind::Unit:
    case TypeKind::Bool:
    case TypeKind::Int:
      return true;
    case TypeKind::Prod:
      return convertible(disc.first(), cont.first()) && convertible(disc.second(), cont.second());
    default:
      return false;
  }
}

Type to_cont(const Type& disc) {
  if (disc.kind == TypeKind::Int) return Type::integer();
  if (disc.kind == TypeKind::Prod) return Type::prod(to_cont(disc.first()), to_cont(disc.second()));
  return disc;
}

Type to_disc(const Type& cont) {
  if (cont.kind == TypeKind::Prod) return Type::prod(to_disc(cont.first()), to_disc(cont.second()));
  return cont;
}

int tuple_width(const Type& t) {
  int width = 1;
  const Type* cur = &t;
  while (cur->kind == TypeKind::Prod) {
    ++width;
    cur = &cur->second();
  }
  return width;
}

const Type& tuple_component(const Type& t, int k) {
  const int width = tuple_width(t);
  if (k < 0 || k >= width) throw std::out_of_range("tuple index out of range");
  const Type* cur = &t;
  for (int i = 0; i < k; ++i) cur = &cur->second();
  return k == width - 1 ? *cur : cur->first();
}

std::string to_string(const Type& t) {
  switch (t.kind) {
    case TypeKind::Unit:
      return "()";
    case TypeKind::Bool:
      return "Bool";
    case TypeKind::Real:
      return "Float";
    case TypeKind::Int:
      return t.arity > 0 ? "Int<" + std::to_string(t.arity) + ">" : "Int";
    case TypeKind::List:
      return t.list_elem_known() ? "List<" + to_string(t.first()) + ">" : "List<?>";
    case TypeKind::Prod: {
      std::string out = "(";
      const Type* cur = &t;
      while (cur->kind == TypeKind::Prod) {
        out += to_string(cur->first()) + ", ";
        cur = &cur->second();
      }
      return out + to_string(*cur) + ")";
    }
  }
  return "?";
}

}  // namespace multippl
