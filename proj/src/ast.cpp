#include "multippl/ast.hpp"

namespace multippl {

const char* to_string(Lang lang) { return lang == Lang::Disc ? "exact" : "sample"; }

const char* to_string(ExprKind kind) {
  switch (kind) {
    case ExprKind::Var: return "Var";
    case ExprKind::True: return "True";
    case ExprKind::False: return "False";
    case ExprKind::Unit: return "Unit";
    case ExprKind::RealLit: return "RealLit";
    case ExprKind::IntLit: return "IntLit";
    case ExprKind::And: return "And";
    case ExprKind::Or: return "Or";
    case ExprKind::Not: return "Not";
    case ExprKind::Eq: return "Eq";
    case ExprKind::Add: return "Add";
    case ExprKind::Sub: return "Sub";
    case ExprKind::Neg: return "Neg";
    case ExprKind::Mul: return "Mul";
    case ExprKind::Le: return "Le";
    case ExprKind::Lt: return "Lt";
    case ExprKind::Pair: return "Pair";
    case ExprKind::Fst: return "Fst";
    case ExprKind::Snd: return "Snd";
    case ExprKind::Index: return "Index";
    case ExprKind::Ret: return "Ret";
    case ExprKind::Let: return "Let";
    case ExprKind::Ite: return "Ite";
    case ExprKind::Flip: return "Flip";
    case ExprKind::Unif: return "Unif";
    case ExprKind::Pois: return "Pois";
    case ExprKind::Discrete: return "Discrete";
    case ExprKind::Observe: return "Observe";
    case ExprKind::Obs: return "Obs";
    case ExprKind::Sample: return "Sample";
    case ExprKind::Exact: return "Exact";
    case ExprKind::While: return "While";
    case ExprKind::Nil: return "Nil";
    case ExprKind::Push: return "Push";
    case ExprKind::Head: return "Head";
    case ExprKind::Tail: return "Tail";
    case ExprKind::Call: return "Call";
  }
  return "?";
}

ExprPtr make_expr(ExprKind kind, Span span, std::vector<ExprPtr> kids) {
  auto e = std::make_shared<Expr>();
  e->kind = kind;
  e->span = span;
  e->kids = std::move(kids);
  return e;
}

ExprPtr make_var(std::string name, Span span) {
  auto e = make_expr(ExprKind::Var, span);
  e->name = std::move(name);
  return e;
}

ExprPtr make_let(std::string name, ExprPtr value, ExprPtr body, Span span) {
  auto e = make_expr(ExprKind::Let, span, {std::move(value), std::move(body)});
  e->name = std::move(name);
  return e;
}

ExprPtr make_real(double value, Span span) {
  auto e = make_expr(ExprKind::RealLit, span);
  e->real = value;
  return e;
}

ExprPtr make_int(long long value, Span span) {
  auto e = make_expr(ExprKind::IntLit, span);
  e->integer = value;
  return e;
}

ExprPtr clone(const Expr& e) {
  auto out = std::make_shared<Expr>(e);
  for (auto& k : out->kids) k = clone(*k);
  return out;
}

bool structurally_equal(const Expr& a, const Expr& b) {
  if (a.kind != b.kind || a.name != b.name || a.kids.size() != b.kids.size()) return false;
  if (a.kind == ExprKind::RealLit && a.real != b.real) return false;
  if ((a.kind == ExprKind::IntLit || a.kind == ExprKind::Index) && a.integer != b.integer) return false;
  for (std::size_t i = 0; i < a.kids.size(); ++i)
    if (!structurally_equal(*a.kids[i], *b.kids[i])) return false;
  return true;
}

Program clone(const Program& p) {
  Program out = p;
  for (auto& f : out.functions) f.body = clone(*f.body);
  out.main = clone(*p.main);
  return out;
}

bool structurally_equal(const Program& a, const Program& b) {
  if (a.functions.size() != b.functions.size() || a.main_lang != b.main_lang) return false;
  for (std::size_t i = 0; i < a.functions.size(); ++i) {
    const auto& f = a.functions[i];
    const auto& g = b.functions[i];
    if (f.name != g.name || f.lang != g.lang || !(f.ret == g.ret) || f.params.size() != g.params.size())
      return false;
    for (std::size_t j = 0; j < f.params.size(); ++j)
      if (f.params[j].name != g.params[j].name || !(f.params[j].type == g.params[j].type)) return false;
    if (!structurally_equal(*f.body, *g.body)) return false;
  }
  return structurally_equal(*a.main, *b.main);
}

}  // namespace multippl
