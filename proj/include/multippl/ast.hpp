#pragma once

#include <memory>
#include <string>
#include <vector>

#include "multippl/errors.hpp"
#include "multippl/types.hpp"

namespace multippl {

/// The two sublanguages: Disc (exact, compiled to BDDs) and Cont (sampled).
enum class Lang { Disc, Cont };

const char* to_string(Lang lang);

/// Node kinds shared by both sublanguages. Which language a node belongs to
/// is decided by its syntactic position and recorded by the checker.
///
/// Children layout:
///   Var                   name
///   RealLit / IntLit      real / integer
///   And Or Eq Add Sub Mul Le Lt Pair Push Unif   [lhs, rhs]
///   Not Neg Fst Snd Ret Head Tail Flip Pois Observe Sample Exact   [arg]
///   Index                 [tuple], integer = position
///   Let                   name, [value, body]
///   Ite                   [guard, then, else]
///   Discrete              [p0, ..., pk]
///   Obs                   [observed, distribution]   (distribution is Flip/Unif/Pois)
///   While                 [cond, body]
///   Call                  name, [args...]
enum class ExprKind {
  Var,
  True,
  False,
  Unit,
  RealLit,
  IntLit,
  And,
  Or,
  Not,
  Eq,
  Add,
  Sub,
  Neg,
  Mul,
  Le,
  Lt,
  Pair,
  Fst,
  Snd,
  Index,
  Ret,
  Let,
  Ite,
  Flip,
  Unif,
  Pois,
  Discrete,
  Observe,
  Obs,
  Sample,
  Exact,
  While,
  Nil,
  Push,
  Head,
  Tail,
  Call,
};

const char* to_string(ExprKind kind);

struct Expr;
using ExprPtr = std::shared_ptr<Expr>;

struct Expr {
  ExprKind kind = ExprKind::Unit;
  Span span;
  std::string name;
  double real = 0.0;
  long long integer = 0;
  std::vector<ExprPtr> kids;

  // Checker annotations; meaningless on a freshly parsed tree.
  Lang lang = Lang::Cont;
  Type type;
  Lang guard_lang = Lang::Cont;
  int width = 0;
  int fn_index = -1;
  std::vector<std::string> carried;

  const Expr& kid(std::size_t i) const { return *kids.at(i); }
};

ExprPtr make_expr(ExprKind kind, Span span, std::vector<ExprPtr> kids = {});
ExprPtr make_var(std::string name, Span span);
ExprPtr make_let(std::string name, ExprPtr value, ExprPtr body, Span span);
ExprPtr make_real(double value, Span span);
ExprPtr make_int(long long value, Span span);

/// Deep copy, annotations included.
ExprPtr clone(const Expr& e);

/// Equality of shape and payload; spans and annotations are ignored.
bool structurally_equal(const Expr& a, const Expr& b);

struct Param {
  std::string name;
  Type type;
  Span span;
};

struct FunctionDef {
  std::string name;
  Lang lang = Lang::Disc;
  std::vector<Param> params;
  Type ret;
  ExprPtr body;
  Span span;
};

struct Program {
  std::vector<FunctionDef> functions;
  Lang main_lang = Lang::Cont;
  ExprPtr main;
};

Program clone(const Program& p);
bool structurally_equal(const Program& a, const Program& b);

}  // namespace multippl
