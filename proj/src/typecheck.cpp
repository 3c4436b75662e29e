#include "multippl/typecheck.hpp"

#include <algorithm>
#include <memory>
#include <string>
#include <utility>

namespace multippl {
namespace {

using Scope = std::vector<std::pair<std::string, Type>>;

const Type* lookup(const Scope& scope, const std::string& name) {
  for (auto it = scope.rbegin(); it != scope.rend(); ++it)
    if (it->first == name) return &it->second;
  return nullptr;
}

// Pushes a binding for the lifetime of the guard; `_` is never bound.
class Binding {
 public:
  Binding(Scope& scope, const std::string& name, Type type) : scope_(scope), active_(name != "_") {
    if (active_) scope_.emplace_back(name, std::move(type));
  }
  ~Binding() {
    if (active_) scope_.pop_back();
  }
  Binding(const Binding&) = delete;
  Binding& operator=(const Binding&) = delete;

 private:
  Scope& scope_;
  bool active_;
};

[[noreturn]] void mismatch(Span span, const std::string& expected, const Type& found) {
  throw TypeError(TypeErrorKind::TypeMismatch, span, "expected " + expected + ", found " + to_string(found));
}

void expect_type(const Expr& e, const Type& found, const Type& expected) {
  if (!compatible(found, expected)) mismatch(e.span, to_string(expected), found);
}

bool is_pure_cont(const Expr& e) {
  switch (e.kind) {
    case ExprKind::Var:
    case ExprKind::True:
    case ExprKind::False:
    case ExprKind::Unit:
    case ExprKind::RealLit:
    case ExprKind::IntLit:
    case ExprKind::Nil:
      return true;
    case ExprKind::And:
    case ExprKind::Or:
    case ExprKind::Not:
    case ExprKind::Eq:
    case ExprKind::Add:
    case ExprKind::Sub:
    case ExprKind::Neg:
    case ExprKind::Mul:
    case ExprKind::Le:
    case ExprKind::Lt:
    case ExprKind::Pair:
    case ExprKind::Fst:
    case ExprKind::Snd:
    case ExprKind::Index:
    case ExprKind::Push:
    case ExprKind::Head:
    case ExprKind::Tail:
      return std::all_of(e.kids.begin(), e.kids.end(), [](const ExprPtr& k) { return is_pure_cont(*k); });
    default:
      return false;
  }
}

bool is_pure_disc(const Expr& e) {
  switch (e.kind) {
    case ExprKind::Var:
    case ExprKind::True:
    case ExprKind::False:
    case ExprKind::Unit:
    case ExprKind::IntLit:
      return true;
    case ExprKind::Sample:
      return is_pure_cont(e.kid(0));
    case ExprKind::And:
    case ExprKind::Or:
    case ExprKind::Not:
    case ExprKind::Eq:
    case ExprKind::Pair:
    case ExprKind::Fst:
    case ExprKind::Snd:
    case ExprKind::Index:
      return std::all_of(e.kids.begin(), e.kids.end(), [](const ExprPtr& k) { return is_pure_disc(*k); });
    default:
      return false;
  }
}

void coerce_to_real(Expr& e) {
  if (e.kind != ExprKind::IntLit) return;
  e.kind = ExprKind::RealLit;
  e.real = static_cast<double>(e.integer);
  e.integer = 0;
  e.type = Type::real();
}

class Checker {
 public:
  explicit Checker(Program& p) : p_(p) {}

  Type run() {
    const auto& fns = p_.functions;
    for (std::size_t i = 0; i < fns.size(); ++i)
      for (std::size_t j = 0; j < i; ++j)
        if (fns[i].name == fns[j].name)
          throw TypeError(TypeErrorKind::TypeMismatch, fns[i].span, "duplicate function '" + fns[i].name + "'");
    has_boundary_.assign(fns.size(), false);
    for (std::size_t i = 0; i < fns.size(); ++i) check_function(i);
    current_fn_ = fns.size();
    gamma_.clear();
    delta_.clear();
    return check(p_.main, p_.main_lang);
  }

 private:
  Program& p_;
  std::vector<bool> has_boundary_;
  std::size_t current_fn_ = 0;
  Scope gamma_;  // Cont variables
  Scope delta_;  // Disc variables

  void check_function(std::size_t i) {
    FunctionDef& f = p_.functions[i];
    current_fn_ = i;
    gamma_.clear();
    delta_.clear();
    for (const auto& prm : f.params) {
      if (f.lang == Lang::Disc && !is_disc_type(prm.type))
        throw TypeError(TypeErrorKind::TypeMismatch, prm.span,
                        "parameter '" + prm.name + "' of an exact fn must have a discrete type, found " +
                            to_string(prm.type));
      (f.lang == Lang::Disc ? delta_ : gamma_).emplace_back(prm.name, prm.type);
    }
    const Type body = check(f.body, f.lang);
    expect_type(*f.body, body, f.ret);
    has_boundary_[i] = contains_boundary(*f.body);
  }

  Type check(ExprPtr& e, Lang lang) {
    Type t = lang == Lang::Cont ? cont(e) : disc(e);
    e->lang = lang;
    e->type = t;
    return t;
  }

  bool contains_boundary(const Expr& e) const {
    if (e.kind == ExprKind::Sample) return true;
    if (e.kind == ExprKind::Call && e.fn_index >= 0 && p_.functions[e.fn_index].lang == Lang::Disc &&
        has_boundary_[e.fn_index])
      return true;
    return std::any_of(e.kids.begin(), e.kids.end(), [&](const ExprPtr& k) { return contains_boundary(*k); });
  }

  // A Disc-if guard is a Cont guard when it is a pure Cont term over
  // Cont-bound variables only.
  bool is_cont_guard(const Expr& g) const {
    switch (g.kind) {
      case ExprKind::Var:
        return !lookup(delta_, g.name) && lookup(gamma_, g.name);
      case ExprKind::True:
      case ExprKind::False:
      case ExprKind::Unit:
      case ExprKind::RealLit:
      case ExprKind::IntLit:
        return true;
      case ExprKind::And:
      case ExprKind::Or:
      case ExprKind::Not:
      case ExprKind::Eq:
      case ExprKind::Add:
      case ExprKind::Sub:
      case ExprKind::Neg:
      case ExprKind::Mul:
      case ExprKind::Le:
      case ExprKind::Lt:
      case ExprKind::Pair:
      case ExprKind::Fst:
      case ExprKind::Snd:
      case ExprKind::Index:
        return std::all_of(g.kids.begin(), g.kids.end(), [&](const ExprPtr& k) { return is_cont_guard(*k); });
      default:
        return false;
    }
  }

  // A pure Cont real in parameter position.
  void real_param(ExprPtr& p) {
    Type t = check(p, Lang::Cont);
    if (p->kind == ExprKind::IntLit) {
      coerce_to_real(*p);
      t = Type::real();
    }
    expect_type(*p, t, Type::real());
    if (!is_pure_cont(*p))
      throw TypeError(TypeErrorKind::ImpureTerm, p->span, "distribution parameters must be pure");
  }

  Type numeric(Expr& e) {
    Type a = check(e.kids[0], Lang::Cont);
    Type b = check(e.kids[1], Lang::Cont);
    if (a.is(TypeKind::Real) && b.is(TypeKind::Int) && e.kids[1]->kind == ExprKind::IntLit) {
      coerce_to_real(*e.kids[1]);
      b = Type::real();
    } else if (a.is(TypeKind::Int) && b.is(TypeKind::Real) && e.kids[0]->kind == ExprKind::IntLit) {
      coerce_to_real(*e.kids[0]);
      a = Type::real();
    }
    if (!a.is(TypeKind::Int) && !a.is(TypeKind::Real)) mismatch(e.kids[0]->span, "a number", a);
    if (!compatible(a, b)) mismatch(e.kids[1]->span, to_string(a), b);
    return a.is(TypeKind::Real) ? Type::real() : Type::integer();
  }

  Type equality(Expr& e, Lang lang) {
    const Type a = check(e.kids[0], lang);
    const Type b = check(e.kids[1], lang);
    if (!a.is(TypeKind::Int) && !a.is(TypeKind::Bool)) mismatch(e.kids[0]->span, "Bool or Int", a);
    if (!compatible(a, b)) mismatch(e.kids[1]->span, to_string(a), b);
    return Type::boolean();
  }

  Type projection(Expr& e, Lang lang) {
    const Type t = check(e.kids[0], lang);
    if (!t.is(TypeKind::Prod)) mismatch(e.kids[0]->span, "a tuple", t);
    if (e.kind == ExprKind::Fst) return t.first();
    if (e.kind == ExprKind::Snd) return t.second();
    const int width = tuple_width(t);
    if (e.integer < 0 || e.integer >= width)
      throw TypeError(TypeErrorKind::TypeMismatch, e.span,
                      "index " + std::to_string(e.integer) + " out of range for " + to_string(t));
    e.width = width;
    return tuple_component(t, static_cast<int>(e.integer));
  }

  Type boolean_op(Expr& e, Lang lang) {
    for (auto& k : e.kids) expect_type(*k, check(k, lang), Type::boolean());
    return Type::boolean();
  }

  std::size_t resolve_call(const Expr& e) const {
    const auto& fns = p_.functions;
    for (std::size_t i = 0; i < fns.size(); ++i) {
      if (fns[i].name != e.name) continue;
      if (i >= current_fn_)
        throw TypeError(TypeErrorKind::RecursiveCall, e.span,
                        "call to '" + e.name + "' must refer to an earlier function");
      return i;
    }
    throw TypeError(TypeErrorKind::UnknownFunction, e.span, "unknown function '" + e.name + "'");
  }

  Type call(ExprPtr& e, Lang lang) {
    const std::size_t idx = resolve_call(*e);
    const FunctionDef& f = p_.functions[idx];
    if (f.lang != lang)
      throw TypeError(TypeErrorKind::TypeMismatch, e->span,
                      std::string(f.lang == Lang::Disc ? "exact" : "sample") + " fn '" + f.name +
                          "' cannot be called directly from " + (lang == Lang::Disc ? "exact" : "sample") +
                          " code");
    if (e->kids.size() != f.params.size())
      throw TypeError(TypeErrorKind::TypeMismatch, e->span,
                      "'" + f.name + "' expects " + std::to_string(f.params.size()) + " arguments, found " +
                          std::to_string(e->kids.size()));
    for (std::size_t i = 0; i < e->kids.size(); ++i) {
      ExprPtr& arg = e->kids[i];
      if (lang == Lang::Disc && arg->kind == ExprKind::Var && !lookup(delta_, arg->name) &&
          lookup(gamma_, arg->name))
        arg = make_expr(ExprKind::Sample, arg->span, {arg});
      Type t = check(arg, lang);
      if (f.params[i].type.is(TypeKind::Real) && arg->kind == ExprKind::IntLit) {
        coerce_to_real(*arg);
        t = Type::real();
      }
      expect_type(*arg, t, f.params[i].type);
    }
    e->fn_index = static_cast<int>(idx);
    return f.ret;
  }

  Type join_branches(const Expr& e, const Type& a, const Type& b) {
    if (!compatible(a, b)) mismatch(e.kids[2]->span, to_string(a), b);
    return join(a, b);
  }

  // Checks a while body. Variables rebound at the top of the body that were
  // bound before the loop are loop-carried and must keep their type.
  void loop_body(Expr& loop) {
    std::vector<std::pair<std::string, Type>> carried;
    std::vector<std::string> seen;
    std::vector<std::unique_ptr<Binding>> scope;
    ExprPtr* cur = &loop.kids[1];
    while ((*cur)->kind == ExprKind::Let) {
      Expr& let = **cur;
      Type value = check(let.kids[0], Lang::Cont);
      const bool local = std::find(seen.begin(), seen.end(), let.name) != seen.end();
      if (const Type* outer = local ? nullptr : lookup(gamma_, let.name)) carried.emplace_back(let.name, *outer);
      for (const auto& [name, outer] : carried)
        if (name == let.name && !compatible(outer, value))
          throw TypeError(TypeErrorKind::TypeMismatch, let.span,
                          "loop-carried variable '" + name + "' changes type from " + to_string(outer) + " to " +
                              to_string(value));
      seen.push_back(let.name);
      scope.push_back(std::make_unique<Binding>(gamma_, let.name, std::move(value)));
      cur = &let.kids[1];
    }
    const Type tail = check(*cur, Lang::Cont);
    for (ExprPtr* p = &loop.kids[1]; (*p)->kind == ExprKind::Let; p = &(*p)->kids[1]) {
      (*p)->lang = Lang::Cont;
      (*p)->type = tail;
    }
    while (!scope.empty()) scope.pop_back();
    loop.carried.clear();
    for (const auto& c : carried) loop.carried.push_back(c.first);
  }

  Type cont(ExprPtr& e) {
    Expr& x = *e;
    switch (x.kind) {
      case ExprKind::Var: {
        if (const Type* t = lookup(gamma_, x.name)) return *t;
        if (const Type* t = lookup(delta_, x.name)) {
          ExprPtr var = e;
          var->lang = Lang::Disc;
          var->type = *t;
          e = make_expr(ExprKind::Exact, var->span, {var});
          return to_cont(*t);
        }
        throw TypeError(TypeErrorKind::UnboundVariable, x.span, "unbound variable '" + x.name + "'");
      }
      case ExprKind::True:
      case ExprKind::False:
        return Type::boolean();
      case ExprKind::Unit:
        return Type::unit();
      case ExprKind::RealLit:
        return Type::real();
      case ExprKind::IntLit:
        return Type::integer();
      case ExprKind::And:
      case ExprKind::Or:
      case ExprKind::Not:
        return boolean_op(x, Lang::Cont);
      case ExprKind::Eq:
        return equality(x, Lang::Cont);
      case ExprKind::Add:
      case ExprKind::Sub:
      case ExprKind::Mul:
        return numeric(x);
      case ExprKind::Le:
      case ExprKind::Lt:
        numeric(x);
        return Type::boolean();
      case ExprKind::Neg: {
        const Type t = check(x.kids[0], Lang::Cont);
        if (!t.is(TypeKind::Int) && !t.is(TypeKind::Real)) mismatch(x.kids[0]->span, "a number", t);
        return t;
      }
      case ExprKind::Pair: {
        Type a = check(x.kids[0], Lang::Cont);
        Type b = check(x.kids[1], Lang::Cont);
        return Type::prod(std::move(a), std::move(b));
      }
      case ExprKind::Fst:
      case ExprKind::Snd:
      case ExprKind::Index:
        return projection(x, Lang::Cont);
      case ExprKind::Ret:
        return check(x.kids[0], Lang::Cont);
      case ExprKind::Let: {
        Type value = check(x.kids[0], Lang::Cont);
        Binding bind(gamma_, x.name, std::move(value));
        return check(x.kids[1], Lang::Cont);
      }
      case ExprKind::Ite: {
        expect_type(*x.kids[0], check(x.kids[0], Lang::Cont), Type::boolean());
        x.guard_lang = Lang::Cont;
        const Type a = check(x.kids[1], Lang::Cont);
        const Type b = check(x.kids[2], Lang::Cont);
        return join_branches(x, a, b);
      }
      case ExprKind::Flip:
        real_param(x.kids[0]);
        return Type::boolean();
      case ExprKind::Unif:
      case ExprKind::Pois:
        for (auto& k : x.kids) real_param(k);
        return Type::real();
      case ExprKind::Discrete:
        for (auto& k : x.kids) real_param(k);
        return Type::integer();
      case ExprKind::Obs: {
        const Type dist = check(x.kids[1], Lang::Cont);
        Type observed = check(x.kids[0], Lang::Cont);
        if (dist.is(TypeKind::Real) && x.kids[0]->kind == ExprKind::IntLit) {
          coerce_to_real(*x.kids[0]);
          observed = Type::real();
        }
        expect_type(*x.kids[0], observed, dist);
        return Type::unit();
      }
      case ExprKind::Exact:
        return to_cont(check(x.kids[0], Lang::Disc));
      case ExprKind::While: {
        expect_type(*x.kids[0], check(x.kids[0], Lang::Cont), Type::boolean());
        loop_body(x);
        return Type::unit();
      }
      case ExprKind::Nil:
        return Type::list();
      case ExprKind::Push: {
        const Type l = check(x.kids[0], Lang::Cont);
        const Type item = check(x.kids[1], Lang::Cont);
        if (!l.is(TypeKind::List)) mismatch(x.kids[0]->span, "a list", l);
        if (l.list_elem_known() && !compatible(l.first(), item)) mismatch(x.kids[1]->span, to_string(l.first()), item);
        return Type::list(l.list_elem_known() ? join(l.first(), item) : item);
      }
      case ExprKind::Head:
      case ExprKind::Tail: {
        const Type l = check(x.kids[0], Lang::Cont);
        if (!l.list_elem_known()) mismatch(x.kids[0]->span, "a list with known element type", l);
        return x.kind == ExprKind::Head ? l.first() : l;
      }
      case ExprKind::Call:
        return call(e, Lang::Cont);
      case ExprKind::Sample:
      case ExprKind::Observe:
        throw TypeError(TypeErrorKind::TypeMismatch, x.span,
                        std::string("'") + to_string(x.kind) + "' is only available in exact code");
    }
    throw TypeError(TypeErrorKind::TypeMismatch, x.span, "unsupported expression");
  }

  Type disc(ExprPtr& e) {
    Expr& x = *e;
    switch (x.kind) {
      case ExprKind::Var: {
        if (const Type* t = lookup(delta_, x.name)) return *t;
        if (lookup(gamma_, x.name))
          throw TypeError(TypeErrorKind::UnboundVariable, x.span,
                          "'" + x.name + "' is a sample variable; use sample(" + x.name + ") in exact code");
        throw TypeError(TypeErrorKind::UnboundVariable, x.span, "unbound variable '" + x.name + "'");
      }
      case ExprKind::True:
      case ExprKind::False:
        return Type::boolean();
      case ExprKind::Unit:
        return Type::unit();
      case ExprKind::IntLit:
        if (x.integer < 0)
          throw TypeError(TypeErrorKind::TypeMismatch, x.span, "negative integers have no exact encoding");
        return Type::integer();
      case ExprKind::And:
      case ExprKind::Or:
      case ExprKind::Not:
        return boolean_op(x, Lang::Disc);
      case ExprKind::Eq:
        return equality(x, Lang::Disc);
      case ExprKind::Pair: {
        Type a = check(x.kids[0], Lang::Disc);
        Type b = check(x.kids[1], Lang::Disc);
        return Type::prod(std::move(a), std::move(b));
      }
      case ExprKind::Fst:
      case ExprKind::Snd:
      case ExprKind::Index:
        return projection(x, Lang::Disc);
      case ExprKind::Ret:
        return check(x.kids[0], Lang::Disc);
      case ExprKind::Let: {
        Type value = check(x.kids[0], Lang::Disc);
        Binding bind(delta_, x.name, std::move(value));
        return check(x.kids[1], Lang::Disc);
      }
      case ExprKind::Ite: {
        if (is_cont_guard(x.kid(0))) {
          x.guard_lang = Lang::Cont;
          expect_type(*x.kids[0], check(x.kids[0], Lang::Cont), Type::boolean());
          if (!is_pure_cont(x.kid(0)))
            throw TypeError(TypeErrorKind::ImpureTerm, x.kids[0]->span, "guard must be pure");
        } else {
          x.guard_lang = Lang::Disc;
          expect_type(*x.kids[0], check(x.kids[0], Lang::Disc), Type::boolean());
        }
        const Type a = check(x.kids[1], Lang::Disc);
        const Type b = check(x.kids[2], Lang::Disc);
        if (x.guard_lang == Lang::Disc) {
          for (int i = 1; i <= 2; ++i)
            if (contains_boundary(x.kid(i)))
              throw TypeError(TypeErrorKind::BoundaryInPureIteBranch, x.kids[i]->span,
                              "branches of an if with an exact guard must be boundary-free");
        }
        return join_branches(x, a, b);
      }
      case ExprKind::Flip:
        real_param(x.kids[0]);
        return Type::boolean();
      case ExprKind::Discrete:
        for (auto& k : x.kids) real_param(k);
        return Type::integer(static_cast<int>(x.kids.size()));
      case ExprKind::Observe: {
        expect_type(*x.kids[0], check(x.kids[0], Lang::Disc), Type::boolean());
        if (!is_pure_disc(x.kid(0)))
          throw TypeError(TypeErrorKind::ImpureTerm, x.kids[0]->span, "observed condition must be pure");
        return Type::unit();
      }
      case ExprKind::Sample: {
        const Type t = check(x.kids[0], Lang::Cont);
        if (!is_disc_type(t))
          throw TypeError(TypeErrorKind::NonConvertibleBoundary, x.span,
                          "a value of type " + to_string(t) + " cannot cross into exact code");
        return to_disc(t);
      }
      case ExprKind::Call:
        return call(e, Lang::Disc);
      default:
        throw TypeError(TypeErrorKind::TypeMismatch, x.span,
                        std::string("'") + to_string(x.kind) + "' is not available in exact code");
    }
  }
};

}  // namespace

TypedProgram check(const Program& p) {
  TypedProgram out{clone(p), Type::unit()};
  Checker checker(out.program);
  out.main_type = checker.run();
  return out;
}

}  // namespace multippl
