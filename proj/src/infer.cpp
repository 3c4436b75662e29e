#include "multippl/infer.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <thread>

#include "multippl/dist.hpp"
#include "multippl/errors.hpp"

namespace multippl {

NodeId ExactState::flip(double p) {
  const auto [v, lit] = manager.fresh_var();
  if (p >= 0.0 && p <= 1.0) {
    weights.set(v, p, 1.0 - p);
  } else {
    weights.set(v, 0.0, 1.0);
  }
  return lit;
}

double ExactState::conditional(NodeId f) {
  const double total = mass(accepting);
  if (total <= 0.0) return 0.0;
  return mass(manager.conj(accepting, f)) / total;
}

namespace {

template <typename V>
using Scope = std::vector<std::pair<const std::string*, V>>;

template <typename V>
V& find(Scope<V>& scope, const std::string& name) {
  for (auto it = scope.rbegin(); it != scope.rend(); ++it)
    if (*it->first == name) return it->second;
  throw std::logic_error("unbound variable '" + name + "' at run time");
}

struct Env {
  Scope<Value> cont;
  Scope<SymValue> disc;
};

class Evaluator {
 public:
  Evaluator(const Program& prog, const RunConfig& cfg)
      : prog_(prog), rng_(cfg.seed, cfg.stream), fuel_(cfg.fuel), st_(cfg.var_capacity), inspect_(cfg.inspect) {}

  RunResult run() {
    RunResult out;
    if (prog_.main_lang == Lang::Cont) {
      out.value = cont(*prog_.main);
    } else {
      const SymValue result = disc(*prog_.main);
      std::vector<double> features;
      exact_features(result, features);
      out.exact_features = std::move(features);
      out.value = boundary_exact(result);
    }
    out.weight = weight_;
    return out;
  }

 private:
  const Program& prog_;
  Rng rng_;
  std::uint64_t fuel_;
  ExactState st_;
  double weight_ = 1.0;
  Env env_;
  std::vector<NodeId> deferred_;  // accepting contributions of open Disc-if branches
  std::function<void(ExactState&, const SymValue&)> inspect_;

  BddManager& bdd() { return st_.manager; }

  // ---- shared helpers ------------------------------------------------------

  // Conditions the space on f, scoring the conditional probability of f.
  // Inside a Disc-guarded if the condition is collected instead.
  void accept(NodeId f) {
    if (f == kTrue) return;
    if (!deferred_.empty()) {
      deferred_.back() = bdd().conj(deferred_.back(), f);
      return;
    }
    const double before = st_.mass(st_.accepting);
    const NodeId next = bdd().conj(st_.accepting, f);
    weight_ = before > 0.0 ? weight_ * (st_.mass(next) / before) : 0.0;
    st_.accepting = next;
  }

  SymValue lift(const Value& v, Span span) {
    switch (v.kind()) {
      case Value::Kind::Unit:
        return SymValue::unit();
      case Value::Kind::Bool:
        return SymValue::boolean(v.as_bool() ? kTrue : kFalse);
      case Value::Kind::Int:
        return int_constant(v.as_int(), span);
      case Value::Kind::Pair:
        return SymValue::pair(lift(v.first(), span), lift(v.second(), span));
      default:
        throw EvalError(EvalErrorKind::ConversionUnsupported,
                        "line " + std::to_string(span.line) + ": value " + to_string(v) +
                            " cannot cross into exact code");
    }
  }

  static SymValue int_constant(long long n, Span span) {
    if (n < 0)
      throw EvalError(EvalErrorKind::ConversionUnsupported,
                      "line " + std::to_string(span.line) + ": negative integer " + std::to_string(n) +
                          " has no one-hot encoding");
    std::vector<NodeId> bits(static_cast<std::size_t>(n) + 1, kFalse);
    bits.back() = kTrue;
    return SymValue::integer(std::move(bits));
  }

  static void pad(std::vector<NodeId>& bits, std::size_t n) {
    if (bits.size() < n) bits.resize(n, kFalse);
  }

  SymValue merge(NodeId g, const SymValue& a, const SymValue& b) {
    switch (a.kind) {
      case SymValue::Kind::Unit:
        return a;
      case SymValue::Kind::Bool:
        return SymValue::boolean(bdd().ite(g, a.bit, b.bit));
      case SymValue::Kind::Int: {
        auto x = a.onehot;
        auto y = b.onehot;
        const std::size_t n = std::max(x.size(), y.size());
        pad(x, n);
        pad(y, n);
        std::vector<NodeId> bits(n);
        for (std::size_t i = 0; i < n; ++i) bits[i] = bdd().ite(g, x[i], y[i]);
        return SymValue::integer(std::move(bits));
      }
      case SymValue::Kind::Pair:
        return SymValue::pair(merge(g, a.parts[0], b.parts[0]), merge(g, a.parts[1], b.parts[1]));
    }
    return a;
  }

  NodeId equal(const SymValue& a, const SymValue& b) {
    if (a.kind == SymValue::Kind::Bool) return bdd().negate(bdd().apply(BoolOp::Xor, a.bit, b.bit));
    auto x = a.onehot;
    auto y = b.onehot;
    const std::size_t n = std::max(x.size(), y.size());
    pad(x, n);
    pad(y, n);
    NodeId any = kFalse;
    for (std::size_t i = 0; i < n; ++i) any = bdd().disj(any, bdd().conj(x[i], y[i]));
    return any;
  }

  static const SymValue& sym_component(const SymValue& v, int k, int width) {
    const SymValue* cur = &v;
    for (int i = 0; i < k; ++i) cur = &cur->parts[1];
    return k == width - 1 ? *cur : cur->parts[0];
  }

  static Value default_value(const SymValue& x) {
    switch (x.kind) {
      case SymValue::Kind::Unit:
        return Value::unit();
      case SymValue::Kind::Bool:
        return Value::boolean(false);
      case SymValue::Kind::Int:
        return Value::integer(0);
      case SymValue::Kind::Pair:
        return Value::pair(default_value(x.parts[0]), default_value(x.parts[1]));
    }
    return Value::unit();
  }

  // Draws x from the law of X given the accepting formula, one component at
  // a time, and conditions on X = x. Emits no score.
  Value boundary_exact(const SymValue& x) {
    if (st_.mass(st_.accepting) <= 0.0) {
      weight_ = 0.0;
      return default_value(x);
    }
    return draw(x);
  }

  Value draw(const SymValue& x) {
    switch (x.kind) {
      case SymValue::Kind::Unit:
        return Value::unit();
      case SymValue::Kind::Bool: {
        const double p = st_.conditional(x.bit);
        const bool b = rng_.uniform() < p;
        st_.accepting = bdd().conj(st_.accepting, b ? x.bit : bdd().negate(x.bit));
        return Value::boolean(b);
      }
      case SymValue::Kind::Int: {
        std::vector<double> masses(x.onehot.size());
        for (std::size_t i = 0; i < masses.size(); ++i)
          masses[i] = st_.mass(bdd().conj(st_.accepting, x.onehot[i]));
        const int j = draw_discrete(masses, rng_);
        st_.accepting = bdd().conj(st_.accepting, x.onehot[static_cast<std::size_t>(j)]);
        return Value::integer(j);
      }
      case SymValue::Kind::Pair: {
        Value a = draw(x.parts[0]);
        Value b = draw(x.parts[1]);
        return Value::pair(std::move(a), std::move(b));
      }
    }
    return Value::unit();
  }

  void exact_features(const SymValue& x, std::vector<double>& out) {
    switch (x.kind) {
      case SymValue::Kind::Unit:
        return;
      case SymValue::Kind::Bool:
        out.push_back(st_.conditional(x.bit));
        return;
      case SymValue::Kind::Int: {
        double mean = 0.0;
        for (std::size_t i = 0; i < x.onehot.size(); ++i)
          mean += static_cast<double>(i) * st_.conditional(x.onehot[i]);
        out.push_back(mean);
        return;
      }
      case SymValue::Kind::Pair:
        exact_features(x.parts[0], out);
        exact_features(x.parts[1], out);
        return;
    }
  }

  std::vector<double> reals(const std::vector<ExprPtr>& kids) {
    std::vector<double> out;
    out.reserve(kids.size());
    for (const auto& k : kids) out.push_back(cont(*k).as_real());
    return out;
  }

  // Evaluates a call in a fresh environment holding only the parameters.
  template <typename Body>
  auto call(const Expr& e, Body&& body) {
    const FunctionDef& f = prog_.functions.at(static_cast<std::size_t>(e.fn_index));
    Env callee;
    for (std::size_t i = 0; i < e.kids.size(); ++i) {
      if (f.lang == Lang::Disc) {
        callee.disc.emplace_back(&f.params[i].name, disc(e.kid(i)));
      } else {
        callee.cont.emplace_back(&f.params[i].name, cont(e.kid(i)));
      }
    }
    std::swap(env_, callee);
    struct Restore {
      Env& env;
      Env& saved;
      ~Restore() { std::swap(env, saved); }
    } restore{env_, callee};
    return body(*f.body);
  }

  // ---- Disc ----------------------------------------------------------------

  SymValue disc(const Expr& e) {
    if (!inspect_) return disc_node(e);
    SymValue out = disc_node(e);
    inspect_(st_, out);
    return out;
  }

  SymValue disc_node(const Expr& e) {
    switch (e.kind) {
      case ExprKind::Var:
        return find(env_.disc, e.name);
      case ExprKind::True:
        return SymValue::boolean(kTrue);
      case ExprKind::False:
        return SymValue::boolean(kFalse);
      case ExprKind::Unit:
        return SymValue::unit();
      case ExprKind::IntLit:
        return int_constant(e.integer, e.span);
      case ExprKind::And:
      case ExprKind::Or: {
        const NodeId a = disc(e.kid(0)).bit;
        const NodeId b = disc(e.kid(1)).bit;
        return SymValue::boolean(e.kind == ExprKind::And ? bdd().conj(a, b) : bdd().disj(a, b));
      }
      case ExprKind::Not:
        return SymValue::boolean(bdd().negate(disc(e.kid(0)).bit));
      case ExprKind::Eq: {
        const SymValue a = disc(e.kid(0));
        const SymValue b = disc(e.kid(1));
        return SymValue::boolean(equal(a, b));
      }
      case ExprKind::Pair: {
        SymValue a = disc(e.kid(0));
        SymValue b = disc(e.kid(1));
        return SymValue::pair(std::move(a), std::move(b));
      }
      case ExprKind::Fst:
        return disc(e.kid(0)).parts[0];
      case ExprKind::Snd:
        return disc(e.kid(0)).parts[1];
      case ExprKind::Index: {
        const SymValue t = disc(e.kid(0));
        return sym_component(t, static_cast<int>(e.integer), e.width);
      }
      case ExprKind::Ret:
        return disc(e.kid(0));
      case ExprKind::Let: {
        SymValue v = disc(e.kid(0));
        if (e.name == "_") return disc(e.kid(1));
        env_.disc.emplace_back(&e.name, std::move(v));
        SymValue out = disc(e.kid(1));
        env_.disc.pop_back();
        return out;
      }
      case ExprKind::Ite:
        return disc_ite(e);
      case ExprKind::Flip:
        return SymValue::boolean(st_.flip(cont(e.kid(0)).as_real()));
      case ExprKind::Discrete:
        return disc_discrete(reals(e.kids));
      case ExprKind::Observe:
        accept(disc(e.kid(0)).bit);
        return SymValue::unit();
      case ExprKind::Sample:
        return lift(cont(e.kid(0)), e.span);
      case ExprKind::Call:
        return call(e, [this](const Expr& body) { return disc(body); });
      default:
        throw std::logic_error(std::string("unexpected ") + to_string(e.kind) + " in exact code");
    }
  }

  SymValue disc_ite(const Expr& e) {
    if (e.guard_lang == Lang::Cont) return disc(cont(e.kid(0)).as_bool() ? e.kid(1) : e.kid(2));
    const NodeId g = disc(e.kid(0)).bit;
    if (g == kTrue) return disc(e.kid(1));
    if (g == kFalse) return disc(e.kid(2));
    deferred_.push_back(kTrue);
    const SymValue thn = disc(e.kid(1));
    const NodeId thn_accept = deferred_.back();
    deferred_.back() = kTrue;
    const SymValue els = disc(e.kid(2));
    const NodeId els_accept = deferred_.back();
    deferred_.pop_back();
    SymValue out = merge(g, thn, els);
    accept(bdd().ite(g, thn_accept, els_accept));
    return out;
  }

  // Chain-rule one-hot encoding: component i holds when no earlier component
  // does and a fresh flip with the conditional probability of i succeeds.
  SymValue disc_discrete(const std::vector<double>& weights) {
    const auto probs = normalize_categorical(weights);
    const std::size_t k = probs.size();
    std::vector<double> suffix(k + 1, 0.0);
    for (std::size_t i = k; i-- > 0;) suffix[i] = suffix[i + 1] + probs[i];
    std::vector<NodeId> bits(k);
    NodeId none_before = kTrue;
    for (std::size_t i = 0; i + 1 < k; ++i) {
      const double q = suffix[i] > 0.0 ? std::clamp(probs[i] / suffix[i], 0.0, 1.0) : 0.0;
      const NodeId lit = st_.flip(q);
      bits[i] = bdd().conj(none_before, lit);
      none_before = bdd().conj(none_before, bdd().negate(lit));
    }
    bits[k - 1] = none_before;
    return SymValue::integer(std::move(bits));
  }

  // ---- Cont ----------------------------------------------------------------

  Value arith(const Expr& e) {
    const Value a = cont(e.kid(0));
    const Value b = cont(e.kid(1));
    if (a.kind() == Value::Kind::Int) {
      const long long x = a.as_int();
      const long long y = b.as_int();
      switch (e.kind) {
        case ExprKind::Add: return Value::integer(x + y);
        case ExprKind::Sub: return Value::integer(x - y);
        case ExprKind::Mul: return Value::integer(x * y);
        case ExprKind::Le: return Value::boolean(x <= y);
        default: return Value::boolean(x < y);
      }
    }
    const double x = a.as_real();
    const double y = b.as_real();
    switch (e.kind) {
      case ExprKind::Add: return Value::real(x + y);
      case ExprKind::Sub: return Value::real(x - y);
      case ExprKind::Mul: return Value::real(x * y);
      case ExprKind::Le: return Value::boolean(x <= y);
      default: return Value::boolean(x < y);
    }
  }

  double score(const Expr& dist, const Value& observed) {
    switch (dist.kind) {
      case ExprKind::Flip:
        return score_flip(cont(dist.kid(0)).as_real(), observed.as_bool());
      case ExprKind::Unif: {
        const auto ab = reals(dist.kids);
        return score_unif(ab[0], ab[1], observed.as_real());
      }
      default:
        return score_pois(cont(dist.kid(0)).as_real(), observed.as_real());
    }
  }

  Value loop(const Expr& e) {
    const Expr& body = e.kid(1);
    while (cont(e.kid(0)).as_bool()) {
      if (fuel_ == 0) throw EvalError(EvalErrorKind::FuelExhausted, "loop iteration budget exhausted");
      --fuel_;
      const std::size_t mark = env_.cont.size();
      const Expr* cur = &body;
      for (; cur->kind == ExprKind::Let; cur = &cur->kid(1)) {
        Value v = cont(cur->kid(0));
        if (cur->name != "_") env_.cont.emplace_back(&cur->name, std::move(v));
      }
      cont(*cur);
      std::vector<Value> updated;
      updated.reserve(e.carried.size());
      for (const auto& name : e.carried) updated.push_back(find(env_.cont, name));
      env_.cont.resize(mark);
      for (std::size_t i = 0; i < e.carried.size(); ++i) find(env_.cont, e.carried[i]) = std::move(updated[i]);
    }
    return Value::unit();
  }

  Value cont(const Expr& e) {
    switch (e.kind) {
      case ExprKind::Var:
        return find(env_.cont, e.name);
      case ExprKind::True:
        return Value::boolean(true);
      case ExprKind::False:
        return Value::boolean(false);
      case ExprKind::Unit:
        return Value::unit();
      case ExprKind::RealLit:
        return Value::real(e.real);
      case ExprKind::IntLit:
        return Value::integer(e.integer);
      case ExprKind::And: {
        const bool a = cont(e.kid(0)).as_bool();
        const bool b = cont(e.kid(1)).as_bool();
        return Value::boolean(a && b);
      }
      case ExprKind::Or: {
        const bool a = cont(e.kid(0)).as_bool();
        const bool b = cont(e.kid(1)).as_bool();
        return Value::boolean(a || b);
      }
      case ExprKind::Not:
        return Value::boolean(!cont(e.kid(0)).as_bool());
      case ExprKind::Eq: {
        const Value a = cont(e.kid(0));
        const Value b = cont(e.kid(1));
        return Value::boolean(a == b);
      }
      case ExprKind::Add:
      case ExprKind::Sub:
      case ExprKind::Mul:
      case ExprKind::Le:
      case ExprKind::Lt:
        return arith(e);
      case ExprKind::Neg: {
        const Value a = cont(e.kid(0));
        return a.kind() == Value::Kind::Int ? Value::integer(-a.as_int()) : Value::real(-a.as_real());
      }
      case ExprKind::Pair: {
        Value a = cont(e.kid(0));
        Value b = cont(e.kid(1));
        return Value::pair(std::move(a), std::move(b));
      }
      case ExprKind::Fst:
        return cont(e.kid(0)).first();
      case ExprKind::Snd:
        return cont(e.kid(0)).second();
      case ExprKind::Index:
        return cont(e.kid(0)).component(static_cast<int>(e.integer), e.width);
      case ExprKind::Ret:
        return cont(e.kid(0));
      case ExprKind::Let: {
        Value v = cont(e.kid(0));
        if (e.name == "_") return cont(e.kid(1));
        env_.cont.emplace_back(&e.name, std::move(v));
        Value out = cont(e.kid(1));
        env_.cont.pop_back();
        return out;
      }
      case ExprKind::Ite:
        return cont(cont(e.kid(0)).as_bool() ? e.kid(1) : e.kid(2));
      case ExprKind::Flip:
        return Value::boolean(draw_flip(cont(e.kid(0)).as_real(), rng_));
      case ExprKind::Unif: {
        const auto ab = reals(e.kids);
        return Value::real(draw_unif(ab[0], ab[1], rng_));
      }
      case ExprKind::Pois:
        return Value::real(draw_pois(cont(e.kid(0)).as_real(), rng_));
      case ExprKind::Discrete:
        return Value::integer(draw_discrete(reals(e.kids), rng_));
      case ExprKind::Obs: {
        const Value observed = cont(e.kid(0));
        weight_ *= score(e.kid(1), observed);
        return Value::unit();
      }
      case ExprKind::Exact:
        return boundary_exact(disc(e.kid(0)));
      case ExprKind::While:
        return loop(e);
      case ExprKind::Nil:
        return Value::list({});
      case ExprKind::Push: {
        const Value l = cont(e.kid(0));
        Value x = cont(e.kid(1));
        std::vector<Value> items = l.items();
        items.push_back(std::move(x));
        return Value::list(std::move(items));
      }
      case ExprKind::Head:
      case ExprKind::Tail: {
        const Value l = cont(e.kid(0));
        if (l.items().empty())
          throw EvalError(EvalErrorKind::EmptyList,
                          std::string(e.kind == ExprKind::Head ? "head" : "tail") + " of an empty list at line " +
                              std::to_string(e.span.line));
        if (e.kind == ExprKind::Head) return l.items().front();
        return Value::list(std::vector<Value>(l.items().begin() + 1, l.items().end()));
      }
      case ExprKind::Call:
        return call(e, [this](const Expr& body) { return cont(body); });
      default:
        throw std::logic_error(std::string("unexpected ") + to_string(e.kind) + " in sample code");
    }
  }
};

void flatten(const Value& v, std::vector<double>& out) {
  switch (v.kind()) {
    case Value::Kind::Unit:
      return;
    case Value::Kind::Bool:
      out.push_back(v.as_bool() ? 1.0 : 0.0);
      return;
    case Value::Kind::Real:
      out.push_back(v.as_real());
      return;
    case Value::Kind::Int:
      out.push_back(static_cast<double>(v.as_int()));
      return;
    case Value::Kind::Pair:
      flatten(v.first(), out);
      flatten(v.second(), out);
      return;
    case Value::Kind::List:
      throw EvalError(EvalErrorKind::QueryUnsupported, "lists cannot be averaged");
  }
}

int spine_width(const Value& v) {
  int width = 1;
  for (const Value* cur = &v; cur->kind() == Value::Kind::Pair; cur = &cur->second()) ++width;
  return width;
}

// Offset and length of tuple component k within the flattened features.
std::pair<std::size_t, std::size_t> component_range(const Value& v, int k) {
  const int width = spine_width(v);
  if (k < 0 || k >= width)
    throw EvalError(EvalErrorKind::QueryUnsupported,
                    "marginal " + std::to_string(k) + " out of range for a " + std::to_string(width) + "-tuple");
  std::size_t offset = 0;
  std::vector<double> scratch;
  for (int i = 0; i < k; ++i) {
    scratch.clear();
    flatten(v.component(i, width), scratch);
    offset += scratch.size();
  }
  scratch.clear();
  flatten(v.component(k, width), scratch);
  return {offset, scratch.size()};
}

std::vector<double> features_of(const RunResult& r, const Query& q, bool use_exact) {
  if (!use_exact || !r.exact_features) return query_features(r.value, q);
  if (q.kind == Query::Kind::Expectation) return *r.exact_features;
  const auto [offset, len] = component_range(r.value, q.component);
  const auto& all = *r.exact_features;
  return {all.begin() + static_cast<std::ptrdiff_t>(offset),
          all.begin() + static_cast<std::ptrdiff_t>(offset + len)};
}

}  // namespace

RunResult run_once(const TypedProgram& p, const RunConfig& config) {
  return Evaluator(p.program, config).run();
}

RunResult run_once(const TypedProgram& p, std::uint64_t seed, std::uint64_t fuel) {
  RunConfig cfg;
  cfg.seed = seed;
  cfg.fuel = fuel;
  return run_once(p, cfg);
}

std::vector<double> query_features(const Value& v, const Query& q) {
  std::vector<double> out;
  if (q.kind == Query::Kind::Expectation) {
    flatten(v, out);
    return out;
  }
  const int width = spine_width(v);
  if (q.component < 0 || q.component >= width)
    throw EvalError(EvalErrorKind::QueryUnsupported, "marginal " + std::to_string(q.component) +
                                                         " out of range for a " + std::to_string(width) + "-tuple");
  flatten(v.component(q.component, width), out);
  return out;
}

void run_batch(const TypedProgram& p, std::size_t n, const EstimateOptions& opts,
               const std::function<void(std::size_t, const RunResult&)>& sink) {
  std::vector<RunResult> results(n);
  const std::size_t jobs = std::max<std::size_t>(1, std::min<std::size_t>(opts.jobs, n));
  std::vector<std::exception_ptr> errors(jobs);
  auto work = [&](std::size_t j) {
    const std::size_t begin = n * j / jobs;
    const std::size_t end = n * (j + 1) / jobs;
    try {
      for (std::size_t i = begin; i < end; ++i) {
        RunConfig cfg;
        cfg.seed = opts.seed;
        cfg.stream = i;
        cfg.fuel = opts.fuel;
        results[i] = run_once(p, cfg);
      }
    } catch (...) {
      errors[j] = std::current_exception();
    }
  };
  if (jobs == 1) {
    work(0);
  } else {
    std::vector<std::jthread> threads;
    threads.reserve(jobs);
    for (std::size_t j = 0; j < jobs; ++j) threads.emplace_back(work, j);
  }
  for (const auto& err : errors)
    if (err) std::rethrow_exception(err);
  for (std::size_t i = 0; i < n; ++i) sink(i, results[i]);
}

Estimate estimate(const TypedProgram& p, std::size_t n, const Query& q, const EstimateOptions& opts) {
  std::vector<double> weights;
  std::vector<std::vector<double>> feats;
  weights.reserve(n);
  feats.reserve(n);
  run_batch(p, n, opts, [&](std::size_t, const RunResult& r) {
    weights.push_back(r.weight);
    feats.push_back(features_of(r, q, opts.use_exact_features));
  });

  Estimate est;
  est.n = n;
  if (n == 0) return est;
  const std::size_t dim = feats.front().size();
  for (const auto& f : feats)
    if (f.size() != dim) throw EvalError(EvalErrorKind::QueryUnsupported, "runs returned values of different shapes");

  double sum_sq = 0.0;
  std::vector<double> weighted(dim, 0.0);
  est.unweighted.assign(dim, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    est.sum_weights += weights[i];
    sum_sq += weights[i] * weights[i];
    for (std::size_t k = 0; k < dim; ++k) {
      weighted[k] += weights[i] * feats[i][k];
      est.unweighted[k] += feats[i][k];
    }
  }
  for (auto& u : est.unweighted) u /= static_cast<double>(n);
  est.ess = sum_sq > 0.0 ? est.sum_weights * est.sum_weights / sum_sq : 0.0;
  if (!est.defined()) return est;

  est.mean.resize(dim);
  est.std_error.assign(dim, 0.0);
  for (std::size_t k = 0; k < dim; ++k) est.mean[k] = weighted[k] / est.sum_weights;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < dim; ++k) {
      const double d = weights[i] * (feats[i][k] - est.mean[k]);
      est.std_error[k] += d * d;
    }
  for (auto& s : est.std_error) s = std::sqrt(s) / est.sum_weights;
  return est;
}

}  // namespace multippl
