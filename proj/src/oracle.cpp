#include "multippl/oracle.hpp"

#include <cmath>

#include "multippl/dist.hpp"
#include "multippl/errors.hpp"

namespace multippl {
namespace {

// Source of randomness for the high-level interpreter.
class Chooser {
 public:
  virtual ~Chooser() = default;
  virtual bool flip(double p) = 0;
  virtual int discrete(const std::vector<double>& weights) = 0;
  virtual double unif(double a, double b) = 0;
  virtual double pois(double rate) = 0;
};

class Sampler final : public Chooser {
 public:
  Sampler(std::uint64_t seed, std::uint64_t stream) : rng_(seed, stream) {}
  bool flip(double p) override { return draw_flip(p, rng_); }
  int discrete(const std::vector<double>& weights) override { return draw_discrete(weights, rng_); }
  double unif(double a, double b) override { return draw_unif(a, b, rng_); }
  double pois(double rate) override { return draw_pois(rate, rng_); }

 private:
  Rng rng_;
};

// Depth-first enumeration by replaying a trail of choices. Each pass takes
// the recorded choices, then the first non-zero alternative at new choice
// points; advance() moves to the next unexplored world.
class Replay final : public Chooser {
 public:
  bool flip(double p) override {
    if (!(p >= 0.0 && p <= 1.0)) return pick({0.0, 1.0}) == 0;
    return pick({p, 1.0 - p}) == 0;
  }
  int discrete(const std::vector<double>& weights) override { return pick(normalize_categorical(weights)); }
  double unif(double, double) override {
    throw EvalError(EvalErrorKind::NotEnumerable, "unif draws have no finite support");
  }
  double pois(double) override {
    throw EvalError(EvalErrorKind::NotEnumerable, "pois draws have no finite support");
  }

  void restart() {
    pos_ = 0;
    prob_ = 1.0;
  }
  double prob() const { return prob_; }

  bool advance() {
    // Choices past pos_ were never reached in the last pass (it was pruned).
    trail_.resize(pos_);
    while (!trail_.empty()) {
      Choice& c = trail_.back();
      const int next = next_nonzero(c.probs, c.taken + 1);
      if (next >= 0) {
        c.taken = next;
        return true;
      }
      trail_.pop_back();
    }
    return false;
  }

 private:
  struct Choice {
    int taken;
    std::vector<double> probs;
  };
  std::vector<Choice> trail_;
  std::size_t pos_ = 0;
  double prob_ = 1.0;

  static int next_nonzero(const std::vector<double>& probs, int from) {
    for (int i = from; i < static_cast<int>(probs.size()); ++i)
      if (probs[static_cast<std::size_t>(i)] > 0.0) return i;
    return -1;
  }

  int pick(std::vector<double> probs) {
    if (pos_ == trail_.size()) trail_.push_back({next_nonzero(probs, 0), std::move(probs)});
    const Choice& c = trail_[pos_++];
    prob_ *= c.probs[static_cast<std::size_t>(c.taken)];
    return c.taken;
  }
};

struct ZeroWorld {};

template <typename V>
using Scope = std::vector<std::pair<const std::string*, V>>;

struct Env {
  Scope<Value> cont;
  Scope<Value> disc;
};

// Direct interpreter of the high-level semantics over concrete values.
class Interpreter {
 public:
  Interpreter(const Program& p, Chooser& chooser, bool enumerating, std::uint64_t fuel)
      : prog_(p), chooser_(chooser), enumerating_(enumerating), fuel_(fuel) {}

  Value run() { return eval(*prog_.main); }
  double weight() const { return weight_; }

 private:
  const Program& prog_;
  Chooser& chooser_;
  bool enumerating_;
  std::uint64_t fuel_;
  double weight_ = 1.0;
  Env env_;

  Scope<Value>& scope(Lang lang) { return lang == Lang::Disc ? env_.disc : env_.cont; }

  static Value& find(Scope<Value>& s, const std::string& name) {
    for (auto it = s.rbegin(); it != s.rend(); ++it)
      if (*it->first == name) return it->second;
    throw std::logic_error("unbound variable '" + name + "' at run time");
  }

  void score(double s) {
    weight_ *= s;
    if (enumerating_ && weight_ == 0.0) throw ZeroWorld{};
  }

  void not_enumerable(const Expr& e) const {
    if (enumerating_)
      throw EvalError(EvalErrorKind::NotEnumerable,
                      std::string(to_string(e.kind)) + " at line " + std::to_string(e.span.line) +
                          " is outside the enumerable fragment");
  }

  std::vector<double> reals(const std::vector<ExprPtr>& kids) {
    std::vector<double> out;
    for (const auto& k : kids) out.push_back(eval(*k).as_real());
    return out;
  }

  Value arith(const Expr& e) {
    const Value a = eval(e.kid(0));
    const Value b = eval(e.kid(1));
    if (a.kind() == Value::Kind::Int) {
      const long long x = a.as_int(), y = b.as_int();
      switch (e.kind) {
        case ExprKind::Add: return Value::integer(x + y);
        case ExprKind::Sub: return Value::integer(x - y);
        case ExprKind::Mul: return Value::integer(x * y);
        case ExprKind::Le: return Value::boolean(x <= y);
        default: return Value::boolean(x < y);
      }
    }
    const double x = a.as_real(), y = b.as_real();
    switch (e.kind) {
      case ExprKind::Add: return Value::real(x + y);
      case ExprKind::Sub: return Value::real(x - y);
      case ExprKind::Mul: return Value::real(x * y);
      case ExprKind::Le: return Value::boolean(x <= y);
      default: return Value::boolean(x < y);
    }
  }

  Value call(const Expr& e) {
    const FunctionDef& f = prog_.functions.at(static_cast<std::size_t>(e.fn_index));
    Env callee;
    for (std::size_t i = 0; i < e.kids.size(); ++i)
      (f.lang == Lang::Disc ? callee.disc : callee.cont).emplace_back(&f.params[i].name, eval(e.kid(i)));
    std::swap(env_, callee);
    struct Restore {
      Env& env;
      Env& saved;
      ~Restore() { std::swap(env, saved); }
    } restore{env_, callee};
    return eval(*f.body);
  }

  Value loop(const Expr& e) {
    not_enumerable(e);
    const Expr& body = e.kid(1);
    while (eval(e.kid(0)).as_bool()) {
      if (fuel_ == 0) throw EvalError(EvalErrorKind::FuelExhausted, "loop iteration budget exhausted");
      --fuel_;
      const std::size_t mark = env_.cont.size();
      const Expr* cur = &body;
      for (; cur->kind == ExprKind::Let; cur = &cur->kid(1)) {
        Value v = eval(cur->kid(0));
        if (cur->name != "_") env_.cont.emplace_back(&cur->name, std::move(v));
      }
      eval(*cur);
      std::vector<Value> updated;
      for (const auto& name : e.carried) updated.push_back(find(env_.cont, name));
      env_.cont.resize(mark);
      for (std::size_t i = 0; i < e.carried.size(); ++i) find(env_.cont, e.carried[i]) = std::move(updated[i]);
    }
    return Value::unit();
  }

  Value eval(const Expr& e) {
    switch (e.kind) {
      case ExprKind::Var:
        return find(scope(e.lang), e.name);
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
        const bool a = eval(e.kid(0)).as_bool();
        const bool b = eval(e.kid(1)).as_bool();
        return Value::boolean(a && b);
      }
      case ExprKind::Or: {
        const bool a = eval(e.kid(0)).as_bool();
        const bool b = eval(e.kid(1)).as_bool();
        return Value::boolean(a || b);
      }
      case ExprKind::Not:
        return Value::boolean(!eval(e.kid(0)).as_bool());
      case ExprKind::Eq: {
        const Value a = eval(e.kid(0));
        const Value b = eval(e.kid(1));
        return Value::boolean(a == b);
      }
      case ExprKind::Add:
      case ExprKind::Sub:
      case ExprKind::Mul:
      case ExprKind::Le:
      case ExprKind::Lt:
        return arith(e);
      case ExprKind::Neg: {
        const Value a = eval(e.kid(0));
        return a.kind() == Value::Kind::Int ? Value::integer(-a.as_int()) : Value::real(-a.as_real());
      }
      case ExprKind::Pair: {
        Value a = eval(e.kid(0));
        Value b = eval(e.kid(1));
        return Value::pair(std::move(a), std::move(b));
      }
      case ExprKind::Fst:
        return eval(e.kid(0)).first();
      case ExprKind::Snd:
        return eval(e.kid(0)).second();
      case ExprKind::Index:
        return eval(e.kid(0)).component(static_cast<int>(e.integer), e.width);
      case ExprKind::Ret:
      case ExprKind::Sample:
      case ExprKind::Exact:
        return eval(e.kid(0));
      case ExprKind::Let: {
        Value v = eval(e.kid(0));
        if (e.name == "_") return eval(e.kid(1));
        auto& s = scope(e.lang);
        s.emplace_back(&e.name, std::move(v));
        Value out = eval(e.kid(1));
        s.pop_back();
        return out;
      }
      case ExprKind::Ite:
        return eval(eval(e.kid(0)).as_bool() ? e.kid(1) : e.kid(2));
      case ExprKind::Flip:
        return Value::boolean(chooser_.flip(eval(e.kid(0)).as_real()));
      case ExprKind::Unif: {
        const auto ab = reals(e.kids);
        return Value::real(chooser_.unif(ab[0], ab[1]));
      }
      case ExprKind::Pois:
        return Value::real(chooser_.pois(eval(e.kid(0)).as_real()));
      case ExprKind::Discrete:
        return Value::integer(chooser_.discrete(reals(e.kids)));
      case ExprKind::Observe:
        score(eval(e.kid(0)).as_bool() ? 1.0 : 0.0);
        return Value::unit();
      case ExprKind::Obs: {
        const Value observed = eval(e.kid(0));
        const Expr& d = e.kid(1);
        if (d.kind == ExprKind::Flip) {
          score(score_flip(eval(d.kid(0)).as_real(), observed.as_bool()));
        } else if (d.kind == ExprKind::Unif) {
          const auto ab = reals(d.kids);
          score(score_unif(ab[0], ab[1], observed.as_real()));
        } else {
          score(score_pois(eval(d.kid(0)).as_real(), observed.as_real()));
        }
        return Value::unit();
      }
      case ExprKind::While:
        return loop(e);
      case ExprKind::Nil:
        not_enumerable(e);
        return Value::list({});
      case ExprKind::Push: {
        not_enumerable(e);
        const Value l = eval(e.kid(0));
        std::vector<Value> items = l.items();
        items.push_back(eval(e.kid(1)));
        return Value::list(std::move(items));
      }
      case ExprKind::Head:
      case ExprKind::Tail: {
        not_enumerable(e);
        const Value l = eval(e.kid(0));
        if (l.items().empty()) throw EvalError(EvalErrorKind::EmptyList, "empty list");
        if (e.kind == ExprKind::Head) return l.items().front();
        return Value::list(std::vector<Value>(l.items().begin() + 1, l.items().end()));
      }
      case ExprKind::Call:
        return call(e);
    }
    throw std::logic_error("unsupported expression");
  }
};

}  // namespace

double Posterior::prob(const Value& v) const {
  const auto it = probs.find(v);
  return it == probs.end() ? 0.0 : it->second;
}

std::vector<double> Posterior::expectation(const Query& q) const {
  std::vector<double> out;
  for (const auto& [v, p] : probs) {
    const auto f = query_features(v, q);
    if (out.empty()) out.assign(f.size(), 0.0);
    for (std::size_t k = 0; k < f.size() && k < out.size(); ++k) out[k] += p * f[k];
  }
  return out;
}

Posterior enumerate(const TypedProgram& p, std::size_t world_limit) {
  Posterior post;
  Replay replay;
  std::map<Value, double> mass;
  do {
    if (++post.worlds > world_limit)
      throw EvalError(EvalErrorKind::WorldLimitExceeded,
                      "more than " + std::to_string(world_limit) + " worlds to enumerate");
    replay.restart();
    Interpreter interp(p.program, replay, true, 0);
    try {
      const Value v = interp.run();
      const double w = replay.prob() * interp.weight();
      if (w > 0.0) {
        mass[v] += w;
        post.z += w;
      }
    } catch (const ZeroWorld&) {
    }
  } while (replay.advance());
  if (post.z > 0.0)
    for (const auto& [v, m] : mass) post.probs[v] = m / post.z;
  return post;
}

HighLevelEstimate highlevel_sample(const TypedProgram& p, std::size_t n, std::uint64_t seed, const Query& q,
                                   std::uint64_t fuel) {
  std::vector<double> weights;
  std::vector<std::vector<double>> feats;
  for (std::size_t i = 0; i < n; ++i) {
    Sampler sampler(seed, i);
    Interpreter interp(p.program, sampler, false, fuel);
    const Value v = interp.run();
    weights.push_back(interp.weight());
    feats.push_back(query_features(v, q));
  }
  HighLevelEstimate out;
  if (n == 0) return out;
  const std::size_t dim = feats.front().size();
  std::vector<double> acc(dim, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    out.sum_weights += weights[i];
    for (std::size_t k = 0; k < dim; ++k) acc[k] += weights[i] * feats[i][k];
  }
  if (out.sum_weights <= 0.0) return out;
  out.mean.resize(dim);
  out.std_error.assign(dim, 0.0);
  for (std::size_t k = 0; k < dim; ++k) out.mean[k] = acc[k] / out.sum_weights;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < dim; ++k) {
      const double d = weights[i] * (feats[i][k] - out.mean[k]);
      out.std_error[k] += d * d;
    }
  for (auto& s : out.std_error) s = std::sqrt(s) / out.sum_weights;
  return out;
}

}  // namespace multippl
