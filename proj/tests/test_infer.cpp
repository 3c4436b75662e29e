#include <doctest.h>

#include <cmath>
#include <cstring>

#include "multippl/errors.hpp"
#include "multippl/infer.hpp"
#include "multippl/oracle.hpp"
#include "support.hpp"

using namespace multippl;
using multippl::testing::checked;
using multippl::testing::corpus;
using multippl::testing::ProgramGenerator;

namespace {

double feature(const RunResult& r, std::size_t k = 0) { return r.exact_features.value().at(k); }

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

EvalErrorKind eval_failure(const TypedProgram& p, std::uint64_t fuel = 1'000'000) {
  try {
    run_once(p, 0, fuel);
  } catch (const EvalError& e) {
    return e.kind();
  }
  FAIL("expected a run-time error");
  throw std::logic_error("unreachable");
}

}  // namespace

TEST_CASE("exact main of the two-coin disjunction") {
  const TypedProgram p = corpus("coin_disjunction");
  NodeId last_accepting = kTrue;
  double last_mass = 0.0;
  RunConfig cfg;
  cfg.inspect = [&](ExactState& st, const SymValue&) {
    last_accepting = st.accepting;
    last_mass = st.mass(st.accepting);
  };
  const RunResult r = run_once(p, cfg);
  CHECK(std::fabs(r.weight - 0.58) <= 1e-12);
  CHECK(std::fabs(last_mass - 0.58) <= 1e-12);
  CHECK(last_accepting != kTrue);
  CHECK(std::fabs(feature(r) - 0.4 / 0.58) <= 1e-12);
}

TEST_CASE("symbolic values of small exact programs") {
  SUBCASE("ret true") {
    const RunResult r = run_once(checked("exact { ret true }"), 3);
    CHECK(r.weight == 1.0);
    CHECK(r.value == Value::boolean(true));
    CHECK(feature(r) == 1.0);
  }
  SUBCASE("contradiction") {
    const RunResult r = run_once(checked("exact { let X = flip 0.5 in ret X && !X }"), 3);
    CHECK(r.value == Value::boolean(false));
    CHECK(feature(r) == 0.0);
  }
  SUBCASE("out-of-range flip is always false") {
    const TypedProgram p = checked("exact { let X = flip 1.5 in ret X }");
    for (std::uint64_t s = 0; s < 50; ++s) CHECK(run_once(p, s).value == Value::boolean(false));
  }
  SUBCASE("sure flip keeps the evidence") {
    const RunResult r = run_once(checked("exact { let X = flip 1.0 in observe X in ret X }"), 0);
    CHECK(r.weight == 1.0);
    CHECK(r.value == Value::boolean(true));
  }
  SUBCASE("observing F then not F") {
    const RunResult r = run_once(checked("exact { let X = flip 0.5 in observe X in observe !X in ret X }"), 0);
    CHECK(r.weight == 0.0);
    CHECK(r.value == Value::boolean(false));
  }
}

TEST_CASE("disc-guarded if merges branch values") {
  // P = (1/3)(1/4) + (2/3)(1/5)
  const TypedProgram p =
      checked("exact { let x00 = flip 1.0 / 3.0 in let v = if x00 then flip 1.0 / 4.0 else flip 1.0 / 5.0 in ret v }");
  const RunResult r = run_once(p, 0);
  CHECK(r.weight == 1.0);
  CHECK(std::fabs(feature(r) - 0.21666666666666667) <= 1e-12);
}

TEST_CASE("branch-local observe scores once") {
  // single score: wmc(G => H) = 0.7 + 0.3 * 0.6
  const TypedProgram p = checked(
      "exact { let G = flip 0.3 in let H = flip 0.6 in "
      "let r = if G { observe H in ret true } else { ret true } in ret G }");
  const RunResult r = run_once(p, 0);
  CHECK(std::fabs(r.weight - 0.88) <= 1e-12);
  CHECK(std::fabs(feature(r) - 0.18 / 0.88) <= 1e-12);
  CHECK(std::fabs(r.weight - enumerate(p).z) <= 1e-12);
}

TEST_CASE("cont guard runs one branch") {
  const TypedProgram p = checked(
      "sample { c <- true; v <- if c { ret true } else { observe(true, flip(0.0)); ret false }; ret v }");
  for (std::uint64_t s = 0; s < 20; ++s) CHECK(run_once(p, s).weight == 1.0);
}

TEST_CASE("sampled values are lifted into exact code") {
  const TypedProgram sampled_guard = corpus("sampled_guard");
  int heads = 0, tails = 0;
  for (std::uint64_t s = 0; s < 200; ++s) {
    const RunResult r = run_once(sampled_guard, s);
    // x = true satisfies the observation outright; x = false leaves flip 0.25
    CHECK((r.weight == 1.0 || r.weight == 0.25));
    (r.weight == 1.0 ? heads : tails)++;
    if (r.weight == 0.25) CHECK(r.value == Value::boolean(true));
  }
  CHECK(heads > 0);
  CHECK(tails > 0);

  const TypedProgram ints = checked("sample { n <- 2; exact { let D = sample(n) in ret (D == 2, D == 1) } }");
  const RunResult r = run_once(ints, 0);
  CHECK(r.value == Value::pair(Value::boolean(true), Value::boolean(false)));
}

TEST_CASE("negative integers cannot cross into exact code") {
  const TypedProgram p = checked("sample { n <- 0 - 1; exact { let D = sample(n) in ret D == 0 } }");
  CHECK(eval_failure(p) == EvalErrorKind::ConversionUnsupported);
}

TEST_CASE("repeated exact boundaries stay consistent") {
  const TypedProgram p = checked("exact { let X = flip 0.5 in sample { y <- exact(X); z <- exact(X); ret (y, z) } }");
  int ys = 0;
  for (std::uint64_t s = 0; s < 10000; ++s) {
    const RunResult r = run_once(p, s);
    REQUIRE(r.value.first() == r.value.second());
    ys += r.value.first().as_bool();
  }
  CHECK(ys > 4700);
  CHECK(ys < 5300);

  const TypedProgram sure = checked("sample { v <- exact { ret true }; ret v }");
  CHECK(run_once(sure, 0).value == Value::boolean(true));
}

TEST_CASE("joint draws of exact tuples respect correlation") {
  const TypedProgram p = checked("sample { v <- exact { let X = flip 0.5 in ret (X, !X) }; ret v }");
  for (std::uint64_t s = 0; s < 200; ++s) {
    const Value v = run_once(p, s).value;
    CHECK(v.first().as_bool() != v.second().as_bool());
  }
}

TEST_CASE("cont evaluation") {
  SUBCASE("while false never runs") {
    const RunResult r = run_once(checked("sample { n <- 0; while false { n <- n + 1; true }; n }"), 0, 0);
    CHECK(r.value == Value::integer(0));
  }
  SUBCASE("loops count down and carry state") {
    const RunResult r = run_once(checked("sample { n <- 5; s <- 0; while n > 0 { s <- s + n; n <- n - 1; true }; s }"), 0);
    CHECK(r.value == Value::integer(15));
  }
  SUBCASE("fuel runs out") {
    CHECK(eval_failure(checked("sample { while true { true }; ret 1.0 }"), 100) == EvalErrorKind::FuelExhausted);
  }
  SUBCASE("lists") {
    const RunResult r = run_once(checked("sample { l <- push(push([], 1.0), 2.0); (head(l), head(tail(l))) }"), 0);
    CHECK(r.value == Value::pair(Value::real(1.0), Value::real(2.0)));
    CHECK(eval_failure(checked("sample { l <- tail(push([], 1.0)); head(l) }")) == EvalErrorKind::EmptyList);
  }
  SUBCASE("gossip result is a node count") {
    const TypedProgram p = corpus("gossip4");
    for (std::uint64_t s = 0; s < 50; ++s) {
      const double v = run_once(p, s).value.as_real();
      CHECK((v == 1.0 || v == 2.0 || v == 3.0 || v == 4.0));
    }
  }
  SUBCASE("trivial sample") {
    const RunResult r = run_once(checked("sample { ret 1.0 }"), 9);
    CHECK(r.weight == 1.0);
    CHECK(r.value == Value::real(1.0));
    CHECK_FALSE(r.exact_features.has_value());
  }
}

TEST_CASE("degenerate distribution parameters") {
  const TypedProgram p = checked("sample { a ~ flip(1.5); b ~ unif(2.0, 1.0); c ~ pois(0.0 - 1.0); ret (a, b, c) }");
  for (std::uint64_t s = 0; s < 1000; ++s) {
    const Value v = run_once(p, s).value;
    CHECK(v.component(0, 3) == Value::boolean(false));
    CHECK(v.component(1, 3) == Value::real(1.0));
    CHECK(v.component(2, 3) == Value::real(0.0));
  }
}

TEST_CASE("observation scores through programs") {
  CHECK(run_once(checked("sample { observe(true, flip(0.25)); ret true }"), 0).weight == 0.25);
  CHECK(run_once(checked("sample { observe(0.5, unif(0.0, 2.0)); ret true }"), 0).weight == 0.5);
  CHECK(std::fabs(run_once(checked("sample { observe(3.0, pois(3.0)); ret true }"), 0).weight - 0.224042) <= 1e-6);
}

TEST_CASE("one-hot integers stay mutually exclusive and exhaustive") {
  const TypedProgram p = checked(R"(
exact {
  let A = flip 0.4 in
  let D = discrete(0.1, 0.2, 0.3, 0.4) in
  let E = if A then D else discrete(0.5, 0.5) in
  observe A || (E == 1) in
  let F = if E == 3 then 0 else E in
  ret (E, F)
}
)");
  int ints = 0;
  RunConfig cfg;
  cfg.inspect = [&](ExactState& st, const SymValue& v) {
    if (v.kind != SymValue::Kind::Int) return;
    ++ints;
    const double total = st.mass(st.accepting);
    double sum = 0.0;
    for (std::size_t i = 0; i < v.onehot.size(); ++i) {
      const NodeId bi = st.manager.conj(st.accepting, v.onehot[i]);
      sum += st.mass(bi);
      for (std::size_t j = i + 1; j < v.onehot.size(); ++j)
        CHECK(st.mass(st.manager.conj(bi, v.onehot[j])) == 0.0);
    }
    CHECK(std::fabs(sum - total) <= 1e-9);
  };
  for (std::uint64_t s = 0; s < 20; ++s) {
    cfg.seed = s;
    run_once(p, cfg);
  }
  CHECK(ints > 0);

  const Posterior post = enumerate(p);
  const Estimate est = estimate(p, 2000, Query::expectation());
  const auto truth = post.expectation(Query::expectation());
  for (std::size_t k = 0; k < truth.size(); ++k) CHECK(std::fabs(est.mean[k] - truth[k]) <= 1e-9);
}

TEST_CASE("scores telescope to the evidence") {
  ProgramGenerator gen(31, false);
  for (int i = 0; i < 100; ++i) {
    const std::string src = gen.next();
    CAPTURE(src);
    const TypedProgram p = checked(src);
    double final_mass = -1.0;
    RunConfig cfg;
    cfg.inspect = [&](ExactState& st, const SymValue&) { final_mass = st.mass(st.accepting); };
    const RunResult r = run_once(p, cfg);
    CHECK(r.weight >= 0.0);
    CHECK(r.weight <= 1.0);
    CHECK(std::fabs(r.weight - final_mass) <= 1e-9);
    CHECK(std::fabs(r.weight - enumerate(p).z) <= 1e-9);
  }
}

TEST_CASE("weights are never negative") {
  ProgramGenerator gen(32);
  for (int i = 0; i < 100; ++i) {
    const TypedProgram p = checked(gen.next());
    for (std::uint64_t s = 0; s < 20; ++s) CHECK(run_once(p, s).weight >= 0.0);
  }
}

TEST_CASE("runs are deterministic") {
  for (const char* name : {"reachability_9", "arrival_tree15", "gossip4", "biased_coins"}) {
    CAPTURE(name);
    const TypedProgram p = corpus(name);
    for (std::uint64_t s = 0; s < 5; ++s) {
      const RunResult a = run_once(p, s), b = run_once(p, s);
      CHECK(same_bits(a.weight, b.weight));
      CHECK(a.value == b.value);
    }
    EstimateOptions one, four;
    one.seed = four.seed = 17;
    four.jobs = 4;
    const Estimate x = estimate(p, 300, Query::expectation(), one);
    const Estimate y = estimate(p, 300, Query::expectation(), four);
    REQUIRE(x.mean.size() == y.mean.size());
    for (std::size_t k = 0; k < x.mean.size(); ++k) CHECK(same_bits(x.mean[k], y.mean[k]));
    CHECK(same_bits(x.sum_weights, y.sum_weights));
  }
}

TEST_CASE("estimates of the small corpus programs") {
  EstimateOptions opts;
  opts.seed = 7;
  opts.jobs = 4;
  const Estimate sampled_guard = estimate(corpus("sampled_guard"), 100000, Query::expectation(), opts);
  CHECK(std::fabs(sampled_guard.mean[0] - 0.625) <= 0.01);
  CHECK(std::fabs(sampled_guard.unweighted[0] - 0.85) <= 0.01);
  CHECK(sampled_guard.ess > 0.0);
  CHECK(sampled_guard.ess <= 100000.0);

  const Estimate consistency = estimate(corpus("repeated_boundary"), 100000, Query::expectation(), opts);
  CHECK(std::fabs(consistency.mean[0] - 0.5) <= 0.01);

  // (1/2) / (2/3)
  const Estimate twocoins = estimate(corpus("biased_coins"), 200000, Query::expectation(), opts);
  CHECK(std::fabs(twocoins.mean[0] - 0.75) <= 0.01);
}

TEST_CASE("exact-main estimates with and without exact features agree") {
  const TypedProgram p = corpus("reachability_4");
  const auto truth = enumerate(p).expectation(Query::expectation());
  for (bool exact_features : {true, false}) {
    EstimateOptions opts;
    opts.seed = 3;
    opts.use_exact_features = exact_features;
    const Estimate est = estimate(p, 20000, Query::expectation(), opts);
    for (std::size_t k = 0; k < truth.size(); ++k) {
      CAPTURE(k);
      CHECK(std::fabs(est.mean[k] - truth[k]) <= 5.0 * est.std_error[k] + 1e-9);
    }
  }
}

TEST_CASE("zero evidence leaves the estimate undefined") {
  const Estimate est = estimate(checked("exact { let X = flip 0.5 in observe X && !X in ret X }"), 10, Query::expectation());
  CHECK_FALSE(est.defined());
  CHECK(est.mean.empty());
  CHECK(est.ess == 0.0);
}

TEST_CASE("query features") {
  const Value v = Value::pair(Value::boolean(true), Value::pair(Value::real(2.5), Value::integer(3)));
  CHECK(query_features(v, Query::expectation()) == std::vector<double>{1.0, 2.5, 3.0});
  CHECK(query_features(v, Query::marginal(1)) == std::vector<double>{2.5});
  CHECK(query_features(v, Query::marginal(2)) == std::vector<double>{3.0});
  CHECK_THROWS_AS(query_features(v, Query::marginal(3)), EvalError);
  CHECK_THROWS_AS(query_features(Value::list({}), Query::expectation()), EvalError);

  const Estimate est = estimate(corpus("reachability_4"), 100, Query::marginal(3));
  REQUIRE(est.mean.size() == 1);
  CHECK(std::fabs(est.mean[0] - 1.0) <= 1e-12);
}
