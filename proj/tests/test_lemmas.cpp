#include <doctest.h>

#include "spaces.hpp"

using namespace multippl;
using namespace multippl::testing;

TEST_CASE("random spaces are well formed") {
  SpaceGen gen(1);
  int with_evidence = 0, null_evidence = 0;
  for (int i = 0; i < 100; ++i) {
    const RandomSpace s = gen.next();
    CHECK(s.mu.size() <= 16);
    double total = 0.0;
    for (double m : s.mu) total += m;
    CHECK(std::fabs(total - 1.0) <= 1e-12);
    (fcps::mass(s.mu, s.e) > 0.0 ? with_evidence : null_evidence)++;
  }
  CHECK(with_evidence >= 50);
}

TEST_CASE("scoring before or after sampling") {
  CHECK(lemma_campaign(101, 100).swap_order <= 1e-9);
}

TEST_CASE("a marginal draw then a conditional draw is a joint draw") {
  CHECK(lemma_campaign(102, 100).joint_draw <= 1e-12);
}

TEST_CASE("conditioning twice is conditioning on the intersection") {
  CHECK(lemma_campaign(103, 100).iterated_cond <= 1e-12);
}

TEST_CASE("hand-sized instances") {
  const fcps::Measure mu{0.1, 0.2, 0.3, 0.4};
  const fcps::Event e{true, false, true, true};
  const fcps::Event f{false, true, true, true};
  CHECK(fcps::mass(mu, e) == doctest::Approx(0.8));
  const auto cond = fcps::condition(mu, e);
  CHECK(cond[1] == 0.0);
  CHECK(cond[3] == doctest::Approx(0.5));
  CHECK(fcps::max_gap(fcps::condition(cond, f), fcps::condition(mu, fcps::intersect(e, f))) <= 1e-15);
  const auto rhs = fcps::score_then_sample(mu, e);
  CHECK(rhs[0].weight == doctest::Approx(0.8));
  CHECK(fcps::condition(mu, {false, false, false, false}) == fcps::Measure(4, 0.0));
}
