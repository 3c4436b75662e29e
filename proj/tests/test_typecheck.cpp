#include <doctest.h>

#include <functional>
#include <regex>

#include "multippl/parser.hpp"
#include "multippl/typecheck.hpp"
#include "support.hpp"

using namespace multippl;
using multippl::testing::checked;
using multippl::testing::corpus;
using multippl::testing::corpus_names;
using multippl::testing::corpus_source;

namespace {

void walk(const Expr& e, const std::function<void(const Expr&)>& visit) {
  visit(e);
  for (const auto& k : e.kids) walk(*k, visit);
}

void walk(const Program& p, const std::function<void(const Expr&)>& visit) {
  for (const auto& f : p.functions) walk(*f.body, visit);
  walk(*p.main, visit);
}

TypeErrorKind failure_kind(const std::string& src) {
  try {
    checked(src);
  } catch (const TypeError& e) {
    return e.kind();
  }
  FAIL("expected a type error for:\n" << src);
  throw std::logic_error("unreachable");
}

std::string replace_once(std::string text, const std::string& from, const std::string& to) {
  const auto at = text.find(from);
  REQUIRE_MESSAGE(at != std::string::npos, "pattern not found: " << from);
  return text.replace(at, from.size(), to);
}

}  // namespace

TEST_CASE("convertibility") {
  CHECK(convertible(Type::boolean(), Type::boolean()));
  CHECK_FALSE(convertible(Type::boolean(), Type::real()));
  CHECK(convertible(Type::prod(Type::boolean(), Type::unit()), Type::prod(Type::boolean(), Type::unit())));
  CHECK(convertible(Type::unit(), Type::unit()));
  CHECK(convertible(Type::integer(3), Type::integer()));
  CHECK_FALSE(convertible(Type::prod(Type::boolean(), Type::unit()), Type::prod(Type::unit(), Type::boolean())));
  CHECK_FALSE(convertible(Type::real(), Type::real()));
  CHECK_FALSE(convertible(Type::list(Type::boolean()), Type::list(Type::boolean())));
}

TEST_CASE("corpus programs type-check") {
  CHECK(corpus("coin_disjunction").main_type == Type::boolean());
  CHECK(corpus("sampled_guard").main_type == Type::boolean());
  CHECK(corpus("biased_coins").main_type == Type::boolean());
  CHECK(corpus("repeated_boundary").main_type == Type::boolean());
  CHECK(tuple_width(corpus("reachability_9").main_type) == 9);
  CHECK(tuple_width(corpus("reachability_4").main_type) == 4);
  CHECK(corpus("arrival_tree15").main_type.is(TypeKind::Int));
  CHECK(corpus("gossip4").main_type == Type::real());
  CHECK(corpus("ret_true").main_type == Type::boolean());
}

TEST_CASE("boundary annotations are convertible pairs") {
  for (const auto& name : corpus_names()) {
    CAPTURE(name);
    const TypedProgram tp = corpus(name);
    int boundaries = 0;
    walk(tp.program, [&](const Expr& e) {
      if (e.kind == ExprKind::Sample) {
        ++boundaries;
        CHECK(e.lang == Lang::Disc);
        CHECK(e.kid(0).lang == Lang::Cont);
        CHECK(convertible(e.type, e.kid(0).type));
      } else if (e.kind == ExprKind::Exact) {
        ++boundaries;
        CHECK(e.lang == Lang::Cont);
        CHECK(e.kid(0).lang == Lang::Disc);
        CHECK(convertible(e.kid(0).type, e.type));
      }
    });
    if (name != "ret_true" && name != "coin_disjunction") CHECK(boundaries > 0);
  }
}

TEST_CASE("implicit boundaries are made explicit") {
  // Listing 4 reads Disc variables inside its sample block
  const TypedProgram tp = corpus("reachability_9");
  int exacts = 0;
  walk(tp.program, [&](const Expr& e) {
    if (e.kind == ExprKind::Exact && e.kid(0).kind == ExprKind::Var) ++exacts;
  });
  CHECK(exacts == 8);  // every read of x01 / x10 inside the sample block
}

TEST_CASE("checking is deterministic and idempotent") {
  for (const auto& name : corpus_names()) {
    CAPTURE(name);
    const TypedProgram once = corpus(name);
    const TypedProgram again = check(once.program);
    CHECK(structurally_equal(once.program, again.program));
    CHECK(once.main_type == again.main_type);
    const TypedProgram fresh = corpus(name);
    CHECK(structurally_equal(once.program, fresh.program));
    std::vector<Type> a, b;
    walk(once.program, [&](const Expr& e) { a.push_back(e.type); });
    walk(again.program, [&](const Expr& e) { b.push_back(e.type); });
    CHECK(a == b);
  }
}

TEST_CASE("documented rejections") {
  CHECK(failure_kind("exact { if (flip 0.5) then sample{ret true} else ret false }") ==
        TypeErrorKind::BoundaryInPureIteBranch);
  CHECK(failure_kind("sample { x ~ flip(0.5); exact( observe x in ret x ) }") == TypeErrorKind::UnboundVariable);
}

TEST_CASE("broken variants of the corpus") {
  struct Variant {
    std::string label;
    std::string source;
    TypeErrorKind expected;
  };
  const std::string coin_disjunction = corpus_source("coin_disjunction");
  const std::string sampled_guard = corpus_source("sampled_guard");
  const std::string reach = corpus_source("reachability_9");
  const std::string arrival = corpus_source("arrival_tree15");
  const std::string gossip = corpus_source("gossip4");
  const std::string twocoins = corpus_source("biased_coins");

  const std::vector<Variant> variants = {
      {"unbound variable", replace_once(coin_disjunction, "observe X || Y", "observe X || Z"), TypeErrorKind::UnboundVariable},
      {"cont variable in disc without sample", replace_once(sampled_guard, "sample(x) || Y", "x || Y"),
       TypeErrorKind::UnboundVariable},
      {"flip of a bool", replace_once(coin_disjunction, "flip 0.3", "flip true"), TypeErrorKind::TypeMismatch},
      {"real crossing into exact code", replace_once(sampled_guard, "x ~ flip(0.2);", "x ~ unif(0.0, 1.0);"),
       TypeErrorKind::NonConvertibleBoundary},
      {"non-convertible sample block", replace_once(reach, "(x20, x11, x02)\n", "(x20, x11, 1.0)\n"),
       TypeErrorKind::NonConvertibleBoundary},
      {"boundary inside a disc-guarded branch",
       replace_once(reach, "if x00 then flip 1.0 / 4.0", "if x00 then sample(flip(0.25))"),
       TypeErrorKind::BoundaryInPureIteBranch},
      {"effectful observe", replace_once(reach, "observe x22 in", "observe flip 0.5 in"), TypeErrorKind::ImpureTerm},
      {"effectful flip parameter", replace_once(twocoins, "flip theta", "flip unif(0.0, 1.0)"),
       TypeErrorKind::ImpureTerm},
      {"loop variable changes type", replace_once(arrival, "ix <- ix - 1;", "ix <- true;"),
       TypeErrorKind::TypeMismatch},
      {"self call", replace_once(gossip, "s ~ discrete(", "s ~ forward(ix) + discrete("),
       TypeErrorKind::RecursiveCall},
      {"signature return mismatch", replace_once(gossip, "-> Float", "-> Bool"), TypeErrorKind::TypeMismatch},
      {"unknown function", replace_once(arrival, "exact(network())", "exact(netw())"),
       TypeErrorKind::UnknownFunction},
  };
  for (const auto& v : variants) {
    CAPTURE(v.label);
    CHECK(failure_kind(v.source) == v.expected);
  }
}

TEST_CASE("call ordering and languages") {
  CHECK(failure_kind("exact fn f(a : Bool) -> Bool { g(a) }\nexact fn g(a : Bool) -> Bool { a }\nexact { ret f(true) }") ==
        TypeErrorKind::RecursiveCall);
  CHECK(failure_kind("sample fn f(a : Bool) -> Bool { a }\nexact { ret f(true) }") == TypeErrorKind::TypeMismatch);
  CHECK(failure_kind("exact fn f(a : Bool) -> Bool { a }\nexact { ret f(true, false) }") ==
        TypeErrorKind::TypeMismatch);
  CHECK_NOTHROW(checked("exact fn f(a : Bool) -> Bool { a }\nexact fn g(a : Bool) -> Bool { f(!a) }\nexact { ret g(true) }"));
}

TEST_CASE("purity and guard rules") {
  CHECK_NOTHROW(checked("sample { x ~ flip(0.5); exact { let Y = if x then flip 0.2 else flip 0.3 in ret Y } }"));
  CHECK_NOTHROW(checked("exact { let A = flip 0.5 in let B = if A { observe A in flip 0.2 } else { flip 0.3 } in ret B }"));
  CHECK(failure_kind("exact { observe 1.0 in ret true }") == TypeErrorKind::TypeMismatch);
  CHECK(failure_kind("sample { ret 1 == 1.0 }") == TypeErrorKind::TypeMismatch);
  CHECK(failure_kind("sample { ret 1.0 == 1.0 }") == TypeErrorKind::TypeMismatch);
  CHECK(failure_kind("sample { x ~ flip(0.5); ret x + 1.0 }") == TypeErrorKind::TypeMismatch);
  CHECK(failure_kind("exact { let D = discrete(0.5, 0.5) in ret D && true }") == TypeErrorKind::TypeMismatch);
  CHECK_NOTHROW(checked("exact { let D = discrete(0.5, 0.5) in ret D == 1 }"));
  CHECK(failure_kind("sample { observe(true, unif(0.0, 1.0)); ret true }") == TypeErrorKind::TypeMismatch);
  CHECK_NOTHROW(checked("sample { observe(0.5, unif(0.0, 1.0)); observe(2.0, pois(3.0)); ret true }"));
}

TEST_CASE("diagnostics are rendered with position and code") {
  try {
    checked("exact {\n  let X = flip 0.5 in\n  ret Q\n}");
    FAIL("expected failure");
  } catch (const TypeError& e) {
    const std::string text = e.diagnostic().render("prog.mppl");
    CHECK(std::regex_match(text, std::regex(R"(prog\.mppl:3:\d+: error\[UnboundVariable\]: .*Q.*)")));
  }
}
