#include "forestalg/monoid.hpp"

#include "doctest.h"

using namespace forestalg;

namespace {

// Z3 under addition: periodic, hence not aperiodic.
const FiniteMonoid kZ3{3, 0, {0, 1, 2, 1, 2, 0, 2, 0, 1}};
// Saturating addition on {0,1,2}: aperiodic and commutative.
const FiniteMonoid kSat3{3, 0, {0, 1, 2, 1, 2, 2, 2, 2, 2}};
// Two-element meet-semilattice {1,e}.
const FiniteMonoid kU1{2, 0, {0, 1, 1, 1}};

}  // namespace

TEST_CASE("validate_monoid catches broken tables") {
  CHECK(validate_monoid(kZ3));
  CHECK(validate_monoid(kSat3));

  FiniteMonoid bad = kZ3;
  bad.table[0] = 7;
  CHECK_FALSE(validate_monoid(bad));

  // x*y = min(x+y, 2) but with one entry patched to break associativity.
  FiniteMonoid nonassoc = kSat3;
  nonassoc.table[2 * 3 + 2] = 0;  // 2*2 = 0
  auto r = validate_monoid(nonassoc);
  CHECK_FALSE(r);
  CHECK(r.detail.find("associativity") != std::string::npos);

  FiniteMonoid no_identity{2, 0, {1, 1, 1, 1}};
  CHECK_FALSE(validate_monoid(no_identity));
}

TEST_CASE("power and omega") {
  CHECK(kZ3.power(1, 3) == 0);
  CHECK(kZ3.power(2, 2) == 1);
  CHECK(kSat3.power(1, 5) == 2);
  // omega of 1 in Z3 is the identity (1+1+1), in Sat3 the sink.
  CHECK(omega_power(kZ3, 1) == 0);
  CHECK(omega_power(kSat3, 1) == 2);
  CHECK(omega_power(kU1, 1) == 1);
  CHECK(is_aperiodic(kSat3));
  CHECK(is_aperiodic(kU1));
  CHECK_FALSE(is_aperiodic(kZ3));
}

TEST_CASE("additive omega multiple") {
  CHECK(additive_omega_multiple(kSat3, 1) == 2);
  CHECK(additive_omega_multiple(kSat3, 0) == 0);
  CHECK_THROWS_AS(additive_omega_multiple(kZ3, 1), std::invalid_argument);
}

TEST_CASE("closure under composition only") {
  // Two constant maps and the identity generate a 3-element left-zero band
  // plus identity.
  std::vector<std::pair<std::string, std::vector<int>>> gens = {
      {"1", {0, 1, 2}}, {"c0", {0, 0, 0}}, {"c2", {2, 2, 2}}};
  auto closed = closure_transformations(kSat3, gens, ClosureOps{});
  CHECK(closed.size() == 3);
  FiniteMonoid m = transformation_monoid(closed, 3);
  CHECK(validate_monoid(m));
  CHECK(m.identity == 0);
  // Constants absorb: c0 . c2 = c0.
  CHECK(m.apply(1, 2) == 1);
  CHECK(m.apply(2, 1) == 2);
}

TEST_CASE("closure with pointwise addition grows the insertion maps") {
  // From the identity alone, pointwise addition over Sat3 yields x -> x+x,
  // which is already saturated: 2*id = 3*id = {0,2,2}.
  std::vector<std::pair<std::string, std::vector<int>>> gens = {{"1", {0, 1, 2}}};
  ClosureOps ops;
  ops.pointwise_add = true;
  auto closed = closure_transformations(kSat3, gens, ops);
  REQUIRE(closed.size() == 2);
  CHECK(closed[1].image == std::vector<int>{0, 2, 2});

  ClosureOps self_only;
  self_only.compose = false;
  self_only.self_add_max = 3;
  auto self_closed = closure_transformations(kSat3, gens, self_only);
  REQUIRE(self_closed.size() == 2);
  CHECK(to_string(self_closed[1].provenance) == "2*1");
}

TEST_CASE("closure respects the element budget") {
  std::vector<std::pair<std::string, std::vector<int>>> gens = {
      {"1", {0, 1, 2}}, {"s", {1, 2, 0}}};
  CHECK_THROWS_AS(closure_transformations(kZ3, gens, ClosureOps{}, 2), SizeGuardExceeded);
}

TEST_CASE("provenance records shortest derivations") {
  std::vector<std::pair<std::string, std::vector<int>>> gens = {
      {"1", {0, 1, 2}}, {"f", {1, 2, 2}}};
  auto closed = closure_transformations(kSat3, gens, ClosureOps{});
  REQUIRE(closed.size() == 3);  // id, f, f.f (already constant 2)
  CHECK(to_string(closed[2].provenance) == "(f . f)");
  CHECK(closed[2].image == std::vector<int>{2, 2, 2});
}

TEST_CASE("quotient monoid") {
  // Collapse Z3 by the trivial congruence {0,1,2}.
  auto all = quotient_monoid(kZ3, {0, 0, 0});
  CHECK(all.ok);
  CHECK(all.quotient.size == 1);

  // {0} vs {1,2} is not a congruence of Z3: 1+1=2 stays, 1+2=0 leaves.
  auto bad = quotient_monoid(kZ3, {0, 1, 1});
  CHECK_FALSE(bad.ok);
  CHECK(!bad.detail.empty());

  // Sat3: {0} {1} {2} identity partition works.
  auto id = quotient_monoid(kSat3, {0, 1, 2});
  CHECK(id.ok);
  CHECK(id.quotient == kSat3);
}

TEST_CASE("product monoid") {
  FiniteMonoid p = product_monoid(kU1, kZ3);
  CHECK(validate_monoid(p));
  CHECK(p.size == 6);
  CHECK(p.identity == 0);
  // (e,1)*(e,2) = (e,0) with coding a*3+b.
  CHECK(p.apply(1 * 3 + 1, 1 * 3 + 2) == 1 * 3 + 0);
  CHECK(is_aperiodic(product_monoid(kU1, kSat3)));
  CHECK_FALSE(is_aperiodic(p));
}
