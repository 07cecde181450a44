#include "forestalg/algebra.hpp"

#include "doctest.h"

using namespace forestalg;

namespace {

const Alphabet kAb({"a", "b"});

// Recognizer for "some node carries label a" via U1: a maps to the constant
// c, b acts as the identity, accepting {inf}.
Recognizer some_a() {
  Recognizer r;
  r.hom.alphabet = kAb;
  r.hom.algebra = std::make_shared<ForestAlgebra>(u1());
  r.hom.letter_image = {1, 0};
  r.accepting = {false, true};
  return r;
}

}  // namespace

TEST_CASE("built-in algebras validate") {
  CHECK(validate_algebra(u1()));
  CHECK(validate_algebra(u2()));
  CHECK(validate_algebra(trivial_algebra()));
  CHECK(validate_algebra(saturating_counter_algebra(1)));
  CHECK(validate_algebra(saturating_counter_algebra(3)));
}

TEST_CASE("validation rejects broken action tables") {
  ForestAlgebra a = u1();
  a.action[2] = 0;  // c now fixes 0: breaks the insertion law for inf? no,
                    // it breaks c = ins_pre[inf] acting as inf+g.
  CHECK_FALSE(validate_algebra(a));

  ForestAlgebra unfaithful = u1();
  unfaithful.action = {0, 1, 0, 1};  // both elements act as the identity
  CHECK_FALSE(validate_algebra(unfaithful));
}

TEST_CASE("u1 and u2 arithmetic") {
  ForestAlgebra a = u1();
  CHECK(a.add(1, 1) == 1);
  CHECK(a.act(1, 0) == 1);     // c applied to 0 gives inf
  CHECK(a.ins_pre[1] == 1);    // inf+[] is c itself
  ForestAlgebra b = u2();
  CHECK(b.act(1, 1) == 0);     // c0 resets inf
  CHECK(b.mul(1, 2) == 1);     // constants absorb on the left
  CHECK(b.mul(2, 1) == 2);
}

TEST_CASE("saturating counter counts nodes up to the cap") {
  ForestAlgebra a = saturating_counter_algebra(2);
  CHECK(a.h.size == 3);
  CHECK(a.add(1, 1) == 2);
  CHECK(a.add(2, 1) == 2);
  // V is generated by insertions alone: maps x -> min(x+k, cap).
  CHECK(a.v.size == 3);
  CHECK(a.h_name(2) == ">=2");
}

TEST_CASE("evaluation follows the term structure") {
  Recognizer r = some_a();
  CHECK(eval_forest(r.hom, parse_forest("b(b+b)", kAb)) == 0);
  CHECK(eval_forest(r.hom, parse_forest("b(b+a)", kAb)) == 1);
  CHECK(eval_forest(r.hom, parse_forest("0", kAb)) == 0);
  CHECK(r.accepts(parse_forest("b(b(a))+b", kAb)));
  CHECK_FALSE(r.accepts(parse_forest("b(b(b))+b", kAb)));

  // Context value: a appears along b(b+_), so composing with the letter
  // image of the context's nodes only.
  CHECK(eval_context(r.hom, parse_multicontext("b(b+_)", kAb)) == 0);
  CHECK(eval_context(r.hom, parse_multicontext("b(a+_)", kAb)) == 1);

  // Context evaluation agrees with filling the hole.
  for (const char* ctx : {"b(_)", "a(_)+b", "b(b(_)+a)"}) {
    Context p = parse_multicontext(ctx, kAb);
    for (const char* fill : {"0", "a", "b+b"}) {
      Forest s = parse_forest(fill, kAb);
      int direct = eval_forest(r.hom, apply_context(p, s));
      int glued = r.hom.algebra->act(eval_context(r.hom, p), eval_forest(r.hom, s));
      CHECK(direct == glued);
    }
  }
}

TEST_CASE("multicontext evaluation consumes hole values in preorder") {
  Recognizer r = some_a();
  Multicontext m = parse_multicontext("b(_)+_", kAb);
  CHECK(eval_multicontext(r.hom, m, {0, 0}) == 0);
  CHECK(eval_multicontext(r.hom, m, {1, 0}) == 1);
  CHECK(eval_multicontext(r.hom, m, {0, 1}) == 1);
  CHECK_THROWS_AS(eval_multicontext(r.hom, m, {0}), std::invalid_argument);
}

TEST_CASE("complement and product recognizers") {
  Recognizer r = some_a();
  Recognizer no_a = complement(r);
  Forest with = parse_forest("b(a)", kAb);
  Forest without = parse_forest("b(b)", kAb);
  CHECK(no_a.accepts(without));
  CHECK_FALSE(no_a.accepts(with));

  Recognizer both = product_recognizer(r, no_a, [](bool x, bool y) { return x && y; });
  CHECK(validate_algebra(*both.hom.algebra));
  for_each_forest(kAb, 4, [&](const Forest& f) { CHECK_FALSE(both.accepts(f)); });

  Recognizer either = product_recognizer(r, no_a, [](bool x, bool y) { return x || y; });
  for_each_forest(kAb, 4, [&](const Forest& f) { CHECK(either.accepts(f)); });
}

TEST_CASE("algebra_from_actions closes over insertions") {
  // H = saturating {0,1,2}; one letter action: x -> min(x+1, 2).
  FiniteMonoid h{3, 0, {0, 1, 2, 1, 2, 2, 2, 2, 2}};
  GeneratedAlgebra g = algebra_from_actions(h, {{"a", {1, 2, 2}}});
  CHECK(validate_algebra(*g.algebra));
  REQUIRE(g.generator_index.size() == 1);
  // The letter action equals the insertion of 1, so V has exactly the three
  // translation maps.
  CHECK(g.algebra->v.size == 3);
  CHECK(g.algebra->act(g.generator_index[0], 0) == 1);
}

TEST_CASE("reachable subalgebra drops unreachable elements") {
  // Embed U1's language into a padded algebra with an extra dead element
  // that no forest reaches.
  ForestAlgebra base = u1();
  FiniteMonoid h{3, 0, {0, 1, 2, 1, 1, 2, 2, 2, 2}};  // third element absorbing
  GeneratedAlgebra g = algebra_from_actions(h, {{"c", {1, 1, 2}}});
  Recognizer r;
  r.hom.alphabet = kAb;
  r.hom.algebra = g.algebra;
  r.hom.letter_image = {g.generator_index[0], g.algebra->v.identity};
  r.accepting.assign(g.algebra->h.size, false);
  r.accepting[1] = true;

  RestrictedRecognizer sub = reachable_subalgebra(r);
  CHECK(validate_algebra(*sub.recognizer.hom.algebra));
  CHECK(sub.recognizer.hom.algebra->h.size == 2);  // element 2 unreachable
  for (int orig : sub.h_embed) CHECK(orig != 2);

  for_each_forest(kAb, 4, [&](const Forest& f) {
    CHECK(sub.recognizer.accepts(f) == r.accepts(f));
  });
}

TEST_CASE("syntactic algebra of some-a is u1") {
  // Recognize the same language through a wasteful product with a counter.
  Recognizer r = some_a();
  Recognizer pad;
  pad.hom.alphabet = kAb;
  pad.hom.algebra = std::make_shared<ForestAlgebra>(saturating_counter_algebra(2));
  pad.hom.letter_image = {pad.hom.algebra->ins_pre[1], pad.hom.algebra->ins_pre[1]};
  pad.accepting = {true, true, true};
  Recognizer padded = product_recognizer(r, pad, [](bool x, bool) { return x; });

  SyntacticAlgebra syn = syntactic_algebra(padded);
  CHECK(validate_algebra(*syn.recognizer.hom.algebra));
  CHECK(isomorphic(*syn.recognizer.hom.algebra, u1()));
  for_each_forest(kAb, 4, [&](const Forest& f) {
    CHECK(syn.recognizer.accepts(f) == r.accepts(f));
  });

  // Minimizing twice changes nothing.
  SyntacticAlgebra again = syntactic_algebra(syn.recognizer);
  CHECK(isomorphic(*again.recognizer.hom.algebra, *syn.recognizer.hom.algebra));
}

TEST_CASE("isomorphism is checked structurally") {
  CHECK(isomorphic(u1(), u1()));
  CHECK_FALSE(isomorphic(u1(), u2()));
  CHECK_FALSE(isomorphic(u1(), trivial_algebra()));

  // Relabeled copy of u2: swap the two constant maps' indices.
  ForestAlgebra twisted = u2();
  auto swap_v = [](int x) { return x == 1 ? 2 : x == 2 ? 1 : 0; };
  ForestAlgebra rebuilt = twisted;
  for (int v = 0; v < 3; ++v)
    for (int w = 0; w < 3; ++w)
      rebuilt.v.table[swap_v(v) * 3 + swap_v(w)] = swap_v(twisted.v.apply(v, w));
  for (int v = 0; v < 3; ++v)
    for (int h = 0; h < 2; ++h) rebuilt.action[swap_v(v) * 2 + h] = twisted.act(v, h);
  for (int h = 0; h < 2; ++h) {
    rebuilt.ins_pre[h] = swap_v(twisted.ins_pre[h]);
    rebuilt.ins_post[h] = swap_v(twisted.ins_post[h]);
  }
  CHECK(validate_algebra(rebuilt));
  CHECK(isomorphic(rebuilt, u2()));
}
