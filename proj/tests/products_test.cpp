#include "forestalg/products.hpp"

#include <random>

#include "doctest.h"

using namespace forestalg;

namespace {

const Alphabet kAb({"a", "b"});

Homomorphism into_u1(std::vector<int> images) {
  Homomorphism hom;
  hom.alphabet = kAb;
  hom.algebra = std::make_shared<ForestAlgebra>(u1());
  hom.letter_image = std::move(images);
  return hom;
}

Forest random_forest(std::mt19937& rng, const Alphabet& alphabet, int nodes) {
  // Random preorder shape: each node takes a random share of the budget.
  std::vector<Tree> roots;
  std::function<Tree(int&)> grow = [&](int& budget) {
    Tree t;
    t.label = alphabet.name(std::uniform_int_distribution<>(0, alphabet.size() - 1)(rng));
    --budget;
    while (budget > 0 && std::uniform_int_distribution<>(0, 2)(rng) > 0) {
      t.children.push_back(grow(budget));
    }
    return t;
  };
  int budget = nodes;
  while (budget > 0) roots.push_back(grow(budget));
  return Forest{std::move(roots)};
}

}  // namespace

TEST_CASE("direct product is componentwise") {
  ForestAlgebra p = direct_product(u1(), u1());
  CHECK(validate_algebra(p));
  CHECK(p.h.size == 4);
  CHECK(p.v.size == 4);
  // (c,1) acting on (0,0) = (inf,0); coded with |H2|=2, |V2|=2.
  CHECK(p.act(1 * 2 + 0, 0) == 1 * 2 + 0);
  CHECK(p.h_name(1 * 2 + 0) == "(inf,0)");

  ForestAlgebra with_trivial = direct_product(u2(), trivial_algebra());
  CHECK(validate_algebra(with_trivial));
  CHECK(isomorphic(with_trivial, u2()));
}

TEST_CASE("wreath action and composition laws") {
  ForestAlgebra a1 = u1(), a2 = u1();
  WreathVertical id = wreath_identity(a1, a2);
  CHECK(wreath_action(a1, a2, id, {0, 1}) == std::pair<int, int>{0, 1});

  WreathVertical cc{1, {1, 1}};  // (c, constant c)
  CHECK(wreath_action(a1, a2, cc, {0, 0}) == std::pair<int, int>{1, 1});
  CHECK(wreath_compose(a1, a2, cc, id) == cc);
  CHECK(wreath_compose(a1, a2, id, cc) == cc);

  // ins_post((h1,h2)) acts as (g1,g2) -> (g1+h1, g2+h2).
  WreathVertical post = wreath_ins_post(a1, a2, 1, 0);
  CHECK(wreath_action(a1, a2, post, {0, 1}) == std::pair<int, int>{1, 1});
  CHECK(wreath_action(a1, a2, post, {0, 0}) == std::pair<int, int>{1, 0});

  // Action of a composite equals composition of actions, sampled.
  std::mt19937 rng(7);
  auto rnd = [&](int n) { return std::uniform_int_distribution<>(0, n - 1)(rng); };
  for (int trial = 0; trial < 50; ++trial) {
    WreathVertical w{rnd(2), {rnd(2), rnd(2)}};
    WreathVertical w2{rnd(2), {rnd(2), rnd(2)}};
    WreathVertical w3{rnd(2), {rnd(2), rnd(2)}};
    CHECK(wreath_compose(a1, a2, wreath_compose(a1, a2, w, w2), w3) ==
          wreath_compose(a1, a2, w, wreath_compose(a1, a2, w2, w3)));
    for (int h1 = 0; h1 < 2; ++h1)
      for (int h2 = 0; h2 < 2; ++h2) {
        auto once = wreath_action(a1, a2, wreath_compose(a1, a2, w, w2), {h1, h2});
        auto twice = wreath_action(a1, a2, w, wreath_action(a1, a2, w2, {h1, h2}));
        CHECK(once == twice);
      }
  }
}

TEST_CASE("full wreath of u1 with u1") {
  WreathAlgebra w = full_wreath(u1(), u1());
  CHECK(validate_algebra(*w.algebra));
  CHECK(w.algebra->h.size == 4);
  CHECK(w.algebra->v.size == 8);  // 2 * 2^2, no two act alike
  CHECK(full_wreath(trivial_algebra(), u2()).algebra->v.size == 3);
  CHECK(isomorphic(*full_wreath(trivial_algebra(), u2()).algebra, u2()));
  CHECK_THROWS_AS(full_wreath(saturating_counter_algebra(3), saturating_counter_algebra(3), 100),
                  SizeGuardExceeded);
}

TEST_CASE("generated wreath sits inside the full wreath") {
  ForestAlgebra a1 = u1(), a2 = u1();
  std::vector<std::pair<std::string, WreathVertical>> gens = {
      {"g", WreathVertical{1, {0, 1}}}};
  WreathAlgebra gen = wreath_generated(a1, a2, gens);
  CHECK(validate_algebra(*gen.algebra));
  CHECK(gen.algebra->h.size == 4);
  CHECK(gen.algebra->v.size <= 8);

  WreathAlgebra full = full_wreath(a1, a2);
  for (const WreathVertical& e : gen.elements) CHECK(full.index_of(e) >= 0);

  // Composition tables agree through the element identification.
  for (std::size_t i = 0; i < gen.elements.size(); ++i)
    for (std::size_t j = 0; j < gen.elements.size(); ++j) {
      int gi = full.index_of(gen.elements[i]);
      int gj = full.index_of(gen.elements[j]);
      int prod = gen.algebra->mul(static_cast<int>(i), static_cast<int>(j));
      CHECK(full.index_of(gen.elements[prod]) == full.algebra->mul(gi, gj));
    }
}

TEST_CASE("no generators still yields a valid algebra") {
  WreathAlgebra core = wreath_generated(u1(), u1(), {});
  CHECK(validate_algebra(*core.algebra));
  CHECK(core.generator_index.empty());
}

TEST_CASE("direct product embeds into the full wreath") {
  ForestAlgebra a1 = u2(), a2 = u1();
  ForestAlgebra prod = direct_product(a1, a2);
  WreathAlgebra w = full_wreath(a1, a2);
  std::vector<int> v_map = product_wreath_embedding(a1, a2, w);

  // Injective, multiplicative, action-compatible; H indices carry over.
  for (int v = 0; v < prod.v.size; ++v)
    for (int u = 0; u < prod.v.size; ++u) {
      if (u != v) CHECK(v_map[u] != v_map[v]);
      CHECK(v_map[prod.mul(v, u)] == w.algebra->mul(v_map[v], v_map[u]));
    }
  for (int v = 0; v < prod.v.size; ++v)
    for (int h = 0; h < prod.h.size; ++h)
      CHECK(prod.act(v, h) == w.algebra->act(v_map[v], h));
}

TEST_CASE("relabel pairs each node with its subforest value") {
  // a,b both map to c in U1.
  Homomorphism alpha = into_u1({1, 1});
  Forest f = parse_forest("a(b)", kAb);
  Forest g = relabel(alpha, f);
  Alphabet paired = paired_alphabet(kAb, 2);
  CHECK(print_forest(g) == "a1(b0)");
  CHECK(parse_forest(print_forest(g), paired) == g);
  CHECK(relabel(alpha, parse_forest("0", kAb)) == Forest{});

  // Leaves always carry the value of the empty forest.
  Forest leaves = relabel(alpha, parse_forest("a+b", kAb));
  CHECK(print_forest(leaves) == "a0+b0");
}

TEST_CASE("sequential composition theorem on random forests") {
  // alpha: does some a occur; beta on the paired alphabet: is some node
  // labeled b whose subforest already contains an a.
  Homomorphism alpha = into_u1({1, 0});
  Alphabet paired = paired_alphabet(kAb, 2);
  Homomorphism beta;
  beta.alphabet = paired;
  beta.algebra = std::make_shared<ForestAlgebra>(u1());
  beta.letter_image.assign(paired.size(), 0);
  beta.letter_image[*paired.index("b1")] = 1;

  SequentialComposition comp = sequential_compose(alpha, beta);
  CHECK(validate_algebra(*comp.wreath.algebra));

  std::mt19937 rng(11);
  int h2 = beta.algebra->h.size;
  for (int trial = 0; trial < 60; ++trial) {
    Forest t = random_forest(rng, kAb, 1 + trial % 30);
    int pair = eval_forest(comp.hom, t);
    CHECK(pair / h2 == eval_forest(alpha, t));
    CHECK(pair % h2 == eval_forest(beta, relabel(alpha, t)));
  }
  CHECK_THROWS_AS(sequential_compose(alpha, alpha), std::invalid_argument);
}

TEST_CASE("expressions print and realize") {
  AlgebraExpression e = AlgebraExpression::wreath(
      {AlgebraExpression::atom_of("U1", u1()),
       AlgebraExpression::product({AlgebraExpression::atom_of("U1", u1()),
                                   AlgebraExpression::atom_of("TRIV", trivial_algebra())})});
  CHECK(to_string(e) == "W(U1,P(U1,TRIV))");
  ForestAlgebra realized = realize_expression(e);
  CHECK(validate_algebra(realized));
  CHECK(realized.h.size == 4);

  CHECK(isomorphic(realize_expression(AlgebraExpression::atom_of("U2", u2())), u2()));
  AlgebraExpression big = AlgebraExpression::wreath(
      {AlgebraExpression::atom_of("S", saturating_counter_algebra(3)),
       AlgebraExpression::atom_of("S", saturating_counter_algebra(3))});
  CHECK_THROWS_AS(realize_expression(big, 50), SizeGuardExceeded);
}
