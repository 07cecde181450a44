#include "forestalg/logic.hpp"

#include "doctest.h"
#include "forestalg/products.hpp"

using namespace forestalg;

namespace {

const Alphabet kAb({"a", "b"});

std::vector<int> word(std::initializer_list<int> digits) {
  std::vector<int> w;
  for (int d : digits) w.push_back(d - 1);  // tests speak 1-based like regexes
  return w;
}

}  // namespace

TEST_CASE("regex_to_dfa recognizes the written language") {
  WordAutomaton all = regex_to_dfa("1*", 1);
  CHECK(all.states == 1);
  CHECK(all.accepts({}));
  CHECK(all.accepts(word({1, 1, 1})));

  WordAutomaton parity = regex_to_dfa("(12)*", 2);
  CHECK(parity.accepts({}));
  CHECK(parity.accepts(word({1, 2})));
  CHECK(parity.accepts(word({1, 2, 1, 2})));
  CHECK_FALSE(parity.accepts(word({1})));
  CHECK_FALSE(parity.accepts(word({2, 1})));

  WordAutomaton ef_shape = regex_to_dfa("2*1", 2);
  CHECK(ef_shape.accepts(word({1})));
  CHECK(ef_shape.accepts(word({2, 2, 1})));
  CHECK_FALSE(ef_shape.accepts(word({1, 1})));
  CHECK_FALSE(ef_shape.accepts(word({2})));
  CHECK(ef_shape.states == 3);  // waiting, accepted, dead

  WordAutomaton plus = regex_to_dfa("1+", 1);
  CHECK_FALSE(plus.accepts({}));
  CHECK(plus.accepts(word({1})));

  WordAutomaton alt = regex_to_dfa("1|2 2", 2);
  CHECK(alt.accepts(word({1})));
  CHECK(alt.accepts(word({2, 2})));
  CHECK_FALSE(alt.accepts(word({2})));

  CHECK_THROWS_AS(regex_to_dfa("3", 2), ParseError);
  CHECK_THROWS_AS(regex_to_dfa("(1", 2), ParseError);
  CHECK_THROWS_AS(regex_to_dfa("*", 2), ParseError);
}

TEST_CASE("minimize_dfa merges equivalent states") {
  // Two redundant copies of an accept-everything automaton.
  WordAutomaton a;
  a.states = 3;
  a.initial = 0;
  a.letters = 1;
  a.transition = {1, 2, 1};
  a.final_states = {true, true, true};
  WordAutomaton m = minimize_dfa(a);
  CHECK(m.states == 1);
  CHECK(m.final_states[0]);
}

TEST_CASE("dfa aperiodicity") {
  CHECK(dfa_is_aperiodic(regex_to_dfa("2*1", 2)));
  CHECK(dfa_is_aperiodic(regex_to_dfa("1*3", 3)));
  CHECK(dfa_is_aperiodic(regex_to_dfa("1+", 1)));
  // Strict alternation is star-free (no 11 or 22 factor plus endpoints),
  // while even length over one letter genuinely counts mod 2.
  CHECK(dfa_is_aperiodic(regex_to_dfa("(12)*", 2)));
  CHECK_FALSE(dfa_is_aperiodic(regex_to_dfa("(11)*", 1)));
  CHECK(dfa_is_aperiodic(regex_to_dfa("", 1)));
}

TEST_CASE("unambiguous families cover every tree exactly once") {
  std::vector<std::vector<Formula>> families = {
      unambiguous_family({}),
      unambiguous_family({Formula::label_of("a")}),
      unambiguous_family({Formula::label_of("a"), Formula::label_of("b")}),
      unambiguous_family({ef(Formula::label_of("a")), Formula::label_of("a")}),
  };
  CHECK(families[0].size() == 1);
  CHECK(families[1].size() == 2);
  CHECK(families[2].size() == 3);

  for (const auto& family : families) {
    for_each_forest(kAb, 5, [&](const Forest& f) {
      if (f.roots.size() != 1) return;
      int holds = 0;
      for (const Formula& member : family) holds += tree_sat(f.roots[0], member);
      CHECK(holds == 1);
    });
  }
}

TEST_CASE("EF satisfaction") {
  Formula f = ef(Formula::label_of("a"));
  CHECK(forest_sat(parse_forest("b(a)", kAb), f));
  CHECK_FALSE(forest_sat(parse_forest("b", kAb), f));
  CHECK(forest_sat(parse_forest("a", kAb), f));  // forest semantics is non-strict
  CHECK(forest_sat(parse_forest("b(b(b+a))", kAb), f));
  CHECK_FALSE(forest_sat(parse_forest("0", kAb), f));

  // Tree satisfaction is strict: only proper subtrees count.
  CHECK_FALSE(tree_sat(Tree::leaf("a"), f));
  CHECK(tree_sat(parse_forest("a(a)", kAb).roots[0], f));
  CHECK(tree_sat(parse_forest("b(b+a)", kAb).roots[0], f));
}

TEST_CASE("E^k counts nodes with accepted paths") {
  Formula three = Formula::ek(3, {}, "1+");
  Alphabet one({"a"});
  CHECK(forest_sat(parse_forest("a(a)+a", one), three));
  CHECK_FALSE(forest_sat(parse_forest("a+a", one), three));
  CHECK(forest_sat(parse_forest("a+a+a", one), three));

  // Count a-nodes only: family {a, !a}, paths ending in letter 1 with
  // anything before.
  Formula two_a = Formula::ek(2, {Formula::label_of("a")}, "(1|2)*1");
  CHECK(forest_sat(parse_forest("b(a+b(a))", kAb), two_a));
  CHECK_FALSE(forest_sat(parse_forest("b(a+b(b))", kAb), two_a));
}

TEST_CASE("EU agrees with EF when the guard is true") {
  Formula phi = Formula::label_of("a");
  Formula eu = ctl_eu(Formula::truth(true), phi);
  Formula plain = ef(phi);
  for_each_forest(kAb, 6, [&](const Forest& f) {
    CHECK(forest_sat(f, eu) == forest_sat(f, plain));
  });
}

TEST_CASE("EU requires the guard along the path") {
  // EU(b, a): an a reachable through b-only ancestors.
  Formula f = ctl_eu(Formula::label_of("b"), Formula::label_of("a"));
  CHECK(forest_sat(parse_forest("b(b(a))", kAb), f));
  CHECK(forest_sat(parse_forest("a", kAb), f));
  CHECK(forest_sat(parse_forest("b(a(b))", kAb), f));  // a itself ends the path
  Alphabet abc({"a", "b", "c"});
  CHECK_FALSE(forest_sat(parse_forest("b(c(a))", abc), f));  // c breaks the guard
  Formula g = ctl_eu(Formula::label_of("b"), Formula::label_of("a"));
  CHECK_FALSE(forest_sat(parse_forest("c(a)", abc), g));
  CHECK(forest_sat(parse_forest("b(a)+c", abc), g));
}

TEST_CASE("formula parsing and printing round-trip") {
  for (const char* text :
       {"a", "true", "!a", "a & b", "a | b & !c", "EF a", "EF (a & b)", "EU(a, b)",
        "E[3]{}/1+/", "E[1]{a; b}/(31)*32/", "!(a | b)", "EF EF a"}) {
    Formula f = parse_formula(text);
    Formula again = parse_formula(to_string(f));
    CHECK(again == f);
  }
  CHECK(to_string(parse_formula("EF a")) == "EF a");
  CHECK(to_string(parse_formula("EU( a ,b )")) == "EU(a, b)");
  CHECK(to_string(parse_formula("E[2]{a}/2*1/")) == "E[2]{a}/2*1/");

  CHECK_THROWS_AS(parse_formula("a &"), ParseError);
  CHECK_THROWS_AS(parse_formula("EU(a)"), ParseError);
  CHECK_THROWS_AS(parse_formula("E[0]{}/1/"), ParseError);
  CHECK_THROWS_AS(parse_formula("E[1]{a}/3*1/"), ParseError);  // letter out of range
  CHECK_THROWS_AS(parse_formula("(a"), ParseError);
  CHECK_THROWS_AS(parse_formula("true false"), ParseError);

  // Parsed sugar is the real construction.
  CHECK(parse_formula("EF a") == ef(Formula::label_of("a")));
  CHECK(parse_formula("EU(a, b)") == ctl_eu(Formula::label_of("a"), Formula::label_of("b")));
}

TEST_CASE("forest_sat rejects tree-only formulas") {
  CHECK_THROWS_AS(forest_sat(parse_forest("a", kAb), Formula::label_of("a")),
                  std::invalid_argument);
  CHECK(is_forest_formula(ef(Formula::label_of("a"))));
  CHECK_FALSE(is_forest_formula(Formula::label_of("a")));
  CHECK_FALSE(is_forest_formula(Formula::negation(Formula::label_of("a"))));
  CHECK(is_forest_formula(Formula::truth(true)));
}

TEST_CASE("compile matches forest_sat on small forests") {
  std::vector<Formula> formulas = {
      Formula::truth(true),
      Formula::truth(false),
      ef(Formula::label_of("a")),
      Formula::negation(ef(Formula::label_of("a"))),
      ctl_eu(Formula::label_of("b"), Formula::label_of("a")),
      Formula::ek(2, {Formula::label_of("a")}, "(1|2)*1"),
      Formula::ek(3, {}, "1+"),
      Formula::conjunction(ef(Formula::label_of("a")), ef(Formula::label_of("b"))),
      ef(Formula::conjunction(Formula::label_of("b"), ef(Formula::label_of("a")))),
  };
  for (const Formula& f : formulas) {
    Recognizer r = compile_to_recognizer(f, kAb);
    CHECK(validate_algebra(*r.hom.algebra).ok);
    for_each_forest(kAb, 5, [&](const Forest& s) {
      CHECK(r.accepts(s) == forest_sat(s, f));
    });
  }
}

TEST_CASE("compile E^3 over one letter") {
  Alphabet one({"a"});
  Recognizer r = compile_to_recognizer(Formula::ek(3, {}, "1+"), one);
  CHECK(r.accepts(parse_forest("a(a)+a", one)));
  CHECK_FALSE(r.accepts(parse_forest("a+a", one)));
  // Counting saturates: H has the values 0..3.
  CHECK(r.hom.algebra->h.size == 4);
}

TEST_CASE("syntactic algebra of compiled EF(a) is u1") {
  Recognizer r = compile_to_recognizer(ef(Formula::label_of("a")), kAb);
  SyntacticAlgebra syn = syntactic_algebra(r);
  CHECK(isomorphic(*syn.recognizer.hom.algebra, u1()));
}

TEST_CASE("compose_languages relabels by partition blocks") {
  // Partition forests over {a,b} by "contains an a" using U1; outer language:
  // some node whose subforest contains an a, i.e. letter (x, block 1).
  Partition parts;
  parts.hom.alphabet = kAb;
  parts.hom.algebra = std::make_shared<ForestAlgebra>(u1());
  parts.hom.letter_image = {1, 0};
  parts.block_of = {0, 1};
  parts.block_count = 2;
  CHECK(validate_partition(parts).ok);

  Alphabet paired = paired_alphabet(kAb, 2);
  Recognizer outer;
  outer.hom.alphabet = paired;
  outer.hom.algebra = std::make_shared<ForestAlgebra>(u1());
  outer.hom.letter_image.assign(paired.size(), 0);
  outer.hom.letter_image[*paired.index("a1")] = 1;
  outer.hom.letter_image[*paired.index("b1")] = 1;
  outer.accepting = {false, true};

  Recognizer composed = compose_languages(outer, parts);
  for_each_forest(kAb, 6, [&](const Forest& f) {
    // Reference semantics: relabel by block, then ask the outer language.
    Forest relabeled = relabel(parts.hom, f);
    bool direct = outer.accepts(relabeled);  // blocks equal h indices here
    CHECK(composed.accepts(f) == direct);
  });

  Partition broken = parts;
  broken.block_of = {0, 5};
  CHECK_FALSE(validate_partition(broken).ok);
  CHECK_THROWS_AS(compose_languages(outer, broken), std::invalid_argument);
}
