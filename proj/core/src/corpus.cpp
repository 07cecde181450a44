#include "forestalg/corpus.hpp"

#include <algorithm>
#include <stdexcept>

namespace forestalg {
namespace {

Recognizer recognizer_from_actions(const Alphabet& alphabet, const FiniteMonoid& h,
                                   const std::vector<std::pair<std::string, std::vector<int>>>& actions,
                                   std::vector<bool> accepting) {
  GeneratedAlgebra ga = algebra_from_actions(h, actions);
  Homomorphism hom;
  hom.alphabet = alphabet;
  hom.algebra = ga.algebra;
  // actions are passed in alphabet order
  hom.letter_image = ga.generator_index;
  return Recognizer{std::move(hom), std::move(accepting)};
}

// Any node labeled a. EF-definable; syntactic algebra is U1.
ExampleBundle some_node_a() {
  ExampleBundle b;
  b.name = "some-node-a";
  b.alphabet = Alphabet{{"a", "b"}};
  b.member = [](const Forest& f) {
    for (const Word& w : path_multiset(f))
      if (w.back() == "a") return true;
    return false;
  };
  b.formula = ef(Formula::label_of("a"));
  b.recognizer = compile_to_recognizer(*b.formula, b.alphabet);
  b.expected.ef = true;
  b.expected.ctl = Verdict::ConditionsPass;
  b.expected.fo = Verdict::ConditionsPass;
  b.expected.graded_pdl = Verdict::ConditionsPass;
  b.expected.v_aperiodic = true;
  b.expected.syntactic_h_size = 2;
  b.expected.isomorphic_to = "U1";
  return b;
}

// Some path from a root that stays in B = {a} until it ends at a b. Not
// EF-definable; syntactic algebra is U2 (the extra vertical is the letter c,
// which freezes its subtree to the rejecting state).
ExampleBundle some_path_bstar_b() {
  ExampleBundle b;
  b.name = "some-path-Bstar-b";
  b.alphabet = Alphabet{{"a", "b", "c"}};
  b.member = [](const Forest& f) {
    for (const Word& w : path_multiset(f)) {
      if (w.back() != "b") continue;
      bool inner_a = true;
      for (size_t i = 0; i + 1 < w.size(); ++i)
        if (w[i] != "a") inner_a = false;
      if (inner_a) return true;
    }
    return false;
  };
  b.formula = ctl_eu(Formula::label_of("a"), Formula::label_of("b"));
  b.recognizer = compile_to_recognizer(*b.formula, b.alphabet);
  b.expected.ef = false;
  b.expected.ctl = Verdict::ConditionsPass;
  b.expected.fo = Verdict::ConditionsPass;
  b.expected.graded_pdl = Verdict::ConditionsPass;
  b.expected.v_aperiodic = true;
  b.expected.syntactic_h_size = 2;
  b.expected.isomorphic_to = "U2";
  return b;
}

// Some maximal path spells a word in (ab)^+, read root to leaf. The empty
// forest is not a member. H tracks, per forest, which of the two alternation
// phases some maximal path realizes: indices 0 empty, 1 neither, 2 "starts
// at b" (word in b(ab)*), 3 "starts at a" (word in (ab)+), 4 both.
ExampleBundle l1() {
  ExampleBundle b;
  b.name = "L1";
  b.alphabet = Alphabet{{"a", "b"}};
  b.member = [](const Forest& f) {
    for (const Word& w : maximal_path_words(f)) {
      if (w.empty() || w.size() % 2 != 0) continue;
      bool alternating = true;
      for (size_t i = 0; i < w.size(); ++i)
        if (w[i] != (i % 2 ? "b" : "a")) alternating = false;
      if (alternating) return true;
    }
    return false;
  };
  Formula nonempty = Formula::ek(1, {}, "1+");
  Formula nonleaf_b = Formula::conjunction(Formula::label_of("b"), nonempty);
  Formula leaf_b =
      Formula::conjunction(Formula::label_of("b"), Formula::negation(nonleaf_b));
  b.formula = Formula::ek(1, {nonleaf_b, leaf_b}, "(31)*32");
  FiniteMonoid h5;
  h5.size = 5;
  h5.identity = 0;
  h5.table = {0, 1, 2, 3, 4,   //
              1, 1, 2, 3, 4,   //
              2, 2, 2, 4, 4,   //
              3, 3, 4, 3, 4,   //
              4, 4, 4, 4, 4};
  std::vector<int> va = {1, 1, 3, 1, 3};
  std::vector<int> vb = {2, 1, 1, 2, 2};
  b.recognizer = recognizer_from_actions(b.alphabet, h5, {{"a", va}, {"b", vb}},
                                         {false, false, false, true, true});
  b.expected.ef = false;
  b.expected.ctl = Verdict::Excluded;
  b.expected.fo = Verdict::ConditionsPass;
  b.expected.graded_pdl = Verdict::ConditionsPass;
  b.expected.v_aperiodic = true;
  b.expected.syntactic_h_size = 5;
  b.expected.vertical_cycle = CycleWitness{"a(_) + b(_)", {"b", "a(b)"}};
  return b;
}

// Single unlabeled binary tree in which every root-to-leaf path has an even
// number of edges. H indices: 0 empty, 1 all-even, 2 all-odd, 3 two all-even
// trees, 4 two all-odd trees, 5 dead.
ExampleBundle l2() {
  ExampleBundle b;
  b.name = "L2";
  b.alphabet = Alphabet{{"a"}};
  b.member = [](const Forest& f) {
    // 0 all paths even, 1 all paths odd, 2 neither or non-binary
    std::function<int(const Tree&)> parity = [&](const Tree& t) -> int {
      if (t.children.empty()) return 0;
      if (t.children.size() != 2) return 2;
      int l = parity(t.children[0]);
      int r = parity(t.children[1]);
      if (l != r || l == 2) return 2;
      return l == 1 ? 0 : 1;
    };
    return f.roots.size() == 1 && parity(f.roots[0]) == 0;
  };
  FiniteMonoid h6;
  h6.size = 6;
  h6.identity = 0;
  h6.table = {0, 1, 2, 3, 4, 5,   //
              1, 3, 5, 5, 5, 5,   //
              2, 5, 4, 5, 5, 5,   //
              3, 5, 5, 5, 5, 5,   //
              4, 5, 5, 5, 5, 5,   //
              5, 5, 5, 5, 5, 5};
  std::vector<int> va = {1, 5, 5, 2, 1, 5};
  b.recognizer = recognizer_from_actions(b.alphabet, h6, {{"a", va}},
                                         {false, true, false, false, false, false});
  b.expected.ef = false;
  b.expected.ctl = Verdict::Excluded;
  b.expected.fo = Verdict::Excluded;
  b.expected.graded_pdl = Verdict::ConditionsPass;
  b.expected.v_aperiodic = true;
  b.expected.syntactic_h_size = 6;
  b.expected.uniform_cycle = CycleWitness{"a(_ + _)", {"a", "a(a + a)"}};
  return b;
}

// Well-formed boolean expression trees over {zero, one, and, or} evaluating
// to true: leaves are constants, interior nodes are gates of any arity >= 1.
// H counts true children (capped at 2), false children (capped at 2) and
// whether any child is ill-formed; index (t, f, bad) = (t*3 + f)*2 + bad.
ExampleBundle l3() {
  ExampleBundle b;
  b.name = "L3";
  b.alphabet = Alphabet{{"zero", "one", "and", "or"}};
  b.member = [](const Forest& f) {
    // 0 ill-formed, 1 evaluates false, 2 evaluates true
    std::function<int(const Tree&)> value = [&](const Tree& t) -> int {
      bool leaf = t.children.empty();
      if (t.label == "zero") return leaf ? 1 : 0;
      if (t.label == "one") return leaf ? 2 : 0;
      if (leaf) return 0;
      bool any_false = false, any_true = false;
      for (const Tree& c : t.children) {
        int v = value(c);
        if (v == 0) return 0;
        any_false = any_false || v == 1;
        any_true = any_true || v == 2;
      }
      if (t.label == "and") return any_false ? 1 : 2;
      return any_true ? 2 : 1;
    };
    return f.roots.size() == 1 && value(f.roots[0]) == 2;
  };
  auto idx = [](int t, int f, int bad) { return (t * 3 + f) * 2 + bad; };
  FiniteMonoid h18;
  h18.size = 18;
  h18.identity = 0;
  h18.table.assign(18 * 18, 0);
  for (int i = 0; i < 18; ++i)
    for (int j = 0; j < 18; ++j) {
      int t = std::min(i / 6 + j / 6, 2);
      int f = std::min(i / 2 % 3 + j / 2 % 3, 2);
      int bad = std::min(i % 2 + j % 2, 1);
      h18.table[i * 18 + j] = idx(t, f, bad);
    }
  std::vector<int> zero_row(18), one_row(18), and_row(18), or_row(18);
  for (int i = 0; i < 18; ++i) {
    bool empty = i == 0;
    bool bad = i % 2 == 1;
    int t = i / 6, f = i / 2 % 3;
    zero_row[i] = empty ? idx(0, 1, 0) : idx(0, 0, 1);
    one_row[i] = empty ? idx(1, 0, 0) : idx(0, 0, 1);
    and_row[i] = (empty || bad) ? idx(0, 0, 1) : (f >= 1 ? idx(0, 1, 0) : idx(1, 0, 0));
    or_row[i] = (empty || bad) ? idx(0, 0, 1) : (t >= 1 ? idx(1, 0, 0) : idx(0, 1, 0));
  }
  std::vector<bool> accepting(18, false);
  accepting[idx(1, 0, 0)] = true;
  b.recognizer = recognizer_from_actions(
      b.alphabet, h18,
      {{"zero", zero_row}, {"one", one_row}, {"and", and_row}, {"or", or_row}},
      accepting);
  b.expected.ef = false;
  b.expected.graded_pdl = Verdict::Excluded;
  b.expected.v_aperiodic = true;
  b.expected.syntactic_h_size = 6;
  b.expected.horizontal =
      HorizontalWitness{"or(and(_ + _) + and(_ + _))", {"zero", "one"}, 2};
  b.oracle_bound = 6;
  return b;
}

void add_line(SuiteReport& r, const ExampleBundle& b, std::string fact, bool pass,
              std::string detail = "") {
  r.ok = r.ok && pass;
  r.lines.push_back({b.name, std::move(fact), pass, std::move(detail)});
}

std::string expected_got(const std::string& expected, const std::string& got) {
  return "expected " + expected + ", got " + got;
}

// Filling all holes of w.multicontext with the class of either listed forest
// must yield the class of the other (a 2-cycle of the induced map on H).
void replay_cycle(SuiteReport& r, const ExampleBundle& b, const Homomorphism& hom,
                  const CycleWitness& w, const std::string& fact) {
  Multicontext p = parse_multicontext(w.multicontext, b.alphabet);
  int c0 = eval_forest(hom, parse_forest(w.forests[0], b.alphabet));
  int c1 = eval_forest(hom, parse_forest(w.forests[1], b.alphabet));
  int n = hole_count(p);
  std::vector<int> fill0(n, c0), fill1(n, c1);
  bool pass = c0 != c1 && eval_multicontext(hom, p, fill0) == c1 &&
              eval_multicontext(hom, p, fill1) == c0;
  add_line(r, b, fact, pass,
           w.multicontext + " on " + w.forests[0] + ", " + w.forests[1]);
}

// With holes ranging over the classes {c0, c1} of the listed forests, fixing
// any one hole to either class must still realize both classes overall, in
// the multicontext and in each amplification up to amplify_rounds.
void replay_horizontal(SuiteReport& r, const ExampleBundle& b, const Homomorphism& hom,
                       const HorizontalWitness& w, const std::string& fact) {
  Multicontext p = parse_multicontext(w.multicontext, b.alphabet);
  int c0 = eval_forest(hom, parse_forest(w.forests[0], b.alphabet));
  int c1 = eval_forest(hom, parse_forest(w.forests[1], b.alphabet));
  bool pass = c0 != c1;
  std::string detail;
  for (int round = 1; pass && round <= w.amplify_rounds; ++round) {
    Multicontext q = amplify(p, round);
    int n = hole_count(q);
    if (n > 20) {
      pass = false;
      detail = "amplification has too many holes to enumerate";
      break;
    }
    // reached[hole][fixed bit][class bit]
    std::vector<std::array<std::array<bool, 2>, 2>> reached(
        n, {{{false, false}, {false, false}}});
    std::vector<int> fill(n);
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
      for (int i = 0; i < n; ++i) fill[i] = (mask >> i & 1) ? c1 : c0;
      int value = eval_multicontext(hom, q, fill);
      int cls = value == c0 ? 0 : value == c1 ? 1 : -1;
      if (cls < 0) continue;
      for (int i = 0; i < n; ++i) reached[i][mask >> i & 1][cls] = true;
    }
    for (int i = 0; i < n && pass; ++i)
      for (int bit = 0; bit < 2 && pass; ++bit)
        if (!reached[i][bit][0] || !reached[i][bit][1]) {
          pass = false;
          detail = "round " + std::to_string(round) + ": hole " + std::to_string(i) +
                   " fixed to " + w.forests[bit] + " loses a class";
        }
  }
  if (pass) detail = w.multicontext + " over " + w.forests[0] + ", " + w.forests[1];
  add_line(r, b, fact, pass, detail);
}

}  // namespace

const std::vector<std::string>& example_names() {
  static const std::vector<std::string> names = {"some-node-a", "some-path-Bstar-b",
                                                 "L1", "L2", "L3"};
  return names;
}

ExampleBundle get_example(const std::string& name) {
  if (name == "some-node-a") return some_node_a();
  if (name == "some-path-Bstar-b") return some_path_bstar_b();
  if (name == "L1") return l1();
  if (name == "L2") return l2();
  if (name == "L3") return l3();
  throw std::invalid_argument("unknown example: " + name);
}

SuiteReport check_bundle(const ExampleBundle& b) {
  SuiteReport r;
  SyntacticAlgebra syn = syntactic_algebra(b.recognizer);
  const Homomorphism& hom = syn.recognizer.hom;
  const ForestAlgebra& alg = *hom.algebra;
  ClassificationReport rep = classification_report(alg);

  if (b.expected.syntactic_h_size)
    add_line(r, b, "syntactic H size", (int)alg.h.size == *b.expected.syntactic_h_size,
             expected_got(std::to_string(*b.expected.syntactic_h_size),
                          std::to_string(alg.h.size)));
  if (b.expected.isomorphic_to) {
    const std::string& which = *b.expected.isomorphic_to;
    ForestAlgebra target = which == "U1" ? u1() : u2();
    add_line(r, b, "isomorphic to " + which, isomorphic(alg, target));
  }
  if (b.expected.ef)
    add_line(r, b, "EF identities", rep.ef.holds == *b.expected.ef,
             rep.ef.holds ? "identities hold" : rep.ef.counterexample);
  if (b.expected.ctl)
    add_line(r, b, "CTL verdict", rep.ctl == *b.expected.ctl,
             expected_got(to_string(*b.expected.ctl), to_string(rep.ctl)));
  if (b.expected.fo)
    add_line(r, b, "FO verdict", rep.fo == *b.expected.fo,
             expected_got(to_string(*b.expected.fo), to_string(rep.fo)));
  if (b.expected.graded_pdl)
    add_line(r, b, "graded PDL verdict", rep.graded_pdl == *b.expected.graded_pdl,
             expected_got(to_string(*b.expected.graded_pdl), to_string(rep.graded_pdl)));
  if (b.expected.v_aperiodic)
    add_line(r, b, "V aperiodic", rep.v_aperiodic == *b.expected.v_aperiodic,
             expected_got(*b.expected.v_aperiodic ? "true" : "false",
                          rep.v_aperiodic ? "true" : "false"));

  // Every detector-produced witness must replay against the algebra.
  if (rep.vertical && rep.vertical->confused && rep.vertical->witness) {
    CheckResult ok = verify_witness(alg, *rep.vertical->witness);
    add_line(r, b, "vertical witness verifies", ok.ok, ok.detail);
  }
  if (rep.uniform && rep.uniform->confused && rep.uniform->witness) {
    CheckResult ok = verify_witness(alg, *rep.uniform->witness);
    add_line(r, b, "uniform witness verifies", ok.ok, ok.detail);
  }
  if (rep.horizontal && rep.horizontal->confused && rep.horizontal->witness) {
    CheckResult ok = verify_witness(alg, *rep.horizontal->witness);
    add_line(r, b, "horizontal witness verifies", ok.ok, ok.detail);
  }

  if (b.expected.vertical_cycle)
    replay_cycle(r, b, hom, *b.expected.vertical_cycle, "vertical cycle replays");
  if (b.expected.uniform_cycle)
    replay_cycle(r, b, hom, *b.expected.uniform_cycle, "uniform cycle replays");
  if (b.expected.horizontal) {
    replay_horizontal(r, b, hom, *b.expected.horizontal, "horizontal witness replays");
    // The detector's first confused subset should be the classes of the two
    // listed forests.
    if (rep.horizontal && rep.horizontal->confused && rep.horizontal->witness) {
      std::vector<int> expect = {
          eval_forest(hom, parse_forest(b.expected.horizontal->forests[0], b.alphabet)),
          eval_forest(hom, parse_forest(b.expected.horizontal->forests[1], b.alphabet))};
      std::sort(expect.begin(), expect.end());
      std::vector<int> got = rep.horizontal->witness->subset;
      std::sort(got.begin(), got.end());
      add_line(r, b, "horizontal subset matches", got == expect);
    }
  }
  return r;
}

SuiteReport run_paper_suite() {
  SuiteReport all;
  for (const std::string& name : example_names()) {
    SuiteReport one = check_bundle(get_example(name));
    all.ok = all.ok && one.ok;
    for (SuiteLine& line : one.lines) all.lines.push_back(std::move(line));
  }
  return all;
}

}  // namespace forestalg
