#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "forestalg/algebra.hpp"
#include "forestalg/classify.hpp"
#include "forestalg/logic.hpp"
#include "forestalg/terms.hpp"

namespace forestalg {

/// Hand-computed action cycle: filling every hole of the multicontext with
/// the class of one listed forest yields the class of the other.
struct CycleWitness {
  std::string multicontext;
  std::array<std::string, 2> forests;
};

/// Hand-computed horizontal confusion instance: with the holes of the
/// multicontext, and of its amplifications, ranging over the classes of the
/// two listed forests, fixing any single hole still realizes both classes.
struct HorizontalWitness {
  std::string multicontext;
  std::array<std::string, 2> forests;
  int amplify_rounds = 2;
};

/// Facts the suite asserts about a bundle's syntactic algebra; unset fields
/// are not checked.
struct ExpectedFacts {
  std::optional<bool> ef;
  std::optional<Verdict> ctl;
  std::optional<Verdict> fo;
  std::optional<Verdict> graded_pdl;
  std::optional<bool> v_aperiodic;
  std::optional<int> syntactic_h_size;
  std::optional<std::string> isomorphic_to;  // "U1" or "U2"
  std::optional<CycleWitness> vertical_cycle;
  std::optional<CycleWitness> uniform_cycle;
  std::optional<HorizontalWitness> horizontal;
};

/// A built-in example language: direct semantic definition, a formula when
/// the language is definable, a recognizer, and the facts to check.
struct ExampleBundle {
  std::string name;
  Alphabet alphabet;
  std::function<bool(const Forest&)> member;
  std::optional<Formula> formula;
  Recognizer recognizer;
  ExpectedFacts expected;
  int oracle_bound = 7;  // recognizer agrees with member up to this size
};

const std::vector<std::string>& example_names();

/// Throws std::invalid_argument for unknown names.
ExampleBundle get_example(const std::string& name);

struct SuiteLine {
  std::string bundle;
  std::string fact;
  bool pass = false;
  std::string detail;
};

struct SuiteReport {
  std::vector<SuiteLine> lines;
  bool ok = true;
};

/// Computes the bundle's syntactic algebra and classification report and
/// checks every expected fact, including witness replays.
SuiteReport check_bundle(const ExampleBundle& b);

/// check_bundle over every built-in example.
SuiteReport run_paper_suite();

}  // namespace forestalg
