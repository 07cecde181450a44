#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "forestalg/algebra.hpp"
#include "forestalg/terms.hpp"

namespace forestalg {

/// Complete deterministic automaton over letters 0..letters-1. Formula path
/// languages use letter i for the (i+1)-th member of an unambiguous family,
/// matching the 1-based digits of the regex syntax.
struct WordAutomaton {
  int states = 1;
  int initial = 0;
  int letters = 0;
  std::vector<int> transition;  // state * letters + letter -> state
  std::vector<bool> final_states;

  int next(int state, int letter) const { return transition[state * letters + letter]; }
  bool accepts(const std::vector<int>& word) const;

  bool operator==(const WordAutomaton&) const = default;
};

CheckResult validate_automaton(const WordAutomaton& a);

/// Minimal complete DFA of the same language (reachable part, merged
/// equivalent states; a sink is kept only if needed for completeness).
WordAutomaton minimize_dfa(const WordAutomaton& a);

/// Regex over the digits 1..letters with union '|', concatenation by
/// juxtaposition, '*', '+' and parentheses; whitespace ignored. The result
/// is minimized and complete.
WordAutomaton regex_to_dfa(std::string_view regex, int letters);

/// True iff the transition monoid of the minimal DFA contains no nontrivial
/// group, i.e. the word language is first-order definable.
bool dfa_is_aperiodic(const WordAutomaton& a);

/// Formula AST. Label formulas are tree formulas; Ek nodes are forest
/// formulas; booleans preserve the level of their operands. Every forest
/// formula doubles as a tree formula: the tree a(s) satisfies it iff the
/// child forest s does (strict semantics).
struct Formula {
  enum class Kind { Label, True, False, Not, And, Or, Ek };
  enum class Sugar { None, Ef, Eu };

  Kind kind = Kind::True;
  std::string label;                // Label
  std::vector<Formula> children;    // 1 for Not, 2 for And/Or
  int count = 0;                    // Ek: k >= 1
  std::vector<Formula> family;      // Ek: unambiguous family, n+1 members
  WordAutomaton automaton;          // Ek: letters == family.size()
  std::vector<Formula> written;     // Ek: the generators as written, for printing
  std::string regex;                // Ek: path regex as written
  Sugar sugar = Sugar::None;        // Ek: EF/EU rendering

  static Formula label_of(std::string name);
  static Formula truth(bool value);
  static Formula negation(Formula f);
  static Formula conjunction(Formula a, Formula b);
  static Formula disjunction(Formula a, Formula b);
  /// E^k L where L is given by `regex` over digits 1..n+1 indexing
  /// unambiguous_family(psis).
  static Formula ek(int k, std::vector<Formula> psis, std::string regex);

  bool operator==(const Formula&) const = default;
};

/// [psi_1 .. psi_n] -> [phi_1 .. phi_{n+1}] with phi_i = psi_i and not any
/// earlier psi, and phi_{n+1} the remainder; every tree satisfies exactly
/// one member.
std::vector<Formula> unambiguous_family(const std::vector<Formula>& psis);

/// EF psi = E^1 over {psi, !psi} with path language (!psi)* psi.
Formula ef(Formula psi);

/// EU(psi, phi) = E^1 over {psi&!phi, !psi&!phi, rest=phi} with path
/// language (psi&!phi)* phi.
Formula ctl_eu(Formula psi, Formula phi);

/// True iff a formula may be evaluated on forests (no bare Label nodes).
bool is_forest_formula(const Formula& f);

bool tree_sat(const Tree& t, const Formula& f);
bool forest_sat(const Forest& s, const Formula& f);

/// Grammar: `a`, `true`, `false`, `!f`, `f & f`, `f | f`, `EF f`,
/// `EU(f, f)`, `E[k]{psi1;...;psin}/regex/`, parentheses; `!` and `EF` bind
/// tightest, then `&`, then `|`.
Formula parse_formula(std::string_view text);
std::string to_string(const Formula& f);

/// Recognizer over `alphabet` computing forest satisfaction of `f`; the
/// underlying algebra is the reachable part of the compiled construction.
Recognizer compile_to_recognizer(const Formula& f, const Alphabet& alphabet,
                                 int max_elements = 20000);

/// Partition of the forests over an alphabet: the block of s is
/// block_of[eval_forest(hom, s)].
struct Partition {
  Homomorphism hom;
  std::vector<int> block_of;  // H index -> block, 0-based
  int block_count = 0;
};

CheckResult validate_partition(const Partition& p);

/// Language composition L[B1..Bk]: accepts s iff `outer` accepts the forest
/// obtained by relabeling every node (a) of s to the pair (a, block of the
/// node's subforest). `outer` must live on paired_alphabet(A, block_count).
Recognizer compose_languages(const Recognizer& outer, const Partition& parts);

}  // namespace forestalg
