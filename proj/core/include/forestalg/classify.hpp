#pragma once

#include <optional>
#include <string>
#include <vector>

#include "forestalg/algebra.hpp"
#include "forestalg/monoid.hpp"
#include "forestalg/terms.hpp"

namespace forestalg {

/// Outcome of an identity check. `counterexample` names the violating
/// elements; `v_aperiodic` carries is_aperiodic(V) for the checks that
/// define such a sub-flag.
struct PropertyCheck {
  bool holds = true;
  std::string counterexample;
  bool v_aperiodic = false;
  explicit operator bool() const { return holds; }
};

/// H idempotent, H commutative, and vh + h = vh for every v and h.
PropertyCheck check_ef(const ForestAlgebra& a);

/// H commutative and v(h1+h2) = vh1 + vh2; v_aperiodic = is_aperiodic(V).
PropertyCheck check_distributive(const ForestAlgebra& a);

/// H aperiodic and commutative, vg + vh = v(g+h) + v0 for every v, and
/// u(g+h) = u(g + uh) for every idempotent u; v_aperiodic = is_aperiodic(V).
PropertyCheck check_path(const ForestAlgebra& a);

/// A closure of the action maps viewed as a monoid under composition;
/// element i of the monoid is elements[i].
struct VerticalClosure {
  std::vector<Transformation> elements;
  FiniteMonoid monoid;
};

/// Least set of maps on H containing every action map and closed under
/// composition and pointwise addition: the maps of all multicontexts.
VerticalClosure vhat(const ForestAlgebra& a, int max_elements = 20000);

/// Closure under composition and m-fold self-addition with m up to |H|:
/// the maps of all uniform multicontexts.
VerticalClosure vtilde(const ForestAlgebra& a, int max_elements = 20000);

/// One derivation step of a horizontal-confusion profile.
struct ProfileStep {
  enum class Rule { Base, Apply, Sum };
  Rule rule = Rule::Base;
  int v = -1;      // Apply: the vertical element applied on top
  int left = -1;   // Apply and Sum: index of an earlier step
  int right = -1;  // Sum: index of an earlier step

  bool operator==(const ProfileStep&) const = default;
};

/// Profile of a multicontext p relative to a subset G: the family of value
/// sets p[g/x][G] over g in G and holes x, and the value set p[G]. Subsets
/// of H are bitmasks.
struct Profile {
  std::vector<unsigned> family;  // sorted and deduplicated
  unsigned values = 0;

  bool operator==(const Profile&) const = default;
  bool operator<(const Profile& o) const {
    return values != o.values ? values < o.values : family < o.family;
  }
};

struct ConfusionWitness {
  enum class Kind { Vertical, UniformVertical, Horizontal };
  Kind kind = Kind::Vertical;

  // Vertical kinds: a multicontext map with a value cycle of length > 1.
  Provenance expression;   // derivation from named action maps
  std::vector<int> cycle;  // g_0..g_{k-1}, k > 1; expression maps g_i to g_{(i+1) mod k}

  // Horizontal: the confused subset and the derivation of a profile whose
  // family members all contain the subset.
  std::vector<int> subset;         // G, |G| > 1
  std::vector<ProfileStep> trace;  // last step derives `profile`
  Profile profile;
};

/// Re-derives the witness against the algebra by direct evaluation and
/// checks the confusion equalities it claims.
CheckResult verify_witness(const ForestAlgebra& a, const ConfusionWitness& w);

struct ConfusionVerdict {
  bool confused = false;
  std::optional<ConfusionWitness> witness;
};

/// Confused iff vhat(a) is not aperiodic; the witness iterates a
/// non-aperiodic map to a cycle on H.
ConfusionVerdict vertical_confusion(const ForestAlgebra& a, int max_elements = 20000);

/// As vertical_confusion over vtilde(a); the witness derivation uses only
/// composition and self-addition.
ConfusionVerdict uniform_vertical_confusion(const ForestAlgebra& a, int max_elements = 20000);

/// Confused iff some G with |G| > 1 admits a derivable profile whose family
/// members are all supersets of G. The subset loop is guarded: |H| must not
/// exceed max_h_for_subsets. Subsets are tried in increasing size order and
/// the first confusion wins.
ConfusionVerdict horizontal_confusion(const ForestAlgebra& a, int max_h_for_subsets = 12,
                                      int max_profiles = 200000);

/// p_1 = p; p_k places a copy of p_(k-1) in every hole of p, so the hole
/// count is holes(p)^k.
Multicontext amplify(const Multicontext& p, int k);

enum class Verdict { Excluded, ConditionsPass, Skipped };

std::string to_string(Verdict v);

/// Necessary-condition summary. The EF verdict is exact; CTL, FO and graded
/// PDL report exclusions by confusion (plus non-aperiodic V for FO); CTL*
/// and PDL get conditional notes relative to FO and graded PDL.
struct ClassificationReport {
  PropertyCheck ef;
  PropertyCheck distributive;
  PropertyCheck path;
  bool h_idempotent = false;
  bool h_commutative = false;
  bool v_aperiodic = false;
  // Detector slots are empty when a size guard tripped.
  std::optional<ConfusionVerdict> vertical;
  std::optional<ConfusionVerdict> uniform;
  std::optional<ConfusionVerdict> horizontal;
  Verdict ctl = Verdict::ConditionsPass;
  Verdict fo = Verdict::ConditionsPass;
  Verdict graded_pdl = Verdict::ConditionsPass;
  std::string ctl_star_note;
  std::string pdl_note;
};

ClassificationReport classification_report(const ForestAlgebra& a, int max_elements = 20000);

}  // namespace forestalg
