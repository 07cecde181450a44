#pragma once

#include <memory>
#include <vector>

#include "forestalg/monoid.hpp"
#include "forestalg/terms.hpp"

namespace forestalg {

/// A pair of finite monoids with a faithful monoidal action of the vertical
/// monoid V on the horizontal monoid H, closed under the insertion elements
/// h+[] and []+h. H is written additively with identity 0, V
/// multiplicatively with identity 1.
struct ForestAlgebra {
  FiniteMonoid h;  // horizontal, additive
  FiniteMonoid v;  // vertical, multiplicative
  std::vector<int> action;    // action[vi * h.size + hi]
  std::vector<int> ins_pre;   // h -> V element acting as g |-> h+g
  std::vector<int> ins_post;  // h -> V element acting as g |-> g+h
  std::vector<std::string> h_names;  // optional, for reports
  std::vector<std::string> v_names;

  int act(int v_elem, int h_elem) const { return action[v_elem * h.size + h_elem]; }
  int add(int a, int b) const { return h.apply(a, b); }
  int mul(int v1, int v2) const { return v.apply(v1, v2); }

  std::string h_name(int i) const;
  std::string v_name(int i) const;

  bool operator==(const ForestAlgebra&) const = default;
};

using AlgebraPtr = std::shared_ptr<const ForestAlgebra>;

/// Checks both monoids, the action laws, faithfulness and that the insertion
/// elements act as claimed.
CheckResult validate_algebra(const ForestAlgebra& a);

/// H = {0, inf} with inf absorbing, V = {1, c} where c maps everything to
/// inf. The smallest algebra recognizing "some node has a given label".
ForestAlgebra u1();

/// H as in u1, V = {1, c0, cinf} with both constant maps.
ForestAlgebra u2();

/// One-element horizontal and vertical monoids.
ForestAlgebra trivial_algebra();

/// H = {0, 1, ..., cap} with saturating addition, V generated by the
/// insertion maps. A path algebra that counts up to cap.
ForestAlgebra saturating_counter_algebra(int cap);

/// Builds the algebra whose vertical monoid is the closure of the named
/// transformations and H's insertion maps under composition. The named maps
/// become the letter images when a name equals an alphabet symbol.
struct GeneratedAlgebra {
  AlgebraPtr algebra;
  std::vector<int> generator_index;  // V index per input generator, in order
};
GeneratedAlgebra algebra_from_actions(
    const FiniteMonoid& h,
    const std::vector<std::pair<std::string, std::vector<int>>>& named_actions,
    int max_elements = 20000);

/// Assignment of a vertical element to every letter; extends uniquely to all
/// forests and contexts over the alphabet.
struct Homomorphism {
  Alphabet alphabet;
  AlgebraPtr algebra;
  std::vector<int> letter_image;  // indexed by alphabet position

  int image(int letter) const { return letter_image[letter]; }
};

int eval_forest(const Homomorphism& hom, const Forest& f);
int eval_tree(const Homomorphism& hom, const Tree& t);

/// Vertical value of a one-hole context.
int eval_context(const Homomorphism& hom, const Context& p);

/// Horizontal value of a multicontext whose holes carry the given values
/// (one per hole, preorder).
int eval_multicontext(const Homomorphism& hom, const Multicontext& p,
                      const std::vector<int>& hole_values);

/// A homomorphism plus accepting subset of H; accepts(f) iff the image of f
/// is accepting.
struct Recognizer {
  Homomorphism hom;
  std::vector<bool> accepting;  // size H

  bool accepts(const Forest& f) const { return accepting[eval_forest(hom, f)]; }
};

Recognizer complement(Recognizer r);

/// Pairs two recognizers over the same alphabet; `combine` decides acceptance
/// from the component verdicts (e.g. conjunction).
Recognizer product_recognizer(const Recognizer& a, const Recognizer& b,
                              bool (*combine)(bool, bool));

/// The subalgebra generated by the letter images: H restricted to the values
/// of forests, V to the submonoid generated by letter images and the
/// insertions of reachable horizontal elements. Recognizes the same language.
struct RestrictedRecognizer {
  Recognizer recognizer;
  std::vector<int> h_embed;  // new H index -> original H index
  std::vector<int> v_embed;  // new V index -> original V index
};
RestrictedRecognizer reachable_subalgebra(const Recognizer& r);

/// Minimal recognizer of the same language: horizontal elements are merged
/// when no vertical element separates them relative to the accepting set,
/// vertical elements when their induced actions agree. The projections are
/// indexed by the reachable part's elements.
struct SyntacticAlgebra {
  Recognizer recognizer;
  RestrictedRecognizer reachable;
  std::vector<int> h_projection;  // reachable H index -> minimal H index
  std::vector<int> v_projection;  // reachable V index -> minimal V index
};
SyntacticAlgebra syntactic_algebra(const Recognizer& r);

/// Brute-force isomorphism search; intended for small algebras.
bool isomorphic(const ForestAlgebra& a, const ForestAlgebra& b);

}  // namespace forestalg
