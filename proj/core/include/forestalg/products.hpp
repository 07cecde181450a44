#pragma once

#include <string>
#include <utility>
#include <vector>

#include "forestalg/algebra.hpp"

namespace forestalg {

/// Componentwise product algebra. Indices are row-major pairs: the H element
/// (h1,h2) is coded as h1*|H2|+h2, likewise for V.
ForestAlgebra direct_product(const ForestAlgebra& a, const ForestAlgebra& b);

inline int pair_h_index(const ForestAlgebra& right, int h1, int h2) {
  return h1 * right.h.size + h2;
}
inline std::pair<int, int> split_h_index(const ForestAlgebra& right, int h) {
  return {h / right.h.size, h % right.h.size};
}

/// One vertical element (v,f) of a wreath product with left factor (H1,V1)
/// and right factor (H2,V2): `left` is v, `table[h1]` is f(h1).
struct WreathVertical {
  int left = 0;
  std::vector<int> table;

  bool operator==(const WreathVertical&) const = default;
  bool operator<(const WreathVertical& o) const {
    return left != o.left ? left < o.left : table < o.table;
  }
};

/// (v,f)(h1,h2) = (v h1, f(h1) h2).
std::pair<int, int> wreath_action(const ForestAlgebra& a1, const ForestAlgebra& a2,
                                  const WreathVertical& w, std::pair<int, int> h);

/// (v,f)(v',f') = (v v', h -> f(v' h) f'(h)).
WreathVertical wreath_compose(const ForestAlgebra& a1, const ForestAlgebra& a2,
                              const WreathVertical& w, const WreathVertical& w2);

WreathVertical wreath_identity(const ForestAlgebra& a1, const ForestAlgebra& a2);

/// The element acting as (g1,g2) -> (h1+g1, h2+g2), resp. (g1+h1, g2+h2).
WreathVertical wreath_ins_pre(const ForestAlgebra& a1, const ForestAlgebra& a2, int h1, int h2);
WreathVertical wreath_ins_post(const ForestAlgebra& a1, const ForestAlgebra& a2, int h1, int h2);

/// A wreath product materialized as a forest algebra. H is H1 x H2 with
/// row-major pair indices; V element i is `elements[i]`. Vertical elements
/// are deduplicated by their transformation on H1 x H2.
struct WreathAlgebra {
  AlgebraPtr algebra;
  std::vector<WreathVertical> elements;
  std::vector<int> generator_index;  // input generator -> V index (generated mode)

  /// Index of a vertical element, or -1 when absent.
  int index_of(const WreathVertical& w) const;
};

/// Subalgebra of the wreath product generated by `generators` together with
/// the insertion elements of all pairs (h1,h2). Throws SizeGuardExceeded
/// when the closure grows past max_elements.
WreathAlgebra wreath_generated(
    const ForestAlgebra& a1, const ForestAlgebra& a2,
    const std::vector<std::pair<std::string, WreathVertical>>& generators,
    int max_elements = 20000);

/// The complete wreath product with every (v, table) pair present.
WreathAlgebra full_wreath(const ForestAlgebra& a1, const ForestAlgebra& a2,
                          int max_elements = 20000);

/// V-index map of the embedding (v1,v2) -> (v1, constant v2) of the direct
/// product into a full wreath of the same factors; H indices coincide.
std::vector<int> product_wreath_embedding(const ForestAlgebra& a1, const ForestAlgebra& a2,
                                          const WreathAlgebra& w);

/// Rendering of the product alphabet A x H as plain symbols; `h_index` is a
/// decimal suffix, so distinct pairs never collide.
std::string pair_symbol(const std::string& letter, int h_index);
Alphabet paired_alphabet(const Alphabet& base, int h_size);

/// Relabels each node from a to (a, g) where g is the value under `alpha` of
/// the node's subforest (its children's forest, empty at a leaf).
Forest relabel(const Homomorphism& alpha, const Forest& t);

/// Homomorphism over alpha's alphabet into the generated wreath of the two
/// target algebras, sending a to (alpha(a []), g -> beta((a,g) [])). Its
/// value on any forest t is the pair (alpha(t), beta(relabel(alpha, t))).
struct SequentialComposition {
  WreathAlgebra wreath;
  Homomorphism hom;
};
SequentialComposition sequential_compose(const Homomorphism& alpha, const Homomorphism& beta,
                                         int max_elements = 20000);

/// Expression over named algebras, products and wreath products; Wreath
/// argument lists are ordered with the left (outer) factor first.
struct AlgebraExpression {
  enum class Kind { Atom, Product, Wreath };
  Kind kind = Kind::Atom;
  std::string name;  // Atom only
  AlgebraPtr atom;   // Atom only
  std::vector<AlgebraExpression> arguments;

  static AlgebraExpression atom_of(std::string name, ForestAlgebra algebra);
  static AlgebraExpression atom_of(std::string name, AlgebraPtr algebra);
  static AlgebraExpression product(std::vector<AlgebraExpression> arguments);
  static AlgebraExpression wreath(std::vector<AlgebraExpression> arguments);
};

/// `U1`, `P(e1,e2,...)`, `W(e1,e2,...)`.
std::string to_string(const AlgebraExpression& e);

/// Builds the denoted algebra: atoms as given, P as direct products, W as
/// left-folded full wreath products.
ForestAlgebra realize_expression(const AlgebraExpression& e, int max_elements = 20000);

}  // namespace forestalg
