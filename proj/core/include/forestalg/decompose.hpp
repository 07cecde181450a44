#pragma once

#include <vector>

#include "forestalg/algebra.hpp"
#include "forestalg/monoid.hpp"
#include "forestalg/products.hpp"

namespace forestalg {

/// Injective homomorphism from `source` into `realized`. `realized` carries
/// the algebra denoted by `expression`; for wreath-shaped expressions it is
/// the reachable subalgebra (full vertical monoids of iterated wreaths grow
/// doubly exponentially, the embedded image does not).
struct Embedding {
  AlgebraPtr source;
  AlgebraExpression expression;
  AlgebraPtr realized;
  std::vector<int> h_map;  // injective, H_source -> H_realized
  std::vector<int> v_map;  // V_source -> V_realized
};

/// Checks injectivity of h_map and every homomorphism law (identity
/// preservation, additivity, multiplicativity, action compatibility)
/// exhaustively over the source tables. Violations are returned, not thrown.
CheckResult verify_embedding(const Embedding& e);

/// Number of Atom leaves of an expression.
int count_atoms(const AlgebraExpression& e);

/// Nesting depth: 0 for an Atom, 1 + max over arguments otherwise.
int expression_depth(const AlgebraExpression& e);

/// Embeds an EF algebra into an iterated wreath product of copies of U1 and
/// returns the verified embedding. Writing inf for the sum of all of H:
/// |H| <= 2 embeds into U1 itself; with several subminimal elements h the
/// algebra embeds via g -> (g or inf) into the direct product of the strictly
/// smaller restrictions (H_h, V_h); with a single subminimal element it embeds
/// into (G, W) o U1 where G = H minus inf. Each branch strictly reduces |H|.
/// Throws std::invalid_argument when check_ef fails and SizeGuardExceeded
/// when a realized target would exceed max_elements.
Embedding ef_decompose(const ForestAlgebra& a, int max_elements = 20000);

/// Surjective quotient of a path algebra onto a distributive one. The target
/// H is the set e(H) of idempotents, h maps to its idempotent multiple
/// omega(h), and v acts on e(H) as e -> omega(ve).
struct DistributiveQuotient {
  AlgebraPtr source;
  AlgebraPtr target;
  std::vector<int> h_map;  // h -> target index of omega(h); surjective
  std::vector<int> v_map;  // surjective
};

/// Checks surjectivity of both maps and the homomorphism laws exhaustively.
CheckResult verify_quotient(const DistributiveQuotient& q);

/// Builds the quotient and verifies it; the target passes check_distributive.
/// Throws std::invalid_argument when check_path fails.
DistributiveQuotient distributive_quotient(const ForestAlgebra& a);

}  // namespace forestalg
