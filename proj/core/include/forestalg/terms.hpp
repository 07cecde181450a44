#pragma once

#include <compare>
#include <cstddef>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace forestalg {

/// Raised by the term and formula parsers; `position` is a byte offset into
/// the input text.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::string message, std::size_t position)
      : std::runtime_error(std::move(message)), position(position) {}
  std::size_t position;
};

/// Finite, ordered set of distinct node labels.
class Alphabet {
 public:
  Alphabet() = default;
  explicit Alphabet(std::vector<std::string> symbols);

  int size() const { return static_cast<int>(symbols_.size()); }
  const std::string& name(int i) const { return symbols_.at(i); }
  const std::vector<std::string>& names() const { return symbols_; }
  std::optional<int> index(std::string_view symbol) const;
  bool contains(std::string_view symbol) const { return index(symbol).has_value(); }

  bool operator==(const Alphabet& other) const { return symbols_ == other.symbols_; }

 private:
  std::vector<std::string> symbols_;
  std::unordered_map<std::string, int> index_;
};

/// Ordered node of a term. An empty label marks a hole leaf; holes never
/// have children.
struct Tree {
  std::string label;
  std::vector<Tree> children;

  bool is_hole() const { return label.empty(); }
  static Tree hole() { return Tree{}; }
  static Tree leaf(std::string label) { return Tree{std::move(label), {}}; }

  bool operator==(const Tree&) const = default;
};

/// A forest is an ordered sequence of trees. Multicontexts reuse the same
/// representation and may contain hole leaves; a context is a multicontext
/// with exactly one hole. Operations that require a hole-free forest or a
/// single hole check the precondition and throw std::invalid_argument.
struct Forest {
  std::vector<Tree> roots;

  bool operator==(const Forest&) const = default;
};

using Multicontext = Forest;
using Context = Forest;

/// Root-to-node label word.
using Word = std::vector<std::string>;

/// Child-index path from a root; the first entry selects the root tree.
struct NodeAddress {
  std::vector<int> steps;
  bool operator==(const NodeAddress&) const = default;
};

int node_count(const Tree& t);
int node_count(const Forest& f);   // non-hole nodes
int hole_count(const Tree& t);
int hole_count(const Forest& f);
int position_count(const Forest& f);  // nodes plus holes

bool is_proper_forest(const Forest& f);          // no holes
bool is_context(const Forest& f);                // exactly one hole
const Tree* resolve(const Forest& f, const NodeAddress& a);
std::vector<NodeAddress> hole_addresses(const Multicontext& m);  // preorder

/// Parses the term grammar
///   forest := '0' | eps | item ('+' item)*
///   item   := '_' | '0' | symbol ('(' forest ')')?
/// where symbols match [A-Za-z][A-Za-z0-9]*, '_' is a hole, '0' denotes the
/// empty forest and whitespace is insignificant. Every symbol must belong to
/// `alphabet`. parse_forest additionally rejects holes.
Multicontext parse_multicontext(std::string_view text, const Alphabet& alphabet);
Forest parse_forest(std::string_view text, const Alphabet& alphabet);

/// Canonical text: '+'-joined trees, no whitespace, leaves without
/// parentheses, the empty forest printed as "0" and holes as "_".
std::string print_forest(const Forest& f);

/// Substitutes `s` for the unique hole of `p`.
Forest apply_context(const Context& p, const Forest& s);

/// Composes contexts: the hole of `p` is replaced by `q`, so
/// apply(compose(p,q), s) == apply(p, apply(q, s)).
Context compose_contexts(const Context& p, const Context& q);

/// Fills the holes of `p` in preorder with `values` (one forest per hole).
Forest fill_multicontext(const Multicontext& p, const std::vector<Forest>& values);

/// Replaces every hole of `p` with a copy of the multicontext `q`.
Multicontext substitute_all_holes(const Multicontext& p, const Multicontext& q);

/// Multiset of root-to-node label words, one per node, sorted.
std::vector<Word> path_multiset(const Forest& f);

/// Words of the maximal (root-to-leaf) paths, one per leaf, sorted.
std::vector<Word> maximal_path_words(const Forest& f);

/// Single-rooted multicontext with one level per list entry: level i nodes
/// carry the i-th symbol and have arity_i children each; the children of the
/// last level are holes. Hole count is the product of the arities.
Multicontext uniform_multicontext(const std::vector<std::pair<std::string, int>>& levels);

/// Total structural order used to canonicalize sibling order; holes first,
/// then by label, then by children.
std::strong_ordering compare(const Tree& a, const Tree& b);
std::strong_ordering compare(const Forest& a, const Forest& b);

/// Sorts sibling subtrees recursively by the structural order.
Forest canonical(const Forest& f);

/// Regroups root trees label by label into a single tree plus leaf copies,
/// recursively: a(s1)+a(s2)+b(t) becomes a(nf(s1+s2))+a+b(nf(t)). The result
/// is uniquely determined by the path multiset, which it preserves.
Forest path_normal_form(const Forest& f);

/// Calls `fn` for every hole-free forest over `alphabet` with at most
/// `max_nodes` nodes, ordered by node count and then recursively by first
/// tree size, label order and remainder.
void for_each_forest(const Alphabet& alphabet, int max_nodes,
                     const std::function<void(const Forest&)>& fn);

/// Materialized variant of for_each_forest, in the same order.
std::vector<Forest> enumerate_forests(const Alphabet& alphabet, int max_nodes);

}  // namespace forestalg
