#include "forestalg/terms.hpp"

#include <algorithm>
#include <cctype>
#include <map>

namespace forestalg {

Alphabet::Alphabet(std::vector<std::string> symbols) : symbols_(std::move(symbols)) {
  if (symbols_.empty()) throw std::invalid_argument("alphabet must be non-empty");
  for (int i = 0; i < static_cast<int>(symbols_.size()); ++i) {
    if (symbols_[i].empty()) throw std::invalid_argument("alphabet symbol must be non-empty");
    if (!index_.emplace(symbols_[i], i).second)
      throw std::invalid_argument("duplicate alphabet symbol: " + symbols_[i]);
  }
}

std::optional<int> Alphabet::index(std::string_view symbol) const {
  auto it = index_.find(std::string(symbol));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

int node_count(const Tree& t) {
  if (t.is_hole()) return 0;
  int n = 1;
  for (const Tree& c : t.children) n += node_count(c);
  return n;
}

int node_count(const Forest& f) {
  int n = 0;
  for (const Tree& t : f.roots) n += node_count(t);
  return n;
}

int hole_count(const Tree& t) {
  if (t.is_hole()) return 1;
  int n = 0;
  for (const Tree& c : t.children) n += hole_count(c);
  return n;
}

int hole_count(const Forest& f) {
  int n = 0;
  for (const Tree& t : f.roots) n += hole_count(t);
  return n;
}

int position_count(const Forest& f) { return node_count(f) + hole_count(f); }

bool is_proper_forest(const Forest& f) { return hole_count(f) == 0; }
bool is_context(const Forest& f) { return hole_count(f) == 1; }

const Tree* resolve(const Forest& f, const NodeAddress& a) {
  if (a.steps.empty()) return nullptr;
  const std::vector<Tree>* level = &f.roots;
  const Tree* node = nullptr;
  for (int step : a.steps) {
    if (step < 0 || step >= static_cast<int>(level->size())) return nullptr;
    node = &(*level)[step];
    level = &node->children;
  }
  return node;
}

namespace {

void collect_holes(const Tree& t, NodeAddress& at, std::vector<NodeAddress>& out) {
  if (t.is_hole()) {
    out.push_back(at);
    return;
  }
  for (int i = 0; i < static_cast<int>(t.children.size()); ++i) {
    at.steps.push_back(i);
    collect_holes(t.children[i], at, out);
    at.steps.pop_back();
  }
}

}  // namespace

std::vector<NodeAddress> hole_addresses(const Multicontext& m) {
  std::vector<NodeAddress> out;
  NodeAddress at;
  for (int i = 0; i < static_cast<int>(m.roots.size()); ++i) {
    at.steps.assign(1, i);
    collect_holes(m.roots[i], at, out);
  }
  return out;
}

namespace {

class TermParser {
 public:
  TermParser(std::string_view text, const Alphabet& alphabet)
      : text_(text), alphabet_(alphabet) {}

  Multicontext parse() {
    Multicontext f = parse_sum();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected trailing input");
    return f;
  }

 private:
  Multicontext parse_sum() {
    Multicontext f;
    skip_ws();
    if (at_end() || peek() == ')') return f;
    parse_item(f);
    skip_ws();
    while (!at_end() && peek() == '+') {
      ++pos_;
      parse_item(f);
      skip_ws();
    }
    return f;
  }

  // item := '_' | '0' | symbol ('(' forest ')')?; '0' contributes nothing.
  void parse_item(Multicontext& f) {
    skip_ws();
    if (at_end()) fail("expected a tree");
    char c = peek();
    if (c == '_') {
      ++pos_;
      f.roots.push_back(Tree::hole());
      return;
    }
    if (c == '0') {
      ++pos_;
      return;
    }
    if (!std::isalpha(static_cast<unsigned char>(c))) fail("expected a symbol");
    std::size_t start = pos_;
    ++pos_;
    while (!at_end() && std::isalnum(static_cast<unsigned char>(peek()))) ++pos_;
    std::string symbol(text_.substr(start, pos_ - start));
    if (!alphabet_.contains(symbol))
      throw ParseError("symbol not in alphabet: " + symbol, start);
    Tree t{std::move(symbol), {}};
    skip_ws();
    if (!at_end() && peek() == '(') {
      ++pos_;
      t.children = parse_sum().roots;
      skip_ws();
      if (at_end() || peek() != ')') fail("expected ')'");
      ++pos_;
    }
    f.roots.push_back(std::move(t));
  }

  void skip_ws() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(peek()))) ++pos_;
  }
  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return text_[pos_]; }
  [[noreturn]] void fail(const std::string& message) const { throw ParseError(message, pos_); }

  std::string_view text_;
  const Alphabet& alphabet_;
  std::size_t pos_ = 0;
};

}  // namespace

Multicontext parse_multicontext(std::string_view text, const Alphabet& alphabet) {
  return TermParser(text, alphabet).parse();
}

Forest parse_forest(std::string_view text, const Alphabet& alphabet) {
  Forest f = parse_multicontext(text, alphabet);
  if (!is_proper_forest(f)) throw ParseError("holes are not allowed in a forest", 0);
  return f;
}

namespace {

void print_tree(const Tree& t, std::string& out) {
  if (t.is_hole()) {
    out += '_';
    return;
  }
  out += t.label;
  if (!t.children.empty()) {
    out += '(';
    for (std::size_t i = 0; i < t.children.size(); ++i) {
      if (i) out += '+';
      print_tree(t.children[i], out);
    }
    out += ')';
  }
}

}  // namespace

std::string print_forest(const Forest& f) {
  if (f.roots.empty()) return "0";
  std::string out;
  for (std::size_t i = 0; i < f.roots.size(); ++i) {
    if (i) out += '+';
    print_tree(f.roots[i], out);
  }
  return out;
}

namespace {

// Replaces holes in preorder; `next` indexes into `values`.
void fill_tree(const Tree& t, const std::vector<Forest>& values, std::size_t& next,
               std::vector<Tree>& out) {
  if (t.is_hole()) {
    if (next >= values.size()) throw std::invalid_argument("too few values for the holes");
    const Forest& v = values[next++];
    out.insert(out.end(), v.roots.begin(), v.roots.end());
    return;
  }
  Tree copy{t.label, {}};
  copy.children.reserve(t.children.size());
  for (const Tree& c : t.children) fill_tree(c, values, next, copy.children);
  out.push_back(std::move(copy));
}

}  // namespace

Forest fill_multicontext(const Multicontext& p, const std::vector<Forest>& values) {
  if (hole_count(p) != static_cast<int>(values.size()))
    throw std::invalid_argument("value count must match hole count");
  Forest out;
  std::size_t next = 0;
  for (const Tree& t : p.roots) fill_tree(t, values, next, out.roots);
  return out;
}

Forest apply_context(const Context& p, const Forest& s) {
  if (!is_context(p)) throw std::invalid_argument("context must have exactly one hole");
  if (!is_proper_forest(s)) throw std::invalid_argument("argument forest must have no holes");
  return fill_multicontext(p, {s});
}

Context compose_contexts(const Context& p, const Context& q) {
  if (!is_context(p) || !is_context(q))
    throw std::invalid_argument("context must have exactly one hole");
  return fill_multicontext(p, {q});
}

Multicontext substitute_all_holes(const Multicontext& p, const Multicontext& q) {
  std::vector<Forest> values(hole_count(p), q);
  return fill_multicontext(p, values);
}

namespace {

void collect_paths(const Tree& t, Word& prefix, std::vector<Word>& out, bool maximal_only) {
  if (t.is_hole()) throw std::invalid_argument("paths are defined on hole-free forests");
  prefix.push_back(t.label);
  if (!maximal_only || t.children.empty()) out.push_back(prefix);
  for (const Tree& c : t.children) collect_paths(c, prefix, out, maximal_only);
  prefix.pop_back();
}

std::vector<Word> collect_all(const Forest& f, bool maximal_only) {
  std::vector<Word> out;
  Word prefix;
  for (const Tree& t : f.roots) collect_paths(t, prefix, out, maximal_only);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

std::vector<Word> path_multiset(const Forest& f) { return collect_all(f, false); }
std::vector<Word> maximal_path_words(const Forest& f) { return collect_all(f, true); }

Multicontext uniform_multicontext(const std::vector<std::pair<std::string, int>>& levels) {
  if (levels.empty()) throw std::invalid_argument("level list must be non-empty");
  for (const auto& [symbol, arity] : levels) {
    if (symbol.empty()) throw std::invalid_argument("level symbol must be non-empty");
    if (arity < 1) throw std::invalid_argument("level arity must be at least 1");
  }
  // Built innermost-first: the last level's children are holes.
  std::vector<Tree> below;
  for (auto it = levels.rbegin(); it != levels.rend(); ++it) {
    Tree node{it->first, {}};
    if (below.empty()) {
      node.children.assign(it->second, Tree::hole());
    } else {
      node.children.assign(it->second, below.front());
    }
    below.assign(1, std::move(node));
  }
  return Multicontext{std::move(below)};
}

std::strong_ordering compare(const Tree& a, const Tree& b) {
  if (auto c = a.label <=> b.label; c != 0) return c;
  std::size_t n = std::min(a.children.size(), b.children.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (auto c = compare(a.children[i], b.children[i]); c != 0) return c;
  }
  return a.children.size() <=> b.children.size();
}

std::strong_ordering compare(const Forest& a, const Forest& b) {
  std::size_t n = std::min(a.roots.size(), b.roots.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (auto c = compare(a.roots[i], b.roots[i]); c != 0) return c;
  }
  return a.roots.size() <=> b.roots.size();
}

namespace {

Tree canonical_tree(const Tree& t) {
  Tree out{t.label, {}};
  out.children.reserve(t.children.size());
  for (const Tree& c : t.children) out.children.push_back(canonical_tree(c));
  std::sort(out.children.begin(), out.children.end(),
            [](const Tree& x, const Tree& y) { return compare(x, y) < 0; });
  return out;
}

}  // namespace

Forest canonical(const Forest& f) {
  Forest out;
  out.roots.reserve(f.roots.size());
  for (const Tree& t : f.roots) out.roots.push_back(canonical_tree(t));
  std::sort(out.roots.begin(), out.roots.end(),
            [](const Tree& x, const Tree& y) { return compare(x, y) < 0; });
  return out;
}

Forest path_normal_form(const Forest& f) {
  if (!is_proper_forest(f)) throw std::invalid_argument("normal form is defined on forests");
  // Merge the subforests of equal-labelled roots, keep label order stable.
  std::map<std::string, std::pair<Forest, int>> groups;
  for (const Tree& t : f.roots) {
    auto& [merged, count] = groups[t.label];
    merged.roots.insert(merged.roots.end(), t.children.begin(), t.children.end());
    ++count;
  }
  Forest out;
  for (auto& [label, group] : groups) {
    Tree merged{label, path_normal_form(group.first).roots};
    out.roots.push_back(std::move(merged));
    for (int i = 1; i < group.second; ++i) out.roots.push_back(Tree::leaf(label));
  }
  return out;
}

namespace {

// Continuation-style enumeration: completed subtrees are copied into the
// growing forest, so no callback ever aliases a vector that still grows.
class ForestEnumerator {
 public:
  ForestEnumerator(const Alphabet& alphabet, const std::function<void(const Forest&)>& fn)
      : alphabet_(alphabet), fn_(fn) {}

  void run(int max_nodes) {
    for (int n = 0; n <= max_nodes; ++n) {
      forest_.roots.clear();
      forests_exact(n, forest_, [this] { fn_(forest_); });
    }
  }

 private:
  using Cont = std::function<void()>;

  // Appends every forest with exactly n nodes to `target`, running `k` at
  // each completion; `target` is restored afterwards.
  void forests_exact(int n, Forest& target, const Cont& k) {
    if (n == 0) {
      k();
      return;
    }
    for (int size = 1; size <= n; ++size) {
      trees_exact(size, target, [&, size] { forests_exact(n - size, target, k); });
    }
  }

  void trees_exact(int size, Forest& target, const Cont& k) {
    for (int a = 0; a < alphabet_.size(); ++a) {
      if (size == 1) {
        target.roots.push_back(Tree::leaf(alphabet_.name(a)));
        k();
        target.roots.pop_back();
      } else {
        Forest sub;
        forests_exact(size - 1, sub, [&] {
          target.roots.push_back(Tree{alphabet_.name(a), sub.roots});
          k();
          target.roots.pop_back();
        });
      }
    }
  }

  const Alphabet& alphabet_;
  const std::function<void(const Forest&)>& fn_;
  Forest forest_;
};

}  // namespace

void for_each_forest(const Alphabet& alphabet, int max_nodes,
                     const std::function<void(const Forest&)>& fn) {
  if (max_nodes < 0) throw std::invalid_argument("max_nodes must be non-negative");
  ForestEnumerator(alphabet, fn).run(max_nodes);
}

std::vector<Forest> enumerate_forests(const Alphabet& alphabet, int max_nodes) {
  std::vector<Forest> out;
  for_each_forest(alphabet, max_nodes, [&](const Forest& f) { out.push_back(f); });
  return out;
}

}  // namespace forestalg
