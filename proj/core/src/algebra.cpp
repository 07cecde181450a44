#include "forestalg/algebra.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

#include "forestalg/products.hpp"

namespace forestalg {

std::string ForestAlgebra::h_name(int i) const {
  if (i < static_cast<int>(h_names.size()) && !h_names[i].empty()) return h_names[i];
  return "h" + std::to_string(i);
}

std::string ForestAlgebra::v_name(int i) const {
  if (i < static_cast<int>(v_names.size()) && !v_names[i].empty()) return v_names[i];
  return "v" + std::to_string(i);
}

CheckResult validate_algebra(const ForestAlgebra& a) {
  if (auto r = validate_monoid(a.h); !r) return {false, "horizontal monoid: " + r.detail};
  if (auto r = validate_monoid(a.v); !r) return {false, "vertical monoid: " + r.detail};
  if (static_cast<int>(a.action.size()) != a.v.size * a.h.size)
    return {false, "action table size mismatch"};
  for (int x : a.action)
    if (x < 0 || x >= a.h.size) return {false, "action entry out of range"};
  if (static_cast<int>(a.ins_pre.size()) != a.h.size ||
      static_cast<int>(a.ins_post.size()) != a.h.size)
    return {false, "insertion map size mismatch"};

  for (int h = 0; h < a.h.size; ++h)
    if (a.act(a.v.identity, h) != h)
      return {false, "identity action fails at " + a.h_name(h)};

  for (int v1 = 0; v1 < a.v.size; ++v1)
    for (int v2 = 0; v2 < a.v.size; ++v2)
      for (int h = 0; h < a.h.size; ++h)
        if (a.act(a.mul(v1, v2), h) != a.act(v1, a.act(v2, h)))
          return {false, "action is not monoidal at (" + a.v_name(v1) + "," +
                             a.v_name(v2) + "," + a.h_name(h) + ")"};

  for (int v1 = 0; v1 < a.v.size; ++v1)
    for (int v2 = v1 + 1; v2 < a.v.size; ++v2) {
      bool same = true;
      for (int h = 0; h < a.h.size && same; ++h) same = a.act(v1, h) == a.act(v2, h);
      if (same)
        return {false, "action is not faithful: " + a.v_name(v1) + " equals " + a.v_name(v2)};
    }

  for (int h = 0; h < a.h.size; ++h) {
    int pre = a.ins_pre[h];
    int post = a.ins_post[h];
    if (pre < 0 || pre >= a.v.size || post < 0 || post >= a.v.size)
      return {false, "insertion element out of range"};
    for (int g = 0; g < a.h.size; ++g) {
      if (a.act(pre, g) != a.add(h, g))
        return {false, "pre-insertion law fails at (" + a.h_name(h) + "," + a.h_name(g) + ")"};
      if (a.act(post, g) != a.add(g, h))
        return {false, "post-insertion law fails at (" + a.h_name(h) + "," + a.h_name(g) + ")"};
    }
  }
  return {};
}

ForestAlgebra u1() {
  ForestAlgebra a;
  a.h = FiniteMonoid{2, 0, {0, 1, 1, 1}};
  a.v = FiniteMonoid{2, 0, {0, 1, 1, 1}};
  a.action = {0, 1,   // identity
              1, 1};  // c: constant inf
  a.ins_pre = {0, 1};
  a.ins_post = {0, 1};
  a.h_names = {"0", "inf"};
  a.v_names = {"1", "c"};
  return a;
}

ForestAlgebra u2() {
  ForestAlgebra a;
  a.h = FiniteMonoid{2, 0, {0, 1, 1, 1}};
  // V = {1, c0, cinf}; constants absorb on the left: cg . w = cg.
  a.v = FiniteMonoid{3, 0, {0, 1, 2, 1, 1, 1, 2, 2, 2}};
  a.action = {0, 1,   // identity
              0, 0,   // c0
              1, 1};  // cinf
  a.ins_pre = {0, 2};
  a.ins_post = {0, 2};
  a.h_names = {"0", "inf"};
  a.v_names = {"1", "c0", "cinf"};
  return a;
}

ForestAlgebra trivial_algebra() {
  ForestAlgebra a;
  a.h = FiniteMonoid{1, 0, {0}};
  a.v = FiniteMonoid{1, 0, {0}};
  a.action = {0};
  a.ins_pre = {0};
  a.ins_post = {0};
  a.h_names = {"0"};
  a.v_names = {"1"};
  return a;
}

ForestAlgebra saturating_counter_algebra(int cap) {
  if (cap < 1) throw std::invalid_argument("cap must be at least 1");
  int n = cap + 1;
  FiniteMonoid h;
  h.size = n;
  h.identity = 0;
  h.table.resize(n * n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) h.table[a * n + b] = std::min(cap, a + b);

  GeneratedAlgebra g = algebra_from_actions(h, {});
  ForestAlgebra out = *g.algebra;
  out.h_names.resize(n);
  for (int i = 0; i < n; ++i)
    out.h_names[i] = i == cap ? (">=" + std::to_string(cap)) : std::to_string(i);
  return out;
}

GeneratedAlgebra algebra_from_actions(
    const FiniteMonoid& h,
    const std::vector<std::pair<std::string, std::vector<int>>>& named_actions,
    int max_elements) {
  std::vector<std::pair<std::string, std::vector<int>>> generators;
  std::vector<int> identity(h.size);
  std::iota(identity.begin(), identity.end(), 0);
  generators.emplace_back("1", identity);
  for (const auto& g : named_actions) generators.push_back(g);
  for (int x = 0; x < h.size; ++x) {
    std::vector<int> pre(h.size), post(h.size);
    for (int g = 0; g < h.size; ++g) {
      pre[g] = h.apply(x, g);
      post[g] = h.apply(g, x);
    }
    generators.emplace_back("(" + std::to_string(x) + "+[])", std::move(pre));
    generators.emplace_back("([]+" + std::to_string(x) + ")", std::move(post));
  }

  ClosureOps ops;
  ops.compose = true;
  std::vector<Transformation> closed = closure_transformations(h, generators, ops, max_elements);

  std::map<std::vector<int>, int> index_of;
  for (std::size_t i = 0; i < closed.size(); ++i)
    index_of.emplace(closed[i].image, static_cast<int>(i));

  auto algebra = std::make_shared<ForestAlgebra>();
  algebra->h = h;
  algebra->v = transformation_monoid(closed, h.size);
  algebra->action.resize(closed.size() * h.size);
  for (std::size_t v = 0; v < closed.size(); ++v)
    for (int x = 0; x < h.size; ++x) algebra->action[v * h.size + x] = closed[v].image[x];
  algebra->ins_pre.resize(h.size);
  algebra->ins_post.resize(h.size);
  for (int x = 0; x < h.size; ++x) {
    std::vector<int> pre(h.size), post(h.size);
    for (int g = 0; g < h.size; ++g) {
      pre[g] = h.apply(x, g);
      post[g] = h.apply(g, x);
    }
    algebra->ins_pre[x] = index_of.at(pre);
    algebra->ins_post[x] = index_of.at(post);
  }
  algebra->v_names.resize(closed.size());
  for (std::size_t v = 0; v < closed.size(); ++v)
    algebra->v_names[v] = to_string(closed[v].provenance);

  GeneratedAlgebra out;
  out.algebra = std::move(algebra);
  for (const auto& [name, image] : named_actions) out.generator_index.push_back(index_of.at(image));
  return out;
}

namespace {

int letter_of(const Homomorphism& hom, const std::string& label) {
  auto i = hom.alphabet.index(label);
  if (!i) throw std::invalid_argument("label not in the homomorphism alphabet: " + label);
  return hom.image(*i);
}

}  // namespace

int eval_tree(const Homomorphism& hom, const Tree& t) {
  if (t.is_hole()) throw std::invalid_argument("cannot evaluate a hole as a tree");
  int sub = hom.algebra->h.identity;
  for (const Tree& c : t.children) sub = hom.algebra->add(sub, eval_tree(hom, c));
  return hom.algebra->act(letter_of(hom, t.label), sub);
}

int eval_forest(const Homomorphism& hom, const Forest& f) {
  int value = hom.algebra->h.identity;
  for (const Tree& t : f.roots) value = hom.algebra->add(value, eval_tree(hom, t));
  return value;
}

namespace {

// Vertical value of the hole path inside `t`; hole_in tells whether the
// subtree contains the hole.
int eval_context_tree(const Homomorphism& hom, const Tree& t);

int eval_context_children(const Homomorphism& hom, const std::vector<Tree>& children) {
  const ForestAlgebra& a = *hom.algebra;
  int pre = a.h.identity;
  std::size_t hole_at = children.size();
  for (std::size_t i = 0; i < children.size(); ++i) {
    if (hole_count(children[i]) > 0) {
      hole_at = i;
      break;
    }
    pre = a.add(pre, eval_tree(hom, children[i]));
  }
  if (hole_at == children.size()) throw std::invalid_argument("context has no hole");
  int post = a.h.identity;
  for (std::size_t i = hole_at + 1; i < children.size(); ++i)
    post = a.add(post, eval_tree(hom, children[i]));
  int inner = eval_context_tree(hom, children[hole_at]);
  // s + p + t evaluates to (pre+[]) . ([]+post) . p
  int v = a.mul(a.ins_pre[pre], a.ins_post[post]);
  return a.mul(v, inner);
}

int eval_context_tree(const Homomorphism& hom, const Tree& t) {
  if (t.is_hole()) return hom.algebra->v.identity;
  int below = eval_context_children(hom, t.children);
  return hom.algebra->mul(letter_of(hom, t.label), below);
}

}  // namespace

int eval_context(const Homomorphism& hom, const Context& p) {
  if (!is_context(p)) throw std::invalid_argument("context must have exactly one hole");
  return eval_context_children(hom, p.roots);
}

namespace {

int eval_multi_tree(const Homomorphism& hom, const Tree& t, const std::vector<int>& hole_values,
                    std::size_t& next);

int eval_multi_forest(const Homomorphism& hom, const std::vector<Tree>& roots,
                      const std::vector<int>& hole_values, std::size_t& next) {
  int value = hom.algebra->h.identity;
  for (const Tree& t : roots)
    value = hom.algebra->add(value, eval_multi_tree(hom, t, hole_values, next));
  return value;
}

int eval_multi_tree(const Homomorphism& hom, const Tree& t, const std::vector<int>& hole_values,
                    std::size_t& next) {
  if (t.is_hole()) return hole_values.at(next++);
  int sub = eval_multi_forest(hom, t.children, hole_values, next);
  return hom.algebra->act(letter_of(hom, t.label), sub);
}

}  // namespace

int eval_multicontext(const Homomorphism& hom, const Multicontext& p,
                      const std::vector<int>& hole_values) {
  if (hole_count(p) != static_cast<int>(hole_values.size()))
    throw std::invalid_argument("hole value count must match hole count");
  std::size_t next = 0;
  return eval_multi_forest(hom, p.roots, hole_values, next);
}

Recognizer complement(Recognizer r) {
  for (std::size_t i = 0; i < r.accepting.size(); ++i) r.accepting[i] = !r.accepting[i];
  return r;
}

Recognizer product_recognizer(const Recognizer& a, const Recognizer& b,
                              bool (*combine)(bool, bool)) {
  if (!(a.hom.alphabet == b.hom.alphabet))
    throw std::invalid_argument("product recognizer needs a shared alphabet");
  const ForestAlgebra& a1 = *a.hom.algebra;
  const ForestAlgebra& a2 = *b.hom.algebra;
  AlgebraPtr prod = std::make_shared<ForestAlgebra>(direct_product(a1, a2));

  Recognizer r;
  r.hom.alphabet = a.hom.alphabet;
  r.hom.algebra = prod;
  r.hom.letter_image.resize(a.hom.letter_image.size());
  for (std::size_t i = 0; i < r.hom.letter_image.size(); ++i)
    r.hom.letter_image[i] = a.hom.letter_image[i] * a2.v.size + b.hom.letter_image[i];
  r.accepting.resize(prod->h.size);
  for (int h1 = 0; h1 < a1.h.size; ++h1)
    for (int h2 = 0; h2 < a2.h.size; ++h2)
      r.accepting[h1 * a2.h.size + h2] = combine(a.accepting[h1], b.accepting[h2]);
  return r;
}

RestrictedRecognizer reachable_subalgebra(const Recognizer& r) {
  const ForestAlgebra& a = *r.hom.algebra;

  // Closure of {0} under letter actions and addition, interleaved with the
  // closure of letter images and reachable insertions under composition.
  std::set<int> h_set{a.h.identity};
  std::set<int> v_set{a.v.identity};
  for (int img : r.hom.letter_image) v_set.insert(img);

  bool changed = true;
  while (changed) {
    changed = false;
    std::vector<int> hs(h_set.begin(), h_set.end());
    std::vector<int> vs(v_set.begin(), v_set.end());
    for (int h : hs) {
      for (int v : vs) changed |= h_set.insert(a.act(v, h)).second;
      for (int g : hs) changed |= h_set.insert(a.add(h, g)).second;
      changed |= v_set.insert(a.ins_pre[h]).second;
      changed |= v_set.insert(a.ins_post[h]).second;
    }
    for (int v : vs)
      for (int w : vs) changed |= v_set.insert(a.mul(v, w)).second;
  }

  std::vector<int> h_embed(h_set.begin(), h_set.end());
  std::vector<int> h_new(a.h.size, -1);
  for (std::size_t i = 0; i < h_embed.size(); ++i) h_new[h_embed[i]] = static_cast<int>(i);

  // Restricting H can identify the actions of distinct vertical elements;
  // collapse such elements so the result stays faithful. The collapse is a
  // congruence because composition acts pointwise through restricted values.
  std::vector<int> v_embed;
  std::vector<int> v_new(a.v.size, -1);
  std::map<std::vector<int>, int> by_action;
  for (int v : v_set) {
    std::vector<int> row(h_embed.size());
    for (std::size_t i = 0; i < h_embed.size(); ++i) row[i] = h_new[a.act(v, h_embed[i])];
    auto [it, fresh] = by_action.emplace(std::move(row), static_cast<int>(v_embed.size()));
    if (fresh) v_embed.push_back(v);
    v_new[v] = it->second;
  }

  auto sub = std::make_shared<ForestAlgebra>();
  int nh = static_cast<int>(h_embed.size());
  int nv = static_cast<int>(v_embed.size());
  sub->h.size = nh;
  sub->h.identity = h_new[a.h.identity];
  sub->h.table.resize(nh * nh);
  for (int x = 0; x < nh; ++x)
    for (int y = 0; y < nh; ++y)
      sub->h.table[x * nh + y] = h_new[a.add(h_embed[x], h_embed[y])];
  sub->v.size = nv;
  sub->v.identity = v_new[a.v.identity];
  sub->v.table.resize(nv * nv);
  for (int x = 0; x < nv; ++x)
    for (int y = 0; y < nv; ++y)
      sub->v.table[x * nv + y] = v_new[a.mul(v_embed[x], v_embed[y])];
  sub->action.resize(static_cast<std::size_t>(nv) * nh);
  for (int x = 0; x < nv; ++x)
    for (int y = 0; y < nh; ++y)
      sub->action[x * nh + y] = h_new[a.act(v_embed[x], h_embed[y])];
  sub->ins_pre.resize(nh);
  sub->ins_post.resize(nh);
  for (int x = 0; x < nh; ++x) {
    sub->ins_pre[x] = v_new[a.ins_pre[h_embed[x]]];
    sub->ins_post[x] = v_new[a.ins_post[h_embed[x]]];
  }
  sub->h_names.resize(nh);
  for (int x = 0; x < nh; ++x) sub->h_names[x] = a.h_name(h_embed[x]);
  sub->v_names.resize(nv);
  for (int x = 0; x < nv; ++x) sub->v_names[x] = a.v_name(v_embed[x]);

  RestrictedRecognizer out;
  out.recognizer.hom.alphabet = r.hom.alphabet;
  out.recognizer.hom.algebra = sub;
  out.recognizer.hom.letter_image.resize(r.hom.letter_image.size());
  for (std::size_t i = 0; i < r.hom.letter_image.size(); ++i)
    out.recognizer.hom.letter_image[i] = v_new[r.hom.letter_image[i]];
  out.recognizer.accepting.resize(nh);
  for (int x = 0; x < nh; ++x) out.recognizer.accepting[x] = r.accepting[h_embed[x]];
  out.h_embed = std::move(h_embed);
  out.v_embed = std::move(v_embed);
  return out;
}

SyntacticAlgebra syntactic_algebra(const Recognizer& r) {
  SyntacticAlgebra out;
  out.reachable = reachable_subalgebra(r);
  const Recognizer& rr = out.reachable.recognizer;
  const ForestAlgebra& a = *rr.hom.algebra;

  // Initial partition: h ~ h' iff no vertical element separates them
  // relative to the accepting set.
  std::vector<std::vector<bool>> row(a.h.size, std::vector<bool>(a.v.size));
  for (int h = 0; h < a.h.size; ++h)
    for (int v = 0; v < a.v.size; ++v) row[h][v] = rr.accepting[a.act(v, h)];

  std::vector<int> block(a.h.size, -1);
  {
    std::map<std::vector<bool>, int> block_of_row;
    for (int h = 0; h < a.h.size; ++h) {
      auto [it, fresh] = block_of_row.emplace(row[h], static_cast<int>(block_of_row.size()));
      block[h] = it->second;
    }
  }

  // Refine until the partition is a congruence for addition and the action.
  // For recognizers closed under insertion this stabilizes immediately.
  auto signature = [&](int h) {
    std::vector<int> sig;
    sig.reserve(1 + a.v.size + 2 * a.h.size);
    sig.push_back(block[h]);
    for (int v = 0; v < a.v.size; ++v) sig.push_back(block[a.act(v, h)]);
    for (int g = 0; g < a.h.size; ++g) {
      sig.push_back(block[a.add(h, g)]);
      sig.push_back(block[a.add(g, h)]);
    }
    return sig;
  };
  for (;;) {
    std::map<std::vector<int>, int> next_of;
    std::vector<int> next(a.h.size);
    for (int h = 0; h < a.h.size; ++h) {
      auto [it, fresh] = next_of.emplace(signature(h), static_cast<int>(next_of.size()));
      next[h] = it->second;
    }
    if (next == block) break;
    block = std::move(next);
  }
  int nh = 1 + *std::max_element(block.begin(), block.end());

  // Collapse vertical elements acting equally on the quotient.
  std::vector<int> vblock(a.v.size, -1);
  int nv = 0;
  {
    std::map<std::vector<int>, int> block_of_action;
    for (int v = 0; v < a.v.size; ++v) {
      std::vector<int> act_row(nh, -1);
      for (int h = 0; h < a.h.size; ++h) act_row[block[h]] = block[a.act(v, h)];
      auto [it, fresh] = block_of_action.emplace(std::move(act_row), nv);
      if (fresh) ++nv;
      vblock[v] = it->second;
    }
  }

  std::vector<int> h_rep(nh, -1), v_rep(nv, -1);
  for (int h = 0; h < a.h.size; ++h)
    if (h_rep[block[h]] < 0) h_rep[block[h]] = h;
  for (int v = 0; v < a.v.size; ++v)
    if (v_rep[vblock[v]] < 0) v_rep[vblock[v]] = v;

  auto minimal = std::make_shared<ForestAlgebra>();
  minimal->h.size = nh;
  minimal->h.identity = block[a.h.identity];
  minimal->h.table.resize(nh * nh);
  for (int x = 0; x < nh; ++x)
    for (int y = 0; y < nh; ++y)
      minimal->h.table[x * nh + y] = block[a.add(h_rep[x], h_rep[y])];
  minimal->v.size = nv;
  minimal->v.identity = vblock[a.v.identity];
  minimal->v.table.resize(nv * nv);
  for (int x = 0; x < nv; ++x)
    for (int y = 0; y < nv; ++y)
      minimal->v.table[x * nv + y] = vblock[a.mul(v_rep[x], v_rep[y])];
  minimal->action.resize(static_cast<std::size_t>(nv) * nh);
  for (int x = 0; x < nv; ++x)
    for (int y = 0; y < nh; ++y)
      minimal->action[x * nh + y] = block[a.act(v_rep[x], h_rep[y])];
  minimal->ins_pre.resize(nh);
  minimal->ins_post.resize(nh);
  for (int x = 0; x < nh; ++x) {
    minimal->ins_pre[x] = vblock[a.ins_pre[h_rep[x]]];
    minimal->ins_post[x] = vblock[a.ins_post[h_rep[x]]];
  }
  minimal->h_names.resize(nh);
  for (int x = 0; x < nh; ++x) minimal->h_names[x] = a.h_name(h_rep[x]);
  minimal->v_names.resize(nv);
  for (int x = 0; x < nv; ++x) minimal->v_names[x] = a.v_name(v_rep[x]);

  out.recognizer.hom.alphabet = rr.hom.alphabet;
  out.recognizer.hom.algebra = minimal;
  out.recognizer.hom.letter_image.resize(rr.hom.letter_image.size());
  for (std::size_t i = 0; i < rr.hom.letter_image.size(); ++i)
    out.recognizer.hom.letter_image[i] = vblock[rr.hom.letter_image[i]];
  out.recognizer.accepting.resize(nh);
  for (int h = 0; h < a.h.size; ++h) out.recognizer.accepting[block[h]] = rr.accepting[h];
  out.h_projection = std::move(block);
  out.v_projection = std::move(vblock);
  return out;
}

namespace {

bool try_h_map(const ForestAlgebra& a, const ForestAlgebra& b, std::vector<int>& h_map,
               std::vector<bool>& used, int next) {
  if (next == a.h.size) {
    // Horizontal bijection fixed; the vertical one is forced by the action.
    std::vector<int> v_map(a.v.size, -1);
    std::vector<bool> v_used(b.v.size, false);
    for (int v = 0; v < a.v.size; ++v) {
      int found = -1;
      for (int w = 0; w < b.v.size; ++w) {
        if (v_used[w]) continue;
        bool match = true;
        for (int h = 0; h < a.h.size && match; ++h)
          match = h_map[a.act(v, h)] == b.act(w, h_map[h]);
        if (match) {
          found = w;
          break;
        }
      }
      if (found < 0) return false;
      v_map[v] = found;
      v_used[found] = true;
    }
    if (v_map[a.v.identity] != b.v.identity) return false;
    for (int v = 0; v < a.v.size; ++v)
      for (int w = 0; w < a.v.size; ++w)
        if (v_map[a.mul(v, w)] != b.mul(v_map[v], v_map[w])) return false;
    for (int h = 0; h < a.h.size; ++h) {
      if (v_map[a.ins_pre[h]] != b.ins_pre[h_map[h]]) return false;
      if (v_map[a.ins_post[h]] != b.ins_post[h_map[h]]) return false;
    }
    return true;
  }
  for (int img = 0; img < b.h.size; ++img) {
    if (used[img]) continue;
    if (next == a.h.identity && img != b.h.identity) continue;
    if (next != a.h.identity && img == b.h.identity) continue;
    h_map[next] = img;
    used[img] = true;
    bool consistent = true;
    for (int x = 0; x <= next && consistent; ++x)
      for (int y = 0; y <= next && consistent; ++y) {
        int sum = a.add(x, y);
        if (sum <= next && h_map[sum] >= 0)
          consistent = b.add(h_map[x], h_map[y]) == h_map[sum];
      }
    if (consistent && try_h_map(a, b, h_map, used, next + 1)) return true;
    h_map[next] = -1;
    used[img] = false;
  }
  return false;
}

}  // namespace

bool isomorphic(const ForestAlgebra& a, const ForestAlgebra& b) {
  if (a.h.size != b.h.size || a.v.size != b.v.size) return false;
  std::vector<int> h_map(a.h.size, -1);
  std::vector<bool> used(b.h.size, false);
  return try_h_map(a, b, h_map, used, 0);
}

}  // namespace forestalg
