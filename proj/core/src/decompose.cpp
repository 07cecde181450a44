#include "forestalg/decompose.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "forestalg/classify.hpp"

namespace forestalg {

namespace {

// The sum of all of H; absorbing because H is idempotent and commutative.
int absorbing_sum(const ForestAlgebra& a) {
  int inf = a.h.identity;
  for (int h = 0; h < a.h.size; ++h) inf = a.add(inf, h);
  return inf;
}

// Minimal elements of H minus inf under the order h1 <= h2 iff h1 = h2 + h.
// m is minimal exactly when every sum m + x stays in {m, inf}.
std::vector<int> subminimal_elements(const ForestAlgebra& a, int inf) {
  std::vector<int> out;
  for (int m = 0; m < a.h.size; ++m) {
    if (m == inf) continue;
    bool minimal = true;
    for (int x = 0; x < a.h.size && minimal; ++x) {
      int below = a.add(m, x);
      if (below != m && below != inf) minimal = false;
    }
    if (minimal) out.push_back(m);
  }
  return out;
}

struct StarRestriction {
  AlgebraPtr algebra;
  std::vector<int> h_embed;  // restricted H index -> parent H index
  std::vector<int> h_class;  // parent H index -> restricted index, -1 outside
  std::vector<int> v_class;  // parent V index -> restricted V index
};

// Restricts the algebra to a +-closed subset of H. Each v acts through
// v*g = vg when vg stays in the subset and through `fallback` otherwise;
// elements whose star actions coincide are collapsed to keep the action
// faithful. Star actions compose because vg can only leave the subset for
// good, so the composition table is inherited from representatives.
StarRestriction star_restriction(const ForestAlgebra& a, std::vector<int> subset, int fallback) {
  StarRestriction out;
  out.h_embed = std::move(subset);
  out.h_class.assign(a.h.size, -1);
  int nh = static_cast<int>(out.h_embed.size());
  for (int i = 0; i < nh; ++i) out.h_class[out.h_embed[i]] = i;
  if (out.h_class[a.h.identity] < 0 || out.h_class[fallback] < 0)
    throw std::logic_error("restriction subset must contain 0 and the fallback value");

  std::vector<int> reps;
  std::vector<std::vector<int>> rows;
  std::map<std::vector<int>, int> by_row;
  out.v_class.assign(a.v.size, -1);
  for (int v = 0; v < a.v.size; ++v) {
    std::vector<int> row(nh);
    for (int i = 0; i < nh; ++i) {
      int g = a.act(v, out.h_embed[i]);
      row[i] = out.h_class[g] >= 0 ? out.h_class[g] : out.h_class[fallback];
    }
    auto [it, fresh] = by_row.emplace(row, static_cast<int>(reps.size()));
    if (fresh) {
      reps.push_back(v);
      rows.push_back(std::move(row));
    }
    out.v_class[v] = it->second;
  }

  auto sub = std::make_shared<ForestAlgebra>();
  sub->h.size = nh;
  sub->h.identity = out.h_class[a.h.identity];
  sub->h.table.resize(static_cast<std::size_t>(nh) * nh);
  for (int i = 0; i < nh; ++i)
    for (int j = 0; j < nh; ++j) {
      int s = a.add(out.h_embed[i], out.h_embed[j]);
      if (out.h_class[s] < 0) throw std::logic_error("restriction subset is not closed under +");
      sub->h.table[static_cast<std::size_t>(i) * nh + j] = out.h_class[s];
    }
  int nv = static_cast<int>(reps.size());
  sub->v.size = nv;
  sub->v.identity = out.v_class[a.v.identity];
  sub->v.table.resize(static_cast<std::size_t>(nv) * nv);
  for (int x = 0; x < nv; ++x)
    for (int y = 0; y < nv; ++y)
      sub->v.table[static_cast<std::size_t>(x) * nv + y] = out.v_class[a.mul(reps[x], reps[y])];
  sub->action.resize(static_cast<std::size_t>(nv) * nh);
  for (int x = 0; x < nv; ++x)
    for (int i = 0; i < nh; ++i) sub->action[static_cast<std::size_t>(x) * nh + i] = rows[x][i];
  sub->ins_pre.resize(nh);
  sub->ins_post.resize(nh);
  for (int i = 0; i < nh; ++i) {
    sub->ins_pre[i] = out.v_class[a.ins_pre[out.h_embed[i]]];
    sub->ins_post[i] = out.v_class[a.ins_post[out.h_embed[i]]];
  }
  sub->h_names.resize(nh);
  for (int i = 0; i < nh; ++i) sub->h_names[i] = a.h_name(out.h_embed[i]);
  sub->v_names.resize(nv);
  for (int x = 0; x < nv; ++x) sub->v_names[x] = a.v_name(reps[x]);

  CheckResult valid = validate_algebra(*sub);
  if (!valid.ok) throw std::logic_error("restriction is not a forest algebra: " + valid.detail);
  out.algebra = std::move(sub);
  return out;
}

CheckResult homomorphism_laws(const ForestAlgebra& s, const ForestAlgebra& t,
                              const std::vector<int>& h_map, const std::vector<int>& v_map) {
  if (static_cast<int>(h_map.size()) != s.h.size || static_cast<int>(v_map.size()) != s.v.size)
    return {false, "map sizes do not match the source"};
  for (int g = 0; g < s.h.size; ++g)
    if (h_map[g] < 0 || h_map[g] >= t.h.size) return {false, "h_map is out of range at " + s.h_name(g)};
  for (int v = 0; v < s.v.size; ++v)
    if (v_map[v] < 0 || v_map[v] >= t.v.size) return {false, "v_map is out of range at " + s.v_name(v)};
  if (h_map[s.h.identity] != t.h.identity) return {false, "h_map does not preserve 0"};
  if (v_map[s.v.identity] != t.v.identity) return {false, "v_map does not preserve 1"};
  for (int g1 = 0; g1 < s.h.size; ++g1)
    for (int g2 = 0; g2 < s.h.size; ++g2)
      if (h_map[s.add(g1, g2)] != t.h.apply(h_map[g1], h_map[g2]))
        return {false, "h_map breaks + at " + s.h_name(g1) + " + " + s.h_name(g2)};
  for (int v1 = 0; v1 < s.v.size; ++v1)
    for (int v2 = 0; v2 < s.v.size; ++v2)
      if (v_map[s.mul(v1, v2)] != t.v.apply(v_map[v1], v_map[v2]))
        return {false, "v_map breaks composition at " + s.v_name(v1) + " . " + s.v_name(v2)};
  for (int v = 0; v < s.v.size; ++v)
    for (int g = 0; g < s.h.size; ++g)
      if (h_map[s.act(v, g)] != t.act(v_map[v], h_map[g]))
        return {false, "action is not preserved at " + s.v_name(v) + " applied to " + s.h_name(g)};
  return {};
}

Embedding decompose_impl(const ForestAlgebra& a, int max_elements);

Embedding base_embedding(const ForestAlgebra& a) {
  Embedding out;
  out.source = std::make_shared<ForestAlgebra>(a);
  out.expression = AlgebraExpression::atom_of("U1", u1());
  out.realized = out.expression.atom;
  int inf = absorbing_sum(a);
  out.h_map.assign(a.h.size, 0);
  out.h_map[a.h.identity] = 0;
  if (inf != a.h.identity) out.h_map[inf] = 1;
  out.v_map.assign(a.v.size, 0);
  for (int v = 0; v < a.v.size; ++v) {
    bool identity = true;
    bool constant = true;
    for (int g = 0; g < a.h.size; ++g) {
      identity = identity && a.act(v, g) == g;
      constant = constant && a.act(v, g) == inf;
    }
    if (identity)
      out.v_map[v] = 0;
    else if (constant)
      out.v_map[v] = 1;
    else
      throw std::logic_error("an EF algebra on at most two elements acts by identities and constants");
  }
  return out;
}

// Embeds the algebra via g -> (g or inf per component) into the direct
// product of the restrictions to H_h = {inf} + {g : h in Vg}, one per
// subminimal h. Each restriction omits the other subminimal elements, so the
// recursion shrinks.
Embedding product_embedding(const ForestAlgebra& a, int inf, const std::vector<int>& subs,
                            int max_elements) {
  std::vector<StarRestriction> parts;
  std::vector<Embedding> children;
  for (int s : subs) {
    std::vector<int> subset;
    for (int g = 0; g < a.h.size; ++g) {
      bool in = g == inf;
      for (int v = 0; v < a.v.size && !in; ++v) in = a.act(v, g) == s;
      if (in) subset.push_back(g);
    }
    if (static_cast<int>(subset.size()) >= a.h.size)
      throw std::logic_error("a restriction at a subminimal element must shrink H");
    parts.push_back(star_restriction(a, std::move(subset), inf));
    children.push_back(decompose_impl(*parts.back().algebra, max_elements));
  }

  Embedding out;
  out.source = std::make_shared<ForestAlgebra>(a);
  out.h_map.resize(a.h.size);
  out.v_map.resize(a.v.size);
  auto component_h = [&](int k, int g) {
    int local = parts[k].h_class[g] >= 0 ? parts[k].h_class[g] : parts[k].h_class[inf];
    return children[k].h_map[local];
  };
  for (int g = 0; g < a.h.size; ++g) out.h_map[g] = component_h(0, g);
  for (int v = 0; v < a.v.size; ++v) out.v_map[v] = children[0].v_map[parts[0].v_class[v]];
  AlgebraPtr realized = children[0].realized;
  for (std::size_t k = 1; k < children.size(); ++k) {
    const ForestAlgebra& next = *children[k].realized;
    if (static_cast<long long>(realized->v.size) * next.v.size > max_elements ||
        static_cast<long long>(realized->h.size) * next.h.size > max_elements)
      throw SizeGuardExceeded("direct product target exceeds " + std::to_string(max_elements) +
                              " elements");
    ForestAlgebra prod = direct_product(*realized, next);
    for (int g = 0; g < a.h.size; ++g)
      out.h_map[g] = out.h_map[g] * next.h.size + component_h(static_cast<int>(k), g);
    for (int v = 0; v < a.v.size; ++v)
      out.v_map[v] = out.v_map[v] * next.v.size + children[k].v_map[parts[k].v_class[v]];
    realized = std::make_shared<ForestAlgebra>(std::move(prod));
  }
  out.realized = std::move(realized);
  std::vector<AlgebraExpression> args;
  for (auto& c : children) args.push_back(std::move(c.expression));
  out.expression = AlgebraExpression::product(std::move(args));
  return out;
}

// Embeds the algebra into (G, W) o U1, G = H minus inf, with the classic
// maps: g -> (g, 0), inf -> (s, inf), and v -> (v**, f_v) where v** replaces
// the value inf by the subminimal s and f_v(g) is the constant map exactly
// when vg = inf. Points of the realized target outside the embedded copy of
// G take the constant map as well, which composition then absorbs.
Embedding wreath_embedding(const ForestAlgebra& a, int inf, int s, int max_elements) {
  std::vector<int> g_set;
  for (int g = 0; g < a.h.size; ++g)
    if (g != inf) g_set.push_back(g);
  StarRestriction gw = star_restriction(a, std::move(g_set), s);
  Embedding child = decompose_impl(*gw.algebra, max_elements);
  const ForestAlgebra& left = *child.realized;
  ForestAlgebra right = u1();

  std::vector<int> parent_of(left.h.size, -1);
  for (std::size_t i = 0; i < gw.h_embed.size(); ++i) parent_of[child.h_map[i]] = gw.h_embed[i];

  std::vector<std::pair<std::string, WreathVertical>> gens;
  std::vector<int> gen_of(a.v.size, -1);
  for (int v = 0; v < a.v.size; ++v) {
    if (v == a.v.identity) continue;
    WreathVertical w;
    w.left = child.v_map[gw.v_class[v]];
    w.table.assign(left.h.size, 1);
    for (int x = 0; x < left.h.size; ++x)
      if (parent_of[x] >= 0) w.table[x] = a.act(v, parent_of[x]) == inf ? 1 : 0;
    gen_of[v] = static_cast<int>(gens.size());
    gens.emplace_back(a.v_name(v), std::move(w));
  }
  WreathAlgebra big = wreath_generated(left, right, gens, max_elements);

  Embedding out;
  out.source = std::make_shared<ForestAlgebra>(a);
  out.realized = big.algebra;
  out.expression = AlgebraExpression::wreath(
      {std::move(child.expression), AlgebraExpression::atom_of("U1", std::move(right))});
  out.h_map.resize(a.h.size);
  for (int g = 0; g < a.h.size; ++g)
    out.h_map[g] = g == inf ? child.h_map[gw.h_class[s]] * 2 + 1 : child.h_map[gw.h_class[g]] * 2;
  out.v_map.resize(a.v.size);
  for (int v = 0; v < a.v.size; ++v)
    out.v_map[v] = v == a.v.identity ? big.algebra->v.identity : big.generator_index[gen_of[v]];
  return out;
}

Embedding decompose_impl(const ForestAlgebra& a, int max_elements) {
  Embedding out;
  if (a.h.size <= 2) {
    out = base_embedding(a);
  } else {
    int inf = absorbing_sum(a);
    std::vector<int> subs = subminimal_elements(a, inf);
    if (subs.empty()) throw std::logic_error("an EF algebra with |H| > 2 has a subminimal element");
    if (subs.size() > 1)
      out = product_embedding(a, inf, subs, max_elements);
    else
      out = wreath_embedding(a, inf, subs[0], max_elements);
  }
  CheckResult ok = verify_embedding(out);
  if (!ok.ok) throw std::logic_error("decomposition produced an invalid embedding: " + ok.detail);
  return out;
}

}  // namespace

CheckResult verify_embedding(const Embedding& e) {
  if (!e.source || !e.realized) return {false, "embedding is missing an algebra"};
  const ForestAlgebra& s = *e.source;
  CheckResult laws = homomorphism_laws(s, *e.realized, e.h_map, e.v_map);
  if (!laws.ok) return laws;
  for (int g1 = 0; g1 < s.h.size; ++g1)
    for (int g2 = g1 + 1; g2 < s.h.size; ++g2)
      if (e.h_map[g1] == e.h_map[g2])
        return {false, "h_map is not injective: " + s.h_name(g1) + " and " + s.h_name(g2)};
  return {};
}

int count_atoms(const AlgebraExpression& e) {
  if (e.kind == AlgebraExpression::Kind::Atom) return 1;
  int n = 0;
  for (const auto& arg : e.arguments) n += count_atoms(arg);
  return n;
}

int expression_depth(const AlgebraExpression& e) {
  if (e.kind == AlgebraExpression::Kind::Atom) return 0;
  int deepest = 0;
  for (const auto& arg : e.arguments) deepest = std::max(deepest, expression_depth(arg));
  return 1 + deepest;
}

Embedding ef_decompose(const ForestAlgebra& a, int max_elements) {
  PropertyCheck ef = check_ef(a);
  if (!ef.holds) throw std::invalid_argument("not an EF algebra: " + ef.counterexample);
  return decompose_impl(a, max_elements);
}

CheckResult verify_quotient(const DistributiveQuotient& q) {
  if (!q.source || !q.target) return {false, "quotient is missing an algebra"};
  const ForestAlgebra& s = *q.source;
  const ForestAlgebra& t = *q.target;
  CheckResult laws = homomorphism_laws(s, t, q.h_map, q.v_map);
  if (!laws.ok) return laws;
  std::vector<bool> h_hit(t.h.size, false);
  std::vector<bool> v_hit(t.v.size, false);
  for (int g = 0; g < s.h.size; ++g) h_hit[q.h_map[g]] = true;
  for (int v = 0; v < s.v.size; ++v) v_hit[q.v_map[v]] = true;
  for (int g = 0; g < t.h.size; ++g)
    if (!h_hit[g]) return {false, "h_map misses " + t.h_name(g)};
  for (int v = 0; v < t.v.size; ++v)
    if (!v_hit[v]) return {false, "v_map misses " + t.v_name(v)};
  return {};
}

DistributiveQuotient distributive_quotient(const ForestAlgebra& a) {
  PropertyCheck path = check_path(a);
  if (!path.holds) throw std::invalid_argument("not a path algebra: " + path.counterexample);

  std::vector<int> e_embed;
  std::vector<int> e_class(a.h.size, -1);
  for (int h = 0; h < a.h.size; ++h)
    if (a.add(h, h) == h) {
      e_class[h] = static_cast<int>(e_embed.size());
      e_embed.push_back(h);
    }
  int nh = static_cast<int>(e_embed.size());

  DistributiveQuotient q;
  q.source = std::make_shared<ForestAlgebra>(a);
  q.h_map.resize(a.h.size);
  for (int h = 0; h < a.h.size; ++h) q.h_map[h] = e_class[additive_omega_multiple(a.h, h)];

  std::vector<int> reps;
  std::vector<std::vector<int>> rows;
  std::map<std::vector<int>, int> by_row;
  q.v_map.assign(a.v.size, -1);
  for (int v = 0; v < a.v.size; ++v) {
    std::vector<int> row(nh);
    for (int i = 0; i < nh; ++i)
      row[i] = e_class[additive_omega_multiple(a.h, a.act(v, e_embed[i]))];
    auto [it, fresh] = by_row.emplace(row, static_cast<int>(reps.size()));
    if (fresh) {
      reps.push_back(v);
      rows.push_back(std::move(row));
    }
    q.v_map[v] = it->second;
  }
  int nv = static_cast<int>(reps.size());

  auto target = std::make_shared<ForestAlgebra>();
  target->h.size = nh;
  target->h.identity = e_class[a.h.identity];
  target->h.table.resize(static_cast<std::size_t>(nh) * nh);
  for (int i = 0; i < nh; ++i)
    for (int j = 0; j < nh; ++j) {
      int s = a.add(e_embed[i], e_embed[j]);
      if (e_class[s] < 0) throw std::logic_error("idempotents are not closed under +");
      target->h.table[static_cast<std::size_t>(i) * nh + j] = e_class[s];
    }
  target->v.size = nv;
  target->v.identity = q.v_map[a.v.identity];
  target->v.table.resize(static_cast<std::size_t>(nv) * nv);
  for (int x = 0; x < nv; ++x)
    for (int y = 0; y < nv; ++y)
      target->v.table[static_cast<std::size_t>(x) * nv + y] = q.v_map[a.mul(reps[x], reps[y])];
  target->action.resize(static_cast<std::size_t>(nv) * nh);
  for (int x = 0; x < nv; ++x)
    for (int i = 0; i < nh; ++i) target->action[static_cast<std::size_t>(x) * nh + i] = rows[x][i];
  target->ins_pre.resize(nh);
  target->ins_post.resize(nh);
  for (int i = 0; i < nh; ++i) {
    target->ins_pre[i] = q.v_map[a.ins_pre[e_embed[i]]];
    target->ins_post[i] = q.v_map[a.ins_post[e_embed[i]]];
  }
  target->h_names.resize(nh);
  for (int i = 0; i < nh; ++i) target->h_names[i] = a.h_name(e_embed[i]);
  target->v_names.resize(nv);
  for (int x = 0; x < nv; ++x) target->v_names[x] = a.v_name(reps[x]);

  CheckResult valid = validate_algebra(*target);
  if (!valid.ok) throw std::logic_error("quotient target is invalid: " + valid.detail);
  q.target = std::move(target);
  CheckResult hom = verify_quotient(q);
  if (!hom.ok) throw std::logic_error("quotient is not a homomorphism: " + hom.detail);
  PropertyCheck dist = check_distributive(*q.target);
  if (!dist.holds) throw std::logic_error("quotient target is not distributive: " + dist.counterexample);
  return q;
}

}  // namespace forestalg
