#include "forestalg/classify.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <stdexcept>

namespace forestalg {

namespace {

std::vector<int> action_row(const ForestAlgebra& a, int v) {
  std::vector<int> row(a.h.size);
  for (int h = 0; h < a.h.size; ++h) row[h] = a.act(v, h);
  return row;
}

std::vector<std::pair<std::string, std::vector<int>>> action_generators(const ForestAlgebra& a) {
  std::vector<std::pair<std::string, std::vector<int>>> gens;
  gens.reserve(a.v.size);
  for (int v = 0; v < a.v.size; ++v) gens.emplace_back(a.v_name(v), action_row(a, v));
  return gens;
}

/// Eventual period of repeated composition of one closure element.
int element_period(const FiniteMonoid& m, int e) {
  std::map<int, int> step_of;
  int x = e;
  for (int step = 1;; ++step) {
    auto [it, fresh] = step_of.emplace(x, step);
    if (!fresh) return step - it->second;
    x = m.apply(x, e);
  }
}

/// First cycle of length > 1 in the functional graph of `image`.
std::vector<int> value_cycle(const std::vector<int>& image) {
  for (int start = 0; start < static_cast<int>(image.size()); ++start) {
    std::vector<int> orbit;
    std::vector<int> seen_at(image.size(), -1);
    int x = start;
    while (seen_at[x] < 0) {
      seen_at[x] = static_cast<int>(orbit.size());
      orbit.push_back(x);
      x = image[x];
    }
    std::vector<int> cycle(orbit.begin() + seen_at[x], orbit.end());
    if (cycle.size() > 1) return cycle;
  }
  return {};
}

ConfusionVerdict vertical_verdict(const ForestAlgebra& a, const VerticalClosure& closure,
                                  ConfusionWitness::Kind kind) {
  for (std::size_t e = 0; e < closure.elements.size(); ++e) {
    if (element_period(closure.monoid, static_cast<int>(e)) <= 1) continue;
    ConfusionWitness w;
    w.kind = kind;
    w.expression = closure.elements[e].provenance;
    w.cycle = value_cycle(closure.elements[e].image);
    return ConfusionVerdict{true, std::move(w)};
  }
  return {};
}

unsigned apply_mask(const ForestAlgebra& a, int v, unsigned mask) {
  unsigned out = 0;
  for (int h = 0; h < a.h.size; ++h)
    if (mask >> h & 1) out |= 1u << a.act(v, h);
  return out;
}

unsigned add_masks(const ForestAlgebra& a, unsigned m1, unsigned m2) {
  unsigned out = 0;
  for (int h1 = 0; h1 < a.h.size; ++h1) {
    if (!(m1 >> h1 & 1)) continue;
    for (int h2 = 0; h2 < a.h.size; ++h2)
      if (m2 >> h2 & 1) out |= 1u << a.add(h1, h2);
  }
  return out;
}

void canonicalize(Profile& p) {
  std::sort(p.family.begin(), p.family.end());
  p.family.erase(std::unique(p.family.begin(), p.family.end()), p.family.end());
}

Profile base_profile(unsigned gmask) {
  Profile p;
  for (unsigned h = 0; h < 32; ++h)
    if (gmask >> h & 1) p.family.push_back(1u << h);
  p.values = gmask;
  return p;
}

Profile apply_profile(const ForestAlgebra& a, int v, const Profile& p) {
  Profile out;
  out.family.reserve(p.family.size());
  for (unsigned x : p.family) out.family.push_back(apply_mask(a, v, x));
  out.values = apply_mask(a, v, p.values);
  canonicalize(out);
  return out;
}

Profile sum_profiles(const ForestAlgebra& a, const Profile& p1, const Profile& p2) {
  Profile out;
  out.family.reserve(p1.family.size() + p2.family.size());
  for (unsigned x : p1.family) out.family.push_back(add_masks(a, x, p2.values));
  for (unsigned x : p2.family) out.family.push_back(add_masks(a, p1.values, x));
  out.values = add_masks(a, p1.values, p2.values);
  canonicalize(out);
  return out;
}

bool confuses(const Profile& p, unsigned gmask) {
  for (unsigned x : p.family)
    if ((x & gmask) != gmask) return false;
  return true;
}

/// Keeps only the steps the final one depends on, renumbered.
std::vector<ProfileStep> prune_trace(const std::vector<ProfileStep>& steps, int last) {
  std::vector<char> needed(steps.size(), 0);
  std::vector<int> stack{last};
  while (!stack.empty()) {
    int i = stack.back();
    stack.pop_back();
    if (needed[i]) continue;
    needed[i] = 1;
    if (steps[i].left >= 0) stack.push_back(steps[i].left);
    if (steps[i].right >= 0) stack.push_back(steps[i].right);
  }
  std::vector<int> renumber(steps.size(), -1);
  std::vector<ProfileStep> out;
  for (std::size_t i = 0; i < steps.size(); ++i) {
    if (!needed[i]) continue;
    ProfileStep s = steps[i];
    if (s.left >= 0) s.left = renumber[s.left];
    if (s.right >= 0) s.right = renumber[s.right];
    renumber[i] = static_cast<int>(out.size());
    out.push_back(s);
  }
  return out;
}

/// Fixpoint over derivable profiles for one subset; returns a witness when
/// some profile's family members all contain gmask.
std::optional<ConfusionWitness> confusion_for_subset(const ForestAlgebra& a, unsigned gmask,
                                                     int max_profiles) {
  std::map<Profile, int> index_of;
  std::vector<Profile> profiles;
  std::vector<ProfileStep> steps;
  int found = -1;

  auto insert = [&](Profile p, ProfileStep step) {
    auto [it, fresh] = index_of.emplace(std::move(p), static_cast<int>(profiles.size()));
    if (!fresh) return;
    if (static_cast<int>(profiles.size()) >= max_profiles)
      throw SizeGuardExceeded("profile fixpoint exceeds " + std::to_string(max_profiles) +
                              " profiles");
    profiles.push_back(it->first);
    steps.push_back(step);
    if (found < 0 && confuses(it->first, gmask)) found = it->second;
  };

  insert(base_profile(gmask), ProfileStep{});
  for (std::size_t i = 0; i < profiles.size() && found < 0; ++i) {
    for (int v = 0; v < a.v.size && found < 0; ++v)
      insert(apply_profile(a, v, profiles[i]),
             ProfileStep{ProfileStep::Rule::Apply, v, static_cast<int>(i), -1});
    for (std::size_t j = 0; j <= i && found < 0; ++j) {
      insert(sum_profiles(a, profiles[i], profiles[j]),
             ProfileStep{ProfileStep::Rule::Sum, -1, static_cast<int>(i), static_cast<int>(j)});
      insert(sum_profiles(a, profiles[j], profiles[i]),
             ProfileStep{ProfileStep::Rule::Sum, -1, static_cast<int>(j), static_cast<int>(i)});
    }
  }
  if (found < 0) return std::nullopt;

  ConfusionWitness w;
  w.kind = ConfusionWitness::Kind::Horizontal;
  for (int h = 0; h < a.h.size; ++h)
    if (gmask >> h & 1) w.subset.push_back(h);
  w.trace = prune_trace(steps, found);
  w.profile = profiles[found];
  return w;
}

}  // namespace

PropertyCheck check_ef(const ForestAlgebra& a) {
  PropertyCheck r;
  for (int g = 0; g < a.h.size && r.holds; ++g) {
    if (a.add(g, g) != g) {
      r.holds = false;
      r.counterexample = a.h_name(g) + " + " + a.h_name(g) + " = " + a.h_name(a.add(g, g));
    }
    for (int h = 0; h < g && r.holds; ++h)
      if (a.add(g, h) != a.add(h, g)) {
        r.holds = false;
        r.counterexample = a.h_name(g) + " + " + a.h_name(h) + " != " + a.h_name(h) + " + " +
                           a.h_name(g);
      }
  }
  for (int v = 0; v < a.v.size && r.holds; ++v)
    for (int h = 0; h < a.h.size && r.holds; ++h)
      if (a.add(a.act(v, h), h) != a.act(v, h)) {
        r.holds = false;
        r.counterexample = "vh + h != vh for v = " + a.v_name(v) + ", h = " + a.h_name(h);
      }
  return r;
}

PropertyCheck check_distributive(const ForestAlgebra& a) {
  PropertyCheck r;
  r.v_aperiodic = is_aperiodic(a.v);
  for (int g = 0; g < a.h.size && r.holds; ++g)
    for (int h = 0; h < g && r.holds; ++h)
      if (a.add(g, h) != a.add(h, g)) {
        r.holds = false;
        r.counterexample = "H is not commutative at " + a.h_name(g) + ", " + a.h_name(h);
      }
  for (int v = 0; v < a.v.size && r.holds; ++v)
    for (int h1 = 0; h1 < a.h.size && r.holds; ++h1)
      for (int h2 = 0; h2 < a.h.size && r.holds; ++h2)
        if (a.act(v, a.add(h1, h2)) != a.add(a.act(v, h1), a.act(v, h2))) {
          r.holds = false;
          r.counterexample = "v(h1+h2) != vh1 + vh2 for v = " + a.v_name(v) + ", h1 = " +
                             a.h_name(h1) + ", h2 = " + a.h_name(h2);
        }
  return r;
}

PropertyCheck check_path(const ForestAlgebra& a) {
  PropertyCheck r;
  r.v_aperiodic = is_aperiodic(a.v);
  if (!is_aperiodic(a.h)) {
    r.holds = false;
    r.counterexample = "H is not aperiodic";
    return r;
  }
  for (int g = 0; g < a.h.size; ++g)
    for (int h = 0; h < g; ++h)
      if (a.add(g, h) != a.add(h, g)) {
        r.holds = false;
        r.counterexample = "H is not commutative at " + a.h_name(g) + ", " + a.h_name(h);
        return r;
      }
  for (int v = 0; v < a.v.size; ++v) {
    int v0 = a.act(v, a.h.identity);
    for (int g = 0; g < a.h.size; ++g)
      for (int h = 0; h < a.h.size; ++h)
        if (a.add(a.act(v, g), a.act(v, h)) != a.add(a.act(v, a.add(g, h)), v0)) {
          r.holds = false;
          r.counterexample = "vg + vh != v(g+h) + v0 for v = " + a.v_name(v) + ", g = " +
                             a.h_name(g) + ", h = " + a.h_name(h);
          return r;
        }
  }
  for (int u = 0; u < a.v.size; ++u) {
    if (a.mul(u, u) != u) continue;
    for (int g = 0; g < a.h.size; ++g)
      for (int h = 0; h < a.h.size; ++h)
        if (a.act(u, a.add(g, h)) != a.act(u, a.add(g, a.act(u, h)))) {
          r.holds = false;
          r.counterexample = "u(g+h) != u(g+uh) for idempotent u = " + a.v_name(u) + ", g = " +
                             a.h_name(g) + ", h = " + a.h_name(h);
          return r;
        }
  }
  return r;
}

VerticalClosure vhat(const ForestAlgebra& a, int max_elements) {
  VerticalClosure c;
  ClosureOps ops;
  ops.compose = true;
  ops.pointwise_add = true;
  c.elements = closure_transformations(a.h, action_generators(a), ops, max_elements);
  c.monoid = transformation_monoid(c.elements, a.h.size);
  return c;
}

VerticalClosure vtilde(const ForestAlgebra& a, int max_elements) {
  VerticalClosure c;
  ClosureOps ops;
  ops.compose = true;
  ops.self_add_max = a.h.size;
  c.elements = closure_transformations(a.h, action_generators(a), ops, max_elements);
  c.monoid = transformation_monoid(c.elements, a.h.size);
  return c;
}

ConfusionVerdict vertical_confusion(const ForestAlgebra& a, int max_elements) {
  return vertical_verdict(a, vhat(a, max_elements), ConfusionWitness::Kind::Vertical);
}

ConfusionVerdict uniform_vertical_confusion(const ForestAlgebra& a, int max_elements) {
  return vertical_verdict(a, vtilde(a, max_elements), ConfusionWitness::Kind::UniformVertical);
}

ConfusionVerdict horizontal_confusion(const ForestAlgebra& a, int max_h_for_subsets,
                                      int max_profiles) {
  if (a.h.size > max_h_for_subsets)
    throw SizeGuardExceeded("subset loop over |H| = " + std::to_string(a.h.size) +
                            " exceeds the cap " + std::to_string(max_h_for_subsets));
  std::vector<unsigned> subsets;
  for (unsigned g = 0; g < (1u << a.h.size); ++g)
    if (std::popcount(g) > 1) subsets.push_back(g);
  std::stable_sort(subsets.begin(), subsets.end(),
                   [](unsigned x, unsigned y) { return std::popcount(x) < std::popcount(y); });
  for (unsigned gmask : subsets)
    if (auto w = confusion_for_subset(a, gmask, max_profiles))
      return ConfusionVerdict{true, std::move(w)};
  return {};
}

namespace {

std::vector<int> eval_provenance(const ForestAlgebra& a, const Provenance& p,
                                 const std::map<std::string, int>& v_index) {
  switch (p.kind) {
    case Provenance::Kind::Generator: {
      auto it = v_index.find(p.generator);
      if (it == v_index.end())
        throw std::invalid_argument("unknown generator in witness: " + p.generator);
      return action_row(a, it->second);
    }
    case Provenance::Kind::Compose: {
      std::vector<int> f = eval_provenance(a, p.arguments[0], v_index);
      std::vector<int> g = eval_provenance(a, p.arguments[1], v_index);
      std::vector<int> r(g.size());
      for (std::size_t x = 0; x < g.size(); ++x) r[x] = f[g[x]];
      return r;
    }
    case Provenance::Kind::Add: {
      std::vector<int> f = eval_provenance(a, p.arguments[0], v_index);
      std::vector<int> g = eval_provenance(a, p.arguments[1], v_index);
      std::vector<int> r(f.size());
      for (std::size_t x = 0; x < f.size(); ++x) r[x] = a.add(f[x], g[x]);
      return r;
    }
    case Provenance::Kind::SelfAdd: {
      std::vector<int> f = eval_provenance(a, p.arguments[0], v_index);
      std::vector<int> r = f;
      for (int m = 2; m <= p.repeat; ++m)
        for (std::size_t x = 0; x < f.size(); ++x) r[x] = a.add(r[x], f[x]);
      return r;
    }
  }
  throw std::logic_error("unhandled provenance kind");
}

bool uses_pointwise_add(const Provenance& p) {
  if (p.kind == Provenance::Kind::Add) return true;
  for (const Provenance& arg : p.arguments)
    if (uses_pointwise_add(arg)) return true;
  return false;
}

}  // namespace

CheckResult verify_witness(const ForestAlgebra& a, const ConfusionWitness& w) {
  if (w.kind != ConfusionWitness::Kind::Horizontal) {
    if (w.cycle.size() < 2) return {false, "cycle shorter than 2"};
    if (w.kind == ConfusionWitness::Kind::UniformVertical && uses_pointwise_add(w.expression))
      return {false, "uniform witness may not use pointwise addition"};
    std::map<std::string, int> v_index;
    for (int v = 0; v < a.v.size; ++v) v_index.emplace(a.v_name(v), v);
    std::vector<int> image;
    try {
      image = eval_provenance(a, w.expression, v_index);
    } catch (const std::invalid_argument& e) {
      return {false, e.what()};
    }
    int k = static_cast<int>(w.cycle.size());
    for (int i = 0; i < k; ++i) {
      int g = w.cycle[i];
      if (g < 0 || g >= a.h.size) return {false, "cycle value out of range"};
      if (image[g] != w.cycle[(i + 1) % k])
        return {false, "expression does not map " + a.h_name(g) + " to the next cycle value"};
    }
    return {};
  }

  if (w.subset.size() < 2) return {false, "subset smaller than 2"};
  unsigned gmask = 0;
  for (int h : w.subset) {
    if (h < 0 || h >= a.h.size) return {false, "subset value out of range"};
    gmask |= 1u << h;
  }
  std::vector<Profile> derived;
  for (std::size_t i = 0; i < w.trace.size(); ++i) {
    const ProfileStep& s = w.trace[i];
    switch (s.rule) {
      case ProfileStep::Rule::Base:
        derived.push_back(base_profile(gmask));
        break;
      case ProfileStep::Rule::Apply:
        if (s.left < 0 || s.left >= static_cast<int>(i) || s.v < 0 || s.v >= a.v.size)
          return {false, "bad apply step"};
        derived.push_back(apply_profile(a, s.v, derived[s.left]));
        break;
      case ProfileStep::Rule::Sum:
        if (s.left < 0 || s.left >= static_cast<int>(i) || s.right < 0 ||
            s.right >= static_cast<int>(i))
          return {false, "bad sum step"};
        derived.push_back(sum_profiles(a, derived[s.left], derived[s.right]));
        break;
    }
  }
  if (derived.empty()) return {false, "empty trace"};
  if (!(derived.back() == w.profile)) return {false, "trace does not derive the claimed profile"};
  if (!confuses(derived.back(), gmask))
    return {false, "profile family has a member not containing G"};
  return {};
}

Multicontext amplify(const Multicontext& p, int k) {
  if (k < 1) throw std::invalid_argument("amplification count must be at least 1");
  if (hole_count(p) == 0) throw std::invalid_argument("multicontext has no holes");
  Multicontext out = p;
  for (int i = 2; i <= k; ++i) out = substitute_all_holes(p, out);
  return out;
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Excluded:
      return "excluded";
    case Verdict::ConditionsPass:
      return "necessary conditions pass";
    case Verdict::Skipped:
      return "skipped (size guard)";
  }
  return {};
}

ClassificationReport classification_report(const ForestAlgebra& a, int max_elements) {
  ClassificationReport r;
  r.ef = check_ef(a);
  r.distributive = check_distributive(a);
  r.path = check_path(a);
  r.v_aperiodic = is_aperiodic(a.v);

  r.h_idempotent = true;
  for (int h = 0; h < a.h.size && r.h_idempotent; ++h) r.h_idempotent = a.add(h, h) == h;
  r.h_commutative = true;
  for (int g = 0; g < a.h.size && r.h_commutative; ++g)
    for (int h = 0; h < g && r.h_commutative; ++h) r.h_commutative = a.add(g, h) == a.add(h, g);

  try {
    r.vertical = vertical_confusion(a, max_elements);
  } catch (const SizeGuardExceeded&) {
  }
  try {
    r.uniform = uniform_vertical_confusion(a, max_elements);
  } catch (const SizeGuardExceeded&) {
  }
  try {
    r.horizontal = horizontal_confusion(a);
  } catch (const SizeGuardExceeded&) {
  }

  if (!r.vertical)
    r.ctl = Verdict::Skipped;
  else
    r.ctl = r.vertical->confused ? Verdict::Excluded : Verdict::ConditionsPass;
  if (!r.v_aperiodic)
    r.fo = Verdict::Excluded;
  else if (!r.uniform)
    r.fo = Verdict::Skipped;
  else
    r.fo = r.uniform->confused ? Verdict::Excluded : Verdict::ConditionsPass;
  if (!r.horizontal)
    r.graded_pdl = Verdict::Skipped;
  else
    r.graded_pdl = r.horizontal->confused ? Verdict::Excluded : Verdict::ConditionsPass;

  if (r.fo != Verdict::ConditionsPass) {
    r.ctl_star_note = "FO necessary conditions fail or were skipped; no relative CTL* claim";
  } else if (r.h_idempotent) {
    r.ctl_star_note =
        "H is idempotent: for a syntactic algebra, FO-definable implies CTL*-definable";
  } else {
    r.ctl_star_note = "H is not idempotent: for a syntactic algebra, CTL* is ruled out";
  }
  if (r.graded_pdl == Verdict::Excluded) {
    r.pdl_note = "graded-PDL necessary conditions fail; no relative PDL claim";
  } else if (r.graded_pdl == Verdict::Skipped) {
    r.pdl_note = "horizontal detector skipped; no relative PDL claim";
  } else if (r.h_idempotent) {
    r.pdl_note =
        "H is idempotent: for a syntactic algebra, graded-PDL-definable implies PDL-definable";
  } else {
    r.pdl_note = "H is not idempotent: for a syntactic algebra, PDL is ruled out";
  }
  return r;
}

}  // namespace forestalg
