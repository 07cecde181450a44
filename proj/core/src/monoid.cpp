#include "forestalg/monoid.hpp"

#include <deque>
#include <map>
#include <stdexcept>

namespace forestalg {

int FiniteMonoid::power(int a, int n) const {
  int r = a;
  for (int i = 1; i < n; ++i) r = apply(r, a);
  return r;
}

CheckResult validate_monoid(const FiniteMonoid& m) {
  if (m.size <= 0) return {false, "carrier must be non-empty"};
  if (static_cast<int>(m.table.size()) != m.size * m.size)
    return {false, "table size does not match carrier size"};
  if (m.identity < 0 || m.identity >= m.size) return {false, "identity out of range"};
  for (int x : m.table)
    if (x < 0 || x >= m.size) return {false, "table entry out of range"};
  for (int a = 0; a < m.size; ++a) {
    if (m.apply(m.identity, a) != a || m.apply(a, m.identity) != a)
      return {false, "identity law fails at element " + std::to_string(a)};
  }
  for (int a = 0; a < m.size; ++a)
    for (int b = 0; b < m.size; ++b)
      for (int c = 0; c < m.size; ++c)
        if (m.apply(m.apply(a, b), c) != m.apply(a, m.apply(b, c)))
          return {false, "associativity fails at (" + std::to_string(a) + "," +
                             std::to_string(b) + "," + std::to_string(c) + ")"};
  return {};
}

bool is_aperiodic(const FiniteMonoid& m) {
  for (int a = 0; a < m.size; ++a) {
    int p = m.power(a, m.size);
    if (m.apply(p, a) != p) return false;
  }
  return true;
}

int omega_power(const FiniteMonoid& m, int a) {
  // Find the preperiod and period of the power sequence, then the unique
  // idempotent exponent inside the cycle.
  std::vector<int> seen_at(m.size, -1);
  int x = a;
  int exp = 1;
  while (seen_at[x] < 0) {
    seen_at[x] = exp;
    x = m.apply(x, a);
    ++exp;
  }
  int entry = seen_at[x];
  int period = exp - entry;
  int target = entry;
  while (target % period != 0) ++target;
  return m.power(a, target);
}

int additive_omega_multiple(const FiniteMonoid& h, int a) {
  for (int x = 0; x < h.size; ++x)
    for (int y = x; y < h.size; ++y)
      if (h.apply(x, y) != h.apply(y, x))
        throw std::invalid_argument("additive omega requires a commutative monoid");
  if (!is_aperiodic(h))
    throw std::invalid_argument("additive omega requires an aperiodic monoid");
  return omega_power(h, a);
}

Provenance Provenance::gen(std::string name) {
  Provenance p;
  p.kind = Kind::Generator;
  p.generator = std::move(name);
  return p;
}

Provenance Provenance::compose(Provenance f, Provenance g) {
  Provenance p;
  p.kind = Kind::Compose;
  p.arguments = {std::move(f), std::move(g)};
  return p;
}

Provenance Provenance::add(Provenance f, Provenance g) {
  Provenance p;
  p.kind = Kind::Add;
  p.arguments = {std::move(f), std::move(g)};
  return p;
}

Provenance Provenance::self_add(Provenance f, int repeat) {
  Provenance p;
  p.kind = Kind::SelfAdd;
  p.repeat = repeat;
  p.arguments = {std::move(f)};
  return p;
}

std::string to_string(const Provenance& p) {
  switch (p.kind) {
    case Provenance::Kind::Generator:
      return p.generator;
    case Provenance::Kind::Compose:
      return "(" + to_string(p.arguments[0]) + " . " + to_string(p.arguments[1]) + ")";
    case Provenance::Kind::Add:
      return "(" + to_string(p.arguments[0]) + " + " + to_string(p.arguments[1]) + ")";
    case Provenance::Kind::SelfAdd:
      return std::to_string(p.repeat) + "*" + to_string(p.arguments[0]);
  }
  return {};
}

namespace {

std::vector<int> compose_images(const std::vector<int>& f, const std::vector<int>& g) {
  // (f . g)(x) = f(g(x)), matching the action convention (vw)h = v(wh).
  std::vector<int> r(g.size());
  for (std::size_t x = 0; x < g.size(); ++x) r[x] = f[g[x]];
  return r;
}

std::vector<int> add_images(const FiniteMonoid& carrier, const std::vector<int>& f,
                            const std::vector<int>& g) {
  std::vector<int> r(f.size());
  for (std::size_t x = 0; x < f.size(); ++x) r[x] = carrier.apply(f[x], g[x]);
  return r;
}

}  // namespace

std::vector<Transformation> closure_transformations(
    const FiniteMonoid& carrier,
    const std::vector<std::pair<std::string, std::vector<int>>>& generators,
    const ClosureOps& ops, int max_elements) {
  std::vector<Transformation> elements;
  std::map<std::vector<int>, int> index_of;

  auto insert = [&](std::vector<int> image, Provenance prov) {
    auto [it, fresh] = index_of.emplace(std::move(image), static_cast<int>(elements.size()));
    if (fresh) {
      if (static_cast<int>(elements.size()) >= max_elements)
        throw SizeGuardExceeded("transformation closure exceeds " +
                                std::to_string(max_elements) + " elements");
      elements.push_back(Transformation{it->first, std::move(prov)});
    }
  };

  for (const auto& [name, image] : generators) {
    if (static_cast<int>(image.size()) != carrier.size)
      throw std::invalid_argument("generator image size does not match carrier");
    insert(image, Provenance::gen(name));
  }

  for (std::size_t i = 0; i < elements.size(); ++i) {
    if (ops.self_add_max >= 2) {
      std::vector<int> acc = elements[i].image;
      for (int m = 2; m <= ops.self_add_max; ++m) {
        acc = add_images(carrier, acc, elements[i].image);
        insert(acc, Provenance::self_add(elements[i].provenance, m));
      }
    }
    for (std::size_t j = 0; j <= i; ++j) {
      if (ops.compose) {
        insert(compose_images(elements[i].image, elements[j].image),
               Provenance::compose(elements[i].provenance, elements[j].provenance));
        insert(compose_images(elements[j].image, elements[i].image),
               Provenance::compose(elements[j].provenance, elements[i].provenance));
      }
      if (ops.pointwise_add) {
        insert(add_images(carrier, elements[i].image, elements[j].image),
               Provenance::add(elements[i].provenance, elements[j].provenance));
        insert(add_images(carrier, elements[j].image, elements[i].image),
               Provenance::add(elements[j].provenance, elements[i].provenance));
      }
    }
  }
  return elements;
}

FiniteMonoid transformation_monoid(const std::vector<Transformation>& transformations,
                                   int carrier_size) {
  std::map<std::vector<int>, int> index_of;
  for (std::size_t i = 0; i < transformations.size(); ++i) {
    if (static_cast<int>(transformations[i].image.size()) != carrier_size)
      throw std::invalid_argument("transformation has wrong carrier size");
    if (!index_of.emplace(transformations[i].image, static_cast<int>(i)).second)
      throw std::invalid_argument("duplicate transformation");
  }

  std::vector<int> identity(carrier_size);
  for (int x = 0; x < carrier_size; ++x) identity[x] = x;
  auto id_it = index_of.find(identity);
  if (id_it == index_of.end())
    throw std::invalid_argument("transformation set lacks the identity");

  FiniteMonoid m;
  m.size = static_cast<int>(transformations.size());
  m.identity = id_it->second;
  m.table.resize(m.size * m.size);
  for (int a = 0; a < m.size; ++a) {
    for (int b = 0; b < m.size; ++b) {
      auto it = index_of.find(compose_images(transformations[a].image,
                                             transformations[b].image));
      if (it == index_of.end())
        throw std::invalid_argument("transformation set is not composition-closed");
      m.table[a * m.size + b] = it->second;
    }
  }
  return m;
}

QuotientResult quotient_monoid(const FiniteMonoid& m, const std::vector<int>& block_of) {
  QuotientResult r;
  if (static_cast<int>(block_of.size()) != m.size) {
    r.detail = "partition size does not match carrier";
    return r;
  }
  int blocks = 0;
  for (int b : block_of) blocks = std::max(blocks, b + 1);

  std::vector<int> table(blocks * blocks, -1);
  for (int a = 0; a < m.size; ++a) {
    for (int b = 0; b < m.size; ++b) {
      int& cell = table[block_of[a] * blocks + block_of[b]];
      int value = block_of[m.apply(a, b)];
      if (cell < 0) {
        cell = value;
      } else if (cell != value) {
        r.detail = "not a congruence at (" + std::to_string(a) + "," + std::to_string(b) + ")";
        return r;
      }
    }
  }
  for (int& cell : table)
    if (cell < 0) cell = 0;  // unreachable block pair; partition was not surjective

  r.ok = true;
  r.quotient = FiniteMonoid{blocks, block_of[m.identity], std::move(table)};
  r.projection = block_of;
  return r;
}

FiniteMonoid product_monoid(const FiniteMonoid& a, const FiniteMonoid& b) {
  FiniteMonoid m;
  m.size = a.size * b.size;
  m.identity = a.identity * b.size + b.identity;
  m.table.resize(static_cast<std::size_t>(m.size) * m.size);
  for (int x1 = 0; x1 < a.size; ++x1)
    for (int x2 = 0; x2 < b.size; ++x2)
      for (int y1 = 0; y1 < a.size; ++y1)
        for (int y2 = 0; y2 < b.size; ++y2) {
          int x = x1 * b.size + x2;
          int y = y1 * b.size + y2;
          m.table[static_cast<std::size_t>(x) * m.size + y] =
              a.apply(x1, y1) * b.size + b.apply(x2, y2);
        }
  return m;
}

}  // namespace forestalg
