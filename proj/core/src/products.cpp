#include "forestalg/products.hpp"

#include <map>
#include <stdexcept>
#include <unordered_map>

namespace forestalg {

ForestAlgebra direct_product(const ForestAlgebra& a, const ForestAlgebra& b) {
  ForestAlgebra p;
  p.h = product_monoid(a.h, b.h);
  p.v = product_monoid(a.v, b.v);
  p.action.resize(static_cast<std::size_t>(p.v.size) * p.h.size);
  for (int v1 = 0; v1 < a.v.size; ++v1)
    for (int v2 = 0; v2 < b.v.size; ++v2)
      for (int h1 = 0; h1 < a.h.size; ++h1)
        for (int h2 = 0; h2 < b.h.size; ++h2) {
          int v = v1 * b.v.size + v2;
          int h = h1 * b.h.size + h2;
          p.action[static_cast<std::size_t>(v) * p.h.size + h] =
              a.act(v1, h1) * b.h.size + b.act(v2, h2);
        }
  p.ins_pre.resize(p.h.size);
  p.ins_post.resize(p.h.size);
  for (int h1 = 0; h1 < a.h.size; ++h1)
    for (int h2 = 0; h2 < b.h.size; ++h2) {
      p.ins_pre[h1 * b.h.size + h2] = a.ins_pre[h1] * b.v.size + b.ins_pre[h2];
      p.ins_post[h1 * b.h.size + h2] = a.ins_post[h1] * b.v.size + b.ins_post[h2];
    }
  p.h_names.resize(p.h.size);
  for (int h1 = 0; h1 < a.h.size; ++h1)
    for (int h2 = 0; h2 < b.h.size; ++h2)
      p.h_names[h1 * b.h.size + h2] = "(" + a.h_name(h1) + "," + b.h_name(h2) + ")";
  p.v_names.resize(p.v.size);
  for (int v1 = 0; v1 < a.v.size; ++v1)
    for (int v2 = 0; v2 < b.v.size; ++v2)
      p.v_names[v1 * b.v.size + v2] = "(" + a.v_name(v1) + "," + b.v_name(v2) + ")";
  return p;
}

std::pair<int, int> wreath_action(const ForestAlgebra& a1, const ForestAlgebra& a2,
                                  const WreathVertical& w, std::pair<int, int> h) {
  return {a1.act(w.left, h.first), a2.act(w.table[h.first], h.second)};
}

WreathVertical wreath_compose(const ForestAlgebra& a1, const ForestAlgebra& a2,
                              const WreathVertical& w, const WreathVertical& w2) {
  WreathVertical out;
  out.left = a1.mul(w.left, w2.left);
  out.table.resize(a1.h.size);
  for (int h = 0; h < a1.h.size; ++h)
    out.table[h] = a2.mul(w.table[a1.act(w2.left, h)], w2.table[h]);
  return out;
}

WreathVertical wreath_identity(const ForestAlgebra& a1, const ForestAlgebra& a2) {
  WreathVertical w;
  w.left = a1.v.identity;
  w.table.assign(a1.h.size, a2.v.identity);
  return w;
}

WreathVertical wreath_ins_pre(const ForestAlgebra& a1, const ForestAlgebra& a2, int h1, int h2) {
  WreathVertical w;
  w.left = a1.ins_pre[h1];
  w.table.assign(a1.h.size, a2.ins_pre[h2]);
  return w;
}

WreathVertical wreath_ins_post(const ForestAlgebra& a1, const ForestAlgebra& a2, int h1, int h2) {
  WreathVertical w;
  w.left = a1.ins_post[h1];
  w.table.assign(a1.h.size, a2.ins_post[h2]);
  return w;
}

int WreathAlgebra::index_of(const WreathVertical& w) const {
  for (std::size_t i = 0; i < elements.size(); ++i)
    if (elements[i] == w) return static_cast<int>(i);
  return -1;
}

namespace {

// Transformation of a wreath vertical on the coded pair set H1 x H2; the
// dedup key demanded by faithfulness.
std::vector<int> wreath_image(const ForestAlgebra& a1, const ForestAlgebra& a2,
                              const WreathVertical& w) {
  std::vector<int> image(static_cast<std::size_t>(a1.h.size) * a2.h.size);
  for (int h1 = 0; h1 < a1.h.size; ++h1)
    for (int h2 = 0; h2 < a2.h.size; ++h2) {
      auto [g1, g2] = wreath_action(a1, a2, w, {h1, h2});
      image[h1 * a2.h.size + h2] = g1 * a2.h.size + g2;
    }
  return image;
}

struct ImageHash {
  std::size_t operator()(const std::vector<int>& image) const {
    std::size_t h = 1469598103934665603ull;
    for (int x : image) h = (h ^ static_cast<std::size_t>(x)) * 1099511628211ull;
    return h;
  }
};

struct WreathBuilder {
  const ForestAlgebra& a1;
  const ForestAlgebra& a2;
  int max_elements;
  std::vector<WreathVertical> elements;
  std::vector<Provenance> provenance;
  std::vector<std::vector<int>> images;
  std::unordered_map<std::vector<int>, int, ImageHash> index_by_image;
  // Composition results recorded during closure so assemble() need not redo them.
  std::vector<std::vector<int>> mul;

  void set_mul(std::size_t i, std::size_t j, int k) {
    if (mul.size() < elements.size()) mul.resize(elements.size());
    if (mul[i].size() <= j) mul[i].resize(elements.size(), -1);
    mul[i][j] = k;
  }

  int add(const WreathVertical& w, Provenance p) {
    return add_with_image(w, wreath_image(a1, a2, w), std::move(p));
  }

  int add_with_image(const WreathVertical& w, std::vector<int> image, Provenance p) {
    auto it = index_by_image.find(image);
    if (it != index_by_image.end()) return it->second;
    if (static_cast<int>(elements.size()) >= max_elements)
      throw SizeGuardExceeded("wreath closure exceeds " + std::to_string(max_elements) +
                              " vertical elements");
    int id = static_cast<int>(elements.size());
    elements.push_back(w);
    provenance.push_back(std::move(p));
    images.push_back(image);
    index_by_image.emplace(std::move(image), id);
    return id;
  }

  WreathAlgebra assemble() const {
    auto algebra = std::make_shared<ForestAlgebra>();
    algebra->h = product_monoid(a1.h, a2.h);
    int nh = algebra->h.size;
    int nv = static_cast<int>(elements.size());
    algebra->v.size = nv;
    algebra->v.identity = 0;
    algebra->v.table.resize(static_cast<std::size_t>(nv) * nv);
    for (int i = 0; i < nv; ++i)
      for (int j = 0; j < nv; ++j) {
        int k = -1;
        if (i == 0)
          k = j;
        else if (j == 0)
          k = i;
        else if (i < static_cast<int>(mul.size()) && j < static_cast<int>(mul[i].size()))
          k = mul[i][j];
        if (k < 0) {
          WreathVertical c = wreath_compose(a1, a2, elements[i], elements[j]);
          auto it = index_by_image.find(wreath_image(a1, a2, c));
          if (it == index_by_image.end())
            throw std::logic_error("wreath closure is not composition-closed");
          k = it->second;
        }
        algebra->v.table[static_cast<std::size_t>(i) * nv + j] = k;
      }
    algebra->action.resize(static_cast<std::size_t>(nv) * nh);
    for (int i = 0; i < nv; ++i)
      for (int h = 0; h < nh; ++h)
        algebra->action[static_cast<std::size_t>(i) * nh + h] = images[i][h];
    algebra->ins_pre.resize(nh);
    algebra->ins_post.resize(nh);
    for (int h1 = 0; h1 < a1.h.size; ++h1)
      for (int h2 = 0; h2 < a2.h.size; ++h2) {
        int h = h1 * a2.h.size + h2;
        auto pre = index_by_image.find(wreath_image(a1, a2, wreath_ins_pre(a1, a2, h1, h2)));
        auto post = index_by_image.find(wreath_image(a1, a2, wreath_ins_post(a1, a2, h1, h2)));
        if (pre == index_by_image.end() || post == index_by_image.end())
          throw std::logic_error("wreath closure is missing an insertion element");
        algebra->ins_pre[h] = pre->second;
        algebra->ins_post[h] = post->second;
      }
    algebra->h_names.resize(nh);
    for (int h1 = 0; h1 < a1.h.size; ++h1)
      for (int h2 = 0; h2 < a2.h.size; ++h2)
        algebra->h_names[h1 * a2.h.size + h2] = "(" + a1.h_name(h1) + "," + a2.h_name(h2) + ")";
    algebra->v_names.resize(nv);
    for (int i = 0; i < nv; ++i) algebra->v_names[i] = to_string(provenance[i]);

    WreathAlgebra out;
    out.algebra = std::move(algebra);
    out.elements = elements;
    return out;
  }
};

}  // namespace

WreathAlgebra wreath_generated(
    const ForestAlgebra& a1, const ForestAlgebra& a2,
    const std::vector<std::pair<std::string, WreathVertical>>& generators, int max_elements) {
  for (const auto& [name, w] : generators) {
    if (w.left < 0 || w.left >= a1.v.size || static_cast<int>(w.table.size()) != a1.h.size)
      throw std::invalid_argument("malformed wreath generator: " + name);
    for (int x : w.table)
      if (x < 0 || x >= a2.v.size) throw std::invalid_argument("malformed wreath generator: " + name);
  }

  WreathBuilder b{a1, a2, max_elements, {}, {}, {}};
  b.add(wreath_identity(a1, a2), Provenance::gen("1"));
  std::vector<int> generator_index;
  for (const auto& [name, w] : generators) generator_index.push_back(b.add(w, Provenance::gen(name)));
  for (int h1 = 0; h1 < a1.h.size; ++h1)
    for (int h2 = 0; h2 < a2.h.size; ++h2) {
      std::string pair = "(" + a1.h_name(h1) + "," + a2.h_name(h2) + ")";
      b.add(wreath_ins_pre(a1, a2, h1, h2), Provenance::gen(pair + "+[]"));
      b.add(wreath_ins_post(a1, a2, h1, h2), Provenance::gen("[]+" + pair));
    }

  // Pairwise composition closure; new elements extend the worklist in place.
  // The composite's transformation is the composite of transformations, so the
  // dedup key comes from stored images; the raw pair is built only when new.
  const std::size_t points = static_cast<std::size_t>(a1.h.size) * a2.h.size;
  std::vector<int> image(points);
  auto compose_at = [&](std::size_t i, std::size_t j) {
    for (std::size_t p = 0; p < points; ++p)
      image[p] = b.images[i][static_cast<std::size_t>(b.images[j][p])];
    auto it = b.index_by_image.find(image);
    if (it != b.index_by_image.end()) return b.set_mul(i, j, it->second);
    WreathVertical w = wreath_compose(a1, a2, b.elements[i], b.elements[j]);
    b.set_mul(i, j, b.add_with_image(w, image, Provenance::compose(b.provenance[i], b.provenance[j])));
  };
  for (std::size_t i = 1; i < b.elements.size(); ++i) {
    for (std::size_t j = 1; j <= i; ++j) {
      compose_at(i, j);
      if (j < i) compose_at(j, i);
    }
  }

  WreathAlgebra out = b.assemble();
  out.generator_index = std::move(generator_index);
  return out;
}

WreathAlgebra full_wreath(const ForestAlgebra& a1, const ForestAlgebra& a2, int max_elements) {
  double size = a1.v.size;
  for (int h = 0; h < a1.h.size; ++h) {
    size *= a2.v.size;
    if (size > max_elements)
      throw SizeGuardExceeded("full wreath would have more than " +
                              std::to_string(max_elements) + " vertical elements");
  }

  WreathBuilder b{a1, a2, max_elements, {}, {}, {}};
  b.add(wreath_identity(a1, a2), Provenance::gen("1"));
  WreathVertical w;
  w.table.assign(a1.h.size, 0);
  for (w.left = 0; w.left < a1.v.size; ++w.left) {
    // Odometer over all tables H1 -> V2.
    for (;;) {
      std::string name = "(" + a1.v_name(w.left) + ",[";
      for (int h = 0; h < a1.h.size; ++h)
        name += (h ? "," : "") + a2.v_name(w.table[h]);
      b.add(w, Provenance::gen(name + "])"));
      int digit = 0;
      while (digit < a1.h.size && ++w.table[digit] == a2.v.size) w.table[digit++] = 0;
      if (digit == a1.h.size) break;
    }
  }
  return b.assemble();
}

std::vector<int> product_wreath_embedding(const ForestAlgebra& a1, const ForestAlgebra& a2,
                                          const WreathAlgebra& w) {
  std::vector<int> v_map(static_cast<std::size_t>(a1.v.size) * a2.v.size, -1);
  for (int v1 = 0; v1 < a1.v.size; ++v1)
    for (int v2 = 0; v2 < a2.v.size; ++v2) {
      WreathVertical e;
      e.left = v1;
      e.table.assign(a1.h.size, v2);
      int idx = w.index_of(e);
      if (idx < 0) throw std::invalid_argument("wreath lacks a constant-table element");
      v_map[v1 * a2.v.size + v2] = idx;
    }
  return v_map;
}

std::string pair_symbol(const std::string& letter, int h_index) {
  return letter + std::to_string(h_index);
}

Alphabet paired_alphabet(const Alphabet& base, int h_size) {
  std::vector<std::string> symbols;
  symbols.reserve(static_cast<std::size_t>(base.size()) * h_size);
  for (int a = 0; a < base.size(); ++a)
    for (int h = 0; h < h_size; ++h) symbols.push_back(pair_symbol(base.name(a), h));
  try {
    return Alphabet(std::move(symbols));
  } catch (const std::invalid_argument&) {
    throw std::invalid_argument(
        "pairing the alphabet with indices produces colliding symbols; rename the letters");
  }
}

namespace {

Tree relabel_tree(const Homomorphism& alpha, const Tree& t) {
  Tree out;
  out.children.reserve(t.children.size());
  int sub = alpha.algebra->h.identity;
  for (const Tree& c : t.children) {
    sub = alpha.algebra->add(sub, eval_tree(alpha, c));
    out.children.push_back(relabel_tree(alpha, c));
  }
  out.label = pair_symbol(t.label, sub);
  return out;
}

}  // namespace

Forest relabel(const Homomorphism& alpha, const Forest& t) {
  Forest out;
  out.roots.reserve(t.roots.size());
  for (const Tree& root : t.roots) out.roots.push_back(relabel_tree(alpha, root));
  return out;
}

SequentialComposition sequential_compose(const Homomorphism& alpha, const Homomorphism& beta,
                                         int max_elements) {
  const ForestAlgebra& a1 = *alpha.algebra;
  const ForestAlgebra& a2 = *beta.algebra;
  if (!(beta.alphabet == paired_alphabet(alpha.alphabet, a1.h.size)))
    throw std::invalid_argument("second homomorphism must live on the paired alphabet");

  std::vector<std::pair<std::string, WreathVertical>> generators;
  for (int a = 0; a < alpha.alphabet.size(); ++a) {
    WreathVertical w;
    w.left = alpha.image(a);
    w.table.resize(a1.h.size);
    for (int g = 0; g < a1.h.size; ++g) {
      auto paired = beta.alphabet.index(pair_symbol(alpha.alphabet.name(a), g));
      w.table[g] = beta.image(*paired);
    }
    generators.emplace_back(alpha.alphabet.name(a), std::move(w));
  }

  SequentialComposition out;
  out.wreath = wreath_generated(a1, a2, generators, max_elements);
  out.hom.alphabet = alpha.alphabet;
  out.hom.algebra = out.wreath.algebra;
  out.hom.letter_image = out.wreath.generator_index;
  return out;
}

AlgebraExpression AlgebraExpression::atom_of(std::string name, ForestAlgebra algebra) {
  return atom_of(std::move(name), std::make_shared<ForestAlgebra>(std::move(algebra)));
}

AlgebraExpression AlgebraExpression::atom_of(std::string name, AlgebraPtr algebra) {
  AlgebraExpression e;
  e.kind = Kind::Atom;
  e.name = std::move(name);
  e.atom = std::move(algebra);
  return e;
}

AlgebraExpression AlgebraExpression::product(std::vector<AlgebraExpression> arguments) {
  if (arguments.empty()) throw std::invalid_argument("product of no algebras");
  AlgebraExpression e;
  e.kind = Kind::Product;
  e.arguments = std::move(arguments);
  return e;
}

AlgebraExpression AlgebraExpression::wreath(std::vector<AlgebraExpression> arguments) {
  if (arguments.empty()) throw std::invalid_argument("wreath of no algebras");
  AlgebraExpression e;
  e.kind = Kind::Wreath;
  e.arguments = std::move(arguments);
  return e;
}

std::string to_string(const AlgebraExpression& e) {
  if (e.kind == AlgebraExpression::Kind::Atom) return e.name;
  std::string out = e.kind == AlgebraExpression::Kind::Product ? "P(" : "W(";
  for (std::size_t i = 0; i < e.arguments.size(); ++i) {
    if (i) out += ",";
    out += to_string(e.arguments[i]);
  }
  return out + ")";
}

ForestAlgebra realize_expression(const AlgebraExpression& e, int max_elements) {
  switch (e.kind) {
    case AlgebraExpression::Kind::Atom:
      if (!e.atom) throw std::invalid_argument("atom without an algebra: " + e.name);
      return *e.atom;
    case AlgebraExpression::Kind::Product: {
      ForestAlgebra out = realize_expression(e.arguments.front(), max_elements);
      for (std::size_t i = 1; i < e.arguments.size(); ++i) {
        out = direct_product(out, realize_expression(e.arguments[i], max_elements));
        if (out.v.size > max_elements)
          throw SizeGuardExceeded("product exceeds " + std::to_string(max_elements) +
                                  " vertical elements");
      }
      return out;
    }
    case AlgebraExpression::Kind::Wreath: {
      ForestAlgebra out = realize_expression(e.arguments.front(), max_elements);
      for (std::size_t i = 1; i < e.arguments.size(); ++i)
        out = *full_wreath(out, realize_expression(e.arguments[i], max_elements), max_elements)
                   .algebra;
      return out;
    }
  }
  throw std::logic_error("unhandled expression kind");
}

}  // namespace forestalg
