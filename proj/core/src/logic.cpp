#include "forestalg/logic.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <stdexcept>

#include "forestalg/products.hpp"

namespace forestalg {

bool WordAutomaton::accepts(const std::vector<int>& word) const {
  int state = initial;
  for (int letter : word) state = next(state, letter);
  return final_states[state];
}

CheckResult validate_automaton(const WordAutomaton& a) {
  if (a.states < 1) return {false, "automaton needs at least one state"};
  if (a.letters < 0) return {false, "negative letter count"};
  if (a.initial < 0 || a.initial >= a.states) return {false, "initial state out of range"};
  if (static_cast<int>(a.transition.size()) != a.states * a.letters)
    return {false, "transition table size mismatch"};
  if (static_cast<int>(a.final_states.size()) != a.states)
    return {false, "final state vector size mismatch"};
  for (int t : a.transition)
    if (t < 0 || t >= a.states) return {false, "transition target out of range"};
  return {};
}

WordAutomaton minimize_dfa(const WordAutomaton& a) {
  if (auto r = validate_automaton(a); !r) throw std::invalid_argument(r.detail);

  std::vector<int> reachable;
  std::vector<int> order(a.states, -1);
  reachable.push_back(a.initial);
  order[a.initial] = 0;
  for (std::size_t i = 0; i < reachable.size(); ++i)
    for (int l = 0; l < a.letters; ++l) {
      int t = a.next(reachable[i], l);
      if (order[t] < 0) {
        order[t] = static_cast<int>(reachable.size());
        reachable.push_back(t);
      }
    }

  // Moore refinement over the reachable part.
  std::vector<int> block(a.states, -1);
  for (int s : reachable) block[s] = a.final_states[s] ? 1 : 0;
  for (;;) {
    std::map<std::vector<int>, int> ids;
    std::vector<int> next_block(a.states, -1);
    for (int s : reachable) {
      std::vector<int> sig{block[s]};
      for (int l = 0; l < a.letters; ++l) sig.push_back(block[a.next(s, l)]);
      auto [it, fresh] = ids.emplace(std::move(sig), static_cast<int>(ids.size()));
      next_block[s] = it->second;
    }
    if (next_block == block) break;
    block = std::move(next_block);
  }

  // Renumber blocks in reachability order so the output is deterministic.
  int count = 0;
  std::vector<int> renumber(a.states, -1);
  for (int s : reachable) {
    int& id = renumber[block[s]];
    if (id < 0) id = count++;
  }

  WordAutomaton out;
  out.states = count;
  out.letters = a.letters;
  out.initial = renumber[block[a.initial]];
  out.transition.assign(count * a.letters, 0);
  out.final_states.assign(count, false);
  for (int s : reachable) {
    int b = renumber[block[s]];
    out.final_states[b] = a.final_states[s];
    for (int l = 0; l < a.letters; ++l)
      out.transition[b * a.letters + l] = renumber[block[a.next(s, l)]];
  }
  return out;
}

namespace {

// Thompson construction: states with epsilon (-1) or letter arrows.
struct Nfa {
  std::vector<std::vector<std::pair<int, int>>> arrows;  // (letter, target)
  int add() {
    arrows.emplace_back();
    return static_cast<int>(arrows.size()) - 1;
  }
  void arrow(int from, int letter, int to) { arrows[from].emplace_back(letter, to); }
};

struct Fragment {
  int start, accept;
};

class RegexParser {
 public:
  RegexParser(std::string_view text, int letters, Nfa& nfa)
      : text_(text), letters_(letters), nfa_(nfa) {}

  Fragment parse() {
    Fragment f = alternation();
    skip_space();
    if (pos_ != text_.size()) throw ParseError("unexpected character in regex", pos_);
    return f;
  }

 private:
  void skip_space() {
    while (pos_ < text_.size() && text_[pos_] == ' ') ++pos_;
  }
  bool at(char c) {
    skip_space();
    return pos_ < text_.size() && text_[pos_] == c;
  }
  bool eat(char c) {
    if (!at(c)) return false;
    ++pos_;
    return true;
  }

  Fragment alternation() {
    Fragment f = concatenation();
    while (eat('|')) {
      Fragment g = concatenation();
      int s = nfa_.add(), t = nfa_.add();
      nfa_.arrow(s, -1, f.start);
      nfa_.arrow(s, -1, g.start);
      nfa_.arrow(f.accept, -1, t);
      nfa_.arrow(g.accept, -1, t);
      f = {s, t};
    }
    return f;
  }

  Fragment concatenation() {
    skip_space();
    if (pos_ == text_.size() || text_[pos_] == '|' || text_[pos_] == ')') {
      int s = nfa_.add();
      return {s, s};  // empty word
    }
    Fragment f = repetition();
    for (;;) {
      skip_space();
      if (pos_ == text_.size() || text_[pos_] == '|' || text_[pos_] == ')') return f;
      Fragment g = repetition();
      nfa_.arrow(f.accept, -1, g.start);
      f = {f.start, g.accept};
    }
  }

  Fragment repetition() {
    Fragment f = atom();
    for (;;) {
      if (eat('*')) {
        int s = nfa_.add(), t = nfa_.add();
        nfa_.arrow(s, -1, f.start);
        nfa_.arrow(s, -1, t);
        nfa_.arrow(f.accept, -1, f.start);
        nfa_.arrow(f.accept, -1, t);
        f = {s, t};
      } else if (eat('+')) {
        int t = nfa_.add();
        nfa_.arrow(f.accept, -1, f.start);
        nfa_.arrow(f.accept, -1, t);
        f = {f.start, t};
      } else {
        return f;
      }
    }
  }

  Fragment atom() {
    skip_space();
    if (pos_ == text_.size()) throw ParseError("regex ended unexpectedly", pos_);
    if (eat('(')) {
      Fragment f = alternation();
      if (!eat(')')) throw ParseError("expected ')' in regex", pos_);
      return f;
    }
    char c = text_[pos_];
    if (c >= '1' && c <= '9') {
      int letter = c - '1';
      if (letter >= letters_)
        throw ParseError("regex letter exceeds the family size", pos_);
      ++pos_;
      int s = nfa_.add(), t = nfa_.add();
      nfa_.arrow(s, letter, t);
      return {s, t};
    }
    throw ParseError(std::string("unexpected character in regex: ") + c, pos_);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  int letters_;
  Nfa& nfa_;
};

std::set<int> epsilon_closure(const Nfa& nfa, std::set<int> states) {
  std::vector<int> stack(states.begin(), states.end());
  while (!stack.empty()) {
    int s = stack.back();
    stack.pop_back();
    for (auto [letter, target] : nfa.arrows[s])
      if (letter < 0 && states.insert(target).second) stack.push_back(target);
  }
  return states;
}

}  // namespace

WordAutomaton regex_to_dfa(std::string_view regex, int letters) {
  if (letters < 0 || letters > 9)
    throw std::invalid_argument("regex alphabets use the digits 1..9");
  Nfa nfa;
  Fragment f = RegexParser(regex, letters, nfa).parse();

  WordAutomaton dfa;
  dfa.letters = letters;
  std::map<std::set<int>, int> id;
  std::vector<std::set<int>> subsets;
  auto intern = [&](std::set<int> subset) {
    auto [it, fresh] = id.emplace(subset, static_cast<int>(subsets.size()));
    if (fresh) subsets.push_back(std::move(subset));
    return it->second;
  };
  dfa.initial = intern(epsilon_closure(nfa, {f.start}));
  std::vector<int> transition;
  for (std::size_t i = 0; i < subsets.size(); ++i)
    for (int l = 0; l < letters; ++l) {
      std::set<int> next;
      for (int s : subsets[i])
        for (auto [letter, target] : nfa.arrows[s])
          if (letter == l) next.insert(target);
      transition.push_back(intern(epsilon_closure(nfa, std::move(next))));
    }
  dfa.states = static_cast<int>(subsets.size());
  dfa.transition = std::move(transition);
  dfa.final_states.resize(dfa.states);
  for (int i = 0; i < dfa.states; ++i) dfa.final_states[i] = subsets[i].count(f.accept) > 0;
  return minimize_dfa(dfa);
}

bool dfa_is_aperiodic(const WordAutomaton& input) {
  WordAutomaton a = minimize_dfa(input);

  // Transition monoid: closure of the letter maps under composition.
  std::set<std::vector<int>> seen;
  std::vector<std::vector<int>> elements;
  auto push = [&](std::vector<int> image) {
    if (seen.insert(image).second) elements.push_back(std::move(image));
  };
  std::vector<std::vector<int>> generators;
  for (int l = 0; l < a.letters; ++l) {
    std::vector<int> image(a.states);
    for (int s = 0; s < a.states; ++s) image[s] = a.next(s, l);
    generators.push_back(image);
    push(std::move(image));
  }
  for (std::size_t i = 0; i < elements.size(); ++i)
    for (const auto& g : generators) {
      std::vector<int> composed(a.states);
      for (int s = 0; s < a.states; ++s) composed[s] = g[elements[i][s]];
      push(std::move(composed));
    }

  // x is group-free iff its power sequence stabilizes (period 1).
  for (const auto& x : elements) {
    std::map<std::vector<int>, int> step_of;
    std::vector<int> power = x;
    int step = 1;
    for (;;) {
      auto [it, fresh] = step_of.emplace(power, step);
      if (!fresh) {
        if (step - it->second > 1) return false;
        break;
      }
      std::vector<int> next(a.states);
      for (int s = 0; s < a.states; ++s) next[s] = x[power[s]];
      power = std::move(next);
      ++step;
    }
  }
  return true;
}

Formula Formula::label_of(std::string name) {
  Formula f;
  f.kind = Kind::Label;
  f.label = std::move(name);
  return f;
}

Formula Formula::truth(bool value) {
  Formula f;
  f.kind = value ? Kind::True : Kind::False;
  return f;
}

Formula Formula::negation(Formula inner) {
  Formula f;
  f.kind = Kind::Not;
  f.children.push_back(std::move(inner));
  return f;
}

Formula Formula::conjunction(Formula a, Formula b) {
  Formula f;
  f.kind = Kind::And;
  f.children.push_back(std::move(a));
  f.children.push_back(std::move(b));
  return f;
}

Formula Formula::disjunction(Formula a, Formula b) {
  Formula f;
  f.kind = Kind::Or;
  f.children.push_back(std::move(a));
  f.children.push_back(std::move(b));
  return f;
}

Formula Formula::ek(int k, std::vector<Formula> psis, std::string regex) {
  if (k < 1) throw std::invalid_argument("E^k needs k >= 1");
  Formula f;
  f.kind = Kind::Ek;
  f.count = k;
  f.family = unambiguous_family(psis);
  f.automaton = regex_to_dfa(regex, static_cast<int>(f.family.size()));
  f.written = std::move(psis);
  f.regex = std::move(regex);
  return f;
}

std::vector<Formula> unambiguous_family(const std::vector<Formula>& psis) {
  std::vector<Formula> family;
  for (std::size_t i = 0; i < psis.size(); ++i) {
    Formula member = psis[i];
    for (std::size_t j = 0; j < i; ++j)
      member = Formula::conjunction(std::move(member), Formula::negation(psis[j]));
    family.push_back(std::move(member));
  }
  Formula rest = Formula::truth(true);
  for (const Formula& psi : psis)
    rest = rest.kind == Formula::Kind::True
               ? Formula::negation(psi)
               : Formula::conjunction(std::move(rest), Formula::negation(psi));
  family.push_back(std::move(rest));
  return family;
}

Formula ef(Formula psi) {
  Formula f = Formula::ek(1, {psi}, "2*1");
  f.sugar = Formula::Sugar::Ef;
  f.written = {std::move(psi)};
  return f;
}

Formula ctl_eu(Formula psi, Formula phi) {
  Formula f = Formula::ek(
      1,
      {Formula::conjunction(psi, Formula::negation(phi)),
       Formula::conjunction(Formula::negation(psi), Formula::negation(phi))},
      "1*3");
  f.sugar = Formula::Sugar::Eu;
  f.written = {std::move(psi), std::move(phi)};
  return f;
}

bool is_forest_formula(const Formula& f) {
  switch (f.kind) {
    case Formula::Kind::Label:
      return false;
    case Formula::Kind::True:
    case Formula::Kind::False:
    case Formula::Kind::Ek:
      return true;
    case Formula::Kind::Not:
    case Formula::Kind::And:
    case Formula::Kind::Or:
      for (const Formula& c : f.children)
        if (!is_forest_formula(c)) return false;
      return true;
  }
  return false;
}

namespace {

int family_index(const Tree& t, const std::vector<Formula>& family) {
  int found = -1;
  for (std::size_t i = 0; i < family.size(); ++i) {
    if (!tree_sat(t, family[i])) continue;
    if (found >= 0) throw std::logic_error("family is ambiguous on a tree");
    found = static_cast<int>(i);
  }
  if (found < 0) throw std::logic_error("family misses a tree");
  return found;
}

// Counts nodes whose family-index path from a root is accepted; stops early
// once `needed` accepted nodes are found.
int count_accepted(const std::vector<Tree>& roots, const Formula& f, int state, int needed) {
  int count = 0;
  for (const Tree& t : roots) {
    int q = f.automaton.next(state, family_index(t, f.family));
    if (f.automaton.final_states[q]) ++count;
    if (count >= needed) return count;
    count += count_accepted(t.children, f, q, needed - count);
    if (count >= needed) return count;
  }
  return count;
}

}  // namespace

bool tree_sat(const Tree& t, const Formula& f) {
  if (t.is_hole()) throw std::invalid_argument("cannot evaluate a formula on a hole");
  switch (f.kind) {
    case Formula::Kind::Label:
      return t.label == f.label;
    case Formula::Kind::True:
      return true;
    case Formula::Kind::False:
      return false;
    case Formula::Kind::Not:
      return !tree_sat(t, f.children[0]);
    case Formula::Kind::And:
      return tree_sat(t, f.children[0]) && tree_sat(t, f.children[1]);
    case Formula::Kind::Or:
      return tree_sat(t, f.children[0]) || tree_sat(t, f.children[1]);
    case Formula::Kind::Ek:
      // A tree a(s) satisfies a forest formula iff s does: strict semantics.
      return forest_sat(Forest{t.children}, f);
  }
  return false;
}

bool forest_sat(const Forest& s, const Formula& f) {
  switch (f.kind) {
    case Formula::Kind::Label:
      throw std::invalid_argument("a label formula is a tree formula, not a forest formula");
    case Formula::Kind::True:
      return true;
    case Formula::Kind::False:
      return false;
    case Formula::Kind::Not:
      return !forest_sat(s, f.children[0]);
    case Formula::Kind::And:
      return forest_sat(s, f.children[0]) && forest_sat(s, f.children[1]);
    case Formula::Kind::Or:
      return forest_sat(s, f.children[0]) || forest_sat(s, f.children[1]);
    case Formula::Kind::Ek:
      return count_accepted(s.roots, f, f.automaton.initial, f.count) >= f.count;
  }
  return false;
}

namespace {

class FormulaParser {
 public:
  explicit FormulaParser(std::string_view text) : text_(text) {}

  Formula parse() {
    Formula f = disjunction();
    skip_space();
    if (pos_ != text_.size()) throw ParseError("unexpected trailing input", pos_);
    return f;
  }

 private:
  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect(char c, const char* what) {
    if (!eat(c)) throw ParseError(std::string("expected ") + what, pos_);
  }

  std::string identifier() {
    skip_space();
    std::size_t start = pos_;
    if (pos_ < text_.size() && std::isalpha(static_cast<unsigned char>(text_[pos_]))) {
      ++pos_;
      while (pos_ < text_.size() && std::isalnum(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }
    return std::string(text_.substr(start, pos_ - start));
  }

  Formula disjunction() {
    Formula f = conjunction();
    while (eat('|')) f = Formula::disjunction(std::move(f), conjunction());
    return f;
  }

  Formula conjunction() {
    Formula f = unary();
    while (eat('&')) f = Formula::conjunction(std::move(f), unary());
    return f;
  }

  Formula unary() {
    if (eat('!')) return Formula::negation(unary());
    if (eat('(')) {
      Formula f = disjunction();
      expect(')', "')'");
      return f;
    }
    skip_space();
    std::string word = identifier();
    if (word.empty()) throw ParseError("expected a formula", pos_);
    if (word == "true") return Formula::truth(true);
    if (word == "false") return Formula::truth(false);
    if (word == "EF") return ef(unary());
    if (word == "EU") {
      expect('(', "'(' after EU");
      Formula a = disjunction();
      expect(',', "',' between the EU arguments");
      Formula b = disjunction();
      expect(')', "')' after EU");
      return ctl_eu(std::move(a), std::move(b));
    }
    if (word == "E") {
      expect('[', "'[' after E");
      skip_space();
      std::size_t digits = pos_;
      int k = 0;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
        k = k * 10 + (text_[pos_++] - '0');
      if (pos_ == digits) throw ParseError("expected a count after E[", pos_);
      if (k < 1) throw ParseError("E[k] needs k >= 1", digits);
      expect(']', "']'");
      expect('{', "'{'");
      std::vector<Formula> psis;
      if (!eat('}')) {
        psis.push_back(disjunction());
        while (eat(';')) psis.push_back(disjunction());
        expect('}', "'}'");
      }
      expect('/', "'/' before the path regex");
      std::size_t slash = text_.find('/', pos_);
      if (slash == std::string_view::npos)
        throw ParseError("unterminated path regex", pos_);
      std::string regex(text_.substr(pos_, slash - pos_));
      std::size_t regex_at = pos_;
      pos_ = slash + 1;
      try {
        return Formula::ek(k, std::move(psis), std::move(regex));
      } catch (const ParseError& e) {
        throw ParseError(e.what(), regex_at + e.position);
      }
    }
    return Formula::label_of(word);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

int precedence(const Formula& f) {
  switch (f.kind) {
    case Formula::Kind::Or:
      return 0;
    case Formula::Kind::And:
      return 1;
    case Formula::Kind::Not:
      return 2;
    default:
      return 3;
  }
}

void print(const Formula& f, int context, std::string& out) {
  bool parens = precedence(f) < context;
  if (parens) out += "(";
  switch (f.kind) {
    case Formula::Kind::Label:
      out += f.label;
      break;
    case Formula::Kind::True:
      out += "true";
      break;
    case Formula::Kind::False:
      out += "false";
      break;
    case Formula::Kind::Not:
      out += "!";
      print(f.children[0], 3, out);
      break;
    case Formula::Kind::And:
      print(f.children[0], 1, out);
      out += " & ";
      print(f.children[1], 2, out);
      break;
    case Formula::Kind::Or:
      print(f.children[0], 0, out);
      out += " | ";
      print(f.children[1], 1, out);
      break;
    case Formula::Kind::Ek:
      if (f.sugar == Formula::Sugar::Ef) {
        out += "EF ";
        print(f.written[0], 3, out);
      } else if (f.sugar == Formula::Sugar::Eu) {
        out += "EU(";
        print(f.written[0], 0, out);
        out += ", ";
        print(f.written[1], 0, out);
        out += ")";
      } else {
        out += "E[" + std::to_string(f.count) + "]{";
        for (std::size_t i = 0; i < f.written.size(); ++i) {
          if (i) out += "; ";
          print(f.written[i], 0, out);
        }
        out += "}/" + f.regex + "/";
      }
      break;
  }
  if (parens) out += ")";
}

}  // namespace

Formula parse_formula(std::string_view text) { return FormulaParser(text).parse(); }

std::string to_string(const Formula& f) {
  std::string out;
  print(f, 0, out);
  return out;
}

namespace {

// Compiled tree formula: the tree a(s) satisfies it iff
// holds[a * |H| + hom(s)].
struct CompiledTree {
  Homomorphism hom;
  std::vector<char> holds;

  bool get(int letter, int h) const { return holds[letter * hom.algebra->h.size + h] != 0; }
};

Homomorphism trivial_hom(const Alphabet& alphabet) {
  Homomorphism hom;
  hom.alphabet = alphabet;
  hom.algebra = std::make_shared<ForestAlgebra>(trivial_algebra());
  hom.letter_image.assign(alphabet.size(), 0);
  return hom;
}

Recognizer constant_recognizer(const Alphabet& alphabet, bool accept) {
  Recognizer r;
  r.hom = trivial_hom(alphabet);
  r.accepting = {accept};
  return r;
}

// Pairs two homomorphisms over the same alphabet into their direct product;
// the pair (h1,h2) is coded as h1 * |H2| + h2.
Homomorphism pair_homs(const Homomorphism& x, const Homomorphism& y) {
  Homomorphism hom;
  hom.alphabet = x.alphabet;
  hom.algebra = std::make_shared<ForestAlgebra>(direct_product(*x.algebra, *y.algebra));
  hom.letter_image.resize(x.letter_image.size());
  for (std::size_t i = 0; i < x.letter_image.size(); ++i)
    hom.letter_image[i] = x.letter_image[i] * y.algebra->v.size + y.letter_image[i];
  return hom;
}

CompiledTree compile_tree(const Formula& f, const Alphabet& alphabet, int max_elements);

CompiledTree compile_boolean_tree(const Formula& f, const Alphabet& alphabet, int max_elements) {
  CompiledTree a = compile_tree(f.children[0], alphabet, max_elements);
  CompiledTree b = compile_tree(f.children[1], alphabet, max_elements);
  bool conjunction = f.kind == Formula::Kind::And;
  CompiledTree out;
  out.hom = pair_homs(a.hom, b.hom);
  int ha = a.hom.algebra->h.size, hb = b.hom.algebra->h.size;
  out.holds.resize(static_cast<std::size_t>(alphabet.size()) * ha * hb);
  for (int l = 0; l < alphabet.size(); ++l)
    for (int x = 0; x < ha; ++x)
      for (int y = 0; y < hb; ++y) {
        bool value = conjunction ? a.get(l, x) && b.get(l, y) : a.get(l, x) || b.get(l, y);
        out.holds[static_cast<std::size_t>(l) * ha * hb + x * hb + y] = value;
      }
  return out;
}

CompiledTree compile_tree(const Formula& f, const Alphabet& alphabet, int max_elements) {
  CompiledTree out;
  switch (f.kind) {
    case Formula::Kind::Label: {
      auto letter = alphabet.index(f.label);
      if (!letter)
        throw std::invalid_argument("formula label not in the alphabet: " + f.label);
      out.hom = trivial_hom(alphabet);
      out.holds.assign(alphabet.size(), 0);
      out.holds[*letter] = 1;
      return out;
    }
    case Formula::Kind::True:
    case Formula::Kind::False:
      out.hom = trivial_hom(alphabet);
      out.holds.assign(alphabet.size(), f.kind == Formula::Kind::True ? 1 : 0);
      return out;
    case Formula::Kind::Not:
      out = compile_tree(f.children[0], alphabet, max_elements);
      for (char& b : out.holds) b = !b;
      return out;
    case Formula::Kind::And:
    case Formula::Kind::Or:
      return compile_boolean_tree(f, alphabet, max_elements);
    case Formula::Kind::Ek: {
      Recognizer r = compile_to_recognizer(f, alphabet, max_elements);
      out.hom = r.hom;
      out.holds.resize(static_cast<std::size_t>(alphabet.size()) * r.hom.algebra->h.size);
      for (int l = 0; l < alphabet.size(); ++l)
        for (int h = 0; h < r.hom.algebra->h.size; ++h)
          out.holds[static_cast<std::size_t>(l) * r.hom.algebra->h.size + h] = r.accepting[h];
      return out;
    }
  }
  throw std::logic_error("unhandled formula kind");
}

// Capped counting vectors c: states -> {0..cap}, coded in base cap+1 with
// state q as digit q; addition is pointwise and saturates at cap.
FiniteMonoid capped_vector_monoid(int states, int cap, int max_elements) {
  double size = 1;
  for (int q = 0; q < states; ++q) {
    size *= cap + 1;
    if (size > max_elements || size * size > 4e6)
      throw SizeGuardExceeded("counting layer needs too many horizontal elements");
  }
  int n = static_cast<int>(size);
  FiniteMonoid m;
  m.size = n;
  m.identity = 0;
  m.table.resize(static_cast<std::size_t>(n) * n);
  std::vector<int> da(states), db(states);
  for (int a = 0; a < n; ++a) {
    for (int q = 0, rest = a; q < states; ++q, rest /= cap + 1) da[q] = rest % (cap + 1);
    for (int b = 0; b < n; ++b) {
      for (int q = 0, rest = b; q < states; ++q, rest /= cap + 1) db[q] = rest % (cap + 1);
      int sum = 0;
      for (int q = states - 1; q >= 0; --q)
        sum = sum * (cap + 1) + std::min(cap, da[q] + db[q]);
      m.table[static_cast<std::size_t>(a) * n + b] = sum;
    }
  }
  return m;
}

Recognizer compile_ek(const Formula& f, const Alphabet& alphabet, int max_elements) {
  int members = static_cast<int>(f.family.size());
  std::vector<CompiledTree> compiled;
  compiled.reserve(members);
  for (const Formula& member : f.family)
    compiled.push_back(compile_tree(member, alphabet, max_elements));

  // Product of the member homomorphisms, restricted to its reachable part.
  Homomorphism combined = compiled.front().hom;
  for (int i = 1; i < members; ++i) combined = pair_homs(combined, compiled[i].hom);
  Recognizer wrapper;
  wrapper.hom = combined;
  wrapper.accepting.assign(combined.algebra->h.size, true);
  RestrictedRecognizer restricted = reachable_subalgebra(wrapper);
  const Homomorphism& alpha = restricted.recognizer.hom;
  int alpha_h = alpha.algebra->h.size;

  // Unique family member satisfied by a tree a(s) with restricted value h.
  auto phi_index = [&](int letter, int h) {
    int code = restricted.h_embed[h];
    int found = -1;
    for (int i = members - 1; i >= 0; --i) {
      int hi = code % compiled[i].hom.algebra->h.size;
      code /= compiled[i].hom.algebra->h.size;
      if (compiled[i].get(letter, hi)) {
        if (found >= 0) throw std::logic_error("compiled family is ambiguous");
        found = i;
      }
    }
    if (found < 0) throw std::logic_error("compiled family misses a tree");
    return found;
  };

  const WordAutomaton& dfa = f.automaton;
  FiniteMonoid counts = capped_vector_monoid(dfa.states, f.count, max_elements);
  int base = f.count + 1;
  std::vector<int> power(dfa.states + 1, 1);
  for (int q = 0; q < dfa.states; ++q) power[q + 1] = power[q] * base;
  std::vector<std::pair<std::string, std::vector<int>>> actions;
  for (int i = 0; i < members; ++i) {
    std::vector<int> image(counts.size);
    for (int c = 0; c < counts.size; ++c) {
      int out = 0;
      for (int q = dfa.states - 1; q >= 0; --q) {
        int target = dfa.next(q, i);
        int digit = (c / power[target]) % base;
        out = out * base + std::min(f.count, digit + (dfa.final_states[target] ? 1 : 0));
      }
      image[c] = out;
    }
    actions.emplace_back("phi" + std::to_string(i + 1), std::move(image));
  }
  GeneratedAlgebra counting = algebra_from_actions(counts, actions, max_elements);

  Homomorphism beta;
  beta.alphabet = paired_alphabet(alphabet, alpha_h);
  beta.algebra = counting.algebra;
  beta.letter_image.resize(beta.alphabet.size());
  for (int l = 0; l < alphabet.size(); ++l)
    for (int h = 0; h < alpha_h; ++h)
      beta.letter_image[l * alpha_h + h] = counting.generator_index[phi_index(l, h)];

  SequentialComposition comp = sequential_compose(alpha, beta, max_elements);
  Recognizer out;
  out.hom = comp.hom;
  out.accepting.resize(comp.hom.algebra->h.size);
  for (int h = 0; h < comp.hom.algebra->h.size; ++h) {
    int c = h % counts.size;  // right coordinate of the pair coding
    out.accepting[h] = (c / power[dfa.initial]) % base >= f.count;
  }
  return reachable_subalgebra(out).recognizer;
}

}  // namespace

Recognizer compile_to_recognizer(const Formula& f, const Alphabet& alphabet, int max_elements) {
  switch (f.kind) {
    case Formula::Kind::Label:
      throw std::invalid_argument("a label formula is a tree formula, not a forest formula");
    case Formula::Kind::True:
    case Formula::Kind::False:
      return constant_recognizer(alphabet, f.kind == Formula::Kind::True);
    case Formula::Kind::Not:
      return complement(compile_to_recognizer(f.children[0], alphabet, max_elements));
    case Formula::Kind::And:
      return product_recognizer(compile_to_recognizer(f.children[0], alphabet, max_elements),
                                compile_to_recognizer(f.children[1], alphabet, max_elements),
                                [](bool a, bool b) { return a && b; });
    case Formula::Kind::Or:
      return product_recognizer(compile_to_recognizer(f.children[0], alphabet, max_elements),
                                compile_to_recognizer(f.children[1], alphabet, max_elements),
                                [](bool a, bool b) { return a || b; });
    case Formula::Kind::Ek:
      return compile_ek(f, alphabet, max_elements);
  }
  throw std::logic_error("unhandled formula kind");
}

CheckResult validate_partition(const Partition& p) {
  if (p.block_count < 1) return {false, "partition needs at least one block"};
  if (static_cast<int>(p.block_of.size()) != p.hom.algebra->h.size)
    return {false, "labeling must cover every horizontal element"};
  for (int b : p.block_of)
    if (b < 0 || b >= p.block_count) return {false, "block label out of range"};
  return {};
}

Recognizer compose_languages(const Recognizer& outer, const Partition& parts) {
  if (auto r = validate_partition(parts); !r) throw std::invalid_argument(r.detail);
  const Alphabet& base = parts.hom.alphabet;
  if (!(outer.hom.alphabet == paired_alphabet(base, parts.block_count)))
    throw std::invalid_argument("outer language must live on the block-paired alphabet");

  int parts_h = parts.hom.algebra->h.size;
  Homomorphism beta;
  beta.alphabet = paired_alphabet(base, parts_h);
  beta.algebra = outer.hom.algebra;
  beta.letter_image.resize(beta.alphabet.size());
  for (int l = 0; l < base.size(); ++l)
    for (int h = 0; h < parts_h; ++h) {
      auto outer_letter = outer.hom.alphabet.index(pair_symbol(base.name(l), parts.block_of[h]));
      beta.letter_image[l * parts_h + h] = outer.hom.image(*outer_letter);
    }

  SequentialComposition comp = sequential_compose(parts.hom, beta);
  Recognizer out;
  out.hom = comp.hom;
  out.accepting.resize(comp.hom.algebra->h.size);
  int outer_h = outer.hom.algebra->h.size;
  for (int h = 0; h < comp.hom.algebra->h.size; ++h)
    out.accepting[h] = outer.accepting[h % outer_h];
  return reachable_subalgebra(out).recognizer;
}

}  // namespace forestalg
