#include "forestalg/io.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "forestalg/products.hpp"

namespace forestalg {
namespace {

void append_row(std::string& out, const std::vector<int>& table, int row, int width) {
  for (int j = 0; j < width; ++j) {
    if (j) out += ' ';
    out += std::to_string(table[row * width + j]);
  }
  out += '\n';
}

/// Line cursor over the document; skips blank lines and '#' comments.
struct Lines {
  std::vector<std::string> lines;
  std::size_t next = 0;

  explicit Lines(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
  }

  [[noreturn]] void fail(const std::string& message) const {
    throw ParseError("algebra document line " + std::to_string(next) + ": " + message,
                     next);
  }

  bool done() {
    while (next < lines.size()) {
      const std::string& line = lines[next];
      std::size_t i = line.find_first_not_of(" \t\r");
      if (i == std::string::npos || line[i] == '#') {
        ++next;
        continue;
      }
      return false;
    }
    return true;
  }

  std::string take() {
    if (done()) fail("unexpected end of document");
    std::string line = lines[next++];
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
    return line;
  }

  // Raw line for names; preserves interior spaces, may be blank.
  std::string take_raw() {
    if (next >= lines.size()) fail("unexpected end of document");
    std::string line = lines[next++];
    while (!line.empty() && line.back() == '\r') line.pop_back();
    return line;
  }

  std::string peek_keyword() {
    if (done()) return "";
    std::istringstream in(lines[next]);
    std::string word;
    in >> word;
    return word;
  }

  void expect(const std::string& keyword) {
    std::string line = take();
    if (line != keyword) fail("expected '" + keyword + "', got '" + line + "'");
  }

  int keyword_int(const std::string& keyword) {
    std::istringstream in(take());
    std::string word;
    int value = 0;
    if (!(in >> word >> value) || word != keyword)
      fail("expected '" + keyword + " <int>'");
    return value;
  }

  std::vector<int> int_row(int expected) {
    std::istringstream in(take());
    std::vector<int> row;
    int value = 0;
    while (in >> value) row.push_back(value);
    if ((int)row.size() != expected)
      fail("expected " + std::to_string(expected) + " integers, got " +
           std::to_string(row.size()));
    return row;
  }

  std::vector<int> table(int rows, int columns) {
    std::vector<int> out;
    out.reserve(rows * columns);
    for (int i = 0; i < rows; ++i)
      for (int value : int_row(columns)) out.push_back(value);
    return out;
  }

  std::vector<std::string> names(int count) {
    std::vector<std::string> out;
    for (int i = 0; i < count; ++i) out.push_back(take_raw());
    return out;
  }
};

}  // namespace

Homomorphism AlgebraDocument::hom() const {
  if (!algebra || !letters || !letter_image)
    throw std::logic_error("document has no letter sections");
  Homomorphism h;
  h.alphabet = *letters;
  h.algebra = algebra;
  h.letter_image = *letter_image;
  return h;
}

Recognizer AlgebraDocument::recognizer() const {
  if (!has_recognizer()) throw std::logic_error("document has no recognizer sections");
  return Recognizer{hom(), *accepting};
}

AlgebraDocument document_of(AlgebraPtr algebra) {
  AlgebraDocument doc;
  doc.algebra = std::move(algebra);
  return doc;
}

AlgebraDocument document_of(const Recognizer& r) {
  AlgebraDocument doc;
  doc.algebra = r.hom.algebra;
  doc.letters = r.hom.alphabet;
  doc.letter_image = r.hom.letter_image;
  doc.accepting = r.accepting;
  return doc;
}

std::string write_algebra_document(const AlgebraDocument& doc) {
  if (!doc.algebra) throw std::logic_error("document has no algebra");
  const ForestAlgebra& a = *doc.algebra;
  int n = a.h.size, m = a.v.size;
  std::string out = "forestalg-format 1\n";
  out += "h-size " + std::to_string(n) + "\n";
  out += "h-identity " + std::to_string(a.h.identity) + "\n";
  out += "h-table\n";
  for (int i = 0; i < n; ++i) append_row(out, a.h.table, i, n);
  out += "h-names\n";
  for (int i = 0; i < n; ++i) out += a.h_name(i) + "\n";
  out += "v-size " + std::to_string(m) + "\n";
  out += "v-identity " + std::to_string(a.v.identity) + "\n";
  out += "v-table\n";
  for (int i = 0; i < m; ++i) append_row(out, a.v.table, i, m);
  out += "v-names\n";
  for (int i = 0; i < m; ++i) out += a.v_name(i) + "\n";
  out += "action\n";
  for (int i = 0; i < m; ++i) append_row(out, a.action, i, n);
  out += "ins-pre\n";
  append_row(out, a.ins_pre, 0, n);
  out += "ins-post\n";
  append_row(out, a.ins_post, 0, n);
  if (doc.letters && doc.letter_image) {
    out += "letters";
    for (const std::string& s : doc.letters->names()) out += " " + s;
    out += "\nletter-image";
    for (int v : *doc.letter_image) out += " " + std::to_string(v);
    out += "\n";
  }
  if (doc.accepting) {
    out += "accepting";
    for (int h = 0; h < (int)doc.accepting->size(); ++h)
      if ((*doc.accepting)[h]) out += " " + std::to_string(h);
    out += "\n";
  }
  out += "end\n";
  return out;
}

AlgebraDocument read_algebra_document(const std::string& text) {
  Lines in(text);
  in.expect("forestalg-format 1");
  ForestAlgebra a;
  a.h.size = in.keyword_int("h-size");
  a.h.identity = in.keyword_int("h-identity");
  if (a.h.size <= 0) in.fail("h-size must be positive");
  in.expect("h-table");
  a.h.table = in.table(a.h.size, a.h.size);
  in.expect("h-names");
  a.h_names = in.names(a.h.size);
  a.v.size = in.keyword_int("v-size");
  a.v.identity = in.keyword_int("v-identity");
  if (a.v.size <= 0) in.fail("v-size must be positive");
  in.expect("v-table");
  a.v.table = in.table(a.v.size, a.v.size);
  in.expect("v-names");
  a.v_names = in.names(a.v.size);
  in.expect("action");
  a.action = in.table(a.v.size, a.h.size);
  in.expect("ins-pre");
  a.ins_pre = in.int_row(a.h.size);
  in.expect("ins-post");
  a.ins_post = in.int_row(a.h.size);

  AlgebraDocument doc;
  if (in.peek_keyword() == "letters") {
    std::istringstream line(in.take());
    std::string word, letter;
    line >> word;
    std::vector<std::string> symbols;
    while (line >> letter) symbols.push_back(letter);
    doc.letters = Alphabet(symbols);
    std::istringstream image_line(in.take());
    int v = 0;
    std::vector<int> image;
    image_line >> word;
    if (word != "letter-image") in.fail("expected 'letter-image' after 'letters'");
    while (image_line >> v) image.push_back(v);
    if (image.size() != symbols.size())
      in.fail("letter-image size differs from letters");
    for (int vi : image)
      if (vi < 0 || vi >= a.v.size) in.fail("letter-image index out of range");
    doc.letter_image = std::move(image);
  }
  if (in.peek_keyword() == "accepting") {
    std::istringstream line(in.take());
    std::string word;
    line >> word;
    std::vector<bool> accepting(a.h.size, false);
    int h = 0;
    while (line >> h) {
      if (h < 0 || h >= a.h.size) in.fail("accepting index out of range");
      accepting[h] = true;
    }
    doc.accepting = std::move(accepting);
  }
  in.expect("end");

  CheckResult valid = validate_algebra(a);
  if (!valid) in.fail("invalid algebra: " + valid.detail);
  doc.algebra = std::make_shared<const ForestAlgebra>(std::move(a));
  return doc;
}

namespace {

std::string yes_no(bool b) { return b ? "yes" : "no"; }

std::string property_line(const std::string& name, const PropertyCheck& check) {
  std::string out = name + ": " + (check.holds ? "hold" : "fail");
  if (!check.holds && !check.counterexample.empty())
    out += " (" + check.counterexample + ")";
  return out + "\n";
}

std::string cycle_names(const ForestAlgebra& a, const std::vector<int>& cycle) {
  std::string out = "[";
  for (std::size_t i = 0; i < cycle.size(); ++i) {
    if (i) out += " ";
    out += a.h_name(cycle[i]);
  }
  return out + "]";
}

std::string confusion_line(const std::string& name, const ForestAlgebra& a,
                           const std::optional<ConfusionVerdict>& verdict) {
  std::string out = name + ": ";
  if (!verdict) return out + "skipped (size guard)\n";
  if (!verdict->confused) return out + "none\n";
  out += "confused";
  if (verdict->witness) {
    const ConfusionWitness& w = *verdict->witness;
    if (w.kind == ConfusionWitness::Kind::Horizontal) {
      out += ", subset {";
      for (std::size_t i = 0; i < w.subset.size(); ++i) {
        if (i) out += " ";
        out += a.h_name(w.subset[i]);
      }
      out += "}";
    } else {
      out += ", map " + to_string(w.expression) + " cycles " + cycle_names(a, w.cycle);
    }
  }
  return out + "\n";
}

}  // namespace

std::string render_classification(const ForestAlgebra& a, const ClassificationReport& rep) {
  std::string out;
  out += "H size " + std::to_string(a.h.size) + ", V size " + std::to_string(a.v.size) + "\n";
  out += "H idempotent: " + yes_no(rep.h_idempotent) + "\n";
  out += "H commutative: " + yes_no(rep.h_commutative) + "\n";
  out += "V aperiodic: " + yes_no(rep.v_aperiodic) + "\n";
  out += property_line("EF identities", rep.ef);
  out += property_line("distributivity", rep.distributive);
  out += property_line("path identities", rep.path);
  out += confusion_line("vertical confusion", a, rep.vertical);
  out += confusion_line("uniform vertical confusion", a, rep.uniform);
  out += confusion_line("horizontal confusion", a, rep.horizontal);
  out += "EF: " + std::string(rep.ef.holds ? "yes" : "no") + "\n";
  out += "CTL: " + to_string(rep.ctl) + "\n";
  out += "FO[<]: " + to_string(rep.fo) + "\n";
  out += "graded PDL: " + to_string(rep.graded_pdl) + "\n";
  if (!rep.ctl_star_note.empty()) out += "CTL*: " + rep.ctl_star_note + "\n";
  if (!rep.pdl_note.empty()) out += "PDL: " + rep.pdl_note + "\n";
  return out;
}

std::string render_suite(const SuiteReport& r) {
  std::string out;
  for (const SuiteLine& line : r.lines) {
    out += line.pass ? "[PASS] " : "[FAIL] ";
    out += line.bundle + ": " + line.fact;
    if (!line.detail.empty()) out += " (" + line.detail + ")";
    out += "\n";
  }
  out += r.ok ? "suite: all expectations met\n" : "suite: FAILURES\n";
  return out;
}

std::string render_embedding(const Embedding& e) {
  std::string out = "expression: " + to_string(e.expression) + "\n";
  out += "atoms: " + std::to_string(count_atoms(e.expression)) + "\n";
  out += "depth: " + std::to_string(expression_depth(e.expression)) + "\n";
  out += "source H size " + std::to_string(e.source->h.size) + ", V size " +
         std::to_string(e.source->v.size) + "\n";
  out += "realized H size " + std::to_string(e.realized->h.size) + ", V size " +
         std::to_string(e.realized->v.size) + "\n";
  return out;
}

}  // namespace forestalg
