#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "forestalg/io.hpp"
#include "forestalg/products.hpp"
#include "json.hpp"

using namespace forestalg;
using nlohmann::json;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

// Empty out_path means stdout.
void emit(const std::string& out_path, const std::string& text) {
  if (out_path.empty())
    std::cout << text;
  else
    write_file(out_path, text);
}

Alphabet alphabet_from_csv(const std::string& csv) {
  std::vector<std::string> symbols;
  std::string item;
  std::istringstream in(csv);
  while (std::getline(in, item, ','))
    if (!item.empty()) symbols.push_back(item);
  if (symbols.empty()) throw std::runtime_error("empty alphabet");
  return Alphabet(symbols);
}

void collect_labels(const Formula& f, std::set<std::string>& out) {
  if (f.kind == Formula::Kind::Label) out.insert(f.label);
  for (const Formula& c : f.children) collect_labels(c, out);
  for (const Formula& c : f.family) collect_labels(c, out);
  for (const Formula& c : f.written) collect_labels(c, out);
}

void collect_identifiers(const std::string& text, std::set<std::string>& out) {
  std::size_t i = 0;
  while (i < text.size()) {
    if (std::isalpha((unsigned char)text[i])) {
      std::size_t j = i;
      while (j < text.size() && (std::isalnum((unsigned char)text[j]))) ++j;
      out.insert(text.substr(i, j - i));
      i = j;
    } else {
      ++i;
    }
  }
}

json check_json(const PropertyCheck& c) {
  return {{"holds", c.holds}, {"counterexample", c.counterexample}};
}

json confusion_json(const ForestAlgebra& a, const std::optional<ConfusionVerdict>& v) {
  if (!v) return nullptr;
  json j = {{"confused", v->confused}};
  if (v->confused && v->witness) {
    const ConfusionWitness& w = *v->witness;
    if (w.kind == ConfusionWitness::Kind::Horizontal) {
      json subset = json::array();
      for (int h : w.subset) subset.push_back(a.h_name(h));
      j["subset"] = subset;
    } else {
      json cycle = json::array();
      for (int h : w.cycle) cycle.push_back(a.h_name(h));
      j["expression"] = to_string(w.expression);
      j["cycle"] = cycle;
    }
  }
  return j;
}

std::string confusion_text(const ForestAlgebra& a, const std::string& kind,
                           const ConfusionVerdict& v) {
  if (!v.confused) return kind + ": none\n";
  std::string out = kind + ": confused";
  if (v.witness) {
    const ConfusionWitness& w = *v.witness;
    if (w.kind == ConfusionWitness::Kind::Horizontal) {
      out += ", subset {";
      for (std::size_t i = 0; i < w.subset.size(); ++i)
        out += (i ? " " : "") + a.h_name(w.subset[i]);
      out += "}";
    } else {
      out += ", map " + to_string(w.expression) + " cycles [";
      for (std::size_t i = 0; i < w.cycle.size(); ++i)
        out += (i ? " " : "") + a.h_name(w.cycle[i]);
      out += "]";
    }
  }
  return out + "\n";
}

AlgebraDocument load_document(const std::string& path) {
  return read_algebra_document(read_file(path));
}

Recognizer load_recognizer(const std::string& path) {
  AlgebraDocument doc = load_document(path);
  if (!doc.has_recognizer())
    throw ParseError(path + ": document lacks letter or accepting sections", 0);
  return doc.recognizer();
}

int cmd_eval(const std::string& path, const std::string& forest_text, bool as_json) {
  AlgebraDocument doc = load_document(path);
  if (!doc.letters || !doc.letter_image)
    throw ParseError(path + ": document lacks letter sections", 0);
  Homomorphism hom = doc.hom();
  Forest f = parse_forest(forest_text, hom.alphabet);
  int value = eval_forest(hom, f);
  if (as_json) {
    json j = {{"class", value}, {"name", doc.algebra->h_name(value)}};
    if (doc.accepting) j["accepted"] = (*doc.accepting)[value];
    std::cout << j.dump() << "\n";
    return 0;
  }
  std::cout << "class " << value << " (" << doc.algebra->h_name(value) << ")\n";
  if (doc.accepting)
    std::cout << "accepted: " << ((*doc.accepting)[value] ? "true" : "false") << "\n";
  return 0;
}

int cmd_sat(const std::string& formula_text, const std::string& forest_text,
            const std::string& alphabet_csv, bool as_json) {
  Formula f = parse_formula(formula_text);
  if (!is_forest_formula(f))
    throw std::runtime_error("tree formula; wrap label tests in EF or E[k]");
  std::set<std::string> symbols;
  if (alphabet_csv.empty()) {
    collect_labels(f, symbols);
    collect_identifiers(forest_text, symbols);
  }
  Alphabet alphabet = alphabet_csv.empty()
                          ? Alphabet({symbols.begin(), symbols.end()})
                          : alphabet_from_csv(alphabet_csv);
  Forest forest = parse_forest(forest_text, alphabet);
  bool sat = forest_sat(forest, f);
  if (as_json)
    std::cout << json{{"satisfied", sat}}.dump() << "\n";
  else
    std::cout << (sat ? "true" : "false") << "\n";
  return 0;
}

int cmd_compile(const std::string& formula_text, const std::string& alphabet_csv,
                const std::string& out_path, int max_elements) {
  Formula f = parse_formula(formula_text);
  if (!is_forest_formula(f))
    throw std::runtime_error("tree formula; wrap label tests in EF or E[k]");
  Alphabet alphabet;
  if (!alphabet_csv.empty()) {
    alphabet = alphabet_from_csv(alphabet_csv);
  } else {
    std::set<std::string> labels;
    collect_labels(f, labels);
    if (labels.empty())
      throw std::runtime_error("formula names no labels; pass --alphabet");
    alphabet = Alphabet({labels.begin(), labels.end()});
  }
  Recognizer r = compile_to_recognizer(f, alphabet, max_elements);
  std::string text = "# compiled from formula: " + to_string(f) + "\n" +
                     write_algebra_document(document_of(r));
  emit(out_path, text);
  return 0;
}

int cmd_syntactic(const std::string& path, const std::string& out_path) {
  Recognizer r = load_recognizer(path);
  SyntacticAlgebra syn = syntactic_algebra(r);
  emit(out_path, write_algebra_document(document_of(syn.recognizer)));
  return 0;
}

int cmd_classify(const std::string& path, int max_elements, bool as_json) {
  AlgebraDocument doc = load_document(path);
  const ForestAlgebra& a = *doc.algebra;
  ClassificationReport rep = classification_report(a, max_elements);
  if (as_json) {
    json j = {{"h_size", a.h.size},
              {"v_size", a.v.size},
              {"h_idempotent", rep.h_idempotent},
              {"h_commutative", rep.h_commutative},
              {"v_aperiodic", rep.v_aperiodic},
              {"ef", check_json(rep.ef)},
              {"distributive", check_json(rep.distributive)},
              {"path", check_json(rep.path)},
              {"vertical", confusion_json(a, rep.vertical)},
              {"uniform", confusion_json(a, rep.uniform)},
              {"horizontal", confusion_json(a, rep.horizontal)},
              {"ctl", to_string(rep.ctl)},
              {"fo", to_string(rep.fo)},
              {"graded_pdl", to_string(rep.graded_pdl)},
              {"ctl_star_note", rep.ctl_star_note},
              {"pdl_note", rep.pdl_note}};
    std::cout << j.dump() << "\n";
  } else {
    std::cout << render_classification(a, rep);
  }
  return 0;
}

int cmd_confusion(const std::string& path, const std::string& kind, int max_elements,
                  bool as_json) {
  AlgebraDocument doc = load_document(path);
  const ForestAlgebra& a = *doc.algebra;
  std::vector<std::pair<std::string, ConfusionVerdict>> runs;
  if (kind.empty() || kind == "vertical")
    runs.emplace_back("vertical", vertical_confusion(a, max_elements));
  if (kind.empty() || kind == "uniform")
    runs.emplace_back("uniform", uniform_vertical_confusion(a, max_elements));
  if (kind.empty() || kind == "horizontal")
    runs.emplace_back("horizontal", horizontal_confusion(a));
  bool any = false;
  json j;
  for (const auto& [name, verdict] : runs) {
    any = any || verdict.confused;
    if (as_json)
      j[name] = confusion_json(a, verdict);
    else
      std::cout << confusion_text(a, name, verdict);
  }
  if (as_json) std::cout << j.dump() << "\n";
  return any ? 1 : 0;
}

int cmd_decompose(const std::string& path, int max_elements, bool as_json) {
  AlgebraDocument doc = load_document(path);
  Embedding e = ef_decompose(*doc.algebra, max_elements);
  CheckResult verified = verify_embedding(e);
  if (as_json) {
    json j = {{"expression", to_string(e.expression)},
              {"atoms", count_atoms(e.expression)},
              {"depth", expression_depth(e.expression)},
              {"realized_h_size", e.realized->h.size},
              {"realized_v_size", e.realized->v.size},
              {"verified", verified.ok}};
    std::cout << j.dump() << "\n";
  } else {
    std::cout << render_embedding(e)
              << "verified: " << (verified.ok ? "yes" : "no") << "\n";
  }
  return verified.ok ? 0 : 1;
}

int cmd_wreath(const std::string& path1, const std::string& path2, bool generated,
               const std::string& out_path, int max_elements, bool as_json) {
  AlgebraDocument out;
  if (generated) {
    AlgebraDocument d1 = load_document(path1);
    AlgebraDocument d2 = load_document(path2);
    if (!d1.letters || !d2.letters)
      throw ParseError("generated mode needs letter sections in both documents", 0);
    Homomorphism alpha = d1.hom();
    Homomorphism beta = d2.hom();
    Alphabet paired = paired_alphabet(alpha.alphabet, alpha.algebra->h.size);
    if (beta.alphabet == alpha.alphabet && !(beta.alphabet == paired)) {
      // Lift a base-alphabet recognizer to the paired alphabet by ignoring
      // the horizontal coordinate.
      Homomorphism lifted;
      lifted.alphabet = paired;
      lifted.algebra = beta.algebra;
      for (int a = 0; a < alpha.alphabet.size(); ++a)
        for (int g = 0; g < alpha.algebra->h.size; ++g)
          lifted.letter_image.push_back(beta.letter_image[a]);
      beta = std::move(lifted);
    } else if (!(beta.alphabet == paired)) {
      throw ParseError("right algebra must use the left one's base or paired alphabet", 0);
    }
    SequentialComposition comp = sequential_compose(alpha, beta, max_elements);
    out.algebra = comp.wreath.algebra;
    out.letters = comp.hom.alphabet;
    out.letter_image = comp.hom.letter_image;
  } else {
    AlgebraDocument d1 = load_document(path1);
    AlgebraDocument d2 = load_document(path2);
    out.algebra = full_wreath(*d1.algebra, *d2.algebra, max_elements).algebra;
  }
  if (as_json)
    std::cout << json{{"h_size", out.algebra->h.size}, {"v_size", out.algebra->v.size}}
                     .dump()
              << "\n";
  else
    std::cout << "H size " << out.algebra->h.size << ", V size " << out.algebra->v.size
              << "\n";
  if (!out_path.empty()) write_file(out_path, write_algebra_document(out));
  return 0;
}

int cmd_corpus(bool suite, const std::string& export_dir, bool as_json) {
  if (!export_dir.empty()) {
    std::filesystem::create_directories(export_dir);
    for (const std::string& name : example_names()) {
      ExampleBundle b = get_example(name);
      write_file(export_dir + "/" + name + ".algebra",
                 write_algebra_document(document_of(b.recognizer)));
      if (b.formula)
        write_file(export_dir + "/" + name + ".formula", to_string(*b.formula) + "\n");
    }
    std::cout << "exported " << example_names().size() << " bundles to " << export_dir
              << "\n";
    return 0;
  }
  if (suite) {
    SuiteReport report = run_paper_suite();
    if (as_json) {
      json lines = json::array();
      for (const SuiteLine& line : report.lines)
        lines.push_back({{"bundle", line.bundle},
                         {"fact", line.fact},
                         {"pass", line.pass},
                         {"detail", line.detail}});
      std::cout << json{{"ok", report.ok}, {"lines", lines}}.dump() << "\n";
    } else {
      std::cout << render_suite(report);
    }
    return report.ok ? 0 : 1;
  }
  if (as_json) {
    json j = json::array();
    for (const std::string& name : example_names()) {
      ExampleBundle b = get_example(name);
      j.push_back({{"name", name},
                   {"alphabet", b.alphabet.names()},
                   {"has_formula", b.formula.has_value()}});
    }
    std::cout << j.dump() << "\n";
  } else {
    for (const std::string& name : example_names()) {
      ExampleBundle b = get_example(name);
      std::cout << name << " (alphabet:";
      for (const std::string& s : b.alphabet.names()) std::cout << " " << s;
      std::cout << (b.formula ? "; formula" : "") << ")\n";
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"forest algebra toolkit"};
  app.require_subcommand(1);
  int rc = 0;

  std::string algebra_path, algebra_path2, forest_text, formula_text, out_path;
  std::string alphabet_csv, kind, export_dir;
  int max_elements = 20000;
  bool as_json = false, full = false, generated = false, suite = false;

  auto add_json = [&](CLI::App* cmd) {
    cmd->add_flag("--json", as_json, "machine-readable output");
  };
  auto add_max = [&](CLI::App* cmd) {
    cmd->add_option("--max-elements", max_elements,
                    "size guard for closures and products (default 20000)");
  };

  CLI::App* eval = app.add_subcommand("eval", "evaluate a forest in an algebra file");
  eval->add_option("algebra", algebra_path, "algebra file with letters")->required();
  eval->add_option("forest", forest_text, "forest term")->required();
  add_json(eval);
  eval->callback([&] { rc = cmd_eval(algebra_path, forest_text, as_json); });

  CLI::App* sat = app.add_subcommand("sat", "evaluate a formula on a forest");
  sat->add_option("formula", formula_text, "forest formula")->required();
  sat->add_option("forest", forest_text, "forest term")->required();
  sat->add_option("--alphabet", alphabet_csv, "comma-separated symbols");
  add_json(sat);
  sat->callback([&] { rc = cmd_sat(formula_text, forest_text, alphabet_csv, as_json); });

  CLI::App* compile = app.add_subcommand("compile", "compile a formula to a recognizer");
  compile->add_option("formula", formula_text, "forest formula")->required();
  compile->add_option("--alphabet", alphabet_csv, "comma-separated symbols");
  compile->add_option("-o,--output", out_path, "output file (default stdout)");
  add_max(compile);
  compile->callback(
      [&] { rc = cmd_compile(formula_text, alphabet_csv, out_path, max_elements); });

  CLI::App* syntactic =
      app.add_subcommand("syntactic", "minimal recognizer of an algebra file");
  syntactic->add_option("algebra", algebra_path, "algebra file with recognizer sections")
      ->required();
  syntactic->add_option("-o,--output", out_path, "output file (default stdout)");
  syntactic->callback([&] { rc = cmd_syntactic(algebra_path, out_path); });

  CLI::App* classify = app.add_subcommand("classify", "logic class report");
  classify->add_option("algebra", algebra_path, "algebra file")->required();
  add_max(classify);
  add_json(classify);
  classify->callback([&] { rc = cmd_classify(algebra_path, max_elements, as_json); });

  CLI::App* confusion =
      app.add_subcommand("confusion", "confusion detectors; exit 1 when confused");
  confusion->add_option("algebra", algebra_path, "algebra file")->required();
  confusion->add_option("--kind", kind, "vertical|uniform|horizontal (default all)")
      ->check(CLI::IsMember({"vertical", "uniform", "horizontal"}));
  add_max(confusion);
  add_json(confusion);
  confusion->callback([&] { rc = cmd_confusion(algebra_path, kind, max_elements, as_json); });

  CLI::App* decompose =
      app.add_subcommand("decompose-ef", "wreath decomposition of an EF algebra");
  decompose->add_option("algebra", algebra_path, "algebra file")->required();
  add_max(decompose);
  add_json(decompose);
  decompose->callback([&] { rc = cmd_decompose(algebra_path, max_elements, as_json); });

  CLI::App* wreath = app.add_subcommand("wreath", "wreath product of two algebra files");
  wreath->add_option("left", algebra_path, "left (outer) algebra file")->required();
  wreath->add_option("right", algebra_path2, "right algebra file")->required();
  wreath->add_flag("--full", full, "complete wreath product (default)");
  wreath->add_flag("--generated", generated,
                   "sequential composition of the two recognizers");
  wreath->add_option("-o,--output", out_path, "write the product as an algebra file");
  add_max(wreath);
  add_json(wreath);
  wreath->callback([&] {
    if (full && generated) throw CLI::ValidationError("pick one of --full/--generated");
    rc = cmd_wreath(algebra_path, algebra_path2, generated, out_path, max_elements,
                    as_json);
  });

  CLI::App* corpus = app.add_subcommand("corpus", "built-in example languages");
  corpus->add_flag("--suite", suite, "run the expectation suite; exit 1 on mismatch");
  corpus->add_option("--export", export_dir, "write bundles to a directory");
  add_json(corpus);
  corpus->callback([&] { rc = cmd_corpus(suite, export_dir, as_json); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const SizeGuardExceeded& e) {
    std::cerr << "size guard: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::logic_error& e) {
    std::cerr << "internal check failed: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return rc;
}
