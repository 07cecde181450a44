#include "forestalg/io.hpp"

#include "doctest.h"
#include "forestalg/decompose.hpp"

using namespace forestalg;

namespace {

bool same_algebra(const ForestAlgebra& a, const ForestAlgebra& b) {
  return a.h.size == b.h.size && a.h.identity == b.h.identity &&
         a.h.table == b.h.table && a.v.size == b.v.size &&
         a.v.identity == b.v.identity && a.v.table == b.v.table &&
         a.action == b.action && a.ins_pre == b.ins_pre && a.ins_post == b.ins_post &&
         a.h_names == b.h_names && a.v_names == b.v_names;
}

}  // namespace

TEST_CASE("algebra documents round-trip") {
  SUBCASE("bare algebra") {
    AlgebraDocument doc = document_of(std::make_shared<const ForestAlgebra>(u2()));
    AlgebraDocument back = read_algebra_document(write_algebra_document(doc));
    CHECK(same_algebra(*back.algebra, *doc.algebra));
    CHECK_FALSE(back.has_recognizer());
  }
  SUBCASE("recognizer with generated names") {
    // Syntactic algebras carry provenance-derived names that contain spaces.
    ExampleBundle b = get_example("L1");
    Recognizer syn = syntactic_algebra(b.recognizer).recognizer;
    AlgebraDocument doc = document_of(syn);
    std::string text = write_algebra_document(doc);
    AlgebraDocument back = read_algebra_document(text);
    REQUIRE(back.has_recognizer());
    CHECK(same_algebra(*back.algebra, *doc.algebra));
    CHECK(back.recognizer().hom.alphabet == syn.hom.alphabet);
    CHECK(back.recognizer().hom.letter_image == syn.hom.letter_image);
    CHECK(back.recognizer().accepting == syn.accepting);
    // Idempotent writer
    CHECK(write_algebra_document(back) == text);
  }
  SUBCASE("empty accepting set survives") {
    ExampleBundle b = get_example("L2");
    Recognizer r = b.recognizer;
    r.accepting.assign(r.accepting.size(), false);
    AlgebraDocument back = read_algebra_document(write_algebra_document(document_of(r)));
    REQUIRE(back.accepting);
    CHECK(std::count(back.accepting->begin(), back.accepting->end(), true) == 0);
  }
}

TEST_CASE("reader tolerates comments and blank lines") {
  AlgebraDocument doc = document_of(std::make_shared<const ForestAlgebra>(u1()));
  std::string text = write_algebra_document(doc);
  std::string padded = "# header comment\n\n" + text + "\n# trailing\n";
  CHECK(same_algebra(*read_algebra_document(padded).algebra, *doc.algebra));
}

TEST_CASE("reader rejects malformed documents") {
  AlgebraDocument doc = document_of(std::make_shared<const ForestAlgebra>(u1()));
  std::string text = write_algebra_document(doc);
  CHECK_THROWS_AS((void)read_algebra_document("forestalg-format 2\n"), ParseError);
  CHECK_THROWS_AS((void)read_algebra_document(text.substr(0, text.size() / 2)),
                  ParseError);
  SUBCASE("table entry out of range fails validation") {
    std::string bad = text;
    std::size_t pos = bad.find("h-table\n");
    bad.replace(pos, 10, "h-table\n7 1");
    CHECK_THROWS_AS((void)read_algebra_document(bad), ParseError);
  }
  SUBCASE("letter image out of range") {
    ExampleBundle b = get_example("L2");
    std::string rec = write_algebra_document(document_of(b.recognizer));
    std::size_t pos = rec.find("letter-image");
    std::string bad = rec.substr(0, pos) + "letter-image 99\n" +
                      rec.substr(rec.find('\n', pos) + 1);
    CHECK_THROWS_AS((void)read_algebra_document(bad), ParseError);
  }
}

TEST_CASE("report renderings are stable and informative") {
  ExampleBundle b = get_example("L1");
  SyntacticAlgebra syn = syntactic_algebra(b.recognizer);
  const ForestAlgebra& alg = *syn.recognizer.hom.algebra;
  ClassificationReport rep = classification_report(alg);
  std::string text = render_classification(alg, rep);
  CHECK(text.find("H size 5") != std::string::npos);
  CHECK(text.find("CTL: excluded") != std::string::npos);
  CHECK(text.find("vertical confusion: confused") != std::string::npos);
  CHECK(render_classification(alg, rep) == text);

  std::string suite = render_suite(check_bundle(b));
  CHECK(suite.find("[PASS] L1:") != std::string::npos);
  CHECK(suite.find("suite: all expectations met") != std::string::npos);

  Embedding e = ef_decompose(u1());
  std::string emb = render_embedding(e);
  CHECK(emb.find("expression: U1") != std::string::npos);
  CHECK(emb.find("atoms: 1") != std::string::npos);
}
