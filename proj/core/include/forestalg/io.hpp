#pragma once

#include <optional>
#include <string>
#include <vector>

#include "forestalg/algebra.hpp"
#include "forestalg/classify.hpp"
#include "forestalg/corpus.hpp"
#include "forestalg/decompose.hpp"

namespace forestalg {

/// One algebra per document. The letter and accepting sections are optional;
/// both are needed to form a recognizer.
struct AlgebraDocument {
  AlgebraPtr algebra;
  std::optional<Alphabet> letters;
  std::optional<std::vector<int>> letter_image;  // V index per letter
  std::optional<std::vector<bool>> accepting;    // size H

  bool has_recognizer() const {
    return algebra && letters && letter_image && accepting;
  }
  Homomorphism hom() const;       // throws std::logic_error without letters
  Recognizer recognizer() const;  // throws std::logic_error without sections
};

AlgebraDocument document_of(AlgebraPtr algebra);
AlgebraDocument document_of(const Recognizer& r);

/// Versioned line format with header "forestalg-format 1". Sections appear
/// in a fixed order; names are one per line and may contain spaces.
std::string write_algebra_document(const AlgebraDocument& doc);

/// Throws ParseError on malformed input or tables that fail validation.
AlgebraDocument read_algebra_document(const std::string& text);

/// Stable human-readable renderings.
std::string render_classification(const ForestAlgebra& a, const ClassificationReport& rep);
std::string render_suite(const SuiteReport& r);
std::string render_embedding(const Embedding& e);

}  // namespace forestalg
