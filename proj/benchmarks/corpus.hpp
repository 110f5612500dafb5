#pragma once

#include <cstddef>
#include <string>

#include "fountain/graph/graph.hpp"

namespace fountain::bench {

struct Corpus {
  std::string bom_csv;
  std::string fmea_csv;
  std::string claims_csv;
};

// Random BOM tree of `parts` parts with `rows` FMEA rows and `claims` claims
// over a small failure vocabulary. Deterministic for a given seed.
Corpus make_corpus(std::size_t parts, std::size_t rows, std::size_t claims, unsigned seed = 1);

// The corpus loaded into a fresh graph.
graph::Graph load_corpus(const Corpus& corpus);

}  // namespace fountain::bench
