#include "corpus.hpp"

#include <random>
#include <vector>

#include "fountain/ingest/loaders.hpp"

namespace fountain::bench {

Corpus make_corpus(std::size_t parts, std::size_t rows, std::size_t claims, unsigned seed) {
  static const std::vector<std::string> words{"crack", "leak",  "noise", "heat",   "vibration", "rust",
                                              "flow",  "seal",  "weld",  "clamp",  "gasket",    "pressure",
                                              "wear",  "joint", "bolt",  "thermal", "fatigue",  "mount"};
  std::mt19937_64 rng(seed);
  const auto word = [&] { return words[std::uniform_int_distribution<std::size_t>(0, words.size() - 1)(rng)]; };
  const auto part = [&] { return "P" + std::to_string(std::uniform_int_distribution<std::size_t>(0, parts - 1)(rng)); };

  Corpus c;
  c.bom_csv = "part_id,parent_id,part_name,level,quantity\nP0,,root,0,1\n";
  for (std::size_t i = 1; i < parts; ++i) {
    const auto parent = std::uniform_int_distribution<std::size_t>(0, i - 1)(rng);
    c.bom_csv += "P" + std::to_string(i) + ",P" + std::to_string(parent) + ",part " + std::to_string(i) + ",1,1\n";
  }
  c.fmea_csv = "fmea_id,fmea_type,part_id,failure_mode,cause,effect,detection,prevention\n";
  for (std::size_t i = 0; i < rows; ++i) {
    const auto n = std::to_string(i);
    c.fmea_csv += "F-" + n + "," + (i % 3 == 0 ? "P" : "D") + "," + part() + "," + word() + " mode " + n + "," +
                  word() + " " + word() + " " + n + "," + word() + " effect," + word() + " test," + word() + " spec\n";
  }
  c.claims_csv = "claim_id,part_id,claim_text,date\n";
  for (std::size_t i = 0; i < claims; ++i) {
    c.claims_csv += "W-" + std::to_string(i) + "," + part() + "," + word() + " " + word() + " found,2020-01-01\n";
  }
  return c;
}

graph::Graph load_corpus(const Corpus& corpus) {
  graph::Graph g;
  const ingest::SynonymMap none;
  ingest::load_bom(g, corpus.bom_csv);
  ingest::load_fmea(g, corpus.fmea_csv, none);
  ingest::load_claims(g, corpus.claims_csv, none);
  return g;
}

}  // namespace fountain::bench
