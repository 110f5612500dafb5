#include "linker_oracle.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "fountain/embed/vector.hpp"
#include "fountain/graph/schema.hpp"
#include "fountain/ingest/loaders.hpp"

namespace fountain::testing {

namespace schema = graph::schema;
using graph::Graph;
using graph::NodeId;
using link::Match;
using link::Role;

namespace {

const std::vector<std::string> kWords = {"flow",   "leak",  "seal",  "weld",  "crack",  "noise",
                                         "heat",   "rust",  "valve", "pipe",  "joint",  "vibration",
                                         "clamp",  "gasket"};

std::string phrase(std::mt19937_64& rng, std::size_t lo, std::size_t hi) {
  const auto n = std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
  std::uniform_int_distribution<std::size_t> w(0, kWords.size() - 1);
  std::string out;
  for (std::size_t i = 0; i < n; ++i) {
    if (!out.empty()) out += ' ';
    out += kWords[w(rng)];
  }
  // A leading capital exercises canonicalization.
  if (!out.empty() && std::bernoulli_distribution(0.2)(rng)) out[0] = static_cast<char>(out[0] - 32);
  return out;
}

}  // namespace

LinkerFixture random_linker_fixture(std::mt19937_64& rng, std::size_t max_nodes) {
  LinkerFixture f;
  const auto uni = [&](std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
  };
  const auto coin = [&](double p) { return std::bernoulli_distribution(p)(rng); };

  // Concept nodes take up to 9 of the budget; each FMEA row at most 5, each
  // part and claim one.
  const std::size_t budget = max_nodes - 9;
  const std::size_t parts = uni(2, 12);
  const std::size_t claims = uni(0, 10);
  const std::size_t rows = uni(1, (budget - parts - claims) / 5);

  std::ostringstream bom;
  bom << "part_id,parent_id,part_name,level,quantity\n";
  std::vector<std::size_t> level(parts, 0);
  for (std::size_t i = 0; i < parts; ++i) {
    std::string parent;
    if (i > 0) {
      const auto p = uni(0, i - 1);
      parent = "P" + std::to_string(p);
      level[i] = level[p] + 1;
    }
    bom << "P" << i << "," << parent << ",component " << i << "," << level[i] << "," << uni(1, 3)
        << "\n";
  }
  f.bom_csv = bom.str();

  std::ostringstream fmea;
  fmea << "fmea_id,fmea_type,part_id,failure_mode,cause,effect,detection,prevention\n";
  for (std::size_t i = 0; i < rows; ++i) {
    fmea << "F" << i << "," << (coin(0.7) ? "D" : "P") << ",P" << uni(0, parts - 1) << ","
         << phrase(rng, 1, 3) << "," << phrase(rng, 1, 4) << ","
         << (coin(0.8) ? phrase(rng, 1, 4) : "") << "," << (coin(0.7) ? phrase(rng, 1, 3) : "")
         << "," << (coin(0.6) ? phrase(rng, 1, 3) : "") << "\n";
  }
  f.fmea_csv = fmea.str();

  std::ostringstream cl;
  cl << "claim_id,part_id,claim_text,date\n";
  for (std::size_t i = 0; i < claims; ++i) {
    cl << "C" << i << ",P" << uni(0, parts - 1) << "," << phrase(rng, 1, 5) << ",2021-0"
       << uni(1, 9) << "-1" << uni(0, 9) << "\n";
  }
  f.claims_csv = cl.str();

  if (coin(0.5)) f.synonyms = ingest::SynonymMap({{"sealing", "seal"}, {"leakage", "leak"}});
  ingest::load_bom(f.graph, f.bom_csv);
  ingest::load_fmea(f.graph, f.fmea_csv, f.synonyms);
  ingest::load_claims(f.graph, f.claims_csv, f.synonyms);

  f.request.part_ref = "P" + std::to_string(uni(0, std::min<std::size_t>(parts - 1, 3)));
  f.request.current_definition = coin(0.8) ? phrase(rng, 1, 4) : "";
  f.request.requested_deviation = phrase(rng, 1, 4);
  if (coin(0.3)) f.request.requested_deviation += " leakage";
  f.config.tau_link = std::uniform_real_distribution<double>(0.2, 0.7)(rng);
  f.config.tau_claim = std::uniform_real_distribution<double>(0.2, 0.7)(rng);
  f.config.top_k = uni(1, 6);
  f.config.scope_depth = coin(0.3) ? uni(0, 2) : graph::kUnlimitedDepth;
  return f;
}

namespace {

std::string norm_of(const Graph& g, NodeId id) {
  const auto& props = g.node(id).props;
  if (auto n = graph::text_prop(props, "norm")) return *n;
  return graph::text_prop(props, "text").value_or("");
}

std::set<NodeId> oracle_scope(NodeId root, std::size_t depth, const Graph& g) {
  std::set<NodeId> seen{root};
  std::vector<NodeId> frontier{root};
  for (std::size_t d = 0; d < depth && !frontier.empty(); ++d) {
    std::vector<NodeId> next;
    for (const NodeId n : frontier) {
      for (const auto& e : g.edges()) {
        if (e.from == n && e.type == schema::kHasChild && seen.insert(e.to).second) next.push_back(e.to);
      }
    }
    frontier = std::move(next);
  }
  return seen;
}

bool by_similarity(const Match& a, const Match& b) {
  return a.similarity != b.similarity ? a.similarity > b.similarity : a.node < b.node;
}

}  // namespace

OracleResult oracle_recommend(const LinkerFixture& fixture, const link::LinkerConfig& config,
                              const embed::EmbeddingProvider& provider) {
  const Graph& g = fixture.graph;
  OracleResult out;
  bool found = false;
  for (const auto& n : g.nodes()) {
    if (n.has_label("Part") && graph::text_prop(n.props, "id") == fixture.request.part_ref) {
      out.part = n.id;
      found = true;
      break;
    }
  }
  if (!found) throw std::runtime_error("oracle: part not found");

  const auto cur = provider.embed(fixture.synonyms.normalize(fixture.request.current_definition));
  const auto req = provider.embed(fixture.synonyms.normalize(fixture.request.requested_deviation));
  std::map<NodeId, Match> scored;
  for (const auto& n : g.nodes()) {
    Role role;
    if (n.has_label("Cause")) {
      role = Role::kCause;
    } else if (n.has_label("Effect")) {
      role = Role::kEffect;
    } else if (n.has_label("Detection")) {
      role = Role::kDetection;
    } else if (n.has_label("WarrantyClaim")) {
      role = Role::kClaim;
    } else {
      continue;
    }
    const auto v = provider.embed(norm_of(g, n.id));
    const double sc = embed::cosine(cur, v);
    const double sr = embed::cosine(req, v);
    scored[n.id] = Match{n.id, role, std::max(sc, sr),
                         sr >= sc ? link::SourceText::kRequested : link::SourceText::kCurrent};
  }

  const auto scope = oracle_scope(out.part, config.scope_depth, g);
  std::map<NodeId, std::set<NodeId>> claim_parts;
  for (const auto& e : g.edges()) {
    if (e.type == schema::kClaimFor && scored.count(e.from) && scored[e.from].role == Role::kClaim &&
        scope.count(e.to)) {
      claim_parts[e.from].insert(e.to);
    }
  }
  for (const auto& [c, parts] : claim_parts) {
    if (scored[c].similarity >= config.tau_claim) out.claims.push_back(scored[c]);
  }
  std::sort(out.claims.begin(), out.claims.end(), by_similarity);

  std::map<NodeId, std::set<NodeId>> owners;
  for (const auto& e : g.edges()) {
    if (e.type == schema::kHasFailureMode && scope.count(e.from) &&
        g.node(e.to).has_label("FailureMode")) {
      owners[e.to].insert(e.from);
    }
  }
  for (const auto& [fm, own] : owners) {
    link::Recommendation rec;
    rec.failure = fm;
    rec.failure_text = graph::text_prop(g.node(fm).props, "text").value_or("");
    std::set<NodeId> seen;
    for (const auto& e : g.edges()) {
      if (e.from != fm || !scored.count(e.to)) continue;
      const Match& m = scored[e.to];
      const bool edge_fits = (e.type == schema::kHasCause && m.role == Role::kCause) ||
                             (e.type == schema::kHasEffect && m.role == Role::kEffect) ||
                             (e.type == schema::kDetectedBy && m.role == Role::kDetection);
      if (edge_fits && m.similarity >= config.tau_link && seen.insert(m.node).second) {
        rec.matched.push_back(m);
      }
    }
    if (rec.matched.empty()) continue;
    std::sort(rec.matched.begin(), rec.matched.end(), by_similarity);
    rec.score = rec.matched.front().similarity;
    for (const auto& c : out.claims) {
      for (const NodeId p : claim_parts[c.node]) {
        if (own.count(p)) {
          rec.claims.push_back(c);
          break;
        }
      }
    }
    out.recommendations.push_back(std::move(rec));
  }
  std::sort(out.recommendations.begin(), out.recommendations.end(), [](const auto& a, const auto& b) {
    return a.score != b.score ? a.score > b.score : a.failure < b.failure;
  });
  if (out.recommendations.size() > config.top_k) out.recommendations.resize(config.top_k);
  return out;
}

explain::CausalChain oracle_chain(NodeId failure, std::optional<NodeId> deviation, const Graph& g) {
  explain::CausalChain chain;
  chain.failure = {failure, graph::text_prop(g.node(failure).props, "text").value_or(""), std::nullopt};
  std::map<NodeId, double> sim;
  for (const auto& e : g.edges()) {
    if (e.type == schema::kHasFailureMode && e.to == failure && g.node(e.from).has_label("Part")) {
      if (!chain.part || e.from < chain.part->id) {
        chain.part = explain::PartRef{e.from, graph::text_prop(g.node(e.from).props, "name").value_or("")};
      }
    }
    if (deviation && e.from == *deviation && e.type == schema::kSimilarTo) {
      const double s = std::get<double>(e.props.at("score"));
      const auto it = sim.find(e.to);
      sim[e.to] = it == sim.end() ? s : std::max(it->second, s);
    }
  }
  const auto collect = [&](std::string_view type, std::string_view label, bool scored) {
    std::set<NodeId> ids;
    for (const auto& e : g.edges()) {
      if (e.from == failure && e.type == type && g.node(e.to).has_label(label)) ids.insert(e.to);
    }
    std::vector<explain::ChainItem> items;
    for (const NodeId id : ids) {
      explain::ChainItem item{id, graph::text_prop(g.node(id).props, "text").value_or(""), std::nullopt};
      if (scored && sim.count(id)) item.similarity = sim[id];
      items.push_back(item);
    }
    std::stable_sort(items.begin(), items.end(), [](const auto& a, const auto& b) {
      if (a.similarity && b.similarity) return *a.similarity > *b.similarity;
      return a.similarity.has_value() && !b.similarity.has_value();
    });
    return items;
  };
  chain.causes = collect(schema::kHasCause, "Cause", true);
  chain.effects = collect(schema::kHasEffect, "Effect", true);
  chain.detections = collect(schema::kDetectedBy, "Detection", true);
  chain.preventions = collect(schema::kPreventedBy, "Prevention", false);
  return chain;
}

}  // namespace fountain::testing
