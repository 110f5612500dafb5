#include <gtest/gtest.h>

#include <random>

#include "fountain/embed/cache.hpp"
#include "fountain/error.hpp"
#include "fountain/explain/chain.hpp"
#include "fountain/graph/schema.hpp"
#include "linker_oracle.hpp"

namespace fountain::explain {
namespace {

namespace schema = graph::schema;
using graph::Graph;
using graph::NodeId;

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no fountain::Error thrown";
  return ErrorCode::kInvalidArgument;
}

NodeId add(Graph& g, std::string_view label, const std::string& text) {
  return g.create_node({std::string(label)}, {{"text", text}, {"name", text}});
}

// P1 -> F1 with causes C1, C2, effect E1, prevention V1.
class ChainTest : public ::testing::Test {
 protected:
  void SetUp() override {
    p1 = add(g, schema::kPart, "catalyst");
    f1 = add(g, schema::kFailureMode, "crack");
    c1 = add(g, schema::kCause, "heat");
    c2 = add(g, schema::kCause, "vibration");
    e1 = add(g, schema::kEffect, "leak");
    v1 = add(g, schema::kPrevention, "material spec");
    g.create_edge("HAS_FAILURE_MODE", p1, f1);
    g.create_edge("HAS_CAUSE", f1, c1);
    g.create_edge("HAS_CAUSE", f1, c2);
    g.create_edge("HAS_EFFECT", f1, e1);
    g.create_edge("PREVENTED_BY", f1, v1);
    dev = add(g, schema::kDeviation, "dev");
  }

  Graph g;
  NodeId p1, f1, c1, c2, e1, v1, dev;
};

TEST_F(ChainTest, ListsBothCausesAndEffect) {
  const auto chain = chain_for(f1, std::nullopt, g);
  ASSERT_TRUE(chain.part.has_value());
  EXPECT_EQ(chain.part->id, p1);
  EXPECT_EQ(chain.part->name, "catalyst");
  EXPECT_EQ(chain.failure.text, "crack");
  ASSERT_EQ(chain.causes.size(), 2u);
  EXPECT_EQ(chain.causes[0].id, c1);
  EXPECT_EQ(chain.causes[1].id, c2);
  ASSERT_EQ(chain.effects.size(), 1u);
  EXPECT_EQ(chain.effects[0].id, e1);
  EXPECT_TRUE(chain.detections.empty());
  EXPECT_EQ(chain.preventions.size(), 1u);
  EXPECT_EQ(chain, testing::oracle_chain(f1, std::nullopt, g));
}

TEST_F(ChainTest, MatchedItemsComeFirst) {
  g.create_edge("SIMILAR_TO", dev, c2, {{"score", 0.9}, {"source_text", std::string("requested")}});
  g.create_edge("SIMILAR_TO", dev, v1, {{"score", 0.7}});
  const auto chain = chain_for(f1, dev, g);
  EXPECT_EQ(chain.causes[0].id, c2);
  EXPECT_EQ(chain.causes[0].similarity, 0.9);
  EXPECT_EQ(chain.causes[1].id, c1);
  EXPECT_FALSE(chain.causes[1].similarity.has_value());
  // Preventions are never scored.
  EXPECT_FALSE(chain.preventions[0].similarity.has_value());
}

TEST_F(ChainTest, FailureWithoutChildren) {
  const auto lone = add(g, schema::kFailureMode, "lonely");
  const auto chain = chain_for(lone, std::nullopt, g);
  EXPECT_FALSE(chain.part.has_value());
  EXPECT_TRUE(chain.causes.empty());
  EXPECT_TRUE(chain.effects.empty());
  EXPECT_EQ(to_json(chain).at("part"), nullptr);
}

TEST_F(ChainTest, Errors) {
  EXPECT_EQ(code_of([&] { chain_for(p1, std::nullopt, g); }), ErrorCode::kNotAFailureMode);
  EXPECT_EQ(code_of([&] { chain_for(NodeId{999}, std::nullopt, g); }), ErrorCode::kUnknownNode);
  EXPECT_EQ(code_of([&] { chain_for(f1, NodeId{999}, g); }), ErrorCode::kUnknownNode);
}

TEST_F(ChainTest, JsonShape) {
  g.create_edge("SIMILAR_TO", dev, c1, {{"score", 0.5}});
  const auto j = to_json(chain_for(f1, dev, g));
  EXPECT_EQ(j.at("part").at("id"), p1.value);
  EXPECT_EQ(j.at("failure").at("text"), "crack");
  EXPECT_EQ(j.at("causes").at(0).at("similarity"), 0.5);
  EXPECT_EQ(j.at("causes").at(1).at("similarity"), nullptr);
  EXPECT_TRUE(j.at("detections").is_array());
}

TEST_F(ChainTest, RiskTextTemplate) {
  const auto chain = chain_for(f1, std::nullopt, g);
  EXPECT_EQ(render_risk_text(chain, "mitigated by 100% inspection"),
            "RISK: crack\n  CAUSE: heat\n  CAUSE: vibration\n  JUSTIFICATION: mitigated by 100% inspection\n");
  EXPECT_EQ(render_risk_text(chain), "RISK: crack\n  CAUSE: heat\n  CAUSE: vibration\n");
  EXPECT_EQ(render_risk_text(chain, "  "), render_risk_text(chain));
}

TEST_F(ChainTest, RiskTextEmptyCausesAndLineBreaks) {
  CausalChain chain;
  chain.failure = {f1, "two\r\nlines\n\nhere", std::nullopt};
  EXPECT_EQ(render_risk_text(chain), "RISK: two lines here\n");
  EXPECT_EQ(render_risk_text(chain, "a\nb"), "RISK: two lines here\n  JUSTIFICATION: a b\n");
}

TEST(ChainProperty, RiskTextIsInjectiveOnSingleLineInputs) {
  std::mt19937_64 rng(61);
  const std::vector<std::string> texts{"a", "b", "a b", "CAUSE: a", "", "x  y"};
  std::map<std::string, std::tuple<std::string, std::vector<std::string>, std::string>> seen;
  for (int i = 0; i < 400; ++i) {
    CausalChain chain;
    const auto pick = [&] { return texts[std::uniform_int_distribution<std::size_t>(0, texts.size() - 1)(rng)]; };
    chain.failure.text = pick();
    std::vector<std::string> causes;
    for (int k = std::uniform_int_distribution<int>(0, 2)(rng); k > 0; --k) {
      causes.push_back(pick());
      chain.causes.push_back({NodeId{0}, causes.back(), std::nullopt});
    }
    std::string justification = pick();
    if (justification.empty()) justification = "none";
    const auto key = std::make_tuple(chain.failure.text, causes, justification);
    const auto [it, fresh] = seen.emplace(render_risk_text(chain, justification), key);
    if (!fresh) {
      ASSERT_EQ(it->second, key);
    }
  }
}

TEST(ChainProperty, EqualsPathEnumerationOnRandomFixtures) {
  std::mt19937_64 rng(62);
  const embed::HashedTokenProvider provider;
  const link::Clock clock = [] { return std::chrono::system_clock::time_point{}; };
  for (int i = 0; i < 20; ++i) {
    auto f = testing::random_linker_fixture(rng);
    embed::EmbeddingCache cache;
    const embed::CachedEmbedder embedder(provider, cache);
    const auto r = link::recommend(f.request, f.config, f.synonyms, f.graph, embedder, clock);
    for (const auto fm : f.graph.nodes_with_label(schema::kFailureMode)) {
      ASSERT_EQ(chain_for(fm, r.deviation, f.graph), testing::oracle_chain(fm, r.deviation, f.graph));
      ASSERT_EQ(chain_for(fm, std::nullopt, f.graph), testing::oracle_chain(fm, std::nullopt, f.graph));
    }
  }
}

}  // namespace
}  // namespace fountain::explain
