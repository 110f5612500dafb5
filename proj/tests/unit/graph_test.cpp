#include <gtest/gtest.h>

#include <deque>
#include <random>
#include <set>

#include "fountain/error.hpp"
#include "fountain/graph/graph.hpp"
#include "fountain/graph/schema.hpp"
#include "fountain/graph/snapshot.hpp"
#include "fountain/io.hpp"
#include "query_oracle.hpp"
#include "temp_dir.hpp"

namespace fountain::graph {
namespace {

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no fountain::Error thrown";
  return ErrorCode::kInvalidArgument;
}

TEST(PropertyTest, CompareValuesWithinKind) {
  EXPECT_EQ(compare_values(std::string("a"), std::string("b")), std::partial_ordering::less);
  EXPECT_EQ(compare_values(2.0, 2.0), std::partial_ordering::equivalent);
  EXPECT_EQ(compare_values(std::int64_t{3}, std::int64_t{1}), std::partial_ordering::greater);
  EXPECT_EQ(compare_values(false, true), std::partial_ordering::less);
}

TEST(PropertyTest, CompareValuesAcrossKindsIsUnordered) {
  EXPECT_FALSE(compare_values(std::int64_t{1}, 1.0).has_value());
  EXPECT_FALSE(compare_values(std::string("1"), std::int64_t{1}).has_value());
}

TEST(PropertyTest, JsonRoundTripKeepsKinds) {
  const PropertyMap props{{"s", std::string("x")},
                          {"d", 1.0},
                          {"i", std::int64_t{-7}},
                          {"b", true}};
  const auto back = props_from_json(to_json(props));
  EXPECT_EQ(back, props);
  EXPECT_EQ(kind_of(back.at("d")), PropertyKind::kNumber);
  EXPECT_EQ(kind_of(back.at("i")), PropertyKind::kInteger);
}

TEST(PropertyTest, JsonRejectsNullAndContainers) {
  EXPECT_EQ(code_of([] { from_json_value(nullptr); }), ErrorCode::kInvalidArgument);
  EXPECT_EQ(code_of([] { from_json_value(nlohmann::json::array()); }), ErrorCode::kInvalidArgument);
}

TEST(GraphTest, IdsAreDenseInCreationOrder) {
  Graph g;
  const auto a = g.create_node({"A"}, {});
  const auto b = g.create_node({"B"}, {});
  const auto e = g.create_edge("R", a, b);
  EXPECT_EQ(a.value, 0u);
  EXPECT_EQ(b.value, 1u);
  EXPECT_EQ(e.value, 0u);
  EXPECT_EQ(g.node_count(), 2u);
  EXPECT_EQ(g.edge_count(), 1u);
}

TEST(GraphTest, NodeNeedsLabel) {
  Graph g;
  EXPECT_EQ(code_of([&] { g.create_node({}, {}); }), ErrorCode::kEmptyLabels);
  EXPECT_EQ(g.node_count(), 0u);
}

TEST(GraphTest, RejectsInvalidStrings) {
  Graph g;
  EXPECT_EQ(code_of([&] { g.create_node({"A"}, {{"k", std::string("\xC3")}}); }),
            ErrorCode::kInvalidArgument);
  EXPECT_EQ(code_of([&] { g.create_node({"\xFF"}, {}); }), ErrorCode::kInvalidArgument);
  EXPECT_EQ(code_of([&] { g.create_node({"A"}, {{"", std::string("v")}}); }),
            ErrorCode::kInvalidArgument);
  EXPECT_EQ(code_of([&] { g.create_node({"A"}, {{"x", std::numeric_limits<double>::infinity()}}); }),
            ErrorCode::kInvalidArgument);
}

TEST(GraphTest, DanglingEdgeRejected) {
  Graph g;
  const auto a = g.create_node({"A"}, {});
  EXPECT_EQ(code_of([&] { g.create_edge("R", a, NodeId{9}); }), ErrorCode::kDanglingEndpoint);
  EXPECT_EQ(code_of([&] { g.create_edge("", a, a); }), ErrorCode::kInvalidArgument);
}

TEST(GraphTest, UpsertReusesMatchingNode) {
  Graph g;
  const auto first = g.upsert_node({"Part"}, {{"key", std::string("p1")}}, "key");
  const auto again = g.upsert_node({"Part"}, {{"key", std::string("p1")}, {"x", 1.0}}, "key");
  EXPECT_TRUE(first.created);
  EXPECT_FALSE(again.created);
  EXPECT_EQ(first.id, again.id);
  EXPECT_EQ(g.node_count(), 1u);
}

TEST(GraphTest, UpsertConflictOnOtherLabels) {
  Graph g;
  g.upsert_node({"Part"}, {{"key", std::string("p1")}}, "key");
  EXPECT_EQ(code_of([&] { g.upsert_node({"Cause"}, {{"key", std::string("p1")}}, "key"); }),
            ErrorCode::kUpsertConflict);
  EXPECT_EQ(code_of([&] { g.upsert_node({"Part"}, {}, "key"); }), ErrorCode::kInvalidArgument);
}

TEST(GraphTest, EdgeDedupe) {
  Graph g;
  const auto a = g.create_node({"A"}, {});
  const auto b = g.create_node({"A"}, {});
  const auto e1 = g.upsert_edge("R", a, b, {{"w", 1.0}}, true);
  const auto e2 = g.upsert_edge("R", a, b, {{"w", 2.0}}, true);
  const auto e3 = g.upsert_edge("R", a, b, {}, false);
  EXPECT_TRUE(e1.created);
  EXPECT_FALSE(e2.created);
  EXPECT_EQ(e1.id, e2.id);
  EXPECT_NE(e3.id, e1.id);
  EXPECT_EQ(std::get<double>(g.edge(e1.id).props.at("w")), 1.0);
}

TEST(GraphTest, UnknownNodeAccess) {
  Graph g;
  EXPECT_EQ(code_of([&] { g.node(NodeId{0}); }), ErrorCode::kUnknownNode);
  EXPECT_EQ(code_of([&] { g.neighbors(NodeId{3}, Direction::kOut); }), ErrorCode::kUnknownNode);
}

TEST(GraphTest, SelfLoopAppearsTwiceUnderBoth) {
  Graph g;
  const auto a = g.create_node({"A"}, {});
  const auto e = g.create_edge("R", a, a);
  const auto both = g.neighbors(a, Direction::kBoth);
  ASSERT_EQ(both.size(), 2u);
  EXPECT_EQ(both[0], (Neighbor{e, a}));
  EXPECT_EQ(both[1], (Neighbor{e, a}));
}

TEST(GraphTest, IndexesFindNodes) {
  Graph g;
  const auto a = g.create_node({"A", "B"}, {{"name", std::string("x")}});
  const auto b = g.create_node({"B"}, {{"name", std::string("x")}});
  g.create_node({"C"}, {{"name", std::string("y")}});
  const auto with_b = g.nodes_with_label("B");
  EXPECT_EQ(std::vector<NodeId>(with_b.begin(), with_b.end()), (std::vector<NodeId>{a, b}));
  EXPECT_EQ(g.find_by_property("name", std::string("x")), (std::vector<NodeId>{a, b}));
  EXPECT_TRUE(g.nodes_with_label("missing").empty());
}

TEST(GraphTest, FindEdge) {
  Graph g;
  const auto a = g.create_node({"A"}, {});
  const auto b = g.create_node({"A"}, {});
  const auto e = g.create_edge("R", a, b);
  EXPECT_EQ(g.find_edge("R", a, b), e);
  EXPECT_FALSE(g.find_edge("R", b, a).has_value());
  EXPECT_FALSE(g.find_edge("S", a, b).has_value());
}

TEST(GraphTest, DescendantsRespectDepthAndType) {
  Graph g;
  std::vector<NodeId> n;
  for (int i = 0; i < 5; ++i) n.push_back(g.create_node({"Part"}, {}));
  g.create_edge("HAS_CHILD", n[0], n[1]);
  g.create_edge("HAS_CHILD", n[1], n[2]);
  g.create_edge("HAS_CHILD", n[2], n[3]);
  g.create_edge("OTHER", n[0], n[4]);
  EXPECT_EQ(g.descendants(n[0], "HAS_CHILD"), (std::vector<NodeId>{n[1], n[2], n[3]}));
  EXPECT_EQ(g.descendants(n[0], "HAS_CHILD", 1), (std::vector<NodeId>{n[1]}));
  EXPECT_EQ(code_of([&] { g.descendants(n[0], "HAS_CHILD", 0); }), ErrorCode::kInvalidArgument);
}

TEST(GraphTest, ApplyBatchRollsBackOnThrow) {
  Graph g;
  g.create_node({"A"}, {});
  const Graph before = g;
  EXPECT_THROW(g.apply_batch([](Graph& x) {
    const auto n = x.create_node({"B"}, {{"k", std::string("v")}});
    x.create_edge("R", n, NodeId{0});
    throw std::runtime_error("boom");
  }),
               std::runtime_error);
  EXPECT_EQ(g, before);
  EXPECT_TRUE(g.find_by_property("k", std::string("v")).empty());
  EXPECT_TRUE(g.nodes_with_label("B").empty());
  EXPECT_TRUE(g.out_edges(NodeId{0}).empty());
  EXPECT_TRUE(g.in_edges(NodeId{0}).empty());
}

TEST(GraphTest, RestoreRequiresNextId) {
  Graph g;
  EXPECT_EQ(code_of([&] { g.restore_node(Node{NodeId{1}, {"A"}, {}}); }), ErrorCode::kInvalidArgument);
  g.restore_node(Node{NodeId{0}, {"A"}, {}});
  EXPECT_EQ(code_of([&] { g.restore_edge(Edge{EdgeId{0}, "R", NodeId{0}, NodeId{4}, {}}); }),
            ErrorCode::kDanglingEndpoint);
}

TEST(SchemaTest, EnsureSchemaIsIdempotent) {
  Graph g;
  schema::ensure_schema(g);
  const auto nodes = g.node_count();
  const auto edges = g.edge_count();
  schema::ensure_schema(g);
  EXPECT_EQ(g.node_count(), nodes);
  EXPECT_EQ(g.edge_count(), edges);
  EXPECT_EQ(nodes, schema::kInstanceLabels.size());
}

TEST(SchemaTest, InstancesLinkToConcept) {
  Graph g;
  const auto p = schema::upsert_instance(g, schema::kPart, "part:1", {{"id", std::string("1")}});
  const auto again = schema::upsert_instance(g, schema::kPart, "part:1", {});
  EXPECT_TRUE(p.created);
  EXPECT_FALSE(again.created);
  const auto out = g.neighbors(p.id, Direction::kOut, schema::kInstanceOf);
  ASSERT_EQ(out.size(), 1u);
  EXPECT_TRUE(g.node(out[0].node).has_label(schema::kConcept));
  EXPECT_EQ(text_prop(g.node(out[0].node).props, "name"), "Part");
}

TEST(SnapshotTest, EmptyGraphRoundTrip) {
  const Graph g;
  EXPECT_EQ(parse_snapshot(serialize_snapshot(g)), g);
}

TEST(SnapshotTest, FileRoundTripPreservesIdsAndKinds) {
  testing::TempDir dir;
  Graph g;
  const auto a = g.create_node({"A", "B"}, {{"d", 1.0}, {"i", std::int64_t{1}}, {"s", std::string("é\n\"")}});
  const auto b = g.create_node({"C"}, {{"flag", false}});
  g.create_edge("R", a, b, {{"w", 0.25}});
  g.create_edge("R", b, b);
  EXPECT_EQ(snapshot_save(g, dir / "g.jsonl"), 4u);
  const Graph back = snapshot_load(dir / "g.jsonl");
  EXPECT_EQ(back, g);
  EXPECT_EQ(kind_of(back.node(a).props.at("d")), PropertyKind::kNumber);
}

TEST(SnapshotTest, HeaderChecks) {
  EXPECT_EQ(code_of([] { parse_snapshot("{\"format\":\"other\",\"version\":1}\n"); }),
            ErrorCode::kFormatVersionMismatch);
  EXPECT_EQ(code_of([] { parse_snapshot("{\"format\":\"fountain-graph\",\"version\":2}\n"); }),
            ErrorCode::kFormatVersionMismatch);
  EXPECT_EQ(code_of([] { parse_snapshot(""); }), ErrorCode::kCorruptRecord);
}

TEST(SnapshotTest, DetectsTruncation) {
  Graph g;
  g.create_node({"A"}, {});
  g.create_node({"A"}, {});
  const std::string text = serialize_snapshot(g);
  // Cut at a line boundary: the header count exposes it.
  const auto cut = text.rfind('\n', text.size() - 2);
  EXPECT_EQ(code_of([&] { parse_snapshot(text.substr(0, cut + 1)); }), ErrorCode::kCorruptRecord);
  // Cut mid-line.
  EXPECT_EQ(code_of([&] { parse_snapshot(text.substr(0, text.size() - 3)); }),
            ErrorCode::kCorruptRecord);
}

TEST(SnapshotTest, CorruptRecordReportsLine) {
  const std::string text =
      "{\"format\":\"fountain-graph\",\"version\":1}\n"
      "{\"kind\":\"node\",\"id\":0,\"labels\":[\"A\"],\"props\":{}}\n"
      "{\"kind\":\"node\",\"id\":5,\"labels\":[\"A\"],\"props\":{}}\n";
  try {
    parse_snapshot(text);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kCorruptRecord);
    EXPECT_EQ(e.details().at("line"), 3);
  }
}

TEST(SnapshotTest, MissingFileIsIoError) {
  testing::TempDir dir;
  EXPECT_EQ(code_of([&] { snapshot_load(dir / "absent"); }), ErrorCode::kIoError);
}

TEST(GraphProperty, SnapshotRoundTripOnRandomGraphs) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 50; ++i) {
    const Graph g = testing::random_graph(rng, 40, 80);
    const Graph back = parse_snapshot(serialize_snapshot(g));
    ASSERT_EQ(back, g) << "graph " << i;
  }
}

TEST(GraphProperty, BothNeighborsAreMergedInAndOut) {
  std::mt19937_64 rng(12);
  for (int i = 0; i < 30; ++i) {
    const Graph g = testing::random_graph(rng, 20, 60);
    for (const auto& n : g.nodes()) {
      auto expected = g.neighbors(n.id, Direction::kOut);
      for (const auto& x : g.neighbors(n.id, Direction::kIn)) expected.push_back(x);
      std::stable_sort(expected.begin(), expected.end(),
                       [](const Neighbor& a, const Neighbor& b) { return a.edge < b.edge; });
      ASSERT_EQ(g.neighbors(n.id, Direction::kBoth), expected);
      for (const auto& x : g.neighbors(n.id, Direction::kOut, "R")) {
        ASSERT_EQ(g.edge(x.edge).type, "R");
        ASSERT_EQ(g.edge(x.edge).from, n.id);
      }
    }
  }
}

TEST(GraphProperty, DescendantsMatchBreadthFirstOracle) {
  std::mt19937_64 rng(13);
  for (int i = 0; i < 30; ++i) {
    const Graph g = testing::random_graph(rng, 25, 50);
    for (const auto& n : g.nodes()) {
      for (const std::size_t depth : {std::size_t{1}, std::size_t{2}, kUnlimitedDepth}) {
        std::set<NodeId> seen{n.id};
        std::deque<std::pair<NodeId, std::size_t>> q{{n.id, 0}};
        while (!q.empty()) {
          const auto [cur, d] = q.front();
          q.pop_front();
          if (d == depth) continue;
          for (const auto& e : g.edges()) {
            if (e.from == cur && e.type == "S" && seen.insert(e.to).second) q.push_back({e.to, d + 1});
          }
        }
        seen.erase(n.id);
        ASSERT_EQ(g.descendants(n.id, "S", depth), std::vector<NodeId>(seen.begin(), seen.end()));
      }
    }
  }
}

TEST(GraphProperty, RollbackRestoresAnyPrefix) {
  std::mt19937_64 rng(14);
  for (int i = 0; i < 20; ++i) {
    Graph g = testing::random_graph(rng, 15, 30);
    const Graph base = g;
    const auto m = g.mark();
    const Graph extra = testing::random_graph(rng, 15, 0);
    for (const auto& n : extra.nodes()) g.create_node(n.labels, n.props);
    g.create_edge("R", NodeId{0}, NodeId{g.node_count() - 1});
    g.rollback(m);
    ASSERT_EQ(g, base);
    ASSERT_EQ(parse_snapshot(serialize_snapshot(g)), base);
  }
}

}  // namespace
}  // namespace fountain::graph
