#include <benchmark/benchmark.h>

#include "corpus.hpp"
#include "fountain/query/executor.hpp"
#include "fountain/query/parser.hpp"

namespace fountain::bench {
namespace {

void BM_QueryParse(benchmark::State& state) {
  const std::string text =
      "MATCH (p:Part {id: $part})-[:HAS_FAILURE_MODE]->(f:FailureMode)-[:HAS_CAUSE]->(c:Cause) "
      "WHERE c.text CONTAINS \"heat\" AND f.fmea_type = \"D\" RETURN f.text, c.text LIMIT 10";
  for (auto _ : state) benchmark::DoNotOptimize(query::parse(text));
}
BENCHMARK(BM_QueryParse);

void BM_QueryTwoHops(benchmark::State& state) {
  const auto g = load_corpus(make_corpus(static_cast<std::size_t>(state.range(0)),
                                         static_cast<std::size_t>(state.range(0)) * 2, 0));
  const auto ast = query::parse(
      "MATCH (p:Part)-[:HAS_FAILURE_MODE]->(f:FailureMode)-[:HAS_CAUSE]->(c:Cause) "
      "WHERE c.text CONTAINS \"heat\" RETURN p.id, f.text, c.text");
  std::size_t rows = 0;
  for (auto _ : state) {
    const auto result = query::execute(ast, {}, g);
    rows = result.size();
    benchmark::DoNotOptimize(result);
  }
  state.counters["nodes"] = static_cast<double>(g.node_count());
  state.counters["rows"] = static_cast<double>(rows);
}
BENCHMARK(BM_QueryTwoHops)->Arg(100)->Arg(1000)->Unit(benchmark::kMicrosecond);

void BM_QueryIndexedLookup(benchmark::State& state) {
  const auto g = load_corpus(make_corpus(1000, 2000, 0));
  const auto ast = query::parse("MATCH (p:Part {id: $part})-[:HAS_CHILD]->(c:Part) RETURN c.id");
  const query::QueryParams params{{"part", graph::PropertyValue{std::string("P1")}}};
  for (auto _ : state) benchmark::DoNotOptimize(query::execute(ast, params, g));
}
BENCHMARK(BM_QueryIndexedLookup)->Unit(benchmark::kMicrosecond);

}  // namespace
}  // namespace fountain::bench
