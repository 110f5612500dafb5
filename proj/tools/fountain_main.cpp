// fountain: command line front-end for the deviation-risk assistant.
//
//   fountain serve --config <path>
//   fountain ingest {bom|fmea|claims|synonyms} <file> --data <dir> [--allow-orphans]
//   fountain eval {suitability|negation} --provider <url|test|lookup:path> [--json]
//   fountain snapshot --data <dir>
//   fountain query '<MATCH ...>' --data <dir> [--param name=value ...]
//   fountain stats --data <dir>
//
// --data defaults to $FOUNTAIN_DATA. eval exits 3 when the gate fails.

#include <csignal>
#include <cstdlib>
#include <iostream>
#include <pthread.h>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "fountain/error.hpp"
#include "fountain/eval/suitability.hpp"
#include "fountain/graph/snapshot.hpp"
#include "fountain/io.hpp"
#include "fountain/query/executor.hpp"
#include "fountain/service/http_server.hpp"
#include "fountain/service/service.hpp"

namespace {

using fountain::Error;
using nlohmann::json;

constexpr int kGateFailed = 3;

std::string default_data_dir() {
  const char* env = std::getenv("FOUNTAIN_DATA");
  return env != nullptr ? env : "";
}

void print_json(const json& j) {
  std::cout << j.dump(2, ' ', false, json::error_handler_t::replace) << "\n";
}

int report(const fountain::service::Response& r) {
  if (r.status >= 400) {
    std::cerr << r.body.dump(2, ' ', false, json::error_handler_t::replace) << "\n";
    return 1;
  }
  print_json(r.body);
  return 0;
}

fountain::service::ServiceConfig local_config(const std::string& data_dir, const std::string& provider) {
  if (data_dir.empty()) {
    throw Error(fountain::ErrorCode::kInvalidArgument, "no data directory: pass --data or set FOUNTAIN_DATA");
  }
  fountain::service::ServiceConfig config;
  config.data_dir = data_dir;
  config.provider = provider;
  return config;
}

int run_serve(const std::string& config_path, const std::string& data_override, int port_override) {
  auto config = config_path.empty() ? fountain::service::ServiceConfig{}
                                    : fountain::service::ServiceConfig::load(config_path);
  if (!data_override.empty()) config.data_dir = data_override;
  if (port_override >= 0) config.port = port_override;

  // Block the stop signals everywhere; a dedicated thread waits for them.
  sigset_t stop_signals;
  sigemptyset(&stop_signals);
  sigaddset(&stop_signals, SIGINT);
  sigaddset(&stop_signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &stop_signals, nullptr);

  fountain::service::Service service(config);
  fountain::service::HttpServer server(service);
  const int port = server.bind(config.host, config.port);
  fountain::io::write_file_atomic(config.data_dir / "server.port", std::to_string(port) + "\n");
  std::cout << "listening on " << config.host << ":" << port << std::endl;

  std::thread waiter([&] {
    int sig = 0;
    sigwait(&stop_signals, &sig);
    server.stop();
  });
  server.listen();
  // listen() only returns after stop(); a failed listen needs the waiter woken.
  pthread_kill(waiter.native_handle(), SIGTERM);
  waiter.join();
  return 0;
}

int run_eval(const std::string& which, const std::string& provider_selector, const std::string& groups_path,
             const std::string& spec_path, bool as_json) {
  const auto provider = fountain::embed::make_provider(provider_selector);
  fountain::eval::SuitabilityReport report;
  if (which == "negation" && groups_path.empty() && spec_path.empty()) {
    report = fountain::eval::run_negation(*provider);
  } else {
    const auto groups = groups_path.empty()
                            ? fountain::eval::SentenceGroupSet::builtin()
                            : fountain::eval::SentenceGroupSet::parse_csv(fountain::io::read_file(groups_path));
    const auto& fallback = which == "negation" ? fountain::eval::CheckSpec::builtin_negation()
                                               : fountain::eval::CheckSpec::builtin_suitability();
    const auto spec = spec_path.empty()
                          ? fallback
                          : fountain::eval::CheckSpec::from_json(json::parse(fountain::io::read_file(spec_path)));
    report = fountain::eval::run_suitability(*provider, groups, spec);
  }
  if (as_json) {
    print_json(report.to_json());
  } else {
    std::cout << report.to_text();
  }
  return report.pass ? 0 : kGateFailed;
}

int run_query(const std::string& text, const std::vector<std::string>& params, const std::string& data_dir) {
  fountain::query::QueryParams bound;
  for (const auto& p : params) {
    const auto eq = p.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw Error(fountain::ErrorCode::kInvalidArgument, "--param expects name=value, got '" + p + "'");
    }
    const std::string value = p.substr(eq + 1);
    fountain::graph::PropertyValue v = value;
    try {
      v = fountain::graph::from_json_value(json::parse(value));
    } catch (const std::exception&) {
      // Not a JSON scalar: keep it as text.
    }
    bound.emplace(p.substr(0, eq), std::move(v));
  }
  fountain::service::Service service(local_config(data_dir, "test"));
  const auto rows = service.read_graph([&](const fountain::graph::Graph& g) {
    json out = json::array();
    for (const auto& row : fountain::query::run(text, bound, g)) {
      json r = json::array();
      for (const auto& cell : row) {
        if (const auto* n = std::get_if<fountain::graph::NodeId>(&cell)) {
          r.push_back(fountain::graph::node_record(g.node(*n)));
        } else if (const auto* e = std::get_if<fountain::graph::EdgeId>(&cell)) {
          r.push_back(fountain::graph::edge_record(g.edge(*e)));
        } else if (const auto* v = std::get_if<fountain::graph::PropertyValue>(&cell)) {
          r.push_back(fountain::graph::to_json_value(*v));
        } else {
          r.push_back(nullptr);
        }
      }
      out.push_back(std::move(r));
    }
    return out;
  });
  print_json(rows);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fountain: deviation-risk assistant"};
  app.require_subcommand(1);

  auto* serve = app.add_subcommand("serve", "run the HTTP service");
  std::string config_path;
  std::string serve_data;
  int serve_port = -1;
  serve->add_option("--config", config_path, "service config JSON")->check(CLI::ExistingFile);
  serve->add_option("--data", serve_data, "override the config's data directory");
  serve->add_option("--port", serve_port, "override the listen port (0 = ephemeral)");

  auto* ingest = app.add_subcommand("ingest", "load a CSV export into the data directory");
  std::string kind;
  std::string file;
  std::string data_dir = default_data_dir();
  std::string provider = "test";
  bool allow_orphans = false;
  ingest->add_option("kind", kind, "bom | fmea | claims | synonyms")
      ->required()
      ->check(CLI::IsMember({"bom", "fmea", "claims", "synonyms"}));
  ingest->add_option("file", file, "CSV file")->required()->check(CLI::ExistingFile);
  ingest->add_option("--data", data_dir, "data directory (default $FOUNTAIN_DATA)");
  ingest->add_option("--provider", provider, "embedding provider used to warm the cache");
  ingest->add_flag("--allow-orphans", allow_orphans, "create placeholder parts for unknown part ids");

  auto* eval = app.add_subcommand("eval", "run a model-suitability check");
  std::string check;
  std::string eval_provider = "test";
  std::string groups_path;
  std::string spec_path;
  bool as_json = false;
  eval->add_option("check", check, "suitability | negation")
      ->required()
      ->check(CLI::IsMember({"suitability", "negation"}));
  eval->add_option("--provider", eval_provider, "test | lookup:<path> | http://host:port");
  eval->add_option("--groups", groups_path, "sentence groups CSV (group,id,sentence)")->check(CLI::ExistingFile);
  eval->add_option("--spec", spec_path, "check spec JSON")->check(CLI::ExistingFile);
  eval->add_flag("--json", as_json, "print the JSON report");

  auto* snapshot = app.add_subcommand("snapshot", "write a graph snapshot and truncate the journal");
  snapshot->add_option("--data", data_dir, "data directory (default $FOUNTAIN_DATA)");

  auto* query = app.add_subcommand("query", "run a read-only graph query");
  std::string query_text;
  std::vector<std::string> params;
  query->add_option("text", query_text, "MATCH ... RETURN ...")->required();
  query->add_option("--data", data_dir, "data directory (default $FOUNTAIN_DATA)");
  query->add_option("--param", params, "name=value (value parsed as JSON when possible)");

  auto* stats = app.add_subcommand("stats", "summarize recorded feedback");
  stats->add_option("--data", data_dir, "data directory (default $FOUNTAIN_DATA)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*serve) return run_serve(config_path, serve_data, serve_port);
    if (*ingest) {
      fountain::service::Service service(local_config(data_dir, provider));
      return report(service.ingest(kind, fountain::io::read_file(file), allow_orphans));
    }
    if (*eval) return run_eval(check, eval_provider, groups_path, spec_path, as_json);
    if (*snapshot) {
      fountain::service::Service service(local_config(data_dir, "test"));
      return report(service.snapshot());
    }
    if (*query) return run_query(query_text, params, data_dir);
    if (*stats) {
      fountain::service::Service service(local_config(data_dir, "test"));
      return report(service.feedback_stats());
    }
  } catch (const Error& e) {
    std::cerr << fountain::service::error_body(e).dump(2, ' ', false, json::error_handler_t::replace) << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "fountain: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
