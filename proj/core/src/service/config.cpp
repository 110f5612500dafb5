#include "fountain/service/config.hpp"

#include "fountain/error.hpp"
#include "fountain/io.hpp"

namespace fountain::service {

namespace {

std::filesystem::path resolve(const std::filesystem::path& p, const std::filesystem::path& base) {
  if (p.is_absolute() || base.empty()) return p;
  return base / p;
}

}  // namespace

ServiceConfig ServiceConfig::from_json(const nlohmann::json& j, const std::filesystem::path& base_dir) {
  ServiceConfig c;
  try {
    if (!j.is_object()) throw Error(ErrorCode::kInvalidArgument, "config must be a JSON object");
    if (j.contains("listen")) {
      const auto listen = j.at("listen").get<std::string>();
      const auto colon = listen.rfind(':');
      if (colon == std::string::npos) {
        throw Error(ErrorCode::kInvalidArgument, "listen must be host:port, got '" + listen + "'");
      }
      c.host = listen.substr(0, colon);
      c.port = std::stoi(listen.substr(colon + 1));
      if (c.port < 0 || c.port > 65535) throw Error(ErrorCode::kInvalidArgument, "port out of range");
    }
    if (j.contains("data_dir")) c.data_dir = resolve(j.at("data_dir").get<std::string>(), base_dir);
    c.provider = j.value("provider", c.provider);
    if (c.provider.starts_with("lookup:")) {
      c.provider = "lookup:" + resolve(c.provider.substr(7), base_dir).string();
    }
    if (j.contains("synonyms") && !j.at("synonyms").is_null()) {
      c.synonyms_path = resolve(j.at("synonyms").get<std::string>(), base_dir);
    }
    if (j.contains("linker")) {
      const auto& l = j.at("linker");
      c.linker.tau_link = l.value("tau_link", c.linker.tau_link);
      c.linker.tau_claim = l.value("tau_claim", c.linker.tau_claim);
      c.linker.top_k = l.value("top_k", c.linker.top_k);
      if (l.contains("scope_depth") && !l.at("scope_depth").is_null()) {
        c.linker.scope_depth = l.at("scope_depth").get<std::size_t>();
      }
    }
    c.snapshot_interval_seconds = j.value("snapshot_interval_seconds", c.snapshot_interval_seconds);
    c.sync_writes = j.value("sync_writes", c.sync_writes);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kInvalidArgument, std::string("invalid config: ") + e.what());
  } catch (const std::logic_error& e) {
    throw Error(ErrorCode::kInvalidArgument, std::string("invalid config: ") + e.what());
  }
  c.linker.validate();
  return c;
}

ServiceConfig ServiceConfig::load(const std::filesystem::path& path) {
  const std::string text = io::read_file(path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kInvalidArgument, "config " + path.string() + ": " + e.what());
  }
  return from_json(j, path.parent_path());
}

nlohmann::json ServiceConfig::to_json() const {
  nlohmann::json linker_json{{"tau_link", linker.tau_link},
                             {"tau_claim", linker.tau_claim},
                             {"top_k", linker.top_k}};
  linker_json["scope_depth"] = linker.scope_depth == graph::kUnlimitedDepth
                                   ? nlohmann::json(nullptr)
                                   : nlohmann::json(linker.scope_depth);
  nlohmann::json j{{"listen", host + ":" + std::to_string(port)},
                   {"data_dir", data_dir.string()},
                   {"provider", provider},
                   {"linker", linker_json},
                   {"snapshot_interval_seconds", snapshot_interval_seconds},
                   {"sync_writes", sync_writes}};
  j["synonyms"] = synonyms_path ? nlohmann::json(synonyms_path->string()) : nlohmann::json(nullptr);
  return j;
}

}  // namespace fountain::service
