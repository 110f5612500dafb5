#include "fountain/eval/suitability.hpp"

#include <algorithm>
#include <cstdio>
#include <map>

#include "fountain/error.hpp"
#include "fountain/eval/builtin_fixtures.hpp"

namespace fountain::eval {

namespace {

std::vector<IdPair> pairs_from_json(const nlohmann::json& j) {
  std::vector<IdPair> out;
  for (const auto& p : j) {
    if (!p.is_array() || p.size() != 2) {
      throw Error(ErrorCode::kInvalidArgument, "check pairs must be two-element arrays");
    }
    out.push_back({p[0].get<std::string>(), p[1].get<std::string>()});
  }
  return out;
}

nlohmann::json pairs_to_json(const std::vector<IdPair>& pairs) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& p : pairs) arr.push_back({p.first, p.second});
  return arr;
}

nlohmann::json optional_number(const std::optional<double>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

std::string fixed3(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3f", v);
  return buf;
}

std::string pad(std::string s, std::size_t width) {
  if (s.size() < width) s.insert(0, width - s.size(), ' ');
  return s;
}

}  // namespace

CheckSpec CheckSpec::from_json(const nlohmann::json& j) {
  try {
    CheckSpec spec;
    spec.name = j.value("name", std::string("check"));
    const auto& groups = j.at("groups");
    if (!groups.is_array() || groups.size() != 2) {
      throw Error(ErrorCode::kInvalidArgument, "check spec needs exactly two groups");
    }
    spec.row_group = groups[0].get<std::string>();
    spec.column_group = groups[1].get<std::string>();
    spec.delta = j.value("delta", 0.15);
    spec.tau = j.value("tau", 0.45);
    spec.expected_high = pairs_from_json(j.value("expected_high", nlohmann::json::array()));
    spec.expected_low = pairs_from_json(j.value("expected_low", nlohmann::json::array()));
    if (spec.delta < 0.0) throw Error(ErrorCode::kInvalidArgument, "delta must be non-negative");
    return spec;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kInvalidArgument, std::string("invalid check spec: ") + e.what());
  }
}

nlohmann::json CheckSpec::to_json() const {
  return {{"name", name},
          {"groups", {row_group, column_group}},
          {"delta", delta},
          {"tau", tau},
          {"expected_high", pairs_to_json(expected_high)},
          {"expected_low", pairs_to_json(expected_low)}};
}

const CheckSpec& CheckSpec::builtin_suitability() {
  static const CheckSpec spec = from_json(nlohmann::json::parse(builtin::suitability_check_json()));
  return spec;
}

const CheckSpec& CheckSpec::builtin_negation() {
  static const CheckSpec spec = from_json(nlohmann::json::parse(builtin::negation_check_json()));
  return spec;
}

bool gate_passes(std::optional<double> min_high, std::optional<double> max_low, double delta,
                 double tau) {
  if (min_high && *min_high < tau) return false;
  if (max_low && !(*max_low < tau)) return false;
  if (min_high && max_low && *min_high - *max_low < delta) return false;
  return true;
}

std::vector<IdPair> SuitabilityReport::flagged_high() const {
  std::vector<IdPair> out;
  for (const auto& p : pairs) {
    if (p.expected_high && !p.within_threshold) out.push_back(p.pair);
  }
  return out;
}

nlohmann::json SuitabilityReport::to_json() const {
  nlohmann::json j;
  j["check"] = check;
  j["provider"] = provider;
  j["fingerprint"] = fingerprint;
  j["rows"] = row_ids;
  j["columns"] = column_ids;
  j["matrix"] = matrix;
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& p : pairs) {
    arr.push_back({{"pair", {p.pair.first, p.pair.second}},
                   {"expected", p.expected_high ? "high" : "low"},
                   {"similarity", p.similarity},
                   {"within_threshold", p.within_threshold}});
  }
  j["pairs"] = arr;
  j["min_high"] = optional_number(min_high);
  j["max_low"] = optional_number(max_low);
  j["separation"] = optional_number(separation);
  j["delta"] = delta;
  j["tau"] = tau;
  j["pass"] = pass;
  j["flagged_high"] = pairs_to_json(flagged_high());
  return j;
}

std::string SuitabilityReport::to_text() const {
  std::size_t width = 6;
  for (const auto& id : row_ids) width = std::max(width, id.size());
  for (const auto& id : column_ids) width = std::max(width, id.size());
  width += 1;
  std::string out = pad("", width);
  for (const auto& c : column_ids) out += pad(c, width);
  out += "\n";
  for (std::size_t r = 0; r < row_ids.size(); ++r) {
    out += pad(row_ids[r], width);
    for (const double v : matrix[r]) out += pad(fixed3(v), width);
    out += "\n";
  }
  out += "\n";
  for (const auto& p : pairs) {
    out += std::string(p.expected_high ? "high " : "low  ") + pad(p.pair.first, width) +
           pad(p.pair.second, width) + pad(fixed3(p.similarity), width) + "  " +
           (p.within_threshold ? "ok" : (p.expected_high ? "BELOW tau" : "NOT below tau")) + "\n";
  }
  const auto show = [](const std::optional<double>& v) { return v ? fixed3(*v) : std::string("n/a"); };
  out += "min_high " + show(min_high) + "  max_low " + show(max_low) + "  separation " +
         show(separation) + "  delta " + fixed3(delta) + "  tau " + fixed3(tau) + "\n";
  out += std::string(pass ? "PASS" : "FAIL") + " " + check + "\n";
  return out;
}

SuitabilityReport run_suitability(const embed::EmbeddingProvider& provider,
                                  const SentenceGroupSet& groups, const CheckSpec& spec) {
  const auto& rows = groups.group(spec.row_group);
  const auto& cols = groups.group(spec.column_group);

  std::vector<std::string> ids;
  std::vector<std::string> texts;
  std::map<std::string, std::size_t> slot;
  const auto add = [&](const Sentence& s) {
    if (slot.emplace(s.id, ids.size()).second) {
      ids.push_back(s.id);
      texts.push_back(s.text);
    }
  };
  for (const auto& s : rows.sentences) add(s);
  for (const auto& s : cols.sentences) add(s);
  for (const auto* list : {&spec.expected_high, &spec.expected_low}) {
    for (const auto& p : *list) {
      for (const auto& id : {p.first, p.second}) {
        const Sentence* s = groups.find(id);
        if (s == nullptr) {
          throw Error(ErrorCode::kUnknownPairId, "check pair names unknown sentence '" + id + "'",
                      {{"id", id}});
        }
        add(*s);
      }
    }
  }
  const auto vectors = provider.embed_batch(texts);
  const auto sim = [&](const std::string& a, const std::string& b) {
    return embed::cosine(vectors[slot.at(a)], vectors[slot.at(b)]);
  };

  const auto descriptor = provider.descriptor();
  SuitabilityReport report;
  report.check = spec.name;
  report.provider = descriptor.name;
  report.fingerprint = descriptor.fingerprint;
  report.delta = spec.delta;
  report.tau = spec.tau;
  for (const auto& s : rows.sentences) report.row_ids.push_back(s.id);
  for (const auto& s : cols.sentences) report.column_ids.push_back(s.id);
  for (const auto& r : report.row_ids) {
    std::vector<double> line;
    for (const auto& c : report.column_ids) line.push_back(sim(r, c));
    report.matrix.push_back(std::move(line));
  }
  for (const auto& p : spec.expected_high) {
    const double s = sim(p.first, p.second);
    report.pairs.push_back({p, true, s, s >= spec.tau});
    report.min_high = report.min_high ? std::min(*report.min_high, s) : s;
  }
  for (const auto& p : spec.expected_low) {
    const double s = sim(p.first, p.second);
    report.pairs.push_back({p, false, s, s < spec.tau});
    report.max_low = report.max_low ? std::max(*report.max_low, s) : s;
  }
  if (report.min_high && report.max_low) report.separation = *report.min_high - *report.max_low;
  report.pass = gate_passes(report.min_high, report.max_low, spec.delta, spec.tau);
  return report;
}

SuitabilityReport run_negation(const embed::EmbeddingProvider& provider) {
  return run_suitability(provider, SentenceGroupSet::builtin(), CheckSpec::builtin_negation());
}

}  // namespace fountain::eval
