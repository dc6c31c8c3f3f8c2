#include "trustwire/scenario.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace trustwire {

using json = nlohmann::ordered_json;

namespace {

constexpr std::string_view kFormat = "trustwire-scenario v1";

std::size_t parse_index(std::string_view text, std::string_view what) {
  if (text.empty()) throw ConfigError("missing " + std::string(what));
  std::size_t value = 0;
  for (char c : text) {
    if (c < '0' || c > '9') throw ConfigError("bad " + std::string(what) + " '" + std::string(text) + "'");
    value = value * 10 + static_cast<std::size_t>(c - '0');
  }
  return value;
}

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  for (;;) {
    const std::size_t end = text.find(sep, start);
    parts.push_back(text.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start));
    if (end == std::string_view::npos) break;
    start = end + 1;
  }
  return parts;
}

AgencyId agency_field(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key) || !j[key].is_string()) throw ConfigError(where + ": missing string '" + key + "'");
  try {
    return AgencyId(j[key].get<std::string>());
  } catch (const Error& e) {
    throw ConfigError(where + ": " + e.what());
  }
}

std::vector<std::string> item_list(const json& j, const std::string& where) {
  if (!j.is_array()) throw ConfigError(where + " must be an array");
  std::vector<std::string> out;
  for (const auto& v : j) {
    if (v.is_string()) {
      out.push_back(v.get<std::string>());
    } else if (v.is_number_integer()) {
      out.push_back(std::to_string(v.get<long long>()));
    } else {
      throw ConfigError(where + " entries must be strings or integers");
    }
  }
  return out;
}

json item_json(const std::vector<std::string>& items) {
  json arr = json::array();
  for (const auto& item : items) {
    // Integers written as numbers again so files round-trip in the form they were authored.
    const bool numeric = !item.empty() && item.size() < 18 &&
                         item.find_first_not_of("0123456789") == std::string::npos && (item == "0" || item[0] != '0');
    if (numeric) {
      arr.push_back(std::stoll(item));
    } else {
      arr.push_back(item);
    }
  }
  return arr;
}

Expectation parse_expectation(const json& j, const std::string& where) {
  if (j.is_string() && j.get<std::string>() == "ok") return Expectation{true, {}};
  if (j.is_string() && j.get<std::string>() == "error") return Expectation{false, {}};
  if (j.is_array()) {
    Expectation e{false, {}};
    for (const auto& name : j) {
      if (!name.is_string()) throw ConfigError(where + ": expect entries must be strings");
      e.errors.push_back(parse_error_class(name.get<std::string>()));
    }
    return e;
  }
  throw ConfigError(where + ": expect must be \"ok\", \"error\" or a list of error classes");
}

json expectation_json(const Expectation& e) {
  if (e.ok) return "ok";
  if (e.errors.empty()) return "error";
  json arr = json::array();
  for (auto cls : e.errors) arr.push_back(std::string(error_class_name(cls)));
  return arr;
}

std::string_view status_name(AccountStatus s) { return s == AccountStatus::Active ? "active" : "pending"; }

}  // namespace

Fault Fault::parse(std::string_view spec) {
  const auto parts = split(spec, ':');
  Fault fault;
  if (parts[0] == "flip-byte") {
    if (parts.size() < 2 || parts.size() > 4) throw ConfigError("flip-byte needs an index: flip-byte:K[:request|response][:wire|envelope]");
    fault.kind = FaultKind::FlipByte;
    fault.byte_index = parse_index(parts[1], "byte index");
    for (std::size_t i = 2; i < parts.size(); ++i) {
      if (parts[i] == "request") {
        fault.message = FaultMessage::Request;
      } else if (parts[i] == "response") {
        fault.message = FaultMessage::Response;
      } else if (parts[i] == "wire") {
        fault.layer = FaultLayer::Wire;
      } else if (parts[i] == "envelope") {
        fault.layer = FaultLayer::Envelope;
      } else {
        throw ConfigError("unknown flip-byte option '" + std::string(parts[i]) + "'");
      }
    }
  } else if (parts[0] == "swap") {
    if (parts.size() != 2) throw ConfigError("swap needs a partner row: swap:J");
    fault.kind = FaultKind::SwapResponses;
    fault.partner_row = parse_index(parts[1], "partner row");
  } else if (parts[0] == "replay" && parts.size() == 1) {
    fault.kind = FaultKind::ReplayResponse;
  } else if (parts[0] == "wrong-target-key" && parts.size() == 1) {
    fault.kind = FaultKind::WrongTargetKey;
  } else {
    throw ConfigError("unknown fault '" + std::string(spec) + "'");
  }
  return fault;
}

std::string Fault::to_string() const {
  switch (kind) {
    case FaultKind::FlipByte:
      return "flip-byte:" + std::to_string(byte_index) + (message == FaultMessage::Request ? ":request" : ":response") +
             (layer == FaultLayer::Wire ? ":wire" : ":envelope");
    case FaultKind::SwapResponses:
      return "swap:" + std::to_string(partner_row);
    case FaultKind::ReplayResponse:
      return "replay";
    case FaultKind::WrongTargetKey:
      return "wrong-target-key";
  }
  return {};
}

const AgencySpec* Scenario::agency(const AgencyId& id) const {
  for (const auto& a : agencies) {
    if (a.id == id) return &a;
  }
  return nullptr;
}

AgencySpec* Scenario::agency(const AgencyId& id) {
  return const_cast<AgencySpec*>(std::as_const(*this).agency(id));
}

std::vector<std::string> Scenario::problems() const {
  std::vector<std::string> out;
  if (key_bits < 32 || key_bits % 2 != 0) out.push_back("key_bits must be even and at least 32");
  if (!(general_user_trust >= 0.0 && general_user_trust <= 1.0)) out.push_back("general_user_trust must lie in [0, 1]");

  std::set<AgencyId> ids;
  for (const auto& a : agencies) {
    if (!ids.insert(a.id).second) out.push_back("duplicate agency " + a.id.str());
  }
  std::set<std::pair<AgencyId, AgencyId>> pairs;
  for (const auto& t : trust) {
    const std::string name = t.source.str() + "->" + t.target.str();
    if (!ids.contains(t.source) || !ids.contains(t.target)) out.push_back("trust " + name + " names an undefined agency");
    if (t.source == t.target) out.push_back("trust " + name + " is reflexive");
    if (!pairs.insert({t.source, t.target}).second) out.push_back("duplicate trust record " + name);
    if (!(t.trust_level >= 0.0 && t.trust_level <= 1.0)) out.push_back("trust " + name + " level out of range");
    for (const auto& [code, level] : t.overrides) {
      if (!(level >= 0.0 && level <= 1.0)) out.push_back("trust " + name + " override " + code + " out of range");
    }
  }
  for (std::size_t i = 0; i < script.size(); ++i) {
    const auto& row = script[i];
    const std::string where = "script row " + std::to_string(i);
    if (!ids.contains(row.source)) out.push_back(where + ": undefined source " + row.source.str());
    if (!ids.contains(row.target)) out.push_back(where + ": undefined target " + row.target.str());
    if (row.source == row.target) out.push_back(where + ": source and target are the same agency");
    if (!pairs.contains({row.source, row.target})) {
      out.push_back(where + ": no trust record " + row.source.str() + "->" + row.target.str());
    }
    try {
      encode_query(QueryPayload{row.code, row.kind});
    } catch (const Error& e) {
      out.push_back(where + ": " + e.what());
    }
    if (row.fault && row.fault->kind == FaultKind::SwapResponses) {
      const std::size_t partner = row.fault->partner_row;
      if (partner >= script.size() || partner == i) {
        out.push_back(where + ": swap partner " + std::to_string(partner) + " is not another row");
      } else if (script[partner].source != row.source) {
        out.push_back(where + ": swap partner must share the source agency");
      }
    }
    if (row.fault && row.fault->kind == FaultKind::WrongTargetKey && ids.size() < 3) {
      out.push_back(where + ": wrong-target-key needs a third agency");
    }
  }
  return out;
}

Scenario parse_scenario(std::string_view text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("scenario is not valid JSON: ") + e.what());
  }
  try {
    if (!root.is_object()) throw ConfigError("scenario must be a JSON object");
    if (root.value("format", std::string()) != kFormat) throw ConfigError("scenario format must be \"trustwire-scenario v1\"");

    Scenario s;
    s.key_bits = root.value("key_bits", kDefaultKeyBits);
    s.general_user_trust = root.value("general_user_trust", kDefaultGeneralUserTrust);

    for (const auto& a : root.at("agencies")) {
      AgencySpec spec{agency_field(a, "id", "agency"), a.value("key_seed", std::uint64_t{0}),
                      a.value("node_seed", std::uint64_t{0}), InfoStore{}, {}};
      const std::string where = "agency " + spec.id.str();
      if (a.contains("store")) {
        for (const auto& [code, rec] : a["store"].items()) {
          InfoRecord record{item_list(rec.at("items"), where + " store " + code + " items"), {}};
          if (rec.contains("activities")) record.activities = item_list(rec["activities"], where + " activities");
          spec.store.insert(code, std::move(record));
        }
      }
      if (a.contains("users")) {
        for (const auto& u : a["users"]) {
          UserAccount account;
          account.user_id = u.at("user_id").get<std::string>();
          account.salt = from_hex(u.at("salt").get<std::string>());
          account.credential = Digest::from_hex(u.at("credential").get<std::string>());
          const std::string status = u.value("status", std::string("active"));
          if (status != "active" && status != "pending") throw ConfigError(where + ": bad account status");
          account.status = status == "active" ? AccountStatus::Active : AccountStatus::Pending;
          spec.users.push_back(std::move(account));
        }
      }
      s.agencies.push_back(std::move(spec));
    }

    for (const auto& t : root.at("trust")) {
      TrustRecord record{agency_field(t, "source", "trust"), agency_field(t, "target", "trust"),
                         t.at("level").get<double>(), MappingFunction::parse(t.at("mapping").get<std::string>()), {}};
      if (t.contains("overrides")) {
        for (const auto& [code, level] : t["overrides"].items()) record.overrides[code] = level.get<double>();
      }
      s.trust.push_back(std::move(record));
    }

    if (root.contains("script")) {
      for (const auto& r : root["script"]) {
        ExchangeSpec row{agency_field(r, "source", "script"), agency_field(r, "target", "script"),
                         r.at("code").get<std::string>(), parse_query_kind(r.value("kind", std::string("items"))),
                         std::nullopt, std::nullopt, std::nullopt};
        if (r.contains("fault")) row.fault = Fault::parse(r["fault"].get<std::string>());
        if (r.contains("expect")) row.expect = parse_expectation(r["expect"], "script");
        if (r.contains("expect_count")) row.expect_count = r["expect_count"].get<std::size_t>();
        s.script.push_back(std::move(row));
      }
    }
    return s;
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(std::string("invalid scenario: ") + e.what());
  } catch (const json::exception& e) {
    throw ConfigError(std::string("invalid scenario: ") + e.what());
  }
}

std::string serialize_scenario(const Scenario& s) {
  json root;
  root["format"] = kFormat;
  root["key_bits"] = s.key_bits;
  root["general_user_trust"] = s.general_user_trust;
  root["agencies"] = json::array();
  for (const auto& a : s.agencies) {
    json agency;
    agency["id"] = a.id.str();
    agency["key_seed"] = a.key_seed;
    agency["node_seed"] = a.node_seed;
    json store = json::object();
    for (const auto& [code, rec] : a.store.records()) {
      store[code]["items"] = item_json(rec.items);
      if (!rec.activities.empty()) store[code]["activities"] = rec.activities;
    }
    agency["store"] = store;
    if (!a.users.empty()) {
      agency["users"] = json::array();
      for (const auto& u : a.users) {
        agency["users"].push_back({{"user_id", u.user_id},
                                   {"salt", to_hex(ByteView(u.salt))},
                                   {"credential", u.credential.hex()},
                                   {"status", status_name(u.status)}});
      }
    }
    root["agencies"].push_back(std::move(agency));
  }
  root["trust"] = json::array();
  for (const auto& t : s.trust) {
    json rec{{"source", t.source.str()}, {"target", t.target.str()}, {"level", t.trust_level},
             {"mapping", t.mapping.to_string()}};
    if (!t.overrides.empty()) {
      rec["overrides"] = json::object();
      for (const auto& [code, level] : t.overrides) rec["overrides"][code] = level;
    }
    root["trust"].push_back(std::move(rec));
  }
  root["script"] = json::array();
  for (const auto& r : s.script) {
    json row{{"source", r.source.str()}, {"target", r.target.str()}, {"code", r.code},
             {"kind", std::string(query_kind_name(r.kind))}};
    if (r.fault) row["fault"] = r.fault->to_string();
    if (r.expect) row["expect"] = expectation_json(*r.expect);
    if (r.expect_count) row["expect_count"] = *r.expect_count;
    root["script"].push_back(std::move(row));
  }
  return root.dump(2) + "\n";
}

Scenario load_scenario_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open scenario file " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_scenario(buffer.str());
}

void save_scenario_file(const Scenario& scenario, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot write scenario file " + path.string());
  out << serialize_scenario(scenario);
}

std::string_view canonical_table1_text() {
  static constexpr std::string_view kText =
#include "canonical_scenario.inc"
      ;
  return kText;
}

Scenario canonical_table1_scenario() { return parse_scenario(canonical_table1_text()); }

}  // namespace trustwire
