#include "trustwire/simharness.hpp"

#include <algorithm>
#include <sstream>

namespace trustwire {

namespace {

std::string join(const std::vector<std::string>& items, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += sep;
    out += items[i];
  }
  return out;
}

// Flips every bit of byte `index`. Throws ConfigError when out of range.
void flip_byte(Bytes& bytes, std::size_t index) {
  if (index >= bytes.size()) {
    throw ConfigError("byte index " + std::to_string(index) + " outside a " + std::to_string(bytes.size()) +
                      "-byte message");
  }
  bytes[index] ^= 0xFF;
}

// Opens the sealed framing, flips a plaintext byte and seals it again under
// the same public key.
Bytes flip_envelope_byte(const KeyPair& recipient, ByteView sealed, std::size_t index) {
  Bytes plain = open(recipient.priv, sealed);
  flip_byte(plain, index);
  return seal(recipient.pub, plain);
}

bool meets(const ExchangeSpec& spec, const ExchangeOutcome& outcome) {
  Expectation expect = spec.expect.value_or(Expectation{!spec.fault.has_value(), {}});
  if (expect.ok) {
    return outcome.ok && (!spec.expect_count || *spec.expect_count == outcome.items.size());
  }
  if (outcome.ok) return false;
  return expect.errors.empty() ||
         std::find(expect.errors.begin(), expect.errors.end(), *outcome.error) != expect.errors.end();
}

struct RowState {
  std::optional<std::uint64_t> request_id;
  std::optional<Bytes> response;
  std::optional<ErrorClass> error;
};

}  // namespace

Network::Network(const Scenario& scenario) : scenario_(scenario), registry_(std::make_shared<KeyRegistry>()) {
  const auto problems = scenario_.problems();
  if (!problems.empty()) throw ConfigError("invalid scenario:\n  " + join(problems, "\n  "));

  std::map<AgencyId, KeyPair> keys;
  for (const auto& a : scenario_.agencies) {
    keys.emplace(a.id, generate_keypair(scenario_.key_bits, a.key_seed));
    registry_->register_agency(a.id, keys.at(a.id).pub);
  }
  for (const auto& a : scenario_.agencies) {
    TrustPlane trust;
    for (const auto& t : scenario_.trust) {
      if (t.source == a.id || t.target == a.id) trust.add(t);
    }
    auto node = std::make_unique<AgencyNode>(NodeConfig{a.id, keys.at(a.id), registry_, std::move(trust), a.store,
                                                        a.node_seed, scenario_.general_user_trust});
    for (const auto& u : a.users) node->restore_account(u);
    nodes_.emplace(a.id, std::move(node));
  }
}

AgencyNode& Network::node(const AgencyId& id) {
  auto it = nodes_.find(id);
  if (it == nodes_.end()) throw UnknownAgencyError("no node for agency " + id.str());
  return *it->second;
}

std::vector<ExchangeOutcome> Network::run(const std::vector<ExchangeSpec>& script) {
  std::vector<RowState> rows(script.size());

  // Requests out, responses back.
  for (std::size_t i = 0; i < script.size(); ++i) {
    const ExchangeSpec& spec = script[i];
    RowState& row = rows[i];
    AgencyNode& source = node(spec.source);
    AgencyNode& target = node(spec.target);
    const QueryPayload payload{spec.code, spec.kind};
    try {
      AgencyNode::Outgoing out;
      if (spec.fault && spec.fault->kind == FaultKind::WrongTargetKey) {
        auto other = std::find_if(scenario_.agencies.begin(), scenario_.agencies.end(), [&](const AgencySpec& a) {
          return a.id != spec.source && a.id != spec.target;
        });
        out = source.send_request_sealed_for(spec.target, payload, other->id);
      } else {
        out = source.send_request(spec.target, payload);
      }
      row.request_id = out.request_id;
      if (spec.fault && spec.fault->kind == FaultKind::FlipByte && spec.fault->message == FaultMessage::Request) {
        if (spec.fault->layer == FaultLayer::Wire) {
          flip_byte(out.bytes, spec.fault->byte_index);
        } else {
          out.bytes = flip_envelope_byte(target.keys(), out.bytes, spec.fault->byte_index);
        }
      }
      const std::size_t audits_before = target.audit_log().size();
      row.response = target.handle_incoming(out.bytes);
      if (!row.response) row.error = target.audit_log().at(audits_before).error;
    } catch (const Error& e) {
      row.error = e.error_class();
    }
  }

  // Responses validated at their sources.
  std::vector<ExchangeOutcome> outcomes;
  outcomes.reserve(script.size());
  for (std::size_t i = 0; i < script.size(); ++i) {
    const ExchangeSpec& spec = script[i];
    RowState& row = rows[i];
    ExchangeOutcome outcome;
    outcome.row = i;
    outcome.source = spec.source.str();
    outcome.target = spec.target.str();
    outcome.code = spec.code;
    outcome.kind = spec.kind;
    outcome.fault = spec.fault ? spec.fault->to_string() : std::string();
    if (const AgencySpec* t = scenario_.agency(spec.target)) {
      if (const InfoRecord* rec = t->store.find(spec.code)) {
        outcome.available = spec.kind == QueryKind::Activities ? rec->activities : rec->items;
      }
    }

    // A swap fault on either side of a pair exchanges the two responses.
    std::optional<std::size_t> swap_with;
    if (spec.fault && spec.fault->kind == FaultKind::SwapResponses) swap_with = spec.fault->partner_row;
    for (std::size_t j = 0; j < script.size() && !swap_with; ++j) {
      const auto& f = script[j].fault;
      if (j != i && f && f->kind == FaultKind::SwapResponses && f->partner_row == i) swap_with = j;
    }

    if (!row.error) {
      AgencyNode& source = node(spec.source);
      try {
        std::optional<Bytes> delivered = swap_with ? rows[*swap_with].response : row.response;
        if (!delivered) throw ConfigError("swap partner produced no response");
        if (spec.fault && spec.fault->kind == FaultKind::FlipByte && spec.fault->message == FaultMessage::Response) {
          if (spec.fault->layer == FaultLayer::Wire) {
            flip_byte(*delivered, spec.fault->byte_index);
          } else {
            *delivered = flip_envelope_byte(source.keys(), *delivered, spec.fault->byte_index);
          }
        }
        SharedInfo info = source.accept_response(*row.request_id, *delivered);
        if (spec.fault && spec.fault->kind == FaultKind::ReplayResponse) {
          // The old response is offered again for a fresh request with the same parameters.
          const auto fresh = source.send_request(spec.target, QueryPayload{spec.code, spec.kind});
          info = source.accept_response(fresh.request_id, *delivered);
        }
        outcome.ok = true;
        outcome.subject_known = info.subject_known;
        outcome.items = std::move(info.items);
      } catch (const Error& e) {
        row.error = e.error_class();
      }
    }
    outcome.error = row.error;
    outcome.expectation_met = meets(spec, outcome);
    outcomes.push_back(std::move(outcome));
  }
  return outcomes;
}

std::vector<ExchangeOutcome> run_scenario(const Scenario& scenario) {
  Network network(scenario);
  return network.run(scenario.script);
}

Scenario inject_fault(Scenario scenario, std::size_t row, const Fault& fault) {
  if (row >= scenario.script.size()) {
    throw ConfigError("fault row " + std::to_string(row) + " does not exist (script has " +
                      std::to_string(scenario.script.size()) + " rows)");
  }
  auto& spec = scenario.script[row];
  spec.fault = fault;
  spec.expect.reset();
  spec.expect_count.reset();
  if (fault.kind == FaultKind::SwapResponses) {
    if (fault.partner_row >= scenario.script.size() || fault.partner_row == row) {
      throw ConfigError("swap partner " + std::to_string(fault.partner_row) + " is not another row");
    }
    auto& partner = scenario.script[fault.partner_row];
    if (partner.source != spec.source) throw ConfigError("swap partner must share the source agency");
    partner.expect = Expectation{false, {}};
    partner.expect_count.reset();
  }
  if (fault.kind == FaultKind::WrongTargetKey && scenario.agencies.size() < 3) {
    throw ConfigError("wrong-target-key needs a third agency");
  }
  return scenario;
}

bool all_expectations_met(const std::vector<ExchangeOutcome>& outcomes) {
  return std::all_of(outcomes.begin(), outcomes.end(), [](const ExchangeOutcome& o) { return o.expectation_met; });
}

std::string format_table(const std::vector<ExchangeOutcome>& outcomes) {
  const std::vector<std::string> header = {"Source Agency", "Target Agency", "Terrorist Code",
                                           "Information available with the Target agency",
                                           "Trust-based Shared Information"};
  std::vector<std::vector<std::string>> cells;
  for (const auto& o : outcomes) {
    std::string shared = o.ok ? "{" + join(o.items, ",") + "}" : std::string(error_class_name(*o.error));
    if (o.ok && !o.subject_known) shared += " (unknown subject)";
    cells.push_back({o.source, o.target, o.code, "{" + join(o.available, ",") + "}", shared});
  }
  std::vector<std::size_t> width(header.size());
  for (std::size_t c = 0; c < header.size(); ++c) {
    width[c] = header[c].size();
    for (const auto& r : cells) width[c] = std::max(width[c], r[c].size());
  }
  std::ostringstream out;
  auto emit = [&](const std::vector<std::string>& r) {
    for (std::size_t c = 0; c < r.size(); ++c) {
      out << r[c];
      if (c + 1 < r.size()) out << std::string(width[c] - r[c].size() + 2, ' ');
    }
    out << '\n';
  };
  emit(header);
  std::size_t total = 0;
  for (auto w : width) total += w + 2;
  out << std::string(total - 2, '-') << '\n';
  for (const auto& r : cells) emit(r);
  return out.str();
}

std::string format_lines(const std::vector<ExchangeOutcome>& outcomes) {
  std::ostringstream out;
  for (const auto& o : outcomes) {
    out << o.row << '\t' << o.source << '\t' << o.target << '\t' << o.code << '\t'
        << (o.ok ? std::string_view("ok") : error_class_name(*o.error)) << '\t' << o.items.size() << '\t'
        << join(o.items, ",") << '\n';
  }
  return out.str();
}

}  // namespace trustwire
