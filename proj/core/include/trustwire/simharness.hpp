#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "trustwire/agencynode.hpp"
#include "trustwire/scenario.hpp"

namespace trustwire {

struct ExchangeOutcome {
  std::size_t row = 0;
  std::string source;
  std::string target;
  std::string code;
  QueryKind kind = QueryKind::InfoItems;
  std::vector<std::string> available;  // the target's full entry, empty if unknown
  bool ok = false;
  bool subject_known = true;
  std::vector<std::string> items;
  std::optional<ErrorClass> error;
  std::string fault;  // Fault::to_string(), empty when none
  bool expectation_met = false;
};

/// In-memory network of agency nodes built from a scenario. Messages are
/// carried as byte strings, synchronously, one at a time.
class Network {
 public:
  /// Throws ConfigError listing every scenario problem.
  explicit Network(const Scenario& scenario);

  AgencyNode& node(const AgencyId& id);
  const KeyRegistry& registry() const noexcept { return *registry_; }

  /// Requests and responses for every row are exchanged first, then every
  /// response is validated, so faults can swap responses between rows.
  std::vector<ExchangeOutcome> run(const std::vector<ExchangeSpec>& script);

 private:
  Scenario scenario_;
  std::shared_ptr<KeyRegistry> registry_;
  std::map<AgencyId, std::unique_ptr<AgencyNode>> nodes_;
};

/// Deterministic for a fixed scenario.
std::vector<ExchangeOutcome> run_scenario(const Scenario& scenario);

/// Copy of the scenario with `fault` attached to `row`. Throws ConfigError for
/// a missing row or an invalid partner; byte indices are checked at run time.
Scenario inject_fault(Scenario scenario, std::size_t row, const Fault& fault);

bool all_expectations_met(const std::vector<ExchangeOutcome>& outcomes);

/// Aligned text table with the five Table 1 columns.
std::string format_table(const std::vector<ExchangeOutcome>& outcomes);
/// One tab-separated line per outcome:
/// row, source, target, code, status, count, comma-joined items.
std::string format_lines(const std::vector<ExchangeOutcome>& outcomes);

}  // namespace trustwire
