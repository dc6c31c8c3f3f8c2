#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "trustwire/agencynode.hpp"
#include "trustwire/errors.hpp"
#include "trustwire/handshake.hpp"
#include "trustwire/infostore.hpp"
#include "trustwire/keyfabric.hpp"
#include "trustwire/trustplane.hpp"

namespace trustwire {

enum class FaultKind { FlipByte, SwapResponses, ReplayResponse, WrongTargetKey };
enum class FaultMessage { Request, Response };
// Wire flips hit the ciphertext. Envelope flips hit the plaintext framing
// before it is sealed, as an in-path tamper would.
enum class FaultLayer { Wire, Envelope };

struct Fault {
  FaultKind kind = FaultKind::FlipByte;
  std::size_t byte_index = 0;
  FaultMessage message = FaultMessage::Request;
  FaultLayer layer = FaultLayer::Wire;
  std::size_t partner_row = 0;  // SwapResponses only, 0-based

  /// "flip-byte:K[:request|response][:wire|envelope]", "swap:J", "replay",
  /// "wrong-target-key". Row numbers in specs are 0-based. Throws ConfigError.
  static Fault parse(std::string_view spec);
  std::string to_string() const;
  friend bool operator==(const Fault&, const Fault&) = default;
};

/// Expected result of a script row: success, or failure with one of `errors`
/// (any failure when `errors` is empty).
struct Expectation {
  bool ok = true;
  std::vector<ErrorClass> errors;
};

struct ExchangeSpec {
  AgencyId source;
  AgencyId target;
  std::string code;
  QueryKind kind = QueryKind::InfoItems;
  std::optional<Fault> fault;
  std::optional<Expectation> expect;
  std::optional<std::size_t> expect_count;
};

struct AgencySpec {
  AgencyId id;
  std::uint64_t key_seed = 0;
  std::uint64_t node_seed = 0;
  InfoStore store;
  std::vector<UserAccount> users;
};

struct Scenario {
  unsigned key_bits = kDefaultKeyBits;
  double general_user_trust = kDefaultGeneralUserTrust;
  std::vector<AgencySpec> agencies;
  std::vector<TrustRecord> trust;
  std::vector<ExchangeSpec> script;

  const AgencySpec* agency(const AgencyId& id) const;
  AgencySpec* agency(const AgencyId& id);

  /// Every consistency problem found, empty when the scenario is runnable.
  std::vector<std::string> problems() const;
};

/// Throws ConfigError with the offending field named.
Scenario parse_scenario(std::string_view text);
std::string serialize_scenario(const Scenario& scenario);
Scenario load_scenario_file(const std::filesystem::path& path);
void save_scenario_file(const Scenario& scenario, const std::filesystem::path& path);

/// The shipped fixtures/table1.scenario, compiled in.
std::string_view canonical_table1_text();
Scenario canonical_table1_scenario();

}  // namespace trustwire
