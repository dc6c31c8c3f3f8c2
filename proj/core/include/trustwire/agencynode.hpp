#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "trustwire/digest.hpp"
#include "trustwire/errors.hpp"
#include "trustwire/handshake.hpp"
#include "trustwire/infostore.hpp"
#include "trustwire/keyfabric.hpp"
#include "trustwire/trustplane.hpp"

namespace trustwire {

/// Peer name under which the general-user snapshot is kept in a DuplicateStore.
inline constexpr std::string_view kPublicTier = "~public";
inline constexpr double kDefaultGeneralUserTrust = 0.2;

/// Pre-filtered copies of the master store, one snapshot per peer, computed
/// once from the trust records in force when the node is configured.
class DuplicateStore {
 public:
  using Snapshot = std::map<std::string, InfoRecord, std::less<>>;

  void put(const std::string& peer, const std::string& code, InfoRecord record);
  /// nullptr when the peer or the code has no snapshot.
  const InfoRecord* find(std::string_view peer, std::string_view code) const;
  const std::map<std::string, Snapshot, std::less<>>& snapshots() const noexcept { return snapshots_; }

 private:
  std::map<std::string, Snapshot, std::less<>> snapshots_;
};

enum class AccountStatus { Pending, Active };

struct UserAccount {
  std::string user_id;
  Bytes salt;         // 16 bytes
  Digest credential;  // md5(salt || password)
  AccountStatus status = AccountStatus::Pending;
};

struct AuditEntry {
  std::uint64_t ts;  // logical clock of the node
  std::string peer;  // claimed source, or "-" when the envelope did not open
  ErrorClass error;
  Digest request_digest;

  /// "ts | peer | error-class | request-digest-hex"
  std::string line() const;
};

struct NodeConfig {
  AgencyId id;
  KeyPair keys;
  std::shared_ptr<const KeyRegistry> registry;
  TrustPlane trust;  // records where this node is source or target
  InfoStore store;
  std::uint64_t seed = 0;
  double general_user_trust = kDefaultGeneralUserTrust;
};

/// One agency's runtime: keys, stores, outstanding requests, user accounts and
/// audit log. Not thread-safe; callers deliver one message at a time.
class AgencyNode {
 public:
  explicit AgencyNode(NodeConfig config);

  const AgencyId& id() const noexcept { return config_.id; }
  const KeyPair& keys() const noexcept { return config_.keys; }
  const InfoStore& store() const noexcept { return config_.store; }
  const TrustPlane& trust() const noexcept { return config_.trust; }
  const DuplicateStore& duplicates() const noexcept { return duplicates_; }
  const std::vector<AuditEntry>& audit_log() const noexcept { return audit_; }

  struct Outgoing {
    std::uint64_t request_id;
    Bytes bytes;
  };

  /// Builds a request to `target`; S_R size follows the pair's mapping function.
  /// Throws NoTrustRecordError or UnknownAgencyError.
  Outgoing send_request(const AgencyId& target, const QueryPayload& payload);
  /// As send_request, but seals the envelope under `seal_for`'s public key.
  Outgoing send_request_sealed_for(const AgencyId& target, const QueryPayload& payload, const AgencyId& seal_for);

  /// Validates an inbound request and builds the response. Any failure yields
  /// std::nullopt and exactly one audit entry.
  std::optional<Bytes> handle_incoming(ByteView request_bytes);

  /// Validates a response against the named outstanding request, which is
  /// retired on success. Throws RequestCorrelationError for an unknown id.
  SharedInfo accept_response(std::uint64_t request_id, ByteView response_bytes);

  const PendingState* pending(std::uint64_t request_id) const;
  std::size_t pending_count() const noexcept { return pending_.size(); }

  /// Issues a 12-character password, returned once. Throws DuplicateUserError.
  std::string register_user(const std::string& user_id);
  /// Re-installs a persisted account. Throws DuplicateUserError.
  void restore_account(UserAccount account);
  bool verify_password(std::string_view user_id, std::string_view password) const;
  /// Public-tier, read-only view of the store. Throws AuthError on bad credentials.
  std::vector<std::string> user_query(std::string_view user_id, std::string_view password,
                                      std::string_view terrorist_code, QueryKind kind) const;
  const std::map<std::string, UserAccount, std::less<>>& accounts() const noexcept { return accounts_; }

 private:
  Outgoing send_with_key(const AgencyId& target, const QueryPayload& payload, const PublicKey& seal_key);
  std::string claimed_source(ByteView request_bytes) const;

  NodeConfig config_;
  DuplicateStore duplicates_;
  std::mt19937_64 rng_;
  std::uint64_t clock_ = 0;
  std::uint64_t next_request_id_ = 1;
  std::map<std::uint64_t, PendingState> pending_;
  std::map<std::string, UserAccount, std::less<>> accounts_;
  std::vector<AuditEntry> audit_;
};

/// md5(salt || password)
Digest credential_digest(ByteView salt, std::string_view password);

}  // namespace trustwire
