#include "trustwire/agencynode.hpp"

#include <limits>
#include <sstream>

namespace trustwire {

namespace {

constexpr std::string_view kPasswordAlphabet = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789";
constexpr std::size_t kPasswordLength = 12;
constexpr std::size_t kSaltLength = 16;

std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t draw;
  do {
    draw = rng();
  } while (draw >= limit);
  return draw % bound;
}

InfoRecord filtered(const InfoRecord& master, double trust, const SelectionSeed& seed) {
  return InfoRecord{trust_filter(master.items, trust, seed).items, trust_filter(master.activities, trust, seed).items};
}

}  // namespace

void DuplicateStore::put(const std::string& peer, const std::string& code, InfoRecord record) {
  snapshots_[peer][code] = std::move(record);
}

const InfoRecord* DuplicateStore::find(std::string_view peer, std::string_view code) const {
  auto p = snapshots_.find(peer);
  if (p == snapshots_.end()) return nullptr;
  auto c = p->second.find(code);
  return c == p->second.end() ? nullptr : &c->second;
}

std::string AuditEntry::line() const {
  std::ostringstream out;
  out << ts << " | " << peer << " | " << error_class_name(error) << " | " << request_digest.hex();
  return out.str();
}

Digest credential_digest(ByteView salt, std::string_view password) {
  Bytes material(salt.begin(), salt.end());
  material.insert(material.end(), password.begin(), password.end());
  return md5_digest(material);
}

AgencyNode::AgencyNode(NodeConfig config) : config_(std::move(config)), rng_(config_.seed) {
  if (!config_.registry) throw ConfigError("agency node needs a key registry");
  checked_trust_level(config_.general_user_trust);

  for (const auto& [pair, record] : config_.trust.records()) {
    if (record.target != config_.id) continue;
    for (const auto& [code, master] : config_.store.records()) {
      const double level = config_.trust.lookup(record.source, config_.id, code).trust_level;
      duplicates_.put(record.source.str(), code, filtered(master, level, {record.source.str(), config_.id.str(), code}));
    }
  }
  for (const auto& [code, master] : config_.store.records()) {
    duplicates_.put(std::string(kPublicTier), code,
                    filtered(master, config_.general_user_trust, {std::string(kPublicTier), config_.id.str(), code}));
  }
}

AgencyNode::Outgoing AgencyNode::send_request(const AgencyId& target, const QueryPayload& payload) {
  return send_with_key(target, payload, config_.registry->lookup(target));
}

AgencyNode::Outgoing AgencyNode::send_request_sealed_for(const AgencyId& target, const QueryPayload& payload,
                                                         const AgencyId& seal_for) {
  return send_with_key(target, payload, config_.registry->lookup(seal_for));
}

AgencyNode::Outgoing AgencyNode::send_with_key(const AgencyId& target, const QueryPayload& payload,
                                               const PublicKey& seal_key) {
  const TrustRecord& record = config_.trust.record(config_.id, target);
  BuiltRequest built = build_source_request(config_.id, target, payload, config_.keys, seal_key,
                                            record.mapping.arity(), rng_());
  const std::uint64_t request_id = next_request_id_++;
  pending_.emplace(request_id, std::move(built.pending));
  return Outgoing{request_id, std::move(built.request.ciphertext)};
}

std::string AgencyNode::claimed_source(ByteView request_bytes) const {
  try {
    const auto fields = decode_fields(open(config_.keys.priv, request_bytes));
    if (fields.size() >= 2 && fields[1].tag == FieldTag::AgencyId) return AgencyId(to_string(fields[1].payload)).str();
  } catch (const Error&) {
  }
  return "-";
}

std::optional<Bytes> AgencyNode::handle_incoming(ByteView request_bytes) {
  const std::uint64_t ts = ++clock_;
  try {
    const SourceRequest request{Bytes(request_bytes.begin(), request_bytes.end())};
    const ValidatedRequest validated = validate_source_request(request, config_.keys, *config_.registry);
    return build_target_response(validated, config_.id, config_.trust, config_.store, *config_.registry).ciphertext;
  } catch (const Error& e) {
    audit_.push_back(AuditEntry{ts, claimed_source(request_bytes), e.error_class(), md5_digest(request_bytes)});
    return std::nullopt;
  }
}

SharedInfo AgencyNode::accept_response(std::uint64_t request_id, ByteView response_bytes) {
  auto it = pending_.find(request_id);
  if (it == pending_.end()) throw RequestCorrelationError("no outstanding request " + std::to_string(request_id));
  const PendingState& state = it->second;
  const TrustRecord& record = config_.trust.record(config_.id, state.target);
  SharedInfo info = validate_target_response(TargetResponse{Bytes(response_bytes.begin(), response_bytes.end())},
                                             state, config_.keys, record.mapping);
  pending_.erase(it);
  return info;
}

const PendingState* AgencyNode::pending(std::uint64_t request_id) const {
  auto it = pending_.find(request_id);
  return it == pending_.end() ? nullptr : &it->second;
}

std::string AgencyNode::register_user(const std::string& user_id) {
  if (user_id.empty()) throw InvalidArgumentError("user id must not be empty");
  for (char c : user_id) {
    if (c < 0x21 || c > 0x7e) throw InvalidArgumentError("user id must be printable");
  }
  if (accounts_.contains(user_id)) throw DuplicateUserError("user already registered: " + user_id);

  // Credentials come from a generator keyed by the node seed, the user id and
  // the account count, so registrations in separate runs never repeat a
  // password and never disturb the request nonces drawn from rng_.
  const std::uint64_t user_key = read_u64_be(md5_digest(to_bytes(user_id)).view());
  std::seed_seq seq{static_cast<std::uint32_t>(config_.seed), static_cast<std::uint32_t>(config_.seed >> 32),
                    static_cast<std::uint32_t>(user_key), static_cast<std::uint32_t>(user_key >> 32),
                    static_cast<std::uint32_t>(accounts_.size())};
  std::mt19937_64 credential_rng(seq);

  UserAccount account{user_id, Bytes(kSaltLength), Digest{}, AccountStatus::Pending};
  for (auto& b : account.salt) b = static_cast<std::uint8_t>(bounded(credential_rng, 256));
  std::string password(kPasswordLength, '\0');
  for (auto& c : password) c = kPasswordAlphabet[bounded(credential_rng, kPasswordAlphabet.size())];

  account.credential = credential_digest(account.salt, password);
  account.status = AccountStatus::Active;
  accounts_.emplace(user_id, std::move(account));
  return password;
}

void AgencyNode::restore_account(UserAccount account) {
  if (account.salt.size() != kSaltLength) throw ConfigError("account salt must be 16 bytes");
  const std::string key = account.user_id;
  if (!accounts_.emplace(key, std::move(account)).second) throw DuplicateUserError("user already registered: " + key);
}

bool AgencyNode::verify_password(std::string_view user_id, std::string_view password) const {
  auto it = accounts_.find(user_id);
  if (it == accounts_.end() || it->second.status != AccountStatus::Active) return false;
  return credential_digest(it->second.salt, password) == it->second.credential;
}

std::vector<std::string> AgencyNode::user_query(std::string_view user_id, std::string_view password,
                                                std::string_view terrorist_code, QueryKind kind) const {
  if (!verify_password(user_id, password)) throw AuthError("invalid user credentials");
  const InfoRecord* snapshot = duplicates_.find(kPublicTier, terrorist_code);
  if (snapshot == nullptr) return {};
  return kind == QueryKind::Activities ? snapshot->activities : snapshot->items;
}

}  // namespace trustwire
