#pragma once

#include <cstdint>
#include <string>

#include "trustwire/bytes.hpp"
#include "trustwire/infostore.hpp"
#include "trustwire/keyfabric.hpp"
#include "trustwire/trustplane.hpp"
#include "trustwire/wirecodec.hpp"

namespace trustwire {

enum class QueryKind : std::uint8_t { InfoItems = 0, Activities = 1 };

std::string_view query_kind_name(QueryKind kind);
/// "items" or "activities"; throws InvalidArgumentError.
QueryKind parse_query_kind(std::string_view name);

struct QueryPayload {
  std::string terrorist_code;  // 1-32 printable bytes
  QueryKind kind = QueryKind::InfoItems;
  friend bool operator==(const QueryPayload&, const QueryPayload&) = default;
};

/// kind(1) | terrorist code bytes. Throws InvalidArgumentError on a bad code.
Bytes encode_query(const QueryPayload& payload);
/// Throws DecodeError.
QueryPayload decode_query(ByteView bytes);

/// S_Req: seal(target public, [R_V, src id, SA_Data]).
struct SourceRequest {
  Bytes ciphertext;
};

/// What the source keeps for an outstanding request so it can check the reply.
struct PendingState {
  AgencyId source;
  AgencyId target;
  std::uint64_t nonce;     // R
  Bytes nonce_ciphertext;  // R_V = seal(source public, R)
  RandomSet random_set;    // S_R
  QueryPayload payload;
};

struct BuiltRequest {
  SourceRequest request;
  PendingState pending;
};

/// Structures a source request. Randomness (R and S_R) comes only from `seed`.
///
/// Throws UnknownAgencyError when the target has no registered key.
BuiltRequest build_source_request(const AgencyId& source, const AgencyId& target, const QueryPayload& payload,
                                  const KeyPair& source_keys, const KeyRegistry& registry,
                                  std::size_t random_set_size, std::uint64_t seed);

/// Same, sealing the outer envelope under an explicit key instead of the
/// registered target key.
BuiltRequest build_source_request(const AgencyId& source, const AgencyId& target, const QueryPayload& payload,
                                  const KeyPair& source_keys, const PublicKey& seal_key,
                                  std::size_t random_set_size, std::uint64_t seed);

/// D_Req / D'_Req after authentication and integrity checks have passed.
struct ValidatedRequest {
  Bytes nonce_ciphertext;
  AgencyId source;
  RandomSet random_set;
  QueryPayload payload;
};

/// Target-side validation. Throws DecodeError (cannot open or parse the
/// envelope), UnknownAgencyError, AuthenticationError (SA_Data does not open
/// under the claimed source key) or IntegrityError (digest mismatch).
ValidatedRequest validate_source_request(const SourceRequest& request, const KeyPair& target_keys,
                                         const KeyRegistry& registry);

/// T_Res: seal(source public, [R_V, M'_val, Response, H_val]).
struct TargetResponse {
  Bytes ciphertext;
};

/// Builds the trust-graded response. An unknown terrorist code produces an
/// authenticated response with no items rather than an error.
///
/// Throws NoTrustRecordError when `target` keeps no trust record for the source.
TargetResponse build_target_response(const ValidatedRequest& request, const AgencyId& target,
                                     const TrustPlane& trust, const InfoStore& store, const KeyRegistry& registry);

/// Source-side validation. Checks run in order: DecodeError, IntegrityError,
/// AgencyVerificationError (recomputed M'_val differs bit-wise),
/// RequestCorrelationError (R_V does not open to the pending nonce).
SharedInfo validate_target_response(const TargetResponse& response, const PendingState& pending,
                                    const KeyPair& source_keys, const MappingFunction& mapping);

}  // namespace trustwire
