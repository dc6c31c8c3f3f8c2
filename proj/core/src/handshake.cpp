#include "trustwire/handshake.hpp"

#include <algorithm>
#include <optional>
#include <random>

#include "trustwire/digest.hpp"
#include "trustwire/errors.hpp"

namespace trustwire {

namespace {

enum class ResponseStatus : std::uint8_t { Ok = 0, UnknownSubject = 1 };

struct ResponseBody {
  ResponseStatus status = ResponseStatus::Ok;
  QueryKind kind = QueryKind::InfoItems;
  double trust_level = 0.0;
  std::vector<std::string> items;
};

// status(1) | kind(1) | trust level binary64(8) | count(4) | (length(4) | bytes)*
Bytes encode_response_body(const ResponseBody& body) {
  Bytes out;
  out.push_back(static_cast<std::uint8_t>(body.status));
  out.push_back(static_cast<std::uint8_t>(body.kind));
  const auto trust = encode_f64(body.trust_level);
  out.insert(out.end(), trust.begin(), trust.end());
  append_u32_be(out, static_cast<std::uint32_t>(body.items.size()));
  for (const auto& item : body.items) {
    append_u32_be(out, static_cast<std::uint32_t>(item.size()));
    out.insert(out.end(), item.begin(), item.end());
  }
  return out;
}

ResponseBody decode_response_body(ByteView bytes) {
  try {
    if (bytes.size() < 14) throw DecodeError("response body too short");
    ResponseBody body;
    if (bytes[0] > 1 || bytes[1] > 1) throw DecodeError("bad response status or kind");
    body.status = static_cast<ResponseStatus>(bytes[0]);
    body.kind = static_cast<QueryKind>(bytes[1]);
    body.trust_level = decode_f64(bytes.subspan(2, 8));
    const std::uint32_t count = read_u32_be(bytes.subspan(10, 4));
    std::size_t pos = 14;
    for (std::uint32_t i = 0; i < count; ++i) {
      const std::uint32_t len = read_u32_be(bytes.subspan(pos));
      pos += 4;
      if (bytes.size() - pos < len) throw DecodeError("response item truncated");
      body.items.emplace_back(bytes.begin() + static_cast<std::ptrdiff_t>(pos),
                              bytes.begin() + static_cast<std::ptrdiff_t>(pos + len));
      pos += len;
    }
    if (pos != bytes.size()) throw DecodeError("trailing bytes after response body");
    return body;
  } catch (const DecodeError&) {
    throw;
  } catch (const Error& e) {
    throw DecodeError(std::string("malformed response body: ") + e.what());
  }
}

bool has_shape(const std::vector<Field>& fields, std::initializer_list<FieldTag> tags) {
  return std::equal(fields.begin(), fields.end(), tags.begin(), tags.end(),
                    [](const Field& f, FieldTag t) { return f.tag == t; });
}

// Decodes a framed message, reporting any failure as error type E.
template <typename E>
std::vector<Field> decode_as(ByteView bytes, std::initializer_list<FieldTag> shape, const char* what) {
  std::vector<Field> fields;
  try {
    fields = decode_fields(bytes);
  } catch (const Error& e) {
    throw E(std::string(what) + ": " + e.what());
  }
  if (!has_shape(fields, shape)) throw E(std::string(what) + ": unexpected field layout");
  return fields;
}

template <typename E, typename Key>
Bytes open_as(const Key& key, ByteView ciphertext, const char* what) {
  try {
    return open(key, ciphertext);
  } catch (const Error& e) {
    throw E(std::string(what) + ": " + e.what());
  }
}

Bytes source_request_digest_input(ByteView nonce_ciphertext, const std::string& source, ByteView random_set,
                                  ByteView request) {
  // SE_Data = R_V + src id + [S_R] + Request
  return encode_fields({
      Field{FieldTag::NonceCiphertext, Bytes(nonce_ciphertext.begin(), nonce_ciphertext.end())},
      Field{FieldTag::AgencyId, to_bytes(source)},
      Field{FieldTag::RandomSet, Bytes(random_set.begin(), random_set.end())},
      Field{FieldTag::RequestPayload, Bytes(request.begin(), request.end())},
  });
}

Bytes target_response_digest_input(ByteView nonce_ciphertext, ByteView mapping_value, ByteView response) {
  // TE_Data = R_V + M'_val + Response
  return encode_fields({
      Field{FieldTag::NonceCiphertext, Bytes(nonce_ciphertext.begin(), nonce_ciphertext.end())},
      Field{FieldTag::MappingValue, Bytes(mapping_value.begin(), mapping_value.end())},
      Field{FieldTag::ResponsePayload, Bytes(response.begin(), response.end())},
  });
}

Bytes encode_nonce(std::uint64_t nonce) {
  Bytes out;
  append_u64_be(out, nonce);
  return out;
}

void check_code(std::string_view code) {
  if (code.empty() || code.size() > 32) throw InvalidArgumentError("terrorist code must be 1-32 bytes");
  for (char c : code) {
    if (c < 0x20 || c > 0x7e) throw InvalidArgumentError("terrorist code must be printable");
  }
}

}  // namespace

std::string_view query_kind_name(QueryKind kind) {
  return kind == QueryKind::Activities ? "activities" : "items";
}

QueryKind parse_query_kind(std::string_view name) {
  if (name == "items") return QueryKind::InfoItems;
  if (name == "activities") return QueryKind::Activities;
  throw InvalidArgumentError("query kind must be 'items' or 'activities'");
}

Bytes encode_query(const QueryPayload& payload) {
  check_code(payload.terrorist_code);
  Bytes out;
  out.push_back(static_cast<std::uint8_t>(payload.kind));
  out.insert(out.end(), payload.terrorist_code.begin(), payload.terrorist_code.end());
  return out;
}

QueryPayload decode_query(ByteView bytes) {
  if (bytes.size() < 2 || bytes[0] > 1) throw DecodeError("malformed query payload");
  QueryPayload payload{std::string(bytes.begin() + 1, bytes.end()), static_cast<QueryKind>(bytes[0])};
  try {
    check_code(payload.terrorist_code);
  } catch (const Error& e) {
    throw DecodeError(e.what());
  }
  return payload;
}

BuiltRequest build_source_request(const AgencyId& source, const AgencyId& target, const QueryPayload& payload,
                                  const KeyPair& source_keys, const KeyRegistry& registry,
                                  std::size_t random_set_size, std::uint64_t seed) {
  return build_source_request(source, target, payload, source_keys, registry.lookup(target), random_set_size,
                              seed);
}

BuiltRequest build_source_request(const AgencyId& source, const AgencyId& target, const QueryPayload& payload,
                                  const KeyPair& source_keys, const PublicKey& seal_key,
                                  std::size_t random_set_size, std::uint64_t seed) {
  std::mt19937_64 rng(seed);

  // (1) R and R_V, encrypted under the source's own public key.
  const std::uint64_t nonce = rng();
  Bytes nonce_ciphertext = seal(source_keys.pub, encode_nonce(nonce));

  // (2) S_R and SE_Data.
  std::vector<std::uint64_t> values(random_set_size);
  for (auto& v : values) v = rng();
  RandomSet random_set(std::move(values));
  const Bytes random_set_bytes = encode_random_set(random_set);
  const Bytes request_bytes = encode_query(payload);
  const Bytes se_data = source_request_digest_input(nonce_ciphertext, source.str(), random_set_bytes, request_bytes);

  // (3) H_val.
  const Digest digest = md5_digest(se_data);

  // (4) S_Data and SA_Data, signed with the source private key.
  const Bytes s_data = encode_fields({
      Field{FieldTag::RandomSet, random_set_bytes},
      Field{FieldTag::RequestPayload, request_bytes},
      Field{FieldTag::Digest, Bytes(digest.bytes().begin(), digest.bytes().end())},
  });
  Bytes sa_data = seal(source_keys.priv, s_data);

  // (5) S_Req under the target's public key.
  const Bytes envelope = encode_fields({
      Field{FieldTag::NonceCiphertext, nonce_ciphertext},
      Field{FieldTag::AgencyId, to_bytes(source.str())},
      Field{FieldTag::SignedBlob, std::move(sa_data)},
  });

  return BuiltRequest{
      SourceRequest{seal(seal_key, envelope)},
      PendingState{source, target, nonce, std::move(nonce_ciphertext), std::move(random_set), payload},
  };
}

ValidatedRequest validate_source_request(const SourceRequest& request, const KeyPair& target_keys,
                                         const KeyRegistry& registry) {
  // (1) D_Req = Dec(S_Req) with the target private key.
  const Bytes envelope = open_as<DecodeError>(target_keys.priv, request.ciphertext, "request envelope");
  auto outer = decode_as<DecodeError>(envelope, {FieldTag::NonceCiphertext, FieldTag::AgencyId, FieldTag::SignedBlob},
                                      "request envelope");
  const Bytes& nonce_ciphertext = outer[0].payload;
  const std::string source_name = to_string(outer[1].payload);
  std::optional<AgencyId> source;
  try {
    source.emplace(source_name);
  } catch (const Error& e) {
    throw DecodeError(std::string("request source id: ") + e.what());
  }

  // (2) D'_Req = Dec(SA_Data) with the claimed source's public key.
  const PublicKey& source_key = registry.lookup(*source);
  const Bytes s_data = open_as<AuthenticationError>(source_key, outer[2].payload, "request signature");
  auto inner = decode_as<AuthenticationError>(s_data, {FieldTag::RandomSet, FieldTag::RequestPayload, FieldTag::Digest},
                                              "request signature");
  if (inner[2].payload.size() != Digest::kSize) throw AuthenticationError("request signature: bad digest length");
  const Digest claimed = Digest::from_bytes(inner[2].payload);

  // (3)+(4) Rebuild SE_Data from the outer R_V and src id plus the signed S_R
  // and Request, and compare digests.
  const Bytes se_data = source_request_digest_input(nonce_ciphertext, source_name, inner[0].payload, inner[1].payload);
  if (!(md5_digest(se_data) == claimed)) throw IntegrityError("request digest mismatch");

  return ValidatedRequest{nonce_ciphertext, *source, decode_random_set(inner[0].payload), decode_query(inner[1].payload)};
}

TargetResponse build_target_response(const ValidatedRequest& request, const AgencyId& target,
                                     const TrustPlane& trust, const InfoStore& store, const KeyRegistry& registry) {
  // (1) Trust level indexed by the source id, (3) the pair's mapping function.
  const ResolvedTrust resolved = trust.lookup(request.source, target, request.payload.terrorist_code);
  const double mapping_value = eval_mapping(resolved.mapping, request.random_set);
  const auto mapping_bytes = encode_f64(mapping_value);

  // (4) Trust-graded selection.
  ResponseBody body;
  body.kind = request.payload.kind;
  body.trust_level = resolved.trust_level;
  if (const InfoRecord* record = store.find(request.payload.terrorist_code)) {
    const auto& source_list = request.payload.kind == QueryKind::Activities ? record->activities : record->items;
    SelectionSeed seed{request.source.str(), target.str(), request.payload.terrorist_code};
    body.items = trust_filter(source_list, resolved.trust_level, seed).items;
  } else {
    body.status = ResponseStatus::UnknownSubject;
  }
  const Bytes response_bytes = encode_response_body(body);

  // (2)+(5)+(6) TE_Data carries R_V unchanged; H_val over it.
  const Bytes mapping_field(mapping_bytes.begin(), mapping_bytes.end());
  const Digest digest = md5_digest(target_response_digest_input(request.nonce_ciphertext, mapping_field, response_bytes));

  // (7) T_Res under the source's public key.
  const Bytes framed = encode_fields({
      Field{FieldTag::NonceCiphertext, request.nonce_ciphertext},
      Field{FieldTag::MappingValue, mapping_field},
      Field{FieldTag::ResponsePayload, response_bytes},
      Field{FieldTag::Digest, Bytes(digest.bytes().begin(), digest.bytes().end())},
  });
  return TargetResponse{seal(registry.lookup(request.source), framed)};
}

SharedInfo validate_target_response(const TargetResponse& response, const PendingState& pending,
                                    const KeyPair& source_keys, const MappingFunction& mapping) {
  // (1) ST_Res = Dec(T_Res) with the source private key.
  const Bytes framed = open_as<DecodeError>(source_keys.priv, response.ciphertext, "response");
  auto fields = decode_as<DecodeError>(
      framed, {FieldTag::NonceCiphertext, FieldTag::MappingValue, FieldTag::ResponsePayload, FieldTag::Digest},
      "response");
  const Bytes& nonce_ciphertext = fields[0].payload;
  const Bytes& mapping_field = fields[1].payload;
  const Bytes& response_bytes = fields[2].payload;
  if (fields[3].payload.size() != Digest::kSize) throw DecodeError("response: bad digest length");

  // (2) Integrity.
  const Digest recomputed = md5_digest(target_response_digest_input(nonce_ciphertext, mapping_field, response_bytes));
  if (!(recomputed == Digest::from_bytes(fields[3].payload))) throw IntegrityError("response digest mismatch");

  // (3) Agency verification: M'_val recomputed from our own S_R, compared bit-wise.
  const auto expected = encode_f64(eval_mapping(mapping, pending.random_set));
  if (mapping_field.size() != expected.size() || !std::equal(expected.begin(), expected.end(), mapping_field.begin())) {
    throw AgencyVerificationError("mapping value does not match the expected target");
  }

  // (4) Request correlation: R_V must open to our R.
  Bytes nonce_bytes;
  try {
    nonce_bytes = open(source_keys.priv, nonce_ciphertext);
  } catch (const Error& e) {
    throw RequestCorrelationError(std::string("nonce does not open: ") + e.what());
  }
  if (nonce_bytes.size() != 8 || read_u64_be(nonce_bytes) != pending.nonce) {
    throw RequestCorrelationError("response does not correspond to this request");
  }

  const ResponseBody body = decode_response_body(response_bytes);
  if (body.kind != pending.payload.kind) throw DecodeError("response kind does not match the request");
  return SharedInfo{body.items, body.trust_level, body.status == ResponseStatus::Ok};
}

}  // namespace trustwire
