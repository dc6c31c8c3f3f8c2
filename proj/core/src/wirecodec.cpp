#include "trustwire/wirecodec.hpp"

#include <algorithm>
#include <bit>
#include <limits>

#include "trustwire/errors.hpp"

namespace trustwire {

bool is_known_tag(std::uint8_t tag) noexcept { return tag >= 0x01 && tag <= 0x08; }

Bytes encode_fields(const std::vector<Field>& fields) {
  std::size_t total = kWireMagic.size();
  for (const auto& f : fields) total += 5 + f.payload.size();
  Bytes out(kWireMagic.begin(), kWireMagic.end());
  out.reserve(total);
  for (const auto& f : fields) {
    if (f.payload.size() > std::numeric_limits<std::uint32_t>::max()) {
      throw LengthError("field payload exceeds 2^32-1 bytes");
    }
    out.push_back(static_cast<std::uint8_t>(f.tag));
    append_u32_be(out, static_cast<std::uint32_t>(f.payload.size()));
    out.insert(out.end(), f.payload.begin(), f.payload.end());
  }
  return out;
}

std::vector<Field> decode_fields(ByteView bytes) {
  if (bytes.size() < kWireMagic.size() || !std::equal(kWireMagic.begin(), kWireMagic.end(), bytes.begin())) {
    throw BadMagicError("missing TW1 magic");
  }
  std::vector<Field> fields;
  std::size_t pos = kWireMagic.size();
  while (pos < bytes.size()) {
    const std::uint8_t tag = bytes[pos];
    if (!is_known_tag(tag)) throw UnknownTagError("unknown field tag " + std::to_string(tag));
    if (bytes.size() - pos - 1 < 4) throw TruncatedError("truncated field length");
    const std::uint32_t len = read_u32_be(bytes.subspan(pos + 1, 4));
    pos += 5;
    if (bytes.size() - pos < len) throw TruncatedError("truncated field payload");
    fields.push_back(Field{static_cast<FieldTag>(tag), Bytes(bytes.begin() + static_cast<std::ptrdiff_t>(pos),
                                                             bytes.begin() + static_cast<std::ptrdiff_t>(pos + len))});
    pos += len;
  }
  return fields;
}

std::array<std::uint8_t, 8> encode_f64(double value) {
  const auto bits = std::bit_cast<std::uint64_t>(value);
  std::array<std::uint8_t, 8> out{};
  for (int i = 0; i < 8; ++i) out[i] = static_cast<std::uint8_t>(bits >> (56 - 8 * i));
  return out;
}

double decode_f64(ByteView bytes) {
  if (bytes.size() != 8) throw LengthError("binary64 needs exactly 8 bytes, got " + std::to_string(bytes.size()));
  return std::bit_cast<double>(read_u64_be(bytes));
}

RandomSet::RandomSet(std::vector<std::uint64_t> values) : values_(std::move(values)) {
  if (values_.empty() || values_.size() > kMaxSize) {
    throw InvalidArgumentError("random set must hold 1-32 values, got " + std::to_string(values_.size()));
  }
}

Bytes encode_random_set(const RandomSet& set) {
  Bytes out;
  out.reserve(set.size() * 8);
  for (std::uint64_t v : set.values()) append_u64_be(out, v);
  return out;
}

RandomSet decode_random_set(ByteView bytes) {
  if (bytes.empty() || bytes.size() % 8 != 0 || bytes.size() / 8 > RandomSet::kMaxSize) {
    throw DecodeError("random set encoding has invalid length " + std::to_string(bytes.size()));
  }
  std::vector<std::uint64_t> values;
  values.reserve(bytes.size() / 8);
  for (std::size_t i = 0; i < bytes.size(); i += 8) values.push_back(read_u64_be(bytes.subspan(i, 8)));
  return RandomSet(std::move(values));
}

}  // namespace trustwire
