#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace trustwire {

using Bytes = std::vector<std::uint8_t>;
using ByteView = std::span<const std::uint8_t>;

Bytes to_bytes(std::string_view text);
std::string to_string(ByteView bytes);

// Lowercase, no separators.
std::string to_hex(ByteView bytes);
// Accepts upper or lower case; throws LengthError on odd length or a non-hex digit.
Bytes from_hex(std::string_view hex);

void append_u32_be(Bytes& out, std::uint32_t value);
void append_u64_be(Bytes& out, std::uint64_t value);
std::uint32_t read_u32_be(ByteView in);
std::uint64_t read_u64_be(ByteView in);

}  // namespace trustwire
