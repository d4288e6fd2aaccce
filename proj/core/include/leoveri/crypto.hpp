#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace leoveri {

using Bytes = std::vector<std::uint8_t>;
using Digest = std::array<std::uint8_t, 32>;

Digest hmac_sha256(std::span<const std::uint8_t> key, std::span<const std::uint8_t> data);

// First four digest bytes read big-endian.
std::uint32_t truncate32(const Digest& d);

std::string to_hex(std::span<const std::uint8_t> bytes);
// Throws Error(InvalidConfig) on odd length or non-hex characters.
Bytes from_hex(std::string_view hex);

}  // namespace leoveri
