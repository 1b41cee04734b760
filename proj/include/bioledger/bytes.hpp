#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace bioledger {

using Bytes = std::vector<uint8_t>;
using ByteView = std::span<const uint8_t>;

/// 256-bit storage word / digest, big-endian byte order.
using Word = std::array<uint8_t, 32>;

/// 20-byte account/contract address.
using Address = std::array<uint8_t, 20>;

inline constexpr Word kZeroWord{};

inline bool is_zero(const Word& w) { return w == kZeroWord; }

std::string to_hex(ByteView data);
Bytes from_hex(const std::string& hex);

std::string to_hex(const Word& w);
std::string to_hex(const Address& a);
Word word_from_hex(const std::string& hex);
Address address_from_hex(const std::string& hex);

/// Left-pads a uint64 value into a 32-byte big-endian word.
Word word_from_u64(uint64_t value);

/// Word interpreted as a big-endian integer, plus a small offset.
/// Wraps mod 2^256; used for array payload slot addressing.
Word word_add(const Word& w, uint64_t offset);

/// Number of nonzero bytes in the 32-byte big-endian encoding of `value`.
int nonzero_bytes_u64(uint64_t value);

Bytes be64(uint64_t value);

}  // namespace bioledger
