#include "bioledger/bytes.hpp"

#include <stdexcept>

namespace bioledger {

namespace {

constexpr char kHexDigits[] = "0123456789abcdef";

int hex_value(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    throw std::invalid_argument("invalid hex digit");
}

}  // namespace

std::string to_hex(ByteView data) {
    std::string out;
    out.reserve(data.size() * 2);
    for (uint8_t b : data) {
        out.push_back(kHexDigits[b >> 4]);
        out.push_back(kHexDigits[b & 0x0f]);
    }
    return out;
}

Bytes from_hex(const std::string& hex) {
    std::string s = hex;
    if (s.size() >= 2 && s[0] == '0' && (s[1] == 'x' || s[1] == 'X')) s = s.substr(2);
    if (s.size() % 2 != 0) throw std::invalid_argument("odd-length hex string");
    Bytes out(s.size() / 2);
    for (size_t i = 0; i < out.size(); ++i) {
        out[i] = static_cast<uint8_t>(hex_value(s[2 * i]) << 4 | hex_value(s[2 * i + 1]));
    }
    return out;
}

std::string to_hex(const Word& w) { return to_hex(ByteView(w.data(), w.size())); }
std::string to_hex(const Address& a) { return to_hex(ByteView(a.data(), a.size())); }

Word word_from_hex(const std::string& hex) {
    Bytes b = from_hex(hex);
    if (b.size() != 32) throw std::invalid_argument("word hex must be 32 bytes");
    Word w;
    std::copy(b.begin(), b.end(), w.begin());
    return w;
}

Address address_from_hex(const std::string& hex) {
    Bytes b = from_hex(hex);
    if (b.size() != 20) throw std::invalid_argument("address hex must be 20 bytes");
    Address a;
    std::copy(b.begin(), b.end(), a.begin());
    return a;
}

Word word_from_u64(uint64_t value) {
    Word w{};
    for (int i = 0; i < 8; ++i) {
        w[31 - i] = static_cast<uint8_t>(value >> (8 * i));
    }
    return w;
}

Word word_add(const Word& w, uint64_t offset) {
    Word out = w;
    // 256-bit big-endian addition, carry propagated from the low byte.
    uint64_t carry = offset;
    for (int i = 31; i >= 0 && carry != 0; --i) {
        uint64_t sum = static_cast<uint64_t>(out[i]) + (carry & 0xff);
        out[i] = static_cast<uint8_t>(sum);
        carry = (carry >> 8) + (sum >> 8);
    }
    return out;
}

int nonzero_bytes_u64(uint64_t value) {
    int n = 0;
    while (value != 0) {
        if ((value & 0xff) != 0) ++n;
        value >>= 8;
    }
    return n;
}

Bytes be64(uint64_t value) {
    Bytes out(8);
    for (int i = 0; i < 8; ++i) out[7 - i] = static_cast<uint8_t>(value >> (8 * i));
    return out;
}

}  // namespace bioledger
