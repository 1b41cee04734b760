#include "bioledger/hash.hpp"

#include <cstring>
#include <stdexcept>

namespace bioledger {

namespace {

// Keccak-f[1600] permutation. SHA3-256 and Keccak-256 share it and differ
// only in the domain-separation byte appended before the pad.

constexpr uint64_t kRoundConstants[24] = {
    0x0000000000000001ULL, 0x0000000000008082ULL, 0x800000000000808aULL,
    0x8000000080008000ULL, 0x000000000000808bULL, 0x0000000080000001ULL,
    0x8000000080008081ULL, 0x8000000000008009ULL, 0x000000000000008aULL,
    0x0000000000000088ULL, 0x0000000080008009ULL, 0x000000008000000aULL,
    0x000000008000808bULL, 0x800000000000008bULL, 0x8000000000008089ULL,
    0x8000000000008003ULL, 0x8000000000008002ULL, 0x8000000000000080ULL,
    0x000000000000800aULL, 0x800000008000000aULL, 0x8000000080008081ULL,
    0x8000000000008080ULL, 0x0000000080000001ULL, 0x8000000080008008ULL,
};

constexpr int kRotations[24] = {1,  3,  6,  10, 15, 21, 28, 36, 45, 55, 2,  14,
                                27, 41, 56, 8,  25, 43, 62, 18, 39, 61, 20, 44};

constexpr int kPiLanes[24] = {10, 7,  11, 17, 18, 3, 5,  16, 8,  21, 24, 4,
                              15, 23, 19, 13, 12, 2, 20, 14, 22, 9,  6,  1};

inline uint64_t rotl64(uint64_t x, int n) { return (x << n) | (x >> (64 - n)); }

void keccak_f1600(uint64_t state[25]) {
    for (int round = 0; round < 24; ++round) {
        // theta
        uint64_t c[5];
        for (int x = 0; x < 5; ++x) {
            c[x] = state[x] ^ state[x + 5] ^ state[x + 10] ^ state[x + 15] ^ state[x + 20];
        }
        for (int x = 0; x < 5; ++x) {
            uint64_t d = c[(x + 4) % 5] ^ rotl64(c[(x + 1) % 5], 1);
            for (int y = 0; y < 25; y += 5) state[x + y] ^= d;
        }
        // rho + pi
        uint64_t cur = state[1];
        for (int i = 0; i < 24; ++i) {
            int lane = kPiLanes[i];
            uint64_t tmp = state[lane];
            state[lane] = rotl64(cur, kRotations[i]);
            cur = tmp;
        }
        // chi
        for (int y = 0; y < 25; y += 5) {
            uint64_t row[5];
            for (int x = 0; x < 5; ++x) row[x] = state[y + x];
            for (int x = 0; x < 5; ++x) {
                state[y + x] = row[x] ^ (~row[(x + 1) % 5] & row[(x + 2) % 5]);
            }
        }
        // iota
        state[0] ^= kRoundConstants[round];
    }
}

Word keccak_sponge(ByteView data, uint8_t domain_pad) {
    constexpr size_t kRate = 136;  // 1600/8 - 2*32 for 256-bit output
    uint64_t state[25] = {};
    uint8_t block[kRate];

    size_t offset = 0;
    while (data.size() - offset >= kRate) {
        std::memcpy(block, data.data() + offset, kRate);
        for (size_t i = 0; i < kRate / 8; ++i) {
            uint64_t lane;
            std::memcpy(&lane, block + 8 * i, 8);
            state[i] ^= lane;  // little-endian lanes
        }
        keccak_f1600(state);
        offset += kRate;
    }

    size_t tail = data.size() - offset;
    std::memset(block, 0, kRate);
    if (tail > 0) std::memcpy(block, data.data() + offset, tail);
    block[tail] = domain_pad;
    block[kRate - 1] |= 0x80;
    for (size_t i = 0; i < kRate / 8; ++i) {
        uint64_t lane;
        std::memcpy(&lane, block + 8 * i, 8);
        state[i] ^= lane;
    }
    keccak_f1600(state);

    Word out;
    std::memcpy(out.data(), state, 32);
    return out;
}

}  // namespace

Word sha3_256(ByteView data) { return keccak_sponge(data, 0x06); }

Word keccak_256(ByteView data) { return keccak_sponge(data, 0x01); }

Word hash_bytes(HashKind kind, ByteView data) {
    return kind == HashKind::Sha3_256 ? sha3_256(data) : keccak_256(data);
}

Word hash_bytes(HashKind kind, const Bytes& data) {
    return hash_bytes(kind, ByteView(data.data(), data.size()));
}

std::string hash_kind_name(HashKind kind) {
    return kind == HashKind::Sha3_256 ? "sha3-256" : "keccak-256";
}

HashKind hash_kind_from_name(const std::string& name) {
    if (name == "sha3-256" || name == "sha3_256") return HashKind::Sha3_256;
    if (name == "keccak-256" || name == "keccak_256") return HashKind::Keccak_256;
    throw std::invalid_argument("unknown hash kind: " + name);
}

}  // namespace bioledger
