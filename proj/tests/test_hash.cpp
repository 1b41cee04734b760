#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "bioledger/hash.hpp"

using namespace bioledger;

namespace {

Bytes ascii(const std::string& s) { return Bytes(s.begin(), s.end()); }

}  // namespace

// NIST FIPS-202 vectors
TEST_CASE("sha3-256 known answers") {
    CHECK(to_hex(sha3_256(ascii(""))) ==
          "a7ffc6f8bf1ed76651c14756a061d662f580ff4de43b49fa82d80a4b80f8434a");
    CHECK(to_hex(sha3_256(ascii("abc"))) ==
          "3a985da74fe225b2045c172d6bd390bd855f086e3e9d525b46bfe24511431532");
    CHECK(to_hex(sha3_256(ascii("abcdbcdecdefdefgefghfghighijhijkijkljklmklmnlmnomnopnopq"))) ==
          "41c0dba2a9d6240849100376a8235e2c82e1b9998a999e21db32dd97496d3376");
    // multi-block input (200 bytes of 0xa3 spans the 136-byte rate)
    Bytes long_input(200, 0xa3);
    CHECK(to_hex(sha3_256(long_input)) ==
          "79f38adec5c20307a98ef76e8324afbfd46cfd81b22e3973c65fa1bd9de31787");
}

// pre-standard Keccak padding, as used on Ethereum
TEST_CASE("keccak-256 known answers") {
    CHECK(to_hex(keccak_256(ascii(""))) ==
          "c5d2460186f7233c927e7db2dcc703c0e500b653ca82273b7bfad8045d85a470");
    CHECK(to_hex(keccak_256(ascii("abc"))) ==
          "4e03657aea45a94fc7d47ba826c8d667c0d1e6e33a64a036ec44f58fa12d6c45");
}

TEST_CASE("kind dispatch and names") {
    Bytes msg = ascii("abc");
    CHECK(hash_bytes(HashKind::Sha3_256, msg) == sha3_256(msg));
    CHECK(hash_bytes(HashKind::Keccak_256, msg) == keccak_256(msg));
    CHECK(hash_kind_from_name("sha3-256") == HashKind::Sha3_256);
    CHECK(hash_kind_from_name("keccak_256") == HashKind::Keccak_256);
    CHECK(hash_kind_name(HashKind::Sha3_256) == "sha3-256");
    CHECK_THROWS(hash_kind_from_name("md5"));
}

TEST_CASE("hex round trip") {
    Bytes data = {0x00, 0x01, 0xab, 0xff};
    CHECK(to_hex(ByteView(data.data(), data.size())) == "0001abff");
    CHECK(from_hex("0001abff") == data);
    CHECK(from_hex("0x0001abff") == data);
    CHECK_THROWS(from_hex("abc"));
    CHECK_THROWS(from_hex("zz"));
}

TEST_CASE("word helpers") {
    Word w = word_from_u64(0x1234);
    CHECK(w[30] == 0x12);
    CHECK(w[31] == 0x34);
    CHECK(nonzero_bytes_u64(0x1234) == 2);
    CHECK(nonzero_bytes_u64(0x0100) == 1);
    CHECK(nonzero_bytes_u64(0) == 0);

    Word carry{};
    carry[31] = 0xff;
    Word bumped = word_add(carry, 1);
    CHECK(bumped[31] == 0x00);
    CHECK(bumped[30] == 0x01);
}
