#pragma once

#include <string>

#include "bioledger/bytes.hpp"

namespace bioledger {

/// 256-bit digest selection. SHA3-256 is the default everywhere; Keccak-256
/// (the pre-standard padding used by Ethereum) is selectable for ecosystem
/// compatibility.
enum class HashKind {
    Sha3_256,
    Keccak_256,
};

Word sha3_256(ByteView data);
Word keccak_256(ByteView data);
Word hash_bytes(HashKind kind, ByteView data);

Word hash_bytes(HashKind kind, const Bytes& data);

std::string hash_kind_name(HashKind kind);
HashKind hash_kind_from_name(const std::string& name);

}  // namespace bioledger
