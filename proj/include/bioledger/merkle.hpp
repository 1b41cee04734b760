#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

#include "bioledger/hash.hpp"

namespace bioledger {

struct UnknownTemplateId : std::invalid_argument {
    UnknownTemplateId() : std::invalid_argument("template id is not present in the tree") {}
};

/// Sibling step of an inclusion path; `side` is where the sibling sits
/// relative to the running node.
struct ProofStep {
    Word sibling;
    enum class Side { Left, Right } side;
};

struct MerkleProof {
    uint64_t leaf_position = 0;
    std::vector<ProofStep> path;
    Word root;
};

/// Binary hash tree over template digests.
///
/// Digest rules (domain-separated so a leaf can never forge an interior
/// node): leaf = H(0x00 || bytes), interior = H(0x01 || left || right).
/// An odd node at any level is promoted unchanged. The empty tree has the
/// sentinel root H(0x00 || empty).
class MerkleTree {
  public:
    explicit MerkleTree(HashKind hash = HashKind::Sha3_256);

    /// Builds from scratch; equivalent to folding update_leaf insertions.
    static MerkleTree build(const std::vector<Bytes>& leaves, HashKind hash = HashKind::Sha3_256);
    static MerkleTree build_indexed(const std::vector<std::pair<uint64_t, Bytes>>& leaves,
                                    HashKind hash = HashKind::Sha3_256);

    /// Replaces the leaf for a known id (path-only recompute) or appends a
    /// new one. Returns the new root.
    Word update_leaf(uint64_t template_id, const Bytes& leaf_bytes);

    /// Removes a leaf; trailing leaves shift down one position.
    Word remove_leaf(uint64_t template_id);

    MerkleProof prove(uint64_t template_id) const;

    Word root() const;
    Word sentinel_root() const;
    size_t leaf_count() const { return levels_.empty() ? 0 : levels_[0].size(); }
    bool contains(uint64_t template_id) const { return leaf_index_.count(template_id) > 0; }
    std::optional<uint64_t> position_of(uint64_t template_id) const;

    /// Digest levels, leaves first, single root last (absent when empty).
    const std::vector<std::vector<Word>>& levels() const { return levels_; }

    Word leaf_digest(ByteView leaf_bytes) const;

  private:
    HashKind hash_;
    std::vector<std::vector<Word>> levels_;
    std::map<uint64_t, uint64_t> leaf_index_;

    Word interior_digest(const Word& left, const Word& right) const;
    void rebuild_above_leaves();
    void recompute_path(uint64_t position);
};

/// Folds an inclusion path from the claimed leaf bytes and compares against
/// the root. Any flipped bit in leaf, path or root fails.
bool verify_proof(HashKind hash, const Word& root, ByteView leaf_bytes, const MerkleProof& proof);

}  // namespace bioledger
