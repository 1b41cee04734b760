#include "bioledger/merkle.hpp"

namespace bioledger {

namespace {

constexpr uint8_t kLeafPrefix = 0x00;
constexpr uint8_t kInteriorPrefix = 0x01;

}  // namespace

MerkleTree::MerkleTree(HashKind hash) : hash_(hash) {}

Word MerkleTree::leaf_digest(ByteView leaf_bytes) const {
    Bytes preimage;
    preimage.reserve(leaf_bytes.size() + 1);
    preimage.push_back(kLeafPrefix);
    preimage.insert(preimage.end(), leaf_bytes.begin(), leaf_bytes.end());
    return hash_bytes(hash_, preimage);
}

Word MerkleTree::interior_digest(const Word& left, const Word& right) const {
    Bytes preimage;
    preimage.reserve(65);
    preimage.push_back(kInteriorPrefix);
    preimage.insert(preimage.end(), left.begin(), left.end());
    preimage.insert(preimage.end(), right.begin(), right.end());
    return hash_bytes(hash_, preimage);
}

Word MerkleTree::sentinel_root() const { return leaf_digest(ByteView{}); }

Word MerkleTree::root() const {
    if (levels_.empty() || levels_[0].empty()) return sentinel_root();
    return levels_.back().front();
}

std::optional<uint64_t> MerkleTree::position_of(uint64_t template_id) const {
    auto it = leaf_index_.find(template_id);
    if (it == leaf_index_.end()) return std::nullopt;
    return it->second;
}

void MerkleTree::rebuild_above_leaves() {
    if (levels_.empty() || levels_[0].empty()) {
        levels_.clear();
        return;
    }
    levels_.resize(1);
    while (levels_.back().size() > 1) {
        const auto& below = levels_.back();
        std::vector<Word> above;
        above.reserve((below.size() + 1) / 2);
        for (size_t i = 0; i < below.size(); i += 2) {
            if (i + 1 < below.size()) {
                above.push_back(interior_digest(below[i], below[i + 1]));
            } else {
                above.push_back(below[i]);  // odd node promoted unchanged
            }
        }
        levels_.push_back(std::move(above));
    }
}

void MerkleTree::recompute_path(uint64_t position) {
    // sizes are unchanged, so only the leaf-to-root chain needs rehashing
    size_t index = position;
    for (size_t level = 1; level < levels_.size(); ++level) {
        const auto& below = levels_[level - 1];
        size_t parent = index / 2;
        size_t left = parent * 2;
        if (left + 1 < below.size()) {
            levels_[level][parent] = interior_digest(below[left], below[left + 1]);
        } else {
            levels_[level][parent] = below[left];
        }
        index = parent;
    }
}

MerkleTree MerkleTree::build(const std::vector<Bytes>& leaves, HashKind hash) {
    std::vector<std::pair<uint64_t, Bytes>> indexed;
    indexed.reserve(leaves.size());
    for (size_t i = 0; i < leaves.size(); ++i) indexed.push_back({i, leaves[i]});
    return build_indexed(indexed, hash);
}

MerkleTree MerkleTree::build_indexed(const std::vector<std::pair<uint64_t, Bytes>>& leaves, HashKind hash) {
    MerkleTree tree(hash);
    if (leaves.empty()) return tree;
    tree.levels_.emplace_back();
    tree.levels_[0].reserve(leaves.size());
    for (const auto& [id, bytes] : leaves) {
        if (tree.leaf_index_.count(id)) throw std::invalid_argument("duplicate template id in leaf set");
        tree.leaf_index_[id] = tree.levels_[0].size();
        tree.levels_[0].push_back(tree.leaf_digest(bytes));
    }
    tree.rebuild_above_leaves();
    return tree;
}

Word MerkleTree::update_leaf(uint64_t template_id, const Bytes& leaf_bytes) {
    auto position = position_of(template_id);
    if (position.has_value()) {
        levels_[0][*position] = leaf_digest(leaf_bytes);
        recompute_path(*position);
        return root();
    }
    if (levels_.empty()) levels_.emplace_back();
    leaf_index_[template_id] = levels_[0].size();
    levels_[0].push_back(leaf_digest(leaf_bytes));
    rebuild_above_leaves();
    return root();
}

Word MerkleTree::remove_leaf(uint64_t template_id) {
    auto position = position_of(template_id);
    if (!position.has_value()) throw UnknownTemplateId();
    levels_[0].erase(levels_[0].begin() + static_cast<ptrdiff_t>(*position));
    leaf_index_.erase(template_id);
    for (auto& [id, pos] : leaf_index_) {
        if (pos > *position) --pos;
    }
    rebuild_above_leaves();
    return root();
}

MerkleProof MerkleTree::prove(uint64_t template_id) const {
    auto position = position_of(template_id);
    if (!position.has_value()) throw UnknownTemplateId();

    MerkleProof proof;
    proof.leaf_position = *position;
    proof.root = root();

    size_t index = *position;
    for (size_t level = 0; level + 1 < levels_.size(); ++level) {
        const auto& nodes = levels_[level];
        size_t sibling = index ^ 1;
        if (sibling < nodes.size()) {
            proof.path.push_back({nodes[sibling],
                                  sibling > index ? ProofStep::Side::Right : ProofStep::Side::Left});
        }
        // promoted odd nodes contribute no step
        index /= 2;
    }
    return proof;
}

bool verify_proof(HashKind hash, const Word& root, ByteView leaf_bytes, const MerkleProof& proof) {
    Bytes leaf_preimage;
    leaf_preimage.reserve(leaf_bytes.size() + 1);
    leaf_preimage.push_back(kLeafPrefix);
    leaf_preimage.insert(leaf_preimage.end(), leaf_bytes.begin(), leaf_bytes.end());
    Word current = hash_bytes(hash, leaf_preimage);

    for (const auto& step : proof.path) {
        Bytes preimage;
        preimage.reserve(65);
        preimage.push_back(kInteriorPrefix);
        if (step.side == ProofStep::Side::Right) {
            preimage.insert(preimage.end(), current.begin(), current.end());
            preimage.insert(preimage.end(), step.sibling.begin(), step.sibling.end());
        } else {
            preimage.insert(preimage.end(), step.sibling.begin(), step.sibling.end());
            preimage.insert(preimage.end(), current.begin(), current.end());
        }
        current = hash_bytes(hash, preimage);
    }
    return current == root;
}

}  // namespace bioledger
