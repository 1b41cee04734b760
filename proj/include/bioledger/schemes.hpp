#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <stdexcept>
#include <string>

#include "bioledger/merkle.hpp"
#include "bioledger/offchain.hpp"
#include "bioledger/registry.hpp"

namespace bioledger {

struct NotEnrolled : std::runtime_error {
    explicit NotEnrolled(uint64_t user_id)
        : std::runtime_error("user " + std::to_string(user_id) + " is not enrolled") {}
};

struct IntegrityViolation : std::runtime_error {
    explicit IntegrityViolation(const std::string& why)
        : std::runtime_error("integrity violation: " + why) {}
};

enum class SchemeKind { FullOnChain, DataHashing, MerkleAnchor };

std::string scheme_name(SchemeKind kind);
SchemeKind scheme_from_name(const std::string& name);

struct EnrollResult {
    /// Absent when the Merkle root update was deferred by batching.
    std::optional<TxReceipt> receipt;
    Word integrity_ref;  // content digest, or the new anchor root
};

/// One template store behind a common enroll/retrieve/remove interface.
///
/// Full on-chain keeps the raw bytes in the registry; data hashing keeps
/// bytes off-chain with their digest on-chain; the Merkle scheme keeps a
/// single 32-byte root on-chain under a reserved anchor ID, so its on-chain
/// cost does not grow with the number of templates.
///
/// Enroll/remove serialize through a single-writer section so the anchored
/// root never lags the tree unnoticed; retrievals run under a shared lock.
class TemplateStore {
  public:
    static constexpr uint64_t kDefaultAnchorId = UINT64_MAX;

    TemplateStore(SchemeKind kind, TemplateRegistry registry,
                  std::optional<OffChainStore> off_chain = std::nullopt,
                  uint64_t anchor_id = kDefaultAnchorId, uint8_t modality_tag = 0);

    EnrollResult enroll(uint64_t user_id, ByteView template_bytes, const std::string& modality = "raw");

    /// Returns the template bytes only when integrity holds: digest match
    /// for data hashing, inclusion proof against the on-chain root for the
    /// Merkle scheme. Free of on-chain cost. While batched root updates are
    /// pending, Merkle retrieval fails closed (the anchored root lags).
    Bytes retrieve_verified(uint64_t user_id) const;

    TxReceipt remove(uint64_t user_id);

    /// Anchors any deferred Merkle root updates now.
    std::optional<TxReceipt> flush_anchor();

    bool enrolled(uint64_t user_id) const;
    SchemeKind kind() const { return kind_; }
    TemplateRegistry& registry() { return registry_; }
    const MerkleTree& merkle_tree() const { return tree_; }
    uint64_t anchor_id() const { return anchor_id_; }

    /// Merkle root updates are written on-chain every k-th enrollment.
    /// k = 1 anchors every change immediately.
    void set_anchor_batch(uint64_t k);
    uint64_t anchor_batch() const { return anchor_batch_; }
    uint64_t anchor_pending() const { return anchor_pending_; }
    void restore_anchor_pending(uint64_t pending) { anchor_pending_ = pending; }

  private:
    SchemeKind kind_;
    TemplateRegistry registry_;
    std::optional<OffChainStore> off_chain_;
    MerkleTree tree_;
    uint64_t anchor_id_;
    Bytes descriptor_;
    uint64_t anchor_batch_ = 1;
    uint64_t anchor_pending_ = 0;
    std::unique_ptr<std::shared_mutex> mutex_ = std::make_unique<std::shared_mutex>();

    HashKind hash() const { return registry_.ledger().config().hash; }
    TxReceipt anchor_root(const Word& root);
    Word onchain_root() const;
};

/// Analytic cost extrapolation to n templates: full on-chain and data
/// hashing scale linearly, the Merkle anchor is one root write regardless
/// of n. Retrieval projects to zero.
FeeQuote project_cost(const GasSchedule& schedule, SchemeKind scheme, uint64_t n_templates,
                      uint64_t template_size, TxOp op, const Decimal& gas_price_gwei,
                      const Decimal& eth_usd_rate);

/// Store-directory layout shared by the CLI commands:
///   <dir>/store.conf   scheme kind, anchor id, registry address
///   <dir>/chain.json   full ledger export (slots, history, config)
///   <dir>/offchain/    content-addressed files + index.json
class PersistentStore {
  public:
    static PersistentStore create(const std::filesystem::path& dir, SchemeKind kind, LedgerConfig config);
    static PersistentStore open(const std::filesystem::path& dir);
    static bool exists(const std::filesystem::path& dir);

    TemplateStore& store() { return *store_; }
    Ledger& ledger() { return *ledger_; }

    /// Writes chain.json and store.conf back to disk.
    void save();

  private:
    PersistentStore(std::filesystem::path dir, SchemeKind kind, std::unique_ptr<Ledger> ledger,
                    Address registry_address, uint64_t anchor_id);

    std::filesystem::path dir_;
    SchemeKind kind_;
    std::unique_ptr<Ledger> ledger_;
    Address registry_address_;
    uint64_t anchor_id_;
    std::optional<TemplateStore> store_;
};

}  // namespace bioledger
