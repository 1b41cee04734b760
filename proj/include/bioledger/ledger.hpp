#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <stdexcept>
#include <string>
#include <vector>

#include "bioledger/gas.hpp"
#include "bioledger/hash.hpp"

namespace bioledger {

struct UnknownContract : std::runtime_error {
    UnknownContract() : std::runtime_error("call against an undeployed contract address") {}
};

struct RevertedCall : std::runtime_error {
    explicit RevertedCall(const std::string& why) : std::runtime_error("call reverted: " + why) {}
};

struct TooFewRepetitions : std::invalid_argument {
    TooFewRepetitions() : std::invalid_argument("latency measurement needs at least 3 repetitions") {}
};

/// One slot mutation, kept forever. Replaying the log from genesis
/// reproduces the slot map; deleted payloads stay visible here.
struct SlotChange {
    uint64_t tx_index;
    Address contract;
    Word key;
    Word old_word;
    Word new_word;
};

/// Contract storage: (address, slot key) -> word. Absent keys read as zero.
class SlotStore {
  public:
    Word read(const Address& contract, const Word& key) const;
    bool occupied(const Address& contract, const Word& key) const;

    /// All nonzero slots of one contract, key-ordered.
    std::map<Word, Word> contract_slots(const Address& contract) const;

    const std::vector<SlotChange>& history() const { return history_; }

    /// Rebuilds a slot map from a change log (zero writes erase).
    static std::map<std::pair<Address, Word>, Word> replay(const std::vector<SlotChange>& history);
    const std::map<std::pair<Address, Word>, Word>& slots() const { return slots_; }

  private:
    friend class Ledger;
    void write(uint64_t tx_index, const Address& contract, const Word& key, const Word& value);

    std::map<std::pair<Address, Word>, Word> slots_;
    std::vector<SlotChange> history_;
};

/// Confirmation-delay model: uniform jitter around the mean block interval,
/// with a slice of transactions missing their first block and waiting out a
/// second one. Targets the right order of magnitude for a 2019-era testnet,
/// nothing more.
struct LatencyModel {
    double mean_block_interval_s = 13.0;
    double jitter_fraction = 0.3;  // in [0, 1)
    double second_block_probability = 0.15;
    uint64_t rng_seed = 42;

    /// Deterministic in (seed, stream, draw index).
    double sample(uint64_t stream, uint64_t draw) const;
};

/// Mean with one min and one max discarded.
double trimmed_mean(std::vector<double> samples);

struct TxReceipt {
    uint64_t tx_index = 0;
    GasBreakdown breakdown;
    FeeQuote fee;
    double confirmation_latency_s = 0.0;
    bool success = true;

    std::string to_json() const;
};

/// How modifications of occupied records are priced. Fresh matches the
/// reference cost table (a modification is billed like a first write);
/// ByOccupancy prices overwrites at sstore_reset.
enum class ModifyPricing { Fresh, ByOccupancy };

struct CallDescriptor {
    Address contract{};
    TxOp op = TxOp::Create;
    uint64_t template_id = 0;
    Bytes metadata;
    Bytes data;
};

struct LedgerConfig {
    GasSchedule schedule;
    LatencyModel latency;
    ModifyPricing modify_pricing = ModifyPricing::Fresh;
    Decimal gas_price_gwei = Decimal(1);
    Decimal eth_usd_rate = Decimal(140);
    HashKind hash = HashKind::Sha3_256;
};

/// Single-chain in-memory ledger. One implicit caller, transactions applied
/// in submission order behind a single-writer lock; read-only calls take a
/// shared lock and see a consistent snapshot.
class Ledger {
  public:
    explicit Ledger(LedgerConfig config = {});

    const LedgerConfig& config() const { return config_; }

    /// Registers a fresh contract address and charges the flat deployment
    /// gas. No code is stored; the registry semantics live ledger-side.
    std::pair<Address, TxReceipt> deploy();

    /// Applies a state-changing registry call atomically. Gas follows the
    /// cost model, with vacant/occupied taken from the observed slots.
    TxReceipt submit(const CallDescriptor& tx);

    /// Read-only call: returns the stored data bytes for an ID. Free, no
    /// latency, no receipt.
    Bytes call(const Address& contract, uint64_t template_id) const;

    /// Averages `repetitions` simulated confirmation delays for one
    /// operation, dropping the minimum and the maximum sample.
    double measure_latency(TxOp op, int repetitions) const;

    const SlotStore& store() const { return store_; }
    uint64_t tx_count() const { return tx_count_; }
    bool deployed(const Address& contract) const;

    std::string export_json() const;
    static Ledger import_json(const std::string& text);

  private:
    friend class TemplateRegistry;

    LedgerConfig config_;
    SlotStore store_;
    std::vector<Address> contracts_;
    uint64_t tx_count_ = 0;
    std::unique_ptr<std::shared_mutex> mutex_ = std::make_unique<std::shared_mutex>();

    TxReceipt make_receipt(const GasBreakdown& breakdown, bool state_changing);
};

}  // namespace bioledger
