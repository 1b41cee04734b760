#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "bioledger/bytes.hpp"
#include "bioledger/decimal.hpp"

namespace bioledger {

using Gas = uint64_t;

/// EVM-style cost constants, pre-Istanbul rules (the 2019 schedule).
///
/// exec_overhead_base / exec_overhead_per_slot absorb the dispatch, memory
/// and hashing costs the slot/calldata terms do not model. Their defaults
/// come from a weighted least-squares fit against reference Ropsten
/// measurements of the template-registry contract (see docs/calibration.md);
/// both values are kept even so refund-capped deletions land on an exact
/// half of their gross gas.
struct GasSchedule {
    Gas tx_base = 21000;
    Gas sstore_set = 20000;        // first write to a vacant slot
    Gas sstore_reset = 5000;       // overwrite of an occupied slot
    Gas sstore_clear = 5000;       // write of zero over an occupied slot
    Gas clear_refund = 15000;      // refund earned per cleared slot
    Gas sload = 200;               // read of one slot
    Gas calldata_nonzero = 68;     // per nonzero calldata byte
    Gas calldata_zero = 4;         // per zero calldata byte
    Gas exec_overhead_base = 200;  // fitted, see above
    Gas exec_overhead_per_slot = 64;
    Gas deploy_gas = 498274;

    /// Throws std::invalid_argument when a constant violates its bounds
    /// (all strictly positive, overheads >= 0).
    void validate() const;

    /// Reads `key = integer` lines; '#' starts a comment. Unknown keys and
    /// malformed lines throw with a line number.
    static GasSchedule load_file(const std::string& path);
    static GasSchedule parse_config(const std::string& text, const std::string& origin = "<config>");

    std::map<std::string, Gas> as_map() const;
};

/// Per-transaction gas decomposition. net = base + calldata + storage +
/// overhead - refund_granted, with the refund capped at half the gross.
struct GasBreakdown {
    Gas base = 0;
    Gas calldata = 0;
    Gas storage = 0;
    Gas overhead = 0;
    Gas refund_granted = 0;
    Gas net = 0;

    Gas gross() const { return base + calldata + storage + overhead; }
};

/// Cost of a transaction in gas, ether and dollars. eth and usd are exact
/// decimal values derived from (gas, gwei, rate); no binary floats touch
/// the reported tables.
struct FeeQuote {
    Gas gas_used = 0;
    Decimal gas_price_gwei;
    Decimal eth_usd_rate;
    Decimal eth_cost;
    Decimal usd_cost;

    std::string to_json() const;
};

enum class TxOp { Create, Modify, Delete, Retrieve };
enum class SlotState { Vacant, Occupied };
enum class StorageDirection { Read, Write };

std::string tx_op_name(TxOp op);

/// Slot footprint of a dynamic byte array: one packed slot below 32 bytes
/// (payload shares the slot with the length marker), otherwise a length
/// slot plus ceil(len/32) payload words.
uint64_t slots_for_byte_array(uint64_t length);

/// Slot footprint of the fixed metadata descriptor: descriptors up to one
/// word are stored raw in a single slot (no length byte reserved), longer
/// ones fall back to the dynamic-array layout.
uint64_t slots_for_metadata(uint64_t length);

/// Intrinsic calldata cost: calldata_nonzero per nonzero byte, calldata_zero
/// per zero byte.
Gas calldata_gas(const GasSchedule& schedule, ByteView payload);

/// Raw word cost of bulk storage per the headline per-KB figures:
/// ceil(kb * 32) words priced at sstore_set (write) or sload (read).
Gas bulk_storage_gas(const GasSchedule& schedule, const Decimal& kilobytes, StorageDirection direction);
Gas bulk_storage_gas(const GasSchedule& schedule, double kilobytes, StorageDirection direction);

/// EVM refund rule: net = gross - min(refund_earned, floor(gross/2)).
Gas apply_refund(Gas gross, Gas refund_earned);

FeeQuote quote_fee(Gas gas_used, const Decimal& gas_price_gwei, const Decimal& eth_usd_rate);

/// ABI-shaped canonical payload for a registry call: 4-byte selector,
/// 32-byte ID word (canonical small-uint shape), then offset/length words
/// and padded byte arrays for create/modify. Payload bytes are modeled as
/// nonzero; everything else gets its true zero/nonzero pattern. Transaction
/// pricing is a function of argument lengths only, which keeps receipts
/// deterministic and independent of template content.
Bytes canonical_call_payload(TxOp op, uint64_t metadata_len, uint64_t data_len);

/// One-call cost estimate for a registry transaction against a record in
/// `prior_state`. Deletion prices the record's occupied slots as clears with
/// refunds; Retrieve is a read-only call and nets zero.
GasBreakdown estimate_tx(const GasSchedule& schedule, TxOp op, uint64_t data_len, uint64_t metadata_len,
                         SlotState prior_state);

}  // namespace bioledger
