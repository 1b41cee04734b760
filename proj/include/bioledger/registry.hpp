#pragma once

#include <utility>

#include "bioledger/ledger.hpp"

namespace bioledger {

/// Fixed 32-byte template descriptor (tag, version, modality, filler).
/// Content is opaque to the chain; the size is what the cost model sees.
Bytes default_descriptor(uint8_t modality_tag);

/// Typed wrapper over the on-ledger template map: create, modify, delete
/// and retrieve keyed by user ID. Modification is an insertion into the
/// same mapping; deletion unlinks the record but its history stays on the
/// ledger forever.
class TemplateRegistry {
  public:
    TemplateRegistry(Ledger& ledger, Address address);

    static std::pair<TemplateRegistry, TxReceipt> deploy(Ledger& ledger);

    TxReceipt create_template(uint64_t id, const Bytes& metadata, const Bytes& data);
    TxReceipt modify_template(uint64_t id, const Bytes& metadata, const Bytes& data);
    TxReceipt delete_template(uint64_t id);

    /// Read-only, free; vacant IDs return an empty sequence.
    Bytes get_template(uint64_t id) const;

    const Address& address() const { return address_; }
    Ledger& ledger() const { return *ledger_; }

  private:
    Ledger* ledger_;
    Address address_;
};

}  // namespace bioledger
