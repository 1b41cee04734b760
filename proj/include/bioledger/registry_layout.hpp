#pragma once

#include <utility>
#include <vector>

#include "bioledger/ledger.hpp"

namespace bioledger::registry_layout {

// Slot layout of one template record inside the registry contract's
// `mapping(uint => record{metadata, data})`:
//
//   metadata head:  H(id_word || field 0)
//   data head:      H(id_word || field 1)
//   long payloads:  H(head key) + i, one word per 32 bytes
//
// The metadata head stores the raw descriptor when it fits one word (no
// length byte, so a full 32-byte descriptor still takes a single slot).
// Data follows the dynamic-array convention: below 32 bytes it packs into
// the head word with 2*len in the low byte, otherwise the head holds the
// odd marker 2*len+1 and payload words follow.

class Record {
  public:
    Record(HashKind hash, uint64_t template_id);

    const Word& metadata_key() const { return metadata_key_; }
    const Word& data_key() const { return data_key_; }

    /// Keys of every currently occupied slot of this record, metadata
    /// region first.
    std::vector<Word> occupied_slots(const SlotStore& store, const Address& contract) const;

    /// Slot writes that store (metadata, data). Zero-length regions still
    /// write their head word.
    std::vector<std::pair<Word, Word>> encode(const Bytes& metadata, const Bytes& data) const;

    Bytes decode_data(const SlotStore& store, const Address& contract) const;

  private:
    HashKind hash_;
    Word metadata_key_;
    Word data_key_;

    Word payload_slot(const Word& head, uint64_t index) const;
};

/// True when a short descriptor would be indistinguishable from a long-form
/// length marker (first 24 bytes zero, odd low byte). Such descriptors are
/// reserved and rejected at the call boundary.
bool metadata_aliases_marker(const Bytes& metadata);

}  // namespace bioledger::registry_layout
