#include "bioledger/registry.hpp"

#include <cstring>
#include <stdexcept>

#include "bioledger/registry_layout.hpp"

namespace bioledger {

namespace registry_layout {

namespace {

constexpr uint64_t kMetadataField = 0;
constexpr uint64_t kDataField = 1;

Word field_key(HashKind hash, uint64_t template_id, uint64_t field) {
    Bytes preimage;
    Word id_word = word_from_u64(template_id);
    Word field_word = word_from_u64(field);
    preimage.insert(preimage.end(), id_word.begin(), id_word.end());
    preimage.insert(preimage.end(), field_word.begin(), field_word.end());
    return hash_bytes(hash, preimage);
}

bool fits_u64(const Word& w) {
    for (int i = 0; i < 24; ++i) {
        if (w[i] != 0) return false;
    }
    return true;
}

uint64_t word_to_u64(const Word& w) {
    uint64_t v = 0;
    for (int i = 24; i < 32; ++i) v = v << 8 | w[i];
    return v;
}

bool is_long_marker(const Word& w) {
    return fits_u64(w) && (w[31] & 1) != 0;
}

uint64_t marker_length(const Word& w) { return (word_to_u64(w) - 1) / 2; }

Word pack_bytes(ByteView bytes) {
    Word w{};
    std::memcpy(w.data(), bytes.data(), bytes.size());
    return w;
}

}  // namespace

Record::Record(HashKind hash, uint64_t template_id)
    : hash_(hash),
      metadata_key_(field_key(hash, template_id, kMetadataField)),
      data_key_(field_key(hash, template_id, kDataField)) {}

Word Record::payload_slot(const Word& head, uint64_t index) const {
    Word base = hash_bytes(hash_, ByteView(head.data(), head.size()));
    return word_add(base, index);
}

std::vector<std::pair<Word, Word>> Record::encode(const Bytes& metadata, const Bytes& data) const {
    std::vector<std::pair<Word, Word>> writes;

    if (metadata.size() <= 32) {
        writes.push_back({metadata_key_, pack_bytes(metadata)});
    } else {
        writes.push_back({metadata_key_, word_from_u64(2 * metadata.size() + 1)});
        for (uint64_t i = 0; i * 32 < metadata.size(); ++i) {
            size_t offset = i * 32;
            size_t chunk = std::min<size_t>(32, metadata.size() - offset);
            writes.push_back({payload_slot(metadata_key_, i), pack_bytes(ByteView(metadata.data() + offset, chunk))});
        }
    }

    if (data.size() < 32) {
        Word w = pack_bytes(data);
        w[31] = static_cast<uint8_t>(2 * data.size());
        writes.push_back({data_key_, w});
    } else {
        writes.push_back({data_key_, word_from_u64(2 * data.size() + 1)});
        for (uint64_t i = 0; i * 32 < data.size(); ++i) {
            size_t offset = i * 32;
            size_t chunk = std::min<size_t>(32, data.size() - offset);
            writes.push_back({payload_slot(data_key_, i), pack_bytes(ByteView(data.data() + offset, chunk))});
        }
    }
    return writes;
}

std::vector<Word> Record::occupied_slots(const SlotStore& store, const Address& contract) const {
    std::vector<Word> keys;

    Word meta = store.read(contract, metadata_key_);
    if (!is_zero(meta)) {
        keys.push_back(metadata_key_);
        if (is_long_marker(meta)) {
            uint64_t len = marker_length(meta);
            for (uint64_t i = 0; i * 32 < len; ++i) {
                Word key = payload_slot(metadata_key_, i);
                if (store.occupied(contract, key)) keys.push_back(key);
            }
        }
    }

    Word data = store.read(contract, data_key_);
    if (!is_zero(data)) {
        keys.push_back(data_key_);
        if ((data[31] & 1) != 0) {
            uint64_t len = marker_length(data);
            for (uint64_t i = 0; i * 32 < len; ++i) {
                Word key = payload_slot(data_key_, i);
                if (store.occupied(contract, key)) keys.push_back(key);
            }
        }
    }
    return keys;
}

Bytes Record::decode_data(const SlotStore& store, const Address& contract) const {
    Word head = store.read(contract, data_key_);
    if (is_zero(head)) return {};

    if ((head[31] & 1) == 0) {
        uint64_t len = head[31] / 2;
        if (len > 31) throw std::logic_error("corrupt short-form data slot");
        return Bytes(head.begin(), head.begin() + len);
    }

    if (!fits_u64(head)) throw std::logic_error("corrupt long-form data marker");
    uint64_t len = marker_length(head);
    Bytes out;
    out.reserve(len);
    for (uint64_t i = 0; i * 32 < len; ++i) {
        Word w = store.read(contract, payload_slot(data_key_, i));
        size_t chunk = std::min<uint64_t>(32, len - i * 32);
        out.insert(out.end(), w.begin(), w.begin() + chunk);
    }
    return out;
}

bool metadata_aliases_marker(const Bytes& metadata) {
    if (metadata.empty() || metadata.size() > 32) return false;
    Word packed = pack_bytes(metadata);
    return is_long_marker(packed);
}

}  // namespace registry_layout

Bytes default_descriptor(uint8_t modality_tag) {
    // opaque 32-byte descriptor: format tag, version, modality, fixed filler
    Bytes d(32);
    d[0] = 'B';
    d[1] = 'T';
    d[2] = 0x01;  // descriptor version
    d[3] = modality_tag;
    for (size_t i = 4; i < d.size(); ++i) d[i] = static_cast<uint8_t>(0xa0 + i);
    return d;
}

TemplateRegistry::TemplateRegistry(Ledger& ledger, Address address)
    : ledger_(&ledger), address_(address) {
    if (!ledger.deployed(address)) throw UnknownContract();
}

std::pair<TemplateRegistry, TxReceipt> TemplateRegistry::deploy(Ledger& ledger) {
    auto [address, receipt] = ledger.deploy();
    return {TemplateRegistry(ledger, address), receipt};
}

TxReceipt TemplateRegistry::create_template(uint64_t id, const Bytes& metadata, const Bytes& data) {
    return ledger_->submit({address_, TxOp::Create, id, metadata, data});
}

TxReceipt TemplateRegistry::modify_template(uint64_t id, const Bytes& metadata, const Bytes& data) {
    return ledger_->submit({address_, TxOp::Modify, id, metadata, data});
}

TxReceipt TemplateRegistry::delete_template(uint64_t id) {
    return ledger_->submit({address_, TxOp::Delete, id, {}, {}});
}

Bytes TemplateRegistry::get_template(uint64_t id) const {
    return ledger_->call(address_, id);
}

}  // namespace bioledger
