#include "bioledger/ledger.hpp"

#include <algorithm>
#include <mutex>
#include <numeric>
#include <sstream>

#include "bioledger/registry_layout.hpp"
#include "bioledger/rng.hpp"
#include "json.hpp"

namespace bioledger {

using nlohmann::json;

Word SlotStore::read(const Address& contract, const Word& key) const {
    auto it = slots_.find({contract, key});
    return it == slots_.end() ? kZeroWord : it->second;
}

bool SlotStore::occupied(const Address& contract, const Word& key) const {
    return slots_.count({contract, key}) > 0;
}

std::map<Word, Word> SlotStore::contract_slots(const Address& contract) const {
    std::map<Word, Word> out;
    for (const auto& [k, v] : slots_) {
        if (k.first == contract) out[k.second] = v;
    }
    return out;
}

void SlotStore::write(uint64_t tx_index, const Address& contract, const Word& key, const Word& value) {
    Word old = read(contract, key);
    history_.push_back({tx_index, contract, key, old, value});
    if (is_zero(value)) {
        slots_.erase({contract, key});
    } else {
        slots_[{contract, key}] = value;
    }
}

std::map<std::pair<Address, Word>, Word> SlotStore::replay(const std::vector<SlotChange>& history) {
    std::map<std::pair<Address, Word>, Word> slots;
    for (const auto& change : history) {
        if (is_zero(change.new_word)) {
            slots.erase({change.contract, change.key});
        } else {
            slots[{change.contract, change.key}] = change.new_word;
        }
    }
    return slots;
}

double LatencyModel::sample(uint64_t stream, uint64_t draw) const {
    Rng rng(rng_seed, (stream << 20) ^ draw);
    double u_jitter = rng.next_double();
    double u_block = rng.next_double();
    double latency = mean_block_interval_s * (1.0 - jitter_fraction + 2.0 * jitter_fraction * u_jitter);
    if (u_block < second_block_probability) latency *= 2.0;  // missed the first block
    return latency;
}

double trimmed_mean(std::vector<double> samples) {
    if (samples.size() < 3) throw TooFewRepetitions();
    std::sort(samples.begin(), samples.end());
    double sum = std::accumulate(samples.begin() + 1, samples.end() - 1, 0.0);
    return sum / static_cast<double>(samples.size() - 2);
}

std::string TxReceipt::to_json() const {
    std::ostringstream out;
    out << "{\"tx\":" << tx_index << ",\"status\":\"" << (success ? "success" : "reverted")
        << "\",\"gas\":{\"base\":" << breakdown.base << ",\"calldata\":" << breakdown.calldata
        << ",\"storage\":" << breakdown.storage << ",\"overhead\":" << breakdown.overhead
        << ",\"refund\":" << breakdown.refund_granted << ",\"net\":" << breakdown.net
        << "},\"fee\":" << fee.to_json() << ",\"latency_s\":" << confirmation_latency_s << "}";
    return out.str();
}

Ledger::Ledger(LedgerConfig config) : config_(std::move(config)) {
    config_.schedule.validate();
}

bool Ledger::deployed(const Address& contract) const {
    std::shared_lock lock(*mutex_);
    return std::find(contracts_.begin(), contracts_.end(), contract) != contracts_.end();
}

TxReceipt Ledger::make_receipt(const GasBreakdown& breakdown, bool state_changing) {
    TxReceipt receipt;
    receipt.tx_index = tx_count_++;
    receipt.breakdown = breakdown;
    receipt.fee = quote_fee(breakdown.net, config_.gas_price_gwei, config_.eth_usd_rate);
    receipt.confirmation_latency_s = state_changing ? config_.latency.sample(0, receipt.tx_index) : 0.0;
    return receipt;
}

std::pair<Address, TxReceipt> Ledger::deploy() {
    std::unique_lock lock(*mutex_);
    Bytes seed;
    const char tag[] = "contract";
    seed.insert(seed.end(), tag, tag + sizeof(tag) - 1);
    Bytes index = be64(contracts_.size());
    seed.insert(seed.end(), index.begin(), index.end());
    Word digest = hash_bytes(config_.hash, seed);
    Address address;
    std::copy(digest.begin(), digest.begin() + address.size(), address.begin());
    contracts_.push_back(address);

    GasBreakdown breakdown;
    breakdown.base = config_.schedule.deploy_gas;
    breakdown.net = breakdown.base;
    if (breakdown.net == 0) {
        // degenerate schedule used in tests; receipt still issued
        TxReceipt receipt = make_receipt(breakdown, true);
        return {address, receipt};
    }
    return {address, make_receipt(breakdown, true)};
}

TxReceipt Ledger::submit(const CallDescriptor& tx) {
    std::unique_lock lock(*mutex_);
    if (std::find(contracts_.begin(), contracts_.end(), tx.contract) == contracts_.end()) {
        throw UnknownContract();
    }

    const GasSchedule& schedule = config_.schedule;
    GasBreakdown breakdown;
    breakdown.base = schedule.tx_base;
    breakdown.calldata =
        calldata_gas(schedule, canonical_call_payload(tx.op, tx.metadata.size(), tx.data.size()));

    registry_layout::Record record(config_.hash, tx.template_id);

    if (tx.op == TxOp::Create || tx.op == TxOp::Modify) {
        if (registry_layout::metadata_aliases_marker(tx.metadata)) {
            // short descriptors that collide with the long-form length marker
            // are reserved; reject before touching state
            breakdown.net = breakdown.base + breakdown.calldata;
            TxReceipt receipt = make_receipt(breakdown, true);
            receipt.success = false;
            return receipt;
        }

        auto old_slots = record.occupied_slots(store_, tx.contract);
        auto writes = record.encode(tx.metadata, tx.data);

        Gas storage = 0;
        Gas refund_earned = 0;
        uint64_t touched = 0;
        for (const auto& [key, value] : writes) {
            bool was_occupied = store_.occupied(tx.contract, key);
            if (is_zero(value) && was_occupied) {
                // zero over an occupied slot is a clear, refund included
                storage += schedule.sstore_clear;
                refund_earned += schedule.clear_refund;
            } else if (config_.modify_pricing == ModifyPricing::Fresh || !was_occupied) {
                storage += schedule.sstore_set;
            } else {
                storage += schedule.sstore_reset;
            }
            ++touched;
        }
        // old slots beyond the new footprint are cleared with refunds
        std::vector<std::pair<Word, Word>> clears;
        for (const auto& key : old_slots) {
            bool overwritten = std::any_of(writes.begin(), writes.end(),
                                           [&](const auto& w) { return w.first == key; });
            if (!overwritten) {
                storage += schedule.sstore_clear;
                refund_earned += schedule.clear_refund;
                ++touched;
                clears.push_back({key, kZeroWord});
            }
        }

        breakdown.storage = storage;
        breakdown.overhead = schedule.exec_overhead_base + touched * schedule.exec_overhead_per_slot;
        Gas gross = breakdown.gross();
        breakdown.net = apply_refund(gross, refund_earned);
        breakdown.refund_granted = gross - breakdown.net;

        TxReceipt receipt = make_receipt(breakdown, true);
        for (const auto& [key, value] : writes) store_.write(receipt.tx_index, tx.contract, key, value);
        for (const auto& [key, value] : clears) store_.write(receipt.tx_index, tx.contract, key, value);
        return receipt;
    }

    if (tx.op == TxOp::Delete) {
        auto old_slots = record.occupied_slots(store_, tx.contract);
        uint64_t cleared = old_slots.size();
        breakdown.storage = cleared * schedule.sstore_clear;
        breakdown.overhead = schedule.exec_overhead_base + cleared * schedule.exec_overhead_per_slot;
        Gas refund_earned = cleared * schedule.clear_refund;
        Gas gross = breakdown.gross();
        breakdown.net = apply_refund(gross, refund_earned);
        breakdown.refund_granted = gross - breakdown.net;

        TxReceipt receipt = make_receipt(breakdown, true);
        for (const auto& key : old_slots) store_.write(receipt.tx_index, tx.contract, key, kZeroWord);
        return receipt;
    }

    throw RevertedCall("retrieval goes through call(), not a transaction");
}

Bytes Ledger::call(const Address& contract, uint64_t template_id) const {
    std::shared_lock lock(*mutex_);
    if (std::find(contracts_.begin(), contracts_.end(), contract) == contracts_.end()) {
        throw UnknownContract();
    }
    registry_layout::Record record(config_.hash, template_id);
    return record.decode_data(store_, contract);
}

double Ledger::measure_latency(TxOp op, int repetitions) const {
    if (repetitions < 3) throw TooFewRepetitions();
    std::vector<double> samples;
    samples.reserve(repetitions);
    uint64_t stream = 1000 + static_cast<uint64_t>(op);
    for (int i = 0; i < repetitions; ++i) {
        samples.push_back(config_.latency.sample(stream, static_cast<uint64_t>(i)));
    }
    return trimmed_mean(std::move(samples));
}

std::string Ledger::export_json() const {
    std::shared_lock lock(*mutex_);
    json j;
    j["schedule"] = config_.schedule.as_map();
    j["latency"] = {{"mean_block_interval_s", config_.latency.mean_block_interval_s},
                    {"jitter_fraction", config_.latency.jitter_fraction},
                    {"second_block_probability", config_.latency.second_block_probability},
                    {"rng_seed", config_.latency.rng_seed}};
    j["modify_pricing"] = config_.modify_pricing == ModifyPricing::Fresh ? "fresh" : "by_occupancy";
    j["gas_price_gwei"] = config_.gas_price_gwei.to_string();
    j["eth_usd_rate"] = config_.eth_usd_rate.to_string();
    j["hash"] = hash_kind_name(config_.hash);
    j["tx_count"] = tx_count_;

    json contracts = json::array();
    for (const auto& a : contracts_) contracts.push_back(to_hex(a));
    j["contracts"] = contracts;

    json slots = json::object();
    for (const auto& [key, value] : store_.slots()) {
        slots[to_hex(key.first)][to_hex(key.second)] = to_hex(value);
    }
    j["slots"] = slots;

    json history = json::array();
    for (const auto& change : store_.history()) {
        history.push_back({{"tx", change.tx_index},
                           {"contract", to_hex(change.contract)},
                           {"key", to_hex(change.key)},
                           {"old", to_hex(change.old_word)},
                           {"new", to_hex(change.new_word)}});
    }
    j["history"] = history;
    return j.dump();
}

Ledger Ledger::import_json(const std::string& text) {
    json j = json::parse(text);

    LedgerConfig config;
    GasSchedule schedule;
    auto fields = schedule.as_map();
    for (auto& [name, _] : fields) {
        fields[name] = j["schedule"].at(name).get<Gas>();
    }
    std::string schedule_text;
    for (const auto& [name, value] : fields) {
        schedule_text += name + " = " + std::to_string(value) + "\n";
    }
    config.schedule = GasSchedule::parse_config(schedule_text, "<import>");

    config.latency.mean_block_interval_s = j["latency"]["mean_block_interval_s"].get<double>();
    config.latency.jitter_fraction = j["latency"]["jitter_fraction"].get<double>();
    config.latency.second_block_probability = j["latency"]["second_block_probability"].get<double>();
    config.latency.rng_seed = j["latency"]["rng_seed"].get<uint64_t>();
    config.modify_pricing =
        j["modify_pricing"].get<std::string>() == "fresh" ? ModifyPricing::Fresh : ModifyPricing::ByOccupancy;
    config.gas_price_gwei = Decimal::parse(j["gas_price_gwei"].get<std::string>());
    config.eth_usd_rate = Decimal::parse(j["eth_usd_rate"].get<std::string>());
    config.hash = hash_kind_from_name(j["hash"].get<std::string>());

    Ledger ledger(config);
    ledger.tx_count_ = j["tx_count"].get<uint64_t>();
    for (const auto& a : j["contracts"]) {
        ledger.contracts_.push_back(address_from_hex(a.get<std::string>()));
    }
    for (const auto& change : j["history"]) {
        ledger.store_.history_.push_back({change["tx"].get<uint64_t>(),
                                          address_from_hex(change["contract"].get<std::string>()),
                                          word_from_hex(change["key"].get<std::string>()),
                                          word_from_hex(change["old"].get<std::string>()),
                                          word_from_hex(change["new"].get<std::string>())});
    }
    for (const auto& [addr_hex, contract_slots] : j["slots"].items()) {
        Address addr = address_from_hex(addr_hex);
        for (const auto& [key_hex, value_hex] : contract_slots.items()) {
            ledger.store_.slots_[{addr, word_from_hex(key_hex)}] = word_from_hex(value_hex.get<std::string>());
        }
    }
    return ledger;
}

}  // namespace bioledger
