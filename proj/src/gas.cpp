#include "bioledger/gas.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace bioledger {

namespace {

uint64_t pad32(uint64_t n) { return (n + 31) / 32 * 32; }

void append_word_u64(Bytes& out, uint64_t value) {
    Word w = word_from_u64(value);
    out.insert(out.end(), w.begin(), w.end());
}

void append_filled(Bytes& out, uint64_t count, uint8_t fill) {
    out.insert(out.end(), count, fill);
}

}  // namespace

std::string tx_op_name(TxOp op) {
    switch (op) {
        case TxOp::Create: return "create";
        case TxOp::Modify: return "modify";
        case TxOp::Delete: return "delete";
        case TxOp::Retrieve: return "retrieve";
    }
    throw std::invalid_argument("unknown tx op");
}

void GasSchedule::validate() const {
    auto positive = [](Gas v, const char* name) {
        if (v == 0) throw std::invalid_argument(std::string("gas constant must be positive: ") + name);
    };
    positive(tx_base, "tx_base");
    positive(sstore_set, "sstore_set");
    positive(sstore_reset, "sstore_reset");
    positive(sstore_clear, "sstore_clear");
    positive(clear_refund, "clear_refund");
    positive(sload, "sload");
    positive(calldata_nonzero, "calldata_nonzero");
    positive(calldata_zero, "calldata_zero");
    positive(deploy_gas, "deploy_gas");
    // exec overheads may be zero
}

std::map<std::string, Gas> GasSchedule::as_map() const {
    return {
        {"tx_base", tx_base},
        {"sstore_set", sstore_set},
        {"sstore_reset", sstore_reset},
        {"sstore_clear", sstore_clear},
        {"clear_refund", clear_refund},
        {"sload", sload},
        {"calldata_nonzero", calldata_nonzero},
        {"calldata_zero", calldata_zero},
        {"exec_overhead_base", exec_overhead_base},
        {"exec_overhead_per_slot", exec_overhead_per_slot},
        {"deploy_gas", deploy_gas},
    };
}

GasSchedule GasSchedule::parse_config(const std::string& text, const std::string& origin) {
    GasSchedule schedule;
    std::map<std::string, Gas*> fields = {
        {"tx_base", &schedule.tx_base},
        {"sstore_set", &schedule.sstore_set},
        {"sstore_reset", &schedule.sstore_reset},
        {"sstore_clear", &schedule.sstore_clear},
        {"clear_refund", &schedule.clear_refund},
        {"sload", &schedule.sload},
        {"calldata_nonzero", &schedule.calldata_nonzero},
        {"calldata_zero", &schedule.calldata_zero},
        {"exec_overhead_base", &schedule.exec_overhead_base},
        {"exec_overhead_per_slot", &schedule.exec_overhead_per_slot},
        {"deploy_gas", &schedule.deploy_gas},
    };

    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        auto is_space = [](unsigned char c) { return std::isspace(c); };
        line.erase(line.begin(), std::find_if_not(line.begin(), line.end(), is_space));
        line.erase(std::find_if_not(line.rbegin(), line.rend(), is_space).base(), line.end());
        if (line.empty()) continue;

        auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw std::invalid_argument(origin + ":" + std::to_string(line_no) + ": expected `key = value`");
        }
        std::string key = line.substr(0, eq);
        std::string value = line.substr(eq + 1);
        key.erase(std::find_if_not(key.rbegin(), key.rend(), is_space).base(), key.end());
        value.erase(value.begin(), std::find_if_not(value.begin(), value.end(), is_space));

        auto it = fields.find(key);
        if (it == fields.end()) {
            throw std::invalid_argument(origin + ":" + std::to_string(line_no) + ": unknown gas constant `" + key + "`");
        }
        try {
            if (value.empty() || value.find_first_not_of("0123456789") != std::string::npos) {
                throw std::invalid_argument("not a non-negative integer");
            }
            *it->second = std::stoull(value);
        } catch (const std::exception&) {
            throw std::invalid_argument(origin + ":" + std::to_string(line_no) + ": bad integer `" + value + "`");
        }
    }
    schedule.validate();
    return schedule;
}

GasSchedule GasSchedule::load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open gas schedule config: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str(), path);
}

uint64_t slots_for_byte_array(uint64_t length) {
    if (length < 32) return 1;
    return 1 + (length + 31) / 32;
}

uint64_t slots_for_metadata(uint64_t length) {
    if (length <= 32) return 1;
    return 1 + (length + 31) / 32;
}

Gas calldata_gas(const GasSchedule& schedule, ByteView payload) {
    Gas total = 0;
    for (uint8_t b : payload) {
        total += b == 0 ? schedule.calldata_zero : schedule.calldata_nonzero;
    }
    return total;
}

Gas bulk_storage_gas(const GasSchedule& schedule, const Decimal& kilobytes, StorageDirection direction) {
    if (kilobytes < Decimal(0)) throw std::invalid_argument("kilobytes must be >= 0");
    Decimal words_exact = kilobytes * Decimal(32);
    // exact ceil: smallest integer >= words_exact
    uint64_t words = static_cast<uint64_t>(words_exact.to_double());
    while (Decimal::from_u64(words) < words_exact) ++words;
    while (words > 0 && words_exact <= Decimal::from_u64(words - 1)) --words;
    return words * (direction == StorageDirection::Write ? schedule.sstore_set : schedule.sload);
}

Gas bulk_storage_gas(const GasSchedule& schedule, double kilobytes, StorageDirection direction) {
    std::ostringstream s;
    s.precision(15);
    s << kilobytes;
    return bulk_storage_gas(schedule, Decimal::parse(s.str()), direction);
}

Gas apply_refund(Gas gross, Gas refund_earned) {
    if (gross == 0) throw std::invalid_argument("gross gas must be positive");
    Gas cap = gross / 2;
    return gross - std::min(refund_earned, cap);
}

FeeQuote quote_fee(Gas gas_used, const Decimal& gas_price_gwei, const Decimal& eth_usd_rate) {
    FeeQuote q;
    q.gas_used = gas_used;
    q.gas_price_gwei = gas_price_gwei;
    q.eth_usd_rate = eth_usd_rate;
    // 1 gwei = 1e-9 ETH
    q.eth_cost = Decimal::from_u64(gas_used) * gas_price_gwei.shift10(9);
    q.usd_cost = q.eth_cost * eth_usd_rate;
    return q;
}

std::string FeeQuote::to_json() const {
    std::ostringstream out;
    out << "{\"gas\":" << gas_used << ",\"gwei\":\"" << gas_price_gwei.to_string() << "\",\"eth\":\""
        << eth_cost.to_string() << "\",\"usd\":\"" << usd_cost.to_string() << "\"}";
    return out.str();
}

Bytes canonical_call_payload(TxOp op, uint64_t metadata_len, uint64_t data_len) {
    Bytes payload;
    // 4-byte selector, always nonzero
    append_filled(payload, 4, 0xb1);
    // canonical ID word: a small nonzero uint
    append_word_u64(payload, 1);

    if (op == TxOp::Delete || op == TxOp::Retrieve) return payload;
    if (op != TxOp::Create && op != TxOp::Modify) throw std::invalid_argument("unknown tx op");

    // two dynamic `bytes` arguments: head offsets, then length-prefixed tails
    uint64_t metadata_offset = 3 * 32;
    uint64_t data_offset = metadata_offset + 32 + pad32(metadata_len);
    append_word_u64(payload, metadata_offset);
    append_word_u64(payload, data_offset);

    append_word_u64(payload, metadata_len);
    append_filled(payload, metadata_len, 0x01);
    append_filled(payload, pad32(metadata_len) - metadata_len, 0x00);

    append_word_u64(payload, data_len);
    append_filled(payload, data_len, 0x01);
    append_filled(payload, pad32(data_len) - data_len, 0x00);
    return payload;
}

GasBreakdown estimate_tx(const GasSchedule& schedule, TxOp op, uint64_t data_len, uint64_t metadata_len,
                         SlotState prior_state) {
    GasBreakdown b;
    if (op == TxOp::Retrieve) {
        // read-only call: no transaction, no fee
        return b;
    }

    b.base = schedule.tx_base;
    b.calldata = calldata_gas(schedule, canonical_call_payload(op, metadata_len, data_len));

    uint64_t record_slots = slots_for_metadata(metadata_len) + slots_for_byte_array(data_len);
    Gas refund_earned = 0;

    switch (op) {
        case TxOp::Create:
        case TxOp::Modify: {
            Gas per_slot = prior_state == SlotState::Vacant ? schedule.sstore_set : schedule.sstore_reset;
            b.storage = record_slots * per_slot;
            b.overhead = schedule.exec_overhead_base + record_slots * schedule.exec_overhead_per_slot;
            break;
        }
        case TxOp::Delete: {
            uint64_t cleared = prior_state == SlotState::Occupied ? record_slots : 0;
            b.storage = cleared * schedule.sstore_clear;
            refund_earned = cleared * schedule.clear_refund;
            b.overhead = schedule.exec_overhead_base + cleared * schedule.exec_overhead_per_slot;
            break;
        }
        case TxOp::Retrieve:
            break;
    }

    Gas gross = b.gross();
    b.net = apply_refund(gross, refund_earned);
    b.refund_granted = gross - b.net;
    return b;
}

}  // namespace bioledger
