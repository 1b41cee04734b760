#include "bioledger/costtable.hpp"

#include <sstream>

#include "json.hpp"

namespace bioledger {

using nlohmann::json;

const std::vector<ReferenceTemplate>& reference_templates() {
    // global 30 x 16 bit, local 3087 x 16 bit, face 100 x 32 bit
    static const std::vector<ReferenceTemplate> kTemplates = {
        {"signature_global", 60, 480},
        {"signature_local", 6174, 49392},
        {"face", 400, 3200},
    };
    return kTemplates;
}

namespace {

Bytes pattern_template(uint64_t size) {
    Bytes bytes(size);
    for (uint64_t i = 0; i < size; ++i) bytes[i] = static_cast<uint8_t>(i % 255 + 1);
    return bytes;
}

CostRow make_row(const CostTableOptions& options, const std::string& modality, uint64_t bits,
                 const std::string& operation, const std::string& scheme, Gas gas, double latency) {
    FeeQuote fee = quote_fee(gas, options.gas_price_gwei, options.eth_usd_rate);
    return {modality, bits, operation, scheme, gas, fee.eth_cost, fee.usd_cost, latency};
}

}  // namespace

std::vector<CostRow> build_cost_table(const CostTableOptions& options) {
    std::vector<CostRow> rows;

    LedgerConfig config;
    config.schedule = options.schedule;
    config.latency = options.latency;
    config.gas_price_gwei = options.gas_price_gwei;
    config.eth_usd_rate = options.eth_usd_rate;
    config.modify_pricing = options.modify_pricing;
    config.hash = options.hash;

    // latency depends on the operation only; measure once per op
    Ledger latency_probe(config);
    double deploy_latency = latency_probe.measure_latency(TxOp::Create, options.latency_repetitions);
    double create_latency = deploy_latency;
    double modify_latency = latency_probe.measure_latency(TxOp::Modify, options.latency_repetitions);
    double delete_latency = latency_probe.measure_latency(TxOp::Delete, options.latency_repetitions);

    {
        Ledger ledger(config);
        auto [registry, receipt] = TemplateRegistry::deploy(ledger);
        rows.push_back(make_row(options, "-", 0, "deployment", "-", receipt.breakdown.net, deploy_latency));
    }

    for (const auto& ref : reference_templates()) {
        Bytes data = pattern_template(ref.byte_size);
        Bytes descriptor = default_descriptor(0x01);

        for (SchemeKind scheme :
             {SchemeKind::FullOnChain, SchemeKind::DataHashing, SchemeKind::MerkleAnchor}) {
            Ledger ledger(config);
            auto [registry, deploy_receipt] = TemplateRegistry::deploy(ledger);
            (void)deploy_receipt;

            Bytes onchain_payload = data;
            uint64_t target_id = 1;
            if (scheme == SchemeKind::DataHashing) {
                Word digest = hash_bytes(config.hash, data);
                onchain_payload.assign(digest.begin(), digest.end());
            } else if (scheme == SchemeKind::MerkleAnchor) {
                MerkleTree tree(config.hash);
                Word digest = hash_bytes(config.hash, data);
                Word root = tree.update_leaf(1, Bytes(digest.begin(), digest.end()));
                onchain_payload.assign(root.begin(), root.end());
                target_id = TemplateStore::kDefaultAnchorId;
            }

            Gas create_gas = registry.create_template(target_id, descriptor, onchain_payload).breakdown.net;
            // modification is an insertion into the same mapping; priced like
            // a fresh write under the default pricing mode
            Gas modify_gas = registry.modify_template(target_id, descriptor, onchain_payload).breakdown.net;

            Gas delete_gas;
            if (scheme == SchemeKind::MerkleAnchor) {
                // removing a template re-anchors the new root; the anchor
                // slot count never changes
                delete_gas = registry.modify_template(target_id, descriptor, onchain_payload).breakdown.net;
            } else {
                delete_gas = registry.delete_template(target_id).breakdown.net;
            }

            std::string scheme_label = scheme_name(scheme);
            rows.push_back(make_row(options, ref.modality, ref.bits, "creation", scheme_label,
                                    create_gas, create_latency));
            rows.push_back(make_row(options, ref.modality, ref.bits, "modification", scheme_label,
                                    modify_gas, modify_latency));
            rows.push_back(make_row(options, ref.modality, ref.bits, "deletion", scheme_label,
                                    delete_gas, delete_latency));
            rows.push_back(make_row(options, ref.modality, ref.bits, "retrieval", scheme_label, 0, 0.0));
        }
    }
    return rows;
}

std::vector<CostRow> build_bulk_rows(const CostTableOptions& options) {
    std::vector<CostRow> rows;
    Gas read = bulk_storage_gas(options.schedule, Decimal(1), StorageDirection::Read);
    Gas write = bulk_storage_gas(options.schedule, Decimal(1), StorageDirection::Write);
    rows.push_back(make_row(options, "-", 0, "read_1kb", "-", read, 0.0));
    rows.push_back(make_row(options, "-", 0, "write_1kb", "-", write, 0.0));
    return rows;
}

std::vector<ProjectionRow> build_projections(const CostTableOptions& options, uint64_t n_templates) {
    std::vector<ProjectionRow> rows;
    for (const auto& ref : reference_templates()) {
        for (SchemeKind scheme :
             {SchemeKind::FullOnChain, SchemeKind::DataHashing, SchemeKind::MerkleAnchor}) {
            for (TxOp op : {TxOp::Create, TxOp::Delete}) {
                FeeQuote fee = project_cost(options.schedule, scheme, n_templates, ref.byte_size, op,
                                            options.gas_price_gwei, options.eth_usd_rate);
                rows.push_back({scheme_name(scheme) + "/" + ref.modality, tx_op_name(op), n_templates,
                                fee.gas_used, fee.eth_cost, fee.usd_cost});
            }
        }
    }
    return rows;
}

std::string cost_table_csv(const std::vector<CostRow>& rows) {
    std::ostringstream out;
    out << "modality,template_size_bits,operation,scheme,gas,eth,usd,latency_avg_s\n";
    for (const auto& r : rows) {
        std::ostringstream latency;
        latency.setf(std::ios::fixed);
        latency.precision(2);
        latency << r.latency_avg_s;
        out << r.modality << "," << r.template_size_bits << "," << r.operation << "," << r.scheme << ","
            << r.gas << "," << r.eth.to_fixed(9) << "," << r.usd.to_fixed(4) << "," << latency.str()
            << "\n";
    }
    return out.str();
}

std::string cost_table_json(const std::vector<CostRow>& rows) {
    json j = json::array();
    for (const auto& r : rows) {
        j.push_back({{"modality", r.modality},
                     {"template_size_bits", r.template_size_bits},
                     {"operation", r.operation},
                     {"scheme", r.scheme},
                     {"gas", r.gas},
                     {"eth", r.eth.to_fixed(9)},
                     {"usd", r.usd.to_fixed(4)},
                     {"latency_avg_s", r.latency_avg_s}});
    }
    return j.dump(2);
}

std::string projections_csv(const std::vector<ProjectionRow>& rows) {
    std::ostringstream out;
    out << "scheme,op,n,gas,eth,usd\n";
    for (const auto& r : rows) {
        out << r.scheme << "," << r.operation << "," << r.n_templates << "," << r.gas << ","
            << r.eth.to_fixed(9) << "," << r.usd.to_fixed(4) << "\n";
    }
    return out.str();
}

std::string projections_json(const std::vector<ProjectionRow>& rows) {
    json j = json::array();
    for (const auto& r : rows) {
        j.push_back({{"scheme", r.scheme},
                     {"op", r.operation},
                     {"n", r.n_templates},
                     {"gas", r.gas},
                     {"eth", r.eth.to_fixed(9)},
                     {"usd", r.usd.to_fixed(4)}});
    }
    return j.dump(2);
}

}  // namespace bioledger
