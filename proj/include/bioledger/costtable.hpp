#pragma once

#include <string>
#include <vector>

#include "bioledger/ledger.hpp"
#include "bioledger/schemes.hpp"

namespace bioledger {

/// One row of the cost report: gas/fee/latency for an operation under a
/// storage scheme and template modality.
struct CostRow {
    std::string modality;  // "-" for the deployment row
    uint64_t template_size_bits = 0;
    std::string operation;
    std::string scheme;
    Gas gas = 0;
    Decimal eth;
    Decimal usd;
    double latency_avg_s = 0.0;
};

struct CostTableOptions {
    GasSchedule schedule;
    LatencyModel latency;
    Decimal gas_price_gwei = Decimal(1);
    Decimal eth_usd_rate = Decimal(140);
    int latency_repetitions = 10;
    ModifyPricing modify_pricing = ModifyPricing::Fresh;
    HashKind hash = HashKind::Sha3_256;
};

/// Runs the simulated pipeline (deploy, create, modify, delete, retrieve)
/// for the three reference template encodings under each storage scheme.
/// Gas figures come from actual ledger receipts.
std::vector<CostRow> build_cost_table(const CostTableOptions& options);

/// Per-kilobyte raw storage rows (read/write).
std::vector<CostRow> build_bulk_rows(const CostTableOptions& options);

struct ProjectionRow {
    std::string scheme;
    std::string operation;
    uint64_t n_templates = 0;
    Gas gas = 0;
    Decimal eth;
    Decimal usd;
};

/// Cost extrapolations to n templates for every scheme and reference
/// modality size.
std::vector<ProjectionRow> build_projections(const CostTableOptions& options, uint64_t n_templates);

std::string cost_table_csv(const std::vector<CostRow>& rows);
std::string cost_table_json(const std::vector<CostRow>& rows);
std::string projections_csv(const std::vector<ProjectionRow>& rows);
std::string projections_json(const std::vector<ProjectionRow>& rows);

/// Reference template encodings: (modality, element count, encoding bits).
struct ReferenceTemplate {
    std::string modality;
    uint64_t byte_size;
    uint64_t bits;
};
const std::vector<ReferenceTemplate>& reference_templates();

}  // namespace bioledger
