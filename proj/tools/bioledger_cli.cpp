#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "bioledger/costtable.hpp"
#include "bioledger/quantize.hpp"
#include "bioledger/synthetic.hpp"

namespace {

using namespace bioledger;

constexpr int kExitOk = 0;
constexpr int kExitIntegrity = 2;
constexpr int kExitConfig = 3;
constexpr int kExitNotEnrolled = 4;

struct GlobalOptions {
    std::string scheme = "merkle_anchor";
    std::string gas_price = "1";
    std::string eth_usd = "140";
    uint64_t seed = 42;
    std::string store_dir = "store";
    std::string format = "csv";
    std::string gas_config;
    std::string hash = "sha3-256";
    bool occupied = false;  // price overwrites at sstore_reset
};

GasSchedule load_schedule(const GlobalOptions& opts) {
    if (opts.gas_config.empty()) return GasSchedule{};
    return GasSchedule::load_file(opts.gas_config);
}

CostTableOptions cost_options(const GlobalOptions& opts) {
    CostTableOptions options;
    options.schedule = load_schedule(opts);
    options.latency.rng_seed = opts.seed;
    options.gas_price_gwei = Decimal::parse(opts.gas_price);
    options.eth_usd_rate = Decimal::parse(opts.eth_usd);
    options.modify_pricing = opts.occupied ? ModifyPricing::ByOccupancy : ModifyPricing::Fresh;
    options.hash = hash_kind_from_name(opts.hash);
    return options;
}

LedgerConfig ledger_config(const GlobalOptions& opts) {
    LedgerConfig config;
    config.schedule = load_schedule(opts);
    config.latency.rng_seed = opts.seed;
    config.gas_price_gwei = Decimal::parse(opts.gas_price);
    config.eth_usd_rate = Decimal::parse(opts.eth_usd);
    config.modify_pricing = opts.occupied ? ModifyPricing::ByOccupancy : ModifyPricing::Fresh;
    config.hash = hash_kind_from_name(opts.hash);
    return config;
}

Bytes read_file_bytes(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::invalid_argument("cannot open template file: " + path);
    return Bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

/// Reference-encoded synthetic template: quantized features of one
/// generated sample (global/local 16-bit, face 32-bit float).
Bytes synthetic_template(Modality modality, uint64_t user, uint64_t seed) {
    switch (modality) {
        case Modality::Face: {
            auto data = generate_face_embeddings(1, 1, 4096, 50, 1.5, seed + user);
            std::vector<double> features(data.vectors[0].begin(), data.vectors[0].begin() + 100);
            return quantize(features, TemplateEncoding::Float32).payload;
        }
        case Modality::SignatureGlobal: {
            auto data = generate_global_features(1, 1, 100, 30, 1.5, seed + user);
            std::vector<double> features(data.vectors[0].begin(), data.vectors[0].begin() + 30);
            return quantize(features, TemplateEncoding::Int16Scaled).payload;
        }
        case Modality::SignatureLocal: {
            auto users = generate_local_signatures(1, 1, 9, 343, 1.0, seed + user);
            std::vector<double> flat;
            for (const auto& channel : users[0][0].channels) {
                flat.insert(flat.end(), channel.begin(), channel.end());
            }
            flat.resize(3087);
            return quantize(flat, TemplateEncoding::Int16Scaled).payload;
        }
    }
    throw std::invalid_argument("unknown modality");
}

PersistentStore open_or_create(const GlobalOptions& opts, bool allow_create) {
    std::filesystem::path dir = opts.store_dir;
    if (PersistentStore::exists(dir)) return PersistentStore::open(dir);
    if (!allow_create) {
        throw std::invalid_argument("no store at " + dir.string() + " (enroll first)");
    }
    return PersistentStore::create(dir, scheme_from_name(opts.scheme), ledger_config(opts));
}

int cmd_costs(const GlobalOptions& opts, const std::string& out_prefix, uint64_t n_templates) {
    CostTableOptions options = cost_options(opts);
    auto rows = build_cost_table(options);
    auto bulk = build_bulk_rows(options);
    rows.insert(rows.end(), bulk.begin(), bulk.end());

    std::string csv = cost_table_csv(rows);
    std::string jsn = cost_table_json(rows);
    std::string projections_block_csv, projections_block_json;
    if (n_templates > 0) {
        auto projections = build_projections(options, n_templates);
        projections_block_csv = projections_csv(projections);
        projections_block_json = projections_json(projections);
    }

    if (!out_prefix.empty()) {
        std::ofstream csv_out(out_prefix + ".csv", std::ios::trunc);
        csv_out << csv;
        if (!projections_block_csv.empty()) csv_out << "\n" << projections_block_csv;
        std::ofstream json_out(out_prefix + ".json", std::ios::trunc);
        if (projections_block_json.empty()) {
            json_out << jsn << "\n";
        } else {
            json_out << "{\"costs\":" << jsn << ",\"projections\":" << projections_block_json << "}\n";
        }
    }

    if (opts.format == "json") {
        if (projections_block_json.empty()) {
            std::cout << jsn << "\n";
        } else {
            std::cout << "{\"costs\":" << jsn << ",\"projections\":" << projections_block_json << "}\n";
        }
    } else {
        std::cout << csv;
        if (!projections_block_csv.empty()) std::cout << "\n" << projections_block_csv;
    }
    return kExitOk;
}

int cmd_enroll(const GlobalOptions& opts, uint64_t user, const std::string& template_file,
               const std::string& synthetic_modality, uint64_t batch) {
    Bytes bytes;
    std::string modality = "raw";
    if (!template_file.empty()) {
        bytes = read_file_bytes(template_file);
    } else if (!synthetic_modality.empty()) {
        Modality m = modality_from_name(synthetic_modality);
        bytes = synthetic_template(m, user, opts.seed);
        modality = modality_name(m);
    } else {
        throw std::invalid_argument("enroll needs --template or --synthetic");
    }

    PersistentStore store = open_or_create(opts, true);
    if (batch > 0) store.store().set_anchor_batch(batch);
    EnrollResult result = store.store().enroll(user, bytes, modality);
    store.save();
    std::cout << "{\"user\":" << user << ",\"scheme\":\"" << scheme_name(store.store().kind())
              << "\",\"integrity_ref\":\"" << to_hex(result.integrity_ref) << "\",\"receipt\":"
              << (result.receipt.has_value() ? result.receipt->to_json() : "\"deferred\"") << "}\n";
    return kExitOk;
}

int cmd_verify(const GlobalOptions& opts, uint64_t user) {
    PersistentStore store = open_or_create(opts, false);
    Bytes bytes = store.store().retrieve_verified(user);
    Word digest = hash_bytes(store.ledger().config().hash, bytes);
    std::cout << "{\"user\":" << user << ",\"bytes\":" << bytes.size() << ",\"digest\":\""
              << to_hex(digest) << "\",\"integrity\":\"ok\",\"onchain_cost\":{\"gas\":0}}\n";
    return kExitOk;
}

int cmd_remove(const GlobalOptions& opts, uint64_t user) {
    PersistentStore store = open_or_create(opts, false);
    TxReceipt receipt = store.store().remove(user);
    store.save();
    std::cout << "{\"user\":" << user << ",\"receipt\":" << receipt.to_json() << "}\n";
    return kExitOk;
}

struct SweepParams {
    std::string modality = "face";
    size_t users = 0;  // 0 = modality default
    size_t samples = 0;
    double separation = -1.0;
    std::string sizes;
    std::string dataset_file;
};

std::vector<size_t> parse_sizes(const std::string& text) {
    std::vector<size_t> sizes;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) sizes.push_back(std::stoull(item));
    return sizes;
}

TimeFunctionSet channel_subset(const TimeFunctionSet& s, const std::vector<size_t>& subset) {
    TimeFunctionSet out;
    for (size_t c : subset) out.channels.push_back(s.channels[c]);
    return out;
}

void require_samples_per_user(size_t samples, size_t minimum) {
    if (samples < minimum) {
        throw std::invalid_argument("sweep needs at least " + std::to_string(minimum) +
                                    " samples per user (5 for enrollment plus held-out queries in "
                                    "each half of the split)");
    }
}

/// DTW verification scores for a channel subset over the 5-enrollment
/// protocol.
ScoreSet local_protocol_scores(const std::vector<std::vector<TimeFunctionSet>>& users,
                               const std::vector<size_t>& subset) {
    ScoreSet scores;
    scores.polarity = ScorePolarity::Distance;
    for (size_t u = 0; u < users.size(); ++u) {
        std::vector<TimeFunctionSet> enrollment;
        for (size_t k = 0; k < 5; ++k) enrollment.push_back(channel_subset(users[u][k], subset));
        for (size_t k = 5; k < users[u].size(); ++k) {
            scores.genuine.push_back(verify_local(enrollment, channel_subset(users[u][k], subset)));
        }
        for (size_t v = 0; v < users.size(); ++v) {
            if (v == u || users[v].size() <= 5) continue;
            scores.impostor.push_back(verify_local(enrollment, channel_subset(users[v][5], subset)));
        }
    }
    return scores;
}

int cmd_sweep(const GlobalOptions& opts, const SweepParams& params) {
    Modality modality = modality_from_name(params.modality);
    std::vector<SweepPoint> curve;

    if (modality == Modality::Face) {
        size_t users = params.users ? params.users : 25;
        size_t samples = params.samples ? params.samples : 8;
        double separation = params.separation >= 0 ? params.separation : 1.2;
        LabeledEmbeddings data;
        if (!params.dataset_file.empty()) {
            data = load_dataset(params.dataset_file).embeddings;
        } else {
            data = generate_face_embeddings(users, samples, 4096, 50, separation, opts.seed);
        }
        std::vector<size_t> sizes = params.sizes.empty()
                                        ? std::vector<size_t>{4096, 2048, 1024, 512, 256, 128, 100, 64, 32, 16}
                                        : parse_sizes(params.sizes);
        curve = random_removal_sweep(data, sizes, opts.seed);
    } else if (modality == Modality::SignatureGlobal) {
        size_t users = params.users ? params.users : 30;
        size_t samples = params.samples ? params.samples : 20;
        double separation = params.separation >= 0 ? params.separation : 1.5;
        LabeledEmbeddings data;
        if (!params.dataset_file.empty()) {
            data = load_dataset(params.dataset_file).embeddings;
        } else {
            data = generate_global_features(users, samples, 100, 30, separation, opts.seed);
        }
        auto grouped = embeddings_by_user(data);
        for (const auto& user : grouped) require_samples_per_user(user.size(), 12);

        // split each user's samples in half: selection drives the search
        // criterion, evaluation produces the reported curve
        std::vector<std::vector<std::vector<double>>> selection(grouped.size()), evaluation(grouped.size());
        for (size_t u = 0; u < grouped.size(); ++u) {
            for (size_t k = 0; k < grouped[u].size(); ++k) {
                (k % 2 == 0 ? selection[u] : evaluation[u]).push_back(grouped[u][k]);
            }
        }

        std::vector<size_t> sizes = params.sizes.empty()
                                        ? std::vector<size_t>{1, 2, 5, 10, 20, 30, 40, 60, 80, 100}
                                        : parse_sizes(params.sizes);
        auto criterion = [&](const std::vector<size_t>& subset) {
            return -compute_eer(mahalanobis_protocol_scores(selection, subset)).eer_percent;
        };
        auto selected = sffs_select(data.dim(), criterion, sizes);
        for (size_t size : sizes) {
            double eer = compute_eer(mahalanobis_protocol_scores(evaluation, selected[size].features))
                             .eer_percent;
            curve.push_back({size, eer, opts.seed});
        }
    } else {
        size_t users = params.users ? params.users : 6;
        size_t samples = params.samples ? params.samples : 12;
        double separation = params.separation >= 0 ? params.separation : 1.0;
        auto data = params.dataset_file.empty()
                        ? generate_local_signatures(users, samples, 21, 60, separation, opts.seed)
                        : load_dataset(params.dataset_file).trajectories;
        for (const auto& user : data) require_samples_per_user(user.size(), 12);

        std::vector<std::vector<TimeFunctionSet>> selection(data.size()), evaluation(data.size());
        for (size_t u = 0; u < data.size(); ++u) {
            for (size_t k = 0; k < data[u].size(); ++k) {
                (k % 2 == 0 ? selection[u] : evaluation[u]).push_back(data[u][k]);
            }
        }

        std::vector<size_t> sizes =
            params.sizes.empty() ? std::vector<size_t>{1, 2, 3, 5, 7, 9, 12} : parse_sizes(params.sizes);
        auto criterion = [&](const std::vector<size_t>& subset) {
            return -compute_eer(local_protocol_scores(selection, subset)).eer_percent;
        };
        auto selected = sffs_select(21, criterion, sizes);
        for (size_t size : sizes) {
            double eer = compute_eer(local_protocol_scores(evaluation, selected[size].features)).eer_percent;
            curve.push_back({size, eer, opts.seed});
        }
    }

    if (opts.format == "json") {
        std::cout << "[";
        for (size_t i = 0; i < curve.size(); ++i) {
            if (i) std::cout << ",";
            std::cout << "{\"size\":" << curve[i].size << ",\"eer_percent\":" << curve[i].eer_percent
                      << ",\"seed\":" << curve[i].seed << "}";
        }
        std::cout << "]\n";
    } else {
        std::cout << "size,eer_percent,seed\n";
        for (const auto& point : curve) {
            std::ostringstream eer;
            eer.setf(std::ios::fixed);
            eer.precision(4);
            eer << point.eer_percent;
            std::cout << point.size << "," << eer.str() << "," << point.seed << "\n";
        }
    }
    return kExitOk;
}

int cmd_project(const GlobalOptions& opts, uint64_t n_templates, const std::string& scheme_filter) {
    CostTableOptions options = cost_options(opts);
    auto rows = build_projections(options, n_templates);
    if (!scheme_filter.empty()) {
        std::erase_if(rows, [&](const ProjectionRow& r) {
            return r.scheme.find(scheme_filter) == std::string::npos;
        });
    }
    std::cout << (opts.format == "json" ? projections_json(rows) + "\n" : projections_csv(rows));
    return kExitOk;
}

int cmd_dataset(const GlobalOptions& opts, const std::string& modality, size_t users, size_t samples,
                double separation, const std::string& out_path) {
    SyntheticDataset dataset =
        generate_synthetic(modality_from_name(modality), users, samples, separation, opts.seed);
    save_dataset(dataset, out_path);
    std::cout << "{\"written\":\"" << out_path << "\",\"modality\":\"" << modality
              << "\",\"users\":" << users << ",\"samples_per_user\":" << samples << "}\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"gas-metered template storage simulator and biometric sweep toolkit"};
    app.require_subcommand(1);
    app.fallthrough();  // global flags may follow the subcommand

    GlobalOptions opts;
    app.add_option("--scheme", opts.scheme, "storage scheme: full_on_chain | data_hashing | merkle_anchor");
    app.add_option("--gas-price", opts.gas_price, "gas price in gwei (decimal)");
    app.add_option("--eth-usd", opts.eth_usd, "ETH/USD rate (decimal)");
    app.add_option("--seed", opts.seed, "RNG seed");
    app.add_option("--store-dir", opts.store_dir, "persistent store directory");
    app.add_option("--format", opts.format, "output format: csv | json")
        ->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--gas-config", opts.gas_config, "gas schedule config file (key = value lines)");
    app.add_option("--hash", opts.hash, "digest algorithm: sha3-256 | keccak-256")
        ->check(CLI::IsMember({"sha3-256", "keccak-256"}));
    app.add_flag("--occupied", opts.occupied,
                 "price modifications of occupied records at sstore_reset instead of a fresh write");

    auto* costs = app.add_subcommand("costs", "simulate the full cost table");
    std::string out_prefix;
    uint64_t cost_projection_n = 0;
    costs->add_option("--out", out_prefix, "write <prefix>.csv and <prefix>.json");
    costs->add_option("--n-templates", cost_projection_n, "append cost projections for n templates");

    auto* enroll = app.add_subcommand("enroll", "enroll a template under the selected scheme");
    uint64_t user_id = 0;
    uint64_t batch = 0;
    std::string template_file, synthetic_modality;
    enroll->add_option("--user", user_id, "user id")->required();
    enroll->add_option("--template", template_file, "raw template byte file");
    enroll->add_option("--synthetic", synthetic_modality, "generate a reference template: face | global | local");
    enroll->add_option("--batch", batch,
                       "anchor the Merkle root only every k-th enrollment (persisted in the store)");

    auto* verify = app.add_subcommand("verify", "retrieve a template and check its integrity");
    verify->add_option("--user", user_id, "user id")->required();

    auto* remove = app.add_subcommand("remove", "remove an enrolled template");
    remove->add_option("--user", user_id, "user id")->required();

    auto* sweep = app.add_subcommand("sweep", "template-size vs verification-error sweep");
    SweepParams sweep_params;
    sweep->add_option("--modality", sweep_params.modality, "face | signature_global | signature_local")
        ->required();
    sweep->add_option("--users", sweep_params.users, "number of synthetic users");
    sweep->add_option("--samples", sweep_params.samples, "samples per user");
    sweep->add_option("--separation", sweep_params.separation, "synthetic class separation");
    sweep->add_option("--sizes", sweep_params.sizes, "comma-separated template sizes");
    sweep->add_option("--dataset", sweep_params.dataset_file, "dataset JSON instead of synthetic data");

    auto* project = app.add_subcommand("project", "extrapolate storage cost to n templates");
    uint64_t project_n = 1000000;
    std::string project_scheme;
    project->add_option("--n-templates", project_n, "number of templates")->required();
    project->add_option("--only-scheme", project_scheme, "filter rows by scheme substring");

    auto* dataset = app.add_subcommand("dataset", "write a synthetic dataset file");
    std::string ds_modality = "face", ds_out = "dataset.json";
    size_t ds_users = 10, ds_samples = 10;
    double ds_separation = 1.5;
    dataset->add_option("--modality", ds_modality)->required();
    dataset->add_option("--users", ds_users);
    dataset->add_option("--samples", ds_samples);
    dataset->add_option("--separation", ds_separation);
    dataset->add_option("--out", ds_out)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    try {
        if (costs->parsed()) return cmd_costs(opts, out_prefix, cost_projection_n);
        if (enroll->parsed()) return cmd_enroll(opts, user_id, template_file, synthetic_modality, batch);
        if (verify->parsed()) return cmd_verify(opts, user_id);
        if (remove->parsed()) return cmd_remove(opts, user_id);
        if (sweep->parsed()) return cmd_sweep(opts, sweep_params);
        if (project->parsed()) return cmd_project(opts, project_n, project_scheme);
        if (dataset->parsed()) return cmd_dataset(opts, ds_modality, ds_users, ds_samples, ds_separation, ds_out);
    } catch (const IntegrityViolation& e) {
        std::cerr << "{\"error\":\"integrity_violation\",\"detail\":\"" << e.what() << "\"}\n";
        return kExitIntegrity;
    } catch (const NotEnrolled& e) {
        std::cerr << "{\"error\":\"not_enrolled\",\"detail\":\"" << e.what() << "\"}\n";
        return kExitNotEnrolled;
    } catch (const std::invalid_argument& e) {
        std::cerr << "{\"error\":\"config\",\"detail\":\"" << e.what() << "\"}\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "{\"error\":\"runtime\",\"detail\":\"" << e.what() << "\"}\n";
        return 1;
    }
    return kExitOk;
}
