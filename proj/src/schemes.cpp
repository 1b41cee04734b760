#include "bioledger/schemes.hpp"

#include <fstream>
#include <mutex>
#include <sstream>

namespace bioledger {

std::string scheme_name(SchemeKind kind) {
    switch (kind) {
        case SchemeKind::FullOnChain: return "full_on_chain";
        case SchemeKind::DataHashing: return "data_hashing";
        case SchemeKind::MerkleAnchor: return "merkle_anchor";
    }
    throw std::invalid_argument("unknown scheme kind");
}

SchemeKind scheme_from_name(const std::string& name) {
    if (name == "full_on_chain" || name == "full") return SchemeKind::FullOnChain;
    if (name == "data_hashing" || name == "hashing") return SchemeKind::DataHashing;
    if (name == "merkle_anchor" || name == "merkle") return SchemeKind::MerkleAnchor;
    throw std::invalid_argument("unknown scheme: " + name);
}

TemplateStore::TemplateStore(SchemeKind kind, TemplateRegistry registry,
                             std::optional<OffChainStore> off_chain, uint64_t anchor_id,
                             uint8_t modality_tag)
    : kind_(kind),
      registry_(registry),
      off_chain_(std::move(off_chain)),
      tree_(registry.ledger().config().hash),
      anchor_id_(anchor_id),
      descriptor_(default_descriptor(modality_tag)) {
    if (kind_ != SchemeKind::FullOnChain && !off_chain_.has_value()) {
        throw std::invalid_argument(scheme_name(kind_) + " needs an off-chain store");
    }
    if (kind_ == SchemeKind::MerkleAnchor) {
        // leaves are the content digests, in index order
        std::vector<std::pair<uint64_t, Bytes>> leaves;
        for (const auto& e : off_chain_->entries()) {
            leaves.push_back({e.user_id, Bytes(e.digest.begin(), e.digest.end())});
        }
        tree_ = MerkleTree::build_indexed(leaves, hash());
    }
}

bool TemplateStore::enrolled(uint64_t user_id) const {
    if (kind_ == SchemeKind::FullOnChain) return !registry_.get_template(user_id).empty();
    return off_chain_->has(user_id);
}

TxReceipt TemplateStore::anchor_root(const Word& root) {
    return registry_.modify_template(anchor_id_, descriptor_, Bytes(root.begin(), root.end()));
}

Word TemplateStore::onchain_root() const {
    Bytes stored = registry_.get_template(anchor_id_);
    if (stored.size() != 32) throw IntegrityViolation("anchor root missing or malformed on-chain");
    Word root;
    std::copy(stored.begin(), stored.end(), root.begin());
    return root;
}

void TemplateStore::set_anchor_batch(uint64_t k) {
    if (k == 0) throw std::invalid_argument("anchor batch must be at least 1");
    anchor_batch_ = k;
}

std::optional<TxReceipt> TemplateStore::flush_anchor() {
    std::unique_lock lock(*mutex_);
    if (kind_ != SchemeKind::MerkleAnchor || anchor_pending_ == 0) return std::nullopt;
    anchor_pending_ = 0;
    return anchor_root(tree_.root());
}

EnrollResult TemplateStore::enroll(uint64_t user_id, ByteView template_bytes, const std::string& modality) {
    std::unique_lock lock(*mutex_);
    switch (kind_) {
        case SchemeKind::FullOnChain: {
            TxReceipt receipt = registry_.create_template(
                user_id, descriptor_, Bytes(template_bytes.begin(), template_bytes.end()));
            return {receipt, hash_bytes(hash(), template_bytes)};
        }
        case SchemeKind::DataHashing: {
            Word digest = off_chain_->put(user_id, template_bytes, modality);
            TxReceipt receipt =
                registry_.create_template(user_id, descriptor_, Bytes(digest.begin(), digest.end()));
            return {receipt, digest};
        }
        case SchemeKind::MerkleAnchor: {
            Word digest = off_chain_->put(user_id, template_bytes, modality);
            Word root = tree_.update_leaf(user_id, Bytes(digest.begin(), digest.end()));
            if (++anchor_pending_ < anchor_batch_) {
                return {std::nullopt, root};  // root update deferred
            }
            anchor_pending_ = 0;
            TxReceipt receipt = anchor_root(root);
            return {receipt, root};
        }
    }
    throw std::invalid_argument("unknown scheme kind");
}

Bytes TemplateStore::retrieve_verified(uint64_t user_id) const {
    std::shared_lock lock(*mutex_);
    switch (kind_) {
        case SchemeKind::FullOnChain: {
            Bytes bytes = registry_.get_template(user_id);
            if (bytes.empty()) throw NotEnrolled(user_id);
            return bytes;
        }
        case SchemeKind::DataHashing: {
            if (!off_chain_->has(user_id)) throw NotEnrolled(user_id);
            Bytes onchain = registry_.get_template(user_id);
            if (onchain.size() != 32) throw IntegrityViolation("on-chain digest missing or malformed");
            Bytes bytes = off_chain_->read(user_id);
            Word recomputed = hash_bytes(hash(), bytes);
            if (!std::equal(recomputed.begin(), recomputed.end(), onchain.begin())) {
                throw IntegrityViolation("off-chain template digest does not match the chain");
            }
            return bytes;
        }
        case SchemeKind::MerkleAnchor: {
            if (!off_chain_->has(user_id)) throw NotEnrolled(user_id);
            Bytes bytes = off_chain_->read(user_id);
            Word recomputed = hash_bytes(hash(), bytes);
            MerkleProof proof = tree_.prove(user_id);
            Word root = onchain_root();
            if (!verify_proof(hash(), root, ByteView(recomputed.data(), recomputed.size()), proof)) {
                if (anchor_pending_ > 0) {
                    throw IntegrityViolation(std::to_string(anchor_pending_) +
                                             " batched root update(s) not yet anchored");
                }
                throw IntegrityViolation("inclusion proof does not match the anchored root");
            }
            return bytes;
        }
    }
    throw std::invalid_argument("unknown scheme kind");
}

TxReceipt TemplateStore::remove(uint64_t user_id) {
    std::unique_lock lock(*mutex_);
    if (!enrolled(user_id)) throw NotEnrolled(user_id);
    switch (kind_) {
        case SchemeKind::FullOnChain:
            return registry_.delete_template(user_id);
        case SchemeKind::DataHashing: {
            TxReceipt receipt = registry_.delete_template(user_id);
            off_chain_->erase(user_id);
            return receipt;
        }
        case SchemeKind::MerkleAnchor: {
            // removal anchors immediately, flushing any deferred updates
            Word root = tree_.remove_leaf(user_id);
            anchor_pending_ = 0;
            TxReceipt receipt = anchor_root(root);
            off_chain_->erase(user_id);
            return receipt;
        }
    }
    throw std::invalid_argument("unknown scheme kind");
}

FeeQuote project_cost(const GasSchedule& schedule, SchemeKind scheme, uint64_t n_templates,
                      uint64_t template_size, TxOp op, const Decimal& gas_price_gwei,
                      const Decimal& eth_usd_rate) {
    Gas total = 0;
    if (op != TxOp::Retrieve) {
        switch (scheme) {
            case SchemeKind::FullOnChain: {
                SlotState prior = op == TxOp::Delete ? SlotState::Occupied : SlotState::Vacant;
                total = estimate_tx(schedule, op, template_size, 32, prior).net * n_templates;
                break;
            }
            case SchemeKind::DataHashing: {
                SlotState prior = op == TxOp::Delete ? SlotState::Occupied : SlotState::Vacant;
                total = estimate_tx(schedule, op, 32, 32, prior).net * n_templates;
                break;
            }
            case SchemeKind::MerkleAnchor: {
                // every operation is one re-anchor of the 32-byte root,
                // priced as a fresh write, independent of n
                total = n_templates == 0 ? 0 : estimate_tx(schedule, TxOp::Create, 32, 32, SlotState::Vacant).net;
                break;
            }
        }
    }
    return quote_fee(total, gas_price_gwei, eth_usd_rate);
}

namespace {

std::map<std::string, std::string> parse_kv_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open " + path.string());
    std::map<std::string, std::string> out;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw std::invalid_argument(path.string() + ":" + std::to_string(line_no) +
                                        ": expected `key = value`");
        }
        auto trim = [](std::string s) {
            auto b = s.find_first_not_of(" \t\r");
            auto e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        out[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    return out;
}

}  // namespace

PersistentStore::PersistentStore(std::filesystem::path dir, SchemeKind kind,
                                 std::unique_ptr<Ledger> ledger, Address registry_address,
                                 uint64_t anchor_id)
    : dir_(std::move(dir)),
      kind_(kind),
      ledger_(std::move(ledger)),
      registry_address_(registry_address),
      anchor_id_(anchor_id) {
    std::optional<OffChainStore> off_chain;
    if (kind_ != SchemeKind::FullOnChain) {
        off_chain.emplace(dir_ / "offchain", ledger_->config().hash);
    }
    store_.emplace(kind_, TemplateRegistry(*ledger_, registry_address_), std::move(off_chain), anchor_id_);
}

bool PersistentStore::exists(const std::filesystem::path& dir) {
    return std::filesystem::exists(dir / "store.conf");
}

PersistentStore PersistentStore::create(const std::filesystem::path& dir, SchemeKind kind,
                                        LedgerConfig config) {
    std::filesystem::create_directories(dir);
    auto ledger = std::make_unique<Ledger>(std::move(config));
    auto [address, receipt] = ledger->deploy();
    (void)receipt;
    PersistentStore store(dir, kind, std::move(ledger), address, TemplateStore::kDefaultAnchorId);
    store.save();
    return store;
}

PersistentStore PersistentStore::open(const std::filesystem::path& dir) {
    auto conf = parse_kv_file(dir / "store.conf");
    SchemeKind kind = scheme_from_name(conf.at("scheme"));
    uint64_t anchor_id = std::stoull(conf.at("anchor_id"));
    Address address = address_from_hex(conf.at("registry_address"));

    std::ifstream chain(dir / "chain.json");
    if (!chain) throw std::invalid_argument("missing chain.json in " + dir.string());
    std::ostringstream buf;
    buf << chain.rdbuf();
    auto ledger = std::make_unique<Ledger>(Ledger::import_json(buf.str()));
    PersistentStore store(dir, kind, std::move(ledger), address, anchor_id);
    if (auto it = conf.find("anchor_batch"); it != conf.end()) {
        store.store_->set_anchor_batch(std::stoull(it->second));
    }
    if (auto it = conf.find("anchor_pending"); it != conf.end()) {
        store.store_->restore_anchor_pending(std::stoull(it->second));
    }
    return store;
}

void PersistentStore::save() {
    std::ofstream chain(dir_ / "chain.json", std::ios::trunc);
    if (!chain) throw std::runtime_error("cannot write chain.json");
    chain << ledger_->export_json() << "\n";

    std::ofstream conf(dir_ / "store.conf", std::ios::trunc);
    if (!conf) throw std::runtime_error("cannot write store.conf");
    conf << "scheme = " << scheme_name(kind_) << "\n"
         << "anchor_id = " << anchor_id_ << "\n"
         << "registry_address = " << to_hex(registry_address_) << "\n"
         << "anchor_batch = " << store_->anchor_batch() << "\n"
         << "anchor_pending = " << store_->anchor_pending() << "\n";
}

}  // namespace bioledger
