#include "bioledger/offchain.hpp"

#include <algorithm>
#include <fstream>
#include <stdexcept>

#include "json.hpp"

namespace bioledger {

using nlohmann::json;

OffChainStore::OffChainStore(std::filesystem::path directory, HashKind hash)
    : directory_(std::move(directory)), hash_(hash) {
    std::filesystem::create_directories(directory_);
    load_index();
}

std::filesystem::path OffChainStore::file_path(const Word& digest) const {
    return directory_ / (to_hex(digest) + ".bin");
}

std::vector<OffChainStore::Entry>::iterator OffChainStore::find(uint64_t user_id) {
    return std::find_if(entries_.begin(), entries_.end(),
                        [&](const Entry& e) { return e.user_id == user_id; });
}

std::vector<OffChainStore::Entry>::const_iterator OffChainStore::find(uint64_t user_id) const {
    return std::find_if(entries_.begin(), entries_.end(),
                        [&](const Entry& e) { return e.user_id == user_id; });
}

bool OffChainStore::has(uint64_t user_id) const { return find(user_id) != entries_.end(); }

std::optional<OffChainStore::Entry> OffChainStore::entry(uint64_t user_id) const {
    auto it = find(user_id);
    if (it == entries_.end()) return std::nullopt;
    return *it;
}

Word OffChainStore::put(uint64_t user_id, ByteView bytes, const std::string& modality) {
    Word digest = hash_bytes(hash_, bytes);

    std::ofstream out(file_path(digest), std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("off-chain write failed: " + file_path(digest).string());
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    out.close();
    if (!out) throw std::runtime_error("off-chain write failed: " + file_path(digest).string());

    Entry entry{user_id, digest, bytes.size(), modality};
    auto it = find(user_id);
    if (it == entries_.end()) {
        entries_.push_back(entry);
    } else {
        Word old_digest = it->digest;
        *it = entry;
        // drop the old blob unless another user still references it
        bool referenced = std::any_of(entries_.begin(), entries_.end(),
                                      [&](const Entry& e) { return e.digest == old_digest; });
        if (!referenced) std::filesystem::remove(file_path(old_digest));
    }
    save_index();
    return digest;
}

Bytes OffChainStore::read(uint64_t user_id) const {
    auto it = find(user_id);
    if (it == entries_.end()) throw std::out_of_range("no off-chain entry for user");
    std::ifstream in(file_path(it->digest), std::ios::binary);
    if (!in) throw std::runtime_error("off-chain read failed: " + file_path(it->digest).string());
    Bytes bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return bytes;
}

void OffChainStore::erase(uint64_t user_id) {
    auto it = find(user_id);
    if (it == entries_.end()) return;
    Word digest = it->digest;
    entries_.erase(it);
    bool referenced = std::any_of(entries_.begin(), entries_.end(),
                                  [&](const Entry& e) { return e.digest == digest; });
    if (!referenced) std::filesystem::remove(file_path(digest));
    save_index();
}

void OffChainStore::save_index() const {
    json j = json::array();
    for (const auto& e : entries_) {
        j.push_back({{"user_id", e.user_id},
                     {"digest", to_hex(e.digest)},
                     {"size", e.size},
                     {"modality", e.modality}});
    }
    std::ofstream out(directory_ / "index.json", std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write off-chain index");
    out << j.dump(2) << "\n";
}

void OffChainStore::load_index() {
    auto path = directory_ / "index.json";
    if (!std::filesystem::exists(path)) return;
    std::ifstream in(path);
    json j = json::parse(in);
    for (const auto& item : j) {
        entries_.push_back({item["user_id"].get<uint64_t>(),
                            word_from_hex(item["digest"].get<std::string>()),
                            item["size"].get<uint64_t>(), item["modality"].get<std::string>()});
    }
}

}  // namespace bioledger
