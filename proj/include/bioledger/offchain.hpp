#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "bioledger/hash.hpp"

namespace bioledger {

/// Content-addressed template files under one directory, with an ordered
/// index (user -> digest/size/modality). The index order doubles as leaf
/// order for the Merkle scheme. Stands in for IPFS/cloud storage behind the
/// same digest-based interface.
class OffChainStore {
  public:
    struct Entry {
        uint64_t user_id;
        Word digest;
        uint64_t size;
        std::string modality;
    };

    OffChainStore(std::filesystem::path directory, HashKind hash);

    /// Writes `<dir>/<hex digest>.bin` and upserts the index entry.
    /// Returns the content digest.
    Word put(uint64_t user_id, ByteView bytes, const std::string& modality);

    /// Raw file bytes for a user; integrity checking is the caller's job.
    Bytes read(uint64_t user_id) const;

    void erase(uint64_t user_id);
    bool has(uint64_t user_id) const;
    std::optional<Entry> entry(uint64_t user_id) const;

    /// Entries in insertion order.
    const std::vector<Entry>& entries() const { return entries_; }

    const std::filesystem::path& directory() const { return directory_; }
    std::filesystem::path file_path(const Word& digest) const;

    void save_index() const;

  private:
    std::filesystem::path directory_;
    HashKind hash_;
    std::vector<Entry> entries_;

    void load_index();
    std::vector<Entry>::iterator find(uint64_t user_id);
    std::vector<Entry>::const_iterator find(uint64_t user_id) const;
};

}  // namespace bioledger
