#ifndef WEEDSEG_MANIFEST_HPP
#define WEEDSEG_MANIFEST_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "weedseg/image.hpp"

namespace weedseg {

struct ManifestEntry {
    std::string frame_id;
    std::map<std::string, std::string> bands;  // band name -> path relative to root
    std::optional<std::string> mask;
    std::string split;      // "train" | "test"
    std::string plot_type;  // "crop" | "weed" | "mixed"
};

struct DatasetManifest {
    static constexpr int kMajorVersion = 1;
    int minor_version = 0;
    std::string root;  // directory the relative paths resolve against
    std::vector<ManifestEntry> entries;

    std::string resolve(const std::string& rel) const;
    std::vector<const ManifestEntry*> split_entries(const std::string& split) const;

    // Unique ids, known split/plot values, train entries carry masks,
    // referenced files exist.
    void validate() const;
};

// Rejects unknown major schema versions.
DatasetManifest load_manifest(const std::string& path);
void save_manifest(const DatasetManifest& m, const std::string& path);

// Loads the entry's bands (plus NDVI when listed) as a frame.
MultispectralFrame load_frame(const DatasetManifest& m, const ManifestEntry& entry);

}  // namespace weedseg

#endif
