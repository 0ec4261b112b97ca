#include "weedseg/manifest.hpp"

#include <filesystem>
#include <fstream>
#include <set>
#include <stdexcept>

#include <json.hpp>

#include "weedseg/image_io.hpp"

namespace weedseg {

namespace fs = std::filesystem;

std::string DatasetManifest::resolve(const std::string& rel) const {
    return (fs::path(root) / rel).string();
}

std::vector<const ManifestEntry*> DatasetManifest::split_entries(const std::string& split) const {
    std::vector<const ManifestEntry*> out;
    for (const auto& e : entries)
        if (e.split == split) out.push_back(&e);
    return out;
}

void DatasetManifest::validate() const {
    std::set<std::string> ids;
    for (const auto& e : entries) {
        if (!ids.insert(e.frame_id).second)
            throw std::runtime_error("manifest: duplicate frame_id " + e.frame_id);
        if (e.split != "train" && e.split != "test")
            throw std::runtime_error("manifest: unknown split '" + e.split + "' in " + e.frame_id);
        if (e.plot_type != "crop" && e.plot_type != "weed" && e.plot_type != "mixed")
            throw std::runtime_error("manifest: unknown plot_type '" + e.plot_type + "' in " +
                                     e.frame_id);
        if (e.split == "train" && !e.mask)
            throw std::runtime_error("manifest: train entry " + e.frame_id + " has no mask");
        if (e.bands.empty())
            throw std::runtime_error("manifest: entry " + e.frame_id + " lists no bands");
        for (const auto& [name, path] : e.bands)
            if (!fs::exists(resolve(path)))
                throw std::runtime_error("manifest: missing band file " + resolve(path));
        if (e.mask && !fs::exists(resolve(*e.mask)))
            throw std::runtime_error("manifest: missing mask file " + resolve(*e.mask));
    }
}

DatasetManifest load_manifest(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error(path + ": cannot open manifest");
    nlohmann::json j = nlohmann::json::parse(in);

    const std::string ver = j.at("schema_version");
    const int major = std::stoi(ver.substr(0, ver.find('.')));
    if (major != DatasetManifest::kMajorVersion)
        throw std::runtime_error(path + ": unsupported manifest schema major version " + ver);

    DatasetManifest m;
    const auto dot = ver.find('.');
    m.minor_version = dot == std::string::npos ? 0 : std::stoi(ver.substr(dot + 1));
    m.root = fs::path(path).parent_path().string();
    for (const auto& ej : j.at("entries")) {
        ManifestEntry e;
        e.frame_id = ej.at("frame_id");
        for (auto& [name, p] : ej.at("bands").items()) e.bands[name] = p;
        if (ej.contains("mask") && !ej.at("mask").is_null()) e.mask = ej.at("mask").get<std::string>();
        e.split = ej.at("split");
        e.plot_type = ej.at("plot_type");
        m.entries.push_back(std::move(e));
    }
    m.validate();
    return m;
}

void save_manifest(const DatasetManifest& m, const std::string& path) {
    nlohmann::json j;
    j["schema_version"] =
        std::to_string(DatasetManifest::kMajorVersion) + "." + std::to_string(m.minor_version);
    j["entries"] = nlohmann::json::array();
    for (const auto& e : m.entries) {
        nlohmann::json ej;
        ej["frame_id"] = e.frame_id;
        for (const auto& [name, p] : e.bands) ej["bands"][name] = p;
        if (e.mask) ej["mask"] = *e.mask;
        ej["split"] = e.split;
        ej["plot_type"] = e.plot_type;
        j["entries"].push_back(std::move(ej));
    }
    std::ofstream out(path);
    if (!out) throw std::runtime_error(path + ": cannot open manifest for writing");
    out << j.dump(2) << "\n";
}

MultispectralFrame load_frame(const DatasetManifest& m, const ManifestEntry& entry) {
    std::vector<BandImage> bands;
    // canonical order first so frame_to_tensor sees [NIR, Red, NDVI]
    for (const char* name : {"NIR", "Red", "NDVI"}) {
        auto it = entry.bands.find(name);
        if (it != entry.bands.end())
            bands.push_back(read_band_image(m.resolve(it->second), Band::from_name(name)));
    }
    for (const auto& [name, p] : entry.bands)
        if (name != "NIR" && name != "Red" && name != "NDVI")
            bands.push_back(read_band_image(m.resolve(p), Band::other(name)));
    return MultispectralFrame(entry.frame_id, std::move(bands));
}

}  // namespace weedseg
