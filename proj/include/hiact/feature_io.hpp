#pragma once

// Cached descriptor files: one JSON header line, then R*T*D little-endian
// float64 values in [r][t][d] order.

#include <filesystem>
#include <string>

#include "hiact/video_features.hpp"

namespace hiact {

struct FeatureFile {
    VideoFeatures features;
    std::string config_hash;
};

std::string encode_features(const VideoFeatures& x, const std::string& config_hash);
FeatureFile decode_features(const std::string& bytes);

void write_features(const std::filesystem::path& path, const VideoFeatures& x, const std::string& config_hash);
FeatureFile read_features(const std::filesystem::path& path);

/// Writes to a sibling temporary file and renames it into place.
void write_atomic(const std::filesystem::path& path, const std::string& bytes);
std::string read_file(const std::filesystem::path& path);

}  // namespace hiact
