#pragma once

// Versioned JSON model files. Doubles are written in shortest round-trip
// form, so save followed by load reproduces the weights bit for bit.

#include <filesystem>
#include <string>
#include <vector>

#include "hiact/descriptors.hpp"
#include "hiact/energy.hpp"

namespace hiact {

inline constexpr int kModelVersion = 1;

struct ModelBundle {
    ModelParams params;
    std::string schema = "kinect20";
    DescriptorConfig descriptor;
    std::vector<PcaModel> pca;               // per region, may be empty
    std::vector<Matrix> poselet_centroids;   // per region, K x D
    std::string config_hash;
    std::string supervision;
};

std::string encode_model(const ModelBundle& model);
ModelBundle decode_model(const std::string& text);

void save_model(const std::filesystem::path& path, const ModelBundle& model);
ModelBundle load_model(const std::filesystem::path& path);

}  // namespace hiact
