#pragma once

// Planted datasets with known complex actions, atomic actions, actionlets and
// poselets. Structure (prototypes, actionlet pose distributions, per-class
// scripts) comes from `structure_seed`; each call draws fresh videos from
// `video_seed`, so train and test splits share the structure.

#include <cstdint>
#include <vector>

#include "hiact/dictionaries.hpp"
#include "hiact/learning.hpp"

namespace hiact {

struct SyntheticSpec {
    int Y = 3;
    int S = 4;
    std::vector<int> u_of_v{0, 0, 1, 1, 2, 3};  // planted actionlets per atomic action
    int K = 8;
    int R = 2;
    int D = 16;
    int T_min = 30;
    int T_max = 60;
    int videos_per_class = 20;
    double sigma = 0.05;
    double dominant_mass = 0.9;    // probability mass on an actionlet's two dominant poselets
    double noise_fraction = 0.0;   // (region, frame) cells replaced by uniform random descriptors
    int min_segment = 8;
    std::uint64_t structure_seed = 7;

    int A() const { return static_cast<int>(u_of_v.size()); }
    void validate() const;
};

struct SyntheticTruth {
    std::vector<std::vector<int>> actions;     // [r][t]
    std::vector<std::vector<int>> actionlets;  // [r][t]
    std::vector<std::vector<int>> poselets;    // [r][t], K for injected noise
};

struct SyntheticVideo {
    TrainVideo video;  // intervals carry their region
    SyntheticTruth truth;
};

struct SyntheticDataset {
    SyntheticSpec spec;
    std::vector<Matrix> prototypes;                   // [r] K x D
    std::vector<std::vector<std::vector<double>>> pose_distributions;  // [r][actionlet] -> K
    std::vector<std::vector<std::vector<int>>> scripts;  // [y][r] -> atomic actions in order
    std::vector<SyntheticVideo> videos;
};

SyntheticDataset plant_synthetic(const SyntheticSpec& spec, std::uint64_t video_seed);

/// Training view of the dataset; with Temporal supervision region ids are dropped.
std::vector<TrainVideo> training_view(const SyntheticDataset& data, Supervision supervision);

}  // namespace hiact
