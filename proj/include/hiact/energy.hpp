#pragma once

// Model weights W = [alpha, beta, w, gamma, eta, theta] and the video energy
//
//   E(x, v, z, y) = sum_{r,t} [ w^r_{z}.x_{t,r} (z <= K) | theta^r (z = K+1) ]
//                 + beta^r[v_t, z_t] + alpha^r[y, u(v_t)]
//                 + eta^r[z_{t-1}, z_t] + gamma^r[v_{t-1}, v_t]
//
// In memory the garbage-collector poselet is label K (0-based labels).
// The functions here are plain loops on purpose: they are the reference that
// the dynamic program and the feature map are checked against.

#include <span>
#include <string>
#include <vector>

#include "hiact/dictionaries.hpp"
#include "hiact/video_features.hpp"

namespace hiact {

struct ModelDims {
    int R = 1;  // regions
    int K = 1;  // motion poselets per region (plus the garbage label)
    int D = 1;  // descriptor length
    int A = 1;  // actionlets
    int S = 1;  // atomic actions
    int Y = 1;  // complex actions
    bool beta_includes_gc = true;

    int poselet_states() const noexcept { return K + 1; }
    int beta_cols() const noexcept { return beta_includes_gc ? K + 1 : K; }
    int gc_label() const noexcept { return K; }
    void validate() const;
    friend bool operator==(const ModelDims&, const ModelDims&) = default;
};

/// Offsets of each weight block inside the flat vector. Blocks are stored in
/// the order alpha, beta, w, gamma, eta, theta; within a block regions come
/// first and each per-region matrix is row-major.
class ParamLayout {
public:
    struct Block {
        std::string name;
        std::size_t offset;
        std::size_t size;
    };

    explicit ParamLayout(const ModelDims& dims);

    std::size_t alpha(int r, int y, int s) const noexcept { return alpha_ + (r * Y_ + y) * S_ + s; }
    std::size_t beta(int r, int a, int k) const noexcept { return beta_ + (r * A_ + a) * Bc_ + k; }
    std::size_t w(int r, int k) const noexcept { return w_ + (r * K_ + k) * D_; }
    std::size_t gamma(int r, int a, int b) const noexcept { return gamma_ + (r * A_ + a) * A_ + b; }
    std::size_t eta(int r, int k, int l) const noexcept { return eta_ + (r * (K_ + 1) + k) * (K_ + 1) + l; }
    std::size_t theta(int r) const noexcept { return theta_ + r; }
    std::size_t size() const noexcept { return size_; }
    const std::vector<Block>& blocks() const noexcept { return blocks_; }

private:
    std::size_t R_, K_, D_, A_, S_, Y_, Bc_;
    std::size_t alpha_, beta_, w_, gamma_, eta_, theta_, size_;
    std::vector<Block> blocks_;
};

using FeatureVector = std::vector<double>;

struct ModelParams {
    ModelDims dims;
    ActionletDictionary dictionary;
    std::vector<double> weights;

    static ModelParams zeros(const ModelDims& dims, ActionletDictionary dictionary);

    ParamLayout layout() const { return ParamLayout(dims); }
    /// Throws DimensionError when shapes disagree or weights are not finite.
    void validate() const;
    int action_of(int actionlet) const { return dictionary.u_of_v[actionlet]; }
};

/// z[r][t] in [0, K] (K = garbage), v[r][t] in [0, A), y in [0, Y).
struct Labeling {
    int y = 0;
    std::vector<std::vector<int>> z;
    std::vector<std::vector<int>> v;

    static Labeling filled(std::size_t T, std::size_t R, int z, int v, int y);
    std::size_t region_count() const noexcept { return z.size(); }
    std::size_t length() const noexcept { return z.empty() ? 0 : z.front().size(); }
    friend bool operator==(const Labeling&, const Labeling&) = default;
};

/// Throws DimensionError unless x, labeling and params agree on R, T, D and label ranges.
void check_shapes(const VideoFeatures& x, const Labeling& labeling, const ModelParams& params);

double energy_pose(const VideoFeatures& x, const Labeling& labeling, const ModelParams& params, int r);
double energy_bow_poselets(const Labeling& labeling, const ModelParams& params, int r);
double energy_bow_actions(const Labeling& labeling, const ModelParams& params, int r);
double energy_poselet_transitions(const Labeling& labeling, const ModelParams& params, int r);
double energy_actionlet_transitions(const Labeling& labeling, const ModelParams& params, int r);
double energy_region(const VideoFeatures& x, const Labeling& labeling, const ModelParams& params, int r);
double energy_total(const VideoFeatures& x, const Labeling& labeling, const ModelParams& params);

/// Sufficient statistics psi with <W, psi(x, L)> = energy_total(x, L, W).
FeatureVector feature_map(const VideoFeatures& x, const Labeling& labeling, const ModelDims& dims,
                          const ActionletDictionary& dictionary);
/// out += scale * psi(x, L)
void accumulate_feature_map(const VideoFeatures& x, const Labeling& labeling, const ModelDims& dims,
                            const ActionletDictionary& dictionary, double scale, std::span<double> out);

}  // namespace hiact
