#include "hiact/energy.hpp"

#include <cmath>

#include "hiact/core/error.hpp"

namespace hiact {

void ModelDims::validate() const {
    if (R <= 0 || K <= 0 || D <= 0 || A <= 0 || S <= 0 || Y <= 0)
        throw DimensionError("model dimensions must be positive");
}

ParamLayout::ParamLayout(const ModelDims& dims)
    : R_(dims.R), K_(dims.K), D_(dims.D), A_(dims.A), S_(dims.S), Y_(dims.Y), Bc_(dims.beta_cols()) {
    std::size_t o = 0;
    auto add = [&](const char* name, std::size_t n) {
        blocks_.push_back({name, o, n});
        const std::size_t start = o;
        o += n;
        return start;
    };
    alpha_ = add("alpha", R_ * Y_ * S_);
    beta_ = add("beta", R_ * A_ * Bc_);
    w_ = add("w", R_ * K_ * D_);
    gamma_ = add("gamma", R_ * A_ * A_);
    eta_ = add("eta", R_ * (K_ + 1) * (K_ + 1));
    theta_ = add("theta", R_);
    size_ = o;
}

ModelParams ModelParams::zeros(const ModelDims& dims, ActionletDictionary dictionary) {
    ModelParams p;
    p.dims = dims;
    p.dictionary = std::move(dictionary);
    p.weights.assign(ParamLayout(dims).size(), 0.0);
    p.validate();
    return p;
}

void ModelParams::validate() const {
    dims.validate();
    if (dictionary.A() != dims.A) throw DimensionError("dictionary actionlet count differs from A");
    if (dictionary.S != dims.S) throw DimensionError("dictionary atomic action count differs from S");
    for (int u : dictionary.u_of_v)
        if (u < 0 || u >= dims.S) throw DimensionError("u(v) maps outside [0, S)");
    if (weights.size() != ParamLayout(dims).size()) throw DimensionError("weight vector has the wrong length");
    for (double w : weights)
        if (!std::isfinite(w)) throw DimensionError("weights must be finite");
}

Labeling Labeling::filled(std::size_t T, std::size_t R, int z, int v, int y) {
    Labeling l;
    l.y = y;
    l.z.assign(R, std::vector<int>(T, z));
    l.v.assign(R, std::vector<int>(T, v));
    return l;
}

void check_shapes(const VideoFeatures& x, const Labeling& labeling, const ModelParams& params) {
    const auto& d = params.dims;
    if (static_cast<int>(x.region_count()) != d.R) throw DimensionError("descriptor region count differs from R");
    if (labeling.z.size() != x.region_count() || labeling.v.size() != x.region_count())
        throw DimensionError("labeling region count differs from descriptors");
    const std::size_t T = x.length();
    for (int r = 0; r < d.R; ++r) {
        if (x.regions[r].rows() != T) throw DimensionError("regions disagree on T");
        if (static_cast<int>(x.regions[r].cols()) != d.D) throw DimensionError("descriptor length differs from D");
        if (labeling.z[r].size() != T || labeling.v[r].size() != T)
            throw DimensionError("labeling length differs from T");
        for (int z : labeling.z[r])
            if (z < 0 || z > d.K) throw DimensionError("poselet label out of range");
        for (int v : labeling.v[r])
            if (v < 0 || v >= d.A) throw DimensionError("actionlet label out of range");
    }
    if (labeling.y < 0 || labeling.y >= d.Y) throw DimensionError("complex action out of range");
}

double energy_pose(const VideoFeatures& x, const Labeling& labeling, const ModelParams& params, int r) {
    const ParamLayout lay(params.dims);
    const auto& X = x.regions[r];
    double e = 0.0;
    for (std::size_t t = 0; t < X.rows(); ++t) {
        const int z = labeling.z[r][t];
        if (z == params.dims.K) {
            e += params.weights[lay.theta(r)];
            continue;
        }
        const double* w = params.weights.data() + lay.w(r, z);
        double s = 0.0;
        for (std::size_t j = 0; j < X.cols(); ++j) s += w[j] * X(t, j);
        e += s;
    }
    return e;
}

double energy_bow_poselets(const Labeling& labeling, const ModelParams& params, int r) {
    const ParamLayout lay(params.dims);
    double e = 0.0;
    for (std::size_t t = 0; t < labeling.z[r].size(); ++t) {
        const int z = labeling.z[r][t];
        if (z >= params.dims.beta_cols()) continue;
        e += params.weights[lay.beta(r, labeling.v[r][t], z)];
    }
    return e;
}

double energy_bow_actions(const Labeling& labeling, const ModelParams& params, int r) {
    const ParamLayout lay(params.dims);
    double e = 0.0;
    for (int v : labeling.v[r]) e += params.weights[lay.alpha(r, labeling.y, params.action_of(v))];
    return e;
}

double energy_poselet_transitions(const Labeling& labeling, const ModelParams& params, int r) {
    const ParamLayout lay(params.dims);
    double e = 0.0;
    const auto& z = labeling.z[r];
    for (std::size_t t = 1; t < z.size(); ++t) e += params.weights[lay.eta(r, z[t - 1], z[t])];
    return e;
}

double energy_actionlet_transitions(const Labeling& labeling, const ModelParams& params, int r) {
    const ParamLayout lay(params.dims);
    double e = 0.0;
    const auto& v = labeling.v[r];
    for (std::size_t t = 1; t < v.size(); ++t) e += params.weights[lay.gamma(r, v[t - 1], v[t])];
    return e;
}

double energy_region(const VideoFeatures& x, const Labeling& labeling, const ModelParams& params, int r) {
    return energy_pose(x, labeling, params, r) + energy_bow_poselets(labeling, params, r) +
           energy_bow_actions(labeling, params, r) + energy_poselet_transitions(labeling, params, r) +
           energy_actionlet_transitions(labeling, params, r);
}

double energy_total(const VideoFeatures& x, const Labeling& labeling, const ModelParams& params) {
    check_shapes(x, labeling, params);
    double e = 0.0;
    for (int r = 0; r < params.dims.R; ++r) e += energy_region(x, labeling, params, r);
    return e;
}

void accumulate_feature_map(const VideoFeatures& x, const Labeling& labeling, const ModelDims& dims,
                            const ActionletDictionary& dictionary, double scale, std::span<double> out) {
    const ParamLayout lay(dims);
    if (out.size() != lay.size()) throw DimensionError("feature vector has the wrong length");
    for (int r = 0; r < dims.R; ++r) {
        const auto& X = x.regions[r];
        const auto& z = labeling.z[r];
        const auto& v = labeling.v[r];
        for (std::size_t t = 0; t < z.size(); ++t) {
            if (z[t] == dims.K) {
                out[lay.theta(r)] += scale;
            } else {
                double* w = out.data() + lay.w(r, z[t]);
                for (std::size_t j = 0; j < X.cols(); ++j) w[j] += scale * X(t, j);
            }
            if (z[t] < dims.beta_cols()) out[lay.beta(r, v[t], z[t])] += scale;
            out[lay.alpha(r, labeling.y, dictionary.u_of_v[v[t]])] += scale;
            if (t > 0) {
                out[lay.eta(r, z[t - 1], z[t])] += scale;
                out[lay.gamma(r, v[t - 1], v[t])] += scale;
            }
        }
    }
}

FeatureVector feature_map(const VideoFeatures& x, const Labeling& labeling, const ModelDims& dims,
                          const ActionletDictionary& dictionary) {
    FeatureVector psi(ParamLayout(dims).size(), 0.0);
    accumulate_feature_map(x, labeling, dims, dictionary, 1.0, psi);
    return psi;
}

}  // namespace hiact
