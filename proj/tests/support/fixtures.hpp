#pragma once

#include <cmath>
#include <random>
#include <string>

#include "hiact/energy.hpp"

namespace fixtures {

inline std::string data_path(const std::string& name) { return std::string(HIACT_TEST_DATA) + "/" + name; }

struct Instance {
    hiact::VideoFeatures x;
    hiact::ModelParams params;
};

/// Small random model + video with Gaussian weights. Actionlets map onto
/// atomic actions round-robin in contiguous blocks.
inline Instance random_instance(std::mt19937_64& rng, int T, int R, int K, int A, int Y, int D = 3, int S = 0,
                                bool beta_gc = true) {
    std::normal_distribution<double> n01;
    if (S <= 0) S = std::max(1, (A + 1) / 2);
    S = std::min(S, A);
    hiact::ModelDims dims;
    dims.R = R;
    dims.K = K;
    dims.D = D;
    dims.A = A;
    dims.S = S;
    dims.Y = Y;
    dims.beta_includes_gc = beta_gc;
    hiact::ActionletDictionary dict;
    dict.S = S;
    dict.G.assign(S, 0);
    for (int a = 0; a < A; ++a) {
        const int s = static_cast<int>(static_cast<long long>(a) * S / A);
        dict.u_of_v.push_back(s);
        ++dict.G[s];
    }
    Instance in{{}, hiact::ModelParams::zeros(dims, dict)};
    for (auto& w : in.params.weights) w = n01(rng);
    in.x.video_id = "rand";
    for (int r = 0; r < R; ++r) {
        hiact::Matrix m(T, D);
        for (auto& v : m.values()) v = n01(rng);
        in.x.regions.push_back(std::move(m));
    }
    return in;
}

inline hiact::Labeling random_labeling(std::mt19937_64& rng, const hiact::ModelDims& dims, int T) {
    std::uniform_int_distribution<int> z(0, dims.K), v(0, dims.A - 1), y(0, dims.Y - 1);
    auto L = hiact::Labeling::filled(T, dims.R, 0, 0, y(rng));
    for (int r = 0; r < dims.R; ++r)
        for (int t = 0; t < T; ++t) {
            L.z[r][t] = z(rng);
            L.v[r][t] = v(rng);
        }
    return L;
}

}  // namespace fixtures
