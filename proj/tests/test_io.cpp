#include <doctest.h>

#include <filesystem>
#include <random>

#include "fixtures.hpp"
#include "hiact/core/error.hpp"
#include "hiact/feature_io.hpp"
#include "hiact/model_io.hpp"

using namespace hiact;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const auto dir = fs::temp_directory_path() / "hiact_test_io";
    fs::create_directories(dir);
    return dir / name;
}

VideoFeatures random_features(std::mt19937_64& rng, int T, int R, int D) {
    std::normal_distribution<double> n;
    VideoFeatures x{"clip", {}, {}};
    for (int r = 0; r < R; ++r) {
        Matrix m(T, D);
        for (auto& v : m.values()) v = n(rng) * 1e3;
        x.regions.push_back(std::move(m));
    }
    x.degenerate.assign(static_cast<std::size_t>(T * R), 0);
    x.degenerate[1] = 1;
    return x;
}

}  // namespace

TEST_CASE("feature files round trip bit for bit") {
    std::mt19937_64 rng(1);
    const auto x = random_features(rng, 7, 3, 5);
    const auto path = scratch("clip.feat");
    write_features(path, x, "abc123");
    const auto back = read_features(path);
    CHECK(back.config_hash == "abc123");
    CHECK(back.features.video_id == "clip");
    REQUIRE(back.features.region_count() == 3);
    for (std::size_t r = 0; r < 3; ++r) CHECK(back.features.regions[r].values() == x.regions[r].values());
    CHECK(back.features.degenerate == x.degenerate);
    CHECK(encode_features(back.features, back.config_hash) == read_file(path));
}

TEST_CASE("truncated and foreign feature files are rejected") {
    std::mt19937_64 rng(2);
    const auto bytes = encode_features(random_features(rng, 4, 2, 3), "h");
    CHECK_THROWS(decode_features(bytes.substr(0, bytes.size() - 8)));
    CHECK_THROWS(decode_features("not a header\n"));
    CHECK_THROWS(read_features(scratch("missing.feat")));
}

TEST_CASE("model files round trip bit for bit") {
    std::mt19937_64 rng(3);
    auto inst = fixtures::random_instance(rng, 5, 2, 3, 4, 3, 4);
    inst.params.weights[0] = 0.1 + 0.2;  // not exactly representable in short decimal
    inst.params.weights[1] = -1e-300;
    ModelBundle m;
    m.params = inst.params;
    m.config_hash = "feedbeef";
    m.supervision = "temporal";
    m.poselet_centroids = {Matrix(3, 4), Matrix(3, 4)};
    m.poselet_centroids[1](2, 3) = 1.0 / 3.0;
    PcaModel p;
    p.mean = {1.0, 2.0};
    p.projection = Matrix(2, 1);
    p.projection(0, 0) = 1.0;
    p.explained_variance = {0.5};
    p.total_variance = 0.75;
    m.pca = {p};
    const auto path = scratch("model.json");
    save_model(path, m);
    const auto back = load_model(path);
    CHECK(back.params.weights == m.params.weights);
    CHECK(back.params.dims.A == m.params.dims.A);
    CHECK(back.params.dictionary.u_of_v == m.params.dictionary.u_of_v);
    CHECK(back.poselet_centroids[1].values() == m.poselet_centroids[1].values());
    CHECK(back.pca.front().projection.values() == p.projection.values());
    CHECK(back.config_hash == "feedbeef");
    CHECK(encode_model(back) == read_file(path));
}

TEST_CASE("model files with the wrong version or block sizes are rejected") {
    std::mt19937_64 rng(4);
    ModelBundle m;
    m.params = fixtures::random_instance(rng, 3, 1, 2, 2, 2).params;
    auto text = encode_model(m);
    auto bumped = text;
    bumped.replace(bumped.find("\"version\": 1"), 12, "\"version\": 9");
    CHECK_THROWS_AS(decode_model(bumped), SchemaError);
    auto dims = text;
    dims.replace(dims.find("\"Y\": 2"), 6, "\"Y\": 3");
    CHECK_THROWS(decode_model(dims));
    CHECK_THROWS_AS(decode_model("{"), ParseError);
}
