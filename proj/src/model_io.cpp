#include "hiact/model_io.hpp"

#include <json.hpp>

#include "hiact/core/error.hpp"
#include "hiact/feature_io.hpp"

namespace hiact {

using nlohmann::json;

namespace {

json matrix_json(const Matrix& m) { return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", m.values()}}; }

Matrix matrix_from(const json& j) {
    Matrix m(j.at("rows").get<std::size_t>(), j.at("cols").get<std::size_t>());
    auto data = j.at("data").get<std::vector<double>>();
    if (data.size() != m.rows() * m.cols()) throw ParseError("matrix payload size mismatch", 0);
    m.values() = std::move(data);
    return m;
}

}  // namespace

std::string encode_model(const ModelBundle& model) {
    const auto& p = model.params;
    p.validate();
    json j;
    j["format"] = "hiact-model";
    j["version"] = kModelVersion;
    j["config_hash"] = model.config_hash;
    j["supervision"] = model.supervision;
    j["schema"] = model.schema;
    j["dims"] = {{"R", p.dims.R}, {"K", p.dims.K}, {"D", p.dims.D}, {"A", p.dims.A},
                 {"S", p.dims.S}, {"Y", p.dims.Y}, {"beta_includes_gc", p.dims.beta_includes_gc}};
    j["dictionary"] = {{"S", p.dictionary.S}, {"G", p.dictionary.G}, {"u_of_v", p.dictionary.u_of_v},
                       {"centroids", matrix_json(p.dictionary.centroids)}};
    json blocks = json::object();
    const auto layout = p.layout();
    for (const auto& b : layout.blocks())
        blocks[b.name] = std::vector<double>(p.weights.begin() + static_cast<std::ptrdiff_t>(b.offset),
                                             p.weights.begin() + static_cast<std::ptrdiff_t>(b.offset + b.size));
    j["weights"] = blocks;
    const auto& d = model.descriptor;
    j["descriptor"] = {{"include_geo", d.include_geo}, {"motion", std::string(to_string(d.motion))},
                       {"half_window", d.half_window}, {"pca_dim", d.pca_dim}, {"lift_depth", d.lift_depth}};
    json pca = json::array();
    for (const auto& m : model.pca)
        pca.push_back({{"mean", m.mean}, {"projection", matrix_json(m.projection)},
                       {"explained_variance", m.explained_variance}, {"total_variance", m.total_variance},
                       {"rank_deficient", m.rank_deficient}});
    j["pca"] = pca;
    json cents = json::array();
    for (const auto& c : model.poselet_centroids) cents.push_back(matrix_json(c));
    j["poselet_centroids"] = cents;
    return j.dump(1) + "\n";
}

ModelBundle decode_model(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ParseError(std::string("model file: ") + e.what(), 0);
    }
    try {
        if (j.value("format", "") != "hiact-model") throw SchemaError("not a model file");
        if (j.value("version", 0) != kModelVersion)
            throw SchemaError("unsupported model version " + std::to_string(j.value("version", 0)));
        ModelBundle m;
        m.config_hash = j.value("config_hash", "");
        m.supervision = j.value("supervision", "");
        m.schema = j.value("schema", "kinect20");
        const auto& dj = j.at("dims");
        auto& dims = m.params.dims;
        dims.R = dj.at("R");
        dims.K = dj.at("K");
        dims.D = dj.at("D");
        dims.A = dj.at("A");
        dims.S = dj.at("S");
        dims.Y = dj.at("Y");
        dims.beta_includes_gc = dj.value("beta_includes_gc", true);
        const auto& dict = j.at("dictionary");
        m.params.dictionary.S = dict.at("S");
        m.params.dictionary.G = dict.at("G").get<std::vector<int>>();
        m.params.dictionary.u_of_v = dict.at("u_of_v").get<std::vector<int>>();
        m.params.dictionary.centroids = matrix_from(dict.at("centroids"));
        const ParamLayout layout(dims);
        m.params.weights.assign(layout.size(), 0.0);
        for (const auto& b : layout.blocks()) {
            const auto v = j.at("weights").at(b.name).get<std::vector<double>>();
            if (v.size() != b.size) throw SchemaError("weight block '" + b.name + "' has the wrong size");
            std::copy(v.begin(), v.end(), m.params.weights.begin() + static_cast<std::ptrdiff_t>(b.offset));
        }
        m.params.validate();
        const auto& d = j.at("descriptor");
        m.descriptor.include_geo = d.at("include_geo");
        m.descriptor.motion = motion_mode_from_string(d.at("motion").get<std::string>());
        m.descriptor.half_window = d.at("half_window");
        m.descriptor.pca_dim = d.at("pca_dim");
        m.descriptor.lift_depth = d.at("lift_depth");
        for (const auto& pj : j.at("pca")) {
            PcaModel p;
            p.mean = pj.at("mean").get<std::vector<double>>();
            p.projection = matrix_from(pj.at("projection"));
            p.explained_variance = pj.at("explained_variance").get<std::vector<double>>();
            p.total_variance = pj.at("total_variance");
            p.rank_deficient = pj.at("rank_deficient");
            m.pca.push_back(std::move(p));
        }
        for (const auto& c : j.at("poselet_centroids")) m.poselet_centroids.push_back(matrix_from(c));
        return m;
    } catch (const json::exception& e) {
        throw SchemaError(std::string("model file: ") + e.what());
    }
}

void save_model(const std::filesystem::path& path, const ModelBundle& model) { write_atomic(path, encode_model(model)); }

ModelBundle load_model(const std::filesystem::path& path) { return decode_model(read_file(path)); }

}  // namespace hiact
