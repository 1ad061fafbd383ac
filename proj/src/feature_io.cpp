#include "hiact/feature_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "hiact/core/error.hpp"

namespace hiact {

static_assert(std::endian::native == std::endian::little, "feature files assume a little-endian host");

std::string encode_features(const VideoFeatures& x, const std::string& config_hash) {
    const std::size_t R = x.region_count(), T = x.length(), D = x.dim();
    nlohmann::json h;
    h["format"] = "hiact-features";
    h["version"] = 1;
    h["video_id"] = x.video_id;
    h["R"] = R;
    h["T"] = T;
    h["D"] = D;
    h["config_hash"] = config_hash;
    if (!x.degenerate.empty()) h["degenerate"] = x.degenerate;
    std::string out = h.dump();
    out.push_back('\n');
    const std::size_t header = out.size();
    out.resize(header + R * T * D * sizeof(double));
    char* dst = out.data() + header;
    for (const auto& m : x.regions) {
        if (m.rows() != T || m.cols() != D) throw DimensionError("regions disagree on shape");
        std::memcpy(dst, m.data(), T * D * sizeof(double));
        dst += T * D * sizeof(double);
    }
    return out;
}

FeatureFile decode_features(const std::string& bytes) {
    const auto nl = bytes.find('\n');
    if (nl == std::string::npos) throw ParseError("feature file without header line", 1);
    nlohmann::json h;
    try {
        h = nlohmann::json::parse(bytes.substr(0, nl));
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("feature header: ") + e.what(), 1);
    }
    if (h.value("format", "") != "hiact-features") throw ParseError("not a feature file", 1);
    if (h.value("version", 0) != 1) throw ParseError("unsupported feature file version", 1);
    FeatureFile f;
    const std::size_t R = h.at("R"), T = h.at("T"), D = h.at("D");
    f.features.video_id = h.at("video_id").get<std::string>();
    f.config_hash = h.value("config_hash", "");
    if (h.contains("degenerate")) f.features.degenerate = h["degenerate"].get<std::vector<std::uint8_t>>();
    if (bytes.size() - nl - 1 != R * T * D * sizeof(double))
        throw ParseError("feature payload size does not match the header", 1);
    const char* src = bytes.data() + nl + 1;
    for (std::size_t r = 0; r < R; ++r) {
        Matrix m(T, D);
        std::memcpy(m.data(), src, T * D * sizeof(double));
        src += T * D * sizeof(double);
        f.features.regions.push_back(std::move(m));
    }
    return f;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_atomic(const std::filesystem::path& path, const std::string& bytes) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + tmp.string());
        out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
        if (!out) throw std::runtime_error("write failed for " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

void write_features(const std::filesystem::path& path, const VideoFeatures& x, const std::string& config_hash) {
    write_atomic(path, encode_features(x, config_hash));
}

FeatureFile read_features(const std::filesystem::path& path) { return decode_features(read_file(path)); }

}  // namespace hiact
