#include "hiact/cli/config.hpp"

#include <charconv>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "hiact/core/hash.hpp"

namespace hiact::cli {

namespace {

std::string fmt(double v) {
    std::ostringstream ss;
    ss.precision(17);
    ss << v;
    return ss.str();
}
std::string fmt(bool v) { return v ? "true" : "false"; }
template <class I>
std::string fmt_int(I v) { return std::to_string(v); }

std::string join(const std::vector<int>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
    return s;
}

double to_double(const std::string& key, const std::string& s) {
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ConfigError(key + ": expected a number, got '" + s + "'");
    }
}

long long to_int(const std::string& key, const std::string& s) {
    long long v = 0;
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size()) throw ConfigError(key + ": expected an integer, got '" + s + "'");
    return v;
}

std::uint64_t to_u64(const std::string& key, const std::string& s) {
    std::uint64_t v = 0;
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size()) throw ConfigError(key + ": expected an unsigned integer, got '" + s + "'");
    return v;
}

bool to_bool(const std::string& key, const std::string& s) {
    if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
    if (s == "false" || s == "0" || s == "no" || s == "off") return false;
    throw ConfigError(key + ": expected a boolean, got '" + s + "'");
}

std::vector<int> to_ints(const std::string& key, const std::string& s) {
    std::vector<int> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(static_cast<int>(to_int(key, item)));
    return out;
}

std::string aggregation_name(const std::optional<LossAggregation>& a) {
    if (!a) return "auto";
    switch (*a) {
        case LossAggregation::RegionAverage: return "region-average";
        case LossAggregation::Designated: return "designated";
        case LossAggregation::AnyRegion: return "any-region";
    }
    return "auto";
}

}  // namespace

std::map<std::string, std::string> RunConfig::entries() const {
    std::map<std::string, std::string> e;
    e["descriptor.schema"] = schema;
    e["descriptor.include_geo"] = fmt(descriptor.include_geo);
    e["descriptor.motion"] = std::string(to_string(descriptor.motion));
    e["descriptor.half_window"] = fmt_int(descriptor.half_window);
    e["descriptor.pca_dim"] = fmt_int(descriptor.pca_dim);
    e["descriptor.lift_depth"] = fmt(descriptor.lift_depth);
    e["model.K"] = fmt_int(init.K);
    e["model.gc_fraction"] = fmt(init.gc_fraction);
    e["model.beam"] = fmt_int(train.inference.beam);
    e["model.allow_gc"] = fmt(train.inference.allow_gc);
    e["init.seed"] = fmt_int(init.seed);
    e["init.kmeans_restarts"] = fmt_int(init.kmeans_restarts);
    e["init.kmeans_max_iter"] = fmt_int(init.kmeans_max_iter);
    e["init.scree_c"] = fmt(init.actionlets.c);
    e["init.actionlet_restarts"] = fmt_int(init.actionlets.restarts);
    e["init.normalize_spectrum"] = fmt(init.actionlets.normalize_spectrum);
    e["init.laplacian_affinity"] = fmt(init.actionlets.laplacian_affinity);
    e["init.self_pace_lambda0"] = fmt(init.p1.schedule.lambda0);
    e["init.self_pace_decay"] = fmt(init.p1.schedule.decay);
    e["init.self_pace_rounds"] = fmt_int(init.p1.schedule.rounds);
    e["init.max_alternations"] = fmt_int(init.p1.schedule.max_alternations);
    e["init.exact_limit"] = fmt_int(init.p1.exact_limit);
    e["train.C"] = fmt(train.C);
    e["train.lambda_y"] = fmt(train.lambda_y);
    e["train.lambda_v"] = fmt(train.lambda_v);
    e["train.eps_rel"] = fmt(train.eps_rel);
    e["train.max_outer"] = fmt_int(train.max_outer);
    e["train.max_cp_iterations"] = fmt_int(train.max_cp_iterations);
    e["train.cccp_tol"] = fmt(train.cccp_tol);
    e["train.supervision"] = std::string(to_string(supervision));
    e["train.aggregation"] = aggregation_name(train.aggregation);
    e["synth.Y"] = fmt_int(synth.Y);
    e["synth.S"] = fmt_int(synth.S);
    e["synth.u_of_v"] = join(synth.u_of_v);
    e["synth.K"] = fmt_int(synth.K);
    e["synth.R"] = fmt_int(synth.R);
    e["synth.D"] = fmt_int(synth.D);
    e["synth.T_min"] = fmt_int(synth.T_min);
    e["synth.T_max"] = fmt_int(synth.T_max);
    e["synth.videos_per_class"] = fmt_int(synth.videos_per_class);
    e["synth.sigma"] = fmt(synth.sigma);
    e["synth.dominant_mass"] = fmt(synth.dominant_mass);
    e["synth.noise_fraction"] = fmt(synth.noise_fraction);
    e["synth.min_segment"] = fmt_int(synth.min_segment);
    e["synth.structure_seed"] = fmt_int(synth.structure_seed);
    e["synth.video_seed"] = fmt_int(video_seed);
    return e;
}

std::string RunConfig::hash() const {
    std::string canon;
    for (const auto& [k, v] : entries()) canon += k + "=" + v + "\n";
    return hash_hex(fnv1a64(canon));
}

RunConfig make_config(const std::map<std::string, std::string>& values) {
    RunConfig c;
    c.train.inference.beam = kDefaultBeam;
    for (const auto& [key, v] : values) {
        if (key == "descriptor.schema") c.schema = v;
        else if (key == "descriptor.include_geo") c.descriptor.include_geo = to_bool(key, v);
        else if (key == "descriptor.motion") {
            try {
                c.descriptor.motion = motion_mode_from_string(v);
            } catch (const std::exception& e) {
                throw ConfigError(key + ": " + e.what());
            }
        } else if (key == "descriptor.half_window") c.descriptor.half_window = static_cast<int>(to_int(key, v));
        else if (key == "descriptor.pca_dim") c.descriptor.pca_dim = static_cast<std::size_t>(to_int(key, v));
        else if (key == "descriptor.lift_depth") c.descriptor.lift_depth = to_double(key, v);
        else if (key == "model.K") c.init.K = static_cast<int>(to_int(key, v));
        else if (key == "model.gc_fraction") c.init.gc_fraction = to_double(key, v);
        else if (key == "model.beam") c.train.inference.beam = static_cast<std::size_t>(to_int(key, v));
        else if (key == "model.allow_gc") c.train.inference.allow_gc = to_bool(key, v);
        else if (key == "init.seed") c.init.seed = to_u64(key, v);
        else if (key == "init.kmeans_restarts") c.init.kmeans_restarts = static_cast<int>(to_int(key, v));
        else if (key == "init.kmeans_max_iter") c.init.kmeans_max_iter = static_cast<int>(to_int(key, v));
        else if (key == "init.scree_c") c.init.actionlets.c = to_double(key, v);
        else if (key == "init.actionlet_restarts") c.init.actionlets.restarts = static_cast<int>(to_int(key, v));
        else if (key == "init.normalize_spectrum") c.init.actionlets.normalize_spectrum = to_bool(key, v);
        else if (key == "init.laplacian_affinity") c.init.actionlets.laplacian_affinity = to_bool(key, v);
        else if (key == "init.self_pace_lambda0") c.init.p1.schedule.lambda0 = to_double(key, v);
        else if (key == "init.self_pace_decay") c.init.p1.schedule.decay = to_double(key, v);
        else if (key == "init.self_pace_rounds") c.init.p1.schedule.rounds = static_cast<int>(to_int(key, v));
        else if (key == "init.max_alternations") c.init.p1.schedule.max_alternations = static_cast<int>(to_int(key, v));
        else if (key == "init.exact_limit") c.init.p1.exact_limit = static_cast<std::size_t>(to_int(key, v));
        else if (key == "train.C") c.train.C = to_double(key, v);
        else if (key == "train.lambda_y") c.train.lambda_y = to_double(key, v);
        else if (key == "train.lambda_v") c.train.lambda_v = to_double(key, v);
        else if (key == "train.eps_rel") c.train.eps_rel = to_double(key, v);
        else if (key == "train.max_outer") c.train.max_outer = static_cast<int>(to_int(key, v));
        else if (key == "train.max_cp_iterations") c.train.max_cp_iterations = static_cast<int>(to_int(key, v));
        else if (key == "train.cccp_tol") c.train.cccp_tol = to_double(key, v);
        else if (key == "train.supervision") {
            try {
                c.supervision = supervision_from_string(v);
            } catch (const std::exception& e) {
                throw ConfigError(key + ": " + e.what());
            }
        } else if (key == "train.aggregation") {
            if (v == "auto") c.train.aggregation.reset();
            else if (v == "region-average") c.train.aggregation = LossAggregation::RegionAverage;
            else if (v == "designated") c.train.aggregation = LossAggregation::Designated;
            else if (v == "any-region") c.train.aggregation = LossAggregation::AnyRegion;
            else throw ConfigError(key + ": expected auto, region-average, designated or any-region");
        } else if (key == "synth.Y") c.synth.Y = static_cast<int>(to_int(key, v));
        else if (key == "synth.S") c.synth.S = static_cast<int>(to_int(key, v));
        else if (key == "synth.u_of_v") c.synth.u_of_v = to_ints(key, v);
        else if (key == "synth.K") c.synth.K = static_cast<int>(to_int(key, v));
        else if (key == "synth.R") c.synth.R = static_cast<int>(to_int(key, v));
        else if (key == "synth.D") c.synth.D = static_cast<int>(to_int(key, v));
        else if (key == "synth.T_min") c.synth.T_min = static_cast<int>(to_int(key, v));
        else if (key == "synth.T_max") c.synth.T_max = static_cast<int>(to_int(key, v));
        else if (key == "synth.videos_per_class") c.synth.videos_per_class = static_cast<int>(to_int(key, v));
        else if (key == "synth.sigma") c.synth.sigma = to_double(key, v);
        else if (key == "synth.dominant_mass") c.synth.dominant_mass = to_double(key, v);
        else if (key == "synth.noise_fraction") c.synth.noise_fraction = to_double(key, v);
        else if (key == "synth.min_segment") c.synth.min_segment = static_cast<int>(to_int(key, v));
        else if (key == "synth.structure_seed") c.synth.structure_seed = to_u64(key, v);
        else if (key == "synth.video_seed") c.video_seed = to_u64(key, v);
        else if (key == "run.jobs") c.jobs = static_cast<unsigned>(std::max<long long>(1, to_int(key, v)));
        else throw ConfigError("unknown config key '" + key + "'");
    }
    if (c.init.K < 1) throw ConfigError("model.K must be positive");
    if (!(c.init.gc_fraction >= 0.0 && c.init.gc_fraction < 1.0)) throw ConfigError("model.gc_fraction must be in [0, 1)");
    if (!(c.train.C > 0.0) || !(c.train.eps_rel > 0.0)) throw ConfigError("train.C and train.eps_rel must be positive");
    if (c.train.lambda_y < 0.0 || c.train.lambda_v < 0.0) throw ConfigError("loss weights must be non-negative");
    c.init.jobs = c.jobs;
    c.init.p1.jobs = c.jobs;
    c.train.inference.jobs = c.jobs;
    return c;
}

std::map<std::string, std::string> read_ini(const std::filesystem::path& path) {
    if (!std::filesystem::exists(path)) throw ConfigError("config file not found: " + path.string());
    boost::property_tree::ptree tree;
    try {
        boost::property_tree::read_ini(path.string(), tree);
    } catch (const boost::property_tree::ini_parser_error& e) {
        throw ConfigError(e.what());
    }
    std::map<std::string, std::string> out;
    for (const auto& [section, body] : tree) {
        if (body.empty()) throw ConfigError("key '" + section + "' must live inside a section");
        for (const auto& [key, value] : body) out[section + "." + key] = value.get_value<std::string>();
    }
    return out;
}

RunConfig load_config(const std::filesystem::path& path, const std::map<std::string, std::string>& overrides) {
    auto values = path.empty() ? std::map<std::string, std::string>{} : read_ini(path);
    for (const auto& [k, v] : overrides) values[k] = v;
    return make_config(values);
}

}  // namespace hiact::cli
