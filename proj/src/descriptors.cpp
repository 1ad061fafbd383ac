#include "hiact/descriptors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <Eigen/Dense>
#include <json.hpp>

#include "hiact/core/error.hpp"

namespace hiact {

namespace {

// Indices into RegionJoints::points (owned joints first, then references).
struct SegmentDef {
    int from;
    int to;
};
// arm points: wrist, elbow, shoulder, neck, head, torso
constexpr std::array<SegmentDef, 6> kArmSegments{{{0, 1}, {1, 2}, {2, 3}, {0, 2}, {0, 4}, {3, 5}}};
// leg points: ankle, knee, hip, hip_center, torso
constexpr std::array<SegmentDef, 6> kLegSegments{{{0, 1}, {1, 2}, {2, 3}, {0, 2}, {0, 4}, {3, 4}}};
constexpr std::array<int, 3> kOffPlaneSegments{2, 4, 5};

constexpr double kTinyLength = 1e-12;

double clamp_unit(double c) { return std::clamp(c, -1.0, 1.0); }

}  // namespace

GeoDescriptor geo_descriptor(const RegionJoints& region) {
    const std::array<SegmentDef, 6>* defs = nullptr;
    if (region.kind == RegionKind::Arm && region.points.size() == 6)
        defs = &kArmSegments;
    else if (region.kind == RegionKind::Leg && region.points.size() == 5)
        defs = &kLegSegments;
    else
        throw SchemaError("geometric descriptor needs an arm (6 points) or leg (5 points) region");

    GeoDescriptor out;
    std::array<Vec3, 6> unit{};
    std::array<bool, 6> valid{};
    for (std::size_t i = 0; i < 6; ++i) {
        const Vec3 s = region.points[(*defs)[i].to] - region.points[(*defs)[i].from];
        const double len = norm(s);
        valid[i] = len > kTinyLength;
        if (valid[i]) unit[i] = (1.0 / len) * s;
        else out.degenerate = true;
    }

    std::size_t k = 0;
    for (std::size_t i = 0; i < 6; ++i)
        for (std::size_t j = i + 1; j < 6; ++j, ++k)
            out.angles[k] = valid[i] && valid[j] ? std::acos(clamp_unit(dot(unit[i], unit[j]))) : 0.0;

    const Vec3 n = cross(region.points[1] - region.points[0], region.points[2] - region.points[1]);
    const double n_len = norm(n);
    const bool plane_ok = n_len > kTinyLength;
    if (!plane_ok) out.degenerate = true;
    for (std::size_t p = 0; p < kOffPlaneSegments.size(); ++p, ++k) {
        const int s = kOffPlaneSegments[p];
        out.angles[k] =
            plane_ok && valid[s] ? std::asin(std::min(1.0, std::abs(dot((1.0 / n_len) * n, unit[s])))) : 0.0;
    }
    return out;
}

std::vector<double> velocity_descriptor(const SkeletonSequence& seq, std::size_t t,
                                        std::span<const int> joints, int half_window) {
    const auto T = static_cast<long>(seq.length());
    const long steps = 2L * half_window + 1;
    std::vector<double> out(joints.size() * static_cast<std::size_t>(steps) * 3, 0.0);
    if (T <= 1) return out;
    auto clamp_t = [T](long u) { return std::clamp<long>(u, 0, T - 1); };
    std::size_t o = 0;
    for (int j : joints) {
        for (long s = -half_window; s <= half_window; ++s) {
            const long tau = clamp_t(static_cast<long>(t) + s);
            Vec3 d;
            if (tau == 0)
                d = seq.frames[1][j] - seq.frames[0][j];
            else if (tau == T - 1)
                d = seq.frames[T - 1][j] - seq.frames[T - 2][j];
            else
                d = 0.5 * (seq.frames[tau + 1][j] - seq.frames[tau - 1][j]);
            out[o++] = d.x;
            out[o++] = d.y;
            out[o++] = d.z;
        }
    }
    return out;
}

// PCA ----------------------------------------------------------------------

std::vector<double> PcaModel::project(std::span<const double> x) const {
    if (x.size() != input_dim()) throw DimensionError("PCA input has wrong dimension");
    std::vector<double> out(output_dim(), 0.0);
    for (std::size_t i = 0; i < input_dim(); ++i) {
        const double c = x[i] - mean[i];
        for (std::size_t k = 0; k < output_dim(); ++k) out[k] += c * projection(i, k);
    }
    return out;
}

std::vector<double> PcaModel::reconstruct(std::span<const double> code) const {
    if (code.size() != output_dim()) throw DimensionError("PCA code has wrong dimension");
    std::vector<double> out(mean);
    for (std::size_t i = 0; i < input_dim(); ++i)
        for (std::size_t k = 0; k < output_dim(); ++k) out[i] += projection(i, k) * code[k];
    return out;
}

PcaModel fit_pca(const Matrix& samples, std::size_t out_dim) {
    const std::size_t n = samples.rows(), d = samples.cols();
    if (n <= out_dim) throw DimensionError("PCA needs more samples than output dimensions");
    if (d == 0) throw DimensionError("PCA input dimension is zero");

    Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> X(
        samples.data(), static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
    const Eigen::RowVectorXd mu = X.colwise().mean();
    const Eigen::MatrixXd centered = X.rowwise() - mu;
    const Eigen::MatrixXd cov = (centered.transpose() * centered) / static_cast<double>(n - 1);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
    const Eigen::VectorXd& values = eig.eigenvalues();  // ascending
    const Eigen::MatrixXd& vectors = eig.eigenvectors();

    PcaModel model;
    model.mean.assign(mu.data(), mu.data() + d);
    model.projection = Matrix(d, out_dim, 0.0);
    model.explained_variance.assign(out_dim, 0.0);
    model.total_variance = std::max(0.0, cov.trace());
    const double top = std::max(0.0, values(static_cast<Eigen::Index>(d) - 1));
    const double tol = std::max(top, 1.0) * 1e-12 * static_cast<double>(d);
    for (std::size_t k = 0; k < out_dim; ++k) {
        if (k >= d) {
            model.rank_deficient = true;
            continue;
        }
        const auto col = static_cast<Eigen::Index>(d - 1 - k);
        const double lambda = values(col);
        if (lambda <= tol) {
            model.rank_deficient = true;
            continue;
        }
        Eigen::VectorXd v = vectors.col(col);
        Eigen::Index arg = 0;
        v.cwiseAbs().maxCoeff(&arg);
        if (v(arg) < 0) v = -v;
        for (std::size_t i = 0; i < d; ++i) model.projection(i, k) = v(static_cast<Eigen::Index>(i));
        model.explained_variance[k] = lambda;
    }
    return model;
}

// 2D lift ------------------------------------------------------------------

std::vector<Vec3> lift_2d(std::span<const Vec2> joints, const JointSchema& schema, double depth) {
    if (joints.size() != schema.joint_count())
        throw SchemaError("2D frame joint count does not match schema '" + schema.name() + "'");
    std::vector<Vec3> out;
    out.reserve(joints.size());
    for (std::size_t j = 0; j < joints.size(); ++j)
        out.push_back({joints[j].x, joints[j].y, schema.depth_sign(static_cast<int>(j)) * depth});
    return out;
}

SkeletonSequence lift_sequence(const SkeletonSequence& planar, const JointSchema& schema, double depth) {
    SkeletonSequence out = planar;
    out.planar = false;
    std::vector<Vec2> flat;
    for (auto& frame : out.frames) {
        flat.clear();
        for (const auto& p : frame) flat.push_back({p.x, p.y});
        frame = lift_2d(flat, schema, depth);
    }
    return out;
}

// Assembly -----------------------------------------------------------------

MotionMode motion_mode_from_string(std::string_view name) {
    if (name == "none" || name == "geo-only") return MotionMode::None;
    if (name == "velocity") return MotionMode::Velocity;
    if (name == "precomputed") return MotionMode::Precomputed;
    throw ParseError("unknown motion mode '" + std::string(name) + "'");
}

std::string_view to_string(MotionMode mode) {
    switch (mode) {
        case MotionMode::None: return "none";
        case MotionMode::Velocity: return "velocity";
        case MotionMode::Precomputed: return "precomputed";
    }
    return "none";
}

PrecomputedMotion parse_motion_sidecar(std::string_view text, std::size_t frames, std::size_t joints) {
    PrecomputedMotion out(frames, std::vector<std::vector<double>>(joints));
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t lineno = 0;
    std::optional<std::size_t> width;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        nlohmann::json obj;
        try {
            obj = nlohmann::json::parse(line);
        } catch (const nlohmann::json::parse_error& e) {
            throw ParseError(std::string("invalid JSON: ") + e.what(), lineno);
        }
        if (!obj.contains("t") || !obj.contains("joint") || !obj.contains("feat") || !obj["feat"].is_array())
            throw ParseError("motion record needs t, joint and feat", lineno);
        const auto t = obj["t"].get<long>();
        const auto j = obj["joint"].get<long>();
        if (t < 0 || static_cast<std::size_t>(t) >= frames || j < 0 || static_cast<std::size_t>(j) >= joints)
            throw ParseError("motion record outside the skeleton", lineno);
        auto& slot = out[t][j];
        if (!slot.empty()) throw ParseError("duplicate motion record", lineno);
        slot = obj["feat"].get<std::vector<double>>();
        if (width && slot.size() != *width) throw ParseError("inconsistent motion feature width", lineno);
        width = slot.size();
        if (slot.empty()) throw ParseError("empty motion feature", lineno);
    }
    for (std::size_t t = 0; t < frames; ++t)
        for (std::size_t j = 0; j < joints; ++j)
            if (out[t][j].empty())
                throw SchemaError("missing motion feature for t=" + std::to_string(t) + " joint=" + std::to_string(j));
    return out;
}

Matrix raw_motion(const SkeletonSequence& seq, const JointSchema& schema, std::size_t region,
                  const DescriptorConfig& config, const PrecomputedMotion* motion) {
    const auto& owned = schema.regions().at(region).owned;
    const std::size_t T = seq.length();
    if (config.motion == MotionMode::Velocity) {
        const std::size_t width = owned.size() * (2 * static_cast<std::size_t>(config.half_window) + 1) * 3;
        Matrix out(T, width);
        for (std::size_t t = 0; t < T; ++t) {
            const auto v = velocity_descriptor(seq, t, owned, config.half_window);
            std::copy(v.begin(), v.end(), out.row(t).begin());
        }
        return out;
    }
    if (config.motion == MotionMode::Precomputed) {
        if (!motion || motion->size() != T) throw SchemaError("precomputed motion does not cover the video");
        std::size_t width = 0;
        for (int j : owned) width += (*motion)[0].at(j).size();
        Matrix out(T, width);
        for (std::size_t t = 0; t < T; ++t) {
            std::size_t o = 0;
            for (int j : owned)
                for (double v : (*motion)[t].at(j)) out(t, o++) = v;
        }
        return out;
    }
    return Matrix(T, 0);
}

std::vector<PcaModel> fit_region_pca(std::span<const MotionInput> inputs, const JointSchema& schema,
                                     const DescriptorConfig& config) {
    std::vector<PcaModel> models;
    if (config.motion == MotionMode::None) return models;
    for (std::size_t r = 0; r < schema.region_count(); ++r) {
        std::vector<Matrix> parts;
        std::size_t rows = 0;
        for (const auto& in : inputs) {
            parts.push_back(raw_motion(*in.skeleton, schema, r, config, in.motion));
            rows += parts.back().rows();
        }
        const std::size_t cols = parts.empty() ? 0 : parts.front().cols();
        Matrix pooled(rows, cols);
        std::size_t o = 0;
        for (const auto& p : parts) {
            if (p.cols() != cols) throw DimensionError("raw motion width differs between videos");
            std::copy(p.values().begin(), p.values().end(), pooled.values().begin() + o * cols);
            o += p.rows();
        }
        models.push_back(fit_pca(pooled, config.pca_dim));
    }
    return models;
}

VideoFeatures build_descriptors(const SkeletonSequence& seq, const JointSchema& schema,
                                std::span<const PcaModel> pca, const DescriptorConfig& config,
                                const PrecomputedMotion* motion) {
    const SkeletonSequence lifted = seq.planar ? lift_sequence(seq, schema, config.lift_depth) : SkeletonSequence{};
    const SkeletonSequence& s = seq.planar ? lifted : seq;
    const std::size_t T = s.length(), R = schema.region_count(), D = config.dim();
    if (config.motion != MotionMode::None && pca.size() != R)
        throw DimensionError("need one PCA model per region");

    VideoFeatures out;
    out.video_id = s.video_id;
    out.regions.assign(R, Matrix(T, D));
    out.degenerate.assign(T * R, 0);
    const auto frames = split_regions(s, schema);
    for (std::size_t r = 0; r < R; ++r) {
        Matrix motion_raw;
        if (config.motion != MotionMode::None) {
            motion_raw = raw_motion(s, schema, r, config, motion);
            if (motion_raw.cols() != pca[r].input_dim())
                throw DimensionError("raw motion width does not match the PCA model");
        }
        for (std::size_t t = 0; t < T; ++t) {
            auto row = out.regions[r].row(t);
            std::size_t o = 0;
            if (config.include_geo) {
                const auto g = geo_descriptor(frames[t][r]);
                std::copy(g.angles.begin(), g.angles.end(), row.begin());
                o = kGeoDim;
                out.degenerate[t * R + r] = g.degenerate ? 1 : 0;
            }
            if (config.motion != MotionMode::None) {
                const auto code = pca[r].project(motion_raw.row(t));
                std::copy(code.begin(), code.end(), row.begin() + static_cast<std::ptrdiff_t>(o));
            }
        }
    }
    return out;
}

}  // namespace hiact
