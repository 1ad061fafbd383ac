#pragma once

// Frame descriptors x_{t,r} = [geometric angles ; reduced motion].

#include <array>
#include <span>
#include <string_view>
#include <vector>

#include "hiact/core/matrix.hpp"
#include "hiact/skeleton_io.hpp"
#include "hiact/video_features.hpp"

namespace hiact {

inline constexpr std::size_t kGeoDim = 18;

/// Fifteen pairwise segment angles in [0, pi] followed by three plane angles
/// in [0, pi/2].
///
/// Segments, each pointing from the first joint to the second:
///   arm: wrist-elbow, elbow-shoulder, shoulder-neck, wrist-shoulder, wrist-head, neck-torso
///   leg: ankle-knee, knee-hip, hip-hip_center, ankle-hip, ankle-torso, hip_center-torso
/// Pairs are ordered (0,1), (0,2), ..., (4,5). The limb plane is spanned by
/// segments 0, 1 and 3; the plane angles are arcsin(|n . s|) for segments 2, 4, 5.
struct GeoDescriptor {
    std::array<double, kGeoDim> angles{};
    bool degenerate = false;  // a zero-length segment or collinear limb was met
};

GeoDescriptor geo_descriptor(const RegionJoints& region);

/// Displacements of the region's owned joints over a window of 2w+1 frames
/// centred at t (clamped to the sequence). Each step uses a central difference,
/// one-sided at the ends; a single-frame sequence yields zeros.
/// Layout: joint-major, then window step, then xyz.
std::vector<double> velocity_descriptor(const SkeletonSequence& seq, std::size_t t,
                                        std::span<const int> joints, int half_window);

struct PcaModel {
    std::vector<double> mean;
    Matrix projection;  // input_dim x output_dim, orthonormal columns
    std::vector<double> explained_variance;
    double total_variance = 0.0;
    bool rank_deficient = false;  // some output columns are zero padding

    std::size_t input_dim() const noexcept { return mean.size(); }
    std::size_t output_dim() const noexcept { return projection.cols(); }
    std::vector<double> project(std::span<const double> x) const;
    std::vector<double> reconstruct(std::span<const double> code) const;
};

/// Rows of `samples` are observations. Requires samples.rows() > out_dim.
PcaModel fit_pca(const Matrix& samples, std::size_t out_dim);

/// 2D puppet joints to 3D: z = +d for wrists and knees, -d for elbows, 0 otherwise.
std::vector<Vec3> lift_2d(std::span<const Vec2> joints, const JointSchema& schema, double depth = 30.0);
SkeletonSequence lift_sequence(const SkeletonSequence& planar, const JointSchema& schema, double depth = 30.0);

enum class MotionMode { None, Velocity, Precomputed };

MotionMode motion_mode_from_string(std::string_view name);
std::string_view to_string(MotionMode mode);

struct DescriptorConfig {
    bool include_geo = true;
    MotionMode motion = MotionMode::Velocity;
    int half_window = 7;
    std::size_t pca_dim = 20;
    double lift_depth = 30.0;

    std::size_t dim() const noexcept {
        return (include_geo ? kGeoDim : 0) + (motion == MotionMode::None ? 0 : pca_dim);
    }
};

/// Ingested per-joint motion features, [t][joint] -> feature vector.
using PrecomputedMotion = std::vector<std::vector<std::vector<double>>>;

/// JSON-lines records {"t": int, "joint": int, "feat": [...]}; every (t, joint)
/// pair must be present exactly once.
PrecomputedMotion parse_motion_sidecar(std::string_view text, std::size_t frames, std::size_t joints);

/// T x raw_dim motion matrix for one region before PCA.
Matrix raw_motion(const SkeletonSequence& seq, const JointSchema& schema, std::size_t region,
                  const DescriptorConfig& config, const PrecomputedMotion* motion = nullptr);

struct MotionInput {
    const SkeletonSequence* skeleton = nullptr;
    const PrecomputedMotion* motion = nullptr;
};

/// One PCA model per region, fitted on the pooled raw motion of all inputs.
std::vector<PcaModel> fit_region_pca(std::span<const MotionInput> inputs, const JointSchema& schema,
                                     const DescriptorConfig& config);

VideoFeatures build_descriptors(const SkeletonSequence& seq, const JointSchema& schema,
                                std::span<const PcaModel> pca, const DescriptorConfig& config,
                                const PrecomputedMotion* motion = nullptr);

}  // namespace hiact
