#pragma once

// Skeleton streams, joint schemas, body regions and temporal annotations.
//
// Conventions: frames are 0-based, intervals are inclusive on both ends and
// every label held in memory is 0-based. Files carry 1-based action and
// complex-action ids; region -1 in a file (and in memory) means unknown.

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hiact/core/vec3.hpp"

namespace hiact {

enum class RegionKind { Arm, Leg, Generic };

/// One body region. For arms `owned` is {wrist, elbow, shoulder} and
/// `references` is {neck, head, torso}; for legs `owned` is {ankle, knee, hip}
/// and `references` is {hip_center, torso}. Generic regions carry any joints
/// and no geometric descriptor.
struct RegionSpec {
    std::string name;
    RegionKind kind = RegionKind::Generic;
    std::vector<int> owned;
    std::vector<int> references;
};

class JointSchema {
public:
    JointSchema() = default;
    JointSchema(std::string name, std::vector<std::string> joint_names, std::vector<RegionSpec> regions,
                int coordinate_dims = 3);

    /// 20-joint Kinect skeleton, four regions: left arm, right arm, left leg, right leg.
    static JointSchema kinect20();
    /// 15-joint sub-JHMDB puppet (2D coordinates). Belly stands in for the torso
    /// and hip center, face for the head.
    static JointSchema jhmdb15();
    /// Looks up a built-in schema by name ("kinect20", "jhmdb15").
    static JointSchema by_name(std::string_view name);
    /// Same joints, one generic region owning all of them.
    static JointSchema single_region(const JointSchema& base);

    const std::string& name() const noexcept { return name_; }
    const std::vector<std::string>& joint_names() const noexcept { return joint_names_; }
    const std::vector<RegionSpec>& regions() const noexcept { return regions_; }
    std::size_t joint_count() const noexcept { return joint_names_.size(); }
    std::size_t region_count() const noexcept { return regions_.size(); }
    int coordinate_dims() const noexcept { return coordinate_dims_; }

    std::optional<int> index_of(std::string_view joint) const;
    /// +1 for wrists and knees, -1 for elbows, 0 otherwise (2D depth lift).
    int depth_sign(int joint) const;

private:
    void validate() const;

    std::string name_;
    std::vector<std::string> joint_names_;
    std::vector<RegionSpec> regions_;
    int coordinate_dims_ = 3;
};

struct SkeletonSequence {
    std::string video_id;
    std::string schema = "kinect20";
    std::optional<double> fps;
    bool planar = false;  // parsed from 2D joints, z still zero
    std::vector<std::vector<Vec3>> frames;

    std::size_t length() const noexcept { return frames.size(); }
    friend bool operator==(const SkeletonSequence&, const SkeletonSequence&) = default;
};

struct ActionInterval {
    int action = 0;  // 0-based atomic action
    int t_start = 0;
    int t_end = 0;  // inclusive
    int region = -1;

    int length() const noexcept { return t_end - t_start + 1; }
    bool overlaps(const ActionInterval& o) const noexcept {
        return t_start <= o.t_end && o.t_start <= t_end;
    }
    friend bool operator==(const ActionInterval&, const ActionInterval&) = default;
};

struct VideoSample {
    SkeletonSequence skeleton;
    std::optional<int> complex_action;  // 0-based
    std::vector<ActionInterval> intervals;
};

/// Joints of one region in one frame: owned joints first (role order), then references.
struct RegionJoints {
    RegionKind kind = RegionKind::Generic;
    std::vector<Vec3> points;
    std::size_t owned_count = 0;
};

using RegionFrames = std::vector<std::vector<RegionJoints>>;  // [t][r]

/// JSON-lines skeleton stream; the optional first line is a header object.
SkeletonSequence parse_skeleton(std::string_view text);
SkeletonSequence read_skeleton(const std::filesystem::path& path);
std::string serialize_skeleton(const SkeletonSequence& seq);

RegionFrames split_regions(const SkeletonSequence& seq, const JointSchema& schema);

struct AnnotationViolation {
    std::size_t first = 0;
    std::size_t second = 0;
    int region = -1;
    std::string message;
};

/// Reports pairs of intervals that overlap inside the same known region,
/// and intervals that fall outside the video.
std::vector<AnnotationViolation> validate_annotations(const VideoSample& sample);

using AnnotationMap = std::map<std::string, std::vector<ActionInterval>>;
using LabelMap = std::map<std::string, int>;

AnnotationMap read_annotations(const std::filesystem::path& path);
std::string format_annotations(const AnnotationMap& annotations);
LabelMap read_labels(const std::filesystem::path& path);
std::string format_labels(const LabelMap& labels);

}  // namespace hiact
