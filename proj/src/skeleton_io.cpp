#include "hiact/skeleton_io.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "hiact/core/csv.hpp"
#include "hiact/core/error.hpp"

namespace hiact {

using nlohmann::json;

// JointSchema -------------------------------------------------------------

JointSchema::JointSchema(std::string name, std::vector<std::string> joint_names,
                         std::vector<RegionSpec> regions, int coordinate_dims)
    : name_(std::move(name)),
      joint_names_(std::move(joint_names)),
      regions_(std::move(regions)),
      coordinate_dims_(coordinate_dims) {
    validate();
}

void JointSchema::validate() const {
    if (regions_.empty()) throw SchemaError("schema '" + name_ + "' has no regions");
    if (coordinate_dims_ != 2 && coordinate_dims_ != 3)
        throw SchemaError("schema '" + name_ + "' must use 2 or 3 coordinates");
    const auto n = static_cast<int>(joint_names_.size());
    for (const auto& region : regions_) {
        if (region.owned.empty()) throw SchemaError("region '" + region.name + "' owns no joints");
        for (int j : region.owned)
            if (j < 0 || j >= n) throw SchemaError("region '" + region.name + "' references unknown joint");
        for (int j : region.references)
            if (j < 0 || j >= n) throw SchemaError("region '" + region.name + "' references unknown joint");
        if (region.kind == RegionKind::Arm && (region.owned.size() != 3 || region.references.size() != 3))
            throw SchemaError("arm region '" + region.name + "' needs 3 owned and 3 reference joints");
        if (region.kind == RegionKind::Leg && (region.owned.size() != 3 || region.references.size() != 2))
            throw SchemaError("leg region '" + region.name + "' needs 3 owned and 2 reference joints");
    }
    std::set<int> seen;
    for (const auto& region : regions_)
        for (int j : region.owned)
            if (!seen.insert(j).second)
                throw SchemaError("joint '" + joint_names_[j] + "' owned by more than one region");
}

std::optional<int> JointSchema::index_of(std::string_view joint) const {
    for (std::size_t i = 0; i < joint_names_.size(); ++i)
        if (joint_names_[i] == joint) return static_cast<int>(i);
    return std::nullopt;
}

int JointSchema::depth_sign(int joint) const {
    const auto& name = joint_names_.at(joint);
    if (name.find("wrist") != std::string::npos || name.find("knee") != std::string::npos) return 1;
    if (name.find("elbow") != std::string::npos) return -1;
    return 0;
}

namespace {

int need(const std::vector<std::string>& names, std::string_view joint) {
    for (std::size_t i = 0; i < names.size(); ++i)
        if (names[i] == joint) return static_cast<int>(i);
    throw SchemaError("missing joint '" + std::string(joint) + "'");
}

std::vector<RegionSpec> limb_regions(const std::vector<std::string>& names, std::string_view head,
                                     std::string_view neck, std::string_view torso,
                                     std::string_view hip_center) {
    std::vector<RegionSpec> regions;
    for (std::string side : {"left", "right"}) {
        regions.push_back({side + "_arm",
                           RegionKind::Arm,
                           {need(names, side + "_wrist"), need(names, side + "_elbow"),
                            need(names, side + "_shoulder")},
                           {need(names, neck), need(names, head), need(names, torso)}});
    }
    for (std::string side : {"left", "right"}) {
        regions.push_back({side + "_leg",
                           RegionKind::Leg,
                           {need(names, side + "_ankle"), need(names, side + "_knee"),
                            need(names, side + "_hip")},
                           {need(names, hip_center), need(names, torso)}});
    }
    return regions;
}

}  // namespace

JointSchema JointSchema::kinect20() {
    std::vector<std::string> names{
        "hip_center",  "torso",       "neck",       "head",           "left_shoulder",
        "left_elbow",  "left_wrist",  "left_hand",  "right_shoulder", "right_elbow",
        "right_wrist", "right_hand",  "left_hip",   "left_knee",      "left_ankle",
        "left_foot",   "right_hip",   "right_knee", "right_ankle",    "right_foot"};
    auto regions = limb_regions(names, "head", "neck", "torso", "hip_center");
    return JointSchema("kinect20", std::move(names), std::move(regions), 3);
}

JointSchema JointSchema::jhmdb15() {
    std::vector<std::string> names{
        "neck",      "belly",      "face",        "right_shoulder", "left_shoulder",
        "right_hip", "left_hip",   "right_elbow", "left_elbow",     "right_knee",
        "left_knee", "right_wrist", "left_wrist", "right_ankle",    "left_ankle"};
    // The puppet has no hip center; legs measure against belly and neck instead.
    auto regions = limb_regions(names, "face", "neck", "belly", "belly");
    for (auto& r : regions)
        if (r.kind == RegionKind::Leg) r.references = {need(names, "belly"), need(names, "neck")};
    return JointSchema("jhmdb15", std::move(names), std::move(regions), 2);
}

JointSchema JointSchema::by_name(std::string_view name) {
    if (name == "kinect20") return kinect20();
    if (name == "jhmdb15") return jhmdb15();
    throw SchemaError("unknown joint schema '" + std::string(name) + "'");
}

JointSchema JointSchema::single_region(const JointSchema& base) {
    RegionSpec all{"body", RegionKind::Generic, {}, {}};
    for (std::size_t j = 0; j < base.joint_count(); ++j) all.owned.push_back(static_cast<int>(j));
    return JointSchema(base.name() + "_single", base.joint_names(), {all}, base.coordinate_dims());
}

// Skeleton stream --------------------------------------------------------

SkeletonSequence parse_skeleton(std::string_view text) {
    SkeletonSequence seq;
    std::vector<std::pair<long, std::vector<Vec3>>> frames;
    std::optional<std::size_t> joint_count;
    std::optional<std::size_t> coord_count;
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t lineno = 0;
    bool first_object = true;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        json obj;
        try {
            obj = json::parse(line);
        } catch (const json::parse_error& e) {
            throw ParseError(std::string("invalid JSON: ") + e.what(), lineno);
        }
        if (!obj.is_object()) throw ParseError("expected a JSON object", lineno);
        if (first_object && obj.contains("schema")) {
            first_object = false;
            try {
                seq.schema = obj.at("schema").get<std::string>();
                if (obj.contains("video_id")) seq.video_id = obj.at("video_id").get<std::string>();
                if (obj.contains("fps") && !obj.at("fps").is_null()) seq.fps = obj.at("fps").get<double>();
            } catch (const json::exception& e) {
                throw ParseError(std::string("bad header: ") + e.what(), lineno);
            }
            continue;
        }
        first_object = false;
        if (!obj.contains("t") || !obj.at("t").is_number_integer() || !obj.contains("joints") ||
            !obj.at("joints").is_array())
            throw ParseError("frame record needs integer 't' and array 'joints'", lineno);
        const auto& joints = obj.at("joints");
        if (joint_count && joints.size() != *joint_count)
            throw SchemaError("line " + std::to_string(lineno) + ": expected " + std::to_string(*joint_count) +
                              " joints, got " + std::to_string(joints.size()));
        joint_count = joints.size();
        std::vector<Vec3> pts;
        pts.reserve(joints.size());
        for (const auto& j : joints) {
            if (!j.is_array() || (j.size() != 2 && j.size() != 3))
                throw ParseError("joint must be [x, y] or [x, y, z]", lineno);
            if (coord_count && j.size() != *coord_count)
                throw ParseError("mixed 2D and 3D joints", lineno);
            coord_count = j.size();
            for (const auto& c : j)
                if (!c.is_number()) throw ParseError("joint coordinate is not a number", lineno);
            Vec3 p{j[0].get<double>(), j[1].get<double>(), j.size() == 3 ? j[2].get<double>() : 0.0};
            if (!is_finite(p)) throw ParseError("non-finite joint coordinate", lineno);
            pts.push_back(p);
        }
        frames.emplace_back(obj.at("t").get<long>(), std::move(pts));
    }
    if (frames.empty()) throw ParseError("skeleton stream has no frames");
    std::stable_sort(frames.begin(), frames.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    for (std::size_t i = 1; i < frames.size(); ++i)
        if (frames[i].first == frames[i - 1].first)
            throw ParseError("duplicate frame t=" + std::to_string(frames[i].first));
    seq.planar = coord_count && *coord_count == 2;
    seq.frames.reserve(frames.size());
    for (auto& f : frames) seq.frames.push_back(std::move(f.second));
    return seq;
}

SkeletonSequence read_skeleton(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    auto seq = parse_skeleton(buf.str());
    if (seq.video_id.empty()) seq.video_id = path.stem().string();
    return seq;
}

std::string serialize_skeleton(const SkeletonSequence& seq) {
    std::string out;
    json header{{"schema", seq.schema}, {"video_id", seq.video_id}};
    if (seq.fps) header["fps"] = *seq.fps;
    out += header.dump();
    out += '\n';
    for (std::size_t t = 0; t < seq.frames.size(); ++t) {
        json joints = json::array();
        for (const auto& p : seq.frames[t]) {
            if (seq.planar)
                joints.push_back({p.x, p.y});
            else
                joints.push_back({p.x, p.y, p.z});
        }
        out += json{{"t", t}, {"joints", std::move(joints)}}.dump();
        out += '\n';
    }
    return out;
}

// Regions ----------------------------------------------------------------

RegionFrames split_regions(const SkeletonSequence& seq, const JointSchema& schema) {
    RegionFrames out(seq.frames.size());
    for (std::size_t t = 0; t < seq.frames.size(); ++t) {
        const auto& frame = seq.frames[t];
        if (frame.size() != schema.joint_count())
            throw SchemaError("frame " + std::to_string(t) + " has " + std::to_string(frame.size()) +
                              " joints, schema '" + schema.name() + "' expects " +
                              std::to_string(schema.joint_count()));
        out[t].reserve(schema.region_count());
        for (const auto& region : schema.regions()) {
            RegionJoints rj;
            rj.kind = region.kind;
            rj.owned_count = region.owned.size();
            for (int j : region.owned) rj.points.push_back(frame[j]);
            for (int j : region.references) rj.points.push_back(frame[j]);
            out[t].push_back(std::move(rj));
        }
    }
    return out;
}

std::vector<AnnotationViolation> validate_annotations(const VideoSample& sample) {
    std::vector<AnnotationViolation> out;
    const auto& iv = sample.intervals;
    const auto T = static_cast<int>(sample.skeleton.length());
    for (std::size_t i = 0; i < iv.size(); ++i) {
        if (iv[i].t_start < 0 || iv[i].t_end < iv[i].t_start || (T > 0 && iv[i].t_end >= T))
            out.push_back({i, i, iv[i].region, "interval outside the video"});
    }
    for (std::size_t i = 0; i < iv.size(); ++i)
        for (std::size_t j = i + 1; j < iv.size(); ++j)
            if (iv[i].region >= 0 && iv[i].region == iv[j].region && iv[i].overlaps(iv[j]))
                out.push_back({i, j, iv[i].region, "intervals overlap in the same region"});
    return out;
}

// Annotation and label files ----------------------------------------------

AnnotationMap read_annotations(const std::filesystem::path& path) {
    const auto table = csv::read(path);
    const int c_vid = table.column("video_id"), c_act = table.column("action_id"),
              c_s = table.column("t_start"), c_e = table.column("t_end"), c_r = table.column("region");
    if (c_vid < 0 || c_act < 0 || c_s < 0 || c_e < 0 || c_r < 0)
        throw ParseError(path.string() + ": header must be video_id,action_id,t_start,t_end,region");
    AnnotationMap out;
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        const auto& row = table.rows[i];
        const auto line = table.line_numbers[i];
        ActionInterval a;
        a.action = static_cast<int>(csv::to_long(row[c_act], line)) - 1;
        a.t_start = static_cast<int>(csv::to_long(row[c_s], line));
        a.t_end = static_cast<int>(csv::to_long(row[c_e], line));
        a.region = static_cast<int>(csv::to_long(row[c_r], line));
        if (a.action < 0) throw ParseError("action_id must be >= 1", line);
        if (a.t_start < 0 || a.t_end < a.t_start) throw ParseError("need 0 <= t_start <= t_end", line);
        if (a.region < -1) throw ParseError("region must be >= -1", line);
        out[row[c_vid]].push_back(a);
    }
    return out;
}

std::string format_annotations(const AnnotationMap& annotations) {
    std::string out = "video_id,action_id,t_start,t_end,region\n";
    for (const auto& [vid, list] : annotations)
        for (const auto& a : list)
            out += vid + ',' + std::to_string(a.action + 1) + ',' + std::to_string(a.t_start) + ',' +
                   std::to_string(a.t_end) + ',' + std::to_string(a.region) + '\n';
    return out;
}

LabelMap read_labels(const std::filesystem::path& path) {
    const auto table = csv::read(path);
    const int c_vid = table.column("video_id"), c_y = table.column("complex_action");
    if (c_vid < 0 || c_y < 0) throw ParseError(path.string() + ": header must be video_id,complex_action");
    LabelMap out;
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        const auto y = csv::to_long(table.rows[i][c_y], table.line_numbers[i]);
        if (y < 1) throw ParseError("complex_action must be >= 1", table.line_numbers[i]);
        out[table.rows[i][c_vid]] = static_cast<int>(y - 1);
    }
    return out;
}

std::string format_labels(const LabelMap& labels) {
    std::string out = "video_id,complex_action\n";
    for (const auto& [vid, y] : labels) out += vid + ',' + std::to_string(y + 1) + '\n';
    return out;
}

}  // namespace hiact
