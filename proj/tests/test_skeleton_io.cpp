#include <doctest.h>

#include <set>

#include "fixtures.hpp"
#include "hiact/core/error.hpp"
#include "hiact/skeleton_io.hpp"

using namespace hiact;

namespace {

std::string frame_line(int t, std::size_t joints, double fill = 0.0) {
    std::string s = "{\"t\": " + std::to_string(t) + ", \"joints\": [";
    for (std::size_t j = 0; j < joints; ++j) s += std::string(j ? "," : "") + "[" + std::to_string(fill) + ",0,0]";
    return s + "]}\n";
}

}  // namespace

TEST_CASE("single all-zero frame") {
    const auto seq = parse_skeleton(frame_line(0, 20));
    CHECK(seq.frames.size() == 1);
    CHECK(seq.frames[0].size() == 20);
    CHECK_FALSE(seq.planar);
}

TEST_CASE("frames are reordered by t") {
    const auto seq = parse_skeleton(frame_line(1, 20, 1.0) + frame_line(0, 20, 2.0));
    REQUIRE(seq.frames.size() == 2);
    CHECK(seq.frames[0][0].x == 2.0);
    CHECK(seq.frames[1][0].x == 1.0);
}

TEST_CASE("toy fixture") {
    const auto seq = read_skeleton(fixtures::data_path("toy.jsonl"));
    CHECK(seq.video_id == "toy");
    CHECK(seq.frames.size() == 3);
    const auto schema = JointSchema::kinect20();
    const int head = *schema.index_of("head");
    CHECK(seq.frames[0][head].x == 0.0);
    CHECK(seq.frames[0][head].y == 1.8);
    CHECK(seq.frames[0][head].z == 0.0);
}

TEST_CASE("malformed lines report their line number") {
    const std::string text = frame_line(0, 20) + "{not json\n";
    try {
        parse_skeleton(text);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_skeleton(frame_line(0, 20) + frame_line(1, 19)), SchemaError);
    CHECK_THROWS_AS(parse_skeleton(frame_line(0, 20) + frame_line(0, 20)), ParseError);
    CHECK_THROWS_AS(parse_skeleton(""), ParseError);
}

TEST_CASE("parse, serialize, parse is the identity") {
    const auto a = read_skeleton(fixtures::data_path("toy.jsonl"));
    const auto b = parse_skeleton(serialize_skeleton(a));
    CHECK(a.video_id == b.video_id);
    CHECK(a.schema == b.schema);
    CHECK(a.fps == b.fps);
    REQUIRE(a.frames.size() == b.frames.size());
    for (std::size_t t = 0; t < a.frames.size(); ++t)
        for (std::size_t j = 0; j < a.frames[t].size(); ++j) {
            CHECK(a.frames[t][j].x == b.frames[t][j].x);
            CHECK(a.frames[t][j].y == b.frames[t][j].y);
            CHECK(a.frames[t][j].z == b.frames[t][j].z);
        }
}

TEST_CASE("planar streams round-trip") {
    const auto seq = parse_skeleton("{\"t\":0,\"joints\":[[1,2],[3,4]]}\n");
    CHECK(seq.planar);
    const auto again = parse_skeleton(serialize_skeleton(seq));
    CHECK(again.planar);
    CHECK(again.frames[0][1].y == 4.0);
}

TEST_CASE("four limb regions with shared references") {
    const auto schema = JointSchema::kinect20();
    const auto seq = read_skeleton(fixtures::data_path("toy.jsonl"));
    const auto frames = split_regions(seq, schema);
    REQUIRE(frames.size() == 3);
    REQUIRE(frames[0].size() == 4);
    const auto& left_arm = frames[0][0];
    CHECK(left_arm.kind == RegionKind::Arm);
    CHECK(left_arm.owned_count == 3);
    const auto& f0 = seq.frames[0];
    CHECK(left_arm.points[0].x == f0[*schema.index_of("left_wrist")].x);
    CHECK(left_arm.points[1].y == f0[*schema.index_of("left_elbow")].y);
    CHECK(left_arm.points[2].x == f0[*schema.index_of("left_shoulder")].x);

    // every owned joint belongs to exactly one region
    std::multiset<int> owned;
    for (const auto& r : schema.regions()) owned.insert(r.owned.begin(), r.owned.end());
    for (int j : owned) CHECK(owned.count(j) == 1);
}

TEST_CASE("single region owning everything") {
    const auto schema = JointSchema::single_region(JointSchema::kinect20());
    const auto seq = read_skeleton(fixtures::data_path("toy.jsonl"));
    const auto frames = split_regions(seq, schema);
    REQUIRE(frames[0].size() == 1);
    CHECK(frames[0][0].points.size() == 20);
    CHECK(frames[0][0].points[3].y == 1.8);
}

TEST_CASE("joint count mismatch is a schema error") {
    const auto seq = parse_skeleton(frame_line(0, 15));
    CHECK_THROWS_AS(split_regions(seq, JointSchema::kinect20()), SchemaError);
}

TEST_CASE("annotation validation") {
    VideoSample s;
    s.skeleton = read_skeleton(fixtures::data_path("toy.jsonl"));
    s.intervals = {{0, 0, 1, 0}, {1, 1, 2, 0}};
    CHECK(validate_annotations(s).size() == 1);
    s.intervals = {{0, 0, 1, -1}, {1, 1, 2, -1}};
    CHECK(validate_annotations(s).empty());

    const auto ann = read_annotations(fixtures::data_path("toy_annotations.csv"));
    s.intervals = ann.at("toy");
    CHECK(s.intervals.size() == 3);
    CHECK(s.intervals[0].action == 0);  // 1-based in the file
    CHECK(validate_annotations(s).empty());
}

TEST_CASE("annotation and label files round-trip") {
    const auto ann = read_annotations(fixtures::data_path("toy_annotations.csv"));
    const auto text = format_annotations(ann);
    CHECK(text.rfind("video_id,action_id,t_start,t_end,region\n", 0) == 0);
    CHECK(text.find("toy,2,1,1,0") != std::string::npos);
    const auto labels = read_labels(fixtures::data_path("toy_labels.csv"));
    CHECK(labels.at("toy") == 0);
    CHECK(format_labels(labels) == "video_id,complex_action\ntoy,1\n");
}

TEST_CASE("sub-JHMDB puppet schema") {
    const auto s = JointSchema::jhmdb15();
    CHECK(s.joint_count() == 15);
    CHECK(s.region_count() == 4);
    CHECK(s.coordinate_dims() == 2);
    CHECK(s.depth_sign(*s.index_of("left_wrist")) == 1);
    CHECK(s.depth_sign(*s.index_of("left_elbow")) == -1);
    CHECK(s.depth_sign(*s.index_of("neck")) == 0);
}
