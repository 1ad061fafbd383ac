#include "hiact/cli/commands.hpp"

#include <algorithm>
#include <filesystem>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "hiact/cli/config.hpp"
#include "hiact/core/error.hpp"
#include "hiact/core/parallel.hpp"
#include "hiact/evaluation.hpp"
#include "hiact/feature_io.hpp"
#include "hiact/model_io.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace hiact::cli {

namespace {

// Missing inputs and malformed arguments are the caller's fault (exit 1).
struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void require_file(const fs::path& p, const char* what) {
    if (!fs::is_regular_file(p)) throw InputError(std::string(what) + " not found: " + p.string());
}
void require_dir(const fs::path& p, const char* what) {
    if (!fs::is_directory(p)) throw InputError(std::string(what) + " not found: " + p.string());
}

std::vector<fs::path> list_files(const fs::path& dir, const std::string& suffix) {
    std::vector<fs::path> out;
    for (const auto& e : fs::directory_iterator(dir)) {
        const auto name = e.path().filename().string();
        if (e.is_regular_file() && name.size() > suffix.size() &&
            name.compare(name.size() - suffix.size(), suffix.size(), suffix) == 0)
            out.push_back(e.path());
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::map<std::string, VideoFeatures> load_feature_dir(const fs::path& dir) {
    require_dir(dir, "feature directory");
    std::map<std::string, VideoFeatures> out;
    for (const auto& p : list_files(dir, ".feat")) {
        auto f = read_features(p);
        const auto id = f.features.video_id;
        if (!out.emplace(id, std::move(f.features)).second) throw InputError("duplicate video id " + id + " in " + dir.string());
    }
    if (out.empty()) throw InputError("no .feat files in " + dir.string());
    return out;
}

json pca_json(const std::vector<PcaModel>& pca) {
    json arr = json::array();
    for (const auto& m : pca)
        arr.push_back({{"mean", m.mean},
                       {"rows", m.projection.rows()},
                       {"cols", m.projection.cols()},
                       {"projection", m.projection.values()},
                       {"explained_variance", m.explained_variance},
                       {"total_variance", m.total_variance},
                       {"rank_deficient", m.rank_deficient}});
    return arr;
}

std::vector<PcaModel> pca_from(const json& arr) {
    std::vector<PcaModel> out;
    for (const auto& j : arr) {
        PcaModel m;
        m.mean = j.at("mean").get<std::vector<double>>();
        m.projection = Matrix(j.at("rows").get<std::size_t>(), j.at("cols").get<std::size_t>());
        m.projection.values() = j.at("projection").get<std::vector<double>>();
        m.explained_variance = j.at("explained_variance").get<std::vector<double>>();
        m.total_variance = j.at("total_variance");
        m.rank_deficient = j.at("rank_deficient");
        out.push_back(std::move(m));
    }
    return out;
}

struct Dataset {
    std::vector<TrainVideo> videos;
    int S = 1;
    int Y = 1;
};

Dataset load_dataset(const fs::path& features, const fs::path& labels, const fs::path& annotations,
                     Supervision supervision) {
    auto feats = load_feature_dir(features);
    require_file(labels, "labels file");
    const auto lab = read_labels(labels);
    AnnotationMap ann;
    if (!annotations.empty()) {
        require_file(annotations, "annotations file");
        ann = read_annotations(annotations);
    } else if (supervision != Supervision::Video) {
        throw InputError("--annotations is required for " + std::string(to_string(supervision)) + " supervision");
    }
    Dataset d;
    int max_action = -1, max_y = -1;
    for (const auto& [id, y] : lab) {
        auto it = feats.find(id);
        if (it == feats.end()) throw InputError("no features for labelled video " + id);
        TrainVideo v;
        v.x = std::move(it->second);
        v.y = y;
        if (auto a = ann.find(id); a != ann.end()) v.intervals = a->second;
        for (const auto& q : v.intervals) {
            if (q.t_end >= static_cast<int>(v.x.length()))
                throw InputError("interval past the end of video " + id);
            max_action = std::max(max_action, q.action);
        }
        if (supervision == Supervision::Temporal)
            for (auto& q : v.intervals) q.region = -1;
        max_y = std::max(max_y, y);
        d.videos.push_back(std::move(v));
    }
    if (d.videos.empty()) throw InputError("labels file lists no videos");
    d.S = std::max(1, max_action + 1);
    d.Y = max_y + 1;
    return d;
}

std::map<std::string, std::string> parse_overrides(const std::vector<std::string>& sets) {
    std::map<std::string, std::string> out;
    for (const auto& s : sets) {
        const auto eq = s.find('=');
        if (eq == std::string::npos || eq == 0) throw ConfigError("--set expects section.key=value, got '" + s + "'");
        out[s.substr(0, eq)] = s.substr(eq + 1);
    }
    return out;
}

std::string labeling_csv_rows(const std::string& id, const Labeling& L, const ActionletDictionary& dict) {
    std::string out;
    for (std::size_t t = 0; t < L.length(); ++t)
        for (std::size_t r = 0; r < L.region_count(); ++r) {
            const int v = L.v[r][t];
            out += id + "," + std::to_string(t) + "," + std::to_string(r) + "," + std::to_string(L.z[r][t] + 1) + "," +
                   std::to_string(v + 1) + "," + std::to_string(dict.u_of_v[v] + 1) + "\n";
        }
    return out;
}

struct Common {
    std::string config;
    std::vector<std::string> sets;
    int jobs = 0;
    std::string supervision;

    RunConfig resolve() const {
        auto ov = parse_overrides(sets);
        if (jobs > 0) ov["run.jobs"] = std::to_string(jobs);
        if (!supervision.empty()) ov["train.supervision"] = supervision;
        if (!config.empty() && !fs::is_regular_file(config)) throw InputError("config file not found: " + config);
        return load_config(config, ov);
    }
};

void add_common(CLI::App* app, Common& c) {
    app->add_option("--config", c.config, "INI configuration file");
    app->add_option("--set", c.sets, "override a config key, section.key=value")->take_all();
    app->add_option("--jobs", c.jobs, "worker threads");
}

std::vector<Labeling> infer_all(const std::vector<const VideoFeatures*>& videos, const ModelParams& params,
                                const RunConfig& cfg, std::vector<double>* energies = nullptr) {
    std::vector<Labeling> out(videos.size());
    if (energies) energies->assign(videos.size(), 0.0);
    InferenceOptions opt = cfg.train.inference;
    opt.jobs = 1;
    parallel_for(videos.size(), cfg.jobs, [&](std::size_t i) {
        auto r = infer(*videos[i], params, nullptr, opt);
        out[i] = std::move(r.labeling);
        if (energies) (*energies)[i] = r.energy;
    });
    return out;
}

// Commands ------------------------------------------------------------------

int cmd_features(const Common& c, const std::string& skeletons, const std::string& out_dir, bool geo_only,
                 const std::string& motion_dir, const std::string& pca_path, std::ostream& out) {
    auto ov = parse_overrides(c.sets);
    if (geo_only) ov["descriptor.motion"] = "none";
    if (!motion_dir.empty()) ov["descriptor.motion"] = "precomputed";
    if (c.jobs > 0) ov["run.jobs"] = std::to_string(c.jobs);
    if (!c.config.empty() && !fs::is_regular_file(c.config)) throw InputError("config file not found: " + c.config);
    const auto cfg = load_config(c.config, ov);
    require_dir(skeletons, "skeleton directory");
    const auto schema = JointSchema::by_name(cfg.schema);
    const auto files = list_files(skeletons, ".jsonl");
    if (files.empty()) throw InputError("no .jsonl skeleton files in " + skeletons);

    std::vector<SkeletonSequence> seqs;
    std::vector<PrecomputedMotion> motions(files.size());
    for (std::size_t i = 0; i < files.size(); ++i) {
        auto s = read_skeleton(files[i]);
        if (s.video_id.empty()) s.video_id = files[i].stem().string();
        if (s.planar) s = lift_sequence(s, schema, cfg.descriptor.lift_depth);
        if (cfg.descriptor.motion == MotionMode::Precomputed) {
            const fs::path side = fs::path(motion_dir) / (s.video_id + ".motion.jsonl");
            require_file(side, "motion sidecar");
            motions[i] = parse_motion_sidecar(read_file(side), s.frames.size(), schema.joint_count());
        }
        seqs.push_back(std::move(s));
    }

    std::vector<PcaModel> pca;
    if (cfg.descriptor.motion != MotionMode::None) {
        if (!pca_path.empty()) {
            require_file(pca_path, "PCA file");
            pca = pca_from(json::parse(read_file(pca_path)).at("pca"));
        } else {
            std::vector<MotionInput> inputs;
            for (std::size_t i = 0; i < seqs.size(); ++i)
                inputs.push_back({&seqs[i], cfg.descriptor.motion == MotionMode::Precomputed ? &motions[i] : nullptr});
            pca = fit_region_pca(inputs, schema, cfg.descriptor);
        }
    }
    const auto hash = cfg.hash();
    parallel_for(seqs.size(), cfg.jobs, [&](std::size_t i) {
        const auto* m = cfg.descriptor.motion == MotionMode::Precomputed ? &motions[i] : nullptr;
        auto x = build_descriptors(seqs[i], schema, pca, cfg.descriptor, m);
        x.video_id = seqs[i].video_id;
        write_features(fs::path(out_dir) / (x.video_id + ".feat"), x, hash);
    });
    json meta = {{"config_hash", hash},
                 {"schema", cfg.schema},
                 {"dim", cfg.descriptor.dim()},
                 {"videos", seqs.size()},
                 {"pca", pca_json(pca)}};
    write_atomic(fs::path(out_dir) / "pca.json", meta.dump(1) + "\n");
    out << "wrote " << seqs.size() << " feature files (D=" << cfg.descriptor.dim() << ") to " << out_dir << "\n";
    return kExitOk;
}

int cmd_init_dictionary(const Common& c, const std::string& features, const std::string& annotations,
                        const std::string& labels, const std::string& out_path, std::ostream& out) {
    const auto cfg = c.resolve();
    auto data = load_dataset(features, labels, annotations, cfg.supervision);
    const auto init = initialize(data.videos, data.S, data.Y, cfg.supervision, cfg.init);
    json j = {{"config_hash", cfg.hash()},
              {"supervision", std::string(to_string(cfg.supervision))},
              {"K", init.dims.K},
              {"R", init.dims.R},
              {"D", init.dims.D},
              {"S", init.dims.S},
              {"Y", init.dims.Y},
              {"A", init.dims.A},
              {"G", init.dictionary.G},
              {"u_of_v", init.dictionary.u_of_v},
              {"p1_infeasible", init.p1_infeasible.size()}};
    write_atomic(out_path, j.dump(1) + "\n");
    out << "K=" << init.dims.K << " A=" << init.dims.A << " G=" << json(init.dictionary.G).dump() << "\n";
    return kExitOk;
}

int cmd_init_assignments(const Common& c, const std::string& features, const std::string& annotations,
                         const std::string& labels, const std::string& out_path, std::ostream& out) {
    const auto cfg = c.resolve();
    auto data = load_dataset(features, labels, annotations, cfg.supervision);
    const auto init = initialize(data.videos, data.S, data.Y, cfg.supervision, cfg.init);
    AnnotationMap result;
    for (std::size_t m = 0; m < data.videos.size(); ++m) {
        auto& list = result[data.videos[m].x.video_id];
        for (std::size_t q = 0; q < init.intervals[m].size(); ++q)
            for (std::size_t r = 0; r < init.regions[m][q].size(); ++r)
                if (init.regions[m][q][r]) {
                    auto iv = init.intervals[m][q];
                    iv.region = static_cast<int>(r);
                    list.push_back(iv);
                }
    }
    write_atomic(out_path, format_annotations(result));
    out << "assigned regions for " << data.videos.size() << " videos";
    if (!init.p1_infeasible.empty()) out << " (" << init.p1_infeasible.size() << " intervals could not be placed without conflict)";
    out << "\n";
    return kExitOk;
}

int cmd_train(const Common& c, const std::string& features, const std::string& annotations,
              const std::string& labels, const std::string& out_path, std::string log_path, std::ostream& out,
              std::ostream& err) {
    const auto cfg = c.resolve();
    auto data = load_dataset(features, labels, annotations, cfg.supervision);
    const auto init = initialize(data.videos, data.S, data.Y, cfg.supervision, cfg.init);
    const auto res = train(data.videos, init, cfg.train);

    ModelBundle bundle;
    bundle.params = res.params;
    bundle.schema = cfg.schema;
    bundle.descriptor = cfg.descriptor;
    bundle.poselet_centroids = init.poselet_centroids;
    bundle.config_hash = cfg.hash();
    bundle.supervision = std::string(to_string(cfg.supervision));
    if (const auto p = fs::path(features) / "pca.json"; fs::is_regular_file(p))
        bundle.pca = pca_from(json::parse(read_file(p)).at("pca"));
    save_model(out_path, bundle);

    if (log_path.empty()) log_path = out_path + ".log.jsonl";
    std::string log;
    for (const auto& e : res.log)
        log += json{{"iteration", e.iteration},       {"objective", e.objective},
                    {"violation", e.violation},       {"cp_iterations", e.cp_iterations},
                    {"cp_hit_cap", e.cp_hit_cap},     {"accepted", e.accepted},
                    {"wall_seconds", e.seconds},      {"config_hash", bundle.config_hash}}
                   .dump() +
               "\n";
    write_atomic(log_path, log);
    if (res.cp_warning) err << "warning: cutting plane hit its iteration cap\n";
    if (res.rejected_steps) err << "note: an outer step that raised the objective was rejected\n";
    out << "trained on " << data.videos.size() << " videos, objective " << res.objective_trace.back() << "\n";
    return kExitOk;
}

ModelBundle load_model_checked(const std::string& path) {
    require_file(path, "model file");
    return load_model(path);
}

int cmd_infer(const Common& c, const std::string& model_path, const std::string& features, const std::string& out_dir,
              std::ostream& out) {
    const auto cfg = c.resolve();
    const auto model = load_model_checked(model_path);
    const auto feats = load_feature_dir(features);
    std::vector<const VideoFeatures*> vids;
    for (const auto& [id, x] : feats) vids.push_back(&x);
    std::vector<double> energies;
    const auto labs = infer_all(vids, model.params, cfg, &energies);
    LabelMap preds;
    for (std::size_t i = 0; i < vids.size(); ++i) {
        const auto& L = labs[i];
        json frames = json::array();
        for (std::size_t t = 0; t < L.length(); ++t)
            for (std::size_t r = 0; r < L.region_count(); ++r)
                frames.push_back({{"t", t},
                                  {"region", r},
                                  {"z", L.z[r][t] + 1},
                                  {"v", L.v[r][t] + 1},
                                  {"u", model.params.dictionary.u_of_v[L.v[r][t]] + 1}});
        json j = {{"video_id", vids[i]->video_id},
                  {"y", L.y + 1},
                  {"energy", energies[i]},
                  {"model_hash", model.config_hash},
                  {"frames", frames}};
        write_atomic(fs::path(out_dir) / (vids[i]->video_id + ".json"), j.dump() + "\n");
        preds[vids[i]->video_id] = L.y;
    }
    write_atomic(fs::path(out_dir) / "predictions.csv", format_labels(preds));
    out << "inferred " << vids.size() << " videos\n";
    return kExitOk;
}

int cmd_annotate(const Common& c, const std::string& model_path, const std::string& features,
                 const std::string& out_dir, int min_run, std::ostream& out) {
    const auto cfg = c.resolve();
    const auto model = load_model_checked(model_path);
    const auto feats = load_feature_dir(features);
    std::vector<const VideoFeatures*> vids;
    for (const auto& [id, x] : feats) vids.push_back(&x);
    const auto labs = infer_all(vids, model.params, cfg);
    std::string frames = "video_id,t,region,z,v,u\n";
    LabelMap preds;
    AnnotationMap intervals;
    for (std::size_t i = 0; i < vids.size(); ++i) {
        frames += labeling_csv_rows(vids[i]->video_id, labs[i], model.params.dictionary);
        preds[vids[i]->video_id] = labs[i].y;
        intervals[vids[i]->video_id] = extract_intervals(labs[i], model.params.dictionary, min_run);
    }
    write_atomic(fs::path(out_dir) / "frames.csv", frames);
    write_atomic(fs::path(out_dir) / "labels.csv", format_labels(preds));
    write_atomic(fs::path(out_dir) / "intervals.csv", format_annotations(intervals));
    out << "annotated " << vids.size() << " videos\n";
    return kExitOk;
}

json pr_json(const PrecisionRecall& pr) {
    return {{"precision", pr.precision}, {"recall", pr.recall}, {"true_positives", pr.true_positives},
            {"predicted", pr.predicted}, {"truth", pr.truth}};
}

int cmd_eval(const std::string& predictions, const std::string& truth, const std::string& pred_intervals,
             const std::string& truth_intervals, double min_overlap, const std::string& out_path, std::ostream& out) {
    require_file(predictions, "predictions file");
    require_file(truth, "truth labels file");
    json j;
    j["accuracy"] = accuracy(read_labels(predictions), read_labels(truth));
    if (!pred_intervals.empty() || !truth_intervals.empty()) {
        require_file(pred_intervals, "predicted intervals file");
        require_file(truth_intervals, "truth intervals file");
        const auto p = read_annotations(pred_intervals), t = read_annotations(truth_intervals);
        DetectionCriterion crit;
        crit.min_overlap = min_overlap;
        j["detection"] = pr_json(detection_pr(p, t, crit));
        crit.match_region = true;
        j["spatiotemporal"] = pr_json(detection_pr(p, t, crit));
    }
    const auto text = j.dump(1) + "\n";
    if (!out_path.empty()) write_atomic(out_path, text);
    out << text;
    return kExitOk;
}

int cmd_synth(const Common& c, const std::string& out_dir, std::ostream& out) {
    const auto cfg = c.resolve();
    const auto data = plant_synthetic(cfg.synth, cfg.video_seed);
    const fs::path root(out_dir);
    const auto hash = cfg.hash();
    AnnotationMap ann;
    LabelMap labels;
    std::string truth = "video_id,t,region,z,v,u\n";
    for (const auto& sv : data.videos) {
        const auto& v = sv.video;
        write_features(root / "features" / (v.x.video_id + ".feat"), v.x, hash);
        ann[v.x.video_id] = v.intervals;
        labels[v.x.video_id] = v.y;
        for (std::size_t t = 0; t < v.x.length(); ++t)
            for (std::size_t r = 0; r < v.x.region_count(); ++r)
                truth += v.x.video_id + "," + std::to_string(t) + "," + std::to_string(r) + "," +
                         std::to_string(sv.truth.poselets[r][t] + 1) + "," + std::to_string(sv.truth.actionlets[r][t] + 1) +
                         "," + std::to_string(sv.truth.actions[r][t] + 1) + "\n";
    }
    write_atomic(root / "annotations.csv", format_annotations(ann));
    write_atomic(root / "labels.csv", format_labels(labels));
    write_atomic(root / "truth_frames.csv", truth);
    out << "planted " << data.videos.size() << " videos in " << out_dir << "\n";
    return kExitOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Hierarchical complex-action recognition over skeleton sequences"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all");

    Common common;
    std::string skeletons, out_path, motion_dir, pca_path, features, annotations, labels, log_path, model;
    std::string predictions, truth, pred_intervals, truth_intervals;
    bool geo_only = false;
    int min_run = 3;
    double min_overlap = 0.6;

    auto* features_cmd = app.add_subcommand("features", "compute per-region descriptors from skeleton files");
    add_common(features_cmd, common);
    features_cmd->add_option("--skeletons", skeletons, "directory of .jsonl skeleton files")->required();
    features_cmd->add_option("--out", out_path, "output directory")->required();
    features_cmd->add_flag("--geo-only", geo_only, "joint-angle descriptor only (D=18)");
    features_cmd->add_option("--motion-dir", motion_dir, "directory of <video_id>.motion.jsonl sidecars");
    features_cmd->add_option("--pca", pca_path, "reuse the PCA of an earlier run (pca.json)");

    auto add_data = [&](CLI::App* cmd, bool need_out) {
        add_common(cmd, common);
        cmd->add_option("--features", features, "feature directory")->required();
        cmd->add_option("--annotations", annotations, "atomic-action intervals CSV");
        cmd->add_option("--labels", labels, "complex-action labels CSV")->required();
        cmd->add_option("--supervision", common.supervision, "full, temporal or video");
        auto* o = cmd->add_option("--out", out_path, "output file");
        if (need_out) o->required();
    };
    auto* initd = app.add_subcommand("init-dictionary", "cluster poselets and actionlets, print a summary");
    add_data(initd, true);
    auto* inita = app.add_subcommand("init-assignments", "assign annotated intervals to body regions");
    add_data(inita, true);
    auto* train_cmd = app.add_subcommand("train", "train a model");
    add_data(train_cmd, true);
    train_cmd->add_option("--log", log_path, "training log (JSON lines)");

    auto* infer_cmd = app.add_subcommand("infer", "predict complex actions and per-frame labels");
    add_common(infer_cmd, common);
    infer_cmd->add_option("--model", model, "model file")->required();
    infer_cmd->add_option("--features", features, "feature directory")->required();
    infer_cmd->add_option("--out", out_path, "output directory")->required();

    auto* annotate_cmd = app.add_subcommand("annotate", "per-frame spatio-temporal annotation CSV");
    add_common(annotate_cmd, common);
    annotate_cmd->add_option("--model", model, "model file")->required();
    annotate_cmd->add_option("--features", features, "feature directory")->required();
    annotate_cmd->add_option("--out", out_path, "output directory")->required();
    annotate_cmd->add_option("--min-run", min_run, "shortest atomic-action run kept as an interval");

    auto* eval_cmd = app.add_subcommand("eval", "accuracy and detection metrics");
    eval_cmd->add_option("--predictions", predictions, "predicted labels CSV")->required();
    eval_cmd->add_option("--truth", truth, "true labels CSV")->required();
    eval_cmd->add_option("--pred-intervals", pred_intervals, "predicted intervals CSV");
    eval_cmd->add_option("--truth-intervals", truth_intervals, "true intervals CSV");
    eval_cmd->add_option("--min-overlap", min_overlap, "IoU needed for a detection");
    eval_cmd->add_option("--out", out_path, "metrics JSON");

    auto* synth_cmd = app.add_subcommand("synth", "write a planted synthetic dataset");
    add_common(synth_cmd, common);
    synth_cmd->add_option("--out", out_path, "output directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp& e) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return kExitValidation;
    }

    try {
        if (*features_cmd) return cmd_features(common, skeletons, out_path, geo_only, motion_dir, pca_path, out);
        if (*initd) return cmd_init_dictionary(common, features, annotations, labels, out_path, out);
        if (*inita) return cmd_init_assignments(common, features, annotations, labels, out_path, out);
        if (*train_cmd) return cmd_train(common, features, annotations, labels, out_path, log_path, out, err);
        if (*infer_cmd) return cmd_infer(common, model, features, out_path, out);
        if (*annotate_cmd) return cmd_annotate(common, model, features, out_path, min_run, out);
        if (*eval_cmd) return cmd_eval(predictions, truth, pred_intervals, truth_intervals, min_overlap, out_path, out);
        if (*synth_cmd) return cmd_synth(common, out_path, out);
    } catch (const InputError& e) {
        err << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const ParseError& e) {
        err << "parse error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const SchemaError& e) {
        err << "schema error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const DimensionError& e) {
        err << "dimension error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const DomainError& e) {
        err << "invalid value: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::exception& e) {
        err << "runtime error: " << e.what() << "\n";
        return kExitRuntime;
    }
    return kExitValidation;
}

}  // namespace hiact::cli
