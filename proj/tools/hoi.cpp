// Copyright 2026 The hoipoint Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "CLI11.hpp"
#include "json.hpp"

#include "hoipoint/io.hpp"
#include "hoipoint/losses.hpp"
#include "hoipoint/oracles.hpp"
#include "hoipoint/testkit.hpp"

namespace {

using namespace hoipoint;
using nlohmann::json;

struct Options {
    std::string config_path;
    io::RunConfig cfg;
    std::string setting = "default";

    // Flag presence tracking so flags win over the config file.
    CLI::App* attach(CLI::App* cmd) {
        cmd->add_option("--config", config_path, "JSON config file");
        cmd->add_option("--stride", cfg.stride, "image-to-grid stride");
        cmd->add_option("--sigma", cfg.sigma, "Gaussian target std dev (grid units)");
        cmd->add_option("--topk", cfg.topk, "max decoded candidates");
        cmd->add_option("--h-tau", cfg.h_tau, "human score floor");
        cmd->add_option("--o-tau", cfg.o_tau, "object score floor");
        cmd->add_option("--a-tau", cfg.a_tau, "action score floor");
        cmd->add_option("--d-tau", cfg.d_tau, "corner distance ceiling (grid units)");
        cmd->add_option("--mode", cfg.mode,
                        "grouping mode: full|angle_only|angle_plus_ratio|box_only|box_plus_corner");
        cmd->add_option("--setting", setting, "eval setting: default|known_object");
        cmd->add_option("--seed", cfg.seed, "RNG seed");
        cmd->add_option("--threads", cfg.threads, "worker threads (0 = library default)");
        return cmd;
    }

    // Re-read the config file, then re-apply any flags the user passed.
    void resolve(CLI::App* cmd) {
        if (!config_path.empty()) {
            io::RunConfig file_cfg = io::read_config(config_path);
            const io::RunConfig defaults;
            const auto keep = [&](const std::string& flag, auto member) {
                if (cmd->count(flag) == 0) cfg.*member = file_cfg.*member;
            };
            keep("--stride", &io::RunConfig::stride);
            keep("--sigma", &io::RunConfig::sigma);
            keep("--topk", &io::RunConfig::topk);
            keep("--h-tau", &io::RunConfig::h_tau);
            keep("--o-tau", &io::RunConfig::o_tau);
            keep("--a-tau", &io::RunConfig::a_tau);
            keep("--d-tau", &io::RunConfig::d_tau);
            keep("--seed", &io::RunConfig::seed);
            keep("--threads", &io::RunConfig::threads);
            if (cmd->count("--mode") == 0) cfg.mode = file_cfg.mode;
            cfg.num_actions = file_cfg.num_actions;
            cfg.grid_height = file_cfg.grid_height;
            cfg.grid_width = file_cfg.grid_width;
            cfg.person_category = file_cfg.person_category;
            cfg.num_object_categories = file_cfg.num_object_categories;
            cfg.angle_min = file_cfg.angle_min;
            cfg.ratio_max = file_cfg.ratio_max;
            cfg.lambda_v = file_cfg.lambda_v;
            cfg.t_low = file_cfg.t_low;
            cfg.t_high = file_cfg.t_high;
            cfg.rare_cutoff = file_cfg.rare_cutoff;
            cfg.no_object_classes = file_cfg.no_object_classes;
            (void)defaults;
        }
        cfg.validate();
#ifdef _OPENMP
        if (cfg.threads > 0) omp_set_num_threads(cfg.threads);
#endif
        std::cerr << "resolved config: " << io::config_json(cfg) << "\n";
    }
};

std::vector<InteractionTriplet> single_image_triplets(const std::vector<TripletRecord>& records,
                                                      const char* what) {
    std::vector<InteractionTriplet> out;
    for (const TripletRecord& r : records) {
        if (!out.empty() && records.front().image_id != r.image_id)
            throw ValidationError(std::string(what) + ": expected records from a single image");
        out.push_back(r.triplet);
    }
    return out;
}

int cmd_encode(Options& opt, const std::string& gt_path, const std::string& out_points,
               const std::string& out_vectors, const std::string& out_mask) {
    const eval::GroundTruthSet gts = io::read_ground_truth(gt_path, opt.cfg);
    const std::vector<InteractionTriplet> triplets =
        single_image_triplets(gts.triplets, "encode");
    const codec::ClassHeatmap hm = codec::encode_points(
        triplets, opt.cfg.num_actions, opt.cfg.grid_height, opt.cfg.grid_width, opt.cfg.sigma);
    const codec::VectorTargets vt =
        codec::encode_vectors(triplets, opt.cfg.grid_height, opt.cfg.grid_width);
    io::write_tensor(io::to_tensor(hm), out_points);
    io::write_tensor(io::to_tensor(vt.field), out_vectors);
    if (!out_mask.empty()) io::write_tensor(io::to_tensor(vt.mask), out_mask);
    return 0;
}

int cmd_decode(Options& opt, const std::string& points_path, const std::string& vectors_path,
               const std::string& out_path) {
    const codec::ClassHeatmap hm = io::heatmap_from_tensor(io::read_tensor(points_path));
    const codec::VectorField vf = io::vector_field_from_tensor(io::read_tensor(vectors_path));
    const std::vector<double> thresholds(hm.num_classes, opt.cfg.a_tau);
    io::write_candidates(codec::decode_peaks(hm, opt.cfg.topk, thresholds, vf), out_path);
    return 0;
}

int cmd_group(Options& opt, const std::string& det_path, const std::string& cand_path,
              const std::string& out_path, std::int64_t image_id) {
    std::vector<io::DetectionRecord> records;
    for (const io::DetectionRecord& r : io::read_detections(det_path))
        if (r.image_id == image_id) records.push_back(r);
    const io::DetectionSplit split = io::ingest_detections(records, opt.cfg);
    if (split.dropped > 0)
        std::cerr << "warning: dropped " << split.dropped << " malformed detection records\n";
    const std::vector<codec::InteractionCandidate> cands = io::read_candidates(cand_path);
    const std::vector<InteractionTriplet> triplets =
        grouping::group(split.humans, split.objects, cands, opt.cfg.grouping());
    std::vector<TripletRecord> out;
    for (const InteractionTriplet& t : triplets) out.push_back({image_id, t});
    io::write_triplets(out, out_path, opt.cfg);
    return 0;
}

int cmd_loss(Options& opt, const std::string& pred_points, const std::string& target_points,
             const std::string& pred_vectors, const std::string& target_vectors,
             const std::string& target_mask) {
    const codec::ClassHeatmap pred = io::heatmap_from_tensor(io::read_tensor(pred_points));
    const codec::ClassHeatmap target = io::heatmap_from_tensor(io::read_tensor(target_points));
    const codec::VectorField pv = io::vector_field_from_tensor(io::read_tensor(pred_vectors));
    const codec::VectorField tv = io::vector_field_from_tensor(io::read_tensor(target_vectors));
    const codec::SupervisionMask mask = io::mask_from_tensor(io::read_tensor(target_mask));
    if (mask.height != tv.height || mask.width != tv.width)
        throw ValidationError("loss: mask and vector-field shapes differ");
    std::vector<losses::VectorTarget> targets;
    for (int y = 0; y < mask.height; ++y)
        for (int x = 0; x < mask.width; ++x)
            if (mask.at(y, x)) targets.push_back({{x, y}, tv.at(y, x)});
    const losses::LossReport r = losses::make_report(pred, target, pv, targets, opt.cfg.lambda_v);
    json j;
    j["l_point"] = r.l_point;
    j["l_vector"] = r.l_vector;
    j["l_total"] = r.l_total;
    j["n_points"] = r.n_points;
    std::cout << j.dump() << "\n";
    return 0;
}

int cmd_eval(Options& opt, const std::string& preds_path, const std::string& gt_path,
             const std::string& per_class_csv) {
    const eval::GroundTruthSet gts = io::read_ground_truth(gt_path, opt.cfg);
    const std::vector<TripletRecord> preds =
        io::read_triplets(preds_path, opt.cfg, opt.cfg.no_object_classes);
    eval::Setting setting;
    if (opt.setting == "default")
        setting = eval::Setting::default_setting;
    else if (opt.setting == "known_object")
        setting = eval::Setting::known_object;
    else
        throw ConfigError("unknown setting '" + opt.setting + "'");
    const eval::EvalReport r = eval::evaluate(preds, gts, setting);
    json j;
    j["setting"] = opt.setting;
    j["map_role"] = r.map_full;
    j["map_rare"] = r.map_rare;
    j["map_nonrare"] = r.map_nonrare;
    json ap = json::object();
    for (const auto& [c, v] : r.per_class_ap) ap[std::to_string(c)] = v;
    j["per_class_ap"] = ap;
    std::cout << j.dump() << "\n";
    if (!per_class_csv.empty()) {
        std::string csv = "action_id,ap,split\n";
        for (const auto& [c, v] : r.per_class_ap) {
            char buf[64];
            std::snprintf(buf, sizeof(buf), "%d,%.9g,%s\n", c, v,
                          r.rare_classes.count(c) ? "rare" : "non-rare");
            csv += buf;
        }
        std::ofstream out(per_class_csv);
        if (!out) throw IoError("cannot open " + per_class_csv);
        out << csv;
    }
    return 0;
}

int cmd_synth(Options& opt, const std::string& out_dir, int pairs, int actions, int distractors) {
    testkit::SynthParams params;
    params.seed = opt.cfg.seed;
    params.n_pairs = pairs;
    params.n_actions = actions;
    params.distractors = distractors;
    params.grid_height = opt.cfg.grid_height;
    params.grid_width = opt.cfg.grid_width;
    params.sigma = opt.cfg.sigma;
    const testkit::SceneBundle scene = testkit::synth_scene(params);

    std::filesystem::create_directories(out_dir);
    const auto path = [&](const char* name) { return out_dir + "/" + name; };

    eval::GroundTruthSet gts;
    gts.no_object_classes = opt.cfg.no_object_classes;
    gts.rare_cutoff = opt.cfg.rare_cutoff;
    gts.class_counts.assign(actions, 0);
    for (const InteractionTriplet& t : scene.triplets) {
        gts.triplets.push_back({0, t});
        ++gts.class_counts[t.action_id];
    }
    for (int c = 0; c < actions; ++c) gts.known_object_images[c] = {0};
    io::write_ground_truth(gts, path("gt.jsonl"), opt.cfg);

    std::vector<io::DetectionRecord> dets;
    const auto add_det = [&](const ScoredDetection& d) {
        io::DetectionRecord r;
        r.image_id = 0;
        r.bbox[0] = d.bbox.x_min * opt.cfg.stride;
        r.bbox[1] = d.bbox.y_min * opt.cfg.stride;
        r.bbox[2] = d.bbox.x_max * opt.cfg.stride;
        r.bbox[3] = d.bbox.y_max * opt.cfg.stride;
        r.category = d.category;
        r.score = d.score;
        dets.push_back(r);
    };
    for (const auto& d : scene.humans) add_det(d);
    for (const auto& d : scene.objects) add_det(d);
    for (const auto& d : scene.distractor_humans) add_det(d);
    for (const auto& d : scene.distractor_objects) add_det(d);
    io::write_detections(dets, path("detections.jsonl"));

    io::write_tensor(io::to_tensor(scene.heatmap), path("points.ipnt"));
    io::write_tensor(io::to_tensor(scene.vectors), path("vectors.ipnt"));
    io::write_tensor(io::to_tensor(scene.mask), path("mask.ipnt"));
    return 0;
}

int cmd_bench(Options& opt, int n_humans, int n_objects, int n_candidates, int runs) {
    std::mt19937_64 rng(opt.cfg.seed);
    const auto unit = [&]() {
        return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    };
    std::vector<ScoredDetection> humans, objects;
    for (int i = 0; i < n_humans; ++i) {
        const double x = unit() * 100, y = unit() * 100;
        humans.push_back({{x, y, x + 5 + unit() * 10, y + 5 + unit() * 10}, 1, 0.5 + unit() / 2});
    }
    for (int i = 0; i < n_objects; ++i) {
        const double x = unit() * 100, y = unit() * 100;
        objects.push_back({{x, y, x + 3 + unit() * 8, y + 3 + unit() * 8}, 2, 0.2 + unit() / 2});
    }
    std::vector<codec::InteractionCandidate> cands;
    for (int i = 0; i < n_candidates; ++i)
        cands.push_back({0, static_cast<int>(unit() * 120), static_cast<int>(unit() * 120),
                         0.1 + unit() * 0.9, {unit() * 20, unit() * 20}});

    const grouping::GroupingConfig gcfg = opt.cfg.grouping();
    const auto time_runs = [&](auto&& fn) {
        std::vector<double> ms;
        for (int r = 0; r < runs; ++r) {
            const auto t0 = std::chrono::steady_clock::now();
            volatile std::size_t sink = fn().size();
            (void)sink;
            const auto t1 = std::chrono::steady_clock::now();
            ms.push_back(std::chrono::duration<double, std::milli>(t1 - t0).count());
        }
        std::sort(ms.begin(), ms.end());
        return ms[ms.size() / 2];
    };
    const double serial_ms =
        time_runs([&] { return grouping::group_serial(humans, objects, cands, gcfg); });
    const double parallel_ms =
        time_runs([&] { return grouping::group(humans, objects, cands, gcfg); });

    json j;
    j["pair_tests"] = static_cast<std::int64_t>(n_humans) * n_objects * n_candidates;
    j["runs"] = runs;
    j["serial_median_ms"] = serial_ms;
    j["parallel_median_ms"] = parallel_ms;
#ifdef _OPENMP
    j["max_threads"] = omp_get_max_threads();
#else
    j["max_threads"] = 1;
#endif
    std::cout << j.dump() << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"interaction-point HOI detection toolkit"};
    app.require_subcommand(1);

    Options opt;
    std::string gt_path, points_path, vectors_path, mask_path, out_path, det_path, cand_path;
    std::string pred_points, target_points, pred_vectors, target_vectors;
    std::string out_dir = "scene", per_class_csv;
    std::int64_t image_id = 0;
    int pairs = 2, actions = 2, distractors = 0;
    int bench_h = 20, bench_o = 20, bench_c = 50, bench_runs = 100;

    CLI::App* enc = opt.attach(app.add_subcommand("encode", "ground truth to target tensors"));
    enc->add_option("--gt", gt_path)->required();
    enc->add_option("--out-points", points_path)->required();
    enc->add_option("--out-vectors", vectors_path)->required();
    enc->add_option("--out-mask", mask_path);

    CLI::App* dec = opt.attach(app.add_subcommand("decode", "tensors to candidate peaks"));
    dec->add_option("--points", points_path)->required();
    dec->add_option("--vectors", vectors_path)->required();
    dec->add_option("--out", out_path)->required();

    CLI::App* grp = opt.attach(app.add_subcommand("group", "pair candidates with detections"));
    grp->add_option("--detections", det_path)->required();
    grp->add_option("--candidates", cand_path)->required();
    grp->add_option("--out", out_path)->required();
    grp->add_option("--image-id", image_id);

    CLI::App* los = opt.attach(app.add_subcommand("loss", "loss report for prediction tensors"));
    los->add_option("--pred-points", pred_points)->required();
    los->add_option("--target-points", target_points)->required();
    los->add_option("--pred-vectors", pred_vectors)->required();
    los->add_option("--target-vectors", target_vectors)->required();
    los->add_option("--target-mask", mask_path)->required();

    CLI::App* evl = opt.attach(app.add_subcommand("eval", "role mAP of triplets vs ground truth"));
    evl->add_option("--preds", out_path)->required();
    evl->add_option("--gt", gt_path)->required();
    evl->add_option("--per-class-csv", per_class_csv);

    CLI::App* syn = opt.attach(app.add_subcommand("synth", "write a synthetic scene bundle"));
    syn->add_option("--out-dir", out_dir)->required();
    syn->add_option("--pairs", pairs);
    syn->add_option("--actions", actions);
    syn->add_option("--distractors", distractors);

    CLI::App* ben = opt.attach(app.add_subcommand("bench", "grouping timing, serial vs parallel"));
    ben->add_option("--humans", bench_h);
    ben->add_option("--objects", bench_o);
    ben->add_option("--candidates", bench_c);
    ben->add_option("--runs", bench_runs);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        CLI::App* cmd = app.get_subcommands().front();
        opt.resolve(cmd);
        if (cmd == enc) return cmd_encode(opt, gt_path, points_path, vectors_path, mask_path);
        if (cmd == dec) return cmd_decode(opt, points_path, vectors_path, out_path);
        if (cmd == grp) return cmd_group(opt, det_path, cand_path, out_path, image_id);
        if (cmd == los)
            return cmd_loss(opt, pred_points, target_points, pred_vectors, target_vectors,
                            mask_path);
        if (cmd == evl) return cmd_eval(opt, out_path, gt_path, per_class_csv);
        if (cmd == syn) return cmd_synth(opt, out_dir, pairs, actions, distractors);
        if (cmd == ben) return cmd_bench(opt, bench_h, bench_o, bench_c, bench_runs);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return 3;
    } catch (const ValidationError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 4;
    }
    return 0;
}
