// Copyright 2026 The hoipoint Authors
// SPDX-License-Identifier: Apache-2.0

#include "hoipoint/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace hoipoint::io {

namespace {

using nlohmann::json;

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

std::string fmt_box(const double* b) {
    return "[" + fmt(b[0]) + "," + fmt(b[1]) + "," + fmt(b[2]) + "," + fmt(b[3]) + "]";
}

// Atomic text writer: full content to a temp file, then rename.
void write_file(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) throw IoError("cannot open " + tmp + " for writing");
        out << content;
        if (!out) throw IoError("write failed for " + tmp);
    }
    std::filesystem::rename(tmp, path);
}

std::vector<std::string> read_lines(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line))
        if (!line.empty()) lines.push_back(line);
    return lines;
}

json parse_line(const std::string& line, const std::string& path, std::size_t lineno) {
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object())
        throw ValidationError(path + ":" + std::to_string(lineno) + ": malformed record");
    return j;
}

geom::BBox box_from_json(const json& j, const std::string& field, double inv_stride) {
    if (!j.contains(field) || !j[field].is_array() || j[field].size() != 4)
        throw ValidationError("field '" + field + "' must be a 4-element box");
    geom::BBox b{j[field][0].get<double>() * inv_stride, j[field][1].get<double>() * inv_stride,
                 j[field][2].get<double>() * inv_stride, j[field][3].get<double>() * inv_stride};
    if (!b.valid()) throw ValidationError("field '" + field + "' is not a valid box");
    return b;
}

void put_u16(std::string& s, std::uint16_t v) {
    s.push_back(static_cast<char>(v & 0xff));
    s.push_back(static_cast<char>(v >> 8));
}

void put_u32(std::string& s, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) s.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

}  // namespace

// ---------------------------------------------------------------------------
// Tensor container

Tensor read_tensor(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    std::string buf((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());

    if (buf.size() < 8 || buf.compare(0, 4, "IPNT") != 0)
        throw ValidationError(path + ": bad tensor magic");
    const auto u8 = [&](std::size_t i) { return static_cast<std::uint8_t>(buf[i]); };
    const std::uint16_t version = static_cast<std::uint16_t>(u8(4) | (u8(5) << 8));
    if (version != 1) throw ValidationError(path + ": unsupported tensor version " +
                                            std::to_string(version));
    const std::uint8_t dtype = u8(6);
    if (dtype != 0) throw ValidationError(path + ": unsupported dtype code " +
                                          std::to_string(dtype));
    const std::uint8_t rank = u8(7);
    std::size_t off = 8;
    if (buf.size() < off + 4ull * rank) throw ValidationError(path + ": truncated header");

    Tensor t;
    std::uint64_t count = 1;
    for (int d = 0; d < rank; ++d) {
        std::uint32_t dim = 0;
        for (int i = 0; i < 4; ++i) dim |= static_cast<std::uint32_t>(u8(off + i)) << (8 * i);
        off += 4;
        t.dims.push_back(dim);
        count *= dim;
    }
    if (buf.size() < off + count * 4) throw ValidationError(path + ": truncated payload");
    if (buf.size() > off + count * 4) throw ValidationError(path + ": trailing bytes");
    t.data.resize(count);
    std::memcpy(t.data.data(), buf.data() + off, count * 4);
    return t;
}

void write_tensor(const Tensor& t, const std::string& path) {
    std::uint64_t count = 1;
    for (std::uint32_t d : t.dims) count *= d;
    if (count != t.data.size())
        throw ValidationError("write_tensor: dims do not match payload size");
    std::string buf = "IPNT";
    put_u16(buf, 1);
    buf.push_back(0);  // dtype f32
    buf.push_back(static_cast<char>(t.dims.size()));
    for (std::uint32_t d : t.dims) put_u32(buf, d);
    const std::size_t off = buf.size();
    buf.resize(off + t.data.size() * 4);
    std::memcpy(buf.data() + off, t.data.data(), t.data.size() * 4);
    write_file(path, buf);
}

Tensor to_tensor(const codec::ClassHeatmap& hm) {
    Tensor t;
    t.dims = {static_cast<std::uint32_t>(hm.num_classes), static_cast<std::uint32_t>(hm.height),
              static_cast<std::uint32_t>(hm.width)};
    t.data.assign(hm.values.begin(), hm.values.end());
    return t;
}

Tensor to_tensor(const codec::VectorField& vf) {
    Tensor t;
    t.dims = {2u, static_cast<std::uint32_t>(vf.height), static_cast<std::uint32_t>(vf.width)};
    t.data.assign(vf.values.begin(), vf.values.end());
    return t;
}

Tensor to_tensor(const codec::SupervisionMask& mask) {
    Tensor t;
    t.dims = {static_cast<std::uint32_t>(mask.height), static_cast<std::uint32_t>(mask.width)};
    t.data.assign(mask.values.begin(), mask.values.end());
    return t;
}

codec::ClassHeatmap heatmap_from_tensor(const Tensor& t) {
    if (t.dims.size() != 3) throw ValidationError("heatmap tensor must have rank 3");
    codec::ClassHeatmap hm(static_cast<int>(t.dims[0]), static_cast<int>(t.dims[1]),
                           static_cast<int>(t.dims[2]));
    hm.values.assign(t.data.begin(), t.data.end());
    return hm;
}

codec::VectorField vector_field_from_tensor(const Tensor& t) {
    if (t.dims.size() != 3 || t.dims[0] != 2)
        throw ValidationError("vector-field tensor must have shape 2 x H x W");
    codec::VectorField vf(static_cast<int>(t.dims[1]), static_cast<int>(t.dims[2]));
    vf.values.assign(t.data.begin(), t.data.end());
    return vf;
}

codec::SupervisionMask mask_from_tensor(const Tensor& t) {
    if (t.dims.size() != 2) throw ValidationError("mask tensor must have rank 2");
    codec::SupervisionMask m(static_cast<int>(t.dims[0]), static_cast<int>(t.dims[1]));
    for (std::size_t i = 0; i < t.data.size(); ++i)
        m.values[i] = t.data[i] != 0.0f ? 1 : 0;
    return m;
}

// ---------------------------------------------------------------------------
// Run configuration

grouping::Mode parse_mode(const std::string& name) {
    if (name == "full") return grouping::Mode::full;
    if (name == "angle_only") return grouping::Mode::angle_only;
    if (name == "angle_plus_ratio") return grouping::Mode::angle_plus_ratio;
    if (name == "box_only") return grouping::Mode::box_only;
    if (name == "box_plus_corner") return grouping::Mode::box_plus_corner;
    throw ConfigError("unknown grouping mode '" + name + "'");
}

std::string mode_name(grouping::Mode mode) {
    switch (mode) {
        case grouping::Mode::full: return "full";
        case grouping::Mode::angle_only: return "angle_only";
        case grouping::Mode::angle_plus_ratio: return "angle_plus_ratio";
        case grouping::Mode::box_only: return "box_only";
        case grouping::Mode::box_plus_corner: return "box_plus_corner";
    }
    return "full";
}

grouping::GroupingConfig RunConfig::grouping(const std::vector<std::int64_t>& class_counts) const {
    grouping::GroupingConfig g;
    g.h_tau = h_tau;
    g.o_tau = o_tau;
    g.a_tau = a_tau;
    g.d_tau = d_tau;
    g.angle_min = angle_min;
    g.ratio_max = ratio_max;
    g.mode = parse_mode(mode);
    g.no_object_classes = no_object_classes;
    if (rare_cutoff > 0 && !class_counts.empty())
        g.a_thresholds = codec::dynamic_thresholds(class_counts, t_low, t_high, rare_cutoff);
    return g;
}

void RunConfig::validate() const {
    if (stride < 1) throw ConfigError("stride must be >= 1");
    if (sigma <= 0.0) throw ConfigError("sigma must be positive");
    if (topk < 0) throw ConfigError("topk must be >= 0");
    if (num_actions < 1) throw ConfigError("num_actions must be >= 1");
    if (grid_height < 1 || grid_width < 1) throw ConfigError("grid shape must be positive");
    if (h_tau < 0 || o_tau < 0 || a_tau < 0 || d_tau < 0)
        throw ConfigError("score and distance thresholds must be >= 0");
    if (angle_min <= 0.0 || angle_min > 3.14159265358979323847)
        throw ConfigError("angle_min must be in (0, pi]");
    if (ratio_max < 1.0) throw ConfigError("ratio_max must be >= 1");
    if (lambda_v < 0.0) throw ConfigError("lambda_v must be >= 0");
    parse_mode(mode);
    for (int c : no_object_classes)
        if (c < 0 || c >= num_actions)
            throw ConfigError("no_object class id " + std::to_string(c) +
                              " outside the action vocabulary");
}

namespace {

void apply_config_json(RunConfig& cfg, const json& j, const std::string& origin) {
    for (const auto& [key, value] : j.items()) {
        if (key == "stride") cfg.stride = value.get<int>();
        else if (key == "sigma") cfg.sigma = value.get<double>();
        else if (key == "topk") cfg.topk = value.get<int>();
        else if (key == "num_actions") cfg.num_actions = value.get<int>();
        else if (key == "grid_height") cfg.grid_height = value.get<int>();
        else if (key == "grid_width") cfg.grid_width = value.get<int>();
        else if (key == "person_category") cfg.person_category = value.get<int>();
        else if (key == "num_object_categories") cfg.num_object_categories = value.get<int>();
        else if (key == "h_tau") cfg.h_tau = value.get<double>();
        else if (key == "o_tau") cfg.o_tau = value.get<double>();
        else if (key == "a_tau") cfg.a_tau = value.get<double>();
        else if (key == "d_tau") cfg.d_tau = value.get<double>();
        else if (key == "angle_min") cfg.angle_min = value.get<double>();
        else if (key == "ratio_max") cfg.ratio_max = value.get<double>();
        else if (key == "lambda_v") cfg.lambda_v = value.get<double>();
        else if (key == "t_low") cfg.t_low = value.get<double>();
        else if (key == "t_high") cfg.t_high = value.get<double>();
        else if (key == "rare_cutoff") cfg.rare_cutoff = value.get<std::int64_t>();
        else if (key == "mode") cfg.mode = value.get<std::string>();
        else if (key == "no_object_classes") cfg.no_object_classes = value.get<std::vector<int>>();
        else if (key == "seed") cfg.seed = value.get<std::uint64_t>();
        else if (key == "threads") cfg.threads = value.get<int>();
        else throw ConfigError(origin + ": unknown config key '" + key + "'");
    }
}

}  // namespace

RunConfig read_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config " + path);
    json j = json::parse(in, nullptr, false);
    if (j.is_discarded() || !j.is_object()) throw ConfigError(path + ": not a JSON object");
    RunConfig cfg;
    try {
        apply_config_json(cfg, j, path);
    } catch (const json::exception& e) {
        throw ConfigError(path + ": " + e.what());
    }
    cfg.validate();
    return cfg;
}

std::string config_json(const RunConfig& cfg) {
    json j;
    j["stride"] = cfg.stride;
    j["sigma"] = cfg.sigma;
    j["topk"] = cfg.topk;
    j["num_actions"] = cfg.num_actions;
    j["grid_height"] = cfg.grid_height;
    j["grid_width"] = cfg.grid_width;
    j["person_category"] = cfg.person_category;
    j["num_object_categories"] = cfg.num_object_categories;
    j["h_tau"] = cfg.h_tau;
    j["o_tau"] = cfg.o_tau;
    j["a_tau"] = cfg.a_tau;
    j["d_tau"] = cfg.d_tau;
    j["angle_min"] = cfg.angle_min;
    j["ratio_max"] = cfg.ratio_max;
    j["lambda_v"] = cfg.lambda_v;
    j["t_low"] = cfg.t_low;
    j["t_high"] = cfg.t_high;
    j["rare_cutoff"] = cfg.rare_cutoff;
    j["mode"] = cfg.mode;
    j["no_object_classes"] = cfg.no_object_classes;
    j["seed"] = cfg.seed;
    j["threads"] = cfg.threads;
    return j.dump();
}

// ---------------------------------------------------------------------------
// Detection records

std::vector<DetectionRecord> read_detections(const std::string& path) {
    std::vector<DetectionRecord> out;
    std::size_t lineno = 0;
    for (const std::string& line : read_lines(path)) {
        ++lineno;
        const json j = parse_line(line, path, lineno);
        DetectionRecord r;
        try {
            r.image_id = j.at("image_id").get<std::int64_t>();
            const auto& b = j.at("bbox");
            if (!b.is_array() || b.size() != 4)
                throw ValidationError("bbox must have 4 elements");
            for (int i = 0; i < 4; ++i) r.bbox[i] = b[i].get<double>();
            r.category = j.at("category").get<int>();
            r.score = j.at("score").get<double>();
        } catch (const json::exception& e) {
            throw ValidationError(path + ":" + std::to_string(lineno) + ": " + e.what());
        }
        out.push_back(r);
    }
    return out;
}

void write_detections(const std::vector<DetectionRecord>& dets, const std::string& path) {
    std::string buf;
    for (const DetectionRecord& d : dets) {
        buf += "{\"image_id\":" + std::to_string(d.image_id) + ",\"bbox\":" + fmt_box(d.bbox) +
               ",\"category\":" + std::to_string(d.category) + ",\"score\":" + fmt(d.score) +
               "}\n";
    }
    write_file(path, buf);
}

DetectionSplit ingest_detections(const std::vector<DetectionRecord>& records,
                                 const RunConfig& cfg) {
    DetectionSplit split;
    const double inv_stride = 1.0 / cfg.stride;
    for (const DetectionRecord& r : records) {
        if (r.category < 0 || r.category >= cfg.num_object_categories)
            throw ValidationError("unknown category id " + std::to_string(r.category));
        geom::BBox box{r.bbox[0] * inv_stride, r.bbox[1] * inv_stride, r.bbox[2] * inv_stride,
                       r.bbox[3] * inv_stride};
        if (!box.valid() || !(r.score >= 0.0 && r.score <= 1.0)) {
            ++split.dropped;
            continue;
        }
        ScoredDetection det{box, r.category, r.score};
        if (r.category == cfg.person_category)
            split.humans.push_back(det);
        else
            split.objects.push_back(det);
    }
    return split;
}

// ---------------------------------------------------------------------------
// Triplet / ground-truth records

namespace {

std::string triplet_line(const TripletRecord& r, double stride) {
    const InteractionTriplet& t = r.triplet;
    const double hb[4] = {t.human.bbox.x_min * stride, t.human.bbox.y_min * stride,
                          t.human.bbox.x_max * stride, t.human.bbox.y_max * stride};
    std::string line = "{\"image_id\":" + std::to_string(r.image_id) +
                       ",\"action_id\":" + std::to_string(t.action_id) +
                       ",\"human_box\":" + fmt_box(hb);
    if (t.object) {
        const double ob[4] = {t.object->bbox.x_min * stride, t.object->bbox.y_min * stride,
                              t.object->bbox.x_max * stride, t.object->bbox.y_max * stride};
        line += ",\"object_box\":" + fmt_box(ob) +
                ",\"object_category\":" + std::to_string(t.object->category);
    }
    line += ",\"score\":" + fmt(t.score) + "}\n";
    return line;
}

TripletRecord triplet_from_json(const json& j, double inv_stride,
                                const std::vector<int>& no_object_classes,
                                const std::string& where) {
    TripletRecord r;
    try {
        r.image_id = j.at("image_id").get<std::int64_t>();
        r.triplet.action_id = j.at("action_id").get<int>();
        r.triplet.score = j.at("score").get<double>();
    } catch (const json::exception& e) {
        throw ValidationError(where + ": " + e.what());
    }
    r.triplet.human.bbox = box_from_json(j, "human_box", inv_stride);
    r.triplet.human.score = 1.0;
    const bool no_obj =
        std::find(no_object_classes.begin(), no_object_classes.end(), r.triplet.action_id) !=
        no_object_classes.end();
    if (j.contains("object_box")) {
        if (no_obj)
            throw ValidationError(where + ": no-object class " +
                                  std::to_string(r.triplet.action_id) +
                                  " must not carry an object box");
        ScoredDetection obj;
        obj.bbox = box_from_json(j, "object_box", inv_stride);
        obj.category = j.value("object_category", 0);
        obj.score = 1.0;
        r.triplet.object = obj;
    } else if (!no_obj) {
        throw ValidationError(where + ": class " + std::to_string(r.triplet.action_id) +
                              " requires an object box");
    }
    // Point and vector follow from the boxes.
    const geom::Point2 h = r.triplet.human.center();
    if (r.triplet.object) {
        const geom::Point2 o = r.triplet.object->center();
        r.triplet.point = geom::midpoint(h, o);
        r.triplet.vector = {std::abs(h.x - r.triplet.point.x), std::abs(h.y - r.triplet.point.y)};
    } else {
        r.triplet.point = h;
        r.triplet.vector = {};
    }
    return r;
}

}  // namespace

std::vector<TripletRecord> read_triplets(const std::string& path, const RunConfig& cfg,
                                         const std::vector<int>& no_object_classes) {
    std::vector<TripletRecord> out;
    const double inv_stride = 1.0 / cfg.stride;
    std::size_t lineno = 0;
    for (const std::string& line : read_lines(path)) {
        ++lineno;
        const std::string where = path + ":" + std::to_string(lineno);
        out.push_back(
            triplet_from_json(parse_line(line, path, lineno), inv_stride, no_object_classes, where));
    }
    return out;
}

void write_triplets(const std::vector<TripletRecord>& records, const std::string& path,
                    const RunConfig& cfg) {
    std::string buf;
    for (const TripletRecord& r : records) buf += triplet_line(r, cfg.stride);
    write_file(path, buf);
}

eval::GroundTruthSet read_ground_truth(const std::string& path, const RunConfig& cfg) {
    eval::GroundTruthSet gts;
    gts.no_object_classes = cfg.no_object_classes;
    gts.rare_cutoff = cfg.rare_cutoff;
    const double inv_stride = 1.0 / cfg.stride;
    std::size_t lineno = 0;
    for (const std::string& line : read_lines(path)) {
        ++lineno;
        const std::string where = path + ":" + std::to_string(lineno);
        const json j = parse_line(line, path, lineno);
        if (j.contains("meta")) {
            try {
                if (j.contains("class_counts"))
                    gts.class_counts = j["class_counts"].get<std::vector<std::int64_t>>();
                if (j.contains("rare_cutoff")) gts.rare_cutoff = j["rare_cutoff"].get<std::int64_t>();
                if (j.contains("known_object_images"))
                    for (const auto& [cls, ids] : j["known_object_images"].items())
                        gts.known_object_images[std::stoi(cls)] =
                            ids.get<std::set<std::int64_t>>();
            } catch (const json::exception& e) {
                throw ValidationError(where + ": " + e.what());
            }
            continue;
        }
        gts.triplets.push_back(triplet_from_json(j, inv_stride, cfg.no_object_classes, where));
    }
    return gts;
}

void write_ground_truth(const eval::GroundTruthSet& gts, const std::string& path,
                        const RunConfig& cfg) {
    json meta;
    meta["meta"] = 1;
    meta["class_counts"] = gts.class_counts;
    meta["rare_cutoff"] = gts.rare_cutoff;
    json known = json::object();
    for (const auto& [cls, ids] : gts.known_object_images) known[std::to_string(cls)] = ids;
    meta["known_object_images"] = known;
    std::string buf = meta.dump() + "\n";
    for (const TripletRecord& r : gts.triplets) buf += triplet_line(r, cfg.stride);
    write_file(path, buf);
}

// ---------------------------------------------------------------------------
// Candidate records (grid space)

std::vector<codec::InteractionCandidate> read_candidates(const std::string& path) {
    std::vector<codec::InteractionCandidate> out;
    std::size_t lineno = 0;
    for (const std::string& line : read_lines(path)) {
        ++lineno;
        const json j = parse_line(line, path, lineno);
        codec::InteractionCandidate c;
        try {
            c.class_id = j.at("class_id").get<int>();
            c.x = j.at("x").get<int>();
            c.y = j.at("y").get<int>();
            c.score = j.at("score").get<double>();
            c.vector.vx = j.at("vx").get<double>();
            c.vector.vy = j.at("vy").get<double>();
        } catch (const json::exception& e) {
            throw ValidationError(path + ":" + std::to_string(lineno) + ": " + e.what());
        }
        out.push_back(c);
    }
    return out;
}

void write_candidates(const std::vector<codec::InteractionCandidate>& cands,
                      const std::string& path) {
    std::string buf;
    for (const codec::InteractionCandidate& c : cands) {
        buf += "{\"class_id\":" + std::to_string(c.class_id) + ",\"x\":" + std::to_string(c.x) +
               ",\"y\":" + std::to_string(c.y) + ",\"score\":" + fmt(c.score) +
               ",\"vx\":" + fmt(c.vector.vx) + ",\"vy\":" + fmt(c.vector.vy) + "}\n";
    }
    write_file(path, buf);
}

}  // namespace hoipoint::io
