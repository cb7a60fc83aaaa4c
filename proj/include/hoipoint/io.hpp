// Copyright 2026 The hoipoint Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hoipoint/codec.hpp"
#include "hoipoint/errors.hpp"
#include "hoipoint/evaluator.hpp"
#include "hoipoint/grouping.hpp"
#include "hoipoint/types.hpp"

namespace hoipoint::io {

// ---------------------------------------------------------------------------
// Binary tensor container ("IPNT"): magic, u16 version=1, u8 dtype
// (0 = f32), u8 rank, rank x u32 dims, then the little-endian row-major
// payload with the slowest-varying dimension first and no padding.

struct Tensor {
    std::vector<std::uint32_t> dims;
    std::vector<float> data;  // size = product(dims)
};

Tensor read_tensor(const std::string& path);
void write_tensor(const Tensor& t, const std::string& path);

Tensor to_tensor(const codec::ClassHeatmap& hm);
Tensor to_tensor(const codec::VectorField& vf);
Tensor to_tensor(const codec::SupervisionMask& mask);
codec::ClassHeatmap heatmap_from_tensor(const Tensor& t);
codec::VectorField vector_field_from_tensor(const Tensor& t);
codec::SupervisionMask mask_from_tensor(const Tensor& t);

// ---------------------------------------------------------------------------
// Run configuration (JSON file; CLI flags override individual fields).

struct RunConfig {
    int stride = 4;
    double sigma = 2.0;
    int topk = 100;
    int num_actions = 1;
    int grid_height = 64;
    int grid_width = 64;
    int person_category = 1;
    int num_object_categories = 91;
    double h_tau = 0.4;
    double o_tau = 0.1;
    double a_tau = 0.0;
    double d_tau = 2.0;
    double angle_min = 2.617993877991494;  // 5*pi/6
    double ratio_max = 1.5;
    double lambda_v = 0.1;
    double t_low = 0.01;   // dynamic-threshold floor for rare classes
    double t_high = 0.05;  // and for non-rare classes
    std::int64_t rare_cutoff = 0;  // 0 disables dynamic thresholds
    std::string mode = "full";
    std::vector<int> no_object_classes;
    std::uint64_t seed = 0;
    int threads = 0;  // 0 = library default

    grouping::GroupingConfig grouping(const std::vector<std::int64_t>& class_counts = {}) const;
    void validate() const;
};

grouping::Mode parse_mode(const std::string& name);
std::string mode_name(grouping::Mode mode);

RunConfig read_config(const std::string& path);
std::string config_json(const RunConfig& cfg);

// ---------------------------------------------------------------------------
// Line-delimited UTF-8 records. Field order is fixed and floats are
// serialized with 9 significant digits, so rewrites are byte-identical.

struct DetectionRecord {
    std::int64_t image_id = 0;
    double bbox[4] = {0, 0, 0, 0};  // image space, x1 y1 x2 y2
    int category = 0;
    double score = 0.0;
};

std::vector<DetectionRecord> read_detections(const std::string& path);
void write_detections(const std::vector<DetectionRecord>& dets, const std::string& path);

struct DetectionSplit {
    std::vector<ScoredDetection> humans;   // grid units
    std::vector<ScoredDetection> objects;  // grid units
    std::int64_t dropped = 0;              // malformed records skipped
};

// Stride conversion plus person/object split for one image's records.
DetectionSplit ingest_detections(const std::vector<DetectionRecord>& records,
                                 const RunConfig& cfg);

// Triplet records: image_id, action_id, human box (+score), optional
// object box (+category, score), final score. Geometry is image-space in
// files; `stride` converts on read/write.
std::vector<TripletRecord> read_triplets(const std::string& path, const RunConfig& cfg,
                                         const std::vector<int>& no_object_classes);
void write_triplets(const std::vector<TripletRecord>& records, const std::string& path,
                    const RunConfig& cfg);

// Ground truth file: triplet lines, optionally preceded by one meta line
// carrying class_counts, rare_cutoff and known_object_images.
eval::GroundTruthSet read_ground_truth(const std::string& path, const RunConfig& cfg);
void write_ground_truth(const eval::GroundTruthSet& gts, const std::string& path,
                        const RunConfig& cfg);

// Candidate records are always grid-space (they live on the heatmap).
std::vector<codec::InteractionCandidate> read_candidates(const std::string& path);
void write_candidates(const std::vector<codec::InteractionCandidate>& cands,
                      const std::string& path);

}  // namespace hoipoint::io
