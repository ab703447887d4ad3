// Copyright 2026 The posekit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "posekit/body_model.hpp"
#include "posekit/errors.hpp"
#include "posekit/geometry.hpp"

namespace posekit {

/// Isotropic Gaussian deformation kernel for one relational edge: peak
/// weight omega at relative offset mean, falling off with scale.
struct EdgeDeform {
    Point2 mean;
    double scale = 30.0;
    double omega = 1.0;
};

using PartEdge = std::pair<AbstractPart, AbstractPart>;

/// Parameters of every weight formula. sigma and theta are in pixels;
/// deformation kernels are keyed by the pose-tree edge they score.
struct ScoringParams {
    double alpha = 0.5;    // detection-score mix of max-marginal vs foreground
    double sigma = 20.0;   // temporal affinity bandwidth, pixels
    double theta = 20.0;   // symmetric-part overlap penalty bandwidth, pixels
    double chi_eps = 1e-10;
    std::map<PartEdge, EdgeDeform> deform;

    void validate() const {
        if (!(alpha >= 0.0 && alpha <= 1.0)) throw ConfigError("alpha must lie in [0,1]");
        if (!(sigma > 0.0)) throw ConfigError("sigma must be positive");
        if (!(theta > 0.0)) throw ConfigError("theta must be positive");
        if (!(chi_eps > 0.0)) throw ConfigError("chi_eps must be positive");
        for (const auto& [edge, d] : deform) {
            if (!(d.scale > 0.0))
                throw ConfigError("deformation scale must be positive for edge " +
                                  std::string(to_string(edge.first)) + "-" +
                                  std::string(to_string(edge.second)));
            if (!(d.omega >= 0.0))
                throw ConfigError("deformation omega must be non-negative for edge " +
                                  std::string(to_string(edge.first)) + "-" +
                                  std::string(to_string(edge.second)));
        }
    }
};

/// Fused detection score: alpha * max_marginal + (1 - alpha) * foreground.
inline double detection_score(const PartHypothesis& h, const ScoringParams& params) {
    return params.alpha * h.max_marginal + (1.0 - params.alpha) * h.foreground;
}

/// Chi-square distance sum((a-b)^2 / (a+b+eps)) over paired bins.
/// Bins where both masses and eps are zero contribute nothing.
inline double chi_square(std::span<const double> a, std::span<const double> b, double eps) {
    if (a.size() != b.size())
        throw DataError("chi_square length mismatch: " + std::to_string(a.size()) + " vs " +
                        std::to_string(b.size()));
    double total = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double denom = a[i] + b[i] + eps;
        if (denom <= 0.0) continue;
        const double d = a[i] - b[i];
        total += d * d / denom;
    }
    return total;
}

/// Temporal affinity of two hypotheses in consecutive frames:
/// exp(-(chi2(appearance) * |flow-predicted - actual|^2) / sigma^2).
inline double single_binary(const PartHypothesis& h, const PartHypothesis& next,
                            const ScoringParams& params) {
    if (next.frame != h.frame + 1)
        throw DataError("single_binary requires consecutive frames, got " +
                        std::to_string(h.frame) + " and " + std::to_string(next.frame));
    if (!h.flow_next)
        throw DataError("hypothesis in frame " + std::to_string(h.frame) +
                        " has no flow prediction");
    const double chi = chi_square(h.appearance, next.appearance, params.chi_eps);
    const double residual = squared_distance(*h.flow_next, next.location);
    return std::exp(-(chi * residual) / (params.sigma * params.sigma));
}

/// Coupled-part unary weight: summed detection scores times color-histogram
/// similarity, damped by an inverse sigmoid of the pair distance so that
/// overlapping symmetric parts score at most half of the separated limit.
inline double coupled_unary(const CoupledHypothesis& r, const ScoringParams& params) {
    const double det = detection_score(r.left, params) + detection_score(r.right, params);
    if (r.left.color_hist.size() != r.right.color_hist.size())
        throw DataError("color histogram length mismatch in coupled hypothesis");
    const double similarity = std::inner_product(r.left.color_hist.begin(), r.left.color_hist.end(),
                                                 r.right.color_hist.begin(), 0.0);
    const double dist = distance(r.left.location, r.right.location);
    return det * similarity / (1.0 + std::exp(-dist / params.theta));
}

/// Coupled-part temporal weight: side-wise sum of single-part affinities.
inline double coupled_binary(const CoupledHypothesis& a, const CoupledHypothesis& b,
                             const ScoringParams& params) {
    return single_binary(a.left, b.left, params) + single_binary(a.right, b.right, params);
}

/// Relative-location score omega * exp(-|(p - q) - mean|^2 / (2 scale^2))
/// for the configured relational edge. The edge orientation fixes which
/// point plays p.
inline double relative_location(Point2 p, Point2 q, PartEdge edge, const ScoringParams& params) {
    auto it = params.deform.find(edge);
    if (it == params.deform.end())
        throw ConfigError("no deformation parameters configured for edge " +
                          std::string(to_string(edge.first)) + "-" +
                          std::string(to_string(edge.second)));
    const EdgeDeform& d = it->second;
    const double off = squared_norm((p - q) - d.mean);
    return d.omega * std::exp(-off / (2.0 * d.scale * d.scale));
}

/// Composes coupled-part states as the cross product of the left and right
/// hypothesis lists, ordered by descending coupled unary weight (stable on
/// ties) and truncated to cap pairs. Coincident pairs are kept; the overlap
/// sigmoid already penalizes them.
inline std::vector<CoupledHypothesis> compose_coupled(const std::vector<PartHypothesis>& left_hyps,
                                                      const std::vector<PartHypothesis>& right_hyps,
                                                      std::size_t cap,
                                                      const ScoringParams& params) {
    if (cap == 0) throw ArgumentError("compose_coupled cap must be >= 1");
    if (left_hyps.empty() || right_hyps.empty())
        throw DataError("compose_coupled requires non-empty hypothesis lists");

    const RealPart lp = left_hyps.front().part;
    const RealPart rp = right_hyps.front().part;
    const int frame = left_hyps.front().frame;
    const auto mirror = mirror_of(lp);
    if (!mirror || *mirror != rp)
        throw DataError("parts " + std::string(to_string(lp)) + " and " + std::string(to_string(rp)) +
                        " are not a symmetric pair");
    for (const auto& h : left_hyps)
        if (h.part != lp || h.frame != frame)
            throw DataError("left hypothesis list mixes parts or frames");
    for (const auto& h : right_hyps)
        if (h.part != rp || h.frame != frame)
            throw DataError("right hypothesis list mixes parts or frames");

    std::vector<CoupledHypothesis> pairs;
    pairs.reserve(left_hyps.size() * right_hyps.size());
    for (std::size_t i = 0; i < left_hyps.size(); ++i)
        for (std::size_t j = 0; j < right_hyps.size(); ++j)
            pairs.push_back(CoupledHypothesis{left_hyps[i], right_hyps[j], static_cast<int>(i),
                                              static_cast<int>(j)});

    std::vector<double> score(pairs.size());
    for (std::size_t i = 0; i < pairs.size(); ++i) score[i] = coupled_unary(pairs[i], params);
    std::vector<std::size_t> by_score(pairs.size());
    for (std::size_t i = 0; i < by_score.size(); ++i) by_score[i] = i;
    std::stable_sort(by_score.begin(), by_score.end(),
                     [&](std::size_t a, std::size_t b) { return score[a] > score[b]; });

    const std::size_t keep = std::min(cap, pairs.size());
    std::vector<CoupledHypothesis> out;
    out.reserve(keep);
    for (std::size_t i = 0; i < keep; ++i) out.push_back(std::move(pairs[by_score[i]]));
    return out;
}

} // namespace posekit
