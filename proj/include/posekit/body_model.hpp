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

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "posekit/errors.hpp"
#include "posekit/geometry.hpp"
#include "posekit/graph.hpp"

namespace posekit {

/// The 14 conventional joints.
enum class RealPart : int {
    HeadTop = 0,
    HeadBottom,
    LeftShoulder,
    RightShoulder,
    LeftElbow,
    RightElbow,
    LeftHand,
    RightHand,
    LeftHip,
    RightHip,
    LeftKnee,
    RightKnee,
    LeftAnkle,
    RightAnkle,
};

inline constexpr int kRealPartCount = 14;

/// Merged part vocabulary: the two head joints stay single, each symmetric
/// left/right pair collapses into one coupled part.
enum class AbstractPart : int {
    HeadTop = 0,
    HeadBottom,
    Shoulder,
    Elbow,
    Hand,
    Hip,
    Knee,
    Ankle,
};

inline constexpr int kAbstractPartCount = 8;

enum class PartKind { Single, Coupled };

inline constexpr std::array<std::string_view, kRealPartCount> kRealPartNames = {
    "HeadTop",   "HeadBottom",  "LeftShoulder", "RightShoulder", "LeftElbow", "RightElbow", "LeftHand",
    "RightHand", "LeftHip",     "RightHip",     "LeftKnee",      "RightKnee", "LeftAnkle",  "RightAnkle",
};

inline constexpr std::array<std::string_view, kAbstractPartCount> kAbstractPartNames = {
    "HeadTop", "HeadBottom", "Shoulder", "Elbow", "Hand", "Hip", "Knee", "Ankle",
};

inline std::string_view to_string(RealPart p) {
    return kRealPartNames[static_cast<std::size_t>(p)];
}

inline std::string_view to_string(AbstractPart p) {
    return kAbstractPartNames[static_cast<std::size_t>(p)];
}

inline RealPart parse_real_part(std::string_view name) {
    for (int i = 0; i < kRealPartCount; ++i)
        if (kRealPartNames[static_cast<std::size_t>(i)] == name) return static_cast<RealPart>(i);
    throw ParseError("unknown body part name '" + std::string(name) + "'");
}

inline constexpr PartKind kind(AbstractPart p) {
    return (p == AbstractPart::HeadTop || p == AbstractPart::HeadBottom) ? PartKind::Single
                                                                         : PartKind::Coupled;
}

/// Total mapping from the 14 real parts onto the 8 abstract parts.
inline constexpr AbstractPart abstract_part_of(RealPart p) {
    switch (p) {
        case RealPart::HeadTop: return AbstractPart::HeadTop;
        case RealPart::HeadBottom: return AbstractPart::HeadBottom;
        case RealPart::LeftShoulder:
        case RealPart::RightShoulder: return AbstractPart::Shoulder;
        case RealPart::LeftElbow:
        case RealPart::RightElbow: return AbstractPart::Elbow;
        case RealPart::LeftHand:
        case RealPart::RightHand: return AbstractPart::Hand;
        case RealPart::LeftHip:
        case RealPart::RightHip: return AbstractPart::Hip;
        case RealPart::LeftKnee:
        case RealPart::RightKnee: return AbstractPart::Knee;
        case RealPart::LeftAnkle:
        case RealPart::RightAnkle: return AbstractPart::Ankle;
    }
    return AbstractPart::HeadTop; // unreachable
}

/// Mirror of a symmetric part; empty for the two head joints.
inline constexpr std::optional<RealPart> mirror_of(RealPart p) {
    switch (p) {
        case RealPart::HeadTop:
        case RealPart::HeadBottom: return std::nullopt;
        default: break;
    }
    const int v = static_cast<int>(p);
    return static_cast<RealPart>(v % 2 == 0 ? v + 1 : v - 1);
}

inline constexpr bool is_left(RealPart p) {
    const int v = static_cast<int>(p);
    return v >= 2 && v % 2 == 0;
}

/// Left real part of a coupled abstract part.
inline constexpr RealPart left_real(AbstractPart p) {
    switch (p) {
        case AbstractPart::Shoulder: return RealPart::LeftShoulder;
        case AbstractPart::Elbow: return RealPart::LeftElbow;
        case AbstractPart::Hand: return RealPart::LeftHand;
        case AbstractPart::Hip: return RealPart::LeftHip;
        case AbstractPart::Knee: return RealPart::LeftKnee;
        case AbstractPart::Ankle: return RealPart::LeftAnkle;
        case AbstractPart::HeadTop: return RealPart::HeadTop;
        case AbstractPart::HeadBottom: return RealPart::HeadBottom;
    }
    return RealPart::HeadTop; // unreachable
}

inline constexpr RealPart right_real(AbstractPart p) {
    const RealPart l = left_real(p);
    const auto m = mirror_of(l);
    return m ? *m : l;
}

/// Single real part backing a single abstract part.
inline constexpr RealPart single_real(AbstractPart p) { return left_real(p); }

/// One candidate location for one real body part in one frame, together
/// with the detector scores and feature payloads the weight formulas need.
/// flow_next is the flow-predicted location in frame+1; it is absent for
/// hypotheses in the last frame of a sequence.
struct PartHypothesis {
    int frame = 0;
    RealPart part = RealPart::HeadTop;
    Point2 location;
    double max_marginal = 0.0;            // detector confidence in [0,1]
    double foreground = 0.0;              // foreground score in [0,1]
    std::vector<double> appearance;       // non-negative, HOG-like
    std::vector<double> color_hist;       // non-negative, L1-normalized
    std::optional<Point2> flow_next;
};

/// An ordered (left, right) pair of symmetric-part hypotheses forming one
/// coupled-part state. left_index/right_index record which entries of the
/// per-frame side lists the pair was composed from (-1 when built by hand);
/// the tracklet builder uses them to reuse per-side temporal weights.
struct CoupledHypothesis {
    PartHypothesis left;
    PartHypothesis right;
    int left_index = -1;
    int right_index = -1;

    int frame() const { return left.frame; }
    AbstractPart part() const { return abstract_part_of(left.part); }
};

/// Fixed relational tree over the 8 abstract parts, rooted at HeadTop.
inline constexpr std::array<std::pair<AbstractPart, AbstractPart>, 7> kPoseTreeEdges = {{
    {AbstractPart::HeadTop, AbstractPart::HeadBottom},
    {AbstractPart::HeadBottom, AbstractPart::Shoulder},
    {AbstractPart::Shoulder, AbstractPart::Elbow},
    {AbstractPart::Elbow, AbstractPart::Hand},
    {AbstractPart::Shoulder, AbstractPart::Hip},
    {AbstractPart::Hip, AbstractPart::Knee},
    {AbstractPart::Knee, AbstractPart::Ankle},
}};

inline RelationalGraph pose_relational_tree() {
    RelationalGraph g;
    for (int i = 0; i < kAbstractPartCount; ++i) g.entities.push_back(i);
    for (const auto& [a, b] : kPoseTreeEdges)
        g.edges.emplace_back(static_cast<int>(a), static_cast<int>(b));
    g.root = static_cast<int>(AbstractPart::HeadTop);
    return g;
}

} // namespace posekit
