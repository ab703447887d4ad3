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

namespace posekit {

/// 2D pixel coordinates. x grows rightward, y downward.
struct Point2 {
    double x = 0.0;
    double y = 0.0;

    friend Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
    friend Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
    friend Point2 operator*(double s, Point2 p) { return {s * p.x, s * p.y}; }
    friend bool operator==(Point2 a, Point2 b) { return a.x == b.x && a.y == b.y; }
};

inline double squared_norm(Point2 p) { return p.x * p.x + p.y * p.y; }
inline double norm(Point2 p) { return std::sqrt(squared_norm(p)); }
inline double distance(Point2 a, Point2 b) { return norm(a - b); }
inline double squared_distance(Point2 a, Point2 b) { return squared_norm(a - b); }

namespace detail {

inline double cross(Point2 o, Point2 a, Point2 b) {
    return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

inline bool on_segment(Point2 a, Point2 b, Point2 p) {
    return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) &&
           std::min(a.y, b.y) <= p.y && p.y <= std::max(a.y, b.y);
}

} // namespace detail

/// Whether the closed segments [a1,a2] and [b1,b2] share at least one point.
/// Touching endpoints and collinear overlap count as intersecting.
inline bool segments_intersect(Point2 a1, Point2 a2, Point2 b1, Point2 b2) {
    const double d1 = detail::cross(b1, b2, a1);
    const double d2 = detail::cross(b1, b2, a2);
    const double d3 = detail::cross(a1, a2, b1);
    const double d4 = detail::cross(a1, a2, b2);

    if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) &&
        ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0))) {
        return true;
    }
    if (d1 == 0 && detail::on_segment(b1, b2, a1)) return true;
    if (d2 == 0 && detail::on_segment(b1, b2, a2)) return true;
    if (d3 == 0 && detail::on_segment(a1, a2, b1)) return true;
    if (d4 == 0 && detail::on_segment(a1, a2, b2)) return true;
    return false;
}

} // namespace posekit
