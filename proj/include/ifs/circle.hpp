#pragma once

#include <cmath>
#include <span>
#include <vector>

namespace ifs {

// Reduce any real to the fundamental domain [0, 1).
inline double wrap01(double x) {
    double r = x - std::floor(x);
    return r < 1.0 ? r : 0.0;
}

// A point on the circle of circumference 1. Construction wraps the
// coordinate into [0, 1).
struct CirclePoint {
    double position = 0.0;

    CirclePoint() = default;
    CirclePoint(double p) : position(wrap01(p)) {}
};

// Positively oriented closed arc {start + t mod 1 : 0 <= t <= length}.
// length 1 denotes the full circle.
struct Arc {
    CirclePoint start;
    double length = 0.0;

    Arc() = default;
    Arc(CirclePoint s, double len);
};

// Normalized distance, always in [0, 1/2].
double dist(CirclePoint x, CirclePoint y);

// x < y in the circular sense: d(x, y) < 1/2 and the shorter arc from x
// to y runs in the positive orientation.
bool circle_less(CirclePoint x, CirclePoint y);

// True iff x_1 < x_2 < ... < x_M consecutively and x_1 < x_M, i.e. the
// chain sits inside a positively oriented arc shorter than half the
// circle. Throws std::invalid_argument for fewer than two points.
bool ordered_chain(std::span<const CirclePoint> points);
bool ordered_chain(const std::vector<CirclePoint>& points);

// The positively oriented arc from a to b (length (b - a) mod 1).
Arc arc_between(CirclePoint a, CirclePoint b);

// Closed-endpoint membership.
bool arc_contains(const Arc& I, CirclePoint x);

}  // namespace ifs
