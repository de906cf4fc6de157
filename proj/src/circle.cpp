#include "ifs/circle.hpp"

#include <stdexcept>

namespace ifs {

Arc::Arc(CirclePoint s, double len) : start(s), length(len) {
    // Tolerate round-off from arithmetic on arc lengths, reject anything else.
    if (length < 0.0) {
        if (length < -1e-12) throw std::invalid_argument("Arc: negative length");
        length = 0.0;
    }
    if (length > 1.0) {
        if (length > 1.0 + 1e-12) throw std::invalid_argument("Arc: length exceeds full circle");
        length = 1.0;
    }
}

double dist(CirclePoint x, CirclePoint y) {
    double d = wrap01(x.position - y.position);
    return d <= 0.5 ? d : 1.0 - d;
}

bool circle_less(CirclePoint x, CirclePoint y) {
    double delta = wrap01(y.position - x.position);
    return delta > 0.0 && delta < 0.5;
}

bool ordered_chain(std::span<const CirclePoint> points) {
    if (points.size() < 2) throw std::invalid_argument("ordered_chain: need at least two points");
    for (std::size_t i = 0; i + 1 < points.size(); ++i) {
        if (!circle_less(points[i], points[i + 1])) return false;
    }
    return circle_less(points.front(), points.back());
}

bool ordered_chain(const std::vector<CirclePoint>& points) {
    return ordered_chain(std::span<const CirclePoint>(points.data(), points.size()));
}

Arc arc_between(CirclePoint a, CirclePoint b) {
    return Arc(a, wrap01(b.position - a.position));
}

bool arc_contains(const Arc& I, CirclePoint x) {
    return wrap01(x.position - I.start.position) <= I.length;
}

}  // namespace ifs
