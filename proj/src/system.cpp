#include "ifs/system.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace ifs {

ValidationReport validate_system(const IFSystem& sys) {
    ValidationReport rep;
    if (sys.generators.empty()) rep.issues.push_back("system has no generators");
    if (sys.generators.size() != sys.probs.size())
        rep.issues.push_back("generator and probability counts differ");
    double sum = 0.0;
    for (std::size_t i = 0; i < sys.probs.size(); ++i) {
        if (!(sys.probs[i] > 0.0))
            rep.issues.push_back("probability " + std::to_string(i + 1) + " is not strictly positive");
        sum += sys.probs[i];
    }
    if (!sys.probs.empty() && std::abs(sum - 1.0) > 1e-12)
        rep.issues.push_back("probabilities sum to " + std::to_string(sum) + ", expected 1");
    for (std::size_t i = 0; i < sys.generators.size(); ++i) {
        for (const auto& issue : check_homeo(sys.generators[i]))
            rep.issues.push_back("generator " + std::to_string(i + 1) + ": " + issue);
        GeneratorDiagnostics d;
        d.isometry = is_isometry(sys.generators[i], 128, 1e-9);
        d.rotation_number_estimate = rotation_number(sys.generators[i], 4096, CirclePoint(0.17));
        rep.generators.push_back(d);
    }
    rep.ok = rep.issues.empty();
    return rep;
}

Word sample_word(const IFSystem& sys, Stream& stream, long n) {
    if (n < 1) throw std::invalid_argument("sample_word: n must be >= 1");
    std::vector<double> cum(sys.probs.size());
    std::partial_sum(sys.probs.begin(), sys.probs.end(), cum.begin());
    Word w;
    w.letters.reserve(static_cast<std::size_t>(n));
    for (long i = 0; i < n; ++i) {
        double u = stream.next_double() * cum.back();
        auto it = std::upper_bound(cum.begin(), cum.end(), u);
        int idx = static_cast<int>(it - cum.begin());
        if (idx >= static_cast<int>(cum.size())) idx = static_cast<int>(cum.size()) - 1;
        w.letters.push_back(idx + 1);
    }
    return w;
}

std::vector<CirclePoint> forward_orbit(const IFSystem& sys, CirclePoint x, const Word& w) {
    std::vector<CirclePoint> orbit;
    orbit.reserve(w.size() + 1);
    orbit.push_back(x);
    CirclePoint p = x;
    for (int letter : w.letters) {
        if (letter < 1 || letter > sys.size())
            throw std::invalid_argument("forward_orbit: letter out of range");
        p = apply(sys.gen(letter), p);
        orbit.push_back(p);
    }
    return orbit;
}

CirclePoint backward_point(const IFSystem& sys, const Word& w, CirclePoint x) {
    if (w.empty()) throw std::invalid_argument("backward_point: empty word");
    return compose_apply(sys.generators, w, x, ComposeOrder::Backward);
}

IFSystem inverse_system(const IFSystem& sys) {
    IFSystem out;
    out.probs = sys.probs;
    out.generators.reserve(sys.generators.size());
    for (const auto& g : sys.generators) out.generators.push_back(g.inverse());
    return out;
}

DenseOrbitResult dense_orbit_check(const Homeo& h, CirclePoint x0, double eps, long budget) {
    if (!(eps > 0.0)) throw std::invalid_argument("dense_orbit_check: eps must be positive");
    if (budget < 1) throw std::invalid_argument("dense_orbit_check: budget must be >= 1");
    long cells = static_cast<long>(std::ceil(1.0 / eps));
    std::vector<char> hit(static_cast<std::size_t>(cells), 0);
    long covered = 0;
    auto mark = [&](CirclePoint p) {
        long c = static_cast<long>(p.position * static_cast<double>(cells));
        if (c >= cells) c = cells - 1;
        if (!hit[static_cast<std::size_t>(c)]) {
            hit[static_cast<std::size_t>(c)] = 1;
            ++covered;
        }
    };
    CirclePoint p = x0;
    mark(p);
    for (long step = 1; step <= budget; ++step) {
        p = apply(h, p);
        mark(p);
        if (covered == cells) return {true, step};
    }
    return {covered == cells, budget};
}

}  // namespace ifs
