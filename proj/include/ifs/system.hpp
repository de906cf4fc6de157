#pragma once

#include <string>
#include <vector>

#include "ifs/homeo.hpp"
#include "ifs/rng.hpp"

namespace ifs {

// A finite generator list with strictly positive choice probabilities
// summing to one. Immutable in practice; share freely across workers.
struct IFSystem {
    std::vector<Homeo> generators;
    std::vector<double> probs;

    int size() const { return static_cast<int>(generators.size()); }
    const Homeo& gen(int letter_1based) const {
        return generators[static_cast<std::size_t>(letter_1based - 1)];
    }
};

struct GeneratorDiagnostics {
    bool isometry = false;
    double rotation_number_estimate = 0.0;
};

struct ValidationReport {
    bool ok = false;
    std::vector<std::string> issues;
    std::vector<GeneratorDiagnostics> generators;
};

ValidationReport validate_system(const IFSystem& sys);

// n i.i.d. letters with the system's marginal probabilities;
// deterministic given the stream state.
Word sample_word(const IFSystem& sys, Stream& stream, long n);

// x, g_{w1}(x), g_{w2}(g_{w1}(x)), ...; |w| + 1 entries.
std::vector<CirclePoint> forward_orbit(const IFSystem& sys, CirclePoint x, const Word& w);

// g_{w1}(g_{w2}( ... g_{wn}(x))): the last letter acts first.
CirclePoint backward_point(const IFSystem& sys, const Word& w, CirclePoint x);

// Same probabilities over the functional inverses of the generators.
IFSystem inverse_system(const IFSystem& sys);

struct DenseOrbitResult {
    bool net_achieved = false;
    long steps_used = 0;
};

// Finite proxy for orbit density: iterate h from x0 for at most budget
// steps and report whether the visited points hit every cell of an
// eps-grid. A positive answer certifies an eps-net; a negative answer
// only means "not within budget".
DenseOrbitResult dense_orbit_check(const Homeo& h, CirclePoint x0, double eps, long budget);

}  // namespace ifs
