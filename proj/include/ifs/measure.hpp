#pragma once

#include <functional>
#include <string>
#include <vector>

#include "ifs/circle.hpp"

namespace ifs {

// Weighted atomic approximation of a Borel probability measure on the
// circle. Weights are strictly positive and sum to 1 (within 1e-9).
struct ParticleMeasure {
    std::vector<double> positions;  // in [0, 1)
    std::vector<double> weights;

    std::size_t size() const { return positions.size(); }

    static ParticleMeasure dirac(double x);
    static ParticleMeasure uniform_lattice(long n);  // atoms at (j + 1/2)/n
};

std::vector<std::string> check_measure(const ParticleMeasure& mu);

// Exact Wasserstein-1 distance with the circular ground metric:
// min over t of the total variation integral of (F_mu - F_nu - t),
// attained at a length-weighted median of the CDF difference.
// O(m log m) in the total atom count.
double wasserstein_circle(const ParticleMeasure& mu, const ParticleMeasure& nu);

// Continuous function represented by samples at j/N with circular
// linear interpolation between nodes.
struct GridFunction {
    std::vector<double> values;

    GridFunction() = default;
    explicit GridFunction(std::vector<double> v);

    int size() const { return static_cast<int>(values.size()); }
    double interp(double x) const;
    double max_abs() const;

    static GridFunction sample(int n, const std::function<double(double)>& f);
    static GridFunction constant(int n, double c);
};

}  // namespace ifs
