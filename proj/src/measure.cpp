#include "ifs/measure.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace ifs {

ParticleMeasure ParticleMeasure::dirac(double x) { return {{wrap01(x)}, {1.0}}; }

ParticleMeasure ParticleMeasure::uniform_lattice(long n) {
    ParticleMeasure mu;
    mu.positions.resize(static_cast<std::size_t>(n));
    mu.weights.assign(static_cast<std::size_t>(n), 1.0 / static_cast<double>(n));
    for (long j = 0; j < n; ++j)
        mu.positions[static_cast<std::size_t>(j)] = (static_cast<double>(j) + 0.5) / static_cast<double>(n);
    return mu;
}

std::vector<std::string> check_measure(const ParticleMeasure& mu) {
    std::vector<std::string> issues;
    if (mu.positions.empty()) issues.push_back("measure has no atoms");
    if (mu.positions.size() != mu.weights.size()) issues.push_back("position/weight count mismatch");
    double sum = 0.0;
    for (double w : mu.weights) {
        if (!(w > 0.0)) {
            issues.push_back("atom with non-positive weight");
            break;
        }
    }
    sum = std::accumulate(mu.weights.begin(), mu.weights.end(), 0.0);
    if (!mu.weights.empty() && std::abs(sum - 1.0) > 1e-9)
        issues.push_back("weights sum to " + std::to_string(sum) + ", expected 1");
    return issues;
}

double wasserstein_circle(const ParticleMeasure& mu, const ParticleMeasure& nu) {
    if (!check_measure(mu).empty() || !check_measure(nu).empty())
        throw std::invalid_argument("wasserstein_circle: inputs must be probability measures");
    // Identical atom lists have distance zero exactly; the sweep below
    // would only accumulate cancellation noise.
    if (mu.positions == nu.positions && mu.weights == nu.weights) return 0.0;

    const std::size_t m = mu.size() + nu.size();
    std::vector<std::pair<double, double>> events;  // (position, CDF jump of mu - nu)
    events.reserve(m);
    for (std::size_t i = 0; i < mu.size(); ++i)
        events.emplace_back(wrap01(mu.positions[i]), mu.weights[i]);
    for (std::size_t i = 0; i < nu.size(); ++i)
        events.emplace_back(wrap01(nu.positions[i]), -nu.weights[i]);
    std::sort(events.begin(), events.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });

    // Piecewise-constant CDF difference D on [pos_i, pos_{i+1}) with the
    // interval lengths as integration weights.
    std::vector<double> d(m), len(m);
    double run = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        run += events[i].second;
        d[i] = run;
        double next = (i + 1 < m) ? events[i + 1].first : events[0].first + 1.0;
        len[i] = next - events[i].first;
    }

    // Length-weighted median of D minimizes the shifted L1 integral.
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return d[a] < d[b]; });
    double acc = 0.0, t = d[order.back()];
    for (std::size_t idx : order) {
        acc += len[idx];
        if (acc >= 0.5) {
            t = d[idx];
            break;
        }
    }

    double total = 0.0;
    for (std::size_t i = 0; i < m; ++i) total += len[i] * std::abs(d[i] - t);
    return total;
}

GridFunction::GridFunction(std::vector<double> v) : values(std::move(v)) {
    if (values.size() < 2) throw std::invalid_argument("GridFunction: need at least two nodes");
}

double GridFunction::interp(double x) const {
    const std::size_t n = values.size();
    double u = wrap01(x) * static_cast<double>(n);
    std::size_t j = static_cast<std::size_t>(u);
    if (j >= n) j = n - 1;
    double frac = u - static_cast<double>(j);
    double v0 = values[j];
    double v1 = values[(j + 1) % n];
    return v0 + frac * (v1 - v0);
}

double GridFunction::max_abs() const {
    double m = 0.0;
    for (double v : values) m = std::max(m, std::abs(v));
    return m;
}

GridFunction GridFunction::sample(int n, const std::function<double(double)>& f) {
    std::vector<double> v(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j)
        v[static_cast<std::size_t>(j)] = f(static_cast<double>(j) / static_cast<double>(n));
    return GridFunction(std::move(v));
}

GridFunction GridFunction::constant(int n, double c) {
    return GridFunction(std::vector<double>(static_cast<std::size_t>(n), c));
}

}  // namespace ifs
