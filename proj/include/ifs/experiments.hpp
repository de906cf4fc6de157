#pragma once

#include <functional>
#include <string>
#include <vector>

#include "ifs/structure.hpp"

namespace ifs {

struct BirkhoffResult {
    double average = 0.0;
    double batch_means_sigma = 0.0;  // std error of the average from 32 batches
};

// Time average of phi along one random trajectory of length n starting
// at x (the starting point itself is not included in the average).
BirkhoffResult birkhoff_average(const IFSystem& sys, CirclePoint x,
                                const std::function<double(double)>& phi, long n, Stream& stream);

struct EPropertyTable {
    std::vector<double> deltas;
    std::vector<double> moduli;      // E(delta)
    std::vector<double> std_errors;  // 0 for the grid method
    std::string f_spec;
    int n_horizon = 0;
    int base_points = 0;
    std::string method;
};

enum class EPropertyMethod { Grid, MonteCarlo };

// Equicontinuity modulus of the dual iterates, truncated at N_horizon:
// E(delta) = max over base points x, y in {x - delta, x + delta} and
// 0 <= n <= N_horizon of |P^n f(y) - P^n f(x)| (dual action). The grid
// method iterates the grid operator; the Monte Carlo method couples x
// and y with common random words.
EPropertyTable eproperty_modulus(const IFSystem& sys, const GridFunction& f,
                                 const std::vector<double>& deltas, int n_horizon, int base_points,
                                 EPropertyMethod method, long mc_samples, Stream& stream,
                                 int threads = 1);

}  // namespace ifs
