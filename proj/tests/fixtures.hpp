#pragma once

#include "ifs/system.hpp"

// Shared demo systems exercised across the test suites.
namespace fixtures {

inline constexpr double kGolden = 0.6180339887498949;    // (sqrt(5) - 1) / 2
inline constexpr double kSqrt2m1 = 0.41421356237309515;  // sqrt(2) - 1
inline constexpr double kSqrt3m1 = 0.7320508075688772;   // sqrt(3) - 1

// Two rotations whose difference is irrational.
inline ifs::IFSystem two_rotations() {
    return {{ifs::Homeo::rotation(kSqrt2m1), ifs::Homeo::rotation(kSqrt3m1)}, {0.5, 0.5}};
}

// Golden rotation plus a sine-perturbed map: contractive, no symmetry.
inline ifs::IFSystem demo_contractive() {
    return {{ifs::Homeo::rotation(kGolden), ifs::Homeo::sine_perturbed(0.0, 0.5)}, {0.5, 0.5}};
}

// Piecewise-linear map with a half-periodic lift: F(t + 1/2) = F(t) + 1/2,
// so it commutes with the rotation by 1/2 exactly.
inline ifs::Homeo pl_half_periodic() {
    return ifs::Homeo::piecewise_linear(
        {{0.0, 0.0}, {0.25, 0.15}, {0.5, 0.5}, {0.75, 0.65}, {1.0, 1.0}});
}

inline ifs::IFSystem half_symmetric() {
    return {{ifs::Homeo::rotation(kGolden), pl_half_periodic()}, {0.5, 0.5}};
}

// Identity-shaped piecewise-linear map paired with a rotation: an
// equicontinuous system with a non-rotation generator representation.
inline ifs::IFSystem pl_identity_system() {
    return {{ifs::Homeo::piecewise_linear({{0.0, 0.0}, {0.5, 0.5}, {1.0, 1.0}}),
             ifs::Homeo::rotation(kGolden)},
            {0.5, 0.5}};
}

}  // namespace fixtures
