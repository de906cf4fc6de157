#pragma once

#include <memory>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "ifs/circle.hpp"

namespace ifs {

// Composition order for words of generator indices. Forward applies the
// first letter first (new maps act on the outside, as along a
// trajectory); Backward applies the last letter first (new maps act on
// the inside, as in backward limit constructions).
enum class ComposeOrder { Forward, Backward };

// Finite word of generator indices, 1-based to match replay files.
struct Word {
    std::vector<int> letters;

    Word() = default;
    explicit Word(std::vector<int> l) : letters(std::move(l)) {}
    Word(std::initializer_list<int> l) : letters(l) {}

    std::size_t size() const { return letters.size(); }
    bool empty() const { return letters.empty(); }
    void append(int letter) { letters.push_back(letter); }
    void append_run(int letter, long count) {
        for (long i = 0; i < count; ++i) letters.push_back(letter);
    }
};

// An orientation preserving circle homeomorphism represented by a
// strictly increasing degree-one lift F (F(t + 1) = F(t) + 1).
//
// Three concrete families plus functional inverses:
//   rotation(angle)        F(t) = t + angle
//   sine_perturbed(a, b)   F(t) = t + a + b/(2 pi) * sin(2 pi t), |b| < 1
//   piecewise_linear(kts)  knots (t_j, F(t_j)) on [0, 1], F(1) = F(0) + 1
//   inverse_of(h)          F = (lift of h)^-1
class Homeo {
public:
    enum class Kind { Rotation, Sine, PiecewiseLinear, InverseOf };

    static Homeo rotation(double angle);
    static Homeo sine_perturbed(double a, double b);
    static Homeo piecewise_linear(const std::vector<std::pair<double, double>>& knots);
    static Homeo identity();

    Kind kind() const;
    bool is_rotation() const { return kind() == Kind::Rotation; }
    double rotation_angle() const;                       // Rotation only
    std::pair<double, double> sine_params() const;       // Sine only
    std::vector<std::pair<double, double>> pl_knots() const;  // PiecewiseLinear only
    const Homeo& inverse_inner() const;                  // InverseOf only

    // The lift, valid for any real t; exact for Rotation and
    // PiecewiseLinear, closed form for Sine, monotone bisection for
    // InverseOf (absolute accuracy ~1e-13 on the lift).
    double lift(double t) const;

    // Solve lift(x) = u. Closed form except for Sine, where a bisection
    // on the lift is used (always converges; strictly monotone).
    double lift_inverse(double u, double tol = 1e-13) const;

    // Functional inverse as a Homeo. Rotations and piecewise-linear
    // maps invert in closed form; sine maps get a bisection wrapper;
    // inverting an inverse unwraps it.
    Homeo inverse() const;

    std::string describe() const;

private:
    struct RotationLift {
        double angle;
    };
    struct SineLift {
        double a, b;
    };
    struct PlLift {
        std::vector<double> t;  // ascending, t.back() == t.front() + 1
        std::vector<double> v;  // ascending, v.back() == v.front() + 1
    };
    struct InverseLift {
        std::shared_ptr<const Homeo> inner;
    };

    Homeo() = default;

    std::variant<RotationLift, SineLift, PlLift, InverseLift> lift_;
    double disp_lo_ = 0.0;  // bounds on F(t) - t, used to bracket inversion
    double disp_hi_ = 0.0;
};

CirclePoint apply(const Homeo& h, CirclePoint x);

// Returns x with dist(apply(h, x), y) <= tol.
CirclePoint apply_inverse(const Homeo& h, CirclePoint y, double tol = 1e-12);

// Image of an arc of length < 1; the image runs from the image of the
// start with length F(start + length) - F(start). Throws for a
// full-circle input.
Arc image_arc(const Homeo& h, const Arc& I);

CirclePoint compose_apply(const std::vector<Homeo>& maps, const Word& w, CirclePoint x,
                          ComposeOrder order);

// (F^n(x0) - x0) / n; error vs the true rotation number is at most
// 1/n_iter. Exact (returns the angle) for rotations.
double rotation_number(const Homeo& h, long n_iter, CirclePoint x0);

// Deterministic low-discrepancy probe of arc starts and lengths; true
// iff no probed arc changes length by more than tol.
bool is_isometry(const Homeo& h, int n_probes, double tol);

// Sampled invariant checks (strict monotonicity of the lift, degree
// one). Empty result means no violation found.
std::vector<std::string> check_homeo(const Homeo& h);

}  // namespace ifs
