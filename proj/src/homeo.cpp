#include "ifs/homeo.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace ifs {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Golden-ratio and sqrt(2) fractional steps for low-discrepancy probes.
constexpr double kLowDisc1 = 0.6180339887498949;
constexpr double kLowDisc2 = 0.41421356237309515;
}  // namespace

Homeo Homeo::rotation(double angle) {
    Homeo h;
    double a = wrap01(angle);
    h.lift_ = RotationLift{a};
    h.disp_lo_ = a;
    h.disp_hi_ = a;
    return h;
}

Homeo Homeo::sine_perturbed(double a, double b) {
    if (!(std::abs(b) < 1.0))
        throw std::invalid_argument("sine_perturbed: |b| must be < 1 for a monotone lift");
    Homeo h;
    h.lift_ = SineLift{a, b};
    h.disp_lo_ = a - std::abs(b) / kTwoPi;
    h.disp_hi_ = a + std::abs(b) / kTwoPi;
    return h;
}

Homeo Homeo::piecewise_linear(const std::vector<std::pair<double, double>>& knots) {
    if (knots.size() < 2) throw std::invalid_argument("piecewise_linear: need at least two knots");
    PlLift pl;
    pl.t.reserve(knots.size());
    pl.v.reserve(knots.size());
    for (const auto& [t, v] : knots) {
        if (!pl.t.empty() && !(t > pl.t.back()))
            throw std::invalid_argument("piecewise_linear: knot abscissae must be strictly increasing");
        if (!pl.v.empty() && !(v > pl.v.back()))
            throw std::invalid_argument("piecewise_linear: knot ordinates must be strictly increasing");
        pl.t.push_back(t);
        pl.v.push_back(v);
    }
    if (std::abs(pl.t.front()) > 1e-12 || std::abs(pl.t.back() - 1.0) > 1e-12)
        throw std::invalid_argument("piecewise_linear: knots must span [0, 1]");
    if (std::abs(pl.v.back() - pl.v.front() - 1.0) > 1e-9)
        throw std::invalid_argument("piecewise_linear: F(1) must equal F(0) + 1");
    pl.t.front() = 0.0;
    pl.t.back() = 1.0;
    pl.v.back() = pl.v.front() + 1.0;

    Homeo h;
    double lo = pl.v[0] - pl.t[0], hi = lo;
    for (std::size_t j = 0; j < pl.t.size(); ++j) {
        lo = std::min(lo, pl.v[j] - pl.t[j]);
        hi = std::max(hi, pl.v[j] - pl.t[j]);
    }
    h.disp_lo_ = lo;
    h.disp_hi_ = hi;
    h.lift_ = std::move(pl);
    return h;
}

Homeo Homeo::identity() { return rotation(0.0); }

Homeo::Kind Homeo::kind() const {
    switch (lift_.index()) {
        case 0: return Kind::Rotation;
        case 1: return Kind::Sine;
        case 2: return Kind::PiecewiseLinear;
        default: return Kind::InverseOf;
    }
}

double Homeo::rotation_angle() const { return std::get<RotationLift>(lift_).angle; }

std::pair<double, double> Homeo::sine_params() const {
    const auto& s = std::get<SineLift>(lift_);
    return {s.a, s.b};
}

std::vector<std::pair<double, double>> Homeo::pl_knots() const {
    const auto& pl = std::get<PlLift>(lift_);
    std::vector<std::pair<double, double>> out;
    for (std::size_t j = 0; j < pl.t.size(); ++j) out.emplace_back(pl.t[j], pl.v[j]);
    return out;
}

const Homeo& Homeo::inverse_inner() const { return *std::get<InverseLift>(lift_).inner; }

namespace {

double pl_eval(const std::vector<double>& xs, const std::vector<double>& ys, double t) {
    // Reduce into the stored period [xs.front(), xs.front() + 1).
    double k = std::floor(t - xs.front());
    double th = t - k;
    if (th >= xs.back()) {  // round-off at the period edge
        th = xs.front();
        k += 1.0;
    }
    auto it = std::upper_bound(xs.begin(), xs.end(), th);
    std::size_t j = static_cast<std::size_t>(it - xs.begin());
    j = (j == 0) ? 0 : j - 1;
    if (j >= xs.size() - 1) j = xs.size() - 2;
    double frac = (th - xs[j]) / (xs[j + 1] - xs[j]);
    return ys[j] + frac * (ys[j + 1] - ys[j]) + k;
}

}  // namespace

double Homeo::lift(double t) const {
    switch (lift_.index()) {
        case 0:
            return t + std::get<RotationLift>(lift_).angle;
        case 1: {
            const auto& s = std::get<SineLift>(lift_);
            // Evaluate the periodic part on the reduced coordinate so the
            // degree-one identity holds exactly for large |t|.
            double frac = t - std::floor(t);
            return t + s.a + (s.b / kTwoPi) * std::sin(kTwoPi * frac);
        }
        case 2: {
            const auto& pl = std::get<PlLift>(lift_);
            return pl_eval(pl.t, pl.v, t);
        }
        default: {
            const auto& inv = std::get<InverseLift>(lift_);
            return inv.inner->lift_inverse(t);
        }
    }
}

double Homeo::lift_inverse(double u, double tol) const {
    switch (lift_.index()) {
        case 0:
            return u - std::get<RotationLift>(lift_).angle;
        case 2: {
            const auto& pl = std::get<PlLift>(lift_);
            return pl_eval(pl.v, pl.t, u);
        }
        case 3:
            return std::get<InverseLift>(lift_).inner->lift(u);
        default: {
            // Bisection on the lift; the displacement bounds bracket the root.
            double lo = u - disp_hi_ - 1e-9;
            double hi = u - disp_lo_ + 1e-9;
            for (int iter = 0; iter < 200 && hi - lo > tol; ++iter) {
                double mid = 0.5 * (lo + hi);
                if (lift(mid) < u)
                    lo = mid;
                else
                    hi = mid;
            }
            return 0.5 * (lo + hi);
        }
    }
}

Homeo Homeo::inverse() const {
    switch (lift_.index()) {
        case 0:
            return rotation(wrap01(-std::get<RotationLift>(lift_).angle));
        case 2: {
            const auto& pl = std::get<PlLift>(lift_);
            Homeo h;
            // Swapping the knot arrays gives the inverse lift directly;
            // the stored period may start anywhere.
            PlLift swapped{pl.v, pl.t};
            h.disp_lo_ = -disp_hi_;
            h.disp_hi_ = -disp_lo_;
            h.lift_ = std::move(swapped);
            return h;
        }
        case 3:
            return *std::get<InverseLift>(lift_).inner;
        default: {
            Homeo h;
            h.lift_ = InverseLift{std::make_shared<const Homeo>(*this)};
            h.disp_lo_ = -disp_hi_;
            h.disp_hi_ = -disp_lo_;
            return h;
        }
    }
}

std::string Homeo::describe() const {
    std::ostringstream os;
    switch (lift_.index()) {
        case 0: os << "rotation(" << std::get<RotationLift>(lift_).angle << ")"; break;
        case 1: {
            const auto& s = std::get<SineLift>(lift_);
            os << "sine(a=" << s.a << ", b=" << s.b << ")";
            break;
        }
        case 2: os << "pl(" << std::get<PlLift>(lift_).t.size() << " knots)"; break;
        default: os << "inverse(" << std::get<InverseLift>(lift_).inner->describe() << ")"; break;
    }
    return os.str();
}

CirclePoint apply(const Homeo& h, CirclePoint x) { return CirclePoint(h.lift(x.position)); }

CirclePoint apply_inverse(const Homeo& h, CirclePoint y, double tol) {
    double lift_tol = std::min(1e-13, tol / 4.0);
    return CirclePoint(h.lift_inverse(y.position, lift_tol));
}

Arc image_arc(const Homeo& h, const Arc& I) {
    if (I.length >= 1.0)
        throw std::invalid_argument("image_arc: full-circle arc maps onto the full circle");
    double a = h.lift(I.start.position);
    double b = h.lift(I.start.position + I.length);
    return Arc(CirclePoint(a), b - a);
}

CirclePoint compose_apply(const std::vector<Homeo>& maps, const Word& w, CirclePoint x,
                          ComposeOrder order) {
    if (w.empty()) throw std::invalid_argument("compose_apply: empty word");
    auto step = [&](int letter, CirclePoint p) {
        if (letter < 1 || letter > static_cast<int>(maps.size()))
            throw std::invalid_argument("compose_apply: letter out of range");
        return apply(maps[static_cast<std::size_t>(letter - 1)], p);
    };
    CirclePoint p = x;
    if (order == ComposeOrder::Forward) {
        for (int letter : w.letters) p = step(letter, p);
    } else {
        for (auto it = w.letters.rbegin(); it != w.letters.rend(); ++it) p = step(*it, p);
    }
    return p;
}

double rotation_number(const Homeo& h, long n_iter, CirclePoint x0) {
    if (n_iter < 1) throw std::invalid_argument("rotation_number: n_iter must be >= 1");
    if (h.is_rotation()) return h.rotation_angle();
    double t = x0.position;
    for (long i = 0; i < n_iter; ++i) t = h.lift(t);
    return (t - x0.position) / static_cast<double>(n_iter);
}

bool is_isometry(const Homeo& h, int n_probes, double tol) {
    if (n_probes < 2) throw std::invalid_argument("is_isometry: need at least two probes");
    for (int i = 0; i < n_probes; ++i) {
        double start = wrap01(i * kLowDisc1);
        double len = 0.05 + 0.9 * wrap01(i * kLowDisc2 + 0.25);
        Arc img = image_arc(h, Arc(CirclePoint(start), len));
        if (std::abs(img.length - len) > tol) return false;
    }
    return true;
}

std::vector<std::string> check_homeo(const Homeo& h) {
    std::vector<std::string> issues;
    constexpr int kGrid = 1024;
    double prev = h.lift(0.0);
    for (int i = 1; i <= kGrid; ++i) {
        double cur = h.lift(static_cast<double>(i) / kGrid);
        if (!(cur > prev)) {
            issues.push_back("lift not strictly increasing near t=" +
                             std::to_string(static_cast<double>(i) / kGrid));
            break;
        }
        prev = cur;
    }
    for (int i = 0; i < 32; ++i) {
        double t = wrap01(i * kLowDisc1) + 0.5 * (i % 3);
        if (std::abs(h.lift(t + 1.0) - h.lift(t) - 1.0) > 1e-12) {
            issues.push_back("lift not degree one near t=" + std::to_string(t));
            break;
        }
    }
    return issues;
}

}  // namespace ifs
