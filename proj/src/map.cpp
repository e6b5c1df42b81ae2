#include "cml/map.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "cml/errors.hpp"

namespace cml {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kPi = std::numbers::pi;
}  // namespace

DriveFunction::DriveFunction(std::string name, std::vector<double> c, std::vector<double> s)
    : name_(std::move(name)), cos_(std::move(c)), sin_(std::move(s)) {}

DriveFunction DriveFunction::sine() { return DriveFunction("sine", {}, {1.0}); }

DriveFunction DriveFunction::fourier(std::string name, std::vector<double> cos_coeffs,
                                     std::vector<double> sin_coeffs) {
    if (cos_coeffs.empty() && sin_coeffs.empty())
        throw ValidationError("fourier drive needs at least one coefficient");
    return DriveFunction(std::move(name), std::move(cos_coeffs), std::move(sin_coeffs));
}

double DriveFunction::value(double theta) const {
    double v = 0.0;
    for (std::size_t k = 0; k < cos_.size(); ++k)
        if (cos_[k] != 0.0) v += cos_[k] * std::cos(kTwoPi * double(k + 1) * theta);
    for (std::size_t k = 0; k < sin_.size(); ++k)
        if (sin_[k] != 0.0) v += sin_[k] * std::sin(kTwoPi * double(k + 1) * theta);
    return v;
}

double DriveFunction::deriv1(double theta) const {
    double v = 0.0;
    for (std::size_t k = 0; k < cos_.size(); ++k)
        if (cos_[k] != 0.0) {
            double w = kTwoPi * double(k + 1);
            v -= cos_[k] * w * std::sin(w * theta);
        }
    for (std::size_t k = 0; k < sin_.size(); ++k)
        if (sin_[k] != 0.0) {
            double w = kTwoPi * double(k + 1);
            v += sin_[k] * w * std::cos(w * theta);
        }
    return v;
}

double DriveFunction::deriv2(double theta) const {
    double v = 0.0;
    for (std::size_t k = 0; k < cos_.size(); ++k)
        if (cos_[k] != 0.0) {
            double w = kTwoPi * double(k + 1);
            v -= cos_[k] * w * w * std::cos(w * theta);
        }
    for (std::size_t k = 0; k < sin_.size(); ++k)
        if (sin_[k] != 0.0) {
            double w = kTwoPi * double(k + 1);
            v -= sin_[k] * w * w * std::sin(w * theta);
        }
    return v;
}

// sin X - sin Y = 2 cos((X+Y)/2) sin((X-Y)/2), and the cosine analogue.
// With X = w(t+p), Y = w t the half-difference w p / 2 enters a sin() directly,
// so no significance is lost however small p is.
double DriveFunction::value_diff(double theta, double p) const {
    double v = 0.0;
    for (std::size_t k = 0; k < cos_.size(); ++k)
        if (cos_[k] != 0.0) {
            double hk = kPi * double(k + 1);
            v -= cos_[k] * 2.0 * std::sin(hk * (2.0 * theta + p)) * std::sin(hk * p);
        }
    for (std::size_t k = 0; k < sin_.size(); ++k)
        if (sin_[k] != 0.0) {
            double hk = kPi * double(k + 1);
            v += sin_[k] * 2.0 * std::cos(hk * (2.0 * theta + p)) * std::sin(hk * p);
        }
    return v;
}

double DriveFunction::deriv1_diff(double theta, double p) const {
    double v = 0.0;
    for (std::size_t k = 0; k < cos_.size(); ++k)
        if (cos_[k] != 0.0) {
            double w = kTwoPi * double(k + 1);
            double hk = kPi * double(k + 1);
            v -= cos_[k] * w * 2.0 * std::cos(hk * (2.0 * theta + p)) * std::sin(hk * p);
        }
    for (std::size_t k = 0; k < sin_.size(); ++k)
        if (sin_[k] != 0.0) {
            double w = kTwoPi * double(k + 1);
            double hk = kPi * double(k + 1);
            v -= sin_[k] * w * 2.0 * std::sin(hk * (2.0 * theta + p)) * std::sin(hk * p);
        }
    return v;
}

double DriveFunction::sup_deriv1() const {
    double s = 0.0;
    for (int i = 0; i < 8192; ++i) s = std::max(s, std::abs(deriv1(i / 8192.0)));
    return s;
}

double DriveFunction::sup_deriv2() const {
    double s = 0.0;
    for (int i = 0; i < 8192; ++i) s = std::max(s, std::abs(deriv2(i / 8192.0)));
    return s;
}

double DriveFunction::morse_margin(int grid) const {
    double s1 = sup_deriv1(), s2 = sup_deriv2();
    if (s1 == 0.0 || s2 == 0.0) return 0.0;
    double margin = 1.0;
    for (int i = 0; i < grid; ++i) {
        double t = double(i) / grid;
        double m = std::max(std::abs(deriv1(t)) / s1, std::abs(deriv2(t)) / s2);
        margin = std::min(margin, m);
    }
    return margin;
}

double CriticalSet::distance(double theta) const {
    double best = 0.5;
    for (double c : points) best = std::min(best, circle_distance(theta, c));
    return best;
}

int CriticalSet::nearest(double theta) const {
    int best = 0;
    double bd = 1.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
        double d = circle_distance(theta, points[i]);
        if (d < bd) {
            bd = d;
            best = static_cast<int>(i);
        }
    }
    return best;
}

double CriticalSet::min_gap() const {
    if (points.size() < 2) return 1.0;
    double gap = 1.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
        double next = points[(i + 1) % points.size()];
        gap = std::min(gap, circle_distance(points[i], next));
    }
    return gap;
}

namespace {

// Counts sign changes of Phi' on a coarse grid; this is the number of
// critical points of the drive itself and sets the bracketing density.
int count_drive_critical_points(const DriveFunction& phi) {
    const int n = 8192;
    int changes = 0;
    double prev = phi.deriv1(0.0);
    for (int i = 1; i <= n; ++i) {
        double cur = phi.deriv1(double(i % n) / n);
        if ((prev < 0.0 && cur >= 0.0) || (prev >= 0.0 && cur < 0.0)) ++changes;
        prev = cur;
    }
    return std::max(changes, 1);
}

double bisect_root(const MapFamily& f, double lo, double hi, double flo) {
    // invariant: sign(f'(lo)) == sign(flo) != sign(f'(hi))
    for (int it = 0; it < 200 && hi - lo > 1e-14; ++it) {
        double mid = 0.5 * (lo + hi);
        double fm = f.deriv(mid);
        if (fm == 0.0) return mid;
        if ((fm < 0.0) == (flo < 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace

CriticalSet find_critical_points(const DriveFunction& phi, double L) {
    MapFamily f{phi, 0.0, L};
    const int nodes = 1024 * count_drive_critical_points(phi);

    std::vector<double> roots;
    double prev_t = 0.0;
    double prev_v = f.deriv(0.0);
    for (int i = 1; i <= nodes; ++i) {
        double t = double(i) / nodes;  // node `nodes` is theta=1, same point as 0
        double v = f.deriv(t);
        if (prev_v == 0.0) {
            roots.push_back(prev_t);
        } else if ((prev_v < 0.0) != (v < 0.0)) {
            roots.push_back(bisect_root(f, prev_t, t, prev_v));
        }
        prev_t = t;
        prev_v = v;
    }
    if (roots.empty())
        throw NoCriticalPointsError("map has no critical points at L=" + std::to_string(L));

    for (double& r : roots) r = wrap01(r);
    std::sort(roots.begin(), roots.end());
    // collapse duplicates from a root sitting on a grid node (incl. wraparound)
    std::vector<double> unique;
    for (double r : roots) {
        if (unique.empty() || (r - unique.back() > 1e-12 &&
                               circle_distance(r, unique.front()) > 1e-12))
            unique.push_back(r);
    }

    double sup2 = std::max(phi.sup_deriv2(), 1e-300);
    for (double c : unique) {
        if (std::abs(phi.deriv2(c)) <= 1e-8 * sup2)
            throw Error("degenerate critical point at theta=" + std::to_string(c));
    }
    return CriticalSet{std::move(unique), L};
}

}  // namespace cml
