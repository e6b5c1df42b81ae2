#pragma once

#include <cmath>
#include <string>
#include <vector>

namespace cml {

// Wraps x into [0,1). For x a hair below 0 the subtraction x - floor(x)
// rounds to 1.0 exactly, hence the trailing guard.
inline double wrap01(double x) {
    double w = x - std::floor(x);
    return w >= 1.0 ? w - 1.0 : w;
}

// Distance on the circle R/Z, always in [0, 1/2].
inline double circle_distance(double x, double y) {
    double d = wrap01(x - y);
    return d <= 0.5 ? d : 1.0 - d;
}

// 1-periodic drive term Phi as a truncated Fourier series
//   Phi(t) = sum_k  cos_k * cos(2 pi k t) + sin_k * sin(2 pi k t).
// The default drive is the unit first harmonic sin(2 pi t).
//
// value_diff / deriv1_diff evaluate Phi(t+p) - Phi(t) through product
// identities; they stay exact for offsets p far below one ulp of t, which is
// what keeps paired-orbit lift differences meaningful at window widths
// ~1e-300.
class DriveFunction {
  public:
    static DriveFunction sine();
    static DriveFunction fourier(std::string name, std::vector<double> cos_coeffs,
                                 std::vector<double> sin_coeffs);

    double value(double theta) const;
    double deriv1(double theta) const;
    double deriv2(double theta) const;

    double value_diff(double theta, double p) const;   // Phi(theta+p) - Phi(theta)
    double deriv1_diff(double theta, double p) const;  // Phi'(theta+p) - Phi'(theta)

    double sup_deriv1() const;  // grid sup of |Phi'|
    double sup_deriv2() const;  // grid sup of |Phi''|

    // min over a grid of max(|Phi'|/sup|Phi'|, |Phi''|/sup|Phi''|).
    // Positive for Morse drives; a zero-ish margin means a degenerate
    // critical point within grid resolution.
    double morse_margin(int grid = 4096) const;

    const std::string& name() const { return name_; }
    const std::vector<double>& cos_coeffs() const { return cos_; }
    const std::vector<double>& sin_coeffs() const { return sin_; }

    bool operator==(const DriveFunction&) const = default;

  private:
    DriveFunction(std::string name, std::vector<double> c, std::vector<double> s);

    std::string name_;
    std::vector<double> cos_;  // harmonic k = index+1
    std::vector<double> sin_;
};

// One member of the family f_{a,L}(t) = t + a + L Phi(t) on R/Z.
// The derivative does not depend on a; eval_deriv is bit-identical across a.
struct MapFamily {
    DriveFunction phi;
    double a = 0.0;
    double L = 1.0;

    double eval(double theta) const { return wrap01(theta + a + L * phi.value(theta)); }
    // Lift increment without the mod: f(theta) - theta = a + L Phi(theta).
    double lift_increment(double theta) const { return a + L * phi.value(theta); }
    double deriv(double theta) const { return 1.0 + L * phi.deriv1(theta); }
    double deriv2(double theta) const { return L * phi.deriv2(theta); }

    // Derivative at theta+p evaluated through the cancellation-free
    // difference, valid for arbitrarily small p.
    double deriv_at_offset(double theta, double p) const {
        return 1.0 + L * (phi.deriv1(theta) + phi.deriv1_diff(theta, p));
    }
};

// Zeros of f' = 1 + L Phi', sorted, with the ambient L recorded.
struct CriticalSet {
    std::vector<double> points;
    double L = 0.0;

    // Distance from theta to the nearest critical point.
    double distance(double theta) const;
    // Index of the nearest critical point.
    int nearest(double theta) const;
    // Smallest circular gap between adjacent critical points.
    double min_gap() const;
};

// Locates all critical points by bracketing sign changes of f' on a grid of
// at least 1024 nodes per critical point of Phi, then bisecting to 1e-14.
// Throws NoCriticalPointsError when f' has no zero (|L Phi'| < 1) and
// Error when a located zero is degenerate (f'' vanishes there too).
CriticalSet find_critical_points(const DriveFunction& phi, double L);

inline double distance_to_critical(double theta, const CriticalSet& cs) {
    return cs.distance(theta);
}

}  // namespace cml
