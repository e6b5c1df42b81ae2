#pragma once

#include <vector>

#include "cml/map.hpp"

namespace cml {

// Forward orbit of a start point together with the running derivative
// product in (log, sign) form. For a critical orbit the start point is the
// critical value f(c), so points[i] is the i-th iterate of that value.
//
// log_deriv[i] = log|(f^i)'(points[0])|, log_deriv[0] = 0.
// When |f'| drops below 1e-300 at some step the trace is truncated there and
// flagged; the flagged index is the last valid point.
struct OrbitTrace {
    double a = 0.0;
    double L = 0.0;
    double origin = 0.0;       // start point x_0
    int origin_critical = -1;  // index into the CriticalSet, -1 for generic starts

    std::vector<double> points;
    std::vector<double> log_deriv;
    std::vector<signed char> sign;
    std::vector<double> dist;  // distance_to_critical(points[i])

    bool critical_hit = false;
    int hit_index = -1;

    int horizon() const { return static_cast<int>(points.size()) - 1; }
};

OrbitTrace iterate_orbit(const MapFamily& fam, const CriticalSet& cs, double theta0, int n);

// Orbit of the critical value of cs.points[c_index].
OrbitTrace critical_orbit(const MapFamily& fam, const CriticalSet& cs, int c_index, int n);

// log|(f^(j-i))'(points[i])| via the product telescope. Requires i <= j <= horizon.
double deriv_along(const OrbitTrace& trace, int i, int j);

// Distortion ladder along a trace:
//   d_i = |(f^i)'x0|^(-1) |f'(x_i)|,   D_n = L^(-beta) / sum_{i<n} d_i^(-1).
// Kept in log space; the reciprocal sum uses a max-rescaled compensated
// accumulation so horizons where Lambda_n overflows a double still work.
// Throws DegenerateLadderError when some d_i is exactly zero.
struct DistortionLadder {
    double beta = 0.0;
    double L = 0.0;
    std::vector<double> log_d;        // i = 0..h-1
    std::vector<double> log_sum_inv;  // n = 1..h at [n]; [0] unused
    int horizon = 0;

    double log_D(int n) const;  // n in [1, horizon]
    double D(int n) const { return std::exp(log_D(n)); }
    double d(int i) const { return std::exp(log_d[i]); }
};

DistortionLadder compute_ladder(const MapFamily& fam, const OrbitTrace& trace, double beta);

// --- paired perturbed orbits -------------------------------------------------
//
// A perturbed orbit is simulated as the exact lift difference P_i against the
// base trace, with Phi differences evaluated cancellation-free. This keeps
// offsets far below one ulp of the positions meaningful (parameter windows
// can be ~1e-300 wide). The perturbed position at step i is points[i] + lift[i]
// on the lift, i.e. wrap01(points[i] + lift[i]) on the circle.

enum class OffsetKind {
    Phase,  // perturb the start point:   x_0 -> x_0 + s
    Param,  // perturb the parameter:     a   -> a + s (start point follows)
};

struct PerturbedOrbit {
    double s = 0.0;
    std::vector<double> lift;       // P_i, i = 0..n
    std::vector<double> log_deriv;  // log|(f^i)'| along the perturbed orbit
    std::vector<signed char> sign;
    bool critical_hit = false;
    int hit_index = -1;

    int horizon() const { return static_cast<int>(lift.size()) - 1; }
};

PerturbedOrbit perturb(const MapFamily& fam, const OrbitTrace& base, OffsetKind kind,
                       double s, int n);

// --- transversality ----------------------------------------------------------

// ratio = (d c_n / d a) / (f^n)'(c_0), computed two independent ways:
//  (1) the raw forward recursion c'_{i+1} = 1 + f'(c_i) c'_i (renormalized by
//      powers of 2 only when it would overflow), divided by the product;
//  (2) the closed-form sum 1 + sum_i 1/(f^i)'(c_0).
// Disagreement beyond 1e-10 relative to the term-sum scale throws
// OracleMismatchError: that is an implementation bug by construction.
struct TransversalityResult {
    double ratio = 0.0;            // adopted value (closed form)
    double ratio_recursion = 0.0;
    double ratio_closed = 0.0;
    double log_abs_da = 0.0;       // log|d c_n / d a|
    int sign_da = 0;
};

TransversalityResult transversality_ratio(const MapFamily& fam, const OrbitTrace& trace, int n);

// Central finite difference of the ratio at stencil half-width h, with a
// well-posedness gate: the accumulated first-order perturbation of the
// difference quotient, sum_i |P_i| |f''(x_i)| / |f'(x_i)|, must stay below
// 1e-6 for a fixed-h FD to estimate the derivative at all. Stencils that fail
// the gate are reported not-well-posed rather than compared.
struct FdCheck {
    double fd_ratio = 0.0;
    bool well_posed = false;
    double gate = 0.0;
};

FdCheck fd_transversality(const MapFamily& fam, const OrbitTrace& trace, int n, double h);

}  // namespace cml
