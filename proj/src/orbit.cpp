#include "cml/orbit.hpp"

#include <cmath>
#include <string>

#include "cml/errors.hpp"
#include "cml/numeric.hpp"

namespace cml {

namespace {
constexpr double kHitThreshold = 1e-300;
}

OrbitTrace iterate_orbit(const MapFamily& fam, const CriticalSet& cs, double theta0, int n) {
    if (n < 0) throw ValidationError("iterate_orbit: n must be >= 0");
    OrbitTrace t;
    t.a = fam.a;
    t.L = fam.L;
    t.origin = wrap01(theta0);

    t.points.reserve(n + 1);
    t.log_deriv.reserve(n + 1);
    t.sign.reserve(n + 1);
    t.dist.reserve(n + 1);

    double x = t.origin;
    double ld = 0.0;
    signed char sg = 1;
    t.points.push_back(x);
    t.log_deriv.push_back(0.0);
    t.sign.push_back(1);
    t.dist.push_back(cs.distance(x));

    for (int i = 0; i < n; ++i) {
        double fp = fam.deriv(x);
        if (std::abs(fp) < kHitThreshold) {
            t.critical_hit = true;
            t.hit_index = i;
            break;
        }
        ld += std::log(std::abs(fp));
        if (fp < 0.0) sg = -sg;
        x = fam.eval(x);
        t.points.push_back(x);
        t.log_deriv.push_back(ld);
        t.sign.push_back(sg);
        t.dist.push_back(cs.distance(x));
    }
    return t;
}

OrbitTrace critical_orbit(const MapFamily& fam, const CriticalSet& cs, int c_index, int n) {
    if (c_index < 0 || c_index >= static_cast<int>(cs.points.size()))
        throw ValidationError("critical_orbit: c_index out of range");
    OrbitTrace t = iterate_orbit(fam, cs, fam.eval(cs.points[c_index]), n);
    t.origin_critical = c_index;
    return t;
}

double deriv_along(const OrbitTrace& trace, int i, int j) {
    if (i < 0 || j < i || j > trace.horizon())
        throw ValidationError("deriv_along: need 0 <= i <= j <= horizon");
    return trace.log_deriv[j] - trace.log_deriv[i];
}

double DistortionLadder::log_D(int n) const {
    if (n < 1 || n > horizon) throw ValidationError("log_D: n out of [1, horizon]");
    return -beta * std::log(L) - log_sum_inv[n];
}

DistortionLadder compute_ladder(const MapFamily& fam, const OrbitTrace& trace, double beta) {
    int h = trace.horizon();
    if (h < 1) throw ValidationError("compute_ladder: trace horizon must be >= 1");

    DistortionLadder lad;
    lad.beta = beta;
    lad.L = fam.L;
    lad.horizon = h;
    lad.log_d.resize(h);
    lad.log_sum_inv.assign(h + 1, 0.0);

    // running sum of d_i^(-1) held as exp(M) * S with S Kahan-compensated;
    // M tracks the largest term so S stays in [1, i+1] territory
    double M = 0.0;
    KahanSum S;
    for (int i = 0; i < h; ++i) {
        double fp = fam.deriv(trace.points[i]);
        if (fp == 0.0)
            throw DegenerateLadderError("distortion summand is zero at step " + std::to_string(i));
        double log_inv = trace.log_deriv[i] - std::log(std::abs(fp));
        lad.log_d[i] = -log_inv;
        if (i == 0) {
            M = log_inv;
            S.add(1.0);
        } else if (log_inv > M) {
            S.scale(std::exp(M - log_inv));
            M = log_inv;
            S.add(1.0);
        } else {
            S.add(std::exp(log_inv - M));
        }
        lad.log_sum_inv[i + 1] = M + std::log(S.value());
    }
    return lad;
}

PerturbedOrbit perturb(const MapFamily& fam, const OrbitTrace& base, OffsetKind kind,
                       double s, int n) {
    if (n < 0 || n > base.horizon())
        throw ValidationError("perturb: n must lie in [0, base horizon]");

    PerturbedOrbit p;
    p.s = s;
    p.lift.reserve(n + 1);
    p.log_deriv.reserve(n + 1);
    p.sign.reserve(n + 1);

    double P = s;
    double ld = 0.0;
    signed char sg = 1;
    p.lift.push_back(P);
    p.log_deriv.push_back(0.0);
    p.sign.push_back(1);

    for (int i = 0; i < n; ++i) {
        double x = base.points[i];
        double fp = fam.deriv_at_offset(x, P);
        if (std::abs(fp) < kHitThreshold) {
            p.critical_hit = true;
            p.hit_index = i;
            break;
        }
        ld += std::log(std::abs(fp));
        if (fp < 0.0) sg = -sg;
        P += fam.L * fam.phi.value_diff(x, P) + (kind == OffsetKind::Param ? s : 0.0);
        p.lift.push_back(P);
        p.log_deriv.push_back(ld);
        p.sign.push_back(sg);
    }
    return p;
}

TransversalityResult transversality_ratio(const MapFamily& fam, const OrbitTrace& trace, int n) {
    if (n < 0 || n > trace.horizon())
        throw ValidationError("transversality_ratio: n must lie in [0, horizon]");

    // route 1: raw recursion, renormalized by 2^512 only to dodge overflow,
    // which leaves the arithmetic identical to plain doubles in normal range
    double m = 1.0;
    long e2 = 0;
    for (int i = 0; i < n; ++i) {
        double fp = fam.deriv(trace.points[i]);
        m = fp * m + std::ldexp(1.0, static_cast<int>(-std::min<long>(e2, 1200)));
        while (std::abs(m) >= 0x1p512) {
            m = std::ldexp(m, -512);
            e2 += 512;
        }
        while (m != 0.0 && std::abs(m) < 0x1p-512 && e2 > 0) {
            m = std::ldexp(m, 512);
            e2 -= 512;
        }
    }
    double log_lambda = trace.log_deriv[n];
    int sign_lambda = trace.sign[n];
    double r1 = m * std::exp(static_cast<double>(e2) * std::log(2.0) - log_lambda) *
                static_cast<double>(sign_lambda);

    // route 2: closed-form reciprocal sum; also track the absolute-term scale
    // that bounds the roundoff of both routes
    KahanSum sum, scale;
    sum.add(1.0);
    scale.add(1.0);
    for (int i = 1; i <= n; ++i) {
        double term = std::exp(-trace.log_deriv[i]);
        sum.add(trace.sign[i] > 0 ? term : -term);
        scale.add(term);
    }
    double r2 = sum.value();

    if (std::abs(r1 - r2) > 1e-10 * scale.value())
        throw OracleMismatchError("transversality routes disagree: recursion=" +
                                  std::to_string(r1) + " closed=" + std::to_string(r2));

    TransversalityResult res;
    res.ratio = r2;
    res.ratio_recursion = r1;
    res.ratio_closed = r2;
    res.log_abs_da = log_lambda + std::log(std::abs(r2));
    res.sign_da = (r2 == 0.0) ? 0 : (r2 > 0.0 ? sign_lambda : -sign_lambda);
    return res;
}

FdCheck fd_transversality(const MapFamily& fam, const OrbitTrace& trace, int n, double h) {
    FdCheck out;
    if (n < 0 || n > trace.horizon() || h <= 0.0)
        throw ValidationError("fd_transversality: bad n or h");

    PerturbedOrbit up = perturb(fam, trace, OffsetKind::Param, h, n);
    PerturbedOrbit dn = perturb(fam, trace, OffsetKind::Param, -h, n);
    if (up.horizon() < n || dn.horizon() < n) return out;  // stencil orbit died

    double gate = 0.0;
    for (int i = 0; i < n; ++i) {
        double x = trace.points[i];
        double fp = std::abs(fam.deriv(x));
        double fpp = std::abs(fam.deriv2(x));
        double sep = std::max(std::abs(up.lift[i]), std::abs(dn.lift[i]));
        gate += sep * (fp > 0.0 ? fpp / fp : INFINITY);
    }
    out.gate = gate;

    double log_lambda = trace.log_deriv[n];
    if (!(gate <= 1e-6) || log_lambda > 700.0) return out;

    out.well_posed = true;
    out.fd_ratio = (up.lift[n] - dn.lift[n]) / (2.0 * h) * std::exp(-log_lambda) *
                   static_cast<double>(trace.sign[n]);
    return out;
}

}  // namespace cml
