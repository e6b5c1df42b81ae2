#include "cml/returns.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "cml/errors.hpp"
#include "cml/numeric.hpp"

namespace cml {

BoundPeriodLadder build_bound_ladder(const MapFamily& fam, const CriticalSet& cs, int c_index,
                                     int horizon, double beta) {
    OrbitTrace t = critical_orbit(fam, cs, c_index, horizon);
    if (t.horizon() < 1)
        throw CriticalHitError("bound ladder: critical orbit dies immediately");
    DistortionLadder lad = compute_ladder(fam, t, beta);

    BoundPeriodLadder b;
    b.c_index = c_index;
    b.c = cs.points[c_index];
    b.log_radius.resize(lad.horizon + 1, 0.0);
    double logL = std::log(fam.L);
    for (int p = 1; p <= lad.horizon; ++p)
        b.log_radius[p] = 0.5 * (lad.log_D(p) - logL);
    return b;
}

std::optional<int> assign_bound_period(const BoundPeriodLadder& ladder, double dist_to_c) {
    if (ladder.max_p() < 2) throw LadderExhaustedError("bound ladder has fewer than two rungs");
    if (!(dist_to_c > 0.0))
        throw LadderExhaustedError("return depth 0 is below every radius");
    double logd = std::log(dist_to_c);

    if (!le_slack(logd, ladder.log_radius[1])) return std::nullopt;
    if (le_slack(logd, ladder.log_radius[ladder.max_p()]))
        throw LadderExhaustedError("return depth " + std::to_string(dist_to_c) +
                                   " below deepest ladder radius");

    // radii decrease in p; find the largest p with logd <= log_radius[p]
    int lo = 1, hi = ladder.max_p();  // invariant: logd <= r[lo], logd > r[hi]
    while (hi - lo > 1) {
        int mid = (lo + hi) / 2;
        if (le_slack(logd, ladder.log_radius[mid]))
            lo = mid;
        else
            hi = mid;
    }
    return lo;
}

namespace {

int depth_index_of(double depth) {
    double d = std::max(depth, 1e-300);
    return static_cast<int>(std::floor(-std::log(d)));
}

}  // namespace

Decomposition decompose(const MapFamily& fam, const CriticalSet& cs, const OrbitTrace& trace,
                        const ConstantsProfile& profile, bool deep_mode) {
    Decomposition d;
    d.deep_mode = deep_mode;
    d.horizon = trace.horizon();

    double log_thr = std::log(deep_mode ? profile.delta : profile.delta0);
    int ladder_horizon = std::max(d.horizon, 256);
    std::vector<std::optional<BoundPeriodLadder>> ladders(cs.points.size());

    int i = 0;
    while (i <= d.horizon) {
        double depth = trace.dist[i];
        bool is_return = depth <= 0.0 || le_slack(std::log(depth), log_thr);
        if (!is_return) {
            ++i;
            continue;
        }
        ReturnEvent ev;
        ev.time = i;
        ev.bound_to = cs.nearest(trace.points[i]);
        ev.depth = depth;
        ev.depth_index = depth_index_of(depth);
        ev.kind = (depth <= 0.0 || le_slack(std::log(std::max(depth, 1e-300)), std::log(profile.delta)))
                      ? ReturnKind::Deep
                      : ReturnKind::Shallow;
        if (!ladders[ev.bound_to])
            ladders[ev.bound_to] =
                build_bound_ladder(fam, cs, ev.bound_to, ladder_horizon, profile.beta);
        std::optional<int> p = assign_bound_period(*ladders[ev.bound_to], std::max(depth, 1e-300));
        ev.bound_period = p.value_or(0);
        d.events.push_back(ev);
        i = ev.time + ev.bound_period + 1;
    }

    // alternating bound/free partition of [n_1, horizon]
    for (std::size_t k = 0; k < d.events.size(); ++k) {
        const ReturnEvent& ev = d.events[k];
        Segment bound{true, ev.time, std::min(ev.time + ev.bound_period, d.horizon)};
        d.segments.push_back(bound);
        int free_begin = bound.end + 1;
        int free_end = (k + 1 < d.events.size()) ? d.events[k + 1].time - 1 : d.horizon;
        if (free_begin <= free_end) d.segments.push_back(Segment{false, free_begin, free_end});
    }

    classify_essential(d);
    return d;
}

void classify_essential(Decomposition& d) {
    // prefix[nu] = sum of 2 log depth over returns <= nu; nu essential iff
    // prefix(nu) <= min over earlier returns i of (log depth_i + prefix(i))
    double prefix = 0.0;
    double run_min = INFINITY;
    for (ReturnEvent& ev : d.events) {
        double logd = std::log(std::max(ev.depth, 1e-300));
        prefix += 2.0 * logd;
        ev.essential = le_slack(prefix, run_min);
        run_min = std::min(run_min, logd + prefix);
    }
}

double return_depth_sum(const Decomposition& d, int k) {
    KahanSum s;
    for (const ReturnEvent& ev : d.events) {
        if (ev.time > k) break;
        s.add(-std::log(std::max(ev.depth, 1e-300)));
    }
    return s.value();
}

ParameterWindow build_window(const MapFamily& fam, const CriticalSet& cs, int c_index, int n,
                             const ConstantsProfile& profile) {
    OrbitTrace t = critical_orbit(fam, cs, c_index, n);
    if (t.horizon() < n)
        throw CriticalHitError("build_window: critical orbit dies before step " +
                               std::to_string(n));
    DistortionLadder lad = compute_ladder(fam, t, profile.beta);

    ParameterWindow w;
    w.center = fam.a;
    w.n = n;
    w.c_index = c_index;
    w.log_half_width = lad.log_D(n);
    w.half_width = std::exp(w.log_half_width);

    // 33 equispaced parameters across the raw window; adjacent lift
    // differences add up to the unwrapped arc length of the image
    const int samples = 33;
    double prev = 0.0;
    KahanSum arc;
    for (int j = 0; j < samples; ++j) {
        double s = w.half_width * (double(j) / (samples - 1) * 2.0 - 1.0);
        PerturbedOrbit po = perturb(fam, t, OffsetKind::Param, s, n);
        if (po.horizon() < n)
            throw CriticalHitError("build_window: window sample orbit hits a critical point");
        double lift = po.lift[n];
        if (j > 0) arc.add(std::abs(lift - prev));
        prev = lift;
    }
    w.image_length = arc.value();

    w.amended_half_width =
        (w.image_length <= 1.0 / 3.0) ? w.half_width : w.half_width / (9.0 * w.image_length);
    return w;
}

}  // namespace cml
