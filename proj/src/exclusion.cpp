#include "cml/exclusion.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include "cml/errors.hpp"
#include "cml/numeric.hpp"
#include "cml/parallel.hpp"
#include "cml/returns.hpp"
#include "cml/rng.hpp"

namespace cml {

const char* reason_name(ExclusionReason r) {
    switch (r) {
        case ExclusionReason::None: return "none";
        case ExclusionReason::SigmaDistance: return "sigma_distance";
        case ExclusionReason::ReturnBudget: return "return_budget";
        case ExclusionReason::BlockExpansion: return "block_expansion";
        case ExclusionReason::ColletEckmann: return "collet_eckmann";
        case ExclusionReason::CriticalHit: return "critical_hit";
        case ExclusionReason::LadderExhausted: return "ladder_exhausted";
    }
    return "?";
}

nlohmann::json SweepRecord::to_json() const {
    nlohmann::json j{{"mode", mode},
                     {"L", L},
                     {"n_max", n_max},
                     {"seed", seed},
                     {"samples", samples},
                     {"profile", profile.to_json()},
                     {"survivor_fraction", survivor_fraction},
                     {"survivor_uncertainty", survivor_uncertainty}};
    if (!x_fail_fraction.empty()) {
        j["x_fail_fraction"] = x_fail_fraction;
        j["y_fail_fraction"] = y_fail_fraction;
    }
    j["paper_bound"] = std::isnan(paper_bound) ? nlohmann::json() : nlohmann::json(paper_bound);
    return j;
}

double paper_bound_at(const ConstantsProfile& p, int n) {
    if (p.sigma >= 1.0) return NAN;
    double base = 1.0 - std::cbrt(p.sigma);
    if (n <= p.N) return std::pow(base, n + 1);
    return (1.0 - std::pow(p.L, -p.alpha * p.N / 10.0)) * std::pow(base, p.N);
}

namespace {

void merge_candidate(Verdict& v, int step, ExclusionReason reason, int c_index) {
    if (step < 0) return;
    if (v.fail_step < 0 || step < v.fail_step) {
        v.fail_step = step;
        v.reason = reason;
        v.c_index = c_index;
    }
}

}  // namespace

Verdict evaluate_parameter(const DriveFunction& phi, const CriticalSet& cs,
                           const ConstantsProfile& profile, double a, int n_max, bool strict) {
    MapFamily fam{phi, wrap01(a), profile.L};
    Verdict v;

    std::vector<OrbitTrace> traces;
    traces.reserve(cs.points.size());
    for (int k = 0; k < static_cast<int>(cs.points.size()); ++k)
        traces.push_back(critical_orbit(fam, cs, k, n_max));

    // phase 1: distance floor through step min(N, n_max); a dead orbit is an
    // exclusion at the step it died
    for (int k = 0; k < static_cast<int>(traces.size()); ++k) {
        const OrbitTrace& t = traces[k];
        double log_sigma = std::log(profile.sigma);
        int limit = std::min({profile.N, n_max, t.horizon()});
        for (int i = 0; i <= limit; ++i) {
            double logd = t.dist[i] > 0.0 ? std::log(t.dist[i]) : -INFINITY;
            if (!ge_slack(logd, log_sigma)) {
                merge_candidate(v, i, ExclusionReason::SigmaDistance, k);
                break;
            }
        }
        if (t.critical_hit && t.horizon() < n_max)
            merge_candidate(v, t.hit_index, ExclusionReason::CriticalHit, k);
    }

    // diagnostics (and strict-mode exclusions): first failing step of the
    // expansion conditions; as induction assumptions they bind from step N on
    for (int k = 0; k < static_cast<int>(traces.size()); ++k) {
        int fx = first_fail_X(traces[k], profile);
        int fy = first_fail_Y(traces[k], profile);
        if (fx >= 0 && (v.first_x_fail < 0 || fx < v.first_x_fail)) v.first_x_fail = fx;
        if (fy >= 0 && (v.first_y_fail < 0 || fy < v.first_y_fail)) v.first_y_fail = fy;
        if (strict) {
            if (fx >= 0)
                merge_candidate(v, std::max(fx, profile.N), ExclusionReason::BlockExpansion, k);
            if (fy >= 0)
                merge_candidate(v, std::max(fy, profile.N), ExclusionReason::ColletEckmann, k);
        }
    }

    // phase 2 only matters for phase-1 survivors: any parameter excluded by
    // the distance floor is out before any return budget can bind
    bool phase1_alive = v.fail_step < 0 || v.fail_step > profile.N;
    if (phase1_alive && n_max > profile.N) {
        for (int k = 0; k < static_cast<int>(traces.size()); ++k) {
            if (traces[k].horizon() < 1) continue;
            try {
                Decomposition d = decompose(fam, cs, traces[k], profile, /*deep=*/true);
                int fw = first_fail_W(d, profile);
                if (fw >= 0) merge_candidate(v, fw, ExclusionReason::ReturnBudget, k);
            } catch (const LadderExhaustedError&) {
                merge_candidate(v, profile.N + 1, ExclusionReason::LadderExhausted, k);
            }
        }
    }

    if (v.fail_step >= 0 && v.fail_step > n_max) {
        v.fail_step = -1;
        v.reason = ExclusionReason::None;
        v.c_index = -1;
    }
    return v;
}

namespace {

std::vector<double> fractions_from_outcomes(const std::vector<SampleOutcome>& outcomes,
                                            int n_max) {
    std::vector<std::size_t> alive(n_max + 1, 0);
    for (const SampleOutcome& s : outcomes)
        for (int n = 0; n <= n_max; ++n)
            if (s.verdict.alive_at(n)) ++alive[n];
    std::vector<double> f(n_max + 1);
    for (int n = 0; n <= n_max; ++n)
        f[n] = outcomes.empty() ? 0.0 : double(alive[n]) / double(outcomes.size());
    return f;
}

}  // namespace

McResult run_exclusion_mc(const DriveFunction& phi, double L, const ConstantsProfile& profile,
                          int n_max, std::size_t samples, std::uint64_t seed, bool strict) {
    if (samples == 0) throw ValidationError("run_exclusion_mc: samples must be positive");
    CriticalSet cs = find_critical_points(phi, L);

    McResult res;
    res.outcomes.resize(samples);
    parallel_for(samples, [&](std::size_t i) {
        double a = u01(mix64(seed, i));
        res.outcomes[i] = SampleOutcome{a, evaluate_parameter(phi, cs, profile, a, n_max, strict)};
    });

    SweepRecord& rec = res.record;
    rec.mode = strict ? "mc-strict" : "mc";
    rec.L = L;
    rec.n_max = n_max;
    rec.seed = seed;
    rec.samples = samples;
    rec.profile = profile;
    rec.survivor_fraction = fractions_from_outcomes(res.outcomes, n_max);
    rec.survivor_uncertainty.resize(n_max + 1);
    for (int n = 0; n <= n_max; ++n) {
        double p = rec.survivor_fraction[n];
        rec.survivor_uncertainty[n] = std::sqrt(p * (1.0 - p) / double(samples));
    }
    rec.x_fail_fraction.assign(n_max + 1, 0.0);
    rec.y_fail_fraction.assign(n_max + 1, 0.0);
    for (const SampleOutcome& s : res.outcomes) {
        if (s.verdict.first_x_fail >= 0)
            for (int n = s.verdict.first_x_fail; n <= n_max; ++n) rec.x_fail_fraction[n] += 1.0;
        if (s.verdict.first_y_fail >= 0)
            for (int n = s.verdict.first_y_fail; n <= n_max; ++n) rec.y_fail_fraction[n] += 1.0;
    }
    for (int n = 0; n <= n_max; ++n) {
        rec.x_fail_fraction[n] /= double(samples);
        rec.y_fail_fraction[n] /= double(samples);
    }
    rec.paper_bound = paper_bound_at(profile, n_max);
    return res;
}

namespace {

struct EndpointEval {
    Verdict verdict;
    std::vector<std::vector<double>> points;  // per critical orbit
};

std::shared_ptr<EndpointEval> eval_endpoint(const DriveFunction& phi, const CriticalSet& cs,
                                            const ConstantsProfile& profile, double a, int n_max,
                                            bool strict) {
    auto e = std::make_shared<EndpointEval>();
    e->verdict = evaluate_parameter(phi, cs, profile, a, n_max, strict);
    MapFamily fam{phi, wrap01(a), profile.L};
    for (int k = 0; k < static_cast<int>(cs.points.size()); ++k)
        e->points.push_back(critical_orbit(fam, cs, k, n_max).points);
    return e;
}

bool orbits_separate(const EndpointEval& lo, const EndpointEval& hi, double delta0) {
    for (std::size_t k = 0; k < lo.points.size(); ++k) {
        std::size_t steps = std::min(lo.points[k].size(), hi.points[k].size());
        for (std::size_t i = 0; i < steps; ++i)
            if (circle_distance(lo.points[k][i], hi.points[k][i]) > delta0) return true;
    }
    return false;
}

}  // namespace

BisectResult run_exclusion_bisect(const DriveFunction& phi, double L,
                                  const ConstantsProfile& profile, int n_max, double min_width,
                                  bool strict) {
    if (!(min_width > 0.0)) throw ValidationError("run_exclusion_bisect: min_width must be > 0");
    CriticalSet cs = find_critical_points(phi, L);

    struct Frame {
        double lo, hi;
        int depth;
        std::shared_ptr<EndpointEval> lo_e, hi_e;
    };

    BisectResult res;
    std::vector<Frame> stack;
    stack.push_back(Frame{0.0, 1.0, 0, eval_endpoint(phi, cs, profile, 0.0, n_max, strict),
                          eval_endpoint(phi, cs, profile, 1.0, n_max, strict)});

    while (!stack.empty()) {
        Frame f = std::move(stack.back());
        stack.pop_back();
        double mid = 0.5 * (f.lo + f.hi);
        auto rep = eval_endpoint(phi, cs, profile, mid, n_max, strict);

        bool disagree = !(f.lo_e->verdict == f.hi_e->verdict) ||
                        !(rep->verdict == f.lo_e->verdict);
        bool separated = disagree ? false : orbits_separate(*f.lo_e, *f.hi_e, profile.delta0);

        if (!disagree && !separated) {
            res.cells.push_back(ParameterCell{f.lo, f.hi, rep->verdict, f.depth, false});
        } else if (0.5 * (f.hi - f.lo) >= min_width) {
            // push right first so the left child pops first: cells come out
            // ordered by lo, which keeps emitted files canonical
            stack.push_back(Frame{mid, f.hi, f.depth + 1, rep, f.hi_e});
            stack.push_back(Frame{f.lo, mid, f.depth + 1, f.lo_e, rep});
        } else {
            res.cells.push_back(ParameterCell{f.lo, f.hi, rep->verdict, f.depth, true});
        }
    }

    SweepRecord& rec = res.record;
    rec.mode = strict ? "bisect-strict" : "bisect";
    rec.L = L;
    rec.n_max = n_max;
    rec.seed = 0;
    rec.samples = res.cells.size();
    rec.profile = profile;
    rec.survivor_fraction.assign(n_max + 1, 0.0);
    rec.survivor_uncertainty.assign(n_max + 1, 0.0);
    for (const ParameterCell& c : res.cells) {
        double len = c.hi - c.lo;
        for (int n = 0; n <= n_max; ++n) {
            if (c.unresolved) {
                rec.survivor_fraction[n] += 0.5 * len;
                rec.survivor_uncertainty[n] += 0.5 * len;
            } else if (c.verdict.alive_at(n)) {
                rec.survivor_fraction[n] += len;
            }
        }
    }
    rec.paper_bound = paper_bound_at(profile, n_max);
    return res;
}

ConstantsProfile ProfileRule::make(const DriveFunction& phi, double L) const {
    if (paper) return build_profile(phi, L, beta, alpha, N, ProfileKind::PaperAsymptotic);
    if (fixed) return build_profile(phi, L, beta, alpha, N, ProfileKind::Empirical, fixed);
    ProfileOverrides o;
    o.sigma = std::min(0.24, sigma_coeff * std::pow(L, sigma_exp));
    o.delta0 = o.sigma / delta0_div;
    o.delta = o.delta0 / delta_div;
    o.lambda = (0.5 - beta / 4.0) / 9.0;
    return build_profile(phi, L, beta, alpha, N, ProfileKind::Empirical, o);
}

std::vector<McResult> sweep_L(const DriveFunction& phi, const std::vector<double>& L_list,
                              const ProfileRule& rule, int n_max, std::size_t samples,
                              std::uint64_t seed) {
    std::vector<McResult> out;
    out.reserve(L_list.size());
    for (std::size_t i = 0; i < L_list.size(); ++i) {
        ConstantsProfile p = rule.make(phi, L_list[i]);
        out.push_back(run_exclusion_mc(phi, L_list[i], p, n_max, samples, mix64(seed, i)));
    }
    return out;
}

}  // namespace cml
