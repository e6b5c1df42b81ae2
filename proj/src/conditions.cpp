#include "cml/conditions.hpp"

#include <cmath>

#include "cml/errors.hpp"
#include "cml/numeric.hpp"

namespace cml {

const char* condition_name(ConditionKind k) {
    switch (k) {
        case ConditionKind::SigmaDistance: return "sigma_distance";
        case ConditionKind::BlockExpansion: return "block_expansion";
        case ConditionKind::ColletEckmann: return "collet_eckmann";
        case ConditionKind::ReturnBudget: return "return_budget";
    }
    return "?";
}

nlohmann::json ConditionReport::to_json() const {
    nlohmann::json j{{"condition", condition_name(kind)},
                     {"c_index", c_index},
                     {"horizon", horizon},
                     {"holds", holds}};
    if (!holds)
        j["first_failure"] = {{"i", first_failure.i},
                              {"j", first_failure.j},
                              {"lhs", first_failure.lhs},
                              {"rhs", first_failure.rhs}};
    return j;
}

namespace {

void require_horizon(int have, int need, const char* who) {
    if (need < 0 || need > have) throw ValidationError(std::string(who) + ": horizon too short");
}

double safe_log(double x) { return x > 0.0 ? std::log(x) : -INFINITY; }

}  // namespace

ConditionReport check_mis(const OrbitTrace& trace, const ConstantsProfile& p, int n) {
    require_horizon(trace.horizon(), n, "check_mis");
    ConditionReport r{ConditionKind::SigmaDistance, trace.origin_critical, n, true, {}};
    double log_sigma = std::log(p.sigma);
    for (int i = 0; i <= n; ++i) {
        double logd = safe_log(trace.dist[i]);
        if (!ge_slack(logd, log_sigma)) {
            r.holds = false;
            r.first_failure = {i, -1, logd, log_sigma};
            break;
        }
    }
    return r;
}

ConditionReport check_X(const OrbitTrace& trace, const ConstantsProfile& p, int n) {
    require_horizon(trace.horizon(), n, "check_X");
    ConditionReport r{ConditionKind::BlockExpansion, trace.origin_critical, n, true, {}};
    double logL = std::log(p.L);
    double log_sigma = std::log(p.sigma);

    // lhs(i,j) = logLambda_j - logLambda_i >= logL + min(log sigma, -alpha i logL);
    // a running max over i of (logLambda_i + threshold_i) makes this O(n)
    double run_max = -INFINITY;
    int run_arg = -1;
    for (int j = 1; j <= n; ++j) {
        int i = j - 1;
        double thr_i = logL + std::min(log_sigma, -p.alpha * i * logL);
        double g = trace.log_deriv[i] + thr_i;
        if (g > run_max) {
            run_max = g;
            run_arg = i;
        }
        if (!ge_slack(trace.log_deriv[j], run_max)) {
            r.holds = false;
            r.first_failure = {run_arg, j, trace.log_deriv[j] - trace.log_deriv[run_arg],
                               run_max - trace.log_deriv[run_arg]};
            break;
        }
    }
    return r;
}

ConditionReport check_Y(const OrbitTrace& trace, const ConstantsProfile& p, int n) {
    require_horizon(trace.horizon(), n, "check_Y");
    ConditionReport r{ConditionKind::ColletEckmann, trace.origin_critical, n, true, {}};
    double rate = p.lambda * std::log(p.L);
    for (int i = 1; i <= n; ++i) {
        if (!ge_slack(trace.log_deriv[i], rate * i)) {
            r.holds = false;
            r.first_failure = {i, -1, trace.log_deriv[i], rate * i};
            break;
        }
    }
    return r;
}

ConditionReport check_W(const Decomposition& d, const ConstantsProfile& p, int n) {
    require_horizon(d.horizon, n, "check_W");
    ConditionReport r{ConditionKind::ReturnBudget, -1, n, true, {}};
    // the depth sum only jumps at return times and the budget grows linearly,
    // so prefixes k between returns are implied by the check at the return
    double budget_rate = p.alpha * std::log(p.L) / 3.0;
    KahanSum depth_sum;
    for (const ReturnEvent& ev : d.events) {
        if (ev.time > n) break;
        depth_sum.add(-std::log(std::max(ev.depth, 1e-300)));
        double rhs = budget_rate * ev.time;
        if (!le_slack(depth_sum.value(), rhs)) {
            r.holds = false;
            r.first_failure = {ev.time, -1, depth_sum.value(), rhs};
            break;
        }
    }
    return r;
}

int first_fail_mis(const OrbitTrace& trace, const ConstantsProfile& p) {
    ConditionReport r = check_mis(trace, p, trace.horizon());
    return r.holds ? -1 : r.first_failure.i;
}

int first_fail_X(const OrbitTrace& trace, const ConstantsProfile& p) {
    ConditionReport r = check_X(trace, p, trace.horizon());
    return r.holds ? -1 : r.first_failure.j;
}

int first_fail_Y(const OrbitTrace& trace, const ConstantsProfile& p) {
    ConditionReport r = check_Y(trace, p, trace.horizon());
    return r.holds ? -1 : r.first_failure.i;
}

int first_fail_W(const Decomposition& d, const ConstantsProfile& p) {
    ConditionReport r = check_W(d, p, d.horizon);
    return r.holds ? -1 : r.first_failure.i + 1;
}

InductionCheck cross_check_brprop(const OrbitTrace& trace, const Decomposition& d,
                                  const ConstantsProfile& p, int n) {
    require_horizon(trace.horizon(), n + 1, "cross_check_brprop");
    InductionCheck out;
    out.applicable = check_W(d, p, std::min(n, d.horizon)).holds && check_X(trace, p, n).holds &&
                     check_Y(trace, p, n).holds;
    if (!out.applicable) return out;
    out.x_next = check_X(trace, p, n + 1).holds;
    out.y_next = check_Y(trace, p, n + 1).holds;
    return out;
}

}  // namespace cml
