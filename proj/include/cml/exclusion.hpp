#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cml/conditions.hpp"
#include "cml/constants.hpp"
#include "cml/map.hpp"

namespace cml {

enum class ExclusionReason {
    None,            // alive through n_max
    SigmaDistance,   // phase-1 distance floor (steps 0..N)
    ReturnBudget,    // phase-2 depth budget (steps > N)
    BlockExpansion,  // strict mode only
    ColletEckmann,   // strict mode only
    CriticalHit,     // orbit landed on a critical point
    LadderExhausted, // return deeper than the ladder resolves
};

const char* reason_name(ExclusionReason r);

// Verdict for one parameter: first step s with a not in A^(s).
struct Verdict {
    int fail_step = -1;  // -1 = alive
    ExclusionReason reason = ExclusionReason::None;
    int c_index = -1;
    int first_x_fail = -1;  // diagnostics, not exclusions unless strict
    int first_y_fail = -1;

    bool alive_at(int n) const { return fail_step < 0 || fail_step > n; }
    bool operator==(const Verdict& o) const {
        return fail_step == o.fail_step && reason == o.reason;
    }
};

Verdict evaluate_parameter(const DriveFunction& phi, const CriticalSet& cs,
                           const ConstantsProfile& profile, double a, int n_max, bool strict);

struct SampleOutcome {
    double a = 0.0;
    Verdict verdict;
};

struct SweepRecord {
    std::string mode;  // "mc", "mc-strict", "bisect"
    double L = 0.0;
    int n_max = 0;
    std::uint64_t seed = 0;
    std::size_t samples = 0;  // MC sample count, or cell count for bisect
    ConstantsProfile profile;

    std::vector<double> survivor_fraction;     // index n = 0..n_max
    std::vector<double> survivor_uncertainty;  // stderr (mc) / half-unresolved mass (bisect)
    std::vector<double> x_fail_fraction;       // diagnostics (mc only)
    std::vector<double> y_fail_fraction;
    double paper_bound = 0.0;  // NaN when the profile is vacuous (sigma >= 1)

    nlohmann::json to_json() const;
};

// Lower bound for the surviving measure predicted by the asymptotic theory:
// (1 - cbrt(sigma))^(n+1) up to step N, then the tail bound
// (1 - L^(-alpha N / 10)) (1 - cbrt(sigma))^N. NaN when sigma >= 1.
double paper_bound_at(const ConstantsProfile& p, int n);

struct McResult {
    SweepRecord record;
    std::vector<SampleOutcome> outcomes;
};

// Monte Carlo pass over `samples` parameters drawn from the counter-based
// generator; sample i is a pure function of (seed, i), so results merge
// deterministically whatever CML_WORKERS says.
McResult run_exclusion_mc(const DriveFunction& phi, double L, const ConstantsProfile& profile,
                          int n_max, std::size_t samples, std::uint64_t seed,
                          bool strict = false);

struct ParameterCell {
    double lo = 0.0;
    double hi = 0.0;
    Verdict verdict;  // from the representative (midpoint)
    int depth = 0;
    bool unresolved = false;
};

struct BisectResult {
    SweepRecord record;
    std::vector<ParameterCell> cells;
};

// Adaptive bisection of [0,1): a cell splits while its endpoint orbits
// separate beyond delta0 within n_max or the verdicts at {lo, hi, mid}
// disagree; cells that cannot split further (halves would drop below
// min_width) are classified by the midpoint and flagged unresolved.
// Unresolved mass counts half-alive with matching uncertainty.
BisectResult run_exclusion_bisect(const DriveFunction& phi, double L,
                                  const ConstantsProfile& profile, int n_max, double min_width,
                                  bool strict = false);

// Profile recipe applied across an L sweep.
struct ProfileRule {
    bool paper = false;
    double beta = 1.75;
    std::optional<double> alpha;
    int N = 20;
    // scaled empirical rule: sigma = min(cap, coeff * L^exp), delta0 = sigma/d0_div,
    // delta = delta0/d_div, lambda = lambda0(beta)/9
    double sigma_coeff = 0.1;
    double sigma_exp = -0.25;
    double delta0_div = 8.0;
    double delta_div = 8.0;
    std::optional<ProfileOverrides> fixed;  // same explicit overrides at every L

    ConstantsProfile make(const DriveFunction& phi, double L) const;
};

std::vector<McResult> sweep_L(const DriveFunction& phi, const std::vector<double>& L_list,
                              const ProfileRule& rule, int n_max, std::size_t samples,
                              std::uint64_t seed);

}  // namespace cml
