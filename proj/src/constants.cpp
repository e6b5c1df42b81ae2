#include "cml/constants.hpp"

#include <algorithm>
#include <cmath>

#include "cml/errors.hpp"

namespace cml {

nlohmann::json ConstantsProfile::to_json() const {
    return nlohmann::json{
        {"kind", kind == ProfileKind::PaperAsymptotic ? "paper-asymptotic" : "empirical"},
        {"L", L},
        {"beta", beta},
        {"alpha", alpha},
        {"N", N},
        {"K0", K0},
        {"sigma", sigma},
        {"lambda0", lambda0},
        {"lambda", lambda},
        {"delta0", delta0},
        {"delta", delta},
        {"K", K},
        {"Kprime", Kprime},
        {"vacuous", vacuous},
    };
}

double estimate_K0(const DriveFunction& phi, double L, double eps) {
    CriticalSet cs = find_critical_points(phi, L);
    double gap = cs.min_gap();
    if (!(eps > 0.0) || !(eps < gap / 4.0))
        throw ValidationError("estimate_K0: eps must lie in (0, min_gap/4)");

    MapFamily f{phi, 0.0, L};
    double worst = 1.0;

    // global sup bounds on a 1e4 grid: |f'| <= K0 L, |f''| <= K0 L
    for (int i = 0; i < 10000; ++i) {
        double t = i / 10000.0;
        worst = std::max(worst, std::abs(f.deriv(t)) / L);
        worst = std::max(worst, std::abs(f.deriv2(t)) / L);
    }

    // local two-sided bounds over C_eps; interior grid points per side so the
    // point set scales with eps and the total stays ~1e4
    const int per_side = std::max<int>(1, 10000 / (2 * static_cast<int>(cs.points.size())));
    for (double c : cs.points) {
        for (int side = -1; side <= 1; side += 2) {
            for (int j = 1; j <= per_side; ++j) {
                double s = side * eps * double(j) / per_side;
                // image difference on the lift: f(c+s) - f(c) = s + L (Phi(c+s) - Phi(c))
                double img = s + L * phi.value_diff(c, s);
                double as = std::abs(s);
                double q1 = std::abs(img) / (L * as * as);
                double q2 = std::abs(f.deriv_at_offset(c, s)) / (L * as);
                if (q1 == 0.0 || q2 == 0.0)
                    throw K0UnboundedError("estimate_K0: degenerate local bound at s=" +
                                           std::to_string(s));
                worst = std::max({worst, q1, 1.0 / q1, q2, 1.0 / q2});
            }
        }
    }

    if (worst > 1e6) throw K0UnboundedError("estimate_K0: no K0 <= 1e6 satisfies the grid check");
    return 1.1 * worst;
}

ConstantsProfile build_profile(const DriveFunction& phi, double L, double beta,
                               std::optional<double> alpha, int N, ProfileKind kind,
                               std::optional<ProfileOverrides> overrides) {
    if (!(beta > 1.5) || !(beta < 2.0))
        throw InvalidBetaError("beta must lie in (3/2, 2), got " + std::to_string(beta));
    if (!(L > 1.0)) throw ValidationError("L must exceed 1");
    if (N < 1) throw ValidationError("N must be >= 1");

    ConstantsProfile p;
    p.kind = kind;
    p.L = L;
    p.beta = beta;
    p.N = N;
    p.lambda0 = 0.5 - beta / 4.0;

    CriticalSet cs = find_critical_points(phi, L);
    p.K0 = estimate_K0(phi, L, cs.min_gap() / 8.0);
    p.K = std::exp(2.0 * p.K0 * std::pow(L, 1.0 - beta));
    p.Kprime = std::exp(std::pow(L, -0.25) + 3.0);

    if (kind == ProfileKind::PaperAsymptotic) {
        if (overrides)
            throw InvalidOverridesError("paper-asymptotic profile takes no overrides");
        p.lambda = p.lambda0 / 9.0;
        p.alpha = alpha.value_or(p.lambda / 100.0);
        p.sigma = p.K0 * std::pow(L, -1.0 + beta / 2.0);
        p.delta0 = std::pow(L, -1.0 + p.lambda0);
        p.delta = std::pow(L, -p.alpha * N);
        // thresholds order only once L is astronomically large; flag instead of failing
        p.vacuous = (p.sigma >= 0.25) || (p.delta0 >= p.sigma) ||
                    (p.delta < 1.0 && p.delta0 < 1.0 && p.delta >= p.delta0);
    } else {
        if (!overrides)
            throw InvalidOverridesError("empirical profile requires sigma/delta0/delta/lambda");
        const ProfileOverrides& o = *overrides;
        if (!(o.delta > 0.0 && o.delta < o.delta0 && o.delta0 < o.sigma && o.sigma < 0.25))
            throw InvalidOverridesError("empirical overrides must satisfy 0 < delta < delta0 < sigma < 1/4");
        if (!(o.lambda > 0.0)) throw InvalidOverridesError("lambda must be positive");
        p.sigma = o.sigma;
        p.delta0 = o.delta0;
        p.delta = o.delta;
        p.lambda = o.lambda;
        p.alpha = alpha.value_or(p.lambda / 100.0);
        p.vacuous = false;
    }

    if (!(p.alpha > 0.0) || !(p.alpha < p.lambda))
        throw InvalidOverridesError("alpha must lie in (0, lambda)");
    return p;
}

}  // namespace cml
