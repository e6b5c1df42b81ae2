#pragma once

#include <optional>
#include <string>

#include "cml/map.hpp"

#include "json.hpp"

namespace cml {

enum class ProfileKind { PaperAsymptotic, Empirical };

// Explicit small-scale constants for the Empirical profile kind.
struct ProfileOverrides {
    double sigma = 0.0;
    double delta0 = 0.0;
    double delta = 0.0;
    double lambda = 0.0;

    bool operator==(const ProfileOverrides&) const = default;
};

// Derived constants shared by the condition checkers, the return machinery
// and the lemma lab. The asymptotic kind computes everything from (beta, L);
// it is honest about being vacuous at desk scale (sigma >= 1/4 etc.), which
// is why the empirical kind exists.
struct ConstantsProfile {
    ProfileKind kind = ProfileKind::PaperAsymptotic;
    double L = 0.0;
    double beta = 0.0;
    double alpha = 0.0;
    int N = 0;

    double K0 = 0.0;      // comparability constant near the critical set
    double sigma = 0.0;   // phase-1 distance floor
    double lambda0 = 0.0; // 1/2 - beta/4
    double lambda = 0.0;  // lambda0 / 9
    double delta0 = 0.0;  // shallow-return radius
    double delta = 0.0;   // deep-return radius
    double K = 0.0;       // distortion bound exp(2 K0 L^(1-beta))
    double Kprime = 0.0;  // parameter-distortion bound exp(L^(-1/4) + 3)

    bool vacuous = false; // thresholds do not order meaningfully at this L

    nlohmann::json to_json() const;
};

// Smallest constant (>= 1, times a 1.1 safety factor) making the local
// quadratic/linear comparability bounds hold on a 1e4-point grid over the
// eps-neighborhood of the critical set, together with the global bounds
// |f'| <= K0 L and |f''| <= K0 L. Image differences near a critical point are
// taken on the lift, not mod 1. Throws K0UnboundedError past 1e6.
double estimate_K0(const DriveFunction& phi, double L, double eps);

// Builds the full profile. alpha defaults to lambda/100 when unset.
// Empirical kind requires overrides with 0 < delta < delta0 < sigma < 1/4.
ConstantsProfile build_profile(const DriveFunction& phi, double L, double beta,
                               std::optional<double> alpha, int N, ProfileKind kind,
                               std::optional<ProfileOverrides> overrides = std::nullopt);

}  // namespace cml
