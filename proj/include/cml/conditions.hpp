#pragma once

#include <string>

#include "cml/constants.hpp"
#include "cml/orbit.hpp"
#include "cml/returns.hpp"

namespace cml {

enum class ConditionKind {
    SigmaDistance,   // d(c_i, C) >= sigma for all i <= n
    BlockExpansion,  // |(f^(j-i))' c_i| >= L min(sigma, L^(-alpha i)) for all i < j <= n
    ColletEckmann,   // |(f^i)' c_0| >= L^(lambda i) for all i <= n
    ReturnBudget,    // sum of return depths up to k <= alpha k log(L)/3 for all k <= n
};

const char* condition_name(ConditionKind k);

struct FirstFailure {
    int i = -1;
    int j = -1;        // second index for pairwise conditions, else -1
    double lhs = 0.0;  // in log space
    double rhs = 0.0;
};

struct ConditionReport {
    ConditionKind kind = ConditionKind::SigmaDistance;
    int c_index = -1;
    int horizon = 0;
    bool holds = true;
    FirstFailure first_failure;

    nlohmann::json to_json() const;
};

// All comparisons happen in log space with the shared boundary slack
// (ties hold). Each checker is a single O(n) pass.
ConditionReport check_mis(const OrbitTrace& trace, const ConstantsProfile& p, int n);
ConditionReport check_X(const OrbitTrace& trace, const ConstantsProfile& p, int n);
ConditionReport check_Y(const OrbitTrace& trace, const ConstantsProfile& p, int n);
ConditionReport check_W(const Decomposition& d, const ConstantsProfile& p, int n);

// First step at which the condition stops holding, -1 if it holds through the
// trace/decomposition horizon. For the budget condition the step is k+1 where
// k is the first violating prefix (exclusion happens one step after).
int first_fail_mis(const OrbitTrace& trace, const ConstantsProfile& p);
int first_fail_X(const OrbitTrace& trace, const ConstantsProfile& p);
int first_fail_Y(const OrbitTrace& trace, const ConstantsProfile& p);
int first_fail_W(const Decomposition& d, const ConstantsProfile& p);

// Induction cross-check: whenever budget, block-expansion and growth all hold
// at n, evaluate the latter two at n+1. Requires trace horizon >= n+1 and the
// decomposition of the same orbit.
struct InductionCheck {
    bool applicable = false;
    bool x_next = false;
    bool y_next = false;
};

InductionCheck cross_check_brprop(const OrbitTrace& trace, const Decomposition& d,
                                  const ConstantsProfile& p, int n);

}  // namespace cml
