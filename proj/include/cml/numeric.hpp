#pragma once

#include <cmath>

namespace cml {

// Threshold comparisons at condition boundaries happen in log space with a
// small relative slack so roundoff cannot flip a tie; ties count as holds.
inline constexpr double kBoundarySlack = 1e-12;

inline double slack_scale(double lhs, double rhs) {
    double s = std::fmax(std::fabs(lhs), std::fabs(rhs));
    return s > 1.0 ? s : 1.0;
}

inline bool ge_slack(double lhs, double rhs) {
    return lhs >= rhs - kBoundarySlack * slack_scale(lhs, rhs);
}

inline bool le_slack(double lhs, double rhs) {
    return lhs <= rhs + kBoundarySlack * slack_scale(lhs, rhs);
}

// Compensated accumulator (Kahan). Used wherever a long sum of reciprocal
// distortion terms or depth logs must stay reproducible.
class KahanSum {
  public:
    void add(double x) {
        double y = x - carry_;
        double t = sum_ + y;
        carry_ = (t - sum_) - y;
        sum_ = t;
    }
    void scale(double s) {
        sum_ *= s;
        carry_ *= s;
    }
    double value() const { return sum_; }

  private:
    double sum_ = 0.0;
    double carry_ = 0.0;
};

}  // namespace cml
