#pragma once

#include <optional>
#include <vector>

#include "cml/constants.hpp"
#include "cml/map.hpp"
#include "cml/orbit.hpp"

namespace cml {

// Radii of the bound-period annuli around one critical point:
//   r_p = sqrt(D_p(critical value orbit) / L),  p = 1..max_p.
// A point at distance in (r_{p+1}, r_p] is bound for p iterates.
struct BoundPeriodLadder {
    int c_index = -1;
    double c = 0.0;
    std::vector<double> log_radius;  // [p] for p = 1..max_p; [0] unused
    int max_p() const { return static_cast<int>(log_radius.size()) - 1; }
    double radius(int p) const { return std::exp(log_radius[p]); }
};

// Ladder over `horizon` steps of the critical-value orbit of cs.points[c_index].
BoundPeriodLadder build_bound_ladder(const MapFamily& fam, const CriticalSet& cs, int c_index,
                                     int horizon, double beta);

// Interval membership is right-closed: distance exactly r_p maps to p.
// nullopt when the point is farther than r_1 (not bound at all);
// LadderExhaustedError when it is deeper than the last resolvable radius.
std::optional<int> assign_bound_period(const BoundPeriodLadder& ladder, double dist_to_c);

enum class ReturnKind { Deep, Shallow };

struct ReturnEvent {
    int time = 0;          // n_k
    int bound_to = -1;     // critical point index
    double depth = 0.0;    // distance to the critical set at the return
    int depth_index = 0;   // floor(-log depth)
    int bound_period = 0;  // p_k; 0 when the return is too shallow for the ladder
    ReturnKind kind = ReturnKind::Deep;
    bool essential = false;
};

// Inclusive time ranges. Bound segments cover [n_k, n_k + p_k], free segments
// the gaps up to (and excluding) the next return; together they partition
// [n_1, horizon].
struct Segment {
    bool bound = false;
    int begin = 0;
    int end = 0;
};

struct Decomposition {
    bool deep_mode = true;  // returns into C_delta (deep) or C_delta0 (shallow)
    int horizon = 0;
    std::vector<ReturnEvent> events;
    std::vector<Segment> segments;
};

// Greedy forward scan: the next return is the first time >= n_k + p_k + 1 the
// orbit enters the return neighborhood. Bound periods come from the ladder of
// the critical point the return is bound to (built on demand, horizon
// max(trace horizon, 256)).
Decomposition decompose(const MapFamily& fam, const CriticalSet& cs, const OrbitTrace& trace,
                        const ConstantsProfile& profile, bool deep_mode = true);

// Marks each free return nu essential iff for every earlier free return i
//   sum_{free j in (i, nu]} 2 log depth_j <= log depth_i.
// Runs in O(#returns) with a running minimum of prefix sums.
void classify_essential(Decomposition& d);

// sum over return times <= k of -log depth.
double return_depth_sum(const Decomposition& d, int k);

// Parameter window around the current parameter for the orbit of critical
// point c_index at depth n, with the image-length amendment.
struct ParameterWindow {
    double center = 0.0;
    int n = 0;
    int c_index = -1;
    double half_width = 0.0;          // raw: D_n(a, c_0(a)); may underflow to 0
    double log_half_width = 0.0;      // always valid
    double image_length = 0.0;        // unwrapped arc length of c_n over the raw window
    double amended_half_width = 0.0;  // scaled by 1/(9 * image_length) when image > 1/3
};

// Image length is estimated from 33 equispaced parameters across the raw
// window, summing |lift differences| between neighbors (wrap counting exact).
// Throws CriticalHitError when the critical orbit dies before n.
ParameterWindow build_window(const MapFamily& fam, const CriticalSet& cs, int c_index, int n,
                             const ConstantsProfile& profile);

}  // namespace cml
