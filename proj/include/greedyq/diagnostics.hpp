#pragma once

#include <span>
#include <vector>

#include "greedyq/greedy1d.hpp"

namespace greedyq {

struct RateRow {
    int n = 0;
    double err = 0.0;         // e_r(a^(n))
    double scaled = 0.0;      // n^{1/d} * e_r, d = 1
    double pierce_rhs = 0.0;  // kappa * sigma_{r+delta} * (n-1)^{-1}, delta = 1
};

struct RateProfile {
    double r = 2.0;
    std::vector<RateRow> rows;  // n = 2..N
};

/// Tabulates n * e_r along the greedy sequence, next to an explicit
/// Pierce-type right-hand side so boundedness can be eyeballed.
RateProfile rate_profile(const Distribution1D& dist, double r, int N);

/// e_s of the L2-built sequence for s in [2, 3) (d = 1), per-cell adaptive
/// quadrature. s outside the range throws.
RateProfile mismatch_profile(const Distribution1D& dist, double s, int N);

/// Predicted limiting cell weights f^{p/(d+p)}(a_i) / (C n) with
/// C = (integral of f^{d/(d+p)})^{-1} computed by adaptive quadrature.
/// Not renormalized.
std::vector<double> limit_weights(const GreedySequence& seq, double p = 2.0);
double limit_weights_l1_distance(const GreedySequence& seq, double p = 2.0);

/// L1 stationarity defect sum_i |a_i - E(X | X in W_i)|.
double stationarity_gap(const GreedySequence& seq);

/// || Xhat - E(X|Xhat) ||_r under the weighted discrete law, divided by
/// e_{1+rho}^{1+rho}. r in {1,2}, rho in [0,1].
double quasi_stationarity_ratio(const GreedySequence& seq, int r, double rho);

/// Batch Lloyd fixed point from a warm start (plus optional random
/// restarts), iterated until the max point movement drops below 1e-12.
/// Returns the sorted optimal grid.
std::vector<double> lloyd_optimal(const Distribution1D& dist, int n,
                                  std::span<const double> warm_start,
                                  int random_restarts = 0, unsigned long long seed = 1234);

/// Squared L2 distortion of an arbitrary sorted grid.
double quantizer_distortion_sq(const Distribution1D& dist,
                               std::span<const double> sorted_pts);

struct SuboptimalRow {
    int n = 0;
    bool unimodal = false;
    double ratio = 0.0;  // e_2(greedy) / e_2(Lloyd optimum); 0 if skipped
};

/// Weight unimodality and greedy-vs-optimal error ratio at the given
/// levels. The Lloyd oracle runs only for n <= lloyd_max_n (it dominates
/// the cost); 5 random restarts guard the small levels.
std::vector<SuboptimalRow> suboptimal_check(const GreedySequence& seq,
                                            std::span<const int> checkpoints,
                                            int lloyd_max_n = 255);

bool weights_unimodal(std::span<const double> w);

/// Checkpoint levels of the two sub-optimal uniform subsequences
/// (alpha_0 in {3, 11}), by the mod-3 doubling rules. Returns alpha_0
/// followed by `count` successors.
std::vector<long long> uniform_suboptimal_checkpoints(long long alpha0, int count);

}  // namespace greedyq
