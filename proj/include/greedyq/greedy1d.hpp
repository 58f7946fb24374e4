#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "greedyq/distributions.hpp"

namespace greedyq {

/// Per-insertion record. i0 is the sorted position (0-based) taken by the
/// new point; left_idx/right_idx are the insertion-order indices of its
/// sorted neighbours (-1 when the point became the new minimum/maximum).
/// p_minus/p_plus are the masses the new cell takes from the left and
/// right neighbour cell. Replaying integrals needs only these two weights
/// and two indices.
struct InsertionStep {
    int i0 = 0;
    int left_idx = -1;
    int right_idx = -1;
    double p_minus = 0.0;
    double p_plus = 0.0;
    double gain = 0.0;  // squared-error decrease claimed by the search
};

struct LocalCandidate {
    double x = 0.0;
    double gain = 0.0;
};

/// Best insertion point inside one Voronoi interval (left, right), both
/// neighbours frozen; either end may be infinite (clipped to the effective
/// support for the search). gain is the exact squared-error decrease,
/// assembled from closed-form truncated moments. The returned x satisfies
/// the one-point Lloyd fixed point of its own cell to ~1e-12 relative.
LocalCandidate local_candidate(const Distribution1D& dist, double left, double right);

/// Quadratic greedy quantization sequence built one point at a time.
/// Maintains, incrementally, the sorted view, the gap inertia ledger (one
/// entry per gap between consecutive sorted points, tails included, so
/// n+1 entries for n points), the sorted Voronoi weights, one
/// InsertionStep per insertion after the first and the squared-error
/// trace. Instances are safe to share once construction stops.
class GreedySequence {
  public:
    explicit GreedySequence(Distribution1D dist);  // n = 1 at the mean
    static GreedySequence build(Distribution1D dist, int n);

    /// One greedy insertion: scans the cached per-gap candidates, inserts
    /// the best (ties resolved leftmost), recomputes exactly the 2 split
    /// gap inertias and touches 3 weights (2 at the ends).
    void grow_one();

    int size() const { return static_cast<int>(points_.size()); }
    const Distribution1D& dist() const { return dist_; }
    const std::vector<double>& points() const { return points_; }  // insertion order
    const std::vector<double>& sorted_points() const { return sorted_; }
    const std::vector<int>& sorted_index() const { return sorted_index_; }
    const std::vector<double>& weights() const { return weights_; }  // sorted cells
    const std::vector<double>& inertias() const { return inertias_; }  // gaps, n+1
    const std::vector<InsertionStep>& steps() const { return steps_; }
    const std::vector<double>& error_sq_trace() const { return trace_; }

    double error_sq() const { return trace_.back(); }
    double error_l2() const;
    /// Gain the next insertion would realize (lookahead; nothing changes).
    double peek_next_gain() const;
    /// Cached per-gap candidates (aligned with the inertia ledger).
    const std::vector<LocalCandidate>& gap_candidates() const { return cand_; }
    /// Sorted-cell boundary b_i, i = 0..n (b_0 = -inf, b_n = +inf).
    double cell_boundary(int i) const;

  private:
    friend GreedySequence load_sequence_json(const std::string& path);
    // Ledger update for a fixed insertion point. search_gain, when >= 0,
    // is recorded on the step; otherwise the exact ledger decrease is.
    void insert_given_point(int gap, double x, double search_gain = -1.0);
    void refresh_candidate(int gap);
    int best_gap() const;

    Distribution1D dist_;
    std::vector<double> points_;
    std::vector<double> sorted_;
    std::vector<int> sorted_index_;      // sorted_index_[i] = insertion index
    std::vector<double> weights_;
    std::vector<double> inertias_;       // inertias_[g]: gap between sorted g-1 and g
    std::vector<LocalCandidate> cand_;   // cached per gap, aligned with inertias_
    std::vector<InsertionStep> steps_;
    std::vector<double> trace_;
};

/// e_r(a^{(n)}, P). r = 2 reads the inertia ledger; other r integrate
/// |xi - a_i|^r per cell adaptively (1e-9 per cell).
double error_lr(const GreedySequence& seq, double r);

/// sum_i integral over cell i of |xi - a_i|^s dP for an arbitrary sorted
/// grid, i.e. e_s^s. Shared by the mismatch and quasi-stationarity
/// diagnostics.
double error_ls_pow(const Distribution1D& dist, std::span<const double> sorted_pts,
                    double s);

/// From-scratch ledgers (the oracle for the incremental updates).
std::pair<std::vector<double>, std::vector<double>> recompute_full(
    const GreedySequence& seq);

/// Voronoi weights of an arbitrary increasing grid under dist.
std::vector<double> voronoi_weights(const Distribution1D& dist,
                                    std::span<const double> sorted_pts);

// Sequence files: JSON {schema, distribution, n, points_in_insertion_order,
// error_sq_trace, steps}; CSV rows (k, a_k, e2).
void save_sequence_json(const GreedySequence& seq, const std::string& path);
GreedySequence load_sequence_json(const std::string& path);
void export_sequence_csv(const GreedySequence& seq, std::ostream& os);

}  // namespace greedyq
