#pragma once

#include <string>
#include <utility>
#include <vector>

#include "greedyq/greedy1d.hpp"

namespace greedyq {

/// Points in [0,1]^d, d in {1,2,3}, stored row-major.
struct PointSet {
    int d = 1;
    std::vector<double> xs;  // size() * d
    long long size() const { return static_cast<long long>(xs.size()) / d; }
    double coord(long long i, int k) const { return xs[i * d + k]; }
    void validate() const;  // bounds and nonemptiness
};

// Exact star discrepancy by the closed formulas (sorting plus an
// O(n^{d-1}) scan per anchor point). Inputs need not be sorted.
double star_disc_1d(const PointSet& ps);
double star_disc_2d(const PointSet& ps);
double star_disc_3d(const PointSet& ps);
double star_disc(const PointSet& ps);  // dispatch on d

/// Reference oracle: sup over all anchored boxes with corners on the
/// coordinate grid (plus 1 per axis), taking both strict and non-strict
/// point counts so boundary attainment is convention-proof. Guarded to
/// n <= 12 (the corner grid is (n+1)^d).
double star_disc_bruteforce(const PointSet& ps);

/// (e_1, D_n^*) for a greedy U(0,1) sequence; e_1 <= D_n^* is the
/// Koksma-Hlawka consequence callers assert.
std::pair<double, double> quantization_error_vs_disc(const GreedySequence& seq);

PointSet load_points_csv(const std::string& path, int d);

}  // namespace greedyq
