#pragma once

#include <concepts>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "greedyq/cubature.hpp"
#include "greedyq/greedy1d.hpp"

namespace greedyq {

template <class F>
concept IntegrandNd = std::invocable<F, std::span<const double>>;

/// Tensor grid of d one-dimensional greedy sequences for a product law.
/// Refinement inserts one point into one marginal, chosen to minimize the
/// resulting product error E_k (lookahead over all marginals); identical
/// marginals short-circuit to round-robin. Squared marginal errors may
/// carry fixed scale factors (used by the Box-Mueller pre-image, where the
/// target variables are affine images of the marginals).
class ProductGrid {
  public:
    explicit ProductGrid(std::vector<Distribution1D> marginals,
                         std::vector<double> err_sq_scales = {});
    /// Adopts already-built marginal sequences (sizes as given).
    explicit ProductGrid(std::vector<GreedySequence> marginals,
                         std::vector<double> err_sq_scales = {});

    int dim() const { return static_cast<int>(marginals_.size()); }
    const GreedySequence& marginal(int k) const { return marginals_[k]; }
    std::vector<int> sizes() const;
    long long total_size() const;
    const std::vector<int>& history() const { return history_; }
    double err_sq_scale(int k) const { return scales_[k]; }

    /// sum_k scale_k * e_2(marginal_k)^2 (exact for r=2, Euclidean norm).
    double product_error_sq() const;

    /// argmin_k E_k with E_k = scale_k e_2(a^{k,(n_k+1)})^2
    ///                        + sum_{l != k} scale_l e_2(a^{l,(n_l)})^2,
    /// ties to the smallest k; identical laws and sizes go round-robin.
    int choose_refinement() const;

    /// Inserts one point into marginal choose_refinement(); returns it.
    int grow();

    /// Product weights over the tensor index set, row-major over sorted
    /// marginal indices (first index slowest).
    std::vector<double> product_weights() const;

    /// Coordinates of the flat row-major tensor index, sorted marginals.
    void point_at(long long flat, std::span<double> out) const;

    /// Full tensor cubature sum_j p_j f(a_j).
    template <IntegrandNd F>
    double integrate_full(F&& f) const {
        const int d = dim();
        std::vector<double> x(d);
        std::vector<int> idx(d, 0);
        auto sizes_v = sizes();
        double acc = 0.0;
        for (;;) {
            double w = 1.0;
            for (int k = 0; k < d; ++k) {
                x[k] = marginals_[k].sorted_points()[idx[k]];
                w *= marginals_[k].weights()[idx[k]];
            }
            acc += w * f(std::span<const double>(x));
            int k = d - 1;
            while (k >= 0 && ++idx[k] == sizes_v[k]) idx[k--] = 0;
            if (k < 0) break;
        }
        return acc;
    }

    /// Recursive update after grow() refined dimension i: only the
    /// 3 * prod_{k != i} n_k cells created or modified by the marginal
    /// insertion are visited; the other marginals' sorted points and
    /// weights are exactly those of the previous level, since grow never
    /// touches them. Must be called once, right after grow().
    template <IntegrandNd F>
    void advance_after_grow(CubatureState& state, F&& f) const {
        const int d = dim();
        if (history_.empty()) throw std::logic_error("advance_after_grow: no grow yet");
        const int i = history_.back();
        const GreedySequence& mi = marginals_[i];
        const InsertionStep& step = mi.steps().back();
        const double a_new = mi.sorted_points()[step.i0];
        const double a_left = step.left_idx >= 0 ? mi.points()[step.left_idx] : 0.0;
        const double a_right = step.right_idx >= 0 ? mi.points()[step.right_idx] : 0.0;

        std::vector<double> x(d);
        std::vector<int> idx(d, 0);
        auto sizes_v = sizes();
        double acc_minus = 0.0, acc_plus = 0.0;
        bool done = false;
        while (!done) {
            double w = 1.0;
            for (int k = 0; k < d; ++k) {
                if (k == i) continue;
                x[k] = marginals_[k].sorted_points()[idx[k]];
                w *= marginals_[k].weights()[idx[k]];
            }
            x[i] = a_new;
            double f_new = f(std::span<const double>(x));
            if (step.left_idx >= 0) {
                x[i] = a_left;
                acc_minus += w * (f(std::span<const double>(x)) - f_new);
            }
            if (step.right_idx >= 0) {
                x[i] = a_right;
                acc_plus += w * (f(std::span<const double>(x)) - f_new);
            }
            int k = d - 1;
            for (;;) {
                if (k == i && --k < 0) { done = true; break; }
                if (k < 0) { done = true; break; }
                if (++idx[k] < sizes_v[k]) break;
                idx[k] = 0;
                --k;
            }
        }
        state.value -= step.p_minus * acc_minus + step.p_plus * acc_plus;
        state.n += 1;
    }

  private:
    std::vector<GreedySequence> marginals_;
    std::vector<double> scales_;
    std::vector<int> history_;
    bool identical_laws_;
};

/// d-dimensional point list with transported probability weights.
struct GaussianGrid {
    enum class Provenance { Product, BoxMuller };
    int d = 0;
    std::vector<double> points;  // row-major, size() * d
    std::vector<double> weights;
    Provenance provenance = Provenance::Product;
    long long size() const { return static_cast<long long>(weights.size()); }
};

/// Image of the tensor grid of (eps, u[, eps', u']) sequences under the
/// Box-Mueller map. d=2 takes one (E, U) pair giving (Z1, Z2); d=3 takes
/// two pairs, keeping Z1, Z2 from the first and the cosine coordinate of
/// the second, discarding its sine. Weights are the products of the
/// pre-image marginal Voronoi weights (transported, not recomputed).
GaussianGrid box_muller_grid(std::span<const GreedySequence> exp_seqs,
                             std::span<const GreedySequence> unif_seqs, int d);

/// Pre-image grid for Box-Mueller growth: marginals Exp(1), U(0,1) per
/// pair with squared-error scales 4 and 4*pi^2 (from 2E ~ Exp(1/2) and
/// 2*pi*U ~ U(0, 2*pi)).
ProductGrid box_muller_pre_image(int d);

/// Plain tensor Gaussian grid from a product of N(0,1) marginals.
GaussianGrid product_gaussian_grid(const ProductGrid& grid);

// Grid file: marginal sequence files by reference, plus the refinement
// history.
void save_grid_json(const ProductGrid& grid, const std::string& path,
                    const std::string& method);

}  // namespace greedyq
