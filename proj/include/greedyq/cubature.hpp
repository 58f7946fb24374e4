#pragma once

#include <concepts>
#include <vector>

#include "greedyq/greedy1d.hpp"
#include "greedyq/kernels.hpp"

namespace greedyq {

/// Running value of the quantization cubature I_n(f) for one integrand.
/// After n steps the value equals the full cubature sum at level n up to
/// accumulated rounding.
struct CubatureState {
    int n = 0;
    double value = 0.0;
};

template <class F>
concept Integrand1D = std::invocable<F, double>;

/// Full cubature sum: sum_i p_i^n f(a_i^(n)) over the sorted view.
template <Integrand1D F>
double integrate_full(const GreedySequence& seq, F&& f) {
    const auto& pts = seq.sorted_points();
    std::vector<double> fv(pts.size());
    for (size_t i = 0; i < pts.size(); ++i) fv[i] = f(pts[i]);
    return kernels::weighted_sum(seq.weights(), fv);
}

/// One recursive update, from I_{n-1} to I_n:
///   I_n = I_{n-1} - p_-(f(a_{i0-1}) - f(a_{i0})) - p_+(f(a_{i0+1}) - f(a_{i0})).
/// `step` is the n-th insertion record; `points` is the insertion-order
/// point list of the sequence at any level >= n (only the three indexed
/// points are read). A missing neighbour drops its term.
template <Integrand1D F>
void advance(CubatureState& state, const InsertionStep& step,
             const std::vector<double>& points, F&& f) {
    double f_new = f(points[state.n]);  // the point inserted at this step
    double delta = 0.0;
    if (step.left_idx >= 0) delta += step.p_minus * (f(points[step.left_idx]) - f_new);
    if (step.right_idx >= 0) delta += step.p_plus * (f(points[step.right_idx]) - f_new);
    state.value -= delta;
    state.n += 1;
}

/// Replays a built sequence through the recursive formula; returns
/// I_1..I_n. Storage per integrand is the state alone: the weights and the
/// sorted view are never consulted.
template <Integrand1D F>
std::vector<double> integrate_stream(const GreedySequence& seq, F&& f) {
    std::vector<double> trace;
    trace.reserve(seq.size());
    CubatureState st;
    st.n = 1;
    st.value = f(seq.points()[0]);  // level 1: single cell of mass 1
    trace.push_back(st.value);
    for (const auto& step : seq.steps()) {
        advance(st, step, seq.points(), f);
        trace.push_back(st.value);
    }
    return trace;
}

/// Builds the sequence and streams the integral in one go.
template <Integrand1D F>
std::vector<double> integrate_stream(const Distribution1D& dist, F&& f, int n) {
    return integrate_stream(GreedySequence::build(dist, n), std::forward<F>(f));
}

}  // namespace greedyq
