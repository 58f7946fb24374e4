#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "greedyq/cubature.hpp"
#include "greedyq/greedy1d.hpp"

using namespace greedyq;

namespace {

// Full cubature at every prefix level with weights recomputed from the
// cdf, independent of the incremental ledger and of the recursive update.
template <class F>
std::vector<double> full_trace(const GreedySequence& seq, F&& f) {
    std::vector<double> out;
    std::vector<double> sorted;
    for (int k = 0; k < seq.size(); ++k) {
        double x = seq.points()[k];
        sorted.insert(std::upper_bound(sorted.begin(), sorted.end(), x), x);
        auto w = voronoi_weights(seq.dist(), sorted);
        double acc = 0.0;
        for (size_t i = 0; i < sorted.size(); ++i) acc += w[i] * f(sorted[i]);
        out.push_back(acc);
    }
    return out;
}

const Distribution1D kLaws[4] = {
    Distribution1D::normal(0.0, 1.0),
    Distribution1D::uniform(0.0, 1.0),
    Distribution1D::exponential(1.0),
    Distribution1D::laplace(0.0, 1.0),
};

}  // namespace

TEST_CASE("integrate_full: constants, odd symmetry, smooth integrand") {
    for (const auto& d : kLaws) {
        auto seq = GreedySequence::build(d, 64);
        CHECK(integrate_full(seq, [](double) { return 1.0; }) ==
              doctest::Approx(1.0).epsilon(1e-12));
    }
    auto n3 = GreedySequence::build(Distribution1D::normal(0, 1), 3);
    CHECK(std::fabs(integrate_full(n3, [](double x) { return x; })) <= 1e-14);

    auto u1000 = GreedySequence::build(Distribution1D::uniform(0, 1), 1000);
    CHECK(std::fabs(integrate_full(u1000, [](double x) { return x * x; }) - 1.0 / 3.0) <=
          1e-3);
}

TEST_CASE("advance: constants pass through unchanged") {
    auto seq = GreedySequence::build(Distribution1D::uniform(0, 1), 10);
    CubatureState st{1, 1.0};
    for (const auto& step : seq.steps()) {
        advance(st, step, seq.points(), [](double) { return 1.0; });
        CHECK(st.value == doctest::Approx(1.0).epsilon(1e-13));
    }
    CHECK(st.n == 10);
}

TEST_CASE("advance matches the two-term sum at n = 2") {
    auto seq = GreedySequence::build(Distribution1D::uniform(0, 1), 2);
    auto f = [](double x) { return x; };
    CubatureState st{1, f(seq.points()[0])};
    advance(st, seq.steps()[0], seq.points(), f);
    double direct = seq.weights()[0] * f(seq.sorted_points()[0]) +
                    seq.weights()[1] * f(seq.sorted_points()[1]);
    CHECK(std::fabs(st.value - direct) <= 1e-14);
}

TEST_CASE("recursive trace equals the full recomputation at every level") {
    auto seq = GreedySequence::build(Distribution1D::normal(0, 1), 500);
    auto f = [](double x) { return x * x; };
    auto rec = integrate_stream(seq, f);
    auto full = full_trace(seq, f);
    for (int n = 0; n < seq.size(); ++n)
        CHECK(std::fabs(rec[n] - full[n]) <= 1e-10 * (1.0 + std::fabs(full[n])));
}

TEST_CASE("integrate_stream examples") {
    for (double v : integrate_stream(Distribution1D::uniform(0, 1),
                                     [](double) { return 1.0; }, 10))
        CHECK(v == doctest::Approx(1.0).epsilon(1e-13));

    auto u100 = GreedySequence::build(Distribution1D::uniform(0, 1), 100);
    auto tr = integrate_stream(u100, [](double x) { return x; });
    CHECK(std::fabs(tr.back() - 0.5) <= 0.01);

    auto e500 = GreedySequence::build(Distribution1D::exponential(1.0), 500);
    auto te = integrate_stream(e500, [](double x) { return std::exp(-x); });
    CHECK(std::fabs(te.back() - 0.5) <= 0.01);
}

TEST_CASE("Lipschitz error bound |I_n(|x|) - E|X|| <= e_1") {
    const double exact_abs[4] = {std::sqrt(2.0 / 3.141592653589793), 0.5, 1.0, 1.0};
    for (int li = 0; li < 4; ++li) {
        for (int n : {10, 100}) {
            auto seq = GreedySequence::build(kLaws[li], n);
            double got = integrate_full(seq, [](double x) { return std::fabs(x); });
            CHECK(std::fabs(got - exact_abs[li]) <= error_lr(seq, 1.0) + 1e-12);
        }
    }
}
