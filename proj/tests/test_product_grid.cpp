#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "greedyq/product_grid.hpp"

using namespace greedyq;

namespace {

double norm_sq(std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return s;
}

// Monte Carlo estimate of E[min_j ||X - a_j||^2] for a d=2 uniform tensor
// grid, with its standard error.
std::pair<double, double> mc_min_dist_sq(const ProductGrid& grid, long long samples,
                                         unsigned seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const auto& ax = grid.marginal(0).sorted_points();
    const auto& ay = grid.marginal(1).sorted_points();
    double sum = 0.0, sumsq = 0.0;
    for (long long s = 0; s < samples; ++s) {
        double x = u(rng), y = u(rng);
        double best = kInf;
        for (double px : ax)
            for (double py : ay)
                best = std::min(best, (x - px) * (x - px) + (y - py) * (y - py));
        sum += best;
        sumsq += best * best;
    }
    double mean = sum / samples;
    double var = std::max(sumsq / samples - mean * mean, 0.0);
    return {mean, std::sqrt(var / samples)};
}

}  // namespace

TEST_CASE("product error is the sum of marginal squared errors") {
    ProductGrid u2(std::vector<Distribution1D>(2, Distribution1D::uniform(0, 1)));
    CHECK(u2.product_error_sq() == doctest::Approx(1.0 / 6.0).epsilon(1e-12));

    ProductGrid n3(std::vector<Distribution1D>(3, Distribution1D::normal(0, 1)));
    CHECK(n3.product_error_sq() == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("product error matches a Monte Carlo oracle on a 4x4 grid") {
    ProductGrid grid(std::vector<Distribution1D>(2, Distribution1D::uniform(0, 1)));
    while (grid.total_size() < 16) grid.grow();
    REQUIRE(grid.sizes() == std::vector<int>{4, 4});
    auto [mc, se] = mc_min_dist_sq(grid, 1'000'000, 424242);
    CHECK(std::fabs(grid.product_error_sq() - mc) <= 3.0 * se);
}

TEST_CASE("choose_refinement: round robin for identical marginals") {
    ProductGrid g(std::vector<Distribution1D>(2, Distribution1D::uniform(0, 1)));
    CHECK(g.choose_refinement() == 0);  // sizes (1,1): first dimension

    ProductGrid n3(std::vector<Distribution1D>(3, Distribution1D::normal(0, 1)));
    n3.grow();  // (2,1,1)
    REQUIRE(n3.sizes() == std::vector<int>{2, 1, 1});
    CHECK(n3.choose_refinement() == 1);  // the lagging dimension

    for (int i = 0; i < 5; ++i) n3.grow();
    CHECK(n3.sizes() == std::vector<int>{3, 3, 3});  // 6 grows stay periodic
}

TEST_CASE("grow updates sizes and history") {
    ProductGrid g(std::vector<Distribution1D>(2, Distribution1D::uniform(0, 1)));
    int k = g.grow();
    CHECK(k == 0);
    CHECK(g.sizes() == std::vector<int>{2, 1});
    CHECK(g.history() == std::vector<int>{0});
}

TEST_CASE("scaled refinement reproduces the explicit E_u / E_eps comparison") {
    // Exp(1) and U(0,1) marginals standing in for 2E ~ Exp(1/2) and
    // 2 pi U ~ U(0, 2pi); squared errors scale by 4 and 4 pi^2.
    const double u_scale = 4.0 * std::numbers::pi * std::numbers::pi;
    ProductGrid pre = box_muller_pre_image(2);
    for (int step = 0; step < 40; ++step) {
        double e_eps = pre.marginal(0).error_sq();
        double e_u = pre.marginal(1).error_sq();
        double g_eps = pre.marginal(0).peek_next_gain();
        double g_u = pre.marginal(1).peek_next_gain();
        double E_eps = 4.0 * (e_eps - g_eps) + u_scale * e_u;
        double E_u = 4.0 * e_eps + u_scale * (e_u - g_u);
        int want = E_eps <= E_u ? 0 : 1;
        int got = pre.grow();
        CHECK(got == want);
    }
}

TEST_CASE("78 grows of the d=2 pre-image follow E_k minimization throughout") {
    // Greedy E_k allocation puts more points on the exponential marginal
    // (its scaled error decays slower); replayed step by step.
    ProductGrid pre = box_muller_pre_image(2);
    const double u_scale = 4.0 * std::numbers::pi * std::numbers::pi;
    for (int i = 0; i < 78; ++i) {
        double base = 4.0 * pre.marginal(0).error_sq() + u_scale * pre.marginal(1).error_sq();
        double e0 = base - 4.0 * pre.marginal(0).peek_next_gain();
        double e1 = base - u_scale * pre.marginal(1).peek_next_gain();
        int want = e0 <= e1 ? 0 : 1;
        CHECK(pre.grow() == want);
    }
    CHECK(pre.sizes()[0] * pre.sizes()[1] >= 78 + 1);
    CHECK(pre.sizes()[0] > pre.sizes()[1]);
}

TEST_CASE("refinement never increases the product error") {
    ProductGrid pre = box_muller_pre_image(3);
    double prev = pre.product_error_sq();
    for (int i = 0; i < 60; ++i) {
        pre.grow();
        double cur = pre.product_error_sq();
        CHECK(cur < prev);
        prev = cur;
    }
}

TEST_CASE("product weights are row-major products and sum to one") {
    ProductGrid g(std::vector<Distribution1D>{Distribution1D::uniform(0, 1),
                                              Distribution1D::exponential(1.0)});
    for (int i = 0; i < 5; ++i) g.grow();
    auto w = g.product_weights();
    auto sz = g.sizes();
    REQUIRE(static_cast<long long>(w.size()) == g.total_size());
    double sum = 0.0;
    for (int i = 0; i < sz[0]; ++i)
        for (int j = 0; j < sz[1]; ++j) {
            double expect = g.marginal(0).weights()[i] * g.marginal(1).weights()[j];
            CHECK(w[i * sz[1] + j] == doctest::Approx(expect).epsilon(1e-14));
            sum += w[i * sz[1] + j];
        }
    CHECK(std::fabs(sum - 1.0) <= 1e-10);

    ProductGrid one(std::vector<Distribution1D>(3, Distribution1D::normal(0, 1)));
    CHECK(one.product_weights() == std::vector<double>{1.0});
}

TEST_CASE("recursive d-dimensional integration equals the full tensor sum") {
    auto run = [](std::vector<Distribution1D> margs, auto&& f, long long target,
                  double tol) {
        ProductGrid grid(std::move(margs));
        CubatureState st;
        st.n = 1;
        st.value = grid.integrate_full(f);
        while (grid.total_size() < target) {
            grid.grow();
            grid.advance_after_grow(st, f);
            double full = grid.integrate_full(f);
            CHECK(std::fabs(st.value - full) <= tol * (1.0 + std::fabs(full)));
        }
    };
    run(std::vector<Distribution1D>(2, Distribution1D::uniform(0, 1)),
        [](std::span<const double> x) { return x[0] + x[1]; }, 256, 1e-10);
    run(std::vector<Distribution1D>(3, Distribution1D::normal(0, 1)), norm_sq, 1000, 1e-9);
    // Constants are exactly preserved by the update.
    run(std::vector<Distribution1D>(2, Distribution1D::exponential(1.0)),
        [](std::span<const double>) { return 1.0; }, 64, 1e-12);
}

TEST_CASE("advance_after_grow requires a preceding grow") {
    ProductGrid g(std::vector<Distribution1D>(2, Distribution1D::uniform(0, 1)));
    CubatureState st;
    CHECK_THROWS(g.advance_after_grow(st, [](std::span<const double>) { return 1.0; }));
}

TEST_CASE("box_muller_grid shapes and weights") {
    auto e1 = GreedySequence::build(Distribution1D::exponential(1.0), 1);
    auto u1 = GreedySequence::build(Distribution1D::uniform(0, 1), 1);
    std::vector<GreedySequence> es{e1}, us{u1};
    auto g = box_muller_grid(es, us, 2);
    CHECK(g.size() == 1);
    CHECK(g.weights[0] == doctest::Approx(1.0));

    auto e8 = GreedySequence::build(Distribution1D::exponential(1.0), 8);
    auto u6 = GreedySequence::build(Distribution1D::uniform(0, 1), 6);
    std::vector<GreedySequence> es2{e8}, us2{u6};
    auto g2 = box_muller_grid(es2, us2, 2);
    CHECK(g2.size() == 48);
    double sum = 0.0;
    for (double w : g2.weights) {
        CHECK(w > 0.0);
        sum += w;
    }
    CHECK(std::fabs(sum - 1.0) <= 1e-10);

    CHECK_THROWS(box_muller_grid(es2, us2, 3));  // wrong pair count for d=3
    CHECK_THROWS(box_muller_grid(es2, us2, 4));
}

TEST_CASE("d=3 box-mueller grid at the 16/15 sizes is near-centered") {
    auto e16a = GreedySequence::build(Distribution1D::exponential(1.0), 16);
    auto e16b = e16a;
    auto u15a = GreedySequence::build(Distribution1D::uniform(0, 1), 15);
    auto u15b = u15a;
    std::vector<GreedySequence> es{e16a, e16b}, us{u15a, u15b};
    auto g = box_muller_grid(es, us, 3);
    CHECK(g.size() == 16LL * 15 * 16 * 15);
    double mean[3] = {0, 0, 0}, sum = 0.0;
    for (long long j = 0; j < g.size(); ++j) {
        for (int k = 0; k < 3; ++k) mean[k] += g.weights[j] * g.points[j * 3 + k];
        sum += g.weights[j];
    }
    CHECK(std::fabs(sum - 1.0) <= 1e-10);
    for (int k = 0; k < 3; ++k) CHECK(std::fabs(mean[k]) <= 0.1);
}

TEST_CASE("product gaussian grid transports tensor weights") {
    ProductGrid grid(std::vector<Distribution1D>(3, Distribution1D::normal(0, 1)));
    for (int i = 0; i < 6; ++i) grid.grow();
    auto g = product_gaussian_grid(grid);
    CHECK(g.size() == grid.total_size());
    auto w = grid.product_weights();
    for (long long j = 0; j < g.size(); ++j) CHECK(g.weights[j] == w[j]);
}
