#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "greedyq/discrepancy.hpp"
#include "greedyq/greedy1d.hpp"

using namespace greedyq;

namespace {

PointSet random_set(int d, int n, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    PointSet ps;
    ps.d = d;
    for (int i = 0; i < n * d; ++i) ps.xs.push_back(u(rng));
    return ps;
}

}  // namespace

TEST_CASE("one-dimensional formula") {
    PointSet single{1, {0.5}};
    CHECK(star_disc_1d(single) == doctest::Approx(0.5).epsilon(1e-15));

    PointSet centered{1, {}};
    for (int i = 1; i <= 10; ++i) centered.xs.push_back((2.0 * i - 1.0) / 20.0);
    CHECK(star_disc_1d(centered) == doctest::Approx(0.05).epsilon(1e-14));

    std::mt19937_64 rng(5);
    auto ps = random_set(1, 8, rng);
    CHECK(star_disc_1d(ps) == doctest::Approx(star_disc_bruteforce(ps)).epsilon(1e-15));
}

TEST_CASE("two-dimensional formula") {
    PointSet center{2, {0.5, 0.5}};
    CHECK(star_disc_2d(center) == doctest::Approx(0.75).epsilon(1e-14));

    std::mt19937_64 rng(6);
    for (int trial = 0; trial < 100; ++trial) {
        auto ps = random_set(2, 1 + static_cast<int>(rng() % 8), rng);
        CHECK(std::fabs(star_disc_2d(ps) - star_disc_bruteforce(ps)) <= 1e-12);
    }
}

TEST_CASE("constant-height lifts degenerate as the oracle says") {
    // Lifting a 1-D set to a constant second coordinate concentrates all
    // mass on one line, so the 2-D discrepancy is governed by the empty
    // band below it, not by the 1-D value. The brute-force oracle is the
    // arbiter here.
    std::mt19937_64 rng(7);
    PointSet one = random_set(1, 8, rng);
    PointSet lifted{2, {}};
    for (double x : one.xs) {
        lifted.xs.push_back(x);
        lifted.xs.push_back(1.0 - 1e-9);
    }
    double d2 = star_disc_2d(lifted);
    CHECK(std::fabs(d2 - star_disc_bruteforce(lifted)) <= 1e-12);
    CHECK(d2 >= 1.0 - 1e-9 - 1e-12);
}

TEST_CASE("three-dimensional formula") {
    PointSet center{3, {0.5, 0.5, 0.5}};
    CHECK(star_disc_3d(center) == doctest::Approx(0.875).epsilon(1e-14));

    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 100; ++trial) {
        auto ps = random_set(3, 1 + static_cast<int>(rng() % 8), rng);
        CHECK(std::fabs(star_disc_3d(ps) - star_disc_bruteforce(ps)) <= 1e-12);
    }

    // Degenerate duplicates on the far corner; the oracle is ground truth.
    PointSet dup{3, {1, 1, 1, 1, 1, 1}};
    CHECK(std::fabs(star_disc_3d(dup) - star_disc_bruteforce(dup)) <= 1e-12);
}

TEST_CASE("duplicate and tied coordinates match the oracle") {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int d : {2, 3}) {
        for (int trial = 0; trial < 50; ++trial) {
            // Draw coordinates from a tiny palette to force ties.
            double palette[3] = {0.25, 0.5, u(rng)};
            PointSet ps;
            ps.d = d;
            int n = 2 + static_cast<int>(rng() % 6);
            for (int i = 0; i < n * d; ++i) ps.xs.push_back(palette[rng() % 3]);
            CHECK(std::fabs(star_disc(ps) - star_disc_bruteforce(ps)) <= 1e-12);
        }
    }
}

TEST_CASE("permutation invariance") {
    std::mt19937_64 rng(10);
    for (int d : {2, 3}) {
        auto ps = random_set(d, 7, rng);
        double want = star_disc(ps);
        for (int shuffle = 0; shuffle < 5; ++shuffle) {
            std::vector<int> order(7);
            for (int i = 0; i < 7; ++i) order[i] = i;
            std::shuffle(order.begin(), order.end(), rng);
            PointSet perm;
            perm.d = d;
            for (int i : order)
                for (int k = 0; k < d; ++k) perm.xs.push_back(ps.coord(i, k));
            CHECK(star_disc(perm) == doctest::Approx(want).epsilon(1e-13));
        }
    }
}

TEST_CASE("brute force guard and 1-point case") {
    PointSet p{1, {0.3}};
    CHECK(star_disc_bruteforce(p) == doctest::Approx(0.7).epsilon(1e-15));
    PointSet big{1, std::vector<double>(13, 0.5)};
    CHECK_THROWS(star_disc_bruteforce(big));
    PointSet bad{1, {1.5}};
    CHECK_THROWS(star_disc_1d(bad));
}

TEST_CASE("e_1 is dominated by the star discrepancy for greedy U(0,1)") {
    auto n1 = GreedySequence::build(Distribution1D::uniform(0, 1), 1);
    auto [e1, d1] = quantization_error_vs_disc(n1);
    CHECK(e1 == doctest::Approx(0.25).epsilon(1e-9));
    CHECK(d1 == doctest::Approx(0.5).epsilon(1e-14));

    GreedySequence seq(Distribution1D::uniform(0, 1));
    for (int n = 2; n <= 128; ++n) {
        seq.grow_one();
        auto [e, dd] = quantization_error_vs_disc(seq);
        CHECK(e <= dd + 1e-12);
    }

    auto nrm = GreedySequence::build(Distribution1D::normal(0, 1), 4);
    CHECK_THROWS(quantization_error_vs_disc(nrm));
}

TEST_CASE("e_1 <= D_n^* also holds for random and radical-inverse sets") {
    auto u01 = Distribution1D::uniform(0, 1);
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    auto check_set = [&](std::vector<double> pts) {
        std::sort(pts.begin(), pts.end());
        double e1 = error_ls_pow(u01, pts, 1.0);
        PointSet ps{1, pts};
        CHECK(e1 <= star_disc_1d(ps) + 1e-12);
    };
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<double> pts(1 + rng() % 40);
        for (auto& v : pts) v = unif(rng);
        check_set(std::move(pts));
    }
    // Radical-inverse (base 2) prefixes.
    std::vector<double> vdc;
    for (int k = 1; k <= 64; ++k) {
        double v = 0.0, denom = 1.0;
        for (int m = k; m > 0; m /= 2) {
            denom *= 2;
            v += (m % 2) / denom;
        }
        vdc.push_back(v);
        check_set(vdc);
    }
}
