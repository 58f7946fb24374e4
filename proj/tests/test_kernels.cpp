#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "greedyq/kernels.hpp"

using namespace greedyq;
namespace k = greedyq::kernels;

namespace {

bool have_avx2() {
#if defined(__x86_64__) || defined(_M_X64)
    return __builtin_cpu_supports("avx2");
#else
    return false;
#endif
}

struct BackendGuard {
    k::Backend saved = k::active_backend();
    ~BackendGuard() { k::force_backend(saved); }
};

double box_max_reference(const std::vector<double>& xi, double step, double lo,
                         double hi) {
    double best = 0.0;
    for (size_t q = 0; q + 1 < xi.size(); ++q) {
        best = std::max(best, static_cast<double>(q) * step - lo * xi[q]);
        best = std::max(best, hi * xi[q + 1] - static_cast<double>(q) * step);
    }
    return best;
}

}  // namespace

TEST_CASE("backend name resolves") {
    std::string name = k::backend_name();
    CHECK((name == "scalar" || name == "avx2"));
}

TEST_CASE("weighted_sum basics") {
    BackendGuard guard;
    std::vector<double> w{0.25, 0.25, 0.5}, y{1.0, 2.0, 3.0};
    k::force_backend(k::Backend::Scalar);
    CHECK(k::weighted_sum(w, y) == doctest::Approx(2.25).epsilon(1e-15));
    CHECK(k::weighted_sum({}, {}) == 0.0);
    std::vector<double> bad{1.0};
    CHECK_THROWS(k::weighted_sum(w, bad));
}

TEST_CASE("weighted_sum avx2 path matches scalar to rounding") {
    if (!have_avx2()) return;
    BackendGuard guard;
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int n : {0, 1, 3, 4, 7, 8, 9, 31, 64, 100, 1001}) {
        std::vector<double> w(n), y(n);
        for (auto& v : w) v = u(rng);
        for (auto& v : y) v = u(rng);
        k::force_backend(k::Backend::Scalar);
        double a = k::weighted_sum(w, y);
        k::force_backend(k::Backend::Avx2);
        double b = k::weighted_sum(w, y);
        CHECK(std::fabs(a - b) <= 1e-13 * (1.0 + std::fabs(a)));
    }
}

TEST_CASE("anchored_box_max equals the reference loop, both backends bitwise") {
    BackendGuard guard;
    std::mt19937_64 rng(123);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 300; ++trial) {
        int m = static_cast<int>(rng() % 40);
        std::vector<double> xi(m + 2);
        xi.front() = 0.0;
        for (int i = 1; i <= m; ++i) xi[i] = u(rng);
        xi.back() = 1.0;
        std::sort(xi.begin(), xi.end());
        double step = 1.0 / (1.0 + static_cast<double>(rng() % 50));
        double lo = u(rng), hi = u(rng);

        double want = box_max_reference(xi, step, lo, hi);
        k::force_backend(k::Backend::Scalar);
        double s = k::anchored_box_max(xi, step, lo, hi);
        CHECK(s == want);
        if (have_avx2()) {
            k::force_backend(k::Backend::Avx2);
            double v = k::anchored_box_max(xi, step, lo, hi);
            CHECK(v == s);  // mul+sub only on both paths
        }
    }
}

TEST_CASE("force_backend rejects unavailable targets gracefully") {
    BackendGuard guard;
    if (!have_avx2()) {
        CHECK_THROWS(k::force_backend(k::Backend::Avx2));
    } else {
        k::force_backend(k::Backend::Avx2);
        CHECK(std::string(k::backend_name()) == "avx2");
    }
}
