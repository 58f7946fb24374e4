#include "greedyq/kernels.hpp"

#include <algorithm>
#include <cstdlib>
#include <cstring>
#include <stdexcept>

namespace greedyq::kernels {

namespace detail {

double weighted_sum_scalar(const double* w, const double* y, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += w[i] * y[i];
    return acc;
}

double anchored_box_max_scalar(const double* xi, std::size_t m, double step,
                               double lo, double hi) {
    double best = 0.0;
    for (std::size_t k = 0; k <= m; ++k) {
        double ks = static_cast<double>(k) * step;
        best = std::max(best, ks - lo * xi[k]);
        best = std::max(best, hi * xi[k + 1] - ks);
    }
    return best;
}

}  // namespace detail

namespace {

bool avx2_available() {
#if defined(__x86_64__) || defined(_M_X64)
    return __builtin_cpu_supports("avx2");
#else
    return false;
#endif
}

Backend resolve_backend() {
    if (const char* env = std::getenv("GREEDYQ_KERNELS")) {
        if (std::strcmp(env, "scalar") == 0) return Backend::Scalar;
        if (std::strcmp(env, "avx2") == 0) {
            if (!avx2_available())
                throw std::runtime_error("GREEDYQ_KERNELS=avx2 but cpu lacks avx2");
            return Backend::Avx2;
        }
        throw std::runtime_error("GREEDYQ_KERNELS must be scalar or avx2");
    }
    return avx2_available() ? Backend::Avx2 : Backend::Scalar;
}

Backend& backend_slot() {
    static Backend b = resolve_backend();
    return b;
}

}  // namespace

Backend active_backend() { return backend_slot(); }

const char* backend_name() {
    return backend_slot() == Backend::Avx2 ? "avx2" : "scalar";
}

void force_backend(Backend b) {
    if (b == Backend::Avx2 && !avx2_available())
        throw std::runtime_error("force_backend: cpu lacks avx2");
    backend_slot() = b;
}

double weighted_sum(std::span<const double> w, std::span<const double> y) {
    if (w.size() != y.size())
        throw std::invalid_argument("weighted_sum: size mismatch");
#if defined(__x86_64__) || defined(_M_X64)
    if (backend_slot() == Backend::Avx2)
        return detail::weighted_sum_avx2(w.data(), y.data(), w.size());
#endif
    return detail::weighted_sum_scalar(w.data(), y.data(), w.size());
}

double anchored_box_max(std::span<const double> xi, double step, double lo,
                        double hi) {
    if (xi.size() < 2)
        throw std::invalid_argument("anchored_box_max: need at least 2 entries");
    std::size_t m = xi.size() - 2;
#if defined(__x86_64__) || defined(_M_X64)
    if (backend_slot() == Backend::Avx2)
        return detail::anchored_box_max_avx2(xi.data(), m, step, lo, hi);
#endif
    return detail::anchored_box_max_scalar(xi.data(), m, step, lo, hi);
}

}  // namespace greedyq::kernels
