#pragma once

#include <cstddef>
#include <span>

// Data-parallel inner loops with scalar reference implementations and an
// AVX2 variant picked at runtime. The scalar path is the semantic
// reference; the vector paths are equivalence-tested against it.
// Selection: GREEDYQ_KERNELS=scalar|avx2 in the environment wins, otherwise
// cpuid. Resolution happens once, on first use.

namespace greedyq::kernels {

enum class Backend { Scalar, Avx2 };

Backend active_backend();
const char* backend_name();
// Test hook. Requesting Avx2 on a machine without it throws.
void force_backend(Backend b);

// Dot product sum_i w[i]*y[i]. Vector path reassociates the sum, so
// agreement with scalar is to rounding, not bitwise.
double weighted_sum(std::span<const double> w, std::span<const double> y);

// max over k = 0..m of max(k*step - lo*xi[k], hi*xi[k+1] - k*step), floored
// at 0, where xi has m+2 entries. This is the inner loop of the exact
// 2-D/3-D star-discrepancy formulas (the floor is free there: xi[0] = 0, so
// the k = 0 term is never negative). Both paths use mul+sub only, so they
// agree bitwise.
double anchored_box_max(std::span<const double> xi, double step, double lo,
                        double hi);

namespace detail {
double weighted_sum_scalar(const double* w, const double* y, std::size_t n);
double anchored_box_max_scalar(const double* xi, std::size_t m, double step,
                               double lo, double hi);
#if defined(__x86_64__) || defined(_M_X64)
double weighted_sum_avx2(const double* w, const double* y, std::size_t n);
double anchored_box_max_avx2(const double* xi, std::size_t m, double step,
                             double lo, double hi);
#endif
}  // namespace detail

}  // namespace greedyq::kernels
