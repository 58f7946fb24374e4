#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "greedyq/product_grid.hpp"

namespace greedyq {

/// Black-Scholes market data for the 1-D call and the d-asset basket.
/// corr is row-major d*d, unit diagonal, and must admit a Cholesky factor.
struct BsParams {
    std::vector<double> spot;
    double strike = 0.0;
    double rate = 0.0;
    std::vector<double> vol;
    double maturity = 0.0;
    std::vector<double> basket_weights;  // positive, summing to 1
    std::vector<double> corr;

    int dim() const { return static_cast<int>(spot.size()); }
    void validate() const;

    static BsParams call_1d();    // T=1, K=9, x0=10, r=0.06, sigma=0.1
    static BsParams basket_3d();  // r=0.1, sigma=0.3, X0=100, T=1, K=100,
                                  // w=1/3, corr12=corr13=0.5, corr23=0
};

double bs_call_closed_form(double S0, double K, double r, double sigma, double T);

/// Lower Cholesky factor of a d*d SPD matrix; throws if not positive.
std::vector<double> cholesky_lower(std::span<const double> a, int d);

/// Discounted European call priced on Z-space abscissae:
/// sum_i w_i e^{-rT} (x0 exp((r - sigma^2/2)T + sigma sqrt(T) z_i) - K)_+.
double price_call_1d(std::span<const double> z_points, std::span<const double> weights,
                     const BsParams& p);

/// Radical-inverse (Van der Corput) sequence, k = 1..n.
std::vector<double> vdc_points(int n, int base = 2);

/// Payoff of the correlated basket as a function of iid standard normals,
/// discounted: z -> e^{-rT} (sum_i w_i X_i(z) - K)_+ with
/// X_i = X_{0,i} exp((r - sigma_i^2/2)T + sqrt(T) sum_j sigma_i L_ij z_j).
class BasketPayoff {
  public:
    explicit BasketPayoff(const BsParams& p);
    double operator()(std::span<const double> z) const;
    int dim() const { return d_; }

  private:
    int d_;
    double strike_ = 0.0, df_ = 1.0;
    std::vector<double> drifted_spot_;  // X0_i * exp((r - sigma_i^2/2) T)
    std::vector<double> diffusion_;     // sqrt(T) * sigma_i * L_ij, row-major
    std::vector<double> weights_;
};

/// Basket price under a Gaussian quantization grid (full cubature sum).
double price_basket_quant(const GaussianGrid& grid, const BsParams& p);

struct McResult {
    double price = 0.0;
    double std_error = 0.0;
};

/// Plain Monte Carlo (inverse-cdf normals from a seeded 64-bit generator;
/// same seed, same platform -> same estimate bit for bit).
McResult price_basket_mc(const BsParams& p, long long n_samples, std::uint64_t seed);

/// Monte Carlo with the geometric-basket control variate, whose
/// discounted expectation has a Black-Scholes closed form.
McResult price_basket_mc_cv(const BsParams& p, long long n_samples, std::uint64_t seed);

/// Closed-form discounted expectation of the control variate.
double basket_cv_closed_form(const BsParams& p);

}  // namespace greedyq
