#include "greedyq/pricing.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "greedyq/distributions.hpp"

namespace greedyq {

void BsParams::validate() const {
    const int d = dim();
    if (d < 1) throw std::invalid_argument("BsParams: no assets");
    if (static_cast<int>(vol.size()) != d || static_cast<int>(basket_weights.size()) != d ||
        static_cast<int>(corr.size()) != d * d)
        throw std::invalid_argument("BsParams: inconsistent dimensions");
    if (!(strike >= 0.0) || !(maturity > 0.0))
        throw std::invalid_argument("BsParams: bad strike or maturity");
    double wsum = 0.0;
    for (int i = 0; i < d; ++i) {
        if (!(spot[i] > 0.0) || !(vol[i] > 0.0) || !(basket_weights[i] > 0.0))
            throw std::invalid_argument("BsParams: spots, vols, weights must be > 0");
        wsum += basket_weights[i];
        if (corr[i * d + i] != 1.0)
            throw std::invalid_argument("BsParams: corr diagonal must be 1");
        for (int j = 0; j < d; ++j)
            if (corr[i * d + j] != corr[j * d + i])
                throw std::invalid_argument("BsParams: corr must be symmetric");
    }
    if (std::fabs(wsum - 1.0) > 1e-12)
        throw std::invalid_argument("BsParams: basket weights must sum to 1");
    cholesky_lower(corr, d);  // existence check
}

BsParams BsParams::call_1d() {
    BsParams p;
    p.spot = {10.0};
    p.strike = 9.0;
    p.rate = 0.06;
    p.vol = {0.1};
    p.maturity = 1.0;
    p.basket_weights = {1.0};
    p.corr = {1.0};
    return p;
}

BsParams BsParams::basket_3d() {
    BsParams p;
    p.spot = {100.0, 100.0, 100.0};
    p.strike = 100.0;
    p.rate = 0.1;
    p.vol = {0.3, 0.3, 0.3};
    p.maturity = 1.0;
    p.basket_weights = {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};
    p.corr = {1.0, 0.5, 0.5, 0.5, 1.0, 0.0, 0.5, 0.0, 1.0};
    return p;
}

double bs_call_closed_form(double S0, double K, double r, double sigma, double T) {
    if (!(S0 > 0.0) || !(sigma > 0.0) || !(T > 0.0))
        throw std::invalid_argument("bs_call_closed_form: S0, sigma, T must be > 0");
    if (K <= 0.0) return S0;  // forward limit
    double sq = sigma * std::sqrt(T);
    double d1 = (std::log(S0 / K) + (r + 0.5 * sigma * sigma) * T) / sq;
    double d2 = d1 - sq;
    return S0 * std_normal_cdf(d1) - K * std::exp(-r * T) * std_normal_cdf(d2);
}

std::vector<double> cholesky_lower(std::span<const double> a, int d) {
    std::vector<double> L(static_cast<size_t>(d) * d, 0.0);
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j <= i; ++j) {
            double s = a[i * d + j];
            for (int k = 0; k < j; ++k) s -= L[i * d + k] * L[j * d + k];
            if (i == j) {
                if (!(s > 0.0))
                    throw std::invalid_argument("cholesky_lower: matrix not positive definite");
                L[i * d + i] = std::sqrt(s);
            } else {
                L[i * d + j] = s / L[j * d + j];
            }
        }
    }
    return L;
}

double price_call_1d(std::span<const double> z_points, std::span<const double> weights,
                     const BsParams& p) {
    if (p.dim() != 1) throw std::invalid_argument("price_call_1d: needs 1-D params");
    if (z_points.size() != weights.size())
        throw std::invalid_argument("price_call_1d: size mismatch");
    const double sig = p.vol[0], T = p.maturity;
    const double fwd = p.spot[0] * std::exp((p.rate - 0.5 * sig * sig) * T);
    const double sq = sig * std::sqrt(T);
    const double df = std::exp(-p.rate * T);
    double acc = 0.0;
    for (size_t i = 0; i < z_points.size(); ++i) {
        double xt = fwd * std::exp(sq * z_points[i]);
        acc += weights[i] * df * std::max(xt - p.strike, 0.0);
    }
    return acc;
}

std::vector<double> vdc_points(int n, int base) {
    if (n < 1 || base < 2) throw std::invalid_argument("vdc_points: n >= 1, base >= 2");
    std::vector<double> out;
    out.reserve(n);
    for (int k = 1; k <= n; ++k) {
        double v = 0.0, denom = 1.0;
        for (int m = k; m > 0; m /= base) {
            denom *= base;
            v += (m % base) / denom;
        }
        out.push_back(v);
    }
    return out;
}

BasketPayoff::BasketPayoff(const BsParams& p) : d_(p.dim()) {
    p.validate();
    strike_ = p.strike;
    df_ = std::exp(-p.rate * p.maturity);
    auto L = cholesky_lower(p.corr, d_);
    drifted_spot_.resize(d_);
    diffusion_.assign(static_cast<size_t>(d_) * d_, 0.0);
    double sqT = std::sqrt(p.maturity);
    for (int i = 0; i < d_; ++i) {
        drifted_spot_[i] =
            p.spot[i] * std::exp((p.rate - 0.5 * p.vol[i] * p.vol[i]) * p.maturity);
        for (int j = 0; j < d_; ++j) diffusion_[i * d_ + j] = sqT * p.vol[i] * L[i * d_ + j];
    }
    weights_ = p.basket_weights;
}

double BasketPayoff::operator()(std::span<const double> z) const {
    if (static_cast<int>(z.size()) != d_)
        throw std::invalid_argument("BasketPayoff: z dimension mismatch");
    double basket = 0.0;
    for (int i = 0; i < d_; ++i) {
        double e = 0.0;
        for (int j = 0; j < d_; ++j) e += diffusion_[i * d_ + j] * z[j];
        basket += weights_[i] * drifted_spot_[i] * std::exp(e);
    }
    return df_ * std::max(basket - strike_, 0.0);
}

double price_basket_quant(const GaussianGrid& grid, const BsParams& p) {
    if (grid.d != p.dim())
        throw std::invalid_argument("price_basket_quant: dimension mismatch");
    BasketPayoff payoff(p);
    double acc = 0.0;
    const long long n = grid.size();
    for (long long j = 0; j < n; ++j) {
        std::span<const double> z(grid.points.data() + j * grid.d, grid.d);
        acc += grid.weights[static_cast<size_t>(j)] * payoff(z);
    }
    return acc;
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Batched estimator of E[g(Z)] with Z iid N(0,1)^d: batch b draws from a
// generator seeded splitmix64(seed ^ b), so a parallel run with any batch
// schedule reproduces the serial reduction order.
template <class G>
McResult mc_mean(int d, long long n, std::uint64_t seed, G&& g) {
    constexpr long long kBatch = 1 << 16;
    double sum = 0.0, sumsq = 0.0;
    std::vector<double> z(d);
    long long done = 0;
    for (std::uint64_t b = 0; done < n; ++b) {
        std::mt19937_64 rng(splitmix64(seed ^ b));
        long long m = std::min(kBatch, n - done);
        double bs = 0.0, bs2 = 0.0;
        for (long long i = 0; i < m; ++i) {
            for (int k = 0; k < d; ++k) {
                double u = (static_cast<double>(rng() >> 11) + 0.5) * 0x1p-53;
                z[k] = std_normal_quantile(u);
            }
            double v = g(std::span<const double>(z));
            bs += v;
            bs2 += v * v;
        }
        sum += bs;
        sumsq += bs2;
        done += m;
    }
    double mean = sum / n;
    double var = std::max(sumsq / n - mean * mean, 0.0);
    return {mean, std::sqrt(var / n)};
}

}  // namespace

double basket_cv_closed_form(const BsParams& p) {
    const int d = p.dim();
    // exp(sum w_i log X_i) is lognormal: spot prod X0^w_i adjusted by
    // -(1/2)T(sum w_i sigma_i^2 - w' Sigma w), vol sqrt(w' Sigma w).
    double wssw = 0.0, wss = 0.0, logspot = 0.0;
    for (int i = 0; i < d; ++i) {
        wss += p.basket_weights[i] * p.vol[i] * p.vol[i];
        logspot += p.basket_weights[i] * std::log(p.spot[i]);
        for (int j = 0; j < d; ++j)
            wssw += p.basket_weights[i] * p.basket_weights[j] * p.vol[i] * p.vol[j] *
                    p.corr[i * d + j];
    }
    double s0 = std::exp(logspot - 0.5 * p.maturity * (wss - wssw));
    return bs_call_closed_form(s0, p.strike, p.rate, std::sqrt(wssw), p.maturity);
}

McResult price_basket_mc(const BsParams& p, long long n_samples, std::uint64_t seed) {
    if (n_samples < 1) throw std::invalid_argument("price_basket_mc: need samples");
    BasketPayoff payoff(p);
    return mc_mean(p.dim(), n_samples, seed, payoff);
}

McResult price_basket_mc_cv(const BsParams& p, long long n_samples, std::uint64_t seed) {
    if (n_samples < 1) throw std::invalid_argument("price_basket_mc_cv: need samples");
    BasketPayoff payoff(p);
    const int d = p.dim();
    auto L = cholesky_lower(p.corr, d);
    const double df = std::exp(-p.rate * p.maturity);
    const double sqT = std::sqrt(p.maturity);
    std::vector<double> wlog_drift(d);
    for (int i = 0; i < d; ++i)
        wlog_drift[i] = std::log(p.spot[i]) + (p.rate - 0.5 * p.vol[i] * p.vol[i]) * p.maturity;

    auto diff = [&](std::span<const double> z) {
        double h = payoff(z);
        double lg = 0.0;
        for (int i = 0; i < d; ++i) {
            double e = 0.0;
            for (int j = 0; j < d; ++j) e += L[i * d + j] * z[j];
            lg += p.basket_weights[i] * (wlog_drift[i] + sqT * p.vol[i] * e);
        }
        double k = df * std::max(std::exp(lg) - p.strike, 0.0);
        return h - k;
    };
    McResult r = mc_mean(d, n_samples, seed, diff);
    r.price += basket_cv_closed_form(p);
    return r;
}

}  // namespace greedyq
