#include "greedyq/distributions.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace greedyq {

namespace {

constexpr double kInvSqrt2Pi = 0.39894228040143267794;  // 1/sqrt(2*pi)
constexpr double kSqrt2 = 1.41421356237309504880;

double parse_real(const std::string& s) {
    size_t pos = 0;
    double v;
    try {
        v = std::stod(s, &pos);
    } catch (const std::exception&) {
        throw std::invalid_argument("bad numeric value '" + s + "'");
    }
    if (pos != s.size()) throw std::invalid_argument("bad numeric value '" + s + "'");
    return v;
}

std::vector<double> parse_params(const std::string& body) {
    std::vector<double> out;
    std::stringstream ss(body);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(parse_real(tok));
    return out;
}

std::string fmt_real(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

double std_normal_pdf(double z) {
    return kInvSqrt2Pi * std::exp(-0.5 * z * z);
}

double std_normal_cdf(double z) {
    if (z == kInf) return 1.0;
    if (z == -kInf) return 0.0;
    return 0.5 * std::erfc(-z / kSqrt2);
}

// Acklam's rational approximation (|rel err| ~ 1.15e-9) followed by one
// Halley step against the erfc-based cdf, which brings the residual to a
// few ulps.
double std_normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) throw std::domain_error("quantile: p must lie in (0,1)");
    static const double a[6] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                -2.759285104469687e+02, 1.383577518672690e+02,
                                -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[5] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                -1.556989798598866e+02, 6.680131188771972e+01,
                                -1.328068155288572e+01};
    static const double c[6] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                -2.400758277161838e+00, -2.549732539343734e+00,
                                4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[4] = {7.784695709041462e-03, 3.224671290700398e-01,
                                2.445134137142996e+00, 3.754408661907416e+00};
    const double plow = 0.02425;
    double x;
    if (p < plow) {
        double q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (p <= 1.0 - plow) {
        double q = p - 0.5, r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        double q = std::sqrt(-2.0 * std::log1p(-p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    double e = std_normal_cdf(x) - p;
    double u = e / std_normal_pdf(x);
    x -= u / (1.0 + 0.5 * x * u);
    return x;
}

Distribution1D Distribution1D::normal(double mean, double stdev) {
    if (!(stdev > 0.0)) throw std::invalid_argument("normal: stdev must be > 0");
    return {DistKind::Normal, mean, stdev};
}

Distribution1D Distribution1D::uniform(double lo, double hi) {
    if (!(hi > lo)) throw std::invalid_argument("uniform: need hi > lo");
    return {DistKind::Uniform, lo, hi};
}

Distribution1D Distribution1D::exponential(double rate) {
    if (!(rate > 0.0)) throw std::invalid_argument("exponential: rate must be > 0");
    return {DistKind::Exponential, rate, 0.0};
}

Distribution1D Distribution1D::laplace(double location, double scale) {
    if (!(scale > 0.0)) throw std::invalid_argument("laplace: scale must be > 0");
    return {DistKind::Laplace, location, scale};
}

Distribution1D Distribution1D::parse(const std::string& spec) {
    std::string name = spec, body;
    if (auto colon = spec.find(':'); colon != std::string::npos) {
        name = spec.substr(0, colon);
        body = spec.substr(colon + 1);
    }
    auto params = parse_params(body);
    auto want = [&](size_t n) {
        if (params.size() != n)
            throw std::invalid_argument("distribution '" + name + "' expects " +
                                        std::to_string(n) + " parameters");
    };
    if (name == "normal") {
        if (params.empty()) return normal(0.0, 1.0);
        want(2);
        return normal(params[0], params[1]);
    }
    if (name == "uniform") {
        if (params.empty()) return uniform(0.0, 1.0);
        want(2);
        return uniform(params[0], params[1]);
    }
    if (name == "exp") {
        if (params.empty()) return exponential(1.0);
        want(1);
        return exponential(params[0]);
    }
    if (name == "laplace") {
        if (params.empty()) return laplace(0.0, 1.0);
        want(2);
        return laplace(params[0], params[1]);
    }
    throw std::invalid_argument("unknown distribution '" + name + "'");
}

std::string Distribution1D::spec_string() const {
    switch (kind_) {
        case DistKind::Normal: return "normal:" + fmt_real(a_) + "," + fmt_real(b_);
        case DistKind::Uniform: return "uniform:" + fmt_real(a_) + "," + fmt_real(b_);
        case DistKind::Exponential: return "exp:" + fmt_real(a_);
        case DistKind::Laplace: return "laplace:" + fmt_real(a_) + "," + fmt_real(b_);
    }
    return {};
}

double Distribution1D::pdf(double x) const {
    switch (kind_) {
        case DistKind::Normal: return std_normal_pdf((x - a_) / b_) / b_;
        case DistKind::Uniform: return (x >= a_ && x <= b_) ? 1.0 / (b_ - a_) : 0.0;
        case DistKind::Exponential: return x >= 0.0 ? a_ * std::exp(-a_ * x) : 0.0;
        case DistKind::Laplace: return std::exp(-std::abs(x - a_) / b_) / (2.0 * b_);
    }
    return 0.0;
}

double Distribution1D::cdf(double x) const {
    if (x == kInf) return 1.0;
    if (x == -kInf) return 0.0;
    switch (kind_) {
        case DistKind::Normal:
            return std_normal_cdf((x - a_) / b_);
        case DistKind::Uniform:
            if (x <= a_) return 0.0;
            if (x >= b_) return 1.0;
            return (x - a_) / (b_ - a_);
        case DistKind::Exponential:
            return x <= 0.0 ? 0.0 : -std::expm1(-a_ * x);
        case DistKind::Laplace:
            return x < a_ ? 0.5 * std::exp((x - a_) / b_)
                          : 1.0 - 0.5 * std::exp(-(x - a_) / b_);
    }
    return 0.0;
}

double Distribution1D::quantile(double p) const {
    if (!(p > 0.0 && p < 1.0)) throw std::domain_error("quantile: p must lie in (0,1)");
    switch (kind_) {
        case DistKind::Normal:
            return a_ + b_ * std_normal_quantile(p);
        case DistKind::Uniform:
            return a_ + p * (b_ - a_);
        case DistKind::Exponential:
            return -std::log1p(-p) / a_;
        case DistKind::Laplace:
            return p < 0.5 ? a_ + b_ * std::log(2.0 * p)
                           : a_ - b_ * std::log(2.0 * (1.0 - p));
    }
    return 0.0;
}

double Distribution1D::mean() const {
    switch (kind_) {
        case DistKind::Normal: return a_;
        case DistKind::Uniform: return 0.5 * (a_ + b_);
        case DistKind::Exponential: return 1.0 / a_;
        case DistKind::Laplace: return a_;
    }
    return 0.0;
}

double Distribution1D::variance() const {
    switch (kind_) {
        case DistKind::Normal: return b_ * b_;
        case DistKind::Uniform: return (b_ - a_) * (b_ - a_) / 12.0;
        case DistKind::Exponential: return 1.0 / (a_ * a_);
        case DistKind::Laplace: return 2.0 * b_ * b_;
    }
    return 0.0;
}

double Distribution1D::lr_median(int r) const {
    if (r == 2) return mean();
    if (r == 1) return median();
    throw std::domain_error("lr_median: only r in {1,2} is supported");
}

namespace {

// Exponential building block: integrals of y^k * rate * exp(-rate*y) over
// [u,v] subset of [0,inf), via the tail antiderivatives
//   T0 = e^{-ru}, T1 = e^{-ru}(u + 1/r), T2 = e^{-ru}(u^2 + 2u/r + 2/r^2).
struct ExpMoments {
    double m0, m1, m2;
};

ExpMoments exp_moments(double rate, double u, double v) {
    auto t0 = [&](double y) { return y == kInf ? 0.0 : std::exp(-rate * y); };
    auto t1 = [&](double y) {
        return y == kInf ? 0.0 : std::exp(-rate * y) * (y + 1.0 / rate);
    };
    auto t2 = [&](double y) {
        return y == kInf ? 0.0
                         : std::exp(-rate * y) * (y * y + 2.0 * y / rate + 2.0 / (rate * rate));
    };
    return {t0(u) - t0(v), t1(u) - t1(v), t2(u) - t2(v)};
}

// Integral of (y-t)^2 * rate * exp(-rate*y) over [u,v].
double exp_second_about(double rate, double t, double u, double v) {
    auto g = [&](double y) {
        if (y == kInf) return 0.0;
        double w = y - t;
        return std::exp(-rate * y) * (w * w + 2.0 * w / rate + 2.0 / (rate * rate));
    };
    return g(u) - g(v);
}

}  // namespace

Moments Distribution1D::partial_moments(Interval iv) const {
    if (!(iv.lo <= iv.hi)) throw std::invalid_argument("partial_moments: lo > hi");
    Moments out;
    switch (kind_) {
        case DistKind::Normal: {
            const double mu = a_, sig = b_;
            double alpha = (iv.lo - mu) / sig, beta = (iv.hi - mu) / sig;
            if (iv.lo == -kInf) alpha = -kInf;
            if (iv.hi == kInf) beta = kInf;
            double Fa = std_normal_cdf(alpha), Fb = std_normal_cdf(beta);
            double fa = std::isinf(alpha) ? 0.0 : std_normal_pdf(alpha);
            double fb = std::isinf(beta) ? 0.0 : std_normal_pdf(beta);
            double afa = std::isinf(alpha) ? 0.0 : alpha * fa;
            double bfb = std::isinf(beta) ? 0.0 : beta * fb;
            out.m0 = Fb - Fa;
            out.m1 = mu * out.m0 + sig * (fa - fb);
            out.m2 = (mu * mu + sig * sig) * out.m0 + 2.0 * mu * sig * (fa - fb) +
                     sig * sig * (afa - bfb);
            return out;
        }
        case DistKind::Uniform: {
            double lo = std::max(iv.lo, a_), hi = std::min(iv.hi, b_);
            if (lo >= hi) return out;
            double len = b_ - a_;
            out.m0 = (hi - lo) / len;
            out.m1 = (hi * hi - lo * lo) / (2.0 * len);
            out.m2 = (hi * hi * hi - lo * lo * lo) / (3.0 * len);
            return out;
        }
        case DistKind::Exponential: {
            double lo = std::max(iv.lo, 0.0), hi = iv.hi;
            if (lo >= hi) return out;
            auto em = exp_moments(a_, lo, hi);
            return {em.m0, em.m1, em.m2};
        }
        case DistKind::Laplace: {
            const double mu = a_, b = b_, rate = 1.0 / b;
            // Right half: x = mu + y, y >= 0.
            if (iv.hi > mu) {
                double u = std::max(iv.lo - mu, 0.0);
                double v = iv.hi == kInf ? kInf : iv.hi - mu;
                auto em = exp_moments(rate, u, v);
                out.m0 += 0.5 * em.m0;
                out.m1 += 0.5 * (mu * em.m0 + em.m1);
                out.m2 += 0.5 * (mu * mu * em.m0 + 2.0 * mu * em.m1 + em.m2);
            }
            // Left half: x = mu - y, y >= 0.
            if (iv.lo < mu) {
                double u = std::max(mu - iv.hi, 0.0);
                double v = iv.lo == -kInf ? kInf : mu - iv.lo;
                auto em = exp_moments(rate, u, v);
                out.m0 += 0.5 * em.m0;
                out.m1 += 0.5 * (mu * em.m0 - em.m1);
                out.m2 += 0.5 * (mu * mu * em.m0 - 2.0 * mu * em.m1 + em.m2);
            }
            return out;
        }
    }
    return out;
}

double Distribution1D::mass(Interval iv) const {
    if (!(iv.lo <= iv.hi)) throw std::invalid_argument("mass: lo > hi");
    double v = cdf(iv.hi) - cdf(iv.lo);
    return v > 0.0 ? v : 0.0;
}

double Distribution1D::second_moment_about(double c, Interval iv) const {
    if (!(iv.lo <= iv.hi)) throw std::invalid_argument("second_moment_about: lo > hi");
    switch (kind_) {
        case DistKind::Normal: {
            const double mu = a_, sig = b_;
            double alpha = (iv.lo - mu) / sig, beta = (iv.hi - mu) / sig;
            if (iv.lo == -kInf) alpha = -kInf;
            if (iv.hi == kInf) beta = kInf;
            double Fa = std_normal_cdf(alpha), Fb = std_normal_cdf(beta);
            double fa = std::isinf(alpha) ? 0.0 : std_normal_pdf(alpha);
            double fb = std::isinf(beta) ? 0.0 : std_normal_pdf(beta);
            double afa = std::isinf(alpha) ? 0.0 : alpha * fa;
            double bfb = std::isinf(beta) ? 0.0 : beta * fb;
            double m0 = Fb - Fa, t = mu - c;
            return t * t * m0 + 2.0 * t * sig * (fa - fb) + sig * sig * (m0 + afa - bfb);
        }
        case DistKind::Uniform: {
            double lo = std::max(iv.lo, a_), hi = std::min(iv.hi, b_);
            if (lo >= hi) return 0.0;
            double dl = lo - c, dh = hi - c;
            return (dh * dh * dh - dl * dl * dl) / (3.0 * (b_ - a_));
        }
        case DistKind::Exponential: {
            double lo = std::max(iv.lo, 0.0), hi = iv.hi;
            if (lo >= hi) return 0.0;
            return exp_second_about(a_, c, lo, hi);
        }
        case DistKind::Laplace: {
            const double mu = a_, rate = 1.0 / b_;
            double acc = 0.0;
            if (iv.hi > mu) {
                double u = std::max(iv.lo - mu, 0.0);
                double v = iv.hi == kInf ? kInf : iv.hi - mu;
                acc += 0.5 * exp_second_about(rate, c - mu, u, v);
            }
            if (iv.lo < mu) {
                double u = std::max(mu - iv.hi, 0.0);
                double v = iv.lo == -kInf ? kInf : mu - iv.lo;
                acc += 0.5 * exp_second_about(rate, mu - c, u, v);
            }
            return acc;
        }
    }
    return 0.0;
}

Interval Distribution1D::support() const {
    switch (kind_) {
        case DistKind::Normal: return {-kInf, kInf};
        case DistKind::Uniform: return {a_, b_};
        case DistKind::Exponential: return {0.0, kInf};
        case DistKind::Laplace: return {-kInf, kInf};
    }
    return {};
}

Interval Distribution1D::effective_support(double tail_mass) const {
    if (kind_ == DistKind::Uniform) return {a_, b_};
    return {quantile(tail_mass), quantile(1.0 - tail_mass)};
}

}  // namespace greedyq
