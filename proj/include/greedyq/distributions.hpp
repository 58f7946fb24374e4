#pragma once

#include <cmath>
#include <limits>
#include <string>

namespace greedyq {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class DistKind { Normal, Uniform, Exponential, Laplace };

/// Integration range. Either bound may be infinite.
struct Interval {
    double lo = -kInf;
    double hi = kInf;
};

/// Raw moments of order 0, 1, 2 of P restricted to an interval.
struct Moments {
    double m0 = 0.0;
    double m1 = 0.0;
    double m2 = 0.0;
};

/// One-dimensional law with closed-form density, cdf, quantile and
/// truncated moments. Covers N(mu,sigma), U([lo,hi]), Exp(lambda) and
/// Laplace(mu,b). All members are pure; instances are immutable and safe
/// to share across threads.
class Distribution1D {
  public:
    static Distribution1D normal(double mean, double stdev);
    static Distribution1D uniform(double lo, double hi);
    static Distribution1D exponential(double rate);
    static Distribution1D laplace(double location, double scale);

    // Spec syntax: normal:mu,sigma | uniform:lo,hi | exp:lambda | laplace:mu,b.
    // A bare name selects the standard parameters (normal:0,1, uniform:0,1,
    // exp:1, laplace:0,1).
    static Distribution1D parse(const std::string& spec);
    std::string spec_string() const;

    DistKind kind() const { return kind_; }
    double param1() const { return a_; }
    double param2() const { return b_; }

    double pdf(double x) const;
    double cdf(double x) const;
    double quantile(double p) const;  // p in (0,1), else std::domain_error

    double mean() const;
    double variance() const;
    double median() const { return quantile(0.5); }
    double lr_median(int r) const;  // r in {1,2}: mean for r=2, median for r=1

    Moments partial_moments(Interval iv) const;
    double mass(Interval iv) const;  // m0 only
    // Integral of (xi - c)^2 over iv; formed about c to avoid the
    // cancellation of assembling it from raw moments.
    double second_moment_about(double c, Interval iv) const;

    Interval support() const;
    // Search region for the greedy build: [quantile(eps), quantile(1-eps)]
    // for unbounded laws, the support itself for the uniform law.
    Interval effective_support(double tail_mass = 1e-9) const;

    // Interior kink of the density, if any (the Laplace location).
    // Quadrature callers split integration ranges there.
    bool density_kink(double* where) const {
        if (kind_ != DistKind::Laplace) return false;
        *where = a_;
        return true;
    }

    bool operator==(const Distribution1D& o) const {
        return kind_ == o.kind_ && a_ == o.a_ && b_ == o.b_;
    }

  private:
    Distribution1D(DistKind k, double a, double b) : kind_(k), a_(a), b_(b) {}
    DistKind kind_;
    double a_;  // mean / lo / rate / location
    double b_;  // stdev / hi / unused / scale
};

// Standard normal helpers used throughout (and by the normal quantile).
double std_normal_pdf(double z);
double std_normal_cdf(double z);
double std_normal_quantile(double p);

}  // namespace greedyq
