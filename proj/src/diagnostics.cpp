#include "greedyq/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "greedyq/quadrature.hpp"

namespace greedyq {

namespace {

// kappa_{d,delta,r} of the Pierce-type bound, d = 1, with the epsilon
// minimum taken on a 1e-3 grid.
double pierce_kappa(double r, double delta) {
    const double d = 1.0;
    double vd_term = 0.5;  // V_1^{-1/1}
    double rd_term = r;    // (r/d)^{1/d}
    double mix = std::pow(std::pow(delta / r, r / (r + delta)) +
                              std::pow(r / delta, delta / (r + delta)),
                          1.0 + delta / r);
    // integral of (|x| v 1)^(-d - d*delta/r) over R: 2 (1 + r/delta)
    double integ = 2.0 * (1.0 + r / delta);
    double best = kInf;
    for (int k = 1; k < 333; ++k) {
        double eps = 1e-3 * k;
        double phi = (std::pow(3.0, -r) - std::pow(eps, r)) * std::pow(eps, d);
        if (phi <= 0.0) continue;
        best = std::min(best, (1.0 + eps) / phi);
    }
    return vd_term * rd_term * mix * integ * best;
}

// sigma_s(P) = inf_a ||X - a||_s via golden-section over the effective
// support (the objective is convex in a for s >= 1).
double lr_pseudo_sigma(const Distribution1D& dist, double s) {
    Interval eff = dist.effective_support(1e-10);
    double lo = eff.lo, hi = eff.hi;
    auto obj = [&](double a) { return error_ls_pow(dist, std::span(&a, 1), s); };
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = hi - gr * (hi - lo), d = lo + gr * (hi - lo);
    double fc = obj(c), fd = obj(d);
    for (int it = 0; it < 200 && hi - lo > 1e-10 * (1.0 + std::fabs(lo)); ++it) {
        if (fc < fd) {
            hi = d; d = c; fd = fc;
            c = hi - gr * (hi - lo);
            fc = obj(c);
        } else {
            lo = c; c = d; fc = fd;
            d = lo + gr * (hi - lo);
            fd = obj(d);
        }
    }
    return std::pow(obj(0.5 * (lo + hi)), 1.0 / s);
}

// Walks the insertion order of a built sequence, handing the sorted
// prefix to `visit` at every level.
template <class Visit>
void walk_prefixes(const GreedySequence& seq, Visit&& visit) {
    std::vector<double> sorted;
    sorted.reserve(seq.size());
    for (int k = 0; k < seq.size(); ++k) {
        double x = seq.points()[k];
        sorted.insert(std::upper_bound(sorted.begin(), sorted.end(), x), x);
        visit(k + 1, std::span<const double>(sorted));
    }
}

RateProfile profile_impl(const Distribution1D& dist, double r, int N, double delta) {
    if (N < 2) throw std::invalid_argument("rate profile: N must be >= 2");
    GreedySequence seq = GreedySequence::build(dist, N);
    const double kappa = pierce_kappa(r, delta);
    const double sig = lr_pseudo_sigma(dist, r + delta);

    RateProfile out;
    out.r = r;
    out.rows.reserve(N - 1);
    walk_prefixes(seq, [&](int n, std::span<const double> sorted) {
        if (n < 2) return;
        double e = r == 2.0 ? std::sqrt(seq.error_sq_trace()[n - 1])
                            : std::pow(error_ls_pow(dist, sorted, r), 1.0 / r);
        out.rows.push_back({n, e, n * e, kappa * sig / (n - 1.0)});
    });
    return out;
}

}  // namespace

RateProfile rate_profile(const Distribution1D& dist, double r, int N) {
    if (!(r > 0.0)) throw std::domain_error("rate_profile: r must be > 0");
    return profile_impl(dist, r, N, 1.0);
}

RateProfile mismatch_profile(const Distribution1D& dist, double s, int N) {
    // Mismatch window for the quadratic build: s in [2, d+r) with r = 2,
    // d = 1. s = 2 reduces to the rate profile.
    if (!(s >= 2.0 && s < 3.0))
        throw std::domain_error("mismatch_profile: s must lie in [2, 3)");
    return profile_impl(dist, s, N, 1.0);
}

namespace {

// Quadrature range wide enough that f^{1/(1+p)} is below ~1e-16 outside.
Interval density_pow_range(const Distribution1D& dist, double q) {
    switch (dist.kind()) {
        case DistKind::Uniform:
            return dist.support();
        case DistKind::Normal: {
            double z = std::sqrt(80.0 / q);
            return {dist.param1() - z * dist.param2(), dist.param1() + z * dist.param2()};
        }
        case DistKind::Exponential:
            return {0.0, 40.0 / (dist.param1() * q)};
        case DistKind::Laplace: {
            double w = 40.0 * dist.param2() / q;
            return {dist.param1() - w, dist.param1() + w};
        }
    }
    return {};
}

}  // namespace

std::vector<double> limit_weights(const GreedySequence& seq, double p) {
    const auto& dist = seq.dist();
    const double q = 1.0 / (1.0 + p);  // d/(d+p), d = 1
    Interval range = density_pow_range(dist, q);
    auto froot = [&](double x) { return std::pow(dist.pdf(x), q); };
    double integral;
    if (double kink; dist.density_kink(&kink) && range.lo < kink && kink < range.hi) {
        integral = integrate_adaptive(froot, range.lo, kink, 0.5e-10) +
                   integrate_adaptive(froot, kink, range.hi, 0.5e-10);
    } else {
        integral = integrate_adaptive(froot, range.lo, range.hi, 1e-10);
    }
    const double n = seq.size();
    std::vector<double> out;
    out.reserve(seq.size());
    for (double a : seq.sorted_points())
        out.push_back(std::pow(dist.pdf(a), p / (1.0 + p)) * integral / n);
    return out;
}

double limit_weights_l1_distance(const GreedySequence& seq, double p) {
    auto pl = limit_weights(seq, p);
    const auto& w = seq.weights();
    double acc = 0.0;
    for (size_t i = 0; i < pl.size(); ++i) acc += std::fabs(w[i] - pl[i]);
    return acc;
}

double stationarity_gap(const GreedySequence& seq) {
    const auto& dist = seq.dist();
    const auto& pts = seq.sorted_points();
    double acc = 0.0;
    for (int i = 0; i < seq.size(); ++i) {
        Moments pm = dist.partial_moments({seq.cell_boundary(i), seq.cell_boundary(i + 1)});
        if (!(pm.m0 > 0.0)) continue;
        acc += std::fabs(pts[i] - pm.m1 / pm.m0);
    }
    return acc;
}

double quasi_stationarity_ratio(const GreedySequence& seq, int r, double rho) {
    if (r != 1 && r != 2) throw std::domain_error("quasi_stationarity_ratio: r in {1,2}");
    if (!(rho >= 0.0 && rho <= 1.0))
        throw std::domain_error("quasi_stationarity_ratio: rho in [0,1]");
    const auto& dist = seq.dist();
    const auto& pts = seq.sorted_points();
    const auto& w = seq.weights();
    double num = 0.0;
    for (int i = 0; i < seq.size(); ++i) {
        Moments pm = dist.partial_moments({seq.cell_boundary(i), seq.cell_boundary(i + 1)});
        if (!(pm.m0 > 0.0)) continue;
        double disp = std::fabs(pts[i] - pm.m1 / pm.m0);
        num += w[i] * (r == 1 ? disp : disp * disp);
    }
    if (r == 2) num = std::sqrt(num);
    double den = error_ls_pow(dist, pts, 1.0 + rho);
    return num / den;
}

double quantizer_distortion_sq(const Distribution1D& dist,
                               std::span<const double> sorted_pts) {
    const int n = static_cast<int>(sorted_pts.size());
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
        double bl = i == 0 ? -kInf : 0.5 * (sorted_pts[i - 1] + sorted_pts[i]);
        double br = i == n - 1 ? kInf : 0.5 * (sorted_pts[i] + sorted_pts[i + 1]);
        acc += dist.second_moment_about(sorted_pts[i], {bl, br});
    }
    return acc;
}

namespace {

// One Lloyd pass; returns the max point movement. Boundary cdf/m1 values
// are shared between adjacent cells.
double lloyd_sweep(const Distribution1D& dist, std::vector<double>& pts,
                   std::vector<double>& c0, std::vector<double>& c1) {
    const int n = static_cast<int>(pts.size());
    c0.resize(n + 1);
    c1.resize(n + 1);
    c0[0] = 0.0;
    c1[0] = 0.0;
    c0[n] = 1.0;
    c1[n] = dist.mean();
    for (int i = 1; i < n; ++i) {
        Moments pm = dist.partial_moments({-kInf, 0.5 * (pts[i - 1] + pts[i])});
        c0[i] = pm.m0;
        c1[i] = pm.m1;
    }
    double move = 0.0;
    for (int i = 0; i < n; ++i) {
        double mass = c0[i + 1] - c0[i];
        if (!(mass > 0.0)) continue;
        double m = (c1[i + 1] - c1[i]) / mass;
        move = std::max(move, std::fabs(m - pts[i]));
        pts[i] = m;
    }
    return move;
}

std::vector<double> lloyd_run(const Distribution1D& dist, std::vector<double> pts) {
    std::vector<double> c0, c1;
    double best_move = kInf;
    long long since_best = 0;
    for (long long it = 0; it < 2'000'000; ++it) {
        double move = lloyd_sweep(dist, pts, c0, c1);
        if (move < 1e-12) break;
        if (move < best_move) {
            best_move = move;
            since_best = 0;
        } else if (++since_best > 10'000 && move < 1e-10) {
            break;  // rounding floor reached
        }
    }
    return pts;
}

}  // namespace

std::vector<double> lloyd_optimal(const Distribution1D& dist, int n,
                                  std::span<const double> warm_start,
                                  int random_restarts, unsigned long long seed) {
    std::vector<std::vector<double>> starts;
    if (static_cast<int>(warm_start.size()) == n)
        starts.emplace_back(warm_start.begin(), warm_start.end());
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(1e-6, 1.0 - 1e-6);
    const int extra = std::max(random_restarts, starts.empty() ? 1 : 0);
    for (int r = 0; r < extra; ++r) {
        std::vector<double> s(n);
        for (auto& v : s) v = dist.quantile(unit(rng));
        starts.push_back(std::move(s));
    }
    std::vector<double> best;
    double best_d = kInf;
    for (auto& s : starts) {
        std::sort(s.begin(), s.end());
        auto out = lloyd_run(dist, std::move(s));
        double d = quantizer_distortion_sq(dist, out);
        if (d < best_d) {
            best_d = d;
            best = std::move(out);
        }
    }
    return best;
}

bool weights_unimodal(std::span<const double> w) {
    if (w.empty()) return true;
    double tol = 1e-12 * *std::max_element(w.begin(), w.end());
    size_t i = 0;
    while (i + 1 < w.size() && w[i + 1] >= w[i] - tol) ++i;  // climb (ties ok)
    while (i + 1 < w.size() && w[i + 1] <= w[i] + tol) ++i;  // descend (ties ok)
    return i + 1 == w.size();
}

std::vector<SuboptimalRow> suboptimal_check(const GreedySequence& seq,
                                            std::span<const int> checkpoints,
                                            int lloyd_max_n) {
    std::vector<int> todo(checkpoints.begin(), checkpoints.end());
    std::sort(todo.begin(), todo.end());
    std::vector<SuboptimalRow> out;
    size_t next = 0;
    walk_prefixes(seq, [&](int n, std::span<const double> sorted) {
        while (next < todo.size() && todo[next] == n) {
            SuboptimalRow row;
            row.n = n;
            auto w = voronoi_weights(seq.dist(), sorted);
            row.unimodal = weights_unimodal(w);
            if (n <= lloyd_max_n) {
                int restarts = n <= 63 ? 5 : 0;
                auto opt = lloyd_optimal(seq.dist(), n, sorted, restarts);
                double e_opt = std::sqrt(quantizer_distortion_sq(seq.dist(), opt));
                row.ratio = std::sqrt(seq.error_sq_trace()[n - 1]) / e_opt;
            }
            out.push_back(row);
            ++next;
        }
    });
    return out;
}

std::vector<long long> uniform_suboptimal_checkpoints(long long alpha0, int count) {
    std::vector<long long> out{alpha0};
    long long a = alpha0;
    for (int n = 1; n <= count; ++n) {
        switch (n % 3) {
            case 1: a = 2 * a + 1; break;
            case 2: a = 2 * (a - 2) + 1; break;
            default: a = 2 * (a + 2) + 1; break;
        }
        out.push_back(a);
    }
    return out;
}

}  // namespace greedyq
