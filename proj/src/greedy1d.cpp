#include "greedyq/greedy1d.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>
#include <stdexcept>

#include <json.hpp>

#include "greedyq/quadrature.hpp"

namespace greedyq {

namespace {

// Leftmost-wins band for gain ties. Candidates sit on representable
// fixed points, so mathematically tied gaps (mirror or equal-width
// intervals) compute gains agreeing to a few ulps; the band sits above
// that and far below any genuine gain separation at desk scales.
constexpr double kTieRel = 1e-9;
constexpr int kSeeds = 64;
constexpr int kMaxFixedPoint = 300;

// Inertia of the gap (L, R) between consecutive sorted points, mass left
// of the midpoint charged to L and right of it to R. Tail gaps have one
// infinite end and a single term.
double gap_inertia(const Distribution1D& dist, double L, double R) {
    if (L == -kInf) return dist.second_moment_about(R, {-kInf, R});
    if (R == kInf) return dist.second_moment_about(L, {L, kInf});
    double m = 0.5 * (L + R);
    return dist.second_moment_about(L, {L, m}) + dist.second_moment_about(R, {m, R});
}

// Squared-error decrease from inserting x into the gap (L, R), with
// gap_old the gap's current inertia.
double insertion_gain(const Distribution1D& dist, double L, double R, double x,
                      double gap_old) {
    double ml = L == -kInf ? -kInf : 0.5 * (L + x);
    double mr = R == kInf ? kInf : 0.5 * (x + R);
    double g_new = dist.second_moment_about(x, {ml, mr});
    if (L != -kInf) g_new += dist.second_moment_about(L, {L, ml});
    if (R != kInf) g_new += dist.second_moment_about(R, {mr, R});
    return gap_old - g_new;
}

}  // namespace

LocalCandidate local_candidate(const Distribution1D& dist, double left, double right) {
    if (!(left < right)) throw std::invalid_argument("local_candidate: need left < right");
    Interval eff = dist.effective_support();
    double cl = std::max(left, eff.lo);
    double cr = std::min(right, eff.hi);
    if (dist.mass({left, right}) <= 0.0) {
        double x = cl < cr ? 0.5 * (cl + cr) : 0.5 * (left + right);
        if (!std::isfinite(x)) x = left == -kInf ? right - 1.0 : left + 1.0;
        return {x, 0.0};
    }
    if (!(cl < cr)) {
        // Gap lies beyond the effective support; its mass is negligible but
        // a candidate strictly inside (left, right) is still required.
        double delta = 1e-3 * (eff.hi - eff.lo);
        if (right <= eff.lo) {
            cr = right;
            cl = left == -kInf ? right - delta : 0.5 * (left + right);
        } else {
            cl = left;
            cr = right == kInf ? left + delta : 0.5 * (left + right);
        }
    }

    const double gap_old = gap_inertia(dist, left, right);
    double best_x = 0.5 * (cl + cr);
    double best_gain = -kInf;
    for (int j = 0; j < kSeeds; ++j) {
        double x = cl + (j + 0.5) * (cr - cl) / kSeeds;
        double g = insertion_gain(dist, left, right, x, gap_old);
        if (g > best_gain) {
            best_gain = g;
            best_x = x;
        }
    }

    // One-point Lloyd: x is optimal within the gap only at the fixed point
    // x = E[X | X in ((left+x)/2, (x+right)/2)]. The iteration is driven to
    // the representable fixed point (bit-stable or a 2-cycle), so candidates
    // of mathematically tied gaps agree to rounding and the tie band below
    // can stay tight.
    double x = best_x;
    double prev = kInf;
    for (int it = 0; it < kMaxFixedPoint; ++it) {
        double ml = left == -kInf ? -kInf : 0.5 * (left + x);
        double mr = right == kInf ? kInf : 0.5 * (x + right);
        Moments pm = dist.partial_moments({ml, mr});
        if (!(pm.m0 > 0.0)) break;
        double xn = pm.m1 / pm.m0;
        if (!(xn > left && xn < right)) break;
        if (xn == x || xn == prev) {
            x = xn;
            break;
        }
        prev = x;
        x = xn;
    }
    double g = insertion_gain(dist, left, right, x, gap_old);
    if (g < best_gain) {  // refinement must not lose to its own seed
        x = best_x;
        g = best_gain;
    }
    return {x, std::max(g, 0.0)};
}

GreedySequence::GreedySequence(Distribution1D dist) : dist_(dist) {
    double a1 = dist_.lr_median(2);
    points_ = {a1};
    sorted_ = {a1};
    sorted_index_ = {0};
    weights_ = {1.0};
    inertias_ = {gap_inertia(dist_, -kInf, a1), gap_inertia(dist_, a1, kInf)};
    trace_ = {inertias_[0] + inertias_[1]};
    cand_.resize(2);
    refresh_candidate(0);
    refresh_candidate(1);
}

GreedySequence GreedySequence::build(Distribution1D dist, int n) {
    if (n < 1) throw std::invalid_argument("build: n must be >= 1");
    GreedySequence seq(std::move(dist));
    for (int k = 1; k < n; ++k) seq.grow_one();
    return seq;
}

void GreedySequence::refresh_candidate(int gap) {
    const int n = size();
    double L = gap > 0 ? sorted_[gap - 1] : -kInf;
    double R = gap < n ? sorted_[gap] : kInf;
    cand_[gap] = local_candidate(dist_, L, R);
}

int GreedySequence::best_gap() const {
    int best = 0;
    for (int g = 1; g < static_cast<int>(cand_.size()); ++g)
        if (cand_[g].gain > cand_[best].gain * (1.0 + kTieRel)) best = g;
    return best;
}

double GreedySequence::peek_next_gain() const { return cand_[best_gap()].gain; }

void GreedySequence::grow_one() {
    int g = best_gap();
    insert_given_point(g, cand_[g].x, cand_[g].gain);
}

void GreedySequence::insert_given_point(int gap, double x, double search_gain) {
    const int n = size();
    const bool has_left = gap > 0;
    const bool has_right = gap < n;
    const double lx = has_left ? sorted_[gap - 1] : -kInf;
    const double rx = has_right ? sorted_[gap] : kInf;
    if (!(x > lx && x < rx))
        throw std::logic_error("insert_given_point: point not inside its gap");

    InsertionStep step;
    step.i0 = gap;
    step.left_idx = has_left ? sorted_index_[gap - 1] : -1;
    step.right_idx = has_right ? sorted_index_[gap] : -1;
    const double a_mh = has_left ? 0.5 * (x + lx) : -kInf;
    const double a_ph = has_right ? 0.5 * (x + rx) : kInf;
    double a_mil;
    if (has_left && has_right) a_mil = 0.5 * (lx + rx);
    else a_mil = has_left ? kInf : -kInf;
    step.p_minus = has_left ? dist_.mass({a_mh, a_mil}) : 0.0;
    step.p_plus = has_right ? dist_.mass({a_mil, a_ph}) : 0.0;

    // The new cell's mass comes out of the two neighbour cells.
    weights_.insert(weights_.begin() + gap, step.p_minus + step.p_plus);
    if (has_left) weights_[gap - 1] -= step.p_minus;
    if (has_right) weights_[gap + 1] -= step.p_plus;

    // Gap `gap` splits in two; everything else is untouched.
    const double gap_old = inertias_[gap];
    const double inertia_left = gap_inertia(dist_, lx == -kInf ? -kInf : lx, x);
    const double inertia_right = gap_inertia(dist_, x, rx == kInf ? kInf : rx);
    inertias_[gap] = inertia_left;
    inertias_.insert(inertias_.begin() + gap + 1, inertia_right);

    sorted_.insert(sorted_.begin() + gap, x);
    sorted_index_.insert(sorted_index_.begin() + gap, static_cast<int>(points_.size()));
    points_.push_back(x);

    cand_.insert(cand_.begin() + gap + 1, LocalCandidate{});
    refresh_candidate(gap);
    refresh_candidate(gap + 1);

    step.gain = search_gain >= 0.0 ? search_gain : gap_old - inertia_left - inertia_right;
    steps_.push_back(step);
    trace_.push_back(trace_.back() - (gap_old - inertia_left - inertia_right));
}

double GreedySequence::error_l2() const { return std::sqrt(error_sq()); }

double GreedySequence::cell_boundary(int i) const {
    const int n = size();
    if (i <= 0) return -kInf;
    if (i >= n) return kInf;
    return 0.5 * (sorted_[i - 1] + sorted_[i]);
}

namespace {

// Upper bound for the tail integral of |xi - a|^s dP beyond the clip
// point t (right side; the left side mirrors). Derivations use
// (u+v)^s <= 2^s (u^s + v^s) and, for the normal, a Mills-ratio bound.
double tail_pow_bound(const Distribution1D& dist, double a, double s, double t,
                      bool right) {
    double two_s = std::pow(2.0, s);
    switch (dist.kind()) {
        case DistKind::Normal: {
            double mu = dist.param1(), sig = dist.param2();
            double z = right ? (t - mu) / sig : (mu - t) / sig;
            if (z <= 0.0) return kInf;  // clip point not in the tail
            double d = std::fabs(t - a);
            return std_normal_pdf(z) * two_s *
                   (std::pow(d, s) / z +
                    std::pow(sig, s) * std::tgamma(s + 1.0) / std::pow(z, s + 1.0));
        }
        case DistKind::Exponential: {
            if (!right) return 0.0;
            double lam = dist.param1();
            double d = std::fabs(t - a);
            return std::exp(-lam * t) * two_s *
                   (std::pow(d, s) + std::tgamma(s + 1.0) / std::pow(lam, s));
        }
        case DistKind::Laplace: {
            double mu = dist.param1(), b = dist.param2();
            double y = right ? t - mu : mu - t;
            if (y <= 0.0) return kInf;
            double d = std::fabs(t - a);
            return 0.5 * std::exp(-y / b) * two_s *
                   (std::pow(d, s) + std::tgamma(s + 1.0) * std::pow(b, s));
        }
        case DistKind::Uniform:
            return 0.0;
    }
    return 0.0;
}

// Integral of |xi - a|^s over [lo, hi] under dist, split at the |.|^s kink
// at a and at any density kink, adaptive GK to 1e-10 absolute per cell.
double cell_pow_integral(const Distribution1D& dist, double a, double s, double lo,
                         double hi) {
    auto f = [&](double u) { return std::pow(std::fabs(u - a), s) * dist.pdf(u); };
    double cuts[4] = {lo, hi, hi, hi};
    int ncuts = 2;
    if (lo < a && a < hi) cuts[ncuts++] = a;
    if (double kink; dist.density_kink(&kink) && lo < kink && kink < hi)
        cuts[ncuts++] = kink;
    std::sort(cuts, cuts + ncuts);
    double acc = 0.0;
    for (int i = 0; i + 1 < ncuts; ++i)
        acc += integrate_adaptive(f, cuts[i], cuts[i + 1], 1e-10 / (ncuts - 1));
    return acc;
}

}  // namespace

double error_ls_pow(const Distribution1D& dist, std::span<const double> sorted_pts,
                    double s) {
    const int n = static_cast<int>(sorted_pts.size());
    if (n == 0) throw std::invalid_argument("error_ls_pow: empty grid");
    Interval sup = dist.support();
    // End cells are clipped here; the remainder beyond is bounded
    // analytically and added.
    double lo_clip = sup.lo == -kInf ? dist.quantile(1e-12) : sup.lo;
    double hi_clip = sup.hi == kInf ? dist.quantile(1.0 - 1e-12) : sup.hi;

    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
        double bl = i == 0 ? lo_clip : 0.5 * (sorted_pts[i - 1] + sorted_pts[i]);
        double br = i == n - 1 ? hi_clip : 0.5 * (sorted_pts[i] + sorted_pts[i + 1]);
        bl = std::max(bl, lo_clip);
        br = std::min(br, hi_clip);
        if (bl < br) acc += cell_pow_integral(dist, sorted_pts[i], s, bl, br);
    }
    if (sup.lo == -kInf) acc += tail_pow_bound(dist, sorted_pts[0], s, lo_clip, false);
    if (sup.hi == kInf) acc += tail_pow_bound(dist, sorted_pts[n - 1], s, hi_clip, true);
    return acc;
}

double error_lr(const GreedySequence& seq, double r) {
    if (!(r > 0.0)) throw std::domain_error("error_lr: r must be > 0");
    if (r == 2.0) return seq.error_l2();
    double p = error_ls_pow(seq.dist(), seq.sorted_points(), r);
    return std::pow(p, 1.0 / r);
}

std::vector<double> voronoi_weights(const Distribution1D& dist,
                                    std::span<const double> sorted_pts) {
    const int n = static_cast<int>(sorted_pts.size());
    std::vector<double> w(n);
    double prev = 0.0;  // cdf at the left boundary
    for (int i = 0; i < n; ++i) {
        double hi = i == n - 1 ? 1.0 : dist.cdf(0.5 * (sorted_pts[i] + sorted_pts[i + 1]));
        w[i] = hi - prev;
        prev = hi;
    }
    return w;
}

std::pair<std::vector<double>, std::vector<double>> recompute_full(
    const GreedySequence& seq) {
    const auto& pts = seq.sorted_points();
    const int n = static_cast<int>(pts.size());
    std::vector<double> inertias(n + 1);
    for (int g = 0; g <= n; ++g) {
        double L = g > 0 ? pts[g - 1] : -kInf;
        double R = g < n ? pts[g] : kInf;
        inertias[g] = gap_inertia(seq.dist(), L, R);
    }
    return {std::move(inertias), voronoi_weights(seq.dist(), pts)};
}

void save_sequence_json(const GreedySequence& seq, const std::string& path) {
    nlohmann::json j;
    j["schema"] = 1;
    j["distribution"] = seq.dist().spec_string();
    j["n"] = seq.size();
    j["points_in_insertion_order"] = seq.points();
    j["error_sq_trace"] = seq.error_sq_trace();
    nlohmann::json steps = nlohmann::json::array();
    for (const auto& s : seq.steps()) {
        steps.push_back({{"i0", s.i0},
                         {"left_idx", s.left_idx},
                         {"right_idx", s.right_idx},
                         {"p_minus", s.p_minus},
                         {"p_plus", s.p_plus},
                         {"gain", s.gain}});
    }
    j["steps"] = std::move(steps);
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot write " + path);
    os << j.dump(2) << '\n';
}

GreedySequence load_sequence_json(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot read " + path);
    nlohmann::json j;
    is >> j;
    if (j.value("schema", 0) != 1) throw std::runtime_error("unsupported sequence schema");
    auto dist = Distribution1D::parse(j.at("distribution").get<std::string>());
    auto pts = j.at("points_in_insertion_order").get<std::vector<double>>();
    if (pts.empty()) throw std::runtime_error("sequence file has no points");

    GreedySequence seq(dist);
    if (std::fabs(pts[0] - seq.points()[0]) > 1e-9 * (1.0 + std::fabs(pts[0])))
        throw std::runtime_error("sequence file: first point is not the L2-median");
    // Replaying the stored points through the ledger update reproduces the
    // weights, inertias, steps and trace without re-running the search.
    for (size_t k = 1; k < pts.size(); ++k) {
        const auto& srt = seq.sorted_points();
        int gap = static_cast<int>(std::upper_bound(srt.begin(), srt.end(), pts[k]) -
                                   srt.begin());
        seq.insert_given_point(gap, pts[k]);
    }
    return seq;
}

void export_sequence_csv(const GreedySequence& seq, std::ostream& os) {
    os << "k,a_k,e2\n";
    char buf[96];
    for (int k = 0; k < seq.size(); ++k) {
        std::snprintf(buf, sizeof(buf), "%d,%.17g,%.17g\n", k + 1, seq.points()[k],
                      std::sqrt(seq.error_sq_trace()[k]));
        os << buf;
    }
}

}  // namespace greedyq
