#include "greedyq/discrepancy.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "greedyq/kernels.hpp"

namespace greedyq {

void PointSet::validate() const {
    if (d < 1 || d > 3) throw std::invalid_argument("PointSet: d must be 1, 2 or 3");
    if (xs.empty() || xs.size() % d != 0)
        throw std::invalid_argument("PointSet: empty or ragged point list");
    for (double v : xs)
        if (!(v >= 0.0 && v <= 1.0))
            throw std::invalid_argument("PointSet: coordinate outside [0,1]");
}

double star_disc_1d(const PointSet& ps) {
    ps.validate();
    if (ps.d != 1) throw std::invalid_argument("star_disc_1d: d != 1");
    std::vector<double> x(ps.xs);
    std::sort(x.begin(), x.end());
    const double n = static_cast<double>(x.size());
    double best = 0.0;
    for (size_t i = 0; i < x.size(); ++i) {
        best = std::max(best, (i + 1) / n - x[i]);
        best = std::max(best, x[i] - static_cast<double>(i) / n);
    }
    return best;
}

namespace {

std::vector<long long> order_by_first(const PointSet& ps) {
    std::vector<long long> ord(ps.size());
    std::iota(ord.begin(), ord.end(), 0LL);
    std::stable_sort(ord.begin(), ord.end(), [&](long long a, long long b) {
        return ps.coord(a, 0) < ps.coord(b, 0);
    });
    return ord;
}

// Insert v into the sorted prefix [0, len) of buf, keeping buf[len] onward
// intact. buf must have room.
void sorted_insert(std::vector<double>& buf, size_t len, double v) {
    size_t pos = std::upper_bound(buf.begin(), buf.begin() + len, v) - buf.begin();
    buf.insert(buf.begin() + pos, v);
}

}  // namespace

double star_disc_2d(const PointSet& ps) {
    ps.validate();
    if (ps.d != 2) throw std::invalid_argument("star_disc_2d: d != 2");
    const long long n = ps.size();
    const double step = 1.0 / static_cast<double>(n);
    auto ord = order_by_first(ps);

    // xi holds the increasing reordering of (0, x^2_1..x^2_i, 1).
    std::vector<double> xi;
    xi.reserve(n + 2);
    xi.push_back(0.0);
    xi.push_back(1.0);
    // Empty-prefix band: the box [0, x^1_(1)) x [0,1] holds no points.
    double best = ps.coord(ord[0], 0);
    for (long long i = 1; i <= n; ++i) {
        sorted_insert(xi, xi.size() - 1, ps.coord(ord[i - 1], 1));
        double x1_i = ps.coord(ord[i - 1], 0);
        double x1_next = i < n ? ps.coord(ord[i], 0) : 1.0;  // x^1_{n+1} := 1
        best = std::max(best, kernels::anchored_box_max(xi, step, x1_i, x1_next));
    }
    return best;
}

double star_disc_3d(const PointSet& ps) {
    ps.validate();
    if (ps.d != 3) throw std::invalid_argument("star_disc_3d: d != 3");
    const long long n = ps.size();
    const double step = 1.0 / static_cast<double>(n);
    auto ord = order_by_first(ps);

    // Empty-prefix band, as in the 2-D case.
    double best = ps.coord(ord[0], 0);
    std::vector<long long> by2;  // prefix of size i, ordered by second coordinate
    std::vector<double> eta;
    for (long long i = 1; i <= n; ++i) {
        by2.insert(std::upper_bound(by2.begin(), by2.end(), ord[i - 1],
                                    [&](long long a, long long b) {
                                        return ps.coord(a, 1) < ps.coord(b, 1);
                                    }),
                   ord[i - 1]);
        const double x1_i = ps.coord(ord[i - 1], 0);
        const double x1_next = i < n ? ps.coord(ord[i], 0) : 1.0;

        // Sweep k = 0..i. At step k, eta holds the sorted third coordinates
        // of the k smallest-second-coordinate prefix points, framed by 0
        // and 1 (this reading of the formula is the one the brute-force
        // oracle confirms).
        eta.assign({0.0, 1.0});
        for (long long k = 0; k <= i; ++k) {
            double xi_k = k == 0 ? 0.0 : ps.coord(by2[k - 1], 1);
            double xi_k1 = k == i ? 1.0 : ps.coord(by2[k], 1);
            best = std::max(best, kernels::anchored_box_max(eta, step, x1_i * xi_k,
                                                            x1_next * xi_k1));
            if (k < i) sorted_insert(eta, eta.size() - 1, ps.coord(by2[k], 2));
        }
    }
    return best;
}

double star_disc(const PointSet& ps) {
    switch (ps.d) {
        case 1: return star_disc_1d(ps);
        case 2: return star_disc_2d(ps);
        case 3: return star_disc_3d(ps);
    }
    throw std::invalid_argument("star_disc: d must be 1, 2 or 3");
}

double star_disc_bruteforce(const PointSet& ps) {
    ps.validate();
    const long long n = ps.size();
    if (n > 12) throw std::invalid_argument("star_disc_bruteforce: n > 12");
    const int d = ps.d;

    std::vector<std::vector<double>> axes(d);
    for (int k = 0; k < d; ++k) {
        for (long long i = 0; i < n; ++i) axes[k].push_back(ps.coord(i, k));
        axes[k].push_back(1.0);
        std::sort(axes[k].begin(), axes[k].end());
        axes[k].erase(std::unique(axes[k].begin(), axes[k].end()), axes[k].end());
    }

    std::vector<size_t> idx(d, 0);
    double best = 0.0;
    const double inv_n = 1.0 / static_cast<double>(n);
    for (;;) {
        double vol = 1.0;
        for (int k = 0; k < d; ++k) vol *= axes[k][idx[k]];
        long long open = 0, closed = 0;
        for (long long i = 0; i < n; ++i) {
            bool in_open = true, in_closed = true;
            for (int k = 0; k < d; ++k) {
                double c = ps.coord(i, k), u = axes[k][idx[k]];
                in_open = in_open && c < u;
                in_closed = in_closed && c <= u;
            }
            open += in_open;
            closed += in_closed;
        }
        best = std::max(best, vol - static_cast<double>(open) * inv_n);
        best = std::max(best, static_cast<double>(closed) * inv_n - vol);
        int k = d - 1;
        while (k >= 0 && ++idx[k] == axes[k].size()) idx[k--] = 0;
        if (k < 0) break;
    }
    return best;
}

std::pair<double, double> quantization_error_vs_disc(const GreedySequence& seq) {
    const auto& dist = seq.dist();
    if (!(dist.kind() == DistKind::Uniform && dist.param1() == 0.0 && dist.param2() == 1.0))
        throw std::invalid_argument("quantization_error_vs_disc: needs a U(0,1) sequence");
    PointSet ps;
    ps.d = 1;
    ps.xs = seq.sorted_points();
    return {error_lr(seq, 1.0), star_disc_1d(ps)};
}

PointSet load_points_csv(const std::string& path, int d) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot read " + path);
    PointSet ps;
    ps.d = d;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::stringstream ss(line);
        std::string tok;
        int got = 0;
        while (std::getline(ss, tok, ',')) {
            ps.xs.push_back(std::stod(tok));
            ++got;
        }
        if (got != d) throw std::runtime_error("points file: row with wrong arity");
    }
    ps.validate();
    return ps;
}

}  // namespace greedyq
