#include "greedyq/product_grid.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <stdexcept>

#include <json.hpp>

namespace greedyq {

ProductGrid::ProductGrid(std::vector<Distribution1D> marginals,
                         std::vector<double> err_sq_scales) {
    if (marginals.empty()) throw std::invalid_argument("ProductGrid: no marginals");
    if (err_sq_scales.empty()) err_sq_scales.assign(marginals.size(), 1.0);
    if (err_sq_scales.size() != marginals.size())
        throw std::invalid_argument("ProductGrid: scale count mismatch");
    scales_ = std::move(err_sq_scales);
    identical_laws_ = true;
    for (const auto& m : marginals) {
        if (!(m == marginals.front())) identical_laws_ = false;
        marginals_.emplace_back(m);
    }
    for (size_t k = 1; identical_laws_ && k < scales_.size(); ++k)
        if (scales_[k] != scales_[0]) identical_laws_ = false;
}

ProductGrid::ProductGrid(std::vector<GreedySequence> marginals,
                         std::vector<double> err_sq_scales)
    : marginals_(std::move(marginals)) {
    if (marginals_.empty()) throw std::invalid_argument("ProductGrid: no marginals");
    if (err_sq_scales.empty()) err_sq_scales.assign(marginals_.size(), 1.0);
    if (err_sq_scales.size() != marginals_.size())
        throw std::invalid_argument("ProductGrid: scale count mismatch");
    scales_ = std::move(err_sq_scales);
    identical_laws_ = true;
    for (const auto& m : marginals_)
        if (!(m.dist() == marginals_.front().dist())) identical_laws_ = false;
    for (size_t k = 1; identical_laws_ && k < scales_.size(); ++k)
        if (scales_[k] != scales_[0]) identical_laws_ = false;
}

std::vector<int> ProductGrid::sizes() const {
    std::vector<int> s;
    s.reserve(marginals_.size());
    for (const auto& m : marginals_) s.push_back(m.size());
    return s;
}

long long ProductGrid::total_size() const {
    long long n = 1;
    for (const auto& m : marginals_) n *= m.size();
    return n;
}

double ProductGrid::product_error_sq() const {
    double acc = 0.0;
    for (int k = 0; k < dim(); ++k) acc += scales_[k] * marginals_[k].error_sq();
    return acc;
}

int ProductGrid::choose_refinement() const {
    const int d = dim();
    if (identical_laws_) {
        // Identical marginals: the lookahead is the same for every k, so
        // refinement cycles periodically (the lagging dimension first).
        int best = 0;
        for (int k = 1; k < d; ++k)
            if (marginals_[k].size() < marginals_[best].size()) best = k;
        return best;
    }
    double base = product_error_sq();
    int best = -1;
    double best_e = kInf;
    for (int k = 0; k < d; ++k) {
        double e_k = base - scales_[k] * marginals_[k].peek_next_gain();
        if (e_k < best_e) {
            best_e = e_k;
            best = k;
        }
    }
    return best;
}

int ProductGrid::grow() {
    int k = choose_refinement();
    marginals_[k].grow_one();
    history_.push_back(k);
    return k;
}

std::vector<double> ProductGrid::product_weights() const {
    const int d = dim();
    auto sizes_v = sizes();
    std::vector<double> out;
    out.reserve(static_cast<size_t>(total_size()));
    std::vector<int> idx(d, 0);
    for (;;) {
        double w = 1.0;
        for (int k = 0; k < d; ++k) w *= marginals_[k].weights()[idx[k]];
        out.push_back(w);
        int k = d - 1;
        while (k >= 0 && ++idx[k] == sizes_v[k]) idx[k--] = 0;
        if (k < 0) break;
    }
    return out;
}

void ProductGrid::point_at(long long flat, std::span<double> out) const {
    const int d = dim();
    if (static_cast<int>(out.size()) != d)
        throw std::invalid_argument("point_at: bad output size");
    auto sizes_v = sizes();
    for (int k = d - 1; k >= 0; --k) {
        out[k] = marginals_[k].sorted_points()[flat % sizes_v[k]];
        flat /= sizes_v[k];
    }
}

ProductGrid box_muller_pre_image(int d) {
    if (d != 2 && d != 3) throw std::invalid_argument("box_muller_pre_image: d in {2,3}");
    const double u_scale = 4.0 * std::numbers::pi * std::numbers::pi;
    std::vector<Distribution1D> marg;
    std::vector<double> scales;
    int pairs = d == 2 ? 1 : 2;
    for (int p = 0; p < pairs; ++p) {
        marg.push_back(Distribution1D::exponential(1.0));
        scales.push_back(4.0);
        marg.push_back(Distribution1D::uniform(0.0, 1.0));
        scales.push_back(u_scale);
    }
    return ProductGrid(std::move(marg), std::move(scales));
}

GaussianGrid box_muller_grid(std::span<const GreedySequence> exp_seqs,
                             std::span<const GreedySequence> unif_seqs, int d) {
    const size_t pairs = d == 2 ? 1 : d == 3 ? 2 : 0;
    if (pairs == 0) throw std::invalid_argument("box_muller_grid: d must be 2 or 3");
    if (exp_seqs.size() != pairs || unif_seqs.size() != pairs)
        throw std::invalid_argument("box_muller_grid: wrong pair counts for d");
    for (const auto& s : exp_seqs)
        if (s.dist().kind() != DistKind::Exponential)
            throw std::invalid_argument("box_muller_grid: exp_seqs must be Exp sequences");
    for (const auto& s : unif_seqs)
        if (s.dist().kind() != DistKind::Uniform)
            throw std::invalid_argument("box_muller_grid: unif_seqs must be U(0,1)");

    const double two_pi = 2.0 * std::numbers::pi;
    GaussianGrid g;
    g.d = d;
    g.provenance = GaussianGrid::Provenance::BoxMuller;
    if (d == 2) {
        const auto& e = exp_seqs[0];
        const auto& u = unif_seqs[0];
        for (int i = 0; i < e.size(); ++i) {
            double r = std::sqrt(2.0 * e.sorted_points()[i]);
            for (int j = 0; j < u.size(); ++j) {
                double th = two_pi * u.sorted_points()[j];
                g.points.push_back(r * std::cos(th));
                g.points.push_back(r * std::sin(th));
                g.weights.push_back(e.weights()[i] * u.weights()[j]);
            }
        }
        return g;
    }
    // d == 3: (Z1, Z2) from pair 1, Z3 = sqrt(2 E') cos(2 pi U') from pair 2
    // (its sine coordinate is discarded, the weight is not).
    const auto& e1 = exp_seqs[0];
    const auto& u1 = unif_seqs[0];
    const auto& e2 = exp_seqs[1];
    const auto& u2 = unif_seqs[1];
    for (int i = 0; i < e1.size(); ++i) {
        double r1 = std::sqrt(2.0 * e1.sorted_points()[i]);
        for (int j = 0; j < u1.size(); ++j) {
            double th1 = two_pi * u1.sorted_points()[j];
            double z1 = r1 * std::cos(th1);
            double z2 = r1 * std::sin(th1);
            double w12 = e1.weights()[i] * u1.weights()[j];
            for (int k = 0; k < e2.size(); ++k) {
                double r2 = std::sqrt(2.0 * e2.sorted_points()[k]);
                for (int l = 0; l < u2.size(); ++l) {
                    double z3 = r2 * std::cos(two_pi * u2.sorted_points()[l]);
                    g.points.push_back(z1);
                    g.points.push_back(z2);
                    g.points.push_back(z3);
                    g.weights.push_back(w12 * e2.weights()[k] * u2.weights()[l]);
                }
            }
        }
    }
    return g;
}

GaussianGrid product_gaussian_grid(const ProductGrid& grid) {
    const int d = grid.dim();
    for (int k = 0; k < d; ++k)
        if (grid.marginal(k).dist().kind() != DistKind::Normal)
            throw std::invalid_argument("product_gaussian_grid: normal marginals required");
    GaussianGrid g;
    g.d = d;
    g.provenance = GaussianGrid::Provenance::Product;
    g.weights = grid.product_weights();
    const long long n = grid.total_size();
    g.points.resize(static_cast<size_t>(n) * d);
    std::vector<double> x(d);
    for (long long j = 0; j < n; ++j) {
        grid.point_at(j, x);
        for (int k = 0; k < d; ++k) g.points[static_cast<size_t>(j) * d + k] = x[k];
    }
    return g;
}

void save_grid_json(const ProductGrid& grid, const std::string& path,
                    const std::string& method) {
    nlohmann::json j;
    j["schema"] = 1;
    j["method"] = method;
    j["d"] = grid.dim();
    j["sizes"] = grid.sizes();
    j["history"] = grid.history();
    nlohmann::json margs = nlohmann::json::array();
    for (int k = 0; k < grid.dim(); ++k) {
        std::string mpath = path + ".m" + std::to_string(k) + ".json";
        save_sequence_json(grid.marginal(k), mpath);
        margs.push_back({{"file", mpath},
                         {"distribution", grid.marginal(k).dist().spec_string()},
                         {"err_sq_scale", grid.err_sq_scale(k)}});
    }
    j["marginals"] = std::move(margs);
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot write " + path);
    os << j.dump(2) << '\n';
}

}  // namespace greedyq
