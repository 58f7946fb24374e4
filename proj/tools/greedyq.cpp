// greedyq: experiment CLI over the greedy quantization library.
// Subcommands: build, integrate, grid, disc, diagnose, price. Every run
// writes CSV/JSON artifacts and prints a one-line summary.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "greedyq/cubature.hpp"
#include "greedyq/diagnostics.hpp"
#include "greedyq/discrepancy.hpp"
#include "greedyq/experiment_config.hpp"
#include "greedyq/greedy1d.hpp"
#include "greedyq/kernels.hpp"
#include "greedyq/pricing.hpp"
#include "greedyq/product_grid.hpp"
#include "greedyq/quadrature.hpp"

namespace {

using namespace greedyq;

struct Options {
    bool deterministic = false;
    std::uint64_t seed = 42;
    std::string dist = "uniform:0,1";
    std::string out;
    std::string csv;
    std::string fn = "x";
    std::string mode = "full";
    std::string law = "normal";
    std::string grid_method = "product";
    std::string disc_method = "formula";
    std::string price_method = "greedy";
    std::string in;
    std::string suite = "rate";
    std::string instrument;
    int n = 100;
    long long big_n = 1000;
    int d = 2;
    int r = 2;
    double s = 2.5;
    double rho = 0.5;
    ExperimentConfig cfg;
};

struct CsvWriter {
    std::ofstream os;
    CsvWriter(const std::string& path, const Options& opt, const std::string& header)
        : os(path) {
        if (!os) throw std::runtime_error("cannot write " + path);
        os << "# config " << opt.cfg.canonical() << "\n";
        if (!opt.deterministic) {
            auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
            char buf[64];
            std::strftime(buf, sizeof(buf), "%FT%TZ", std::gmtime(&t));
            os << "# generated " << buf << "\n";
        }
        os << header << "\n";
    }
    void row(std::initializer_list<double> vals) {
        char buf[40];
        bool first = true;
        for (double v : vals) {
            std::snprintf(buf, sizeof(buf), "%.17g", v);
            if (!first) os << ',';
            os << buf;
            first = false;
        }
        os << '\n';
    }
};

double named_integrand(const std::string& name, double x) {
    if (name == "one") return 1.0;
    if (name == "x") return x;
    if (name == "x2") return x * x;
    if (name == "abs") return std::fabs(x);
    if (name == "sinx") return std::sin(x);
    if (name == "expnegx") return std::exp(-x);
    throw std::invalid_argument("unknown integrand '" + name + "'");
}

double integrand_reference(const Distribution1D& dist, const std::string& name) {
    Interval eff = dist.effective_support(1e-15);
    double pad = 0.25 * (eff.hi - eff.lo);
    Interval sup = dist.support();
    double lo = sup.lo == -kInf ? eff.lo - pad : sup.lo;
    double hi = sup.hi == kInf ? eff.hi + pad : sup.hi;
    return integrate_adaptive(
        [&](double x) { return named_integrand(name, x) * dist.pdf(x); }, lo, hi, 1e-12);
}

std::vector<int> checkpoint_levels(int n) {
    std::vector<int> out;
    for (int k = 1; k < n; k *= 2) out.push_back(k);
    out.push_back(n);
    return out;
}

int cmd_build(const Options& o) {
    auto seq = GreedySequence::build(Distribution1D::parse(o.dist), o.n);
    if (!o.out.empty()) save_sequence_json(seq, o.out);
    if (!o.csv.empty()) {
        std::ofstream os(o.csv);
        if (!os) throw std::runtime_error("cannot write " + o.csv);
        export_sequence_csv(seq, os);
    }
    std::printf("build dist=%s n=%d e2=%.12g out=%s\n", o.dist.c_str(), o.n,
                seq.error_l2(), o.out.c_str());
    return 0;
}

int cmd_integrate(const Options& o) {
    auto dist = Distribution1D::parse(o.dist);
    auto seq = GreedySequence::build(dist, o.n);
    auto f = [&](double x) { return named_integrand(o.fn, x); };
    const double ref = integrand_reference(dist, o.fn);

    std::vector<double> trace;
    if (o.mode == "recursive") {
        trace = integrate_stream(seq, f);
    } else {
        trace.reserve(o.n);
        std::vector<double> sorted;
        for (int k = 0; k < o.n; ++k) {
            double x = seq.points()[k];
            sorted.insert(std::upper_bound(sorted.begin(), sorted.end(), x), x);
            auto w = voronoi_weights(dist, sorted);
            std::vector<double> fv(sorted.size());
            for (size_t i = 0; i < sorted.size(); ++i) fv[i] = f(sorted[i]);
            trace.push_back(kernels::weighted_sum(w, fv));
        }
    }

    CsvWriter csv(o.out, o, "n,I_n,abs_error_vs_reference");
    for (int k = 0; k < o.n; ++k)
        csv.row({static_cast<double>(k + 1), trace[k], std::fabs(trace[k] - ref)});
    std::printf("integrate dist=%s fn=%s n=%d mode=%s I_n=%.12g abs_err=%.3g\n",
                o.dist.c_str(), o.fn.c_str(), o.n, o.mode.c_str(), trace.back(),
                std::fabs(trace.back() - ref));
    return 0;
}

int cmd_grid(const Options& o) {
    auto dist = Distribution1D::parse(o.law);
    if (o.grid_method == "product") {
        ProductGrid grid(std::vector<Distribution1D>(o.d, dist));
        while (grid.total_size() < o.big_n) grid.grow();
        if (!o.out.empty()) save_grid_json(grid, o.out, "product");
        std::printf("grid law=%s d=%d method=product size=%lld err2=%.12g out=%s\n",
                    o.law.c_str(), o.d, grid.total_size(), grid.product_error_sq(),
                    o.out.c_str());
        return 0;
    }
    if (dist.kind() != DistKind::Normal)
        throw std::invalid_argument("boxmuller grids quantize the normal law");
    ProductGrid pre = box_muller_pre_image(o.d);
    while (pre.total_size() < o.big_n) pre.grow();
    if (!o.out.empty()) save_grid_json(pre, o.out, "boxmuller");
    std::vector<GreedySequence> es, us;
    for (int k = 0; k < pre.dim(); k += 2) {
        es.push_back(pre.marginal(k));
        us.push_back(pre.marginal(k + 1));
    }
    auto g = box_muller_grid(es, us, o.d);
    std::printf("grid law=%s d=%d method=boxmuller size=%lld preimage_err2=%.12g out=%s\n",
                o.law.c_str(), o.d, g.size(), pre.product_error_sq(), o.out.c_str());
    return 0;
}

int cmd_disc(const Options& o) {
    PointSet ps = load_points_csv(o.in, o.d);
    double v = o.disc_method == "brute" ? star_disc_bruteforce(ps) : star_disc(ps);
    std::printf("disc d=%d n=%lld method=%s D_star=%.17g\n", o.d, ps.size(),
                o.disc_method.c_str(), v);
    return 0;
}

int cmd_diagnose(const Options& o) {
    auto dist = Distribution1D::parse(o.dist);
    if (o.suite == "rate" || o.suite == "mismatch") {
        RateProfile prof = o.suite == "rate" ? rate_profile(dist, 2.0, o.n)
                                             : mismatch_profile(dist, o.s, o.n);
        CsvWriter csv(o.out, o, "n,e,n_times_e,pierce_rhs");
        double mx = 0.0, mn = kInf;
        for (const auto& row : prof.rows) {
            csv.row({static_cast<double>(row.n), row.err, row.scaled, row.pierce_rhs});
            if (row.n >= 64) {
                mx = std::max(mx, row.scaled);
                mn = std::min(mn, row.scaled);
            }
        }
        std::printf("diagnose suite=%s dist=%s n=%d spread=%.6g\n", o.suite.c_str(),
                    o.dist.c_str(), o.n, mn > 0.0 ? mx / mn : 0.0);
        return 0;
    }
    if (o.suite == "weights") {
        auto seq = GreedySequence::build(dist, o.n);
        auto pl = limit_weights(seq);
        CsvWriter csv(o.out, o, "i,a_i,p_i,p_limit");
        for (int i = 0; i < o.n; ++i)
            csv.row({static_cast<double>(i + 1), seq.sorted_points()[i], seq.weights()[i],
                     pl[i]});
        double pl_sum = 0.0;
        for (double v : pl) pl_sum += v;
        std::printf("diagnose suite=weights dist=%s n=%d l1_distance=%.6g limit_sum=%.6f\n",
                    o.dist.c_str(), o.n, limit_weights_l1_distance(seq), pl_sum);
        return 0;
    }
    if (o.suite == "stationarity") {
        CsvWriter csv(o.out, o, "n,gap");
        GreedySequence walk(dist);
        double gap = stationarity_gap(walk);
        csv.row({1.0, gap});
        for (int k = 2; k <= o.n; ++k) {
            walk.grow_one();
            gap = stationarity_gap(walk);
            csv.row({static_cast<double>(k), gap});
        }
        std::printf("diagnose suite=stationarity dist=%s n=%d gap=%.6g\n", o.dist.c_str(),
                    o.n, gap);
        return 0;
    }
    // quasi: rho-quasi-stationarity ratio along the 2^k - 1 levels.
    CsvWriter csv(o.out, o, "n,ratio");
    GreedySequence walk(dist);
    double last = 0.0;
    for (int k = 2; k <= o.n; ++k) {
        walk.grow_one();
        if ((k & (k + 1)) == 0) {
            last = quasi_stationarity_ratio(walk, o.r, o.rho);
            csv.row({static_cast<double>(k), last});
        }
    }
    std::printf("diagnose suite=quasi dist=%s n=%d r=%d rho=%g ratio=%.6g\n",
                o.dist.c_str(), o.n, o.r, o.rho, last);
    return 0;
}

int cmd_price(const Options& o) {
    if (o.instrument == "call1d") {
        BsParams p = BsParams::call_1d();
        const double ref =
            bs_call_closed_form(p.spot[0], p.strike, p.rate, p.vol[0], p.maturity);
        auto z_dist = Distribution1D::normal(0.0, 1.0);
        CsvWriter csv(o.out, o, "n,price,abs_error_vs_reference");
        double price = 0.0;
        const int n = static_cast<int>(o.big_n);
        if (o.price_method == "greedy") {
            auto seq = GreedySequence::build(z_dist, n);
            std::vector<double> sorted;
            auto levels = checkpoint_levels(n);
            size_t li = 0;
            for (int k = 0; k < seq.size(); ++k) {
                double x = seq.points()[k];
                sorted.insert(std::upper_bound(sorted.begin(), sorted.end(), x), x);
                if (li < levels.size() && levels[li] == k + 1) {
                    auto w = voronoi_weights(z_dist, sorted);
                    price = price_call_1d(sorted, w, p);
                    csv.row({static_cast<double>(k + 1), price, std::fabs(price - ref)});
                    ++li;
                }
            }
        } else if (o.price_method == "vdc-weighted" || o.price_method == "vdc-uniform") {
            for (int lev : checkpoint_levels(n)) {
                auto u = vdc_points(lev);
                std::vector<double> z(u.size());
                for (size_t i = 0; i < u.size(); ++i) z[i] = z_dist.quantile(u[i]);
                std::sort(z.begin(), z.end());
                std::vector<double> w;
                if (o.price_method == "vdc-weighted") w = voronoi_weights(z_dist, z);
                else w.assign(z.size(), 1.0 / lev);
                price = price_call_1d(z, w, p);
                csv.row({static_cast<double>(lev), price, std::fabs(price - ref)});
            }
        } else {
            throw std::invalid_argument("call1d methods: greedy, vdc-weighted, vdc-uniform");
        }
        std::printf(
            "price instrument=call1d method=%s n=%lld price=%.6f abs_err=%.6g ref=%.6f\n",
            o.price_method.c_str(), o.big_n, price, std::fabs(price - ref), ref);
        return 0;
    }

    if (o.instrument != "basket3d") throw std::invalid_argument("unknown instrument");
    BsParams p = BsParams::basket_3d();
    // Desk-scale reference: MC with the geometric control variate.
    McResult ref = price_basket_mc_cv(p, 1'000'000, 20240601u);
    CsvWriter csv(o.out, o, "n,price,abs_error_vs_reference");
    if (o.price_method == "mc") {
        McResult r = price_basket_mc_cv(p, o.big_n, o.seed);
        csv.row({static_cast<double>(o.big_n), r.price, std::fabs(r.price - ref.price)});
        std::printf(
            "price instrument=basket3d method=mc M=%lld price=%.6f stderr=%.6f ref=%.6f(+-%.4f)\n",
            o.big_n, r.price, r.std_error, ref.price, ref.std_error);
        return 0;
    }
    if (o.price_method == "product") {
        ProductGrid grid(std::vector<Distribution1D>(3, Distribution1D::normal(0.0, 1.0)));
        BasketPayoff payoff(p);
        CubatureState st;
        st.n = 1;
        st.value = grid.integrate_full(payoff);
        while (grid.total_size() < o.big_n) {
            grid.grow();
            grid.advance_after_grow(st, payoff);
            csv.row({static_cast<double>(grid.total_size()), st.value,
                     std::fabs(st.value - ref.price)});
        }
        double full = grid.integrate_full(payoff);
        std::printf(
            "price instrument=basket3d method=product n=%lld price=%.6f abs_err=%.6g "
            "full_check=%.3g ref=%.6f\n",
            grid.total_size(), st.value, std::fabs(st.value - ref.price),
            std::fabs(st.value - full), ref.price);
        return 0;
    }
    if (o.price_method == "boxmuller") {
        ProductGrid pre = box_muller_pre_image(3);
        while (pre.total_size() < o.big_n) pre.grow();
        std::vector<GreedySequence> es{pre.marginal(0), pre.marginal(2)};
        std::vector<GreedySequence> us{pre.marginal(1), pre.marginal(3)};
        auto g = box_muller_grid(es, us, 3);
        double price = price_basket_quant(g, p);
        csv.row({static_cast<double>(g.size()), price, std::fabs(price - ref.price)});
        std::printf(
            "price instrument=basket3d method=boxmuller n=%lld price=%.6f abs_err=%.6g ref=%.6f\n",
            g.size(), price, std::fabs(price - ref.price), ref.price);
        return 0;
    }
    throw std::invalid_argument("basket3d methods: product, boxmuller, mc");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"greedy quantization experiments"};
    app.require_subcommand(1);
    app.fallthrough();  // global flags may follow the subcommand

    Options o;
    app.add_flag("--deterministic", o.deterministic,
                 "suppress the timestamp header line in CSV outputs");
    app.add_option("--seed", o.seed, "seed for Monte Carlo methods");

    auto* b = app.add_subcommand("build", "build a greedy quantization sequence");
    b->add_option("--dist", o.dist)->required();
    b->add_option("--n", o.n)->required();
    b->add_option("--out", o.out)->required();
    b->add_option("--csv", o.csv);

    auto* i = app.add_subcommand("integrate", "quantization-based numerical integration");
    i->add_option("--dist", o.dist)->required();
    i->add_option("--fn", o.fn)->required();
    i->add_option("--n", o.n)->required();
    i->add_option("--mode", o.mode)->check(CLI::IsMember({"full", "recursive"}));
    i->add_option("--out", o.out)->required();

    auto* g = app.add_subcommand("grid", "multidimensional product / Box-Mueller grids");
    g->add_option("--law", o.law)->required();
    g->add_option("--d", o.d)->check(CLI::Range(2, 3));
    g->add_option("--n", o.big_n)->required();
    g->add_option("--method", o.grid_method)
        ->check(CLI::IsMember({"product", "boxmuller"}));
    g->add_option("--out", o.out);

    auto* dsc = app.add_subcommand("disc", "exact star discrepancy of a point set");
    dsc->add_option("--in", o.in)->required();
    dsc->add_option("--d", o.d)->check(CLI::Range(1, 3));
    dsc->add_option("--method", o.disc_method)->check(CLI::IsMember({"formula", "brute"}));

    auto* dg = app.add_subcommand("diagnose", "numerical verification suites");
    dg->add_option("--dist", o.dist)->required();
    dg->add_option("--suite", o.suite)
        ->check(CLI::IsMember({"rate", "mismatch", "weights", "stationarity", "quasi"}));
    dg->add_option("--n", o.n)->required();
    dg->add_option("--s", o.s);
    dg->add_option("--r", o.r)->check(CLI::Range(1, 2));
    dg->add_option("--rho", o.rho);
    dg->add_option("--out", o.out)->required();

    auto* pr = app.add_subcommand("price", "Black-Scholes pricing benchmarks");
    pr->add_option("--instrument", o.instrument)
        ->required()
        ->check(CLI::IsMember({"call1d", "basket3d"}));
    pr->add_option("--method", o.price_method)
        ->check(CLI::IsMember(
            {"greedy", "vdc-weighted", "vdc-uniform", "product", "boxmuller", "mc"}));
    pr->add_option("--n", o.big_n)->required();
    pr->add_option("--out", o.out)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    CLI::App* sub = app.get_subcommands().front();
    o.cfg.command = sub->get_name();
    for (const auto* opt : sub->get_options())
        if (opt->count() > 0 && !opt->get_lnames().empty())
            o.cfg.args[opt->get_lnames().front()] = opt->results().front();
    if (o.deterministic) o.cfg.args["deterministic"] = "1";
    if (app.count("--seed") > 0) o.cfg.args["seed"] = std::to_string(o.seed);

    try {
        const std::string& cmd = o.cfg.command;
        if (cmd == "build") return cmd_build(o);
        if (cmd == "integrate") return cmd_integrate(o);
        if (cmd == "grid") return cmd_grid(o);
        if (cmd == "disc") return cmd_disc(o);
        if (cmd == "diagnose") return cmd_diagnose(o);
        if (cmd == "price") return cmd_price(o);
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::domain_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
