#include <algorithm>
#include <complex>
#include <cstdlib>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "treeten/analysis.hpp"
#include "treeten/fredholm.hpp"
#include "treeten/funcbuild.hpp"
#include "treeten/instances.hpp"
#include "treeten/serialize.hpp"
#include "treeten/treeci.hpp"

using namespace treeten;

namespace {

struct Options {
    std::string command;
    std::string tree = "path-sequential";
    std::string tree_spec;
    std::string target;
    int L = 8;
    int n = 1;
    std::vector<std::size_t> chi_list;
    double tol = 1e-12;
    int sweeps = 5;
    int iters = 20;
    std::uint64_t seed = 0;
    std::size_t samples = 1000;
    std::string out = "treeten_run";
};

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (const unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string config_string(const Options& o) {
    std::ostringstream ss;
    ss << o.command << '|' << o.tree << '|' << o.tree_spec << '|' << o.target
       << '|' << o.L << '|' << o.n << '|';
    for (const auto c : o.chi_list) ss << c << ';';
    ss << '|' << o.tol << '|' << o.sweeps << '|' << o.iters << '|' << o.seed
       << '|' << o.samples;
    return ss.str();
}

LabeledTree resolve_tree(const Options& o) {
    if (!o.tree_spec.empty()) return load_tree_spec(o.tree_spec);
    return make_tree(o.tree, o.n, o.L);
}

std::size_t worker_cap() {
    if (const char* env = std::getenv("TREETEN_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v >= 1) return static_cast<std::size_t>(v);
    }
    return 1;
}

/// Run jobs 0..n with at most `cap` in flight; results keep their index.
template <class Fn>
void parallel_for(std::size_t n, std::size_t cap, Fn&& fn) {
    if (cap <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::future<void>> inflight;
    for (std::size_t i = 0; i < n; ++i) {
        if (inflight.size() >= cap) {
            inflight.front().get();
            inflight.erase(inflight.begin());
        }
        inflight.push_back(std::async(std::launch::async, fn, i));
    }
    for (auto& f : inflight) f.get();
}

struct Target {
    TargetFn f;
    int n = 1;
};

Target resolve_target(const std::string& name) {
    if (name == "constant")
        return {[](const GridPoint&) { return 1.0; }, 1};
    if (name == "cosh")
        return {[](const GridPoint& p) { return std::cosh(3.0 * p.value(1)); },
                1};
    if (name == "laguerre") return {laguerre_target(), 1};
    if (name == "weierstrass") return {weierstrass_target(), 1};
    if (name == "planewaves") return {planewaves_target(), 3};
    if (name == "multinormal") return {multinormal_target(), 3};
    throw Error("unknown target '" + name + "'");
}

std::ofstream open_csv(const Options& o, const std::string& columns) {
    std::ofstream csv(o.out + ".csv");
    if (!csv) throw Error("cannot write " + o.out + ".csv");
    csv << "# config_hash=" << std::hex << fnv1a(config_string(o)) << std::dec
        << "\n";
    csv << columns << "\n";
    std::ofstream meta(o.out + ".meta");
    meta << "command=" << o.command << "\ntree=" << o.tree
         << "\ntarget=" << o.target << "\nL=" << o.L << "\nn=" << o.n
         << "\nseed=" << o.seed << "\nsamples=" << o.samples
         << "\ntol=" << o.tol << "\n";
    if (o.target == "multinormal")
        meta << "domain=[0,10)^3 mapped affinely to [0,1)^3\n";
    return csv;
}

/// Exact network for a compressible target; complex parts are evaluated via
/// their real component.
struct ExactNet {
    TreeTensorNetwork<double> real;
    TreeTensorNetwork<std::complex<double>> cplx;
    bool is_complex = false;
};

ExactNet build_exact(const std::string& target, const LabeledTree& tree) {
    ExactNet net;
    if (target == "constant") {
        net.real = build_constant<double>(tree, 1.0);
    } else if (target == "laguerre") {
        net.real = build_laguerre(tree);
    } else if (target == "weierstrass") {
        net.real = build_weierstrass(tree);
    } else if (target == "cosh") {
        net.real =
            build_hyperbolic<double>(tree, 1.0, {3.0}, 0.0, Hyperbolic::cosh);
    } else if (target == "planewaves") {
        net.cplx = build_planewaves(tree);
        net.is_complex = true;
    } else {
        throw Error("target '" + target + "' has no direct construction");
    }
    return net;
}

int cmd_build(const Options& o) {
    auto tree = resolve_tree(o);
    auto net = build_exact(o.target, tree);
    auto csv = open_csv(o, "max_bond,memory_bytes");
    if (net.is_complex) {
        auto s = stats(net.cplx);
        // complex scalars occupy two doubles
        csv << s.max_bond << ',' << 2 * s.memory_bytes << "\n";
        save_net_file(net.cplx, o.out + ".ttn");
    } else {
        auto s = stats(net.real);
        csv << s.max_bond << ',' << s.memory_bytes << "\n";
        save_net_file(net.real, o.out + ".ttn");
    }
    return 0;
}

int cmd_compress(const Options& o) {
    auto tree = resolve_tree(o);
    auto target = resolve_target(o.target);
    auto exact = build_exact(o.target, tree);
    auto samples = draw_samples(tree, o.samples, o.seed);
    const std::size_t chi_top = exact.is_complex ? exact.cplx.max_bond_dim()
                                                 : exact.real.max_bond_dim();
    std::vector<std::size_t> chis = o.chi_list;
    if (chis.empty())
        for (std::size_t c = chi_top; c >= 1; --c) chis.push_back(c);

    struct Row {
        std::size_t chi, mem;
        double eps, eps_inf;
    };
    std::vector<Row> rows(chis.size());
    parallel_for(chis.size(), worker_cap(), [&](std::size_t i) {
        const std::size_t chi = chis[i];
        double sum = 0, inf = 0;
        std::size_t mem = 0;
        if (exact.is_complex) {
            auto tr = truncate(exact.cplx, chi, 0.0);
            for (const auto& p : samples.points) {
                const double d =
                    std::abs(evaluate(tr, p).real() - target.f(p));
                sum += d;
                inf = std::max(inf, d);
            }
            mem = 2 * stats(tr).memory_bytes;
        } else {
            auto tr = truncate(exact.real, chi, 0.0);
            for (const auto& p : samples.points) {
                const double d = std::abs(evaluate(tr, p) - target.f(p));
                sum += d;
                inf = std::max(inf, d);
            }
            mem = stats(tr).memory_bytes;
        }
        rows[i] = {chi, mem, sum / static_cast<double>(samples.points.size()),
                   inf};
    });
    auto csv = open_csv(o, "chi,eps,eps_inf,memory_bytes");
    for (const auto& r : rows)
        csv << r.chi << ',' << r.eps << ',' << r.eps_inf << ',' << r.mem
            << "\n";
    return 0;
}

int cmd_tci(const Options& o) {
    auto tree = resolve_tree(o);
    auto target = resolve_target(o.target);
    auto samples = draw_samples(tree, o.samples, o.seed);
    std::vector<std::size_t> chis =
        o.chi_list.empty() ? std::vector<std::size_t>{8} : o.chi_list;

    struct Run {
        TciReport report;
        double eps = 0, eps_inf = 0;
        std::size_t mem = 0;
    };
    std::vector<Run> runs(chis.size());
    parallel_for(chis.size(), worker_cap(), [&](std::size_t i) {
        auto [net, report] = tci_learn(target.f, tree, chis[i], o.tol,
                                       o.sweeps);
        auto [eps, eps_inf] = error_metrics(net, target.f, samples);
        runs[i] = {std::move(report), eps, eps_inf, stats(net).memory_bytes};
        if (i == chis.size() - 1) save_net_file(net, o.out + ".ttn");
    });
    auto csv = open_csv(o, "chi_max,sweep,eps_inf_sweep,max_chi,calls,eps,"
                           "eps_inf,memory_bytes");
    for (std::size_t i = 0; i < chis.size(); ++i) {
        const auto& r = runs[i];
        for (std::size_t s = 0; s < r.report.sweeps.size(); ++s) {
            const auto& rec = r.report.sweeps[s];
            csv << chis[i] << ',' << s + 1 << ',' << rec.error << ','
                << rec.max_bond << ',' << rec.call_count << ',';
            if (s + 1 == r.report.sweeps.size())
                csv << r.eps << ',' << r.eps_inf << ',' << r.mem;
            else
                csv << ",,";
            csv << "\n";
        }
    }
    return 0;
}

int cmd_fredholm(const Options& o) {
    FredholmInstance inst;
    if (o.target == "fredholm-ex1")
        inst = make_fredholm_ex1(o.L);
    else if (o.target == "fredholm-ex2")
        inst = make_fredholm_ex2(o.L);
    else
        throw Error("fredholm target must be fredholm-ex1 or fredholm-ex2");
    inst.problem.n_iters = o.iters > 0 ? o.iters : inst.problem.n_iters;
    auto [f, trace] = solve(inst.problem, inst.f1, inst.exact, o.seed);
    auto csv = open_csv(o, "iteration,eps,max_chi");
    for (std::size_t k = 0; k < trace.errors.size(); ++k)
        csv << k + 1 << ',' << trace.errors[k] << ',' << trace.max_bonds[k]
            << "\n";
    save_net_file(f, o.out + ".ttn");
    if (trace.diverged && !trace.converged)
        throw SvdFailure("iteration diverged");
    return 0;
}

int cmd_mi(const Options& o) {
    auto tree = resolve_tree(o);
    auto target = resolve_target(o.target);
    auto mi = mi_matrix(target.f, tree, o.samples, o.seed);
    auto csv = open_csv(o, "matrix rows follow; columns ordered as row labels");
    csv << "digit";
    for (const auto& d : mi.digits) csv << ',' << to_string(d);
    csv << "\n";
    for (std::size_t i = 0; i < mi.digits.size(); ++i) {
        csv << to_string(mi.digits[i]);
        for (std::size_t j = 0; j < mi.digits.size(); ++j)
            csv << ',' << mi.values[i][j];
        csv << "\n";
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"tree tensor network function compression toolkit"};
    app.require_subcommand(1);
    Options o;

    const auto add_common = [&](CLI::App* cmd, bool needs_seed) {
        cmd->add_option("--tree", o.tree, "generator name");
        cmd->add_option("--tree-spec", o.tree_spec, "tree spec file");
        cmd->add_option("--target", o.target, "target function")->required();
        cmd->add_option("--L", o.L, "digits per variable");
        cmd->add_option("--n", o.n, "number of variables");
        cmd->add_option("--chi-list", o.chi_list, "bond dimension sweep");
        cmd->add_option("--tol", o.tol, "truncation / pivot tolerance");
        cmd->add_option("--sweeps", o.sweeps, "TCI sweeps");
        cmd->add_option("--iters", o.iters, "solver iterations");
        auto* seed = cmd->add_option("--seed", o.seed, "RNG seed");
        if (needs_seed) seed->required();
        cmd->add_option("--samples", o.samples, "sample-set size");
        cmd->add_option("--out", o.out, "output path base");
    };
    add_common(app.add_subcommand("build", "direct construction + stats"),
               false);
    add_common(app.add_subcommand("compress", "truncation error sweep"), true);
    add_common(app.add_subcommand("tci", "cross-interpolation learning"), true);
    add_common(app.add_subcommand("fredholm", "integral-equation solver"),
               true);
    add_common(app.add_subcommand("mi", "mutual-information matrix"), true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2; // bad flags are config errors
    }
    o.command = app.get_subcommands().front()->get_name();

    try {
        if (o.L < 1 || o.n < 1 || o.samples < 1)
            throw Error("numeric parameters must be positive");
        if (o.command == "build") return cmd_build(o);
        if (o.command == "compress") return cmd_compress(o);
        if (o.command == "tci") return cmd_tci(o);
        if (o.command == "fredholm") return cmd_fredholm(o);
        if (o.command == "mi") return cmd_mi(o);
        return 2;
    } catch (const SvdFailure& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    } catch (const DegenerateInit& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    } catch (const InsufficientSamples& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
