#include "gffm/experiments.hpp"
#include "gffm/grids.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct CommonOpts {
    std::string graph_path;
    std::string config_path;
    std::string out_path;
    std::uint64_t seed = 0;
    bool seed_given = false;
    std::size_t replicates = 0;
    bool replicates_given = false;
    int refinement = 0;
    bool refinement_given = false;
    unsigned threads = 0;
    bool threads_given = false;
    json cfg = json::object();

    void load_config() {
        if (config_path.empty()) return;
        std::ifstream in(config_path);
        if (!in) throw CLI::ValidationError("config", "cannot read " + config_path);
        in >> cfg;
    }

    std::uint64_t resolve_seed(std::uint64_t fallback) const {
        if (seed_given) return seed;
        if (const char* env = std::getenv("GFFM_SEED")) return std::strtoull(env, nullptr, 10);
        if (cfg.contains("seed")) return cfg["seed"].get<std::uint64_t>();
        return fallback;
    }

    std::size_t resolve_replicates(std::size_t fallback) const {
        if (replicates_given) return replicates;
        if (cfg.contains("replicates")) return cfg["replicates"].get<std::size_t>();
        return fallback;
    }

    int resolve_refinement(int fallback) const {
        if (refinement_given) return refinement;
        if (cfg.contains("refinement")) return cfg["refinement"].get<int>();
        return fallback;
    }

    unsigned resolve_threads() const {
        if (threads_given) return threads;
        if (const char* env = std::getenv("GFFM_THREADS"))
            return static_cast<unsigned>(std::strtoul(env, nullptr, 10));
        if (cfg.contains("threads")) return cfg["threads"].get<unsigned>();
        return gffm::stats::default_threads();
    }

    std::string resolve_out(const std::string& fallback = {}) const {
        if (!out_path.empty()) return out_path;
        if (cfg.contains("out")) return cfg["out"].get<std::string>();
        return fallback;
    }
};

void add_common(CLI::App* cmd, CommonOpts& c, bool with_graph) {
    if (with_graph)
        cmd->add_option("-g,--graph", c.graph_path, "graph description JSON")->required();
    cmd->add_option("--config", c.config_path, "JSON config file");
    cmd->add_option("-o,--out", c.out_path, "output file or directory");
    cmd->add_option("--seed", c.seed, "RNG seed")->each([&](const std::string&) {
        c.seed_given = true;
    });
    cmd->add_option("-n,--replicates", c.replicates, "replicate count")
        ->each([&](const std::string&) { c.replicates_given = true; });
    cmd->add_option("--refinement", c.refinement, "edge subdivision count")
        ->each([&](const std::string&) { c.refinement_given = true; });
    cmd->add_option("--threads", c.threads, "worker count")->each([&](const std::string&) {
        c.threads_given = true;
    });
}

/// All output goes through a string so a run is written atomically and
/// byte-identically for identical inputs.
void emit(const CommonOpts& c, const std::string& text) {
    const std::string path = c.resolve_out();
    if (path.empty()) {
        std::cout << text;
        return;
    }
    if (fs::path(path).has_parent_path()) fs::create_directories(fs::path(path).parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw CLI::ValidationError("out", "cannot write " + path);
    out << text;
}

std::vector<int> parse_vertex_set(const gffm::Network& net, const std::string& csv) {
    std::vector<int> out;
    std::stringstream ss(csv);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(net.index_of(tok));
    return out;
}

std::string format_reports(const gffm::experiments::SuiteResult& res) {
    std::ostringstream os;
    for (const auto& r : res.reports)
        os << (r.pass ? "PASS" : "FAIL") << "  " << r.name << "  " << r.statistic << '='
           << r.value << "  p=" << r.p_value << "  seed=" << r.seed << '\n';
    os << (res.pass ? "PASS" : "FAIL") << "  suite:" << res.name << "  ("
       << res.reports.size() << " checks)\n";
    return os.str();
}

void write_suite_files(const gffm::experiments::SuiteResult& res, const std::string& dir) {
    fs::create_directories(dir);
    std::ostringstream js;
    js << "[\n";
    for (std::size_t i = 0; i < res.reports.size(); ++i) {
        gffm::stats::TestReport r = res.reports[i];
        r.runtime_ms = 0.0;  // keep report files byte-identical across runs
        js << "  " << r.to_json() << (i + 1 < res.reports.size() ? "," : "") << "\n";
    }
    js << "]\n";
    std::ofstream(fs::path(dir) / (res.name + "_reports.json"), std::ios::binary) << js.str();
    std::ofstream(fs::path(dir) / (res.name + "_data.csv"), std::ios::binary) << res.data_csv;
}

int run_verify(const CommonOpts& c_in, const std::string& suite, double scale) {
    CommonOpts c = c_in;
    gffm::experiments::SuiteOptions opt;
    if (c.seed_given)
        opt.seeds = {c.seed};
    else if (const char* env = std::getenv("GFFM_SEED"))
        opt.seeds = {std::strtoull(env, nullptr, 10)};
    opt.threads = c.resolve_threads();
    opt.scale = scale;
    static const std::map<std::string, double> base_n{
        {"eq1", 1e5},  {"two-point", 1e5},   {"rewire", 1e5}, {"connect", 1e5},
        {"star-joint", 1e6}, {"levy", 1e5},  {"fps-laplace", 1e5}, {"cor34", 5e3},
        {"lattice", 1e4}};
    if (c.replicates_given) {
        auto it = base_n.find(suite);
        if (it != base_n.end()) opt.scale = static_cast<double>(c.replicates) / it->second;
    }
    gffm::experiments::SuiteResult res = gffm::experiments::run_suite(suite, opt);
    write_suite_files(res, c.resolve_out("out"));
    std::cout << format_reports(res);
    return res.pass ? 0 : 1;
}

std::vector<double> parse_doubles(const std::string& csv) {
    std::vector<double> out;
    std::stringstream ss(csv);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(std::stod(tok));
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Gaussian free field on metric graphs: networks, laws, samplers"};
    app.require_subcommand(1);

    // net
    auto* net_cmd = app.add_subcommand("net", "electrical network queries");
    net_cmd->require_subcommand(1);
    CommonOpts c_reff;
    std::string from, to;
    auto* reff_cmd = net_cmd->add_subcommand("reff", "two-point effective resistance");
    add_common(reff_cmd, c_reff, true);
    reff_cmd->add_option("--from", from)->required();
    reff_cmd->add_option("--to", to)->required();

    CommonOpts c_kernel;
    std::string set_csv;
    auto* kernel_cmd = net_cmd->add_subcommand("kernel", "effective conductance matrix");
    add_common(kernel_cmd, c_kernel, true);
    kernel_cmd->add_option("--set", set_csv, "comma-separated vertex list (default: boundary)");

    // law
    CommonOpts c_law;
    std::string law_name, grid_spec;
    double w0 = 0.0, wT = 0.0, T = 1.0, law_c = 1.0, law_m = 0.0, law_hc = 0.0;
    double law_a = 0.0, law_x = 0.0;
    bool law_x_given = false;
    auto* law_cmd = app.add_subcommand("law", "closed-form laws");
    auto* eval_cmd = law_cmd->add_subcommand("eval", "evaluate a law on a point or grid");
    law_cmd->require_subcommand(1);
    eval_cmd
        ->add_option("--law", law_name,
                     "local-time | bridge-min | two-set | fps-laplace | bm-hitting | last-visit")
        ->required();
    add_common(eval_cmd, c_law, false);
    eval_cmd->add_option("-g,--graph", c_law.graph_path, "graph (two-set law only)");
    eval_cmd->add_option("--w0", w0);
    eval_cmd->add_option("--wT", wT);
    eval_cmd->add_option("--T", T);
    eval_cmd->add_option("--c", law_c, "effective conductance");
    eval_cmd->add_option("--m", law_m, "boundary mean / BM start");
    eval_cmd->add_option("--hc", law_hc, "check-side boundary value");
    eval_cmd->add_option("--level", law_a, "threshold level a");
    eval_cmd->add_option("-x", law_x, "evaluation point")->each([&](const std::string&) {
        law_x_given = true;
    });
    eval_cmd->add_option("--grid", grid_spec, "start:stop:count evaluation grid");

    // sample
    auto* sample_cmd = app.add_subcommand("sample", "Monte Carlo exports");
    sample_cmd->require_subcommand(1);
    CommonOpts c_field, c_metric, c_levy;
    auto* field_cmd = sample_cmd->add_subcommand("field", "vertex field samples");
    add_common(field_cmd, c_field, true);
    auto* metric_cmd = sample_cmd->add_subcommand("metric", "per-edge local times and minima");
    add_common(metric_cmd, c_metric, true);
    auto* levy_cmd = sample_cmd->add_subcommand("levy", "reflection-identity sample pairs");
    add_common(levy_cmd, c_levy, true);

    // fps
    auto* fps_cmd = app.add_subcommand("fps", "first-passage sets");
    fps_cmd->require_subcommand(1);
    CommonOpts c_fsample, c_flap, c_fnested, c_fball;
    double level = 0.0;
    auto* fsample_cmd = fps_cmd->add_subcommand("sample", "bracket observables per replicate");
    add_common(fsample_cmd, c_fsample, true);
    fsample_cmd->add_option("--level", level, "threshold level a")->required();
    std::string x0_name;
    fsample_cmd->add_option("--x0", x0_name, "probe vertex for resistance drops");

    std::string u_csv = "0.25,1,4";
    double lap_level = 0.0;
    auto* flap_cmd = fps_cmd->add_subcommand("laplace", "bracketed Laplace transform");
    add_common(flap_cmd, c_flap, true);
    flap_cmd->add_option("--level", lap_level, "threshold level a")->required();
    flap_cmd->add_option("--u", u_csv, "comma-separated transform points");

    std::string levels_csv, nested_x0;
    auto* fnested_cmd = fps_cmd->add_subcommand("nested", "decreasing level schedule");
    add_common(fnested_cmd, c_fnested, true);
    fnested_cmd->add_option("--levels", levels_csv, "comma-separated decreasing levels")
        ->required();
    fnested_cmd->add_option("--x0", nested_x0, "probe vertex")->required();

    std::string radii_csv, ball_x0;
    auto* fball_cmd = fps_cmd->add_subcommand("ball", "pseudo-metric balls");
    add_common(fball_cmd, c_fball, true);
    fball_cmd->add_option("--radii", radii_csv, "comma-separated radii")->required();
    fball_cmd->add_option("--x0", ball_x0, "probe vertex")->required();

    // verify
    CommonOpts c_verify;
    std::string suite;
    double scale = 1.0;
    auto* verify_cmd = app.add_subcommand("verify", "scripted verification suites");
    verify_cmd->add_option("suite", suite, "suite name")->required();
    add_common(verify_cmd, c_verify, false);
    verify_cmd->add_option("--scale", scale, "replicate multiplier");

    // lattice
    CommonOpts c_lattice;
    int rows = 40, cols = 80;
    bool periodic = false;
    auto* lattice_cmd = app.add_subcommand("lattice", "rectangle grid probe");
    add_common(lattice_cmd, c_lattice, false);
    lattice_cmd->add_option("--rows", rows);
    lattice_cmd->add_option("--cols", cols);
    lattice_cmd->add_flag("--periodic", periodic, "glue the long sides into an annulus");

    try {
        app.parse(argc, argv);

        if (reff_cmd->parsed()) {
            c_reff.load_config();
            auto [net, bc] = gffm::load_network_file(c_reff.graph_path);
            std::ostringstream os;
            os.precision(12);
            os << gffm::two_point_resistance(net, net.index_of(from), net.index_of(to)) << "\n";
            emit(c_reff, os.str());
            return 0;
        }

        if (kernel_cmd->parsed()) {
            c_kernel.load_config();
            auto [net, bc] = gffm::load_network_file(c_kernel.graph_path);
            std::vector<int> F =
                set_csv.empty() ? bc.boundary : parse_vertex_set(net, set_csv);
            emit(c_kernel, gffm::kernel_to_csv(gffm::effective_kernel(net, F)));
            return 0;
        }

        if (eval_cmd->parsed()) {
            c_law.load_config();
            std::vector<double> xs;
            if (!grid_spec.empty()) {
                double lo, hi;
                int count;
                char sep1, sep2;
                std::istringstream ss(grid_spec);
                if (!(ss >> lo >> sep1 >> hi >> sep2 >> count) || sep1 != ':' || sep2 != ':' ||
                    count < 2)
                    throw CLI::ValidationError("grid", "expected start:stop:count");
                for (int i = 0; i < count; ++i)
                    xs.push_back(lo + (hi - lo) * i / (count - 1));
            } else if (law_x_given) {
                xs.push_back(law_x);
            } else {
                throw CLI::ValidationError("law eval", "need -x or --grid");
            }
            std::function<double(double)> f;
            gffm::laws::BridgeSpec b{w0, wT, T};
            if (law_name == "local-time")
                f = [&](double l) { return gffm::laws::local_time_survival(b, l); };
            else if (law_name == "bridge-min")
                f = [&](double a) { return gffm::laws::bridge_min_survival(b, a); };
            else if (law_name == "fps-laplace")
                f = [&](double u) {
                    return gffm::laws::fps_laplace(law_c, law_m, law_hc, law_a, u);
                };
            else if (law_name == "bm-hitting")
                f = [&](double t) { return gffm::laws::bm_hitting_cdf(law_m, law_a, t); };
            else if (law_name == "last-visit")
                f = [&](double t) { return gffm::laws::last_visit_cdf(b, law_a, t); };
            else if (law_name == "two-set") {
                if (c_law.graph_path.empty())
                    throw CLI::ValidationError("law eval", "two-set law needs --graph");
                auto [net, bc] = gffm::load_network_file(c_law.graph_path);
                auto kernel = gffm::effective_kernel(net, bc.boundary);
                auto spec = std::make_shared<gffm::laws::TwoSetLawSpec>(
                    gffm::laws::TwoSetLawSpec{std::move(kernel), std::move(bc)});
                f = [spec](double l) { return gffm::laws::two_set_survival(*spec, l); };
            } else {
                throw CLI::ValidationError("law", "unknown law " + law_name);
            }
            std::ostringstream os;
            os.precision(12);
            os << "x,value\n";
            for (double x : xs) os << x << ',' << f(x) << '\n';
            emit(c_law, os.str());
            return 0;
        }

        if (field_cmd->parsed()) {
            c_field.load_config();
            auto [net, bc] = gffm::load_network_file(c_field.graph_path);
            const gffm::FieldSampler sampler(net, bc);
            const std::size_t n = c_field.resolve_replicates(1000);
            gffm::stats::RandomStream root(c_field.resolve_seed(7));
            std::ostringstream os;
            os.precision(12);
            os << "replicate,vertex,value\n";
            for (std::size_t rep = 0; rep < n; ++rep) {
                gffm::stats::RandomStream s = root.substream(rep);
                gffm::FieldSample f = sampler.sample(s);
                for (int v = 0; v < net.vertex_count(); ++v)
                    os << rep << ',' << net.name(v) << ',' << f.values[v] << '\n';
            }
            emit(c_field, os.str());
            return 0;
        }

        if (metric_cmd->parsed()) {
            c_metric.load_config();
            auto [net, bc] = gffm::load_network_file(c_metric.graph_path);
            const gffm::FieldSampler sampler(net, bc);
            const std::size_t n = c_metric.resolve_replicates(1000);
            gffm::stats::RandomStream root(c_metric.resolve_seed(7));
            std::ostringstream os;
            os.precision(12);
            os << "replicate,edge,L,min\n";
            for (std::size_t rep = 0; rep < n; ++rep) {
                gffm::stats::RandomStream s = root.substream(rep);
                gffm::FieldSample f = sampler.sample(s);
                gffm::AnnotatedSample lt =
                    gffm::annotate_local_times(net, gffm::FieldSample(f), s);
                gffm::AnnotatedSample mn = gffm::annotate_minima(net, std::move(f), s);
                for (std::size_t ei = 0; ei < net.edges().size(); ++ei)
                    os << rep << ',' << ei << ',' << lt.edge_local_times[ei] << ','
                       << mn.edge_minima[ei] << '\n';
            }
            emit(c_metric, os.str());
            return 0;
        }

        if (levy_cmd->parsed()) {
            c_levy.load_config();
            auto [net, bc] = gffm::load_network_file(c_levy.graph_path);
            const std::size_t n = c_levy.resolve_replicates(1000);
            gffm::LevySamples ls = gffm::levy_pair_samples(net, bc, n, c_levy.resolve_seed(7),
                                                           c_levy.resolve_threads());
            std::ostringstream os;
            os.precision(12);
            os << "replicate,vertex,abs_phi,delta,phiMinusI,negI\n";
            for (std::size_t rep = 0; rep < n; ++rep)
                for (int v = 0; v < net.vertex_count(); ++v)
                    os << rep << ',' << net.name(v) << ',' << ls.abs_phi[v][rep] << ','
                       << ls.delta[v][rep] << ',' << ls.phi_minus_i[v][rep] << ','
                       << ls.neg_i[v][rep] << '\n';
            emit(c_levy, os.str());
            return 0;
        }

        if (fsample_cmd->parsed()) {
            c_fsample.load_config();
            auto [net, bc] = gffm::load_network_file(c_fsample.graph_path);
            const gffm::RefinedNetwork rn =
                gffm::refine(net, bc, c_fsample.resolve_refinement(16));
            const gffm::FieldSampler sampler(rn.net, rn.bc);
            const std::size_t n = c_fsample.resolve_replicates(1000);
            const int x0 = x0_name.empty() ? -1 : rn.net.index_of(x0_name);
            gffm::stats::RandomStream root(c_fsample.resolve_seed(7));
            std::ostringstream os;
            os.precision(12);
            os << "replicate,level,bracket,r_eff,c_eff,drop_at_x0\n";
            for (std::size_t rep = 0; rep < n; ++rep) {
                gffm::stats::RandomStream s = root.substream(rep);
                gffm::FieldSample f = sampler.sample(s);
                gffm::AnnotatedSample ann = gffm::annotate_minima(rn.net, std::move(f), s);
                gffm::FirstPassageSet fps =
                    gffm::grow_fps(rn, ann.field.values, ann.edge_minima, level);
                gffm::FpsObservables obs = gffm::fps_observables(rn, fps);
                for (bool upper : {false, true}) {
                    os << rep << ',' << level << ',' << (upper ? "upper" : "lower") << ','
                       << (upper ? obs.r_upper : obs.r_lower) << ','
                       << (upper ? obs.c_upper : obs.c_lower) << ',';
                    if (x0 >= 0) os << gffm::resistance_drop(rn, fps, x0, upper);
                    os << '\n';
                }
            }
            emit(c_fsample, os.str());
            return 0;
        }

        if (flap_cmd->parsed()) {
            c_flap.load_config();
            auto [net, bc] = gffm::load_network_file(c_flap.graph_path);
            auto ests = gffm::fps_laplace_estimate(
                net, bc, lap_level, parse_doubles(u_csv), c_flap.resolve_refinement(32),
                c_flap.resolve_replicates(10000), c_flap.resolve_seed(7),
                c_flap.resolve_threads());
            std::ostringstream os;
            os.precision(12);
            os << "u,lower,lower_se,upper,upper_se,closed_form\n";
            for (const auto& e : ests)
                os << e.u << ',' << e.lower << ',' << e.lower_se << ',' << e.upper << ','
                   << e.upper_se << ',' << e.closed_form << '\n';
            emit(c_flap, os.str());
            return 0;
        }

        if (fnested_cmd->parsed()) {
            c_fnested.load_config();
            auto [net, bc] = gffm::load_network_file(c_fnested.graph_path);
            const gffm::RefinedNetwork rn =
                gffm::refine(net, bc, c_fnested.resolve_refinement(16));
            const gffm::FieldSampler sampler(rn.net, rn.bc);
            const std::vector<double> levels = parse_doubles(levels_csv);
            const int x0 = rn.net.index_of(nested_x0);
            const std::size_t n = c_fnested.resolve_replicates(1000);
            gffm::stats::RandomStream root(c_fnested.resolve_seed(7));
            std::ostringstream os;
            os.precision(12);
            os << "replicate,level,bracket,phi_x0,maximin,drop_at_x0\n";
            for (std::size_t rep = 0; rep < n; ++rep) {
                gffm::stats::RandomStream s = root.substream(rep);
                gffm::NestedFpsSample sample = gffm::nested_fps_once(rn, sampler, levels, x0, s);
                for (std::size_t i = 0; i < levels.size(); ++i)
                    for (bool upper : {false, true})
                        os << rep << ',' << levels[i] << ',' << (upper ? "upper" : "lower")
                           << ',' << sample.phi_x0 << ',' << sample.terminal_maximin << ','
                           << (upper ? sample.drops_upper[i] : sample.drops_lower[i]) << '\n';
            }
            emit(c_fnested, os.str());
            return 0;
        }

        if (fball_cmd->parsed()) {
            c_fball.load_config();
            auto [net, bc] = gffm::load_network_file(c_fball.graph_path);
            const gffm::RefinedNetwork rn = gffm::refine(net, bc, c_fball.resolve_refinement(16));
            const gffm::FieldSampler sampler(rn.net, rn.bc);
            const std::vector<double> radii = parse_doubles(radii_csv);
            const int x0 = rn.net.index_of(ball_x0);
            const std::size_t n = c_fball.resolve_replicates(1000);
            gffm::stats::RandomStream root(c_fball.resolve_seed(7));
            std::ostringstream os;
            os.precision(12);
            os << "replicate,radius,phi_x0,delta_x0,drop_at_x0\n";
            for (std::size_t rep = 0; rep < n; ++rep) {
                gffm::stats::RandomStream s = root.substream(rep);
                gffm::MetricBallSample sample =
                    gffm::metric_ball_once(rn, sampler, radii, x0, s);
                for (std::size_t i = 0; i < radii.size(); ++i)
                    os << rep << ',' << radii[i] << ',' << sample.phi_x0 << ','
                       << sample.delta_x0 << ',' << sample.drops[i] << '\n';
            }
            emit(c_fball, os.str());
            return 0;
        }

        if (verify_cmd->parsed()) {
            c_verify.load_config();
            const auto names = gffm::experiments::suite_names();
            if (std::find(names.begin(), names.end(), suite) == names.end())
                throw CLI::ValidationError("verify", "unknown suite " + suite);
            return run_verify(c_verify, suite, scale);
        }

        if (lattice_cmd->parsed()) {
            c_lattice.load_config();
            if (rows < 8 || cols < 8)
                throw CLI::ValidationError("lattice", "grid must be at least 8x8");
            gffm::experiments::SuiteOptions opt;
            if (c_lattice.seed_given)
                opt.seeds = {c_lattice.seed};
            else if (const char* env = std::getenv("GFFM_SEED"))
                opt.seeds = {std::strtoull(env, nullptr, 10)};
            opt.threads = c_lattice.resolve_threads();
            if (c_lattice.replicates_given)
                opt.scale = static_cast<double>(c_lattice.replicates) / 1e4;
            gffm::experiments::SuiteResult res =
                gffm::experiments::lattice_suite(opt, rows, cols, periodic);
            write_suite_files(res, c_lattice.resolve_out("out"));
            std::cout << format_reports(res);
            return res.pass ? 0 : 1;
        }
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        app.exit(e);
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
