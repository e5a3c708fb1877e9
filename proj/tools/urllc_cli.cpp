// Command-line front end: reproducible experiments over the library, CSV out.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "urllc/battery.hpp"
#include "urllc/codec.hpp"
#include "urllc/fb_bounds.hpp"
#include "urllc/moop.hpp"
#include "urllc/os_decoder.hpp"
#include "urllc/tradeoff.hpp"

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitInfeasible = 3;
constexpr int kExitIo = 4;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// `start:step:stop` inclusive dB grid.
std::vector<double> parse_grid(const std::string& s) {
    double start = 0, step = 0, stop = 0;
    char c1 = 0, c2 = 0;
    std::istringstream is(s);
    if (!(is >> start >> c1 >> step >> c2 >> stop) || c1 != ':' || c2 != ':' || step <= 0)
        throw UsageError("bad grid '" + s + "', expected start:step:stop with step > 0");
    std::vector<double> g;
    for (double v = start; v <= stop + 1e-9 * step; v += step) g.push_back(v);
    if (g.empty()) throw UsageError("empty grid '" + s + "'");
    return g;
}

// Flat `key = value` config file; '#' comments and blank lines ignored.
std::map<std::string, std::string> read_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file: " + path);
    std::map<std::string, std::string> kv;
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        auto trim = [](std::string s) {
            const auto a = s.find_first_not_of(" \t\r");
            const auto b = s.find_last_not_of(" \t\r");
            return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
        };
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (!key.empty()) kv[key] = val;
    }
    return kv;
}

double config_num(const std::map<std::string, std::string>& kv, const std::string& key, double dflt) {
    const auto it = kv.find(key);
    if (it == kv.end()) return dflt;
    try {
        std::size_t pos = 0;
        const double v = std::stod(it->second, &pos);
        if (pos != it->second.size()) throw std::invalid_argument(it->second);
        return v;
    } catch (const std::exception&) {
        throw UsageError("config key '" + key + "' has non-numeric value '" + it->second + "'");
    }
}

urllc::ConstraintSet constraints_from(const std::map<std::string, std::string>& kv) {
    urllc::ConstraintSet cs;
    cs.L_m = config_num(kv, "L_m", cs.L_m);
    cs.eps_m = config_num(kv, "eps_m", cs.eps_m);
    cs.T_s = config_num(kv, "T_s", cs.T_s);
    cs.T_b = config_num(kv, "T_b", cs.T_b);
    cs.r_m = config_num(kv, "r_m", cs.r_m);
    cs.rho_m_db = config_num(kv, "rho_m_db", cs.rho_m_db);
    cs.validate();
    return cs;
}

urllc::TradeoffModel model_from(const std::map<std::string, std::string>& kv,
                                const std::string& model_path) {
    if (!model_path.empty()) {
        const auto mk = read_config(model_path);
        urllc::TradeoffModel m;
        m.a = config_num(mk, "a", 0.0);
        m.b = config_num(mk, "b", 0.0);
        m.fit_residual = config_num(mk, "residual", 0.0);
        if (m.a <= 0 || m.b <= 0) throw UsageError("model file must define a > 0 and b > 0");
        return m;
    }
    urllc::TradeoffModel m = urllc::paper_preset_model();
    m.a = config_num(kv, "a", m.a);
    m.b = config_num(kv, "b", m.b);
    return m;
}

// Output stream: '-' or empty means standard output.
class Output {
public:
    explicit Output(const std::string& path) {
        if (!path.empty() && path != "-") {
            file_.open(path);
            if (!file_) throw IoError("cannot open output file: " + path);
        }
    }
    std::ostream& os() { return file_.is_open() ? file_ : std::cout; }

private:
    std::ofstream file_;
};

void echo_config(std::ostream& os, const std::string& cmd,
                 const std::vector<std::pair<std::string, std::string>>& kv) {
    os << "# command: " << cmd << '\n';
    for (const auto& [k, v] : kv) os << "# " << k << " = " << v << '\n';
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

urllc::CodeSpec load_code(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open code file: " + path);
    return urllc::read_code(in);
}

double parse_theta(const std::string& s) {
    if (s == "inf" || s == "infinity") return std::numeric_limits<double>::infinity();
    try {
        const double t = std::stod(s);
        if (t >= 1.0) return t;
    } catch (const std::exception&) {
    }
    throw UsageError("bad theta '" + s + "', expected a number >= 1 or 'inf'");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Finite-blocklength URLLC design toolkit"};
    app.require_subcommand(1);

    std::string config_path, out_path, code_path, model_path, points_path;
    std::string snr_grid = "-2:0.1:8", alpha_grid = "0:0.005:1", theta_str = "1";
    std::size_t n = 128;
    double eps = 1e-5, rate = 0.5, grid_step = 0.01;
    int order = 0, quad_order = 64, m_field = 7, t_design = 10;
    bool extend = true;
    std::uint64_t trials = 10000, target_errors = 100, seed = 0;
    unsigned threads = std::max(1u, std::thread::hardware_concurrency());
    std::string power_cost = "shannon_log";
    double cap_j = 1e-6, distance = 100.0, wa = 1.0, wb = 1.0 / 9.0;
    bool seed_given = false;

    const auto add_common = [&](CLI::App* sub, bool stochastic) {
        sub->add_option("--config", config_path, "flat key=value config file");
        sub->add_option("-o,--output", out_path, "output file ('-' = stdout)");
        sub->add_option("--threads", threads, "worker threads");
        if (stochastic)
            sub->add_option("--seed", seed, "RNG seed (mandatory)")
                ->each([&](const std::string&) { seed_given = true; });
    };

    auto* c_bounds = app.add_subcommand("bounds", "capacity/dispersion/rate over an SNR grid");
    c_bounds->add_option("--n", n, "blocklength");
    c_bounds->add_option("--eps", eps, "target CEP");
    c_bounds->add_option("--snr-db", snr_grid, "start:step:stop grid in dB");
    c_bounds->add_option("--quad-order", quad_order, "Gauss-Hermite order");
    add_common(c_bounds, false);

    auto* c_codec = app.add_subcommand("codec", "code construction");
    auto* c_build = c_codec->add_subcommand("build", "build an (extended) BCH code file");
    c_build->add_option("--m", m_field, "field degree");
    c_build->add_option("--t", t_design, "designed error-correcting capability");
    c_build->add_flag("--extend,!--no-extend", extend, "append overall even parity");
    add_common(c_build, false);

    auto* c_cep = app.add_subcommand("simulate-cep", "Monte Carlo codeword error probability");
    c_cep->add_option("--code", code_path, "code file")->required();
    c_cep->add_option("--order", order, "reprocessing order s");
    c_cep->add_option("--snr-db", snr_grid, "start:step:stop grid in dB");
    c_cep->add_option("--trials", trials, "max trials per point");
    c_cep->add_option("--target-errors", target_errors, "early-stop error count");
    add_common(c_cep, true);

    auto* c_fit = app.add_subcommand("fit-model", "fit the complexity/power-gap law");
    c_fit->add_option("--points", points_path, "CSV with delta_rho_db,log2_k")->required();
    add_common(c_fit, false);

    auto* c_rate = app.add_subcommand("constrained-rate", "latency-constrained maximal rate");
    c_rate->add_option("--model", model_path, "model file (default: built-in preset)");
    c_rate->add_option("--n", n, "blocklength");
    c_rate->add_option("--eps", eps, "target CEP");
    c_rate->add_option("--snr-db", snr_grid, "start:step:stop grid in dB");
    add_common(c_rate, false);

    auto* c_pareto = app.add_subcommand("pareto", "Pareto boundary of the rate/power trade");
    c_pareto->add_option("--rate", rate, "reference rate r_s");
    c_pareto->add_option("--n", n, "blocklength");
    c_pareto->add_option("--model", model_path, "model file (default: built-in preset)");
    c_pareto->add_option("--grid-step", grid_step, "delta_rho step in dB");
    add_common(c_pareto, false);

    auto* c_sweep = app.add_subcommand("scalarize-sweep", "optimizer choice as alpha sweeps");
    c_sweep->add_option("--rate", rate, "reference rate r_s");
    c_sweep->add_option("--n", n, "blocklength");
    c_sweep->add_option("--model", model_path, "model file (default: built-in preset)");
    c_sweep->add_option("--theta", theta_str, "1, finite >= 1, or inf");
    c_sweep->add_option("--alphas", alpha_grid, "start:step:stop alpha grid");
    c_sweep->add_option("--grid-step", grid_step, "delta_rho step in dB");
    c_sweep->add_option("--power-cost", power_cost, "shannon_log | raw_db_log")
        ->check(CLI::IsMember({"shannon_log", "raw_db_log"}));
    add_common(c_sweep, false);

    auto* c_batt = app.add_subcommand("battery", "battery-powered transmission case study");
    c_batt->add_option("--rate", rate, "reference rate r_s");
    c_batt->add_option("--n", n, "blocklength");
    c_batt->add_option("--model", model_path, "model file (default: built-in preset)");
    c_batt->add_option("--theta", theta_str, "1, finite >= 1, inf, fixed0, or fixed1");
    c_batt->add_option("--capacity-j", cap_j, "battery capacity in joules");
    c_batt->add_option("--distance-m", distance, "link distance in meters");
    c_batt->add_option("--weight-a", wa, "objective weight A");
    c_batt->add_option("--weight-b", wb, "objective weight B");
    c_batt->add_option("--grid-step", grid_step, "delta_rho step in dB");
    add_common(c_batt, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << '\n';
        return kExitUsage;
    }

    try {
        const auto kv = config_path.empty() ? std::map<std::string, std::string>{} : read_config(config_path);
        if (threads == 0) threads = 1;

        if (c_bounds->parsed()) {
            n = static_cast<std::size_t>(config_num(kv, "n", static_cast<double>(n)));
            eps = config_num(kv, "eps_m", eps);
            Output out(out_path);
            echo_config(out.os(), "bounds",
                        {{"n", std::to_string(n)}, {"eps", fmt(eps)}, {"snr_db", snr_grid},
                         {"quad_order", std::to_string(quad_order)}});
            out.os() << "snr_db,capacity,dispersion,rate\n";
            for (double snr_db : parse_grid(snr_grid)) {
                const double rho = urllc::db_to_linear(snr_db);
                const urllc::ChannelMoments cm = urllc::channel_moments(rho, {quad_order, true});
                out.os() << fmt(snr_db) << ',' << fmt(cm.capacity) << ',' << fmt(cm.dispersion) << ','
                         << fmt(urllc::max_rate(n, rho, eps, {quad_order, true})) << '\n';
            }
        } else if (c_build->parsed()) {
            urllc::CodeSpec code = urllc::build_bch_code(m_field, t_design);
            if (extend) code = urllc::extend_code(code);
            Output out(out_path);
            urllc::write_code(out.os(), code);
        } else if (c_cep->parsed()) {
            if (!seed_given) throw UsageError("simulate-cep: --seed is mandatory");
            const urllc::CodeSpec code = load_code(code_path);
            const urllc::DecoderConfig cfg{.s = order};
            Output out(out_path);
            echo_config(out.os(), "simulate-cep",
                        {{"code", code_path}, {"n", std::to_string(code.n)},
                         {"k", std::to_string(code.k)}, {"order", std::to_string(order)},
                         {"snr_db", snr_grid}, {"trials", std::to_string(trials)},
                         {"target_errors", std::to_string(target_errors)},
                         {"seed", std::to_string(seed)}});
            out.os() << "snr_db,order,trials,errors,cep,ci_low,ci_high,k_complexity\n";
            for (double snr_db : parse_grid(snr_grid)) {
                const auto est = urllc::estimate_cep(code, cfg, urllc::db_to_linear(snr_db), trials,
                                                     target_errors, seed, threads);
                out.os() << fmt(snr_db) << ',' << order << ',' << est.trials << ',' << est.errors << ','
                         << fmt(est.cep) << ',' << fmt(est.ci_low) << ',' << fmt(est.ci_high) << ','
                         << fmt(urllc::complexity_per_info_bit(code.n, code.k, order, cfg.q)) << '\n';
            }
        } else if (c_fit->parsed()) {
            std::ifstream in(points_path);
            if (!in) throw IoError("cannot open points file: " + points_path);
            std::vector<urllc::GapPoint> pts;
            std::string line;
            while (std::getline(in, line)) {
                if (line.empty() || line[0] == '#' || std::isalpha(static_cast<unsigned char>(line[0])))
                    continue;
                std::istringstream ls(line);
                double d = 0, l = 0;
                char comma = 0;
                if (ls >> d >> comma >> l) pts.push_back({d, l});
            }
            const urllc::TradeoffModel m = urllc::fit_model(pts);
            Output out(out_path);
            out.os() << "a=" << fmt(m.a) << "\nb=" << fmt(m.b) << "\nresidual=" << fmt(m.fit_residual)
                     << '\n';
        } else if (c_rate->parsed()) {
            n = static_cast<std::size_t>(config_num(kv, "n", static_cast<double>(n)));
            const urllc::ConstraintSet cs = constraints_from(kv);
            const urllc::TradeoffModel model = model_from(kv, model_path);
            eps = cs.eps_m;
            Output out(out_path);
            echo_config(out.os(), "constrained-rate",
                        {{"n", std::to_string(n)}, {"eps", fmt(eps)}, {"snr_db", snr_grid},
                         {"a", fmt(model.a)}, {"b", fmt(model.b)}, {"L_m", fmt(cs.L_m)},
                         {"T_s", fmt(cs.T_s)}, {"T_b", fmt(cs.T_b)}});
            out.os() << "snr_db,rate_unconstrained,rate_constrained,delta_rho_min_db\n";
            for (double snr_db : parse_grid(snr_grid)) {
                const double r_u = urllc::max_rate(n, urllc::db_to_linear(snr_db), eps);
                const double r_c = urllc::constrained_max_rate(n, snr_db, eps, model, cs);
                const double k = std::max(1.0, static_cast<double>(n) * r_c);
                const double dmin =
                    urllc::min_power_penalty_db(model, urllc::complexity_budget(cs, n, k));
                out.os() << fmt(snr_db) << ',' << fmt(r_u) << ',' << fmt(r_c) << ',' << fmt(dmin)
                         << '\n';
            }
        } else if (c_pareto->parsed()) {
            n = static_cast<std::size_t>(config_num(kv, "n", static_cast<double>(n)));
            const urllc::ConstraintSet cs = constraints_from(kv);
            const urllc::TradeoffModel model = model_from(kv, model_path);
            const urllc::ReferencePair ref = urllc::make_reference(n, rate, cs.eps_m);
            const auto bd = urllc::pareto_boundary(ref, cs, model, grid_step);
            Output out(out_path);
            echo_config(out.os(), "pareto",
                        {{"n", std::to_string(n)}, {"rate", fmt(rate)}, {"eps_m", fmt(cs.eps_m)},
                         {"rho_s_db", fmt(ref.rho_s_db)}, {"grid_step_db", fmt(grid_step)},
                         {"a", fmt(model.a)}, {"b", fmt(model.b)}});
            out.os() << "delta_rho_db,delta_r,rate,snr_db\n";
            for (const auto& p : bd)
                out.os() << fmt(p.delta_rho_db) << ',' << fmt(p.delta_r) << ',' << fmt(p.rate) << ','
                         << fmt(p.snr_db) << '\n';
        } else if (c_sweep->parsed()) {
            n = static_cast<std::size_t>(config_num(kv, "n", static_cast<double>(n)));
            const urllc::ConstraintSet cs = constraints_from(kv);
            const urllc::TradeoffModel model = model_from(kv, model_path);
            const urllc::ReferencePair ref = urllc::make_reference(n, rate, cs.eps_m);
            const auto bd = urllc::pareto_boundary(ref, cs, model, grid_step);
            urllc::ScalarizationSpec spec;
            spec.theta = parse_theta(theta_str);
            spec.power_cost_mode = power_cost == "raw_db_log" ? urllc::PowerCostMode::raw_db_log
                                                              : urllc::PowerCostMode::shannon_log;
            Output out(out_path);
            echo_config(out.os(), "scalarize-sweep",
                        {{"n", std::to_string(n)}, {"rate", fmt(rate)}, {"theta", theta_str},
                         {"alphas", alpha_grid}, {"power_cost", power_cost},
                         {"grid_step_db", fmt(grid_step)}});
            out.os() << "alpha,chosen_delta_r,chosen_delta_rho_db\n";
            for (double a : parse_grid(alpha_grid)) {
                spec.alpha = a;
                const auto& p = bd[urllc::optimize_index(bd, spec)];
                out.os() << fmt(a) << ',' << fmt(p.delta_r) << ',' << fmt(p.delta_rho_db) << '\n';
            }
        } else if (c_batt->parsed()) {
            n = static_cast<std::size_t>(config_num(kv, "n", static_cast<double>(n)));
            const urllc::ConstraintSet cs = constraints_from(kv);
            const urllc::TradeoffModel model = model_from(kv, model_path);
            const urllc::ReferencePair ref = urllc::make_reference(n, rate, cs.eps_m);
            urllc::LinkBudget link;
            link.distance_m = config_num(kv, "distance_m", distance);
            urllc::BatteryState battery;
            battery.capacity_joules = config_num(kv, "capacity_j", cap_j);
            battery.remaining_joules = battery.capacity_joules;
            urllc::ScalarizationSpec spec;
            urllc::BatteryPolicy policy = urllc::BatteryPolicy::adaptive;
            if (theta_str == "fixed0")
                policy = urllc::BatteryPolicy::fixed_alpha0;
            else if (theta_str == "fixed1")
                policy = urllc::BatteryPolicy::fixed_alpha1;
            else
                spec.theta = parse_theta(theta_str);
            spec.A = wa;
            spec.B = wb;
            spec.norm_r = 0.0;  // auto-normalize to the boundary endpoint ranges
            spec.norm_rho = 0.0;
            const urllc::SimResult res =
                urllc::run_simulation(ref, cs, model, spec, link, battery, policy, grid_step);
            Output out(out_path);
            echo_config(out.os(), "battery",
                        {{"n", std::to_string(n)}, {"rate", fmt(rate)}, {"theta", theta_str},
                         {"capacity_j", fmt(battery.capacity_joules)},
                         {"distance_m", fmt(link.distance_m)}, {"A", fmt(spec.A)},
                         {"B", fmt(spec.B)}, {"grid_step_db", fmt(grid_step)}});
            out.os() << "step,t,alpha,rate,snr_db,energy_j\n";
            for (std::size_t i = 0; i < res.steps.size(); ++i) {
                const auto& st = res.steps[i];
                out.os() << i << ',' << fmt(st.t) << ',' << fmt(st.alpha) << ',' << fmt(st.rate) << ','
                         << fmt(st.snr_db) << ',' << fmt(st.energy_j) << '\n';
            }
            out.os() << "# summary: transmissions=" << res.total_transmissions
                     << " bits=" << fmt(res.total_info_bits)
                     << " bits_per_joule=" << fmt(urllc::energy_efficiency(res, battery)) << '\n';
        }
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const urllc::InfeasibleError& e) {
        std::cerr << "infeasible: " << e.what() << '\n';
        return kExitInfeasible;
    } catch (const IoError& e) {
        std::cerr << "I/O error: " << e.what() << '\n';
        return kExitIo;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    return 0;
}
