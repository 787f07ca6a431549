#include <algorithm>
#include <atomic>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "acckit/errors.hpp"
#include "acckit/lsq.hpp"
#include "acckit/observability.hpp"
#include "acckit/sigma_filter.hpp"
#include "acckit/simulator.hpp"
#include "acckit/stability.hpp"
#include "acckit/trajectory_io.hpp"

namespace {

using nlohmann::json;
using namespace acckit;

// ---------------------------------------------------------------- simulate

struct SimFlags {
    std::vector<double> params{0.1, 0.2, 1.2};
    std::string profile{"pe"};
    double base{25.0};
    double step_to{20.0};
    double step_at{300.0};
    std::vector<std::vector<double>> sinusoids;
    std::vector<std::vector<double>> pieces;
    double duration{600.0};
    double dt{0.1};
    std::vector<double> init{40.0, 30.0};
    std::vector<double> process_noise{0.0, 0.0};
    std::vector<double> meas_noise{0.0, 0.0};
    std::uint64_t seed{0};
};

void add_sim_flags(CLI::App* cmd, SimFlags& f) {
    cmd->add_option("--params", f.params,
                    "Ground-truth controller gains alpha,beta,tau [1/s^2, 1/s, s]")
        ->delimiter(',')
        ->capture_default_str();
    cmd->add_option("--profile", f.profile,
                    "Leader velocity profile: constant | step | pe | pe20 | sinusoids | piecewise")
        ->check(CLI::IsMember({"constant", "step", "pe", "pe20", "sinusoids", "piecewise"}))
        ->capture_default_str();
    cmd->add_option("--base", f.base, "Base leader velocity [m/s] (constant/step/sinusoids)")
        ->capture_default_str();
    cmd->add_option("--step-to", f.step_to, "Velocity after the step [m/s]")->capture_default_str();
    cmd->add_option("--step-at", f.step_at, "Step time [s]")->capture_default_str();
    cmd->add_option("--sinusoid", f.sinusoids,
                    "Add one sinusoid as amplitude,freq_hz[,phase_rad]; repeatable")
        ->delimiter(',');
    cmd->add_option("--piece", f.pieces, "Piecewise level as start_s,velocity_mps; repeatable")
        ->delimiter(',');
    cmd->add_option("--duration", f.duration, "Simulated span [s]")->capture_default_str();
    cmd->add_option("--dt", f.dt, "Sample period T [s]")->capture_default_str();
    cmd->add_option("--init", f.init, "Initial gap,velocity [m, m/s]")
        ->delimiter(',')
        ->capture_default_str();
    cmd->add_option("--process-noise", f.process_noise,
                    "Process noise std devs gap,velocity [m, m/s]")
        ->delimiter(',')
        ->capture_default_str();
    cmd->add_option("--meas-noise", f.meas_noise, "Measurement noise std devs gap,velocity [m, m/s]")
        ->delimiter(',')
        ->capture_default_str();
    cmd->add_option("--seed", f.seed, "RNG seed; same seed reproduces the run bit for bit")
        ->capture_default_str();
}

void require_size(const std::vector<double>& v, std::size_t n, const char* flag) {
    if (v.size() != n)
        throw invalid_argument_error(std::string(flag) + " expects " + std::to_string(n) +
                                     " comma-separated values");
}

LeaderProfile build_profile(const SimFlags& f) {
    if (f.profile == "constant") return LeaderProfile::constant(f.base);
    if (f.profile == "step") return LeaderProfile::step(f.base, f.step_to, f.step_at);
    if (f.profile == "pe") return LeaderProfile::pe();
    if (f.profile == "pe20") return LeaderProfile::pe20();
    if (f.profile == "sinusoids") {
        if (f.sinusoids.empty())
            throw invalid_argument_error("--profile sinusoids needs at least one --sinusoid");
        std::vector<Sinusoid> list;
        for (const auto& s : f.sinusoids) {
            if (s.size() != 2 && s.size() != 3)
                throw invalid_argument_error("--sinusoid expects amplitude,freq_hz[,phase_rad]");
            list.push_back(Sinusoid{s[0], s[1], s.size() == 3 ? s[2] : 0.0});
        }
        return LeaderProfile::sum_of_sinusoids(f.base, std::move(list));
    }
    // piecewise
    if (f.pieces.empty()) throw invalid_argument_error("--profile piecewise needs at least one --piece");
    LeaderProfile prof;
    prof.kind = LeaderProfile::Kind::piecewise;
    for (const auto& pc : f.pieces) {
        if (pc.size() != 2)
            throw invalid_argument_error("--piece expects start_s,velocity_mps");
        prof.pieces.emplace_back(pc[0], pc[1]);
    }
    return prof;
}

SimConfig build_sim_config(const SimFlags& f) {
    require_size(f.params, 3, "--params");
    require_size(f.init, 2, "--init");
    require_size(f.process_noise, 2, "--process-noise");
    require_size(f.meas_noise, 2, "--meas-noise");
    SimConfig cfg;
    cfg.params = CthpParams{f.params[0], f.params[1], f.params[2]};
    if (!validate_physical(cfg.params))
        throw invalid_argument_error(
            "--params must be physical: alpha >= 0, beta >= 0 and tau > 0");
    cfg.T = f.dt;
    cfg.duration = f.duration;
    cfg.init = PlatoonState{f.init[0], f.init[1]};
    cfg.process_std_p = f.process_noise[0];
    cfg.process_std_v = f.process_noise[1];
    cfg.meas_std_p = f.meas_noise[0];
    cfg.meas_std_v = f.meas_noise[1];
    cfg.seed = f.seed;
    return cfg;
}

std::string clean_path_for(const std::string& out) {
    const std::size_t dot = out.find_last_of('.');
    const std::size_t slash = out.find_last_of("/\\");
    if (dot == std::string::npos || (slash != std::string::npos && dot < slash))
        return out + "_clean";
    return out.substr(0, dot) + "_clean" + out.substr(dot);
}

void run_simulate(const SimFlags& f, const std::string& out) {
    const SimConfig cfg = build_sim_config(f);
    const std::vector<double> leader = leader_series(build_profile(f), cfg.duration, cfg.T);
    const auto [clean, noisy] = simulate_platoon(cfg, leader);
    const std::string clean_path = clean_path_for(out);
    write_csv(noisy, out);
    write_csv(clean, clean_path);
    std::cout << "wrote " << out << " and " << clean_path << " (" << noisy.size()
              << " samples each)\n";
}

// ---------------------------------------------------------------- estimate

struct EstFlags {
    std::string in;
    std::string method{"ukf"};
    // CSV schema for --in
    std::string col_time{"t"};
    std::string col_u{"u"};
    std::string col_v{"v"};
    std::string col_gap{"p"};
    std::string col_pl;
    std::string col_pf;
    std::string col_engaged;
    double lead_length{0.0};
    double resample_dt{0.0};
    // filter configuration
    std::vector<double> x0{35.0, 25.0, 0.08, 0.12, 1.5};
    std::vector<double> p0_diag{1.0, 1.0, 1.0, 1.0, 1.0};
    std::vector<double> q_diag{2e-5, 5e-6, 1e-6, 1e-6, 1e-6};
    std::vector<double> r_diag{0.8, 0.2};
    double ut_a{1.0};
    double ut_b{-2.0}; // 3 - n for the 5-state filter
    double ut_eps{0.0};
    bool spread_from_q{false};
    // least-squares configuration
    double sigma{0.001};
    std::vector<double> ls_x0{0.98, 0.01, 0.01};
    double ls_p0{0.001};
    double mu{1.01};
    std::uint64_t warm_start{0};
    // outputs / repetition
    std::string summary;
    std::string trace;
    int repeat{1};
    bool parallel{false};
    SimFlags sim;
};

Trajectory load_input(const EstFlags& f) {
    CsvSchema schema;
    schema.col_time = f.col_time;
    schema.col_u = f.col_u;
    schema.col_v = f.col_v;
    schema.col_gap = f.col_gap;
    schema.col_pl = f.col_pl;
    schema.col_pf = f.col_pf;
    schema.lead_length = f.lead_length;
    schema.col_engaged = f.col_engaged;
    if (!f.col_pl.empty() || !f.col_pf.empty()) schema.col_gap.clear();

    if (f.resample_dt > 0.0) {
        const RawSeries raw = load_csv_raw(f.in, schema);
        return resample(raw, f.resample_dt);
    }
    if (!f.col_engaged.empty()) {
        std::vector<Trajectory> segs = load_csv_segments(f.in, schema);
        if (segs.empty()) throw insufficient_data_error("no engaged segment in '" + f.in + "'");
        auto longest = std::max_element(
            segs.begin(), segs.end(),
            [](const Trajectory& a, const Trajectory& b) { return a.size() < b.size(); });
        return *longest;
    }
    return load_csv(f.in, schema);
}

struct EstOutcome {
    CthpParams params{};
    double mae_gap{0.0};
    double mae_velocity{0.0};
};

EstOutcome estimate_once(const EstFlags& f, const Trajectory& traj, bool want_trace,
                         const std::string& trace_path) {
    EstOutcome out;
    if (f.method == "ukf") {
        require_size(f.x0, 5, "--x0");
        require_size(f.p0_diag, 5, "--p0-diag");
        require_size(f.q_diag, 5, "--q-diag");
        require_size(f.r_diag, 2, "--r-diag");
        GaussianBelief init;
        init.mean = Eigen::Map<const Eigen::VectorXd>(f.x0.data(), 5);
        init.cov = Eigen::Map<const Eigen::VectorXd>(f.p0_diag.data(), 5).asDiagonal();
        NoiseConfig noise;
        noise.Q = Eigen::Map<const Eigen::VectorXd>(f.q_diag.data(), 5).asDiagonal();
        noise.R = Eigen::Map<const Eigen::VectorXd>(f.r_diag.data(), 2).asDiagonal();
        UtConfig ut;
        ut.a = f.ut_a;
        ut.b = f.ut_b;
        ut.eps = f.ut_eps;
        const EstimateTrace tr = run_dukf(traj, init, noise, ut, !f.spread_from_q);
        if (want_trace) write_trace_csv(tr, traj, trace_path);
        out.params = tr.final_params;
        out.mae_gap = tr.mae_gap;
        out.mae_velocity = tr.mae_velocity;
        return out;
    }
    if (want_trace)
        throw invalid_argument_error("--trace is only produced by the ukf method");
    require_size(f.ls_x0, 3, "--ls-x0");
    LsConfig cfg;
    cfg.sigma = f.sigma;
    cfg.x0 = Eigen::Vector3d(f.ls_x0[0], f.ls_x0[1], f.ls_x0[2]);
    cfg.p0_scale = f.ls_p0;
    cfg.mu = f.mu;
    cfg.warm_start_rows = static_cast<std::size_t>(f.warm_start);
    const LsMode mode = f.method == "ls-be"   ? LsMode::batch
                        : f.method == "ls-re" ? LsMode::recursive
                                              : LsMode::recursive_exp;
    const LsRunResult r = run_ls(traj, mode, cfg);
    out.params = r.params;
    out.mae_gap = r.mae_gap;
    out.mae_velocity = r.mae_velocity;
    return out;
}

void emit_summary(const EstFlags& f, const EstOutcome& o, int runs) {
    json j;
    j["method"] = f.method;
    j["runs"] = runs;
    j["alpha"] = o.params.alpha;
    j["beta"] = o.params.beta;
    j["tau"] = o.params.tau;
    j["mae_gap_m"] = o.mae_gap;
    j["mae_velocity_mps"] = o.mae_velocity;
    const StabilityReport rep = stability_report(o.params);
    j["l2_stable"] = rep.l2_stable;
    j["linf_stable"] = rep.linf_stable;
    const std::string text = j.dump(2) + "\n";
    if (f.summary.empty() || f.summary == "-") {
        std::cout << text;
        return;
    }
    std::ofstream os(f.summary);
    if (!os) throw io_error("cannot open '" + f.summary + "' for writing");
    os << text;
    if (!os.good()) throw io_error("failed while writing '" + f.summary + "'");
}

void run_estimate(const EstFlags& f) {
    if (f.repeat < 1) throw invalid_argument_error("--repeat must be at least 1");

    if (f.repeat == 1) {
        const Trajectory traj = f.in.empty()
                                    ? simulate_platoon(build_sim_config(f.sim),
                                                       leader_series(build_profile(f.sim),
                                                                     f.sim.duration, f.sim.dt))
                                          .second
                                    : load_input(f);
        const EstOutcome o = estimate_once(f, traj, !f.trace.empty(), f.trace);
        emit_summary(f, o, 1);
        return;
    }

    if (!f.in.empty())
        throw invalid_argument_error(
            "--repeat averages freshly seeded synthetic runs; it cannot be combined with --in");
    if (!f.trace.empty())
        throw invalid_argument_error("--trace needs a single run, not --repeat");

    const int n = f.repeat;
    std::vector<EstOutcome> results(static_cast<std::size_t>(n));
    std::vector<std::string> failures(static_cast<std::size_t>(n));
    const SimConfig base_cfg = build_sim_config(f.sim);
    const std::vector<double> leader = leader_series(build_profile(f.sim), f.sim.duration, f.sim.dt);

    auto one = [&](int i) {
        try {
            SimConfig cfg = base_cfg;
            cfg.seed = base_cfg.seed + static_cast<std::uint64_t>(i);
            const Trajectory noisy = simulate_platoon(cfg, leader).second;
            results[static_cast<std::size_t>(i)] = estimate_once(f, noisy, false, "");
        } catch (const std::exception& e) {
            failures[static_cast<std::size_t>(i)] = e.what();
        }
    };

    if (f.parallel) {
        const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
        const unsigned workers = std::min<unsigned>(hw, static_cast<unsigned>(n));
        std::atomic<int> next{0};
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) one(i);
            });
        for (auto& th : pool) th.join();
    } else {
        for (int i = 0; i < n; ++i) one(i);
    }

    for (int i = 0; i < n; ++i)
        if (!failures[static_cast<std::size_t>(i)].empty())
            throw numerical_breakdown_error("run " + std::to_string(i) + " (seed " +
                                            std::to_string(base_cfg.seed + static_cast<std::uint64_t>(i)) +
                                            "): " + failures[static_cast<std::size_t>(i)]);

    EstOutcome avg;
    for (const EstOutcome& r : results) {
        avg.params.alpha += r.params.alpha;
        avg.params.beta += r.params.beta;
        avg.params.tau += r.params.tau;
        avg.mae_gap += r.mae_gap;
        avg.mae_velocity += r.mae_velocity;
    }
    const double dn = static_cast<double>(n);
    avg.params.alpha /= dn;
    avg.params.beta /= dn;
    avg.params.tau /= dn;
    avg.mae_gap /= dn;
    avg.mae_velocity /= dn;
    emit_summary(f, avg, n);
}

// ---------------------------------------------------------------- reports

void write_json_report(const json& j, const std::string& path) {
    if (path.empty()) return;
    if (path == "-") {
        std::cout << j.dump(2) << "\n";
        return;
    }
    std::ofstream os(path);
    if (!os) throw io_error("cannot open '" + path + "' for writing");
    os << j.dump(2) << "\n";
    if (!os.good()) throw io_error("failed while writing '" + path + "'");
}

void run_stability(const std::vector<double>& params, const OmegaGrid& grid,
                   const std::string& json_path) {
    require_size(params, 3, "--params");
    const CthpParams th{params[0], params[1], params[2]};
    const StabilityReport rep = stability_report(th, grid);

    std::cout << "alpha = " << format_double(th.alpha) << "  beta = " << format_double(th.beta)
              << "  tau = " << format_double(th.tau) << "\n";
    std::cout << "L2   margin = " << format_double(rep.l2_margin)
              << "   strict string stable: " << (rep.l2_stable ? "YES" : "NO") << "\n";
    std::cout << "Linf margin = " << format_double(rep.linf_margin)
              << "   strict string stable: " << (rep.linf_stable ? "YES" : "NO") << "\n";
    std::cout << "peak |H(jw)| over [" << format_double(grid.omega_min) << ", "
              << format_double(grid.omega_max) << "] rad/s = " << format_double(rep.peak_gain)
              << " (diagnostic)\n";

    json j;
    j["alpha"] = th.alpha;
    j["beta"] = th.beta;
    j["tau"] = th.tau;
    j["l2_margin"] = rep.l2_margin;
    j["linf_margin"] = rep.linf_margin;
    j["peak_gain"] = rep.peak_gain;
    j["l2_stable"] = rep.l2_stable;
    j["linf_stable"] = rep.linf_stable;
    write_json_report(j, json_path);
}

const char* regime_name(Regime r) {
    switch (r) {
        case Regime::equilibrium: return "equilibrium";
        case Regime::non_equilibrium: return "non-equilibrium";
        default: return "near-equilibrium";
    }
}

void run_observability(const std::vector<double>& state, double u, double dt, double eq_tol,
                       const std::string& json_path) {
    require_size(state, 5, "--state");
    AugmentedState xi;
    xi.p = state[0];
    xi.v = state[1];
    xi.alpha = state[2];
    xi.beta = state[3];
    xi.tau = state[4];
    const OrcReport rep = classify_observability(xi, u, dt, eq_tol);

    std::cout << "regime: " << regime_name(rep.regime) << "\n";
    std::cout << "rank(O2) = " << rep.rank << ", nullity = " << rep.nullity
              << ", observable: " << (rep.observable ? "YES" : "NO") << "\n";
    for (std::size_t i = 0; i < rep.null_basis.size(); ++i) {
        std::cout << "kernel[" << i << "] = (";
        for (int k = 0; k < 5; ++k)
            std::cout << format_double(rep.null_basis[i](k)) << (k < 4 ? ", " : ")\n");
    }
    std::cout << "O2 =\n";
    for (int r = 0; r < 5; ++r) {
        for (int c = 0; c < 5; ++c)
            std::cout << (c ? "  " : "  [") << format_double(rep.matrix(r, c));
        std::cout << "]\n";
    }

    json j;
    j["regime"] = regime_name(rep.regime);
    j["rank"] = rep.rank;
    j["nullity"] = rep.nullity;
    j["observable"] = rep.observable;
    json kernel = json::array();
    for (const Vec5& vec : rep.null_basis) {
        json row = json::array();
        for (int k = 0; k < 5; ++k) row.push_back(vec(k));
        kernel.push_back(row);
    }
    j["kernel"] = kernel;
    json mat = json::array();
    for (int r = 0; r < 5; ++r) {
        json row = json::array();
        for (int c = 0; c < 5; ++c) row.push_back(rep.matrix(r, c));
        mat.push_back(row);
    }
    j["matrix"] = mat;
    write_json_report(j, json_path);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "acckit - identify constant-time-headway ACC controllers from car-following data"};
    app.require_subcommand(1);
    app.set_config("--config", "",
                   "Key-value config file ([subcommand] sections; flags take precedence)");
    app.allow_config_extras(false);
    app.set_version_flag("--version", "acckit 1.0.0");

    // simulate
    SimFlags sim;
    std::string sim_out;
    CLI::App* cmd_sim = app.add_subcommand(
        "simulate", "Generate clean + noisy closed-loop trajectories to CSV");
    add_sim_flags(cmd_sim, sim);
    cmd_sim->add_option("--out", sim_out, "Output CSV path; the clean twin gets a _clean suffix")
        ->required();
    cmd_sim->callback([&] { run_simulate(sim, sim_out); });

    // estimate
    EstFlags est;
    CLI::App* cmd_est = app.add_subcommand(
        "estimate", "Estimate controller gains from a trajectory (filter or least squares)");
    cmd_est->add_option("--in", est.in, "Input trajectory CSV; omit to estimate on synthetic data");
    cmd_est->add_option("--method", est.method, "ukf | ls-be | ls-re | ls-rexp")
        ->check(CLI::IsMember({"ukf", "ls-be", "ls-re", "ls-rexp"}))
        ->capture_default_str();
    cmd_est->add_option("--col-time", est.col_time, "Time column name")->capture_default_str();
    cmd_est->add_option("--col-u", est.col_u, "Leader velocity column name")->capture_default_str();
    cmd_est->add_option("--col-v", est.col_v, "Follower velocity column name")
        ->capture_default_str();
    cmd_est->add_option("--col-gap", est.col_gap, "Space gap column name")->capture_default_str();
    cmd_est->add_option("--col-pl", est.col_pl,
                        "Leader position column (gap = pl - pf - lead-length)");
    cmd_est->add_option("--col-pf", est.col_pf, "Follower position column");
    cmd_est->add_option("--lead-length", est.lead_length, "Leader vehicle length [m]")
        ->capture_default_str();
    cmd_est->add_option("--col-engaged", est.col_engaged,
                        "0/1 engagement column; the longest engaged span is used");
    cmd_est->add_option("--resample", est.resample_dt,
                        "Resample the input onto a uniform grid with this step [s]");
    cmd_est->add_option("--x0", est.x0, "Initial belief mean p,v,alpha,beta,tau")
        ->delimiter(',')
        ->capture_default_str();
    cmd_est->add_option("--p0-diag", est.p0_diag, "Initial belief covariance diagonal (5 values)")
        ->delimiter(',')
        ->capture_default_str();
    cmd_est->add_option("--q-diag", est.q_diag, "Process noise diagonal (5 values)")
        ->delimiter(',')
        ->capture_default_str();
    cmd_est->add_option("--r-diag", est.r_diag, "Measurement noise diagonal (2 values)")
        ->delimiter(',')
        ->capture_default_str();
    cmd_est->add_option("--ut-a", est.ut_a, "Unscented spread parameter a in [1e-4, 1]")
        ->capture_default_str();
    cmd_est->add_option("--ut-b", est.ut_b, "Unscented secondary scaling b")->capture_default_str();
    cmd_est->add_option("--ut-eps", est.ut_eps, "Unscented epsilon weight offset")
        ->capture_default_str();
    cmd_est->add_flag("--spread-from-q", est.spread_from_q,
                      "Redraw update sigma points from Q instead of the predicted covariance");
    cmd_est->add_option("--sigma", est.sigma, "Ridge regularizer for batch least squares")
        ->capture_default_str();
    cmd_est->add_option("--ls-x0", est.ls_x0, "Recursive LS prior mean x1,x2,x3")
        ->delimiter(',')
        ->capture_default_str();
    cmd_est->add_option("--ls-p0", est.ls_p0, "Recursive LS prior covariance scale")
        ->capture_default_str();
    cmd_est->add_option("--mu", est.mu, "Exponential weighting factor for ls-rexp")
        ->capture_default_str();
    cmd_est->add_option("--warm-start", est.warm_start,
                        "Initialize the recursion from an exact solve of this many leading rows");
    cmd_est->add_option("--summary", est.summary, "Summary JSON path ('-' or empty = stdout)");
    cmd_est->add_option("--trace", est.trace, "Per-step estimate trace CSV (ukf, single run)");
    cmd_est->add_option("--repeat", est.repeat, "Average this many freshly seeded synthetic runs")
        ->capture_default_str();
    cmd_est->add_flag("--parallel", est.parallel, "Run repeated seeds on all cores");
    add_sim_flags(cmd_est, est.sim);
    cmd_est->callback([&] { run_estimate(est); });

    // stability
    std::vector<double> stab_params;
    OmegaGrid grid;
    std::string stab_json;
    CLI::App* cmd_stab =
        app.add_subcommand("stability", "Strict string-stability margins and verdicts");
    cmd_stab->add_option("--params", stab_params, "Controller gains alpha,beta,tau")
        ->delimiter(',')
        ->required();
    cmd_stab->add_option("--omega-min", grid.omega_min, "Scan start [rad/s]")
        ->capture_default_str();
    cmd_stab->add_option("--omega-max", grid.omega_max, "Scan end [rad/s]")->capture_default_str();
    cmd_stab->add_option("--omega-count", grid.count, "Scan points (log-spaced)")
        ->capture_default_str();
    cmd_stab->add_option("--json", stab_json, "Also write a JSON report ('-' = stdout)");
    cmd_stab->callback([&] { run_stability(stab_params, grid, stab_json); });

    // observability
    std::vector<double> obs_state;
    double obs_u{20.0};
    double obs_dt{0.1};
    double obs_eq_tol{1e-6};
    std::string obs_json;
    CLI::App* cmd_obs = app.add_subcommand(
        "observability", "Rank/kernel analysis of the two-step observability matrix");
    cmd_obs->add_option("--state", obs_state, "Augmented state p,v,alpha,beta,tau")
        ->delimiter(',')
        ->required();
    cmd_obs->add_option("--u", obs_u, "Leader velocity [m/s]")->required();
    cmd_obs->add_option("--dt", obs_dt, "Sample period T [s]")->capture_default_str();
    cmd_obs->add_option("--eq-tol", obs_eq_tol, "|p - tau v| threshold for the equilibrium regime")
        ->capture_default_str();
    cmd_obs->add_option("--json", obs_json, "Also write a JSON report ('-' = stdout)");
    cmd_obs->callback([&] { run_observability(obs_state, obs_u, obs_dt, obs_eq_tol, obs_json); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const usage_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const numeric_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
