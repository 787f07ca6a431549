#include "acckit/simulator.hpp"

#include <cmath>
#include <random>

namespace acckit {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
constexpr double kMaxGap = 1e4;      // [m] divergence guard
constexpr double kMaxVelocity = 1e3; // [m/s]
} // namespace

LeaderProfile LeaderProfile::constant(double v) {
    LeaderProfile p;
    p.kind = Kind::constant;
    p.base = v;
    return p;
}

LeaderProfile LeaderProfile::step(double from, double to, double at) {
    LeaderProfile p;
    p.kind = Kind::step;
    p.base = from;
    p.step_to = to;
    p.step_time = at;
    return p;
}

LeaderProfile LeaderProfile::sum_of_sinusoids(double base, std::vector<Sinusoid> s) {
    LeaderProfile p;
    p.kind = Kind::sum_of_sinusoids;
    p.base = base;
    p.sinusoids = std::move(s);
    return p;
}

LeaderProfile LeaderProfile::pe() {
    return sum_of_sinusoids(25.0, {{2.0, 0.02, 0.0}, {1.5, 0.07, 0.0}, {1.0, 0.19, 0.0}});
}

LeaderProfile LeaderProfile::pe20() {
    return sum_of_sinusoids(20.0, {{3.0, 0.02, 0.0}, {2.0, 0.07, 0.0}, {1.5, 0.19, 0.0}});
}

std::vector<double> leader_series(const LeaderProfile& profile, double duration, double T) {
    if (!(T > 0.0) || !std::isfinite(T))
        throw invalid_argument_error("leader_series: T must be > 0");
    if (!(duration >= T) || !std::isfinite(duration))
        throw invalid_argument_error("leader_series: duration must be >= T");
    for (const auto& s : profile.sinusoids)
        if (!(s.freq_hz > 0.0))
            throw invalid_profile_error("leader_series: sinusoid frequencies must be > 0");

    const auto n = static_cast<std::size_t>(std::ceil(duration / T));
    std::vector<double> u(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double t = static_cast<double>(k) * T;
        double val = profile.base;
        switch (profile.kind) {
        case LeaderProfile::Kind::constant:
            break;
        case LeaderProfile::Kind::step:
            if (t >= profile.step_time) val = profile.step_to;
            break;
        case LeaderProfile::Kind::sum_of_sinusoids:
            for (const auto& s : profile.sinusoids)
                val += s.amplitude * std::sin(kTwoPi * s.freq_hz * t + s.phase);
            break;
        case LeaderProfile::Kind::piecewise:
            for (const auto& [start, level] : profile.pieces)
                if (t >= start) val = level;
            break;
        }
        if (val < 0.0)
            throw invalid_profile_error("leader_series: profile yields negative velocity at t = " +
                                        format_double(t));
        u[k] = val;
    }
    return u;
}

std::pair<Trajectory, Trajectory> simulate_platoon(const SimConfig& cfg,
                                                   const std::vector<double>& leader) {
    if (leader.size() < 2)
        throw invalid_argument_error("simulate_platoon: need at least 2 leader samples");
    if (!(cfg.T > 0.0)) throw invalid_argument_error("simulate_platoon: T must be > 0");
    if (cfg.process_std_p < 0 || cfg.process_std_v < 0 || cfg.meas_std_p < 0 ||
        cfg.meas_std_v < 0)
        throw invalid_argument_error("simulate_platoon: noise stds must be >= 0");

    const std::size_t n = leader.size();
    std::vector<double> t(n);
    for (std::size_t k = 0; k < n; ++k) t[k] = static_cast<double>(k) * cfg.T;

    auto iterate = [&](std::vector<double>& p, std::vector<double>& v, auto&& process_noise) {
        p[0] = cfg.init.p;
        v[0] = cfg.init.v;
        for (std::size_t k = 0; k + 1 < n; ++k) {
            const PlatoonState next =
                step_dynamics({p[k], v[k]}, cfg.params, {leader[k], 0.0}, cfg.T);
            const auto [wp, wv] = process_noise();
            p[k + 1] = next.p + wp;
            v[k + 1] = next.v + wv;
            if (std::abs(p[k + 1]) > kMaxGap || std::abs(v[k + 1]) > kMaxVelocity)
                throw divergence_error("simulate_platoon: trajectory diverged at step " +
                                       std::to_string(k + 1));
        }
    };

    std::vector<double> pc(n), vc(n);
    iterate(pc, vc, [] { return std::pair<double, double>{0.0, 0.0}; });
    Trajectory clean = make_trajectory(t, leader, vc, pc, Provenance::synthetic_clean);

    std::mt19937_64 rng(cfg.seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<double> pn(n), vn(n);
    iterate(pn, vn, [&] {
        return std::pair<double, double>{cfg.process_std_p * gauss(rng),
                                         cfg.process_std_v * gauss(rng)};
    });
    for (std::size_t k = 0; k < n; ++k) {
        pn[k] += cfg.meas_std_p * gauss(rng);
        vn[k] += cfg.meas_std_v * gauss(rng);
    }
    Trajectory noisy =
        make_trajectory(std::move(t), leader, std::move(vn), std::move(pn), Provenance::synthetic_noisy);
    return {std::move(clean), std::move(noisy)};
}

} // namespace acckit
