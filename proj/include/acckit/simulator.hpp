#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "acckit/cthp_model.hpp"
#include "acckit/trajectory_io.hpp"

namespace acckit {

struct Sinusoid {
    double amplitude{0.0}; ///< [m/s]
    double freq_hz{0.0};   ///< [Hz], > 0
    double phase{0.0};     ///< [rad]
};

struct LeaderProfile {
    enum class Kind { constant, step, sum_of_sinusoids, piecewise };

    Kind kind{Kind::constant};
    double base{25.0}; ///< base velocity [m/s]
    // step
    double step_time{0.0};
    double step_to{0.0};
    // sum_of_sinusoids
    std::vector<Sinusoid> sinusoids;
    // piecewise: (start time, level); levels hold until the next start time
    std::vector<std::pair<double, double>> pieces;

    static LeaderProfile constant(double v);
    static LeaderProfile step(double from, double to, double at);
    static LeaderProfile sum_of_sinusoids(double base, std::vector<Sinusoid> s);
    /// Default persistent-excitation profile: base 25 m/s, amplitudes
    /// (2, 1.5, 1) m/s at (0.02, 0.07, 0.19) Hz.
    static LeaderProfile pe();
    /// Lower-speed PE variant (base 20 m/s, amplitudes 3, 2, 1.5 m/s at the
    /// same frequencies). The canonical scenario for parameter-recovery
    /// experiments: at this operating point the joint filter's sigma-point
    /// approximation stays in its convergence basin (see README).
    static LeaderProfile pe20();
};

/// Samples the profile on the uniform grid t_k = k T, k = 0 .. ceil(duration/T)-1.
/// Profiles that dip below zero velocity are rejected.
std::vector<double> leader_series(const LeaderProfile& profile, double duration, double T);

struct SimConfig {
    CthpParams params{0.1, 0.2, 1.2}; ///< ground-truth controller
    double T{0.1};                    ///< [s]
    double duration{600.0};           ///< [s]
    PlatoonState init{40.0, 30.0};
    double process_std_p{0.0}; ///< injected into the gap recursion [m]
    double process_std_v{0.0}; ///< injected into the velocity recursion [m/s]
    double meas_std_p{0.0};    ///< additive output noise [m]
    double meas_std_v{0.0};    ///< additive output noise [m/s]
    std::uint64_t seed{0};
};

/// Closed-loop CTHP response to the leader series: returns (clean, noisy).
/// The clean trajectory is the exact Euler iteration; the noisy one re-runs
/// the recursion with seeded process noise and adds measurement noise on the
/// outputs. Zero stds make both bit-identical.
std::pair<Trajectory, Trajectory> simulate_platoon(const SimConfig& cfg,
                                                   const std::vector<double>& leader);

} // namespace acckit
