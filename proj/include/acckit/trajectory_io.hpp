#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "acckit/errors.hpp"

namespace acckit {

enum class Provenance { empirical, synthetic_clean, synthetic_noisy };

/// Uniformly sampled car-following record: leader velocity u, follower
/// velocity v and space gap p on a common time grid.
struct Trajectory {
    std::vector<double> t; ///< [s], strictly increasing, constant step
    std::vector<double> u; ///< leader velocity [m/s]
    std::vector<double> v; ///< follower velocity [m/s]
    std::vector<double> p; ///< space gap [m]
    double T{0.1};         ///< sample period [s]
    Provenance provenance{Provenance::empirical};

    std::size_t size() const { return t.size(); }
};

/// Irregularly sampled series as parsed from disk, before resampling.
struct RawSeries {
    std::vector<double> t, u, v, p;
};

/// Column mapping for ingestion. Exactly one of {gap column} or
/// {leader/follower position pair + lead vehicle length} must be configured.
struct CsvSchema {
    std::string col_time{"t"};
    std::string col_u{"u"};
    std::string col_v{"v"};
    std::string col_gap{"p"};  ///< empty when positions are used instead
    std::string col_pl{};      ///< leader position column
    std::string col_pf{};      ///< follower position column
    double lead_length{0.0};   ///< L [m], subtracted when computing the gap
    std::string col_engaged{}; ///< optional 0/1 ACC-engagement flag column
};

/// Validates lengths, monotone uniform time grid and finiteness, and fills T.
Trajectory make_trajectory(std::vector<double> t, std::vector<double> u, std::vector<double> v,
                           std::vector<double> p, Provenance provenance);

/// Parses the file without enforcing a uniform grid. Rows with missing or
/// unparseable fields are dropped and counted into *dropped when given.
/// Rows flagged disengaged (when col_engaged is configured) are excluded.
RawSeries load_csv_raw(const std::string& path, const CsvSchema& schema = {},
                       std::size_t* dropped = nullptr);

/// Loads a uniformly sampled trajectory. Fails with malformed_time_error when
/// the grid is non-uniform (resample() is the remedy) and rejects files whose
/// engagement flag splits the record into several segments.
Trajectory load_csv(const std::string& path, const CsvSchema& schema = {},
                    std::size_t* dropped = nullptr);

/// Like load_csv but returns one trajectory per contiguous engaged span.
std::vector<Trajectory> load_csv_segments(const std::string& path, const CsvSchema& schema = {},
                                          std::size_t* dropped = nullptr);

/// Linear interpolation onto a uniform grid with step T_target, clipped to the
/// observed span. Source holes longer than 10 * T_target raise data_gap_error.
Trajectory resample(const RawSeries& raw, double T_target);

/// Mean absolute error between two equal-length series.
double mae(const std::vector<double>& a, const std::vector<double>& b);

/// Writes header t,u,v,p and shortest round-trip decimal values so that
/// load_csv returns bit-identical series.
void write_csv(const Trajectory& traj, const std::string& path);

/// Shortest decimal representation that parses back to the same double.
std::string format_double(double x);

} // namespace acckit
