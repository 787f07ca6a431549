#include "acckit/trajectory_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <optional>

namespace acckit {

namespace {

constexpr double kGridTol = 1e-9; // [s] allowed jitter of the uniform grid

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    fields.push_back(cur);
    return fields;
}

std::optional<double> parse_double(const std::string& s) {
    const char* b = s.data();
    const char* e = b + s.size();
    while (b < e && (*b == ' ' || *b == '\t')) ++b;
    while (e > b && (*(e - 1) == ' ' || *(e - 1) == '\t')) --e;
    double out{};
    auto [ptr, ec] = std::from_chars(b, e, out);
    if (ec != std::errc() || ptr != e || b == e) return std::nullopt;
    return out;
}

void validate_schema(const CsvSchema& schema) {
    const bool has_gap = !schema.col_gap.empty();
    const bool has_pos = !schema.col_pl.empty() && !schema.col_pf.empty();
    if (has_gap == has_pos)
        throw schema_error("csv schema: configure exactly one of a gap column or a "
                           "leader/follower position pair");
    if (schema.col_time.empty() || schema.col_u.empty() || schema.col_v.empty())
        throw schema_error("csv schema: time, leader and follower velocity columns are required");
}

struct ColumnIndex {
    std::size_t t, u, v;
    std::size_t gap = SIZE_MAX, pl = SIZE_MAX, pf = SIZE_MAX, engaged = SIZE_MAX;
};

ColumnIndex resolve_columns(const std::vector<std::string>& header, const CsvSchema& schema) {
    auto find = [&](const std::string& name) -> std::size_t {
        auto it = std::find(header.begin(), header.end(), name);
        if (it == header.end())
            throw schema_error("csv schema: missing column '" + name + "'");
        return static_cast<std::size_t>(it - header.begin());
    };
    ColumnIndex idx{find(schema.col_time), find(schema.col_u), find(schema.col_v)};
    if (!schema.col_gap.empty()) {
        idx.gap = find(schema.col_gap);
    } else {
        idx.pl = find(schema.col_pl);
        idx.pf = find(schema.col_pf);
    }
    if (!schema.col_engaged.empty()) idx.engaged = find(schema.col_engaged);
    return idx;
}

struct ParsedRows {
    RawSeries series;
    std::vector<bool> engaged;
    std::size_t dropped{0};
};

ParsedRows parse_file(const std::string& path, const CsvSchema& schema) {
    validate_schema(schema);
    std::ifstream in(path);
    if (!in) throw io_error("cannot open '" + path + "'");

    std::string line;
    if (!std::getline(in, line)) throw insufficient_data_error("'" + path + "' is empty");
    const ColumnIndex idx = resolve_columns(split_csv_line(line), schema);

    ParsedRows rows;
    double prev_t = -std::numeric_limits<double>::infinity();
    bool have_prev = false;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto fields = split_csv_line(line);
        auto field = [&](std::size_t i) -> std::optional<double> {
            if (i >= fields.size()) return std::nullopt;
            return parse_double(fields[i]);
        };
        const auto t = field(idx.t), u = field(idx.u), v = field(idx.v);
        std::optional<double> p;
        if (idx.gap != SIZE_MAX) {
            p = field(idx.gap);
        } else {
            const auto pl = field(idx.pl), pf = field(idx.pf);
            if (pl && pf) p = *pl - *pf - schema.lead_length;
        }
        std::optional<double> engaged = idx.engaged != SIZE_MAX ? field(idx.engaged)
                                                                : std::optional<double>(1.0);
        if (!t || !u || !v || !p || !engaged || !std::isfinite(*t) || !std::isfinite(*u) ||
            !std::isfinite(*v) || !std::isfinite(*p)) {
            ++rows.dropped;
            continue;
        }
        if (have_prev && *t <= prev_t)
            throw malformed_time_error("'" + path + "': time is not strictly increasing at t = " +
                                       format_double(*t));
        prev_t = *t;
        have_prev = true;
        rows.series.t.push_back(*t);
        rows.series.u.push_back(*u);
        rows.series.v.push_back(*v);
        rows.series.p.push_back(*p);
        rows.engaged.push_back(*engaged != 0.0);
    }
    return rows;
}

RawSeries slice(const RawSeries& s, std::size_t begin, std::size_t end) {
    RawSeries out;
    out.t.assign(s.t.begin() + begin, s.t.begin() + end);
    out.u.assign(s.u.begin() + begin, s.u.begin() + end);
    out.v.assign(s.v.begin() + begin, s.v.begin() + end);
    out.p.assign(s.p.begin() + begin, s.p.begin() + end);
    return out;
}

Trajectory to_uniform_trajectory(RawSeries&& s) {
    return make_trajectory(std::move(s.t), std::move(s.u), std::move(s.v), std::move(s.p),
                           Provenance::empirical);
}

} // namespace

Trajectory make_trajectory(std::vector<double> t, std::vector<double> u, std::vector<double> v,
                           std::vector<double> p, Provenance provenance) {
    const std::size_t n = t.size();
    if (u.size() != n || v.size() != n || p.size() != n)
        throw invalid_argument_error("make_trajectory: series lengths differ");
    if (n < 2) throw insufficient_data_error("make_trajectory: need at least 2 samples");
    for (std::size_t i = 0; i < n; ++i)
        if (!std::isfinite(t[i]) || !std::isfinite(u[i]) || !std::isfinite(v[i]) ||
            !std::isfinite(p[i]))
            throw invalid_argument_error("make_trajectory: non-finite sample at index " +
                                         std::to_string(i));
    const double T = t[1] - t[0];
    if (!(T > 0.0)) throw malformed_time_error("make_trajectory: time must strictly increase");
    for (std::size_t i = 1; i < n; ++i) {
        const double dt = t[i] - t[i - 1];
        if (std::abs(dt - T) > kGridTol)
            throw malformed_time_error(
                "make_trajectory: non-uniform grid at index " + std::to_string(i) +
                " (step " + format_double(dt) + " vs " + format_double(T) + "); resample first");
    }
    Trajectory traj;
    traj.t = std::move(t);
    traj.u = std::move(u);
    traj.v = std::move(v);
    traj.p = std::move(p);
    traj.T = T;
    traj.provenance = provenance;
    return traj;
}

RawSeries load_csv_raw(const std::string& path, const CsvSchema& schema, std::size_t* dropped) {
    ParsedRows rows = parse_file(path, schema);
    if (dropped) *dropped = rows.dropped;
    // Engagement filtering at the raw level just excludes flagged-off rows.
    RawSeries out;
    for (std::size_t i = 0; i < rows.series.t.size(); ++i) {
        if (!rows.engaged[i]) continue;
        out.t.push_back(rows.series.t[i]);
        out.u.push_back(rows.series.u[i]);
        out.v.push_back(rows.series.v[i]);
        out.p.push_back(rows.series.p[i]);
    }
    return out;
}

std::vector<Trajectory> load_csv_segments(const std::string& path, const CsvSchema& schema,
                                          std::size_t* dropped) {
    ParsedRows rows = parse_file(path, schema);
    if (dropped) *dropped = rows.dropped;
    std::vector<Trajectory> segments;
    const std::size_t n = rows.series.t.size();
    std::size_t begin = 0;
    while (begin < n) {
        while (begin < n && !rows.engaged[begin]) ++begin;
        std::size_t end = begin;
        while (end < n && rows.engaged[end]) ++end;
        if (end - begin >= 2) segments.push_back(to_uniform_trajectory(slice(rows.series, begin, end)));
        begin = end;
    }
    if (segments.empty())
        throw insufficient_data_error("'" + path + "': fewer than 2 usable rows in any segment");
    return segments;
}

Trajectory load_csv(const std::string& path, const CsvSchema& schema, std::size_t* dropped) {
    auto segments = load_csv_segments(path, schema, dropped);
    if (segments.size() != 1)
        throw invalid_argument_error("'" + path + "': " + std::to_string(segments.size()) +
                                     " engaged segments; use the segment-aware loader");
    return std::move(segments.front());
}

Trajectory resample(const RawSeries& raw, double T_target) {
    if (!(T_target > 0.0)) throw invalid_argument_error("resample: T_target must be > 0");
    const std::size_t n = raw.t.size();
    if (raw.u.size() != n || raw.v.size() != n || raw.p.size() != n)
        throw invalid_argument_error("resample: series lengths differ");
    if (n < 2) throw insufficient_data_error("resample: need at least 2 samples");
    for (std::size_t i = 1; i < n; ++i)
        if (!(raw.t[i] > raw.t[i - 1]))
            throw malformed_time_error("resample: time must strictly increase");
    const double span = raw.t.back() - raw.t.front();
    if (span < 2.0 * T_target)
        throw insufficient_data_error("resample: input span shorter than 2 * T_target");

    std::string gaps;
    for (std::size_t i = 1; i < n; ++i)
        if (raw.t[i] - raw.t[i - 1] > 10.0 * T_target)
            gaps += " [" + format_double(raw.t[i - 1]) + ", " + format_double(raw.t[i]) + "]";
    if (!gaps.empty()) throw data_gap_error("resample: holes longer than 10*T_target:" + gaps);

    const std::size_t count = static_cast<std::size_t>(std::floor(span / T_target + kGridTol)) + 1;
    std::vector<double> t(count), u(count), v(count), p(count);
    std::size_t j = 0;
    for (std::size_t k = 0; k < count; ++k) {
        const double tk = raw.t.front() + static_cast<double>(k) * T_target;
        while (j + 2 < n && raw.t[j + 1] <= tk) ++j;
        const double h = raw.t[j + 1] - raw.t[j];
        const double w = std::clamp((tk - raw.t[j]) / h, 0.0, 1.0); // clipped: no extrapolation
        t[k] = tk;
        u[k] = raw.u[j] + w * (raw.u[j + 1] - raw.u[j]);
        v[k] = raw.v[j] + w * (raw.v[j + 1] - raw.v[j]);
        p[k] = raw.p[j] + w * (raw.p[j + 1] - raw.p[j]);
    }
    return make_trajectory(std::move(t), std::move(u), std::move(v), std::move(p),
                           Provenance::empirical);
}

double mae(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) throw invalid_argument_error("mae: length mismatch");
    if (a.empty()) throw invalid_argument_error("mae: empty series");
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += std::abs(a[i] - b[i]);
    return acc / static_cast<double>(a.size());
}

std::string format_double(double x) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
    (void)ec;
    return std::string(buf, ptr);
}

void write_csv(const Trajectory& traj, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw io_error("cannot write '" + path + "'");
    out << "t,u,v,p\n";
    for (std::size_t i = 0; i < traj.size(); ++i)
        out << format_double(traj.t[i]) << ',' << format_double(traj.u[i]) << ','
            << format_double(traj.v[i]) << ',' << format_double(traj.p[i]) << '\n';
    if (!out) throw io_error("write failed for '" + path + "'");
}

} // namespace acckit
