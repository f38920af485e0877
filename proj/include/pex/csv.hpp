#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "pex/adaptive.hpp"
#include "pex/errors.hpp"
#include "pex/recurrence.hpp"
#include "pex/signal.hpp"

namespace pex {

namespace detail {

/// Write-then-rename so readers never observe a partial file.
inline void atomic_write_text(const std::filesystem::path& path, const std::string& text) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
        out << text;
        if (!out.good()) throw std::runtime_error("short write to " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

inline std::string format_double(double x) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

}  // namespace detail

/// Signal CSV: header `t,w1,...,wq`, one row per grid point, full double
/// precision so a round trip reproduces the samples bit-for-bit.
inline void write_signal_csv(const std::filesystem::path& path, const SampledSignal& w) {
    std::ostringstream out;
    out << "t";
    for (long i = 1; i <= w.dim(); ++i) out << ",w" << i;
    out << "\n";
    for (long j = 0; j < w.samples(); ++j) {
        out << detail::format_double(w.grid.time(j));
        for (long i = 0; i < w.dim(); ++i)
            out << ',' << detail::format_double(w.values(i, j));
        out << "\n";
    }
    detail::atomic_write_text(path, out.str());
}

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.push_back("");
    return fields;
}

inline double parse_double(const std::string& token, long line_no) {
    try {
        std::size_t used = 0;
        double value = std::stod(token, &used);
        while (used < token.size() && std::isspace(static_cast<unsigned char>(token[used])))
            ++used;
        if (used != token.size())
            throw CsvError("trailing characters in numeric field '" + token + "'", line_no);
        return value;
    } catch (const CsvError&) {
        throw;
    } catch (const std::exception&) {
        throw CsvError("cannot parse numeric field '" + token + "'", line_no);
    }
}

}  // namespace detail

/// Read a signal CSV. The continuity tag of loaded data is always `unknown`:
/// the tag is a generator declaration, not something samples can establish.
inline SampledSignal read_signal_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw CsvError("cannot open " + path.string(), 0);

    std::string line;
    long line_no = 0;
    if (!std::getline(in, line)) throw CsvError("empty file", 1);
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::vector<std::string> header = detail::split_csv_line(line);
    if (header.size() < 2 || header[0] != "t")
        throw CsvError("expected header t,w1,...,wq", line_no);
    const long q = static_cast<long>(header.size()) - 1;

    std::vector<double> times;
    std::vector<double> flat;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> fields = detail::split_csv_line(line);
        if (static_cast<long>(fields.size()) != q + 1)
            throw CsvError("expected " + std::to_string(q + 1) + " fields, got " +
                               std::to_string(fields.size()), line_no);
        times.push_back(detail::parse_double(fields[0], line_no));
        for (long i = 0; i < q; ++i)
            flat.push_back(detail::parse_double(fields[i + 1], line_no));
    }
    const long n = static_cast<long>(times.size());
    if (n < 2) throw CsvError("need at least two sample rows", line_no);

    const double t0 = times[0];
    const double dt = times[1] - times[0];
    if (!(dt > 0.0)) throw CsvError("time column must be strictly increasing", 3);
    for (long j = 0; j < n; ++j) {
        const double expected = t0 + static_cast<double>(j) * dt;
        if (std::abs(times[j] - expected) > 1e-9 * std::max(1.0, std::abs(expected)))
            throw CsvError("non-uniform time step at row " + std::to_string(j + 1), j + 2);
    }

    Eigen::MatrixXd values(q, n);
    for (long j = 0; j < n; ++j)
        for (long i = 0; i < q; ++i) values(i, j) = flat[j * q + i];
    return SampledSignal(TimeGrid(t0, dt, n), std::move(values), ContinuityTag::Unknown);
}

/// Trajectory CSV: t, psi_hat_1..q, e.
inline void write_trajectory_csv(const std::filesystem::path& path, const RunResult& result) {
    std::ostringstream out;
    out << "t";
    for (long i = 1; i <= result.trajectory.rows(); ++i) out << ",psi_hat_" << i;
    out << ",e\n";
    for (long k = 0; k < result.times.size(); ++k) {
        out << detail::format_double(result.times(k));
        for (long i = 0; i < result.trajectory.rows(); ++i)
            out << ',' << detail::format_double(result.trajectory(i, k));
        out << ',' << detail::format_double(result.error_trace(k)) << "\n";
    }
    detail::atomic_write_text(path, out.str());
}

/// Excitation-time set as CSV rows (t, qualifies) over every possible window
/// start.
inline void write_excitation_csv(const std::filesystem::path& path, const ExcitationTimes& set) {
    std::ostringstream out;
    out << "t,qualifies\n";
    std::size_t next = 0;
    const long count = std::lround((set.last_possible - set.first_possible) / set.step);
    for (long j = 0; j <= count; ++j) {
        const double t = set.first_possible + static_cast<double>(j) * set.step;
        bool qualifies = false;
        if (next < set.times.size() && std::abs(set.times[next] - t) <= 0.5 * set.step) {
            qualifies = true;
            ++next;
        }
        out << detail::format_double(t) << ',' << (qualifies ? 1 : 0) << "\n";
    }
    detail::atomic_write_text(path, out.str());
}

}  // namespace pex
