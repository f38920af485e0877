#pragma once

#include <stdexcept>
#include <string>

namespace pex {

/// Bad argument values: dimension mismatches, negative rates, zero directions.
class InputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Query outside the sampled horizon, or a window spanning no samples.
class RangeError : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

/// Subspace pair is not complementary (or too ill-conditioned to treat as such).
class GeometryError : public std::runtime_error {
public:
    GeometryError(const std::string& what, double condition_number)
        : std::runtime_error(what), condition_number(condition_number) {}
    double condition_number;
};

/// Integration produced a non-finite state.
class DivergenceError : public std::runtime_error {
public:
    DivergenceError(const std::string& what, long step, double time)
        : std::runtime_error(what), step(step), time(time) {}
    long step;
    double time;
};

/// Malformed CSV input; `line` is 1-based.
class CsvError : public std::runtime_error {
public:
    CsvError(const std::string& what, long line)
        : std::runtime_error(what), line(line) {}
    long line;
};

}  // namespace pex
