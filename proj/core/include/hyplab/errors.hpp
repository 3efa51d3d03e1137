#pragma once

#include <stdexcept>
#include <string>

namespace hyplab {

/// A finite-volume run produced a non-finite cell value.
class SolverDivergedError : public std::runtime_error {
public:
    SolverDivergedError(double time, const std::string& what)
        : std::runtime_error(what), time_(time) {}
    double time() const { return time_; }

private:
    double time_;
};

/// Training produced a non-finite loss.
class TrainingDivergedError : public std::runtime_error {
public:
    TrainingDivergedError(long iteration, const std::string& what)
        : std::runtime_error(what), iteration_(iteration) {}
    long iteration() const { return iteration_; }

private:
    long iteration_;
};

/// An exact solution was queried past its validity horizon.
class HorizonExceededError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace hyplab
