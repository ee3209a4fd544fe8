#pragma once

#include <stdexcept>
#include <string>

namespace rpo {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Input violates a precondition of an orbital-mechanics routine.
class DomainError : public Error {
public:
    using Error::Error;
};

/// A firing schedule breaks a thruster or budget constraint.
class ScheduleError : public Error {
public:
    ScheduleError(const std::string& what, int segment_index)
        : Error(what), segment_index_(segment_index) {}

    [[nodiscard]] int segment_index() const noexcept { return segment_index_; }

private:
    int segment_index_;
};

/// Mission aborted (budget exhausted, phase timeout, propagation failure).
class MissionAbort : public Error {
public:
    using Error::Error;
};

}  // namespace rpo
