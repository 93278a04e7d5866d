#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace evfreq {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A value outside the domain of an operation (empty mix, zero total power,
/// bad step size, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// The fleet's energy need cannot be delivered inside the depot dwell window.
class InfeasibleError : public Error {
public:
    InfeasibleError(const std::string& what, double deficit_kwh)
        : Error(what), deficit_kwh_(deficit_kwh) {}
    double deficit_kwh() const noexcept { return deficit_kwh_; }

private:
    double deficit_kwh_;
};

/// The integrator produced a non-finite state.
class IntegrationError : public Error {
public:
    IntegrationError(const std::string& what, std::size_t step)
        : Error(what), step_(step) {}
    std::size_t step() const noexcept { return step_; }

private:
    std::size_t step_;
};

/// Malformed input file. `row` is the 1-based line number, 0 if not row-specific.
class InputError : public Error {
public:
    InputError(const std::string& what, std::size_t row = 0)
        : Error(what), row_(row) {}
    std::size_t row() const noexcept { return row_; }

private:
    std::size_t row_;
};

}  // namespace evfreq
