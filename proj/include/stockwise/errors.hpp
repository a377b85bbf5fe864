#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace stockwise {

/// Base class for everything this library throws on purpose.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// A numeric argument is outside the domain of the operation
/// (negative probability, empty support, nonpositive unit profit, ...).
class DomainError : public Error {
public:
    explicit DomainError(const std::string& what) : Error(what) {}
};

/// The requested quantile sits past the tail of a distribution with
/// unbounded support, so no finite order quantity attains it.
class UnboundedQuantile : public Error {
public:
    explicit UnboundedQuantile(const std::string& what) : Error(what) {}
};

/// An empirical fit was asked for with no observations.
class EmptySample : public Error {
public:
    explicit EmptySample(const std::string& what) : Error(what) {}
};

/// A demand observation or sample was negative.
class NegativeDemand : public Error {
public:
    explicit NegativeDemand(const std::string& what) : Error(what) {}
};

/// Parallel containers (plan vs catalog, weights vs products) disagree in size.
class LengthMismatch : public Error {
public:
    explicit LengthMismatch(const std::string& what) : Error(what) {}
};

/// Adaptive quadrature exhausted its evaluation budget before
/// reaching the requested tolerance.
class QuadratureFailure : public Error {
public:
    explicit QuadratureFailure(const std::string& what) : Error(what) {}
};

/// The constraint set is empty.
class Infeasible : public Error {
public:
    explicit Infeasible(const std::string& what) : Error(what) {}
};

/// A discrete constrained search has a nonempty constraint set, but not
/// inside the enumeration bounds it was given.
class InfeasibleWithinBounds : public Error {
public:
    explicit InfeasibleWithinBounds(const std::string& what) : Error(what) {}
};

/// A lattice enumeration would exceed its point budget.
class BudgetExceeded : public Error {
public:
    explicit BudgetExceeded(const std::string& what) : Error(what) {}
};

/// A solver that only handles continuous demand was handed a discrete model.
class NotContinuous : public Error {
public:
    explicit NotContinuous(const std::string& what) : Error(what) {}
};

/// Malformed CSV input. Row numbers are 1-based physical lines,
/// so row 1 is the header.
class CsvError : public Error {
public:
    CsvError(std::size_t row, const std::string& what)
        : Error("row " + std::to_string(row) + ": " + what), row_(row) {}
    std::size_t row() const { return row_; }

private:
    std::size_t row_;
};

/// Malformed or inconsistent plan configuration.
class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& what) : Error(what) {}
};

}  // namespace stockwise
