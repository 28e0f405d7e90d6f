#ifndef PLMAPS_ERRORS_HPP
#define PLMAPS_ERRORS_HPP

#include <cstdint>
#include <stdexcept>
#include <string>

namespace plm {

// Base class for all library errors.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Argument outside the domain of an operation (e.g. x outside [0,1]).
struct DomainError : Error {
    using Error::Error;
};

// A type invariant would be violated by the requested construction.
struct InvariantError : Error {
    using Error::Error;
};

// Gluing a perturbation would produce a discontinuous map.
struct ContinuityError : Error {
    using Error::Error;
};

// A transformed value would leave [0,1].
struct RangeError : Error {
    using Error::Error;
};

// Precondition on operation inputs not met.
struct PreconditionError : Error {
    using Error::Error;
};

// A configured resource budget was exceeded. `reached` carries the count
// at the moment the budget tripped.
struct BudgetError : Error {
    std::int64_t reached;
    std::int64_t budget;
    BudgetError(const std::string& what_kind, std::int64_t reached_, std::int64_t budget_)
        : Error(what_kind + ": reached " + std::to_string(reached_) + " with budget " +
                std::to_string(budget_)),
          reached(reached_),
          budget(budget_) {}
};

// Text input could not be parsed; positions are 1-based.
struct ParseError : Error {
    int line;
    int column;
    ParseError(const std::string& msg, int line_, int column_)
        : Error("parse error at line " + std::to_string(line_) + ", column " +
                std::to_string(column_) + ": " + msg),
          line(line_),
          column(column_) {}
};

// Two determining values share one open grid cell during snapping.
struct CellCollisionError : Error {
    std::string first_value;
    std::string second_value;
    CellCollisionError(const std::string& a, const std::string& b)
        : Error("grid cell holds two determining values: " + a + " and " + b),
          first_value(a),
          second_value(b) {}
};

}  // namespace plm

#endif
