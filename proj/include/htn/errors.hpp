#ifndef HTN_ERRORS_HPP
#define HTN_ERRORS_HPP

#include <stdexcept>
#include <string>
#include <vector>

namespace htn {

// Base class for all domain errors raised by the toolkit.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// The ordering relation of a task network contains a directed cycle.
class CycleDetected : public Error {
public:
    explicit CycleDetected(const std::string& msg) : Error(msg) {}
};

// An action was applied in a state that misses part of its precondition.
class PreconditionUnsatisfied : public Error {
public:
    PreconditionUnsatisfied(const std::string& msg, std::vector<std::string> missing_)
        : Error(msg), missing(std::move(missing_)) {}
    std::vector<std::string> missing;
};

// Building the state transition graph exceeded the configured state cap.
class StateSpaceExceeded : public Error {
public:
    explicit StateSpaceExceeded(const std::string& msg) : Error(msg) {}
};

// A search or ILP exceeded its node budget.
class BudgetExceeded : public Error {
public:
    explicit BudgetExceeded(const std::string& msg) : Error(msg) {}
};

// No solver (including the exhaustive fallback) can handle the instance size.
class InstanceTooLarge : public Error {
public:
    explicit InstanceTooLarge(const std::string& msg) : Error(msg) {}
};

// The compound dependency graph is cyclic, so the depth measure is infinite.
class InfiniteDepth : public Error {
public:
    explicit InfiniteDepth(const std::string& msg) : Error(msg) {}
};

// A decomposition step was requested on a primitive task.
class NotCompound : public Error {
public:
    explicit NotCompound(const std::string& msg) : Error(msg) {}
};

// A compound task has no method, or a method refers to an unknown compound.
class MethodMismatch : public Error {
public:
    explicit MethodMismatch(const std::string& msg) : Error(msg) {}
};

// A graph handed to the clique-hardness generator is not properly colored.
class ImproperColoring : public Error {
public:
    explicit ImproperColoring(const std::string& msg) : Error(msg) {}
};

// An instance file is malformed.
class ParseError : public Error {
public:
    explicit ParseError(const std::string& msg) : Error(msg) {}
};

} // namespace htn

#endif
