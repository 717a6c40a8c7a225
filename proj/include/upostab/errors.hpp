#pragma once

#include <stdexcept>
#include <string>

namespace upostab {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// An eigenvalue iteration failed to converge.
class NoConvergence : public Error {
public:
    explicit NoConvergence(const std::string& msg) : Error(msg) {}
};

/// A square solve met a matrix with condition estimate beyond 1e12.
class SingularMatrix : public Error {
public:
    explicit SingularMatrix(const std::string& msg) : Error(msg) {}
};

/// Adaptive step size underflowed (or a domain guard tripped).
class StepFailure : public Error {
public:
    StepFailure(const std::string& msg, double t_last) : Error(msg), t_last(t_last) {}
    double t_last;
};

/// A sweep parameter produced fewer than two section crossings.
class EmptyGroup : public Error {
public:
    explicit EmptyGroup(const std::string& msg) : Error(msg) {}
};

/// A dataset with no usable consecutive pairs was handed to regression.
class EmptyDataset : public Error {
public:
    explicit EmptyDataset(const std::string& msg) : Error(msg) {}
};

/// Thresholding removed every candidate term of a nonzero target.
class AllTermsPruned : public Error {
public:
    explicit AllTermsPruned(const std::string& msg) : Error(msg) {}
};

/// Requested preset name is not registered.
class UnknownPreset : public Error {
public:
    explicit UnknownPreset(const std::string& msg) : Error(msg) {}
};

/// No dataset group lies near the requested focal parameter.
class NoGroupNear : public Error {
public:
    explicit NoGroupNear(const std::string& msg) : Error(msg) {}
};

/// The semidefinite feasibility iteration stalled above tolerance.
class Infeasible : public Error {
public:
    Infeasible(const std::string& msg, double residual) : Error(msg), residual(residual) {}
    double residual;
};

/// Malformed file or config input.
class ParseError : public Error {
public:
    explicit ParseError(const std::string& msg) : Error(msg) {}
};

}  // namespace upostab
