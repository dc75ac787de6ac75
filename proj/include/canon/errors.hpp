#ifndef CANON_ERRORS_HPP
#define CANON_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace canon {

/// Malformed textual input (rational strings, length grammar, documents).
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An operation was called outside its domain: unknown ids, disconnected
/// graphs, partitions that do not cover the edge set, invalid bases, ...
class PreconditionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class DisconnectedGraphError : public PreconditionError {
public:
    DisconnectedGraphError()
        : PreconditionError("graph is disconnected") {}
    explicit DisconnectedGraphError(const std::string& what)
        : PreconditionError(what) {}
};

class InvalidBasisError : public PreconditionError {
public:
    using PreconditionError::PreconditionError;
};

class SingularMatrixError : public PreconditionError {
public:
    using PreconditionError::PreconditionError;
};

class NotPositiveDefiniteError : public PreconditionError {
public:
    using PreconditionError::PreconditionError;
};

class NonConvergentFamilyError : public PreconditionError {
public:
    using PreconditionError::PreconditionError;
};

} // namespace canon

#endif // CANON_ERRORS_HPP
