#pragma once

#include <stdexcept>
#include <string>

namespace gaprenorm {

// Root of the library's error hierarchy.  Everything thrown on purpose
// derives from this, so callers can catch one type at the boundary.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Invalid input: parameters outside their open ranges, maps that fail the
// structural requirements (contraction, monotone branches), degenerate
// intervals.  CLI maps these to exit code 2.
class DomainError : public Error {
public:
    explicit DomainError(const std::string& what) : Error(what) {}
};

// A computation ran but its result cannot be trusted: a spectral fit did
// not resolve, a truncated series carries visible tail mass.  Exit code 3.
class NumericError : public Error {
public:
    explicit NumericError(const std::string& what) : Error(what) {}
};

// Spectral fit residual exceeded the requested tolerance.
class AccuracyError : public NumericError {
public:
    explicit AccuracyError(const std::string& what) : NumericError(what) {}
};

// Finite-difference step could not be shrunk enough to keep every probe
// point inside the combinatorial class of the base point.
class StepTooLargeError : public NumericError {
public:
    explicit StepTooLargeError(const std::string& what) : NumericError(what) {}
};

// The map has no first-return structure of the required kind.  `boundary`
// distinguishes the degenerate case where an orbit point lands on the gap
// edge within resolution from a genuine interior failure.
class NotRenormalizableError : public Error {
public:
    explicit NotRenormalizableError(const std::string& what, bool boundary = false)
        : Error(what), boundary_(boundary) {}
    bool boundary() const noexcept { return boundary_; }

private:
    bool boundary_;
};

// The iteration cap was hit before the return time resolved.  Kept apart
// from NotRenormalizableError: the structure may exist beyond the cap.
class CapError : public Error {
public:
    explicit CapError(const std::string& what) : Error(what) {}
};

// A requested combinatorial class cannot occur (wrong sign for the gap
// position, zero return time, and so on).
class UnrealizableCombinatoricsError : public DomainError {
public:
    explicit UnrealizableCombinatoricsError(const std::string& what)
        : DomainError(what) {}
};

}  // namespace gaprenorm
