#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace horolab {

// Vector length / grid shape mismatches.
struct DimensionError : std::invalid_argument {
    explicit DimensionError(const std::string& what) : std::invalid_argument(what) {}
};

// A ModelPoint that violates its model invariant.
struct InvalidPointError : std::invalid_argument {
    explicit InvalidPointError(const std::string& what) : std::invalid_argument(what) {}
};

// Scalar argument outside its admissible range (nonpositive height, H <= 0, ...).
struct DomainError : std::domain_error {
    explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

// A field that fails the spacelike gradient bound.
struct ConstraintError : std::runtime_error {
    explicit ConstraintError(const std::string& what) : std::runtime_error(what) {}
};

// Gauss image leaves the horoball: B∘f - g <= 0 somewhere.  Carries the
// offending node.
struct HoroballViolationError : std::runtime_error {
    std::size_t node;
    HoroballViolationError(const std::string& what, std::size_t node_)
        : std::runtime_error(what), node(node_) {}
};

// Requested intrinsic ball does not fit inside the grid interior.
struct DomainTooSmallError : std::runtime_error {
    explicit DomainTooSmallError(const std::string& what) : std::runtime_error(what) {}
};

// Zero mean curvature vector where an adapted normal frame was requested.
struct DegenerateFrameError : std::runtime_error {
    std::size_t node;
    DegenerateFrameError(const std::string& what, std::size_t node_)
        : std::runtime_error(what), node(node_) {}
};

// Hard failure of a linear solve (breakdown, NaN).
struct SolverError : std::runtime_error {
    explicit SolverError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace horolab
