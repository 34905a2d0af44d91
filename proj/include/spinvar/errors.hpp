// Copyright 2026 The Spinvar Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace spinvar {

/// Base class of all spinvar exceptions.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// m label outside {-j,...,j} or of the wrong parity for the representation.
class InvalidM : public Error {
public:
  using Error::Error;
};

/// Intelligent-state label N outside [0, 2j].
class InvalidLabel : public Error {
public:
  using Error::Error;
};

/// Intelligent-state tau not on the real or imaginary axis.
class InvalidTau : public Error {
public:
  using Error::Error;
};

/// Operator/state dimensions do not match.
class DimensionMismatch : public Error {
public:
  using Error::Error;
};

/// Expectation of a supposedly hermitian operator came out complex.
class NonHermitian : public Error {
public:
  using Error::Error;
};

/// Linear fit of the adjoint action left a residual above threshold.
class SolveFailure : public Error {
public:
  using Error::Error;
};

/// Coordinate outside its admissible range.
class OutOfRange : public Error {
public:
  using Error::Error;
};

/// Chart singularity: a theta coordinate at the boundary of (0, pi/2).
class Singular : public Error {
public:
  using Error::Error;
};

/// Sphere-coordinate index outside 0..N.
class IndexOutOfRange : public Error {
public:
  using Error::Error;
};

/// Requested integration method cannot handle the given functional.
class MethodUnavailable : public Error {
public:
  using Error::Error;
};

/// Self-check failed: two algebraic routes to the same quantity disagree.
class InternalError : public std::logic_error {
public:
  explicit InternalError(const std::string& what) : std::logic_error(what) {}
};

}  // namespace spinvar
