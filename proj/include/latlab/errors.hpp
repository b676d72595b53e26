#pragma once

#include <stdexcept>
#include <string>

namespace latlab {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Input distribution has fewer than two distinct atoms.
struct DegenerateDistribution : Error {
  using Error::Error;
};

// Atom values admit no common rational span within tolerance.
struct NotLattice : Error {
  using Error::Error;
};

// A requested computation exceeds the configured size cap.
struct CapExceeded : Error {
  using Error::Error;
};

// Argument outside the mathematically valid open interval.
struct OutOfRange : Error {
  using Error::Error;
};

// A point nβ that is not on the lattice n^{-1}hZ.
struct OffLattice : Error {
  using Error::Error;
};

// τ coincides with a point of the geometric support e^{hZ-Δ}.
struct TauOnLattice : Error {
  using Error::Error;
};

struct QuadratureNotConverged : Error {
  using Error::Error;
};

struct ConfigInvalid : Error {
  using Error::Error;
};

}  // namespace latlab
