#pragma once

#include <stdexcept>

namespace spectra {

/// A computation violated one of its internal accuracy contracts
/// (eigensolver residuals, branch-selection residues, mass checks).
class numeric_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent experiment configuration.
class config_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Filesystem failure while emitting experiment artifacts.
class io_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace spectra
