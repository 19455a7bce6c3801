#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace lprec {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;

// Thrown when a caller violates a documented precondition (bad p, mismatched
// shapes, out-of-range sparsity, ...).
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Thrown when a computation cannot proceed for numerical reasons
// (singular projector, empty feasible set, condition P violated, ...).
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Thrown on malformed files and I/O failures.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Ensemble : std::uint8_t {
  kGaussian = 0,
  kUniformSphere = 1,
  kExternal = 2,
};

std::string ensemble_name(Ensemble e);
Ensemble ensemble_from_name(const std::string& name);

// A sensing matrix plus the metadata needed to regenerate or audit it.
struct MeasurementMatrix {
  Matrix entries;  // M x N, rows are measurements
  Ensemble ensemble = Ensemble::kExternal;
  std::uint64_t seed = 0;

  Index rows() const { return entries.rows(); }
  Index cols() const { return entries.cols(); }
};

}  // namespace lprec
