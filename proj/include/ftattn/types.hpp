#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace ftattn {

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using Real = double;
using Matrix = MatrixX<Real>;
using Vector = VectorX<Real>;
using Vec2 = Eigen::Matrix<Real, 2, 1>;
using IntVector = VectorX<int>;
using IntMatrix = MatrixX<int>;
using BoolVec = Eigen::Array<bool, Eigen::Dynamic, 1>;
using Index = Eigen::Index;

/// Invalid run configuration (bad field values, impossible combinations).
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed operation input (dimension mismatch, index out of range).
struct InputError : std::runtime_error {
  explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

/// Non-finite value encountered during numeric evaluation.
struct NumericError : std::runtime_error {
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

/// Requested more samples than the store currently holds.
struct NotReadyError : std::runtime_error {
  explicit NotReadyError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace ftattn
