// Copyright 2026 The swipht-sim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <array>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <string_view>

#include <Eigen/Dense>

namespace swipht {

using cd = std::complex<double>;

template <typename Scalar>
using Matrix2c = Eigen::Matrix<std::complex<Scalar>, 2, 2>;
template <typename Scalar>
using Matrix4c = Eigen::Matrix<std::complex<Scalar>, 4, 4>;
template <typename Scalar>
using Matrix16c = Eigen::Matrix<std::complex<Scalar>, 16, 16>;

using Matrix4cd = Matrix4c<double>;
using Matrix16cd = Matrix16c<double>;
using Vector4cd = Eigen::Matrix<cd, 4, 1>;
using Vector16cd = Eigen::Matrix<cd, 16, 1>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Angular frequency (rad/s) from an ordinary frequency in Hz.
constexpr double angular(double hz) { return kTwoPi * hz; }
constexpr double to_hz(double rad_per_s) { return rad_per_s / kTwoPi; }

enum class Qubit { L, H };

constexpr Qubit other(Qubit q) { return q == Qubit::L ? Qubit::H : Qubit::L; }
constexpr std::string_view to_string(Qubit q) { return q == Qubit::L ? "L" : "H"; }

/// Two-qubit computational basis, L is the first (most significant) label.
enum BasisIndex : int { kGG = 0, kGE = 1, kEG = 2, kEE = 3 };
inline constexpr std::array<std::string_view, 4> kBasisLabels{"gg", "ge", "eg", "ee"};

/// Bad user input or a violated type invariant. Maps to CLI exit code 2.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Integrator, eigensolver or fit failure. Maps to CLI exit code 3.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace swipht
