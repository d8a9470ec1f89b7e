// SPDX-License-Identifier: Apache-2.0
//
// mmwave-hbf — link-level simulator for multiuser wideband mmWave hybrid
// beamforming with hierarchical codebooks and block-diagonalization precoding.
// Copyright (C) 2026 mmwave-hbf contributors
//
// Licensed under the Apache License, Version 2.0; see LICENSE for details.
// ------------------------------------------------------------------------

#ifndef HBF_COMMON_HPP
#define HBF_COMMON_HPP

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

namespace hbf
{

using cplx = std::complex<double>;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;
using RVec = Eigen::VectorXd;

inline constexpr double pi = 3.141592653589793238462643383279502884;

// Reduce an angle into [0, 2*pi).
inline double wrap_angle(double theta)
{
    double t = std::fmod(theta, 2.0 * pi);
    if (t < 0.0)
        t += 2.0 * pi;
    return t;
}

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

inline double linear_to_db(double x) { return 10.0 * std::log10(x); }

// Thrown when an operation receives arguments violating its contract
// (index ranges, dimension mismatches, power-constraint violations).
class contract_error : public std::invalid_argument
{
  public:
    explicit contract_error(const std::string &msg) : std::invalid_argument(msg) {}
};

// Thrown on malformed external inputs (channel files, configs).
class format_error : public std::runtime_error
{
  public:
    explicit format_error(const std::string &msg) : std::runtime_error(msg) {}
};

} // namespace hbf

#endif
