// SPDX-License-Identifier: Apache-2.0
//
// mmwave-hbf — link-level simulator for multiuser wideband mmWave hybrid
// beamforming with hierarchical codebooks and block-diagonalization precoding.
// Copyright (C) 2026 mmwave-hbf contributors
//
// Licensed under the Apache License, Version 2.0; see LICENSE for details.
// ------------------------------------------------------------------------

#ifndef HBF_ARRAY_HPP
#define HBF_ARRAY_HPP

#include "hbf/common.hpp"

#include <vector>

namespace hbf
{

// Uniform linear array: M elements, inter-element spacing d in wavelengths
// at the reference frequency f0.
struct ArrayGeometry
{
    int num_elements = 1;            // M
    double spacing_normalized = 0.5; // d (wavelengths at f0)
    double reference_frequency_hz = 60e9; // f0

    void validate() const;
};

// OFDM frequency grid: K subcarriers spaced delta_f around center f_c.
struct FrequencyGrid
{
    double center_frequency_hz = 58.32e9; // f_c
    double subcarrier_spacing_hz = 5156.25e3; // delta_f
    int num_subcarriers = 512;            // K

    void validate() const;
};

// Two-parameter element radiation model: front_gain_scale * sin(theta) on
// the front hemisphere [0, pi], a constant back_leakage otherwise.
struct ElementPattern
{
    double front_gain_scale = 2.0;
    double back_leakage = 1e-2;

    void validate() const;
};

// Adjacent-element mutual coupling amplitude (complex, |c| < 1).
struct CouplingModel
{
    cplx amplitude = 0.0;

    void validate() const;
};

// f_k = f_c + (k - 1 - K/2) * delta_f, k = 1..K (index K/2+1 is the center).
double subcarrier_frequency(const FrequencyGrid &grid, int k);

// F(theta): front_gain_scale * sin(theta) for theta in [0, pi] (after
// reduction mod 2*pi), back_leakage otherwise.
double element_gain(const ElementPattern &pattern, double theta);

// a_m(k, theta) = F(theta) * exp(j 2 pi d (f_k/f0) (m - (M+1)/2) cos theta).
CVec array_response(const ArrayGeometry &geom, const ElementPattern &pattern,
                    double f_k_hz, double theta);

// Phase-only steering vector (unit element gain); the array-factor part of
// array_response, used for closed-form beam-peak checks.
CVec steering_phases(const ArrayGeometry &geom, double f_k_hz, double theta);

// S[k]: zero diagonal; S_{m,m'} = c * exp(-j 2 pi d (f_k/f0) |m-m'|) / |m-m'|.
CMat coupling_matrix(const ArrayGeometry &geom, const CouplingModel &model,
                     double f_k_hz);

// Psi(k, theta) = a^H(k, theta) (I + S[k]) p over the angle grid.
std::vector<cplx> radiation_pattern(const ArrayGeometry &geom,
                                    const ElementPattern &pattern,
                                    const CMat &S, const CVec &p,
                                    double f_k_hz,
                                    const std::vector<double> &theta_grid);

// |a_phase^H(k, theta) p| over the grid: element-independent array factor,
// no coupling. Peak locations obey the closed form below.
std::vector<double> array_factor(const ArrayGeometry &geom, const CVec &p,
                                 double f_k_hz,
                                 const std::vector<double> &theta_grid);

// Closed-form peak direction of orthogonal beam m at subcarrier frequency
// f_k: cos(theta*) = clamp((f0/f_k) (1 - 2 (m-1)/M), -1, 1).
double squint_peak_cos(int M, int m, double f0_hz, double f_k_hz);

// Uniform angle grid: n points over [0, pi) (default pattern resolution).
std::vector<double> angle_grid(int n = 2048);

} // namespace hbf

#endif
