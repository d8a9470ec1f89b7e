// SPDX-License-Identifier: Apache-2.0
//
// mmwave-hbf — link-level simulator for multiuser wideband mmWave hybrid
// beamforming with hierarchical codebooks and block-diagonalization precoding.
// Copyright (C) 2026 mmwave-hbf contributors
//
// Licensed under the Apache License, Version 2.0; see LICENSE for details.
// ------------------------------------------------------------------------

#include "hbf/array.hpp"

#include <algorithm>

namespace hbf
{

void ArrayGeometry::validate() const
{
    if (num_elements < 1)
        throw contract_error("ArrayGeometry: num_elements must be >= 1");
    if (spacing_normalized <= 0.0)
        throw contract_error("ArrayGeometry: spacing_normalized must be > 0");
    if (reference_frequency_hz <= 0.0)
        throw contract_error("ArrayGeometry: reference_frequency_hz must be > 0");
}

void FrequencyGrid::validate() const
{
    if (subcarrier_spacing_hz <= 0.0)
        throw contract_error("FrequencyGrid: subcarrier_spacing_hz must be > 0");
    if (num_subcarriers < 1)
        throw contract_error("FrequencyGrid: num_subcarriers must be >= 1");
    if (subcarrier_frequency(*this, 1) <= 0.0)
        throw contract_error("FrequencyGrid: lowest subcarrier frequency must be > 0");
}

void ElementPattern::validate() const
{
    if (front_gain_scale <= 0.0)
        throw contract_error("ElementPattern: front_gain_scale must be > 0");
    if (back_leakage <= 0.0 || back_leakage >= front_gain_scale)
        throw contract_error("ElementPattern: need 0 < back_leakage < front_gain_scale");
}

void CouplingModel::validate() const
{
    if (std::abs(amplitude) >= 1.0)
        throw contract_error("CouplingModel: |amplitude| must be < 1");
}

double subcarrier_frequency(const FrequencyGrid &grid, int k)
{
    if (k < 1 || k > grid.num_subcarriers)
        throw contract_error("subcarrier_frequency: k out of range 1..K");
    const double offset = static_cast<double>(k) - 1.0 -
                          static_cast<double>(grid.num_subcarriers) / 2.0;
    return grid.center_frequency_hz + offset * grid.subcarrier_spacing_hz;
}

double element_gain(const ElementPattern &pattern, double theta)
{
    const double t = wrap_angle(theta);
    if (t <= pi)
        return pattern.front_gain_scale * std::sin(t);
    return pattern.back_leakage;
}

CVec array_response(const ArrayGeometry &geom, const ElementPattern &pattern,
                    double f_k_hz, double theta)
{
    if (f_k_hz <= 0.0)
        throw contract_error("array_response: f_k must be > 0");
    const int M = geom.num_elements;
    const double F = element_gain(pattern, theta);
    const double slope = 2.0 * pi * geom.spacing_normalized *
                         (f_k_hz / geom.reference_frequency_hz) *
                         std::cos(wrap_angle(theta));
    CVec a(M);
    for (int m = 1; m <= M; ++m)
    {
        const double phase = slope * (static_cast<double>(m) - (M + 1) / 2.0);
        a(m - 1) = F * cplx(std::cos(phase), std::sin(phase));
    }
    return a;
}

CVec steering_phases(const ArrayGeometry &geom, double f_k_hz, double theta)
{
    const int M = geom.num_elements;
    const double slope = 2.0 * pi * geom.spacing_normalized *
                         (f_k_hz / geom.reference_frequency_hz) *
                         std::cos(wrap_angle(theta));
    CVec a(M);
    for (int m = 1; m <= M; ++m)
    {
        const double phase = slope * (static_cast<double>(m) - (M + 1) / 2.0);
        a(m - 1) = cplx(std::cos(phase), std::sin(phase));
    }
    return a;
}

CMat coupling_matrix(const ArrayGeometry &geom, const CouplingModel &model,
                     double f_k_hz)
{
    if (f_k_hz <= 0.0)
        throw contract_error("coupling_matrix: f_k must be > 0");
    const int M = geom.num_elements;
    const double ratio = f_k_hz / geom.reference_frequency_hz;
    CMat S = CMat::Zero(M, M);
    for (int m = 0; m < M; ++m)
        for (int mp = 0; mp < M; ++mp)
        {
            if (m == mp)
                continue;
            const double dist = std::abs(m - mp);
            const double phase = -2.0 * pi * geom.spacing_normalized * ratio * dist;
            S(m, mp) = model.amplitude *
                       cplx(std::cos(phase), std::sin(phase)) / dist;
        }
    return S;
}

std::vector<cplx> radiation_pattern(const ArrayGeometry &geom,
                                    const ElementPattern &pattern,
                                    const CMat &S, const CVec &p,
                                    double f_k_hz,
                                    const std::vector<double> &theta_grid)
{
    if (p.size() != geom.num_elements)
        throw contract_error("radiation_pattern: beamformer length != num_elements");
    if (S.rows() != geom.num_elements || S.cols() != geom.num_elements)
        throw contract_error("radiation_pattern: coupling matrix shape mismatch");
    if (theta_grid.empty())
        throw contract_error("radiation_pattern: empty angle grid");
    const CVec cp = (CMat::Identity(geom.num_elements, geom.num_elements) + S) * p;
    std::vector<cplx> psi;
    psi.reserve(theta_grid.size());
    for (double theta : theta_grid)
    {
        const CVec a = array_response(geom, pattern, f_k_hz, theta);
        psi.push_back(a.dot(cp)); // Eigen dot() conjugates the left operand
    }
    return psi;
}

std::vector<double> array_factor(const ArrayGeometry &geom, const CVec &p,
                                 double f_k_hz,
                                 const std::vector<double> &theta_grid)
{
    if (p.size() != geom.num_elements)
        throw contract_error("array_factor: beamformer length != num_elements");
    std::vector<double> af;
    af.reserve(theta_grid.size());
    for (double theta : theta_grid)
    {
        const CVec a = steering_phases(geom, f_k_hz, theta);
        af.push_back(std::abs(a.dot(p)));
    }
    return af;
}

double squint_peak_cos(int M, int m, double f0_hz, double f_k_hz)
{
    const double c = (f0_hz / f_k_hz) *
                     (1.0 - 2.0 * (static_cast<double>(m) - 1.0) / M);
    return std::clamp(c, -1.0, 1.0);
}

std::vector<double> angle_grid(int n)
{
    std::vector<double> grid(n);
    for (int i = 0; i < n; ++i)
        grid[i] = pi * static_cast<double>(i) / n;
    return grid;
}

} // namespace hbf
