// SPDX-License-Identifier: Apache-2.0
//
// mmwave-hbf — link-level simulator for multiuser wideband mmWave hybrid
// beamforming with hierarchical codebooks and block-diagonalization precoding.
// Copyright (C) 2026 mmwave-hbf contributors
//
// Licensed under the Apache License, Version 2.0; see LICENSE for details.
// ------------------------------------------------------------------------

#ifndef HBF_DIGITAL_HPP
#define HBF_DIGITAL_HPP

#include "hbf/common.hpp"
#include "hbf/rng.hpp"
#include "hbf/signal.hpp"

#include <string>
#include <vector>

namespace hbf
{

// Pilot-to-full-band extension of the equivalent-channel estimates.
//   linear  complex linear interpolation between neighbouring pilots
//           (the pilot grid always contains subcarriers 1 and K)
//   hold    nearest-pilot hold (ties resolve to the lower pilot)
enum class CsiInterpolation
{
    linear,
    hold,
};

CsiInterpolation csi_interpolation_from_string(const std::string &name);
std::string to_string(CsiInterpolation interp);

// Per-user equivalent-channel estimates extended to the full band.
struct EquivalentChannelEstimate
{
    std::vector<CMat> rows;     // per user: K x N_rf, row k-1 = h_eq,u[k]
    int training_transmissions = 0; // one uplink training per user
};

// Estimate h_eq,u[k] = g_u^H H_u[k] P_an from one uplink training per user.
// true_rows[u] holds the noiseless rows for every subcarrier 1..K; the
// estimator observes amplitude() * row + CN(0, (sigma^2/N_rf)/T) per chain at
// the pilot subcarriers only (the per-chain ML sufficient statistic of the
// T-symbol training) and extends to the full band by `interp`.
EquivalentChannelEstimate
estimate_equivalent_channels(const std::vector<CMat> &true_rows,
                             const std::vector<int> &pilot_k,
                             const LinkBudget &budget, int T,
                             CsiInterpolation interp, Rng &rng);

// Block-diagonalization digital precoder.
struct DigitalPrecoder
{
    std::vector<CMat> p_di;  // per subcarrier: N_rf x U
    double rho_user = 0.0;   // equal-split per-user power rho/U
    bool feasible = true;
    std::string diagnostic;  // reason when infeasible
};

// For each subcarrier, column u is the unit direction in the null space of
// the other users' estimated rows that maximizes |h_eq,u * column| (i.e. the
// normalized null-space projection of h_eq,u^H), scaled so that each column
// of P_an P_di has norm 1/sqrt(U) and hence ||P_an P_di||_F = 1. Null spaces
// come from a singular-value factorization with rank threshold
// 1e-10 * sigma_max. heq[u] is K_eval x N_rf; the result holds one matrix
// per evaluated subcarrier.
DigitalPrecoder bd_precoder(const std::vector<CMat> &heq, const CMat &p_an,
                            double rho);

// Fully-digital baselines (perfect CSI, one stream per user).
struct BaselineRates
{
    std::vector<double> per_user; // average over subcarriers, bits/s/Hz
    double sum_rate = 0.0;
};

// SNR-independent part of the fully-digital BD baseline: received signal
// and interference powers per (subcarrier, user), already scaled by the
// per-user power rho/U. Rates at any noise level follow cheaply.
struct BaselineGains
{
    Eigen::MatrixXd signal;       // K x U
    Eigen::MatrixXd interference; // K x U
};

BaselineGains fully_digital_bd_gains(const std::vector<std::vector<CMat>> &h,
                                     double rho);
BaselineRates baseline_rates_from_gains(const BaselineGains &gains,
                                        double sigma_z2);

// Ideal fully-digital BD: per user and subcarrier the receiver applies the
// dominant left singular vector of H_u[k] (eigenbeamforming); the transmit
// column for user u is the normalized null-space projection of the resulting
// effective row against the other users' effective rows, with the same
// equal-power convention as the hybrid system (per-user power rho/U,
// transmit columns of norm 1/sqrt(U)). h[u][ki] are full channel matrices.
BaselineRates fully_digital_bd_baseline(const std::vector<std::vector<CMat>> &h,
                                        double rho, double sigma_z2);

// Ideal single-user SVD beamforming: rate = (1/K) sum_k
// log2(1 + rho_subcarrier * sigma_max^2(H[k]) / sigma_z2).
double single_user_svd_baseline(const std::vector<CMat> &h_all_k,
                                double rho_subcarrier, double sigma_z2);

} // namespace hbf

#endif
