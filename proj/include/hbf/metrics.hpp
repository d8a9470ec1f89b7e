// SPDX-License-Identifier: Apache-2.0
//
// mmwave-hbf — link-level simulator for multiuser wideband mmWave hybrid
// beamforming with hierarchical codebooks and block-diagonalization precoding.
// Copyright (C) 2026 mmwave-hbf contributors
//
// Licensed under the Apache License, Version 2.0; see LICENSE for details.
// ------------------------------------------------------------------------

#ifndef HBF_METRICS_HPP
#define HBF_METRICS_HPP

#include "hbf/channel.hpp"
#include "hbf/codebook.hpp"
#include "hbf/common.hpp"

#include <utility>
#include <vector>

namespace hbf
{

// Noiseless exhaustive-search optimum over the beam pair product codebook.
struct OracleSolution
{
    int l_ap = 0;        // 1-based index into B(M_ap)
    int l_ue = 0;        // 1-based index into B(M_ue)
    double objective = 0.0; // sum over the pilot set of |g^H H[k] p|^2
};

// Full objective table: obj(i, j) = sum_k |b_ue,i+1^H H[k] b_ap,j+1|^2.
// Keeping the table lets misalignment losses reuse the exact same
// floating-point sums the argmax saw, so "no error" implies exactly 0 dB.
struct ObjectiveTable
{
    Eigen::MatrixXd obj; // M_ue x M_ap
    OracleSolution best;
};

// full_coeffs[ki] = B(M_ue)^H H[k_i] B(M_ap) on the pilot set (the same
// beam-domain projection the training stages consume). Ties resolve to the
// lowest AP index, then the lowest STA index.
ObjectiveTable oracle_table(const std::vector<CMat> &full_coeffs);
OracleSolution oracle_exhaustive(const std::vector<CMat> &full_coeffs);

// Convenience overload evaluating the projections from an explicit tensor.
OracleSolution oracle_exhaustive(const ChannelTensor &tensor, int user,
                                 const CodebookSet &codebooks);

// Fraction of paired realizations whose (l_ap, l_ue) selections differ.
double bser(const std::vector<std::pair<int, int>> &selected,
            const std::vector<std::pair<int, int>> &oracle);

// Average misalignment loss 10*log10(oracle/algorithm) over realizations;
// realizations with non-positive algorithm objective are excluded.
struct LossReport
{
    double mean_db = 0.0;
    int included = 0;
    int excluded = 0;
};

LossReport misalignment_loss_db(const std::vector<double> &oracle_objective,
                                const std::vector<double> &algo_objective);

// Achievable sum-rate of a multiuser downlink realization. true_rows[u] is
// the noiseless equivalent channel (K x N_rf, genie); p_di is the digital
// precoder per subcarrier; every user transmits with power rho_user.
struct RateReport
{
    std::vector<double> per_user; // bits/s/Hz, averaged over subcarriers
    double sum_rate = 0.0;
};

RateReport achievable_sum_rate(const std::vector<CMat> &true_rows,
                               const std::vector<CMat> &p_di, double rho_user,
                               double sigma_z2);

// Horizontal dB gap between a hybrid rate curve and a dominating baseline
// curve on a common SNR grid, averaged over the top half of the grid.
// Rates must be monotone increasing in SNR for the interpolation to be
// meaningful. Baseline targets above the hybrid curve's range are reached by
// extrapolating the last hybrid segment; targets below its range are skipped
// (points_used reports how many grid points actually contributed).
struct GapReport
{
    double gap_db = 0.0;
    int points_used = 0;
    int points_total = 0;
};

GapReport snr_sweep_gap_db(const std::vector<double> &snr_db,
                           const std::vector<double> &hybrid,
                           const std::vector<double> &baseline);

} // namespace hbf

#endif
