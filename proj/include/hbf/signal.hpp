// SPDX-License-Identifier: Apache-2.0
//
// mmwave-hbf — link-level simulator for multiuser wideband mmWave hybrid
// beamforming with hierarchical codebooks and block-diagonalization precoding.
// Copyright (C) 2026 mmwave-hbf contributors
//
// Licensed under the Apache License, Version 2.0; see LICENSE for details.
// ------------------------------------------------------------------------

#ifndef HBF_SIGNAL_HPP
#define HBF_SIGNAL_HPP

#include "hbf/common.hpp"
#include "hbf/rng.hpp"

#include <vector>

namespace hbf
{

// Total transmit power rho (linear), noise variance sigma_z^2 (linear);
// snr = rho / sigma_z^2. power_denom is the number of subcarriers the
// training power is spread over: amplitudes scale as sqrt(rho/power_denom)
// (K for full-band spreading, |K_set| to concentrate on active pilots).
struct LinkBudget
{
    double rho = 1.0;
    double sigma_z2 = 1.0;
    double power_denom = 1.0;

    double snr() const { return rho / sigma_z2; }
    double amplitude() const { return std::sqrt(rho / power_denom); }

    void validate() const
    {
        if (rho <= 0.0 || sigma_z2 < 0.0 || power_denom <= 0.0)
            throw contract_error("LinkBudget: rho, power_denom > 0 and sigma_z2 >= 0");
    }
};

// Known training sequences x[k] (unit-modulus QPSK, ||x[k]||^2 = T) on the
// pilot set K_set.
struct TrainingSignal
{
    std::vector<int> k_set;  // pilot subcarrier indices, 1-based
    int T = 0;               // symbols per training transmission
    CMat x;                  // |K_set| x T, rows are x[k]

    int num_pilots() const { return static_cast<int>(k_set.size()); }
};

// Evenly spaced pilots including both band edges:
// k_i = round((i-1)(K-1)/(K_tx-1)) + 1 for K_tx > 1; {1} for K_tx = 1.
std::vector<int> pilot_indices(int K, int K_tx);

TrainingSignal gen_training(Rng &rng, const std::vector<int> &k_set, int T);

// v[k] = sqrt(rho/K) p^T H^T[k] conj(g) — the uplink coefficient after
// beamforming. Identical to sqrt(rho/K) g^H H[k] p (scalar transpose).
cplx uplink_coefficient(const CVec &p, const CVec &g, const CMat &h_downlink,
                        double rho, double K);

// Per-RF-chain received uplink sequences y_n[k] = v_n[k] x[k] + z_n[k], with
// per-chain noise CN(0, sigma_z^2 / N_rf) per symbol. One matrix (N_rf x T)
// per pilot subcarrier.
std::vector<CMat> uplink_receive(const CMat &p_an, const CVec &g,
                                 const std::vector<CMat> &h_at_pilots,
                                 const TrainingSignal &x,
                                 const LinkBudget &budget, Rng &rng);

// Downlink with analog matrix P_an driving all chains with the same symbol:
// w[k] = sqrt(rho/(denom N_rf)) g^H H[k] P_an 1; y[k] = w[k] x[k] + z[k],
// z ~ CN(0, sigma_z^2 I_T).
std::vector<Eigen::RowVectorXcd>
downlink_receive(const CVec &g, const std::vector<CMat> &h_at_pilots,
                 const CMat &p_an, const TrainingSignal &x,
                 const LinkBudget &budget, Rng &rng);

// Noiseless coefficient the downlink model produces (for reference checks).
cplx downlink_coefficient(const CVec &g, const CMat &h, const CMat &p_an,
                          double rho, double denom);

// ML estimate v_hat = y x^H / ||x||^2.
cplx ml_estimate(const Eigen::RowVectorXcd &y, const Eigen::RowVectorXcd &x);

// Broadcast data-phase signal for user u over one subcarrier:
// y_u = h_eq,u P_di s + z, h_eq,u = g_u^H H_u[k] P_an. Symbol powers are
// E|s_u|^2 = rho_u. Returns the received scalar sample.
cplx multiuser_downlink_signal(const CMat &h_u, const CVec &g_u,
                               const CMat &p_an, const CMat &p_di,
                               const CVec &s, double sigma_z2, Rng &rng);

} // namespace hbf

#endif
