// SPDX-License-Identifier: Apache-2.0
//
// mmwave-hbf — link-level simulator for multiuser wideband mmWave hybrid
// beamforming with hierarchical codebooks and block-diagonalization precoding.
// Copyright (C) 2026 mmwave-hbf contributors
//
// Licensed under the Apache License, Version 2.0; see LICENSE for details.
// ------------------------------------------------------------------------

#include "hbf/signal.hpp"

#include <cmath>

namespace hbf
{

std::vector<int> pilot_indices(int K, int K_tx)
{
    if (K < 1 || K_tx < 1 || K_tx > K)
        throw contract_error("pilot_indices: need 1 <= K_tx <= K");
    if (K_tx == 1)
        return {1};
    std::vector<int> k_set(static_cast<std::size_t>(K_tx));
    for (int i = 1; i <= K_tx; ++i)
    {
        const double pos = static_cast<double>(i - 1) *
                           static_cast<double>(K - 1) /
                           static_cast<double>(K_tx - 1);
        k_set[static_cast<std::size_t>(i - 1)] =
            static_cast<int>(std::lround(pos)) + 1;
    }
    return k_set;
}

TrainingSignal gen_training(Rng &rng, const std::vector<int> &k_set, int T)
{
    if (T < 1)
        throw contract_error("gen_training: T must be >= 1");
    if (k_set.empty())
        throw contract_error("gen_training: empty pilot set");
    static const cplx qpsk[4] = {
        {M_SQRT1_2, M_SQRT1_2}, {-M_SQRT1_2, M_SQRT1_2},
        {-M_SQRT1_2, -M_SQRT1_2}, {M_SQRT1_2, -M_SQRT1_2}};
    TrainingSignal sig;
    sig.k_set = k_set;
    sig.T = T;
    sig.x.resize(static_cast<int>(k_set.size()), T);
    for (int r = 0; r < sig.x.rows(); ++r)
        for (int t = 0; t < T; ++t)
            sig.x(r, t) = qpsk[rng.uniform_int(4)];
    return sig;
}

cplx uplink_coefficient(const CVec &p, const CVec &g, const CMat &h_downlink,
                        double rho, double K)
{
    if (p.size() != h_downlink.cols() || g.size() != h_downlink.rows())
        throw contract_error("uplink_coefficient: dimension mismatch");
    if (rho <= 0.0 || K <= 0.0)
        throw contract_error("uplink_coefficient: rho, K must be > 0");
    // p^T H^T conj(g) equals g^H H p for any scalar; evaluate the latter.
    const cplx coeff = (g.adjoint() * h_downlink * p)(0);
    return std::sqrt(rho / K) * coeff;
}

std::vector<CMat> uplink_receive(const CMat &p_an, const CVec &g,
                                 const std::vector<CMat> &h_at_pilots,
                                 const TrainingSignal &x,
                                 const LinkBudget &budget, Rng &rng)
{
    budget.validate();
    const int n_rf = static_cast<int>(p_an.cols());
    if (static_cast<int>(h_at_pilots.size()) != x.num_pilots())
        throw contract_error("uplink_receive: channel/pilot count mismatch");
    // Per-column power 1/N_rf and an STA beam with at most unit power are
    // part of the model's power accounting.
    for (int n = 0; n < n_rf; ++n)
        if (p_an.col(n).squaredNorm() > 1.0 / n_rf + 1e-9)
            throw contract_error("uplink_receive: AP column power exceeds 1/N_rf");
    if (g.squaredNorm() > 1.0 + 1e-9)
        throw contract_error("uplink_receive: STA beam power exceeds 1");
    const double amp = budget.amplitude();
    const double chain_var = budget.sigma_z2 / n_rf;
    std::vector<CMat> y;
    y.reserve(h_at_pilots.size());
    for (std::size_t i = 0; i < h_at_pilots.size(); ++i)
    {
        const CMat &h = h_at_pilots[i];
        if (g.size() != h.rows() || p_an.rows() != h.cols())
            throw contract_error("uplink_receive: channel dimension mismatch");
        // v_n[k] = amp * p_n^T H^T conj(g) = amp * g^H H p_n
        const Eigen::RowVectorXcd v = amp * (g.adjoint() * h * p_an);
        CMat yk(n_rf, x.T);
        for (int n = 0; n < n_rf; ++n)
            for (int t = 0; t < x.T; ++t)
                yk(n, t) = v(n) * x.x(static_cast<int>(i), t) +
                           rng.cnormal(chain_var);
        y.push_back(std::move(yk));
    }
    return y;
}

cplx downlink_coefficient(const CVec &g, const CMat &h, const CMat &p_an,
                          double rho, double denom)
{
    const int n_rf = static_cast<int>(p_an.cols());
    const CVec combined = p_an * CVec::Ones(n_rf);
    return std::sqrt(rho / (denom * n_rf)) * (g.adjoint() * h * combined)(0);
}

std::vector<Eigen::RowVectorXcd>
downlink_receive(const CVec &g, const std::vector<CMat> &h_at_pilots,
                 const CMat &p_an, const TrainingSignal &x,
                 const LinkBudget &budget, Rng &rng)
{
    budget.validate();
    if (static_cast<int>(h_at_pilots.size()) != x.num_pilots())
        throw contract_error("downlink_receive: channel/pilot count mismatch");
    const int n_rf = static_cast<int>(p_an.cols());
    for (int n = 0; n < n_rf; ++n)
        if (p_an.col(n).squaredNorm() > 1.0 / n_rf + 1e-9)
            throw contract_error("downlink_receive: AP column power exceeds 1/N_rf");
    if (g.squaredNorm() > 1.0 + 1e-9)
        throw contract_error("downlink_receive: STA beam power exceeds 1");
    std::vector<Eigen::RowVectorXcd> y;
    y.reserve(h_at_pilots.size());
    for (std::size_t i = 0; i < h_at_pilots.size(); ++i)
    {
        const cplx w = downlink_coefficient(g, h_at_pilots[i], p_an, budget.rho,
                                            budget.power_denom);
        Eigen::RowVectorXcd yk(x.T);
        for (int t = 0; t < x.T; ++t)
            yk(t) = w * x.x(static_cast<int>(i), t) + rng.cnormal(budget.sigma_z2);
        y.push_back(std::move(yk));
    }
    return y;
}

cplx ml_estimate(const Eigen::RowVectorXcd &y, const Eigen::RowVectorXcd &x)
{
    const double energy = x.squaredNorm();
    if (energy <= 0.0)
        throw contract_error("ml_estimate: zero training energy");
    if (y.size() != x.size())
        throw contract_error("ml_estimate: sequence length mismatch");
    // y x^H / ||x||^2
    return (y * x.adjoint())(0) / energy;
}

cplx multiuser_downlink_signal(const CMat &h_u, const CVec &g_u,
                               const CMat &p_an, const CMat &p_di,
                               const CVec &s, double sigma_z2, Rng &rng)
{
    if (p_di.rows() != p_an.cols() || p_di.cols() != s.size())
        throw contract_error("multiuser_downlink_signal: precoder shape mismatch");
    const double norm = (p_an * p_di).norm();
    if (std::abs(norm - 1.0) > 1e-6)
        throw contract_error(
            "multiuser_downlink_signal: ||P_an P_di||_F must be 1");
    const Eigen::RowVectorXcd h_eq = g_u.adjoint() * h_u * p_an;
    return (h_eq * p_di * s)(0) + rng.cnormal(sigma_z2);
}

} // namespace hbf
