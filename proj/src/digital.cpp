// SPDX-License-Identifier: Apache-2.0
//
// mmwave-hbf — link-level simulator for multiuser wideband mmWave hybrid
// beamforming with hierarchical codebooks and block-diagonalization precoding.
// Copyright (C) 2026 mmwave-hbf contributors
//
// Licensed under the Apache License, Version 2.0; see LICENSE for details.
// ------------------------------------------------------------------------

#include "hbf/digital.hpp"

#include <Eigen/SVD>

#include <cmath>

namespace hbf
{

CsiInterpolation csi_interpolation_from_string(const std::string &name)
{
    if (name == "linear")
        return CsiInterpolation::linear;
    if (name == "hold")
        return CsiInterpolation::hold;
    throw contract_error("unknown CSI interpolation '" + name + "'");
}

std::string to_string(CsiInterpolation interp)
{
    return interp == CsiInterpolation::linear ? "linear" : "hold";
}

namespace
{

// Extend pilot-subcarrier rows to subcarriers 1..K. Pilots are 1-based,
// strictly increasing. Subcarriers outside the pilot span copy the nearest
// end pilot (the standard grids always include 1 and K, so this is only an
// edge guard).
CMat extend_pilot_rows(const CMat &hp, const std::vector<int> &pilot_k, int K,
                       CsiInterpolation interp)
{
    const int num_pilots = static_cast<int>(pilot_k.size());
    if (num_pilots != static_cast<int>(hp.rows()))
        throw contract_error("extend_pilot_rows: pilot count mismatch");
    for (int i = 0; i < num_pilots; ++i)
    {
        if (pilot_k[static_cast<std::size_t>(i)] < 1 ||
            pilot_k[static_cast<std::size_t>(i)] > K)
            throw contract_error("extend_pilot_rows: pilot outside 1..K");
        if (i > 0 && pilot_k[static_cast<std::size_t>(i)] <=
                         pilot_k[static_cast<std::size_t>(i - 1)])
            throw contract_error("extend_pilot_rows: pilots must increase");
    }
    CMat out(K, hp.cols());
    int seg = 0; // greatest index with pilot_k[seg] <= k (clamped)
    for (int k = 1; k <= K; ++k)
    {
        while (seg + 1 < num_pilots &&
               pilot_k[static_cast<std::size_t>(seg + 1)] <= k)
            ++seg;
        const int lo = pilot_k[static_cast<std::size_t>(seg)];
        if (k <= lo || seg + 1 == num_pilots)
        {
            out.row(k - 1) = hp.row(seg);
            continue;
        }
        const int hi = pilot_k[static_cast<std::size_t>(seg + 1)];
        if (interp == CsiInterpolation::linear)
        {
            const double w =
                static_cast<double>(k - lo) / static_cast<double>(hi - lo);
            out.row(k - 1) = (1.0 - w) * hp.row(seg) + w * hp.row(seg + 1);
        }
        else
        {
            // Nearest pilot; equidistant ties resolve to the lower pilot.
            out.row(k - 1) = (k - lo <= hi - k) ? hp.row(seg) : hp.row(seg + 1);
        }
    }
    return out;
}

} // namespace

EquivalentChannelEstimate
estimate_equivalent_channels(const std::vector<CMat> &true_rows,
                             const std::vector<int> &pilot_k,
                             const LinkBudget &budget, int T,
                             CsiInterpolation interp, Rng &rng)
{
    budget.validate();
    if (T < 1)
        throw contract_error("estimate_equivalent_channels: T must be >= 1");
    if (true_rows.empty() || pilot_k.empty())
        throw contract_error("estimate_equivalent_channels: empty input");
    EquivalentChannelEstimate est;
    est.rows.reserve(true_rows.size());
    const double amp = budget.amplitude();
    for (const CMat &rows : true_rows)
    {
        const int K = static_cast<int>(rows.rows());
        const int n_rf = static_cast<int>(rows.cols());
        // One uplink training per user; each chain's ML estimate carries
        // noise CN(0, (sigma^2/N_rf)/T).
        const double est_var = (budget.sigma_z2 / n_rf) / T;
        CMat hp(static_cast<int>(pilot_k.size()), n_rf);
        for (std::size_t p = 0; p < pilot_k.size(); ++p)
        {
            const int k = pilot_k[p];
            if (k < 1 || k > K)
                throw contract_error(
                    "estimate_equivalent_channels: pilot outside 1..K");
            for (int c = 0; c < n_rf; ++c)
                hp(static_cast<int>(p), c) =
                    amp * rows(k - 1, c) + rng.cnormal(est_var);
        }
        est.rows.push_back(extend_pilot_rows(hp, pilot_k, K, interp));
    }
    est.training_transmissions = static_cast<int>(true_rows.size());
    return est;
}

namespace
{

// Unnormalized projection of h^H onto the null space of the rows of
// `others`, computed from a singular-value factorization with rank threshold
// 1e-10 * sigma_max. Returns a zero vector when the null space is empty.
CVec null_space_projection(const CMat &others, const Eigen::RowVectorXcd &h)
{
    const CVec target = h.adjoint();
    if (others.rows() == 0)
        return target;
    Eigen::JacobiSVD<CMat> svd(others, Eigen::ComputeThinV);
    const RVec &sv = svd.singularValues();
    const double smax = sv.size() > 0 ? sv(0) : 0.0;
    if (smax <= 0.0)
        return target;
    Eigen::Index rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > 1e-10 * smax)
            ++rank;
    if (rank >= others.cols())
        return CVec::Zero(others.cols());
    const auto v_row = svd.matrixV().leftCols(rank);
    return target - v_row * (v_row.adjoint() * target);
}

} // namespace

DigitalPrecoder bd_precoder(const std::vector<CMat> &heq, const CMat &p_an,
                            double rho)
{
    const int num_users = static_cast<int>(heq.size());
    if (num_users < 1)
        throw contract_error("bd_precoder: need at least one user");
    if (!(rho > 0.0))
        throw contract_error("bd_precoder: rho must be positive");
    const int num_k = static_cast<int>(heq.front().rows());
    const int n_rf = static_cast<int>(heq.front().cols());
    for (const CMat &rows : heq)
        if (rows.rows() != num_k || rows.cols() != n_rf)
            throw contract_error("bd_precoder: inconsistent row shapes");
    if (p_an.cols() != n_rf)
        throw contract_error("bd_precoder: P_an column count != N_rf");

    DigitalPrecoder out;
    out.rho_user = rho / num_users;
    if (num_users > n_rf)
    {
        out.feasible = false;
        out.diagnostic = "more users (" + std::to_string(num_users) +
                         ") than RF chains (" + std::to_string(n_rf) + ")";
        return out;
    }
    out.p_di.assign(static_cast<std::size_t>(num_k), CMat(n_rf, num_users));
    const double col_scale = 1.0 / std::sqrt(static_cast<double>(num_users));
    CMat others(num_users - 1, n_rf);
    for (int k = 0; k < num_k; ++k)
    {
        for (int u = 0; u < num_users; ++u)
        {
            CVec proj;
            if (num_users == 1)
            {
                // No interference constraints: matched filter direction.
                proj = heq[0].row(k).adjoint();
            }
            else
            {
                int r = 0;
                for (int up = 0; up < num_users; ++up)
                    if (up != u)
                        others.row(r++) = heq[static_cast<std::size_t>(up)].row(k);
                proj = null_space_projection(others, heq[static_cast<std::size_t>(u)].row(k));
            }
            const double nn = proj.norm();
            // Relative to the row norm: rounding noise in an exactly
            // interference-spanned row must not pass for a usable direction.
            const double row_norm = heq[static_cast<std::size_t>(u)].row(k).norm();
            if (nn <= 1e-12 * row_norm)
            {
                out.feasible = false;
                out.diagnostic = "null-space projection vanished for user " +
                                 std::to_string(u) + " at subcarrier index " +
                                 std::to_string(k);
                return out;
            }
            const CVec chat = proj / nn;
            // Column scaling: each column of P_an P_di gets norm 1/sqrt(U),
            // so ||P_an P_di||_F = 1 exactly.
            const double pan_c = (p_an * chat).norm();
            if (pan_c <= 1e-300)
            {
                out.feasible = false;
                out.diagnostic = "analog matrix annihilates the precoding "
                                 "direction for user " + std::to_string(u);
                return out;
            }
            out.p_di[static_cast<std::size_t>(k)].col(u) =
                chat * (col_scale / pan_c);
        }
    }
    return out;
}

BaselineGains fully_digital_bd_gains(const std::vector<std::vector<CMat>> &h,
                                     double rho)
{
    const int num_users = static_cast<int>(h.size());
    if (num_users < 1)
        throw contract_error("fully_digital_bd_gains: need users");
    if (!(rho > 0.0))
        throw contract_error("fully_digital_bd_gains: rho must be positive");
    const int K = static_cast<int>(h.front().size());
    const int m_ap = static_cast<int>(h.front().front().cols());
    for (const auto &hu : h)
        if (static_cast<int>(hu.size()) != K)
            throw contract_error("fully_digital_bd_gains: subcarrier count "
                                 "mismatch");
    if (num_users > m_ap)
        throw contract_error("fully_digital_bd_gains: more streams than "
                             "transmit antennas");

    const double rho_user = rho / num_users;
    const double col_scale = 1.0 / std::sqrt(static_cast<double>(num_users));
    BaselineGains gains;
    gains.signal = Eigen::MatrixXd::Zero(K, num_users);
    gains.interference = Eigen::MatrixXd::Zero(K, num_users);

    CMat rows(num_users, m_ap);    // effective rows g_u^H H_u[k]
    CMat cols(m_ap, num_users);    // BD transmit columns
    CMat others(num_users - 1, m_ap);
    for (int k = 0; k < K; ++k)
    {
        // Eigenbeamforming receivers: dominant left singular vector.
        for (int u = 0; u < num_users; ++u)
        {
            const CMat &hu = h[static_cast<std::size_t>(u)][static_cast<std::size_t>(k)];
            Eigen::BDCSVD<CMat> svd(hu, Eigen::ComputeThinU);
            rows.row(u) = svd.matrixU().col(0).adjoint() * hu;
        }
        for (int u = 0; u < num_users; ++u)
        {
            CVec proj;
            if (num_users == 1)
            {
                proj = rows.row(0).adjoint();
            }
            else
            {
                int r = 0;
                for (int up = 0; up < num_users; ++up)
                    if (up != u)
                        others.row(r++) = rows.row(up);
                proj = null_space_projection(others, rows.row(u));
            }
            const double nn = proj.norm();
            if (nn <= 1e-300)
                throw contract_error("fully_digital_bd_gains: null space "
                                     "empty for user " + std::to_string(u));
            cols.col(u) = proj * (col_scale / nn);
        }
        for (int u = 0; u < num_users; ++u)
        {
            gains.signal(k, u) =
                rho_user * std::norm((rows.row(u) * cols.col(u)).value());
            for (int up = 0; up < num_users; ++up)
                if (up != u)
                    gains.interference(k, u) +=
                        rho_user *
                        std::norm((rows.row(u) * cols.col(up)).value());
        }
    }
    return gains;
}

BaselineRates baseline_rates_from_gains(const BaselineGains &gains,
                                        double sigma_z2)
{
    if (!(sigma_z2 > 0.0))
        throw contract_error("baseline_rates_from_gains: sigma_z2 must be "
                             "positive");
    const int K = static_cast<int>(gains.signal.rows());
    const int num_users = static_cast<int>(gains.signal.cols());
    if (K < 1 || gains.interference.rows() != K ||
        gains.interference.cols() != num_users)
        throw contract_error("baseline_rates_from_gains: shape mismatch");
    BaselineRates out;
    out.per_user.assign(static_cast<std::size_t>(num_users), 0.0);
    for (int u = 0; u < num_users; ++u)
    {
        double acc = 0.0;
        for (int k = 0; k < K; ++k)
            acc += std::log2(1.0 + gains.signal(k, u) /
                                       (gains.interference(k, u) + sigma_z2));
        out.per_user[static_cast<std::size_t>(u)] = acc / K;
        out.sum_rate += acc / K;
    }
    return out;
}

BaselineRates fully_digital_bd_baseline(const std::vector<std::vector<CMat>> &h,
                                        double rho, double sigma_z2)
{
    return baseline_rates_from_gains(fully_digital_bd_gains(h, rho), sigma_z2);
}

double single_user_svd_baseline(const std::vector<CMat> &h_all_k,
                                double rho_subcarrier, double sigma_z2)
{
    if (h_all_k.empty())
        throw contract_error("single_user_svd_baseline: empty channel");
    if (!(rho_subcarrier > 0.0) || !(sigma_z2 > 0.0))
        throw contract_error("single_user_svd_baseline: rho and sigma_z2 "
                             "must be positive");
    double rate = 0.0;
    for (const CMat &hk : h_all_k)
    {
        Eigen::BDCSVD<CMat> svd(hk);
        const double smax = svd.singularValues()(0);
        rate += std::log2(1.0 + rho_subcarrier * smax * smax / sigma_z2);
    }
    return rate / static_cast<double>(h_all_k.size());
}

} // namespace hbf
