// SPDX-License-Identifier: Apache-2.0
//
// mmwave-hbf — link-level simulator for multiuser wideband mmWave hybrid
// beamforming with hierarchical codebooks and block-diagonalization precoding.
// Copyright (C) 2026 mmwave-hbf contributors
//
// Licensed under the Apache License, Version 2.0; see LICENSE for details.
// ------------------------------------------------------------------------

#include "hbf/metrics.hpp"

#include <algorithm>
#include <cmath>

namespace hbf
{

ObjectiveTable oracle_table(const std::vector<CMat> &full_coeffs)
{
    if (full_coeffs.empty())
        throw contract_error("oracle_table: empty pilot set");
    const Eigen::Index m_ue = full_coeffs.front().rows();
    const Eigen::Index m_ap = full_coeffs.front().cols();
    ObjectiveTable table;
    table.obj = Eigen::MatrixXd::Zero(m_ue, m_ap);
    for (const CMat &c : full_coeffs)
    {
        if (c.rows() != m_ue || c.cols() != m_ap)
            throw contract_error("oracle_table: inconsistent projections");
        table.obj += c.cwiseAbs2();
    }
    // AP-major scan with a strict comparison: ties keep the lowest AP beam
    // index, then the lowest STA beam index.
    double best = -1.0;
    for (Eigen::Index j = 0; j < m_ap; ++j)
        for (Eigen::Index i = 0; i < m_ue; ++i)
            if (table.obj(i, j) > best)
            {
                best = table.obj(i, j);
                table.best.l_ap = static_cast<int>(j) + 1;
                table.best.l_ue = static_cast<int>(i) + 1;
                table.best.objective = best;
            }
    return table;
}

OracleSolution oracle_exhaustive(const std::vector<CMat> &full_coeffs)
{
    return oracle_table(full_coeffs).best;
}

OracleSolution oracle_exhaustive(const ChannelTensor &tensor, int user,
                                 const CodebookSet &codebooks)
{
    const PilotCoefficients pc =
        project_channel_reference(tensor, user, codebooks);
    return oracle_exhaustive(pc.full);
}

double bser(const std::vector<std::pair<int, int>> &selected,
            const std::vector<std::pair<int, int>> &oracle)
{
    if (selected.size() != oracle.size())
        throw contract_error("bser: selected/oracle pairing mismatch");
    if (selected.empty())
        throw contract_error("bser: no realizations");
    std::size_t errors = 0;
    for (std::size_t i = 0; i < selected.size(); ++i)
        if (selected[i] != oracle[i])
            ++errors;
    return static_cast<double>(errors) / static_cast<double>(selected.size());
}

LossReport misalignment_loss_db(const std::vector<double> &oracle_objective,
                                const std::vector<double> &algo_objective)
{
    if (oracle_objective.size() != algo_objective.size())
        throw contract_error("misalignment_loss_db: pairing mismatch");
    LossReport report;
    double sum = 0.0;
    for (std::size_t i = 0; i < oracle_objective.size(); ++i)
    {
        if (!(algo_objective[i] > 0.0))
        {
            ++report.excluded;
            continue;
        }
        sum += 10.0 * std::log10(oracle_objective[i] / algo_objective[i]);
        ++report.included;
    }
    report.mean_db = report.included > 0 ? sum / report.included : 0.0;
    return report;
}

RateReport achievable_sum_rate(const std::vector<CMat> &true_rows,
                               const std::vector<CMat> &p_di, double rho_user,
                               double sigma_z2)
{
    const int num_users = static_cast<int>(true_rows.size());
    if (num_users < 1)
        throw contract_error("achievable_sum_rate: need users");
    if (!(rho_user > 0.0) || !(sigma_z2 > 0.0))
        throw contract_error("achievable_sum_rate: rho_user and sigma_z2 "
                             "must be positive");
    const int K = static_cast<int>(true_rows.front().rows());
    if (static_cast<int>(p_di.size()) != K)
        throw contract_error("achievable_sum_rate: precoder subcarrier count "
                             "mismatch");
    RateReport report;
    report.per_user.assign(static_cast<std::size_t>(num_users), 0.0);
    for (int k = 0; k < K; ++k)
    {
        const CMat &pd = p_di[static_cast<std::size_t>(k)];
        if (pd.cols() != num_users)
            throw contract_error("achievable_sum_rate: precoder user count "
                                 "mismatch");
        for (int u = 0; u < num_users; ++u)
        {
            const auto row = true_rows[static_cast<std::size_t>(u)].row(k);
            const double sig = rho_user * std::norm((row * pd.col(u)).value());
            double intf = 0.0;
            for (int up = 0; up < num_users; ++up)
                if (up != u)
                    intf += rho_user * std::norm((row * pd.col(up)).value());
            report.per_user[static_cast<std::size_t>(u)] +=
                std::log2(1.0 + sig / (intf + sigma_z2));
        }
    }
    for (double &r : report.per_user)
    {
        r /= K;
        report.sum_rate += r;
    }
    return report;
}

GapReport snr_sweep_gap_db(const std::vector<double> &snr_db,
                           const std::vector<double> &hybrid,
                           const std::vector<double> &baseline)
{
    const int n = static_cast<int>(snr_db.size());
    if (n < 2 || hybrid.size() != snr_db.size() ||
        baseline.size() != snr_db.size())
        throw contract_error("snr_sweep_gap_db: need matched grids with at "
                             "least two points");
    GapReport report;
    double sum = 0.0;
    for (int i = n / 2; i < n; ++i)
    {
        ++report.points_total;
        const double target = baseline[static_cast<std::size_t>(i)];
        double x;
        if (target <= hybrid.back())
        {
            // First hybrid point at or above the target rate.
            const auto it =
                std::lower_bound(hybrid.begin(), hybrid.end(), target);
            const int j = static_cast<int>(it - hybrid.begin());
            if (j <= 0 || j >= n)
                continue; // below the hybrid curve's range
            const double r0 = hybrid[static_cast<std::size_t>(j - 1)];
            const double r1 = hybrid[static_cast<std::size_t>(j)];
            const double s0 = snr_db[static_cast<std::size_t>(j - 1)];
            const double s1 = snr_db[static_cast<std::size_t>(j)];
            x = s0 + (target - r0) / (r1 - r0) * (s1 - s0);
        }
        else
        {
            // Extrapolate the last hybrid segment.
            const double slope =
                (hybrid[static_cast<std::size_t>(n - 1)] -
                 hybrid[static_cast<std::size_t>(n - 2)]) /
                (snr_db[static_cast<std::size_t>(n - 1)] -
                 snr_db[static_cast<std::size_t>(n - 2)]);
            x = snr_db.back() + (target - hybrid.back()) / slope;
        }
        sum += x - snr_db[static_cast<std::size_t>(i)];
        ++report.points_used;
    }
    report.gap_db = report.points_used > 0 ? sum / report.points_used : 0.0;
    return report;
}

} // namespace hbf
