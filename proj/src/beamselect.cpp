// SPDX-License-Identifier: Apache-2.0
//
// mmwave-hbf — link-level simulator for multiuser wideband mmWave hybrid
// beamforming with hierarchical codebooks and block-diagonalization precoding.
// Copyright (C) 2026 mmwave-hbf contributors
//
// Licensed under the Apache License, Version 2.0; see LICENSE for details.
// ------------------------------------------------------------------------

#include "hbf/beamselect.hpp"

namespace hbf
{

ScenarioMode scenario_from_string(const std::string &name)
{
    if (name == "full")
        return ScenarioMode::full;
    if (name == "single_user_exhaustive_sta")
        return ScenarioMode::single_user_exhaustive_sta;
    if (name == "single_antenna_sta")
        return ScenarioMode::single_antenna_sta;
    throw contract_error("unknown scenario mode '" + name + "'");
}

std::string to_string(ScenarioMode mode)
{
    switch (mode)
    {
    case ScenarioMode::full:
        return "full";
    case ScenarioMode::single_user_exhaustive_sta:
        return "single_user_exhaustive_sta";
    case ScenarioMode::single_antenna_sta:
        return "single_antenna_sta";
    }
    return "?";
}

StageOneResult stage1_uplink(const std::vector<CMat> &sta_coeffs,
                             const OrthogonalSet &b_ap, int n_rf, int T,
                             const LinkBudget &budget, Rng &rng,
                             TrainingLog *log, int user)
{
    budget.validate();
    if (sta_coeffs.empty())
        throw contract_error("stage1_uplink: empty pilot set");
    const int m_ap = b_ap.M;
    if (m_ap % n_rf != 0)
        throw contract_error("stage1_uplink: N_rf must divide M_ap");
    const int num_sectors = m_ap / n_rf;
    const int num_sta = static_cast<int>(sta_coeffs.front().rows());
    const int num_pilots = static_cast<int>(sta_coeffs.size());
    // Per-chain amplitude: the sector matrix columns carry 1/sqrt(N_rf);
    // estimate noise is the ML-projected training noise CN(0, (s^2/N_rf)/T).
    const double amp = budget.amplitude() / std::sqrt(static_cast<double>(n_rf));
    const double est_var = (budget.sigma_z2 / n_rf) / T;

    StageOneResult best;
    double best_obj = -1.0;
    for (int m = 1; m <= num_sectors; ++m)
        for (int mp = 1; mp <= num_sta; ++mp)
        {
            double tx_total = 0.0;
            // One training transmission: all chains estimate simultaneously.
            for (int n = 1; n <= n_rf; ++n)
            {
                const int l = ap_sector_index(m, n, n_rf);
                double obj = 0.0;
                for (int ki = 0; ki < num_pilots; ++ki)
                {
                    const cplx v_hat =
                        amp * sta_coeffs[static_cast<std::size_t>(ki)](mp - 1, l - 1) +
                        rng.cnormal(est_var);
                    obj += std::norm(v_hat);
                }
                tx_total += obj;
                if (obj > best_obj)
                {
                    best_obj = obj;
                    best.m_star = m;
                    best.n_star = n;
                    best.m_prime_star_stage1 = mp;
                    best.l_star = l;
                }
            }
            if (log)
                log->push_back({user, 1, m, mp, tx_total});
        }
    best.p_star = b_ap.B.col(best.l_star - 1);
    const double scale = 1.0 / std::sqrt(static_cast<double>(n_rf));
    best.p_star_matrix.resize(m_ap, n_rf);
    for (int c = 0; c < n_rf; ++c)
        best.p_star_matrix.col(c) = scale * best.p_star;
    best.transmissions = num_sectors * num_sta;
    return best;
}

namespace
{

// Shared downlink sweep: per candidate row index (0-based) of the coefficient
// block, accumulate sum_k |amp * coeff + CN(0, sigma^2/T)|^2 and return the
// first argmax. Rows are swept in the order given (= codebook index order),
// so ties resolve to the lowest index.
int downlink_sweep(const std::vector<CMat> &coeffs,
                   const std::vector<int> &rows, int l_star, int T,
                   const LinkBudget &budget, Rng &rng, TrainingLog *log,
                   int user, int stage)
{
    budget.validate();
    if (coeffs.empty())
        throw contract_error("downlink sweep: empty pilot set");
    const double amp = budget.amplitude();
    const double est_var = budget.sigma_z2 / T;
    int best_pos = 0;
    double best_obj = -1.0;
    for (std::size_t pos = 0; pos < rows.size(); ++pos)
    {
        double obj = 0.0;
        for (std::size_t ki = 0; ki < coeffs.size(); ++ki)
        {
            const cplx w_hat = amp * coeffs[ki](rows[pos], l_star - 1) +
                               rng.cnormal(est_var);
            obj += std::norm(w_hat);
        }
        if (log)
            log->push_back({user, stage, static_cast<int>(pos) + 1, 0, obj});
        if (obj > best_obj)
        {
            best_obj = obj;
            best_pos = static_cast<int>(pos);
        }
    }
    return best_pos;
}

} // namespace

int stage2_downlink(const std::vector<CMat> &sector_coeffs, int l_star, int T,
                    const LinkBudget &budget, Rng &rng, TrainingLog *log,
                    int user)
{
    const int m_sub = static_cast<int>(sector_coeffs.front().rows());
    std::vector<int> rows(static_cast<std::size_t>(m_sub));
    for (int i = 0; i < m_sub; ++i)
        rows[static_cast<std::size_t>(i)] = i;
    return downlink_sweep(sector_coeffs, rows, l_star, T, budget, rng, log,
                          user, 2) + 1;
}

int stage3_downlink(const std::vector<CMat> &full_coeffs,
                    const std::vector<int> &candidate_beams, int l_star, int T,
                    const LinkBudget &budget, Rng &rng, TrainingLog *log,
                    int user)
{
    std::vector<int> rows;
    rows.reserve(candidate_beams.size());
    for (int beam : candidate_beams)
        rows.push_back(beam - 1);
    return downlink_sweep(full_coeffs, rows, l_star, T, budget, rng, log, user,
                          3);
}

int training_transmissions(ScenarioMode mode, int m_ap, int m_ue, int m_sub,
                           int n_rf)
{
    switch (mode)
    {
    case ScenarioMode::full:
        return (m_ap / n_rf) * m_sub + m_sub + m_ue / m_sub + 1;
    case ScenarioMode::single_user_exhaustive_sta:
        return (m_ap / n_rf) * m_sub + m_ue;
    case ScenarioMode::single_antenna_sta:
        return m_ap / n_rf;
    }
    return 0;
}

BeamSelectionResult full_beam_selection(const std::vector<PilotCoefficients> &coeffs,
                                        const CodebookSet &codebooks,
                                        ScenarioMode mode, int T,
                                        const LinkBudget &budget, Rng &rng,
                                        TrainingLog *log)
{
    BeamSelectionResult result;
    result.users.reserve(coeffs.size());
    const int m_ue = codebooks.b_ue.M;
    for (std::size_t u = 0; u < coeffs.size(); ++u)
    {
        const PilotCoefficients &pc = coeffs[u];
        UserSelection sel;
        const int user = static_cast<int>(u);
        switch (mode)
        {
        case ScenarioMode::full:
        {
            sel.stage1 = stage1_uplink(pc.sector, codebooks.b_ap,
                                       codebooks.ap_sector.n_rf, T, budget, rng,
                                       log, user);
            sel.m_prime_star = stage2_downlink(pc.sector, sel.stage1.l_star, T,
                                               budget, rng, log, user);
            const std::vector<int> &candidates =
                codebooks.sta_narrow.indices[static_cast<std::size_t>(
                    sel.m_prime_star - 1)];
            const int pos = stage3_downlink(pc.full, candidates,
                                            sel.stage1.l_star, T, budget, rng,
                                            log, user);
            sel.n_prime_star = pos + 1;
            sel.l_ue_star = candidates[static_cast<std::size_t>(pos)];
            sel.g_star = codebooks.b_ue.B.col(sel.l_ue_star - 1);
            sel.transmissions = sel.stage1.transmissions +
                                codebooks.sta_sector.m_sub +
                                codebooks.sta_narrow.beams_per_sector;
            break;
        }
        case ScenarioMode::single_user_exhaustive_sta:
        {
            sel.stage1 = stage1_uplink(pc.sector, codebooks.b_ap,
                                       codebooks.ap_sector.n_rf, T, budget, rng,
                                       log, user);
            std::vector<int> all_beams(static_cast<std::size_t>(m_ue));
            for (int i = 0; i < m_ue; ++i)
                all_beams[static_cast<std::size_t>(i)] = i + 1;
            const int pos = stage3_downlink(pc.full, all_beams,
                                            sel.stage1.l_star, T, budget, rng,
                                            log, user);
            sel.l_ue_star = pos + 1;
            sel.g_star = codebooks.b_ue.B.col(sel.l_ue_star - 1);
            sel.transmissions = sel.stage1.transmissions + m_ue;
            break;
        }
        case ScenarioMode::single_antenna_sta:
        {
            // The STA has one antenna: the stage-1 sweep degenerates to the
            // AP sectors alone and the "beam-domain" rows are the 1 x M_ap
            // projections with g = [1].
            sel.stage1 = stage1_uplink(pc.full, codebooks.b_ap,
                                       codebooks.ap_sector.n_rf, T, budget, rng,
                                       log, user);
            sel.l_ue_star = 1;
            sel.g_star = CVec::Ones(1);
            sel.transmissions = sel.stage1.transmissions;
            break;
        }
        }
        // Noiseless objective of the selected pair over the pilot set (used
        // by BSER/misalignment metrics).
        double obj = 0.0;
        for (const CMat &c : pc.full)
            obj += std::norm(c(sel.l_ue_star - 1, sel.stage1.l_star - 1));
        sel.noiseless_objective = obj;
        result.training_count += sel.transmissions;
        result.users.push_back(std::move(sel));
    }
    return result;
}

AnalogAssembly build_analog_matrix(const std::vector<int> &l_stars,
                                   const OrthogonalSet &b_ap, int n_rf)
{
    const int num_users = static_cast<int>(l_stars.size());
    AnalogAssembly out;
    if (num_users < 1)
        throw contract_error("build_analog_matrix: need at least one user");
    if (num_users > n_rf)
    {
        out.diagnostic = "more users (" + std::to_string(num_users) +
                         ") than RF chains (" + std::to_string(n_rf) + ")";
        return out;
    }
    for (int a = 0; a < num_users; ++a)
        for (int b = a + 1; b < num_users; ++b)
            if (l_stars[static_cast<std::size_t>(a)] ==
                l_stars[static_cast<std::size_t>(b)])
            {
                out.diagnostic = "users " + std::to_string(a) + " and " +
                                 std::to_string(b) + " share AP beam " +
                                 std::to_string(l_stars[static_cast<std::size_t>(a)]);
                return out;
            }
    out.feasible = true;
    out.p_an.resize(b_ap.M, n_rf);
    out.column_user.resize(static_cast<std::size_t>(n_rf));
    const double scale = 1.0 / std::sqrt(static_cast<double>(n_rf));
    for (int c = 0; c < n_rf; ++c)
    {
        // Block fill: column c serves user floor(c U / N_rf), so each user's
        // beam appears on a contiguous group of chains.
        const int u = (c * num_users) / n_rf;
        out.column_user[static_cast<std::size_t>(c)] = u;
        out.p_an.col(c) =
            scale * b_ap.B.col(l_stars[static_cast<std::size_t>(u)] - 1);
    }
    return out;
}

} // namespace hbf
