// SPDX-License-Identifier: Apache-2.0
//
// mmwave-hbf — link-level simulator for multiuser wideband mmWave hybrid
// beamforming with hierarchical codebooks and block-diagonalization precoding.
// Copyright (C) 2026 mmwave-hbf contributors
//
// Licensed under the Apache License, Version 2.0; see LICENSE for details.
// ------------------------------------------------------------------------

#include "hbf/montecarlo.hpp"

#include "hbf/digital.hpp"
#include "hbf/signal.hpp"

#include <cmath>
#include <utility>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace hbf
{

namespace
{

// Per-realization, per-SNR outcome; aggregated in realization order.
struct PerSnrOutcome
{
    int errors = 0;
    double loss_sum_db = 0.0;
    int loss_excluded = 0;
    int rate_state = 0; // 0 = rates off, 1 = included, 2 = excluded
    double rate_hybrid = 0.0;
    double rate_bd = 0.0;
    std::vector<double> user_rates; // hybrid per user (file evaluation only)
};

struct RealizationOutcome
{
    std::vector<PerSnrOutcome> snr;
    std::vector<TrainingLog> logs; // one per SNR point when captured
};

template <typename F>
void for_each_realization(int n, ExecutionMode mode, int workers, F &&fn)
{
#ifdef _OPENMP
    if (mode == ExecutionMode::parallel)
    {
        const int nt = workers > 0 ? workers : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(nt)
        for (int r = 0; r < n; ++r)
            fn(r);
        return;
    }
#else
    (void)mode;
    (void)workers;
#endif
    for (int r = 0; r < n; ++r)
        fn(r);
}

// Everything shared (read-only) across realizations.
struct EngineContext
{
    const RunConfig *config = nullptr;
    ArrayGeometry ap_geom;
    ArrayGeometry ue_geom;
    FrequencyGrid grid;
    ElementPattern pattern;
    ChannelConfig channel_cfg;
    CodebookSet codebooks;
    std::vector<int> pilots;
    std::vector<int> pilot_positions; // pilot index -> factor array position
    std::vector<double> snrs;
    CouplingCache cache; // pilot-only, or full band when rates are on
};

EngineContext build_context(const RunConfig &config)
{
    EngineContext ctx;
    ctx.config = &config;
    ctx.ap_geom = config.ap_geometry();
    ctx.ue_geom = config.ue_geometry();
    ctx.grid = config.frequency_grid();
    ctx.channel_cfg = config.channel_config();
    const bool with_sta = config.scenario != ScenarioMode::single_antenna_sta;
    ctx.codebooks = build_codebook_set(config.m_ap, config.m_ue, config.m_sub,
                                       config.n_rf, with_sta);
    ctx.pilots = pilot_indices(config.num_subcarriers, config.num_pilots);
    ctx.snrs = config.snr_grid();

    std::vector<double> freqs;
    if (config.compute_rates)
    {
        // Rates need the full band; factors are built for every subcarrier
        // and the pilot set addresses into them by position k-1.
        freqs.reserve(static_cast<std::size_t>(config.num_subcarriers));
        for (int k = 1; k <= config.num_subcarriers; ++k)
            freqs.push_back(subcarrier_frequency(ctx.grid, k));
        for (int k : ctx.pilots)
            ctx.pilot_positions.push_back(k - 1);
    }
    else
    {
        freqs.reserve(ctx.pilots.size());
        for (std::size_t i = 0; i < ctx.pilots.size(); ++i)
        {
            freqs.push_back(subcarrier_frequency(ctx.grid, ctx.pilots[i]));
            ctx.pilot_positions.push_back(static_cast<int>(i));
        }
    }
    ctx.cache = build_coupling_cache(ctx.ap_geom, ctx.ue_geom,
                                     CouplingModel{config.coupling_c}, freqs);
    return ctx;
}

// Selection bookkeeping shared by the statistical and file-based runs.
void score_selection(const BeamSelectionResult &sel,
                     const std::vector<ObjectiveTable> &tables,
                     PerSnrOutcome &o)
{
    for (std::size_t u = 0; u < sel.users.size(); ++u)
    {
        const UserSelection &us = sel.users[u];
        const ObjectiveTable &table = tables[u];
        if (us.stage1.l_star != table.best.l_ap ||
            us.l_ue_star != table.best.l_ue)
            ++o.errors;
        const double algo = table.obj(us.l_ue_star - 1, us.stage1.l_star - 1);
        if (algo > 0.0)
            o.loss_sum_db += 10.0 * std::log10(table.best.objective / algo);
        else
            ++o.loss_excluded;
    }
}

// Hybrid rate evaluation for one realization at one SNR; true_rows are the
// genie equivalent rows (all K). Returns false when the digital stage is
// infeasible.
bool hybrid_rates(const RunConfig &cfg, const std::vector<int> &pilots,
                  const std::vector<CMat> &true_rows, const CMat &p_an,
                  const LinkBudget &budget, Rng &rng, PerSnrOutcome &o)
{
    const int num_users = static_cast<int>(true_rows.size());
    std::vector<CMat> heq;
    if (cfg.genie_csi)
        heq = true_rows;
    else
        heq = estimate_equivalent_channels(true_rows, pilots, budget,
                                           cfg.training_symbols,
                                           cfg.csi_interpolation, rng)
                  .rows;
    const DigitalPrecoder pdi = bd_precoder(heq, p_an, budget.rho);
    if (!pdi.feasible)
        return false;
    const RateReport rr = achievable_sum_rate(
        true_rows, pdi.p_di, budget.rho / num_users, budget.sigma_z2);
    o.rate_hybrid = rr.sum_rate;
    o.user_rates = rr.per_user;
    return true;
}

RealizationOutcome simulate_realization(const EngineContext &ctx, int r,
                                        bool capture_log)
{
    const RunConfig &cfg = *ctx.config;
    const int num_users = cfg.num_users;
    RealizationOutcome out;
    out.snr.resize(ctx.snrs.size());

    Rng ch(derive_seed(cfg.seed, k_channel_stream,
                       static_cast<std::uint64_t>(r)));
    std::vector<PathSet> paths;
    std::vector<ChannelFactors> factors;
    std::vector<PilotCoefficients> pcs;
    std::vector<ObjectiveTable> tables;
    paths.reserve(static_cast<std::size_t>(num_users));
    factors.reserve(static_cast<std::size_t>(num_users));
    pcs.reserve(static_cast<std::size_t>(num_users));
    tables.reserve(static_cast<std::size_t>(num_users));
    for (int u = 0; u < num_users; ++u)
        paths.push_back(draw_paths(ch, ctx.channel_cfg));
    for (int u = 0; u < num_users; ++u)
    {
        factors.push_back(channel_factors(paths[static_cast<std::size_t>(u)],
                                          ctx.ap_geom, ctx.ue_geom,
                                          ctx.pattern, ctx.cache));
        pcs.push_back(project_channel(factors.back(), ctx.codebooks,
                                      ctx.pilots, ctx.pilot_positions));
        tables.push_back(oracle_table(pcs.back().full));
    }

    BaselineGains gains;
    if (cfg.compute_rates)
    {
        std::vector<std::vector<CMat>> h(static_cast<std::size_t>(num_users));
        for (int u = 0; u < num_users; ++u)
        {
            auto &hu = h[static_cast<std::size_t>(u)];
            hu.reserve(static_cast<std::size_t>(cfg.num_subcarriers));
            for (int k = 0; k < cfg.num_subcarriers; ++k)
                hu.push_back(
                    channel_from_factors(factors[static_cast<std::size_t>(u)], k));
        }
        gains = fully_digital_bd_gains(h, 1.0);
    }

    for (std::size_t si = 0; si < ctx.snrs.size(); ++si)
    {
        Rng nz(derive_seed(cfg.seed, k_noise_stream, si,
                           static_cast<std::uint64_t>(r)));
        LinkBudget budget;
        budget.rho = 1.0;
        budget.sigma_z2 = db_to_linear(-ctx.snrs[si]);
        budget.power_denom = static_cast<double>(cfg.num_pilots);

        TrainingLog log;
        const BeamSelectionResult sel = full_beam_selection(
            pcs, ctx.codebooks, cfg.scenario, cfg.training_symbols, budget, nz,
            capture_log ? &log : nullptr);
        PerSnrOutcome &o = out.snr[si];
        score_selection(sel, tables, o);

        if (cfg.compute_rates)
        {
            std::vector<int> l_stars;
            l_stars.reserve(sel.users.size());
            for (const UserSelection &us : sel.users)
                l_stars.push_back(us.stage1.l_star);
            const AnalogAssembly assembly =
                build_analog_matrix(l_stars, ctx.codebooks.b_ap, cfg.n_rf);
            bool ok = assembly.feasible;
            if (ok)
            {
                std::vector<CMat> true_rows;
                true_rows.reserve(sel.users.size());
                for (std::size_t u = 0; u < sel.users.size(); ++u)
                    true_rows.push_back(equivalent_rows(
                        factors[u], sel.users[u].g_star, assembly.p_an));
                ok = hybrid_rates(cfg, ctx.pilots, true_rows, assembly.p_an,
                                  budget, nz, o);
            }
            if (ok)
            {
                o.rate_bd =
                    baseline_rates_from_gains(gains, budget.sigma_z2).sum_rate;
                o.rate_state = 1;
            }
            else
            {
                o.rate_state = 2;
            }
        }
        if (capture_log)
            out.logs.push_back(std::move(log));
    }
    return out;
}

std::vector<SnrPointResult>
reduce_outcomes(const std::vector<double> &snrs,
                const std::vector<RealizationOutcome> &outcomes, int num_users)
{
    std::vector<SnrPointResult> points(snrs.size());
    const int n = static_cast<int>(outcomes.size());
    for (std::size_t si = 0; si < snrs.size(); ++si)
    {
        SnrPointResult &p = points[si];
        p.snr_db = snrs[si];
        p.realizations = n;
        p.user_draws = static_cast<long long>(n) * num_users;
        double loss_sum = 0.0;
        double rate_hybrid_sum = 0.0;
        double rate_bd_sum = 0.0;
        // Fixed realization order keeps the reduction bitwise deterministic
        // for any worker count.
        for (int r = 0; r < n; ++r)
        {
            const PerSnrOutcome &o = outcomes[static_cast<std::size_t>(r)].snr[si];
            p.errors += o.errors;
            loss_sum += o.loss_sum_db;
            p.loss_excluded += o.loss_excluded;
            if (o.rate_state == 1)
            {
                rate_hybrid_sum += o.rate_hybrid;
                rate_bd_sum += o.rate_bd;
                ++p.rate_included;
            }
            else if (o.rate_state == 2)
            {
                ++p.excluded_count;
            }
        }
        p.bser = static_cast<double>(p.errors) /
                 static_cast<double>(p.user_draws);
        const long long loss_included = p.user_draws - p.loss_excluded;
        p.loss_db = loss_included > 0
                        ? loss_sum / static_cast<double>(loss_included)
                        : 0.0;
        if (p.rate_included > 0)
        {
            p.sum_rate_hybrid = rate_hybrid_sum / p.rate_included;
            p.sum_rate_digital_bd = rate_bd_sum / p.rate_included;
        }
    }
    return points;
}

void throw_if_all_rates_excluded(const RunConfig &cfg,
                                 const std::vector<SnrPointResult> &points)
{
    if (!cfg.compute_rates)
        return;
    for (const SnrPointResult &p : points)
        if (p.rate_included > 0)
            return;
    throw infeasibility_error(
        "rate evaluation infeasible: every realization was excluded "
        "(duplicate AP beams or rank-deficient digital stage)");
}

} // namespace

MonteCarloResult run_monte_carlo(const RunConfig &config, ExecutionMode mode)
{
    config.validate_or_throw();
    const EngineContext ctx = build_context(config);
    const int n = config.realizations;
    std::vector<RealizationOutcome> outcomes(static_cast<std::size_t>(n));
    const bool capture = config.training_log;
    for_each_realization(n, mode, config.workers, [&](int r) {
        outcomes[static_cast<std::size_t>(r)] =
            simulate_realization(ctx, r, capture && r == 0);
    });
    MonteCarloResult result;
    result.points = reduce_outcomes(ctx.snrs, outcomes, config.num_users);
    throw_if_all_rates_excluded(config, result.points);
    if (capture)
        for (std::size_t si = 0; si < ctx.snrs.size(); ++si)
            result.training_logs.emplace_back(ctx.snrs[si],
                                              outcomes[0].logs[si]);
    return result;
}

FileEvaluationResult evaluate_channel_tensor(const ChannelTensor &tensor,
                                             const RunConfig &config,
                                             ExecutionMode mode)
{
    config.validate_or_throw();
    if (tensor.num_users != config.num_users || tensor.m_ue != config.m_ue ||
        tensor.m_ap != config.m_ap ||
        tensor.num_subcarriers() != config.num_subcarriers)
        throw format_error(
            "channel tensor dimensions (U=" + std::to_string(tensor.num_users) +
            ", K=" + std::to_string(tensor.num_subcarriers()) +
            ", M_ue=" + std::to_string(tensor.m_ue) +
            ", M_ap=" + std::to_string(tensor.m_ap) +
            ") do not match the configuration (U=" +
            std::to_string(config.num_users) +
            ", K=" + std::to_string(config.num_subcarriers) +
            ", M_ue=" + std::to_string(config.m_ue) +
            ", M_ap=" + std::to_string(config.m_ap) + ")");

    const bool with_sta = config.scenario != ScenarioMode::single_antenna_sta;
    const CodebookSet codebooks = build_codebook_set(
        config.m_ap, config.m_ue, config.m_sub, config.n_rf, with_sta);
    const std::vector<int> pilots =
        pilot_indices(config.num_subcarriers, config.num_pilots);
    const std::vector<double> snrs = config.snr_grid();
    const int num_users = config.num_users;

    // Beam-domain projections on the pilot set, oracle per user.
    std::vector<PilotCoefficients> pcs(static_cast<std::size_t>(num_users));
    std::vector<ObjectiveTable> tables;
    tables.reserve(static_cast<std::size_t>(num_users));
    for (int u = 0; u < num_users; ++u)
    {
        const PilotCoefficients all =
            project_channel_reference(tensor, u, codebooks);
        PilotCoefficients &pc = pcs[static_cast<std::size_t>(u)];
        pc.k_set = pilots;
        for (int k : pilots)
        {
            pc.full.push_back(all.full[static_cast<std::size_t>(k - 1)]);
            if (!all.sector.empty())
                pc.sector.push_back(all.sector[static_cast<std::size_t>(k - 1)]);
        }
        tables.push_back(oracle_table(pc.full));
    }

    BaselineGains gains;
    {
        std::vector<std::vector<CMat>> h(static_cast<std::size_t>(num_users));
        for (int u = 0; u < num_users; ++u)
        {
            auto &hu = h[static_cast<std::size_t>(u)];
            hu.reserve(static_cast<std::size_t>(tensor.num_subcarriers()));
            for (int k = 0; k < tensor.num_subcarriers(); ++k)
                hu.push_back(tensor.at(u, k));
        }
        gains = fully_digital_bd_gains(h, 1.0);
    }

    const int n = config.realizations;
    std::vector<RealizationOutcome> outcomes(static_cast<std::size_t>(n));
    for_each_realization(n, mode, config.workers, [&](int r) {
        RealizationOutcome out;
        out.snr.resize(snrs.size());
        for (std::size_t si = 0; si < snrs.size(); ++si)
        {
            Rng nz(derive_seed(config.seed, k_noise_stream, si,
                               static_cast<std::uint64_t>(r)));
            LinkBudget budget;
            budget.rho = 1.0;
            budget.sigma_z2 = db_to_linear(-snrs[si]);
            budget.power_denom = static_cast<double>(config.num_pilots);
            const BeamSelectionResult sel =
                full_beam_selection(pcs, codebooks, config.scenario,
                                    config.training_symbols, budget, nz);
            PerSnrOutcome &o = out.snr[si];
            score_selection(sel, tables, o);

            std::vector<int> l_stars;
            l_stars.reserve(sel.users.size());
            for (const UserSelection &us : sel.users)
                l_stars.push_back(us.stage1.l_star);
            const AnalogAssembly assembly =
                build_analog_matrix(l_stars, codebooks.b_ap, config.n_rf);
            bool ok = assembly.feasible;
            if (ok)
            {
                std::vector<CMat> true_rows;
                true_rows.reserve(sel.users.size());
                for (std::size_t u = 0; u < sel.users.size(); ++u)
                {
                    CMat rows(tensor.num_subcarriers(), config.n_rf);
                    const auto g_h = sel.users[u].g_star.adjoint();
                    for (int k = 0; k < tensor.num_subcarriers(); ++k)
                        rows.row(k) =
                            (g_h * tensor.at(static_cast<int>(u), k)) *
                            assembly.p_an;
                    true_rows.push_back(std::move(rows));
                }
                ok = hybrid_rates(config, pilots, true_rows, assembly.p_an,
                                  budget, nz, o);
            }
            if (ok)
            {
                o.rate_bd =
                    baseline_rates_from_gains(gains, budget.sigma_z2).sum_rate;
                o.rate_state = 1;
            }
            else
            {
                o.rate_state = 2;
            }
        }
        outcomes[static_cast<std::size_t>(r)] = std::move(out);
    });

    FileEvaluationResult result;
    result.points = reduce_outcomes(snrs, outcomes, num_users);
    for (const ObjectiveTable &t : tables)
        result.oracle.push_back(t.best);
    // Per-user hybrid rates, averaged over rate-included draws in order.
    result.per_user_rates.assign(snrs.size(),
                                 std::vector<double>(
                                     static_cast<std::size_t>(num_users), 0.0));
    for (std::size_t si = 0; si < snrs.size(); ++si)
    {
        int included = 0;
        std::vector<double> &acc = result.per_user_rates[si];
        for (int r = 0; r < n; ++r)
        {
            const PerSnrOutcome &o = outcomes[static_cast<std::size_t>(r)].snr[si];
            if (o.rate_state != 1)
                continue;
            ++included;
            for (int u = 0; u < num_users; ++u)
                acc[static_cast<std::size_t>(u)] +=
                    o.user_rates[static_cast<std::size_t>(u)];
        }
        if (included > 0)
            for (double &v : acc)
                v /= included;
    }
    // The file path always evaluates rates.
    for (const SnrPointResult &p : result.points)
        if (p.rate_included > 0)
            return result;
    throw infeasibility_error(
        "file evaluation infeasible: every noise draw was excluded "
        "(duplicate AP beams or rank-deficient digital stage)");
}

} // namespace hbf
