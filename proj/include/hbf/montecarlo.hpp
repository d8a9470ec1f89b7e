// SPDX-License-Identifier: Apache-2.0
//
// mmwave-hbf — link-level simulator for multiuser wideband mmWave hybrid
// beamforming with hierarchical codebooks and block-diagonalization precoding.
// Copyright (C) 2026 mmwave-hbf contributors
//
// Licensed under the Apache License, Version 2.0; see LICENSE for details.
// ------------------------------------------------------------------------

#ifndef HBF_MONTECARLO_HPP
#define HBF_MONTECARLO_HPP

#include "hbf/beamselect.hpp"
#include "hbf/config.hpp"
#include "hbf/metrics.hpp"

#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

namespace hbf
{

// Thrown when a run cannot produce the requested statistics (e.g. every
// realization infeasible for rate evaluation); maps to CLI exit code 4.
class infeasibility_error : public std::runtime_error
{
  public:
    explicit infeasibility_error(const std::string &msg)
        : std::runtime_error(msg)
    {
    }
};

// The OpenMP path distributes realizations over threads; the serial path is
// the reference implementation. Both produce bit-identical results: every
// realization owns derived RNG streams, and the reduction always runs in
// realization order.
enum class ExecutionMode
{
    serial,
    parallel,
};

// Stream tags for derive_seed. The channel stream depends only on the
// realization index, so different pilot counts or SNR grids reuse the same
// channel draws; the noise stream depends on (SNR index, realization).
inline constexpr std::uint64_t k_channel_stream = 0x4348414eULL;
inline constexpr std::uint64_t k_noise_stream = 0x4e4f4953ULL;

// Aggregates for one SNR grid point.
struct SnrPointResult
{
    double snr_db = 0.0;
    int realizations = 0;      // channel realizations (or file noise draws)
    long long user_draws = 0;  // realizations * num_users
    long long errors = 0;      // joint-pair selection errors over user draws
    double bser = 0.0;
    double loss_db = 0.0;      // mean misalignment loss over included draws
    long long loss_excluded = 0; // draws with zero algorithm objective
    double sum_rate_hybrid = 0.0;     // mean over rate-included realizations
    double sum_rate_digital_bd = 0.0; // same realizations, fully-digital BD
    int rate_included = 0;
    int excluded_count = 0;    // infeasible realizations (rates only)
};

struct MonteCarloResult
{
    std::vector<SnrPointResult> points;
    // One (snr_db, log) pair per grid point for realization 0 when the
    // config enables training_log.
    std::vector<std::pair<double, TrainingLog>> training_logs;
};

MonteCarloResult run_monte_carlo(const RunConfig &config,
                                 ExecutionMode mode = ExecutionMode::parallel);

// Noise-only Monte Carlo on an externally supplied channel tensor: the
// channel is fixed, `realizations` counts independent noise draws per SNR
// point. Tensor dimensions must match the config (format_error otherwise).
struct FileEvaluationResult
{
    std::vector<SnrPointResult> points;
    std::vector<std::vector<double>> per_user_rates; // [snr][user], hybrid
    std::vector<OracleSolution> oracle;              // per user, noiseless
};

FileEvaluationResult
evaluate_channel_tensor(const ChannelTensor &tensor, const RunConfig &config,
                        ExecutionMode mode = ExecutionMode::parallel);

} // namespace hbf

#endif
