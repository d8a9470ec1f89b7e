// SPDX-License-Identifier: Apache-2.0
//
// mmwave-hbf — link-level simulator for multiuser wideband mmWave hybrid
// beamforming with hierarchical codebooks and block-diagonalization precoding.
// Copyright (C) 2026 mmwave-hbf contributors
//
// Licensed under the Apache License, Version 2.0; see LICENSE for details.
// ------------------------------------------------------------------------

#ifndef HBF_BEAMSELECT_HPP
#define HBF_BEAMSELECT_HPP

#include "hbf/channel.hpp"
#include "hbf/codebook.hpp"
#include "hbf/signal.hpp"

#include <string>
#include <vector>

namespace hbf
{

// Beam-training variants:
//   full                      3-stage procedure with the subarray STA
//   single_user_exhaustive_sta stage 1 unchanged; stages 2-3 replaced by a
//                             downlink exhaustive sweep over B(M_ue)
//   single_antenna_sta        one-antenna STA; stages 2-3 omitted
enum class ScenarioMode
{
    full,
    single_user_exhaustive_sta,
    single_antenna_sta,
};

ScenarioMode scenario_from_string(const std::string &name);
std::string to_string(ScenarioMode mode);

// One record per training transmission (debug/teaching log).
struct TrainingLogRecord
{
    int user = 0;      // 0-based
    int stage = 0;     // 1..3 (3 = narrow/exhaustive downlink sweep)
    int index_a = 0;   // stage 1: AP sector m; stages 2-3: swept STA index
    int index_b = 0;   // stage 1: STA sector m'; otherwise 0
    double objective = 0.0; // total estimated power received in the transmission
};

using TrainingLog = std::vector<TrainingLogRecord>;

struct StageOneResult
{
    int m_star = 0;               // AP sector (1-based)
    int n_star = 0;               // RF chain within the sector (1-based)
    int m_prime_star_stage1 = 0;  // jointly found STA index (diagnostic only)
    int l_star = 0;               // l_{n*}(m*): selected narrow AP beam
    CVec p_star;                  // b_{l*}(M_ap)
    CMat p_star_matrix;           // P^(m*,n*): p_star/sqrt(N_rf) on all chains
    int transmissions = 0;
};

// Stage 1 (uplink joint sector sweep). sta_coeffs[ki] holds the beam-domain
// rows for every STA beam the sweep transmits with (the sector codebook in
// full mode, the single unity "beam" in single-antenna mode). The per-chain
// estimates are v_hat = amp/sqrt(N_rf) * coeff + CN(0, (sigma^2/N_rf)/T):
// the exact ML sufficient statistic of a T-symbol unit-modulus training.
StageOneResult stage1_uplink(const std::vector<CMat> &sta_coeffs,
                             const OrthogonalSet &b_ap, int n_rf, int T,
                             const LinkBudget &budget, Rng &rng,
                             TrainingLog *log = nullptr, int user = 0);

// Stage 2 (downlink STA sector sweep with P_an = P^(m*,n*)); returns m'.
int stage2_downlink(const std::vector<CMat> &sector_coeffs, int l_star, int T,
                    const LinkBudget &budget, Rng &rng,
                    TrainingLog *log = nullptr, int user = 0);

// Stage 3 (downlink narrow sweep over the beams overlapping sector m');
// candidate_beams lists 1-based B(M_ue) indices; returns the position of the
// winner within candidate_beams (0-based) — the beam index is
// candidate_beams[result].
int stage3_downlink(const std::vector<CMat> &full_coeffs,
                    const std::vector<int> &candidate_beams, int l_star, int T,
                    const LinkBudget &budget, Rng &rng,
                    TrainingLog *log = nullptr, int user = 0);

struct UserSelection
{
    StageOneResult stage1;
    int m_prime_star = 0; // stage-2 sector (0 when the stage is skipped)
    int n_prime_star = 0; // stage-3 slot within the sector (0 when skipped)
    int l_ue_star = 0;    // selected B(M_ue) beam (1-based; 1 for single antenna)
    CVec g_star;          // selected STA beamformer
    double noiseless_objective = 0.0; // sum_k |g*^H H[k] p*|^2 on the pilot set
    int transmissions = 0;
};

struct BeamSelectionResult
{
    std::vector<UserSelection> users;
    int training_count = 0; // total over users
};

// Closed-form training cost per user for a mode/configuration.
int training_transmissions(ScenarioMode mode, int m_ap, int m_ue, int m_sub,
                           int n_rf);

// Orchestrates the per-user stages. coeffs[u] are user u's beam-domain
// projections on the pilot set (built by project_channel*).
BeamSelectionResult full_beam_selection(const std::vector<PilotCoefficients> &coeffs,
                                        const CodebookSet &codebooks,
                                        ScenarioMode mode, int T,
                                        const LinkBudget &budget, Rng &rng,
                                        TrainingLog *log = nullptr);

struct AnalogAssembly
{
    bool feasible = false;
    CMat p_an;                    // M_ap x N_rf, columns b/sqrt(N_rf)
    std::vector<int> column_user; // 0-based user served by each column
    std::string diagnostic;       // reason when infeasible
};

// Stage 4: one column per user (block fill when U < N_rf). Users sharing an
// AP beam, or U > N_rf, make simultaneous service infeasible; the caller
// excludes such realizations from rate statistics.
AnalogAssembly build_analog_matrix(const std::vector<int> &l_stars,
                                   const OrthogonalSet &b_ap, int n_rf);

} // namespace hbf

#endif
