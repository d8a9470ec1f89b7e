// SPDX-License-Identifier: Apache-2.0
//
// mmwave-hbf — link-level simulator for multiuser wideband mmWave hybrid
// beamforming with hierarchical codebooks and block-diagonalization precoding.
// Copyright (C) 2026 mmwave-hbf contributors
//
// Licensed under the Apache License, Version 2.0; see LICENSE for details.
// ------------------------------------------------------------------------

#ifndef HBF_CHANNEL_HPP
#define HBF_CHANNEL_HPP

#include "hbf/array.hpp"
#include "hbf/codebook.hpp"
#include "hbf/common.hpp"
#include "hbf/rng.hpp"

#include <vector>

namespace hbf
{

// One realization's propagation paths: departure/arrival angles and complex
// gains, all length L.
struct PathSet
{
    RVec aod;   // theta_ap per path, radians in [0, pi]
    RVec aoa;   // theta_ue per path, radians in [0, pi]
    CVec gains; // alpha per path

    int num_paths() const { return static_cast<int>(gains.size()); }
};

struct ChannelConfig
{
    int num_paths = 1;
    std::vector<double> power_profile_db = {0.0}; // relative path powers
    cplx coupling_amplitude = 0.1;                // both array ends
    bool normalize = true; // scale variances so sum E|alpha_l|^2 = 1

    void validate() const;
    // Per-path gain variances implied by the profile (normalized if set).
    std::vector<double> path_variances() const;
};

// Angles i.i.d. U[0, pi]; gains i.i.d. CN(0, variance_l). Draw order: all
// AoD, then all AoA, then all gains (fixed for reproducibility).
PathSet draw_paths(Rng &rng, const ChannelConfig &config);

// H[k] = (I + S_ue) (sum_l alpha_l a_ue(theta_ue,l) a_ap(theta_ap,l)^H) (I + S_ap).
CMat channel_matrix(const PathSet &paths, const ArrayGeometry &ap_geom,
                    const ArrayGeometry &ue_geom, const ElementPattern &pattern,
                    const CouplingModel &coupling, double f_k_hz);

// Per-user, per-subcarrier channel matrices (downlink orientation). The
// uplink matrix is always the transpose of the stored downlink matrix; no
// separate uplink tensor exists (reciprocity by construction).
struct ChannelTensor
{
    int num_users = 0;
    int m_ue = 0;
    int m_ap = 0;
    std::vector<int> k_indices;   // stored subcarrier indices (1-based)
    std::vector<CMat> matrices;   // u-major, then k; each M_ue x M_ap

    int num_subcarriers() const { return static_cast<int>(k_indices.size()); }
    const CMat &at(int u, int ki) const
    {
        return matrices[static_cast<std::size_t>(u) * k_indices.size() + ki];
    }
    CMat &at(int u, int ki)
    {
        return matrices[static_cast<std::size_t>(u) * k_indices.size() + ki];
    }
};

// Draw i.i.d. path sets for U users and evaluate the quasi-static channel at
// the requested subcarriers (paths are shared across k within a user).
struct ChannelDraw
{
    ChannelTensor tensor;
    std::vector<PathSet> paths; // one per user
};

ChannelDraw generate_channel_tensor(Rng &rng, const ChannelConfig &config,
                                    const ArrayGeometry &ap_geom,
                                    const ArrayGeometry &ue_geom,
                                    const ElementPattern &pattern,
                                    const FrequencyGrid &grid, int num_users,
                                    const std::vector<int> &k_indices);

// ---- fast evaluation path -------------------------------------------------
//
// For statistical runs the engine never forms H[k]; it keeps the low-rank
// factorization H[k] = sum_l alpha_l u_l[k] w_l[k]^H with
// u_l[k] = (I + S_ue[k]) a_ue(k, theta_ue,l) and
// w_l[k] = (I + S_ap[k])^H a_ap(k, theta_ap,l),
// and projects it onto whatever beams a stage needs. A reference
// implementation that forms H explicitly backs it in the tests.

// (I + S) factors cached per subcarrier (depend on config, not realization).
struct CouplingCache
{
    std::vector<double> freqs_hz;
    std::vector<CMat> i_plus_s_ue;   // (I + S_ue[k])
    std::vector<CMat> i_plus_s_ap_h; // (I + S_ap[k])^H
};

CouplingCache build_coupling_cache(const ArrayGeometry &ap_geom,
                                   const ArrayGeometry &ue_geom,
                                   const CouplingModel &coupling,
                                   const std::vector<double> &freqs_hz);

// Per-subcarrier low-rank factors for one user.
struct ChannelFactors
{
    CVec gains;             // alpha, length L
    std::vector<CMat> u;    // per k: M_ue x L
    std::vector<CMat> w;    // per k: M_ap x L

    int num_subcarriers() const { return static_cast<int>(u.size()); }
};

ChannelFactors channel_factors(const PathSet &paths,
                               const ArrayGeometry &ap_geom,
                               const ArrayGeometry &ue_geom,
                               const ElementPattern &pattern,
                               const CouplingCache &cache);

// H[k] assembled from the factors (reference/baseline use).
CMat channel_from_factors(const ChannelFactors &factors, int ki);

// Beam-domain projections of one user's channel on the training subcarriers:
// full[ki]   = B_ue^H H[k] B_ap   (narrow STA beams x narrow AP beams)
// sector[ki] = G_s^H  H[k] B_ap   (STA sector beams x narrow AP beams)
// The sector block is empty when the codebook set has no STA subarray.
struct PilotCoefficients
{
    std::vector<int> k_set;
    std::vector<CMat> full;
    std::vector<CMat> sector;
};

PilotCoefficients project_channel(const ChannelFactors &factors,
                                  const CodebookSet &codebooks,
                                  const std::vector<int> &k_set,
                                  const std::vector<int> &k_positions);

// Reference: same projections from explicit channel matrices.
PilotCoefficients project_channel_reference(const ChannelTensor &tensor, int u,
                                            const CodebookSet &codebooks);

// True equivalent rows g^H H[k] P_an for every stored subcarrier; row ki of
// the result corresponds to k_indices[ki].
CMat equivalent_rows(const ChannelFactors &factors, const CVec &g,
                     const CMat &p_an);

} // namespace hbf

#endif
