// SPDX-License-Identifier: Apache-2.0
//
// mmwave-hbf — link-level simulator for multiuser wideband mmWave hybrid
// beamforming with hierarchical codebooks and block-diagonalization precoding.
// Copyright (C) 2026 mmwave-hbf contributors
//
// Licensed under the Apache License, Version 2.0; see LICENSE for details.
// ------------------------------------------------------------------------

#include "hbf/channel.hpp"

namespace hbf
{

void ChannelConfig::validate() const
{
    if (num_paths < 1)
        throw contract_error("ChannelConfig: num_paths must be >= 1");
    if (static_cast<int>(power_profile_db.size()) != num_paths)
        throw contract_error("ChannelConfig: power profile length must equal num_paths");
    if (std::abs(coupling_amplitude) >= 1.0)
        throw contract_error("ChannelConfig: |coupling_amplitude| must be < 1");
}

std::vector<double> ChannelConfig::path_variances() const
{
    validate();
    std::vector<double> var(power_profile_db.size());
    double total = 0.0;
    for (std::size_t l = 0; l < var.size(); ++l)
    {
        var[l] = db_to_linear(power_profile_db[l]);
        total += var[l];
    }
    if (normalize)
        for (double &v : var)
            v /= total;
    return var;
}

PathSet draw_paths(Rng &rng, const ChannelConfig &config)
{
    const std::vector<double> var = config.path_variances();
    const int L = config.num_paths;
    PathSet paths;
    paths.aod.resize(L);
    paths.aoa.resize(L);
    paths.gains.resize(L);
    for (int l = 0; l < L; ++l)
        paths.aod(l) = rng.uniform(0.0, pi);
    for (int l = 0; l < L; ++l)
        paths.aoa(l) = rng.uniform(0.0, pi);
    for (int l = 0; l < L; ++l)
        paths.gains(l) = rng.cnormal(var[static_cast<std::size_t>(l)]);
    return paths;
}

CMat channel_matrix(const PathSet &paths, const ArrayGeometry &ap_geom,
                    const ArrayGeometry &ue_geom, const ElementPattern &pattern,
                    const CouplingModel &coupling, double f_k_hz)
{
    const int m_ue = ue_geom.num_elements;
    const int m_ap = ap_geom.num_elements;
    if (paths.aod.size() != paths.gains.size() ||
        paths.aoa.size() != paths.gains.size())
        throw contract_error("channel_matrix: inconsistent path set lengths");
    CMat core = CMat::Zero(m_ue, m_ap);
    for (int l = 0; l < paths.num_paths(); ++l)
    {
        const CVec a_ue = array_response(ue_geom, pattern, f_k_hz, paths.aoa(l));
        const CVec a_ap = array_response(ap_geom, pattern, f_k_hz, paths.aod(l));
        core.noalias() += paths.gains(l) * a_ue * a_ap.adjoint();
    }
    const CMat s_ue = coupling_matrix(ue_geom, coupling, f_k_hz);
    const CMat s_ap = coupling_matrix(ap_geom, coupling, f_k_hz);
    return (CMat::Identity(m_ue, m_ue) + s_ue) * core *
           (CMat::Identity(m_ap, m_ap) + s_ap);
}

ChannelDraw generate_channel_tensor(Rng &rng, const ChannelConfig &config,
                                    const ArrayGeometry &ap_geom,
                                    const ArrayGeometry &ue_geom,
                                    const ElementPattern &pattern,
                                    const FrequencyGrid &grid, int num_users,
                                    const std::vector<int> &k_indices)
{
    if (num_users < 1)
        throw contract_error("generate_channel_tensor: num_users must be >= 1");
    CouplingModel model{config.coupling_amplitude};
    ChannelDraw draw;
    draw.tensor.num_users = num_users;
    draw.tensor.m_ue = ue_geom.num_elements;
    draw.tensor.m_ap = ap_geom.num_elements;
    draw.tensor.k_indices = k_indices;
    draw.tensor.matrices.reserve(static_cast<std::size_t>(num_users) *
                                 k_indices.size());
    draw.paths.reserve(static_cast<std::size_t>(num_users));
    for (int u = 0; u < num_users; ++u)
        draw.paths.push_back(draw_paths(rng, config));
    for (int u = 0; u < num_users; ++u)
        for (int k : k_indices)
            draw.tensor.matrices.push_back(
                channel_matrix(draw.paths[static_cast<std::size_t>(u)], ap_geom,
                               ue_geom, pattern, model,
                               subcarrier_frequency(grid, k)));
    return draw;
}

CouplingCache build_coupling_cache(const ArrayGeometry &ap_geom,
                                   const ArrayGeometry &ue_geom,
                                   const CouplingModel &coupling,
                                   const std::vector<double> &freqs_hz)
{
    CouplingCache cache;
    cache.freqs_hz = freqs_hz;
    cache.i_plus_s_ue.reserve(freqs_hz.size());
    cache.i_plus_s_ap_h.reserve(freqs_hz.size());
    const int m_ue = ue_geom.num_elements;
    const int m_ap = ap_geom.num_elements;
    for (double f : freqs_hz)
    {
        cache.i_plus_s_ue.push_back(CMat::Identity(m_ue, m_ue) +
                                    coupling_matrix(ue_geom, coupling, f));
        cache.i_plus_s_ap_h.push_back(
            (CMat::Identity(m_ap, m_ap) + coupling_matrix(ap_geom, coupling, f))
                .adjoint());
    }
    return cache;
}

ChannelFactors channel_factors(const PathSet &paths,
                               const ArrayGeometry &ap_geom,
                               const ArrayGeometry &ue_geom,
                               const ElementPattern &pattern,
                               const CouplingCache &cache)
{
    const int L = paths.num_paths();
    ChannelFactors fac;
    fac.gains = paths.gains;
    const std::size_t nk = cache.freqs_hz.size();
    fac.u.resize(nk);
    fac.w.resize(nk);
    for (std::size_t ki = 0; ki < nk; ++ki)
    {
        const double f = cache.freqs_hz[ki];
        CMat a_ue(ue_geom.num_elements, L);
        CMat a_ap(ap_geom.num_elements, L);
        for (int l = 0; l < L; ++l)
        {
            a_ue.col(l) = array_response(ue_geom, pattern, f, paths.aoa(l));
            a_ap.col(l) = array_response(ap_geom, pattern, f, paths.aod(l));
        }
        fac.u[ki].noalias() = cache.i_plus_s_ue[ki] * a_ue;
        fac.w[ki].noalias() = cache.i_plus_s_ap_h[ki] * a_ap;
    }
    return fac;
}

CMat channel_from_factors(const ChannelFactors &factors, int ki)
{
    const CMat &u = factors.u[static_cast<std::size_t>(ki)];
    const CMat &w = factors.w[static_cast<std::size_t>(ki)];
    CMat h = CMat::Zero(u.rows(), w.rows());
    for (int l = 0; l < factors.gains.size(); ++l)
        h.noalias() += factors.gains(l) * u.col(l) * w.col(l).adjoint();
    return h;
}

PilotCoefficients project_channel(const ChannelFactors &factors,
                                  const CodebookSet &codebooks,
                                  const std::vector<int> &k_set,
                                  const std::vector<int> &k_positions)
{
    if (k_set.size() != k_positions.size())
        throw contract_error("project_channel: k_set/k_positions length mismatch");
    const bool has_sector = codebooks.sta_sector.G.size() > 0;
    PilotCoefficients pc;
    pc.k_set = k_set;
    pc.full.reserve(k_set.size());
    if (has_sector)
        pc.sector.reserve(k_set.size());
    const int L = static_cast<int>(factors.gains.size());
    for (std::size_t i = 0; i < k_set.size(); ++i)
    {
        const std::size_t ki = static_cast<std::size_t>(k_positions[i]);
        // Q = diag(alpha) * w^H B_ap (L x M_ap); left-projections then give
        // B^H H B_ap = (B^H u) Q for any receive-side beam matrix B.
        CMat q = factors.w[ki].adjoint() * codebooks.b_ap.B;
        for (int l = 0; l < L; ++l)
            q.row(l) *= factors.gains(l);
        pc.full.push_back((codebooks.b_ue.B.adjoint() * factors.u[ki]) * q);
        if (has_sector)
            pc.sector.push_back((codebooks.sta_sector.G.adjoint() * factors.u[ki]) * q);
    }
    return pc;
}

PilotCoefficients project_channel_reference(const ChannelTensor &tensor, int u,
                                            const CodebookSet &codebooks)
{
    const bool has_sector = codebooks.sta_sector.G.size() > 0;
    PilotCoefficients pc;
    pc.k_set = tensor.k_indices;
    for (int ki = 0; ki < tensor.num_subcarriers(); ++ki)
    {
        const CMat &h = tensor.at(u, ki);
        pc.full.push_back(codebooks.b_ue.B.adjoint() * h * codebooks.b_ap.B);
        if (has_sector)
            pc.sector.push_back(codebooks.sta_sector.G.adjoint() * h *
                                codebooks.b_ap.B);
    }
    return pc;
}

CMat equivalent_rows(const ChannelFactors &factors, const CVec &g,
                     const CMat &p_an)
{
    const int nk = factors.num_subcarriers();
    const int n_rf = static_cast<int>(p_an.cols());
    const int L = static_cast<int>(factors.gains.size());
    CMat rows(nk, n_rf);
    for (int ki = 0; ki < nk; ++ki)
    {
        // g^H H[k] P_an = sum_l alpha_l (g^H u_l)(w_l^H P_an)
        const Eigen::RowVectorXcd gu =
            g.adjoint() * factors.u[static_cast<std::size_t>(ki)]; // 1 x L
        const CMat wp =
            factors.w[static_cast<std::size_t>(ki)].adjoint() * p_an; // L x N_rf
        Eigen::RowVectorXcd row = Eigen::RowVectorXcd::Zero(n_rf);
        for (int l = 0; l < L; ++l)
            row += factors.gains(l) * gu(l) * wp.row(l);
        rows.row(ki) = row;
    }
    return rows;
}

} // namespace hbf
