// SPDX-License-Identifier: Apache-2.0
//
// mmwave-hbf — link-level simulator for multiuser wideband mmWave hybrid
// beamforming with hierarchical codebooks and block-diagonalization precoding.
// Copyright (C) 2026 mmwave-hbf contributors
//
// Licensed under the Apache License, Version 2.0; see LICENSE for details.
// ------------------------------------------------------------------------

#include "hbf/codebook.hpp"

namespace hbf
{

double beamformer_phase(int M, int m)
{
    if (M < 1 || m < 1 || m > M)
        throw contract_error("beamformer_phase: need 1 <= m <= M");
    return pi * (1.0 - 2.0 * (static_cast<double>(m) - 1.0) / M);
}

CVec orthogonal_beamformer(int M, int m)
{
    const double beta = beamformer_phase(M, m);
    const double scale = 1.0 / std::sqrt(static_cast<double>(M));
    CVec b(M);
    for (int i = 1; i <= M; ++i)
    {
        const double phase = (i - 1) * beta;
        b(i - 1) = scale * cplx(std::cos(phase), std::sin(phase));
    }
    return b;
}

OrthogonalSet build_orthogonal_set(int M)
{
    if (M < 1)
        throw contract_error("build_orthogonal_set: M must be >= 1");
    OrthogonalSet set;
    set.M = M;
    set.B.resize(M, M);
    for (int m = 1; m <= M; ++m)
        set.B.col(m - 1) = orthogonal_beamformer(M, m);
    return set;
}

int ap_sector_index(int m, int n, int n_rf)
{
    if (m < 1 || n < 1 || n > n_rf)
        throw contract_error("ap_sector_index: indices out of range");
    return (m - 1) * n_rf + n;
}

ApSectorCodebook build_ap_sector_codebook(int m_ap, int n_rf)
{
    if (n_rf < 1 || m_ap % n_rf != 0)
        throw contract_error("build_ap_sector_codebook: N_rf must divide M_ap");
    const OrthogonalSet base = build_orthogonal_set(m_ap);
    const double scale = 1.0 / std::sqrt(static_cast<double>(n_rf));
    ApSectorCodebook cb;
    cb.m_ap = m_ap;
    cb.n_rf = n_rf;
    const int num_sectors = m_ap / n_rf;
    cb.matrices.reserve(num_sectors);
    for (int m = 1; m <= num_sectors; ++m)
    {
        CMat P(m_ap, n_rf);
        for (int n = 1; n <= n_rf; ++n)
            P.col(n - 1) = scale * base.B.col(ap_sector_index(m, n, n_rf) - 1);
        cb.matrices.push_back(std::move(P));
    }
    return cb;
}

const CMat &ApNarrowCodebook::at(int m, int n) const
{
    const int num_sectors = m_ap / n_rf;
    if (m < 1 || m > num_sectors || n < 1 || n > n_rf)
        throw contract_error("ApNarrowCodebook: indices out of range");
    return matrices[static_cast<std::size_t>(m - 1) * n_rf + (n - 1)];
}

ApNarrowCodebook build_ap_narrow_codebook(int m_ap, int n_rf)
{
    if (n_rf < 1 || m_ap % n_rf != 0)
        throw contract_error("build_ap_narrow_codebook: N_rf must divide M_ap");
    const OrthogonalSet base = build_orthogonal_set(m_ap);
    const double scale = 1.0 / std::sqrt(static_cast<double>(n_rf));
    ApNarrowCodebook cb;
    cb.m_ap = m_ap;
    cb.n_rf = n_rf;
    const int num_sectors = m_ap / n_rf;
    cb.matrices.reserve(static_cast<std::size_t>(m_ap));
    for (int m = 1; m <= num_sectors; ++m)
        for (int n = 1; n <= n_rf; ++n)
        {
            const CVec col = scale * base.B.col(ap_sector_index(m, n, n_rf) - 1);
            CMat P(m_ap, n_rf);
            for (int c = 0; c < n_rf; ++c)
                P.col(c) = col;
            cb.matrices.push_back(std::move(P));
        }
    return cb;
}

StaSectorCodebook build_sta_sector_codebook(int m_ue, int m_sub)
{
    if (m_sub < 1 || m_sub > m_ue)
        throw contract_error("build_sta_sector_codebook: need 1 <= M_sub <= M_ue");
    const int ratio = m_ue / m_sub;
    if (ratio * m_sub != m_ue || ratio % 2 != 0)
        throw contract_error(
            "build_sta_sector_codebook: M_ue/M_sub must be a positive even integer");
    StaSectorCodebook cb;
    cb.m_ue = m_ue;
    cb.m_sub = m_sub;
    cb.G = CMat::Zero(m_ue, m_sub);
    const double scale = std::sqrt(static_cast<double>(m_sub) / m_ue);
    for (int m = 1; m <= m_sub; ++m)
        cb.G.col(m - 1).head(m_sub) = scale * orthogonal_beamformer(m_sub, m);
    return cb;
}

int sta_narrow_index(int m, int n, int m_ue, int m_sub)
{
    const int ratio = m_ue / m_sub;
    if (ratio * m_sub != m_ue || ratio % 2 != 0)
        throw contract_error("sta_narrow_index: M_ue/M_sub must be a positive even integer");
    if (m < 1 || m > m_sub || n < 1 || n > ratio + 1)
        throw contract_error("sta_narrow_index: indices out of range");
    int l = ratio * (m - 1) - ratio / 2 + n;
    // Wrap into 1..M_ue; a zero remainder maps to M_ue.
    l %= m_ue;
    if (l <= 0)
        l += m_ue;
    return l;
}

CVec StaNarrowCodebook::codeword(int m, int n) const
{
    if (m < 1 || m > m_sub || n < 1 || n > beams_per_sector)
        throw contract_error("StaNarrowCodebook: indices out of range");
    return B_ue.col(indices[m - 1][n - 1] - 1);
}

StaNarrowCodebook build_sta_narrow_codebook(int m_ue, int m_sub)
{
    const int ratio = m_ue / m_sub;
    if (m_sub < 1 || ratio * m_sub != m_ue || ratio % 2 != 0)
        throw contract_error(
            "build_sta_narrow_codebook: M_ue/M_sub must be a positive even integer");
    StaNarrowCodebook cb;
    cb.m_ue = m_ue;
    cb.m_sub = m_sub;
    cb.beams_per_sector = ratio + 1;
    cb.B_ue = build_orthogonal_set(m_ue).B;
    cb.indices.resize(m_sub);
    for (int m = 1; m <= m_sub; ++m)
    {
        cb.indices[m - 1].resize(cb.beams_per_sector);
        for (int n = 1; n <= cb.beams_per_sector; ++n)
            cb.indices[m - 1][n - 1] = sta_narrow_index(m, n, m_ue, m_sub);
    }
    return cb;
}

CodebookSet build_codebook_set(int m_ap, int m_ue, int m_sub, int n_rf,
                               bool with_sta)
{
    CodebookSet set;
    set.b_ap = build_orthogonal_set(m_ap);
    set.b_ue = build_orthogonal_set(m_ue);
    set.ap_sector = build_ap_sector_codebook(m_ap, n_rf);
    set.ap_narrow = build_ap_narrow_codebook(m_ap, n_rf);
    if (with_sta)
    {
        set.sta_sector = build_sta_sector_codebook(m_ue, m_sub);
        set.sta_narrow = build_sta_narrow_codebook(m_ue, m_sub);
    }
    return set;
}

} // namespace hbf
