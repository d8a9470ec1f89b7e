// SPDX-License-Identifier: Apache-2.0
//
// mmwave-hbf — link-level simulator for multiuser wideband mmWave hybrid
// beamforming with hierarchical codebooks and block-diagonalization precoding.
// Copyright (C) 2026 mmwave-hbf contributors
//
// Licensed under the Apache License, Version 2.0; see LICENSE for details.
// ------------------------------------------------------------------------

#ifndef HBF_CODEBOOK_HPP
#define HBF_CODEBOOK_HPP

#include "hbf/common.hpp"

#include <vector>

namespace hbf
{

// Inter-element phase of orthogonal beam m out of M: pi (1 - 2 (m-1)/M).
double beamformer_phase(int M, int m);

// b_m(M): entries M^{-1/2} exp(j (i-1) beta_m(M)), i = 1..M; unit norm.
CVec orthogonal_beamformer(int M, int m);

// B(M): the M orthonormal beams as matrix columns (column m-1 is b_m(M)).
struct OrthogonalSet
{
    int M = 0;
    CMat B; // M x M, column m-1 = b_m(M)
};

OrthogonalSet build_orthogonal_set(int M);

// AP sector index map l_n(m) = (m-1) N_rf + n: a bijection
// [1..M_ap/N_rf] x [1..N_rf] -> [1..M_ap].
int ap_sector_index(int m, int n, int n_rf);

// Sector matrices P^(m) = N_rf^{-1/2} [b_{l_1(m)} ... b_{l_Nrf(m)}]:
// ||P^(m)||_F = 1, each column norm N_rf^{-1/2}.
struct ApSectorCodebook
{
    int m_ap = 0;
    int n_rf = 0;
    std::vector<CMat> matrices; // M_ap/N_rf entries, each M_ap x N_rf
};

ApSectorCodebook build_ap_sector_codebook(int m_ap, int n_rf);

// Narrow matrices P^(m,n): all N_rf columns equal N_rf^{-1/2} b_{l_n(m)}.
struct ApNarrowCodebook
{
    int m_ap = 0;
    int n_rf = 0;
    // Indexed by (m-1) * N_rf + (n-1); M_ap entries total.
    std::vector<CMat> matrices;

    const CMat &at(int m, int n) const;
};

ApNarrowCodebook build_ap_narrow_codebook(int m_ap, int n_rf);

// STA sector beams g^(m) = sqrt(M_sub/M_ue) [b_m(M_sub); 0]: the first M_sub
// elements form the active subarray; the switching network costs the
// sqrt(M_sub/M_ue) power factor.
struct StaSectorCodebook
{
    int m_ue = 0;
    int m_sub = 0;
    CMat G; // M_ue x M_sub, column m-1 = g^(m)
};

StaSectorCodebook build_sta_sector_codebook(int m_ue, int m_sub);

// STA narrow index map l(m,n) = [ (M_ue/M_sub)(m-1) - M_ue/(2 M_sub) + n ]
// wrapped into 1..M_ue with the zero-remainder-maps-to-M convention.
int sta_narrow_index(int m, int n, int m_ue, int m_sub);

// Narrow beams overlapping each sector: g^(m,n) = b_{l(m,n)}(M_ue),
// n = 1 .. M_ue/M_sub + 1.
struct StaNarrowCodebook
{
    int m_ue = 0;
    int m_sub = 0;
    int beams_per_sector = 0; // M_ue/M_sub + 1
    // indices[m-1][n-1] = l(m,n); vectors come from B(M_ue).
    std::vector<std::vector<int>> indices;
    CMat B_ue; // B(M_ue) columns backing the codewords

    CVec codeword(int m, int n) const;
};

StaNarrowCodebook build_sta_narrow_codebook(int m_ue, int m_sub);

// All codebooks a run needs, built once per configuration.
struct CodebookSet
{
    OrthogonalSet b_ap;       // B(M_ap)
    OrthogonalSet b_ue;       // B(M_ue)
    ApSectorCodebook ap_sector;
    ApNarrowCodebook ap_narrow;
    StaSectorCodebook sta_sector;
    StaNarrowCodebook sta_narrow;
};

// with_sta = false builds only the AP-side codebooks plus B(M_ue); used by
// the single-antenna STA mode, where the subarray codebooks do not exist.
CodebookSet build_codebook_set(int m_ap, int m_ue, int m_sub, int n_rf,
                               bool with_sta = true);

} // namespace hbf

#endif
