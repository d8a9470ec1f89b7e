// SPDX-License-Identifier: Apache-2.0
//
// mmwave-hbf — link-level simulator for multiuser wideband mmWave hybrid
// beamforming with hierarchical codebooks and block-diagonalization precoding.
// Copyright (C) 2026 mmwave-hbf contributors
//
// Licensed under the Apache License, Version 2.0; see LICENSE for details.
// ------------------------------------------------------------------------

#include "hbf/channel.hpp"
#include "hbf/signal.hpp"

#include <doctest.h>

#include <cmath>
#include <vector>

using namespace hbf;

namespace
{

struct Setup
{
    ArrayGeometry ap_geom;
    ArrayGeometry ue_geom;
    FrequencyGrid grid;
    ElementPattern pattern;
    CouplingModel coupling{cplx(0.1, 0.0)};

    Setup(int m_ap = 16, int m_ue = 16)
    {
        ap_geom.num_elements = m_ap;
        ue_geom.num_elements = m_ue;
    }

    std::vector<double> freqs(const std::vector<int> &k_set) const
    {
        std::vector<double> f;
        for (int k : k_set)
            f.push_back(subcarrier_frequency(grid, k));
        return f;
    }
};

} // namespace

TEST_SUITE("channel")
{

    TEST_CASE("power profile normalizes to unit total path power")
    {
        ChannelConfig config;
        config.num_paths = 3;
        config.power_profile_db = {0.0, -10.0, -10.0};
        const std::vector<double> v = config.path_variances();
        REQUIRE(v.size() == 3);
        CHECK(v[0] == doctest::Approx(1.0 / 1.2).epsilon(1e-12));
        CHECK(v[1] == doctest::Approx(0.1 / 1.2).epsilon(1e-12));
        CHECK(v[2] == doctest::Approx(0.1 / 1.2).epsilon(1e-12));
        CHECK(v[0] + v[1] + v[2] == doctest::Approx(1.0).epsilon(1e-12));

        config.normalize = false;
        const std::vector<double> raw = config.path_variances();
        CHECK(raw[0] == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(raw[1] == doctest::Approx(0.1).epsilon(1e-12));
    }

    TEST_CASE("channel config validation")
    {
        ChannelConfig config;
        config.num_paths = 2;
        config.power_profile_db = {0.0}; // wrong length
        CHECK_THROWS_AS(config.validate(), contract_error);
        config.power_profile_db = {0.0, -5.0};
        CHECK_NOTHROW(config.validate());
        config.coupling_amplitude = cplx(1.5, 0.0);
        CHECK_THROWS_AS(config.validate(), contract_error);
    }

    TEST_CASE("path draws are deterministic and inside the front hemisphere")
    {
        ChannelConfig config;
        config.num_paths = 3;
        config.power_profile_db = {0.0, -10.0, -10.0};
        Rng rng_a(42), rng_b(42);
        const PathSet a = draw_paths(rng_a, config);
        const PathSet b = draw_paths(rng_b, config);
        REQUIRE(a.num_paths() == 3);
        CHECK((a.aod - b.aod).norm() == 0.0);
        CHECK((a.aoa - b.aoa).norm() == 0.0);
        CHECK((a.gains - b.gains).norm() == 0.0);
        for (int l = 0; l < 3; ++l)
        {
            CHECK(a.aod(l) >= 0.0);
            CHECK(a.aod(l) < pi);
            CHECK(a.aoa(l) >= 0.0);
            CHECK(a.aoa(l) < pi);
        }
    }

    TEST_CASE("factorized channel equals the explicit matrix at every pilot")
    {
        Setup s;
        ChannelConfig config;
        config.num_paths = 3;
        config.power_profile_db = {0.0, -10.0, -10.0};
        Rng rng(7);
        const PathSet paths = draw_paths(rng, config);
        const std::vector<int> k_set = pilot_indices(512, 4);
        const CouplingCache cache = build_coupling_cache(
            s.ap_geom, s.ue_geom, s.coupling, s.freqs(k_set));
        const ChannelFactors factors =
            channel_factors(paths, s.ap_geom, s.ue_geom, s.pattern, cache);
        REQUIRE(factors.num_subcarriers() == 4);
        for (int ki = 0; ki < 4; ++ki)
        {
            const CMat from_factors = channel_from_factors(factors, ki);
            const CMat direct = channel_matrix(
                paths, s.ap_geom, s.ue_geom, s.pattern, s.coupling,
                subcarrier_frequency(s.grid, k_set[ki]));
            REQUIRE(from_factors.rows() == 16);
            REQUIRE(from_factors.cols() == 16);
            CHECK((from_factors - direct).cwiseAbs().maxCoeff() < 1e-12);
        }
    }

    TEST_CASE("coupling cache stores (I+S_ue) and (I+S_ap)^H per subcarrier")
    {
        Setup s(16, 8);
        const std::vector<int> k_set = {1, 257, 512};
        const CouplingCache cache = build_coupling_cache(
            s.ap_geom, s.ue_geom, s.coupling, s.freqs(k_set));
        REQUIRE(cache.i_plus_s_ue.size() == 3);
        REQUIRE(cache.i_plus_s_ap_h.size() == 3);
        for (int ki = 0; ki < 3; ++ki)
        {
            const double f_k = cache.freqs_hz[ki];
            const CMat expected_ue =
                CMat::Identity(8, 8) + coupling_matrix(s.ue_geom, s.coupling, f_k);
            const CMat expected_ap_h =
                (CMat::Identity(16, 16) +
                 coupling_matrix(s.ap_geom, s.coupling, f_k))
                    .adjoint();
            CHECK((cache.i_plus_s_ue[ki] - expected_ue).cwiseAbs().maxCoeff() <
                  1e-14);
            CHECK((cache.i_plus_s_ap_h[ki] - expected_ap_h)
                      .cwiseAbs()
                      .maxCoeff() < 1e-14);
        }
    }

    TEST_CASE("tensor generation shapes and determinism")
    {
        Setup s;
        ChannelConfig config;
        const std::vector<int> k_set = pilot_indices(512, 4);
        Rng rng_a(9), rng_b(9);
        const ChannelDraw a = generate_channel_tensor(
            rng_a, config, s.ap_geom, s.ue_geom, s.pattern, s.grid, 2, k_set);
        const ChannelDraw b = generate_channel_tensor(
            rng_b, config, s.ap_geom, s.ue_geom, s.pattern, s.grid, 2, k_set);
        REQUIRE(a.tensor.num_users == 2);
        REQUIRE(a.tensor.num_subcarriers() == 4);
        REQUIRE(a.tensor.matrices.size() == 8);
        REQUIRE(a.paths.size() == 2);
        for (int u = 0; u < 2; ++u)
            for (int ki = 0; ki < 4; ++ki)
            {
                REQUIRE(a.tensor.at(u, ki).rows() == 16);
                REQUIRE(a.tensor.at(u, ki).cols() == 16);
                CHECK((a.tensor.at(u, ki) - b.tensor.at(u, ki)).norm() == 0.0);
            }
        // Users draw independent paths.
        CHECK((a.paths[0].aod - a.paths[1].aod).norm() > 0.0);
    }

    TEST_CASE("beam-domain projection agrees with the explicit reference")
    {
        Setup s;
        ChannelConfig config;
        config.num_paths = 3;
        config.power_profile_db = {0.0, -10.0, -10.0};
        const CodebookSet codebooks = build_codebook_set(16, 16, 8, 4);
        const std::vector<int> k_set = pilot_indices(512, 4);
        Rng rng(11);
        const ChannelDraw draw = generate_channel_tensor(
            rng, config, s.ap_geom, s.ue_geom, s.pattern, s.grid, 1, k_set);

        const CouplingCache cache = build_coupling_cache(
            s.ap_geom, s.ue_geom, s.coupling, s.freqs(k_set));
        const ChannelFactors factors = channel_factors(
            draw.paths[0], s.ap_geom, s.ue_geom, s.pattern, cache);
        const std::vector<int> positions = {0, 1, 2, 3};
        const PilotCoefficients fast =
            project_channel(factors, codebooks, k_set, positions);
        const PilotCoefficients reference =
            project_channel_reference(draw.tensor, 0, codebooks);

        REQUIRE(fast.full.size() == 4);
        REQUIRE(fast.sector.size() == 4);
        for (int ki = 0; ki < 4; ++ki)
        {
            REQUIRE(fast.full[ki].rows() == 16);  // STA narrow beams
            REQUIRE(fast.full[ki].cols() == 16);  // AP narrow beams
            REQUIRE(fast.sector[ki].rows() == 8); // STA sector beams
            CHECK((fast.full[ki] - reference.full[ki]).cwiseAbs().maxCoeff() <
                  1e-12);
            CHECK((fast.sector[ki] - reference.sector[ki])
                      .cwiseAbs()
                      .maxCoeff() < 1e-12);
            // Spot-check one entry against the raw definition.
            const CMat &h = draw.tensor.at(0, ki);
            const cplx direct = (codebooks.b_ue.B.col(4).adjoint() * h *
                                 codebooks.b_ap.B.col(9))
                                    .value();
            CHECK(std::abs(fast.full[ki](4, 9) - direct) < 1e-12);
        }
    }

    TEST_CASE("equivalent rows equal g^H H[k] P_an")
    {
        Setup s;
        ChannelConfig config;
        const CodebookSet codebooks = build_codebook_set(16, 16, 8, 4);
        const std::vector<int> k_set = pilot_indices(512, 4);
        Rng rng(13);
        const PathSet paths = draw_paths(rng, config);
        const CouplingCache cache = build_coupling_cache(
            s.ap_geom, s.ue_geom, s.coupling, s.freqs(k_set));
        const ChannelFactors factors =
            channel_factors(paths, s.ap_geom, s.ue_geom, s.pattern, cache);
        const CVec g = codebooks.b_ue.B.col(3);
        const CMat p_an = codebooks.ap_sector.matrices[1];
        const CMat rows = equivalent_rows(factors, g, p_an);
        REQUIRE(rows.rows() == 4);
        REQUIRE(rows.cols() == 4);
        for (int ki = 0; ki < 4; ++ki)
        {
            const CMat h = channel_from_factors(factors, ki);
            const Eigen::RowVectorXcd expected = g.adjoint() * h * p_an;
            CHECK((rows.row(ki) - expected).cwiseAbs().maxCoeff() < 1e-12);
        }
    }

    TEST_CASE("mean channel power without coupling tracks the element-gain integral")
    {
        // Single path, c = 0, center subcarrier: E||H||_F^2 =
        // (E[F^2])^2 M_ue M_ap with E[F^2] = 2 for the sine element model.
        Setup s;
        s.coupling.amplitude = 0.0;
        ChannelConfig config;
        config.coupling_amplitude = 0.0;
        const std::vector<int> k_set = {257};
        Rng rng(2026);
        const int draws = 1500;
        double total = 0.0;
        for (int r = 0; r < draws; ++r)
        {
            const ChannelDraw draw = generate_channel_tensor(
                rng, config, s.ap_geom, s.ue_geom, s.pattern, s.grid, 1,
                k_set);
            total += draw.tensor.at(0, 0).squaredNorm();
        }
        const double mean = total / draws;
        const double expected = 4.0 * 16.0 * 16.0;
        CHECK(mean / expected > 0.90);
        CHECK(mean / expected < 1.10);
    }

} // TEST_SUITE
