// SPDX-License-Identifier: Apache-2.0
//
// mmwave-hbf — link-level simulator for multiuser wideband mmWave hybrid
// beamforming with hierarchical codebooks and block-diagonalization precoding.
// Copyright (C) 2026 mmwave-hbf contributors
//
// Licensed under the Apache License, Version 2.0; see LICENSE for details.
// ------------------------------------------------------------------------

#include "hbf/channel.hpp"
#include "hbf/codebook.hpp"
#include "hbf/signal.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

using namespace hbf;

namespace
{

bool contains(const std::vector<int> &set, int value)
{
    return std::find(set.begin(), set.end(), value) != set.end();
}

CMat random_channel(Rng &rng, int rows, int cols)
{
    CMat h(rows, cols);
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c)
            h(r, c) = rng.cnormal(1.0);
    return h;
}

} // namespace

TEST_SUITE("signal")
{

    TEST_CASE("pilot sets: edges included, documented grids, nesting")
    {
        const std::vector<int> k4 = pilot_indices(512, 4);
        CHECK(k4 == std::vector<int>{1, 171, 342, 512});

        const std::vector<int> k16 = pilot_indices(512, 16);
        REQUIRE(k16.size() == 16);
        CHECK(k16.front() == 1);
        CHECK(k16.back() == 512);
        for (int k : k4)
            CHECK(contains(k16, k)); // the 4-pilot grid nests in the 16-pilot grid

        const std::vector<int> k64 = pilot_indices(512, 64);
        REQUIRE(k64.size() == 64);
        CHECK(k64.front() == 1);
        CHECK(k64.back() == 512);
        // Rounded spacing breaks nesting between 16 and 64 pilots.
        CHECK(contains(k16, 35));
        CHECK(!contains(k64, 35));

        CHECK(pilot_indices(512, 1) == std::vector<int>{1});
        for (const std::vector<int> &set : {k4, k16, k64})
            for (std::size_t i = 1; i < set.size(); ++i)
                CHECK(set[i] > set[i - 1]);
        CHECK_THROWS_AS(pilot_indices(4, 5), contract_error);
    }

    TEST_CASE("training sequences are unit-modulus QPSK with energy T")
    {
        Rng rng(3);
        const std::vector<int> k_set = pilot_indices(512, 4);
        const TrainingSignal sig = gen_training(rng, k_set, 64);
        REQUIRE(sig.x.rows() == 4);
        REQUIRE(sig.x.cols() == 64);
        for (int r = 0; r < 4; ++r)
        {
            CHECK(sig.x.row(r).squaredNorm() ==
                  doctest::Approx(64.0).epsilon(1e-12));
            for (int t = 0; t < 64; ++t)
            {
                CHECK(std::abs(sig.x(r, t)) ==
                      doctest::Approx(1.0).epsilon(1e-12));
                CHECK(std::abs(std::abs(sig.x(r, t).real()) - M_SQRT1_2) <
                      1e-12);
            }
        }
    }

    TEST_CASE("uplink coefficient equals the scalar-transpose identity")
    {
        Rng rng(10);
        const CMat h = random_channel(rng, 6, 8);
        CVec p(8), g(6);
        for (int i = 0; i < 8; ++i)
            p(i) = rng.cnormal(1.0);
        for (int i = 0; i < 6; ++i)
            g(i) = rng.cnormal(1.0);
        const cplx v = uplink_coefficient(p, g, h, 1.0, 16.0);
        // p^T H^T conj(g) written out explicitly.
        const cplx lhs = (p.transpose() * h.transpose() * g.conjugate())(0);
        const cplx rhs = (g.adjoint() * h * p)(0);
        CHECK(std::abs(lhs - rhs) < 1e-12);
        CHECK(std::abs(v - std::sqrt(1.0 / 16.0) * rhs) < 1e-13);
    }

    TEST_CASE("noiseless uplink through a narrow AP matrix is reciprocal")
    {
        // With P^(m,n), every chain drives the same beam: each per-chain
        // coefficient is N_rf^{-1/2} times the single-beam coefficient.
        const CodebookSet codebooks = build_codebook_set(16, 16, 8, 4);
        Rng rng(21);
        const CMat h = random_channel(rng, 16, 16);
        const CVec g = codebooks.sta_sector.G.col(2);
        const CMat p_nar = codebooks.ap_narrow.at(2, 3);
        const CVec b = codebooks.b_ap.B.col(ap_sector_index(2, 3, 4) - 1);

        LinkBudget budget;
        budget.sigma_z2 = 0.0;
        budget.power_denom = 4.0;
        Rng noise(1);
        const TrainingSignal sig =
            gen_training(noise, pilot_indices(512, 4), 8);
        const std::vector<CMat> h_at_pilots(4, h);
        const std::vector<CMat> y =
            uplink_receive(p_nar, g, h_at_pilots, sig, budget, noise);
        REQUIRE(y.size() == 4);
        const cplx w =
            budget.amplitude() * (g.adjoint() * h * b).value() / 2.0;
        for (int ki = 0; ki < 4; ++ki)
            for (int n = 0; n < 4; ++n)
            {
                const cplx est = ml_estimate(y[ki].row(n), sig.x.row(ki));
                CHECK(std::abs(est - w) < 1e-12);
            }
    }

    TEST_CASE("uplink receive rejects power-constraint violations")
    {
        Rng rng(4);
        const CMat h = random_channel(rng, 4, 8);
        const TrainingSignal sig = gen_training(rng, {1}, 4);
        LinkBudget budget;
        const std::vector<CMat> h_at_pilots(1, h);
        CVec g = CVec::Ones(4); // power 4 > 1
        const CMat p_an = CMat::Identity(8, 2) / std::sqrt(2.0);
        CHECK_THROWS_AS(uplink_receive(p_an, g, h_at_pilots, sig, budget, rng),
                        contract_error);
        g = CVec::Ones(4) / 2.0;
        const CMat p_hot = CMat::Identity(8, 2); // column power 1 > 1/2
        CHECK_THROWS_AS(uplink_receive(p_hot, g, h_at_pilots, sig, budget, rng),
                        contract_error);
    }

    TEST_CASE("noiseless downlink reproduces the closed-form coefficient")
    {
        const CodebookSet codebooks = build_codebook_set(16, 16, 8, 4);
        Rng rng(31);
        const CMat h = random_channel(rng, 16, 16);
        const CVec g = codebooks.b_ue.B.col(5);
        const CMat p_an = codebooks.ap_narrow.at(3, 1);
        LinkBudget budget;
        budget.sigma_z2 = 0.0;
        budget.power_denom = 16.0;
        const TrainingSignal sig = gen_training(rng, pilot_indices(512, 4), 16);
        const std::vector<CMat> h_at_pilots(4, h);
        Rng noise(2);
        const std::vector<Eigen::RowVectorXcd> y =
            downlink_receive(g, h_at_pilots, p_an, sig, budget, noise);
        const cplx w = downlink_coefficient(g, h, p_an, 1.0, 16.0);
        const CVec ones = CVec::Ones(4);
        const cplx direct = std::sqrt(1.0 / (16.0 * 4.0)) *
                            (g.adjoint() * h * (p_an * ones)).value();
        CHECK(std::abs(w - direct) < 1e-13);
        for (int ki = 0; ki < 4; ++ki)
            CHECK(std::abs(ml_estimate(y[ki], sig.x.row(ki)) - w) < 1e-12);
    }

    TEST_CASE("ml estimate is exact without noise and unbiased-calibrated with it")
    {
        Rng rng(8);
        const TrainingSignal sig = gen_training(rng, {1}, 64);
        const cplx truth(0.7, -0.3);
        Eigen::RowVectorXcd y = truth * sig.x.row(0);
        CHECK(std::abs(ml_estimate(y, sig.x.row(0)) - truth) < 1e-14);

        // Noise-only estimates must have variance sigma^2 / T.
        const double sigma2 = 2.0;
        const int trials = 10000;
        double acc = 0.0;
        for (int i = 0; i < trials; ++i)
        {
            Eigen::RowVectorXcd z(64);
            for (int t = 0; t < 64; ++t)
                z(t) = rng.cnormal(sigma2);
            acc += std::norm(ml_estimate(z, sig.x.row(0)));
        }
        const double ratio = (acc / trials) / (sigma2 / 64.0);
        CHECK(ratio > 0.95);
        CHECK(ratio < 1.05);
    }

    TEST_CASE("multiuser downlink signal matches the explicit composition")
    {
        const CodebookSet codebooks = build_codebook_set(16, 16, 8, 4);
        Rng rng(12);
        const CMat h = random_channel(rng, 16, 16);
        const CVec g = codebooks.b_ue.B.col(1);
        const CMat p_an = codebooks.ap_sector.matrices[0];
        // Unit-Frobenius composite precoder: two orthonormal digital columns
        // scaled to norm 1/sqrt(2) each (P_an has orthonormal columns/sqrt(4)).
        CMat p_di = CMat::Zero(4, 2);
        p_di(0, 0) = 2.0 / std::sqrt(2.0);
        p_di(1, 1) = 2.0 / std::sqrt(2.0);
        REQUIRE(std::abs((p_an * p_di).norm() - 1.0) < 1e-12);
        CVec s(2);
        s(0) = cplx(0.3, 0.4);
        s(1) = cplx(-0.2, 0.9);
        Rng noise(5);
        const cplx y =
            multiuser_downlink_signal(h, g, p_an, p_di, s, 0.0, noise);
        const cplx expected = ((g.adjoint() * h * p_an) * p_di * s)(0);
        CHECK(std::abs(y - expected) < 1e-12);

        CMat bad = p_di * 2.0; // breaks the unit-power contract
        CHECK_THROWS_AS(
            multiuser_downlink_signal(h, g, p_an, bad, s, 0.0, noise),
            contract_error);
    }

    TEST_CASE("link budget validation and derived quantities")
    {
        LinkBudget budget;
        budget.rho = 1.0;
        budget.sigma_z2 = 0.25;
        budget.power_denom = 16.0;
        CHECK(budget.snr() == doctest::Approx(4.0).epsilon(1e-15));
        CHECK(budget.amplitude() == doctest::Approx(0.25).epsilon(1e-15));
        budget.rho = 0.0;
        CHECK_THROWS_AS(budget.validate(), contract_error);
    }

} // TEST_SUITE
