// SPDX-License-Identifier: Apache-2.0
//
// mmwave-hbf — link-level simulator for multiuser wideband mmWave hybrid
// beamforming with hierarchical codebooks and block-diagonalization precoding.
// Copyright (C) 2026 mmwave-hbf contributors
//
// Licensed under the Apache License, Version 2.0; see LICENSE for details.
// ------------------------------------------------------------------------

#include "hbf/metrics.hpp"
#include "hbf/rng.hpp"

#include <doctest.h>

#include <cmath>
#include <vector>

using namespace hbf;

namespace
{

std::vector<CMat> random_coeffs(Rng &rng, int m_ue, int m_ap, int pilots)
{
    std::vector<CMat> coeffs;
    for (int p = 0; p < pilots; ++p)
    {
        CMat c(m_ue, m_ap);
        for (int r = 0; r < m_ue; ++r)
            for (int col = 0; col < m_ap; ++col)
                c(r, col) = rng.cnormal(1.0);
        coeffs.push_back(std::move(c));
    }
    return coeffs;
}

} // namespace

TEST_SUITE("metrics")
{

    TEST_CASE("oracle table: argmax, dominance, tie-breaking")
    {
        Rng rng(19);
        const std::vector<CMat> coeffs = random_coeffs(rng, 8, 16, 3);
        const ObjectiveTable table = oracle_table(coeffs);
        REQUIRE(table.obj.rows() == 8);
        REQUIRE(table.obj.cols() == 16);
        // The reported best dominates every entry of its own table.
        CHECK(table.best.objective == table.obj.maxCoeff());
        CHECK(table.best.objective ==
              table.obj(table.best.l_ue - 1, table.best.l_ap - 1));
        // Entry identity: obj(i,j) = sum_k |coeffs[k](i,j)|^2.
        double expected = 0.0;
        for (const CMat &c : coeffs)
            expected += std::norm(c(4, 9));
        CHECK(table.obj(4, 9) == doctest::Approx(expected).epsilon(1e-12));

        const OracleSolution solo = oracle_exhaustive(coeffs);
        CHECK(solo.l_ap == table.best.l_ap);
        CHECK(solo.l_ue == table.best.l_ue);

        // Exact ties resolve to the lowest AP beam, then the lowest STA beam.
        std::vector<CMat> flat(2, CMat::Ones(4, 4));
        const OracleSolution tied = oracle_exhaustive(flat);
        CHECK(tied.l_ap == 1);
        CHECK(tied.l_ue == 1);
    }

    TEST_CASE("bser counts mismatching pairs")
    {
        using P = std::pair<int, int>;
        const std::vector<P> oracle = {{1, 2}, {3, 4}, {5, 6}, {7, 8}};
        CHECK(bser(oracle, oracle) == 0.0);
        std::vector<P> selected = oracle;
        selected[1] = {3, 5}; // STA beam off by one counts as an error
        selected[3] = {8, 8};
        CHECK(bser(selected, oracle) == doctest::Approx(0.5).epsilon(1e-15));
        CHECK_THROWS_AS(bser({{1, 1}}, oracle), contract_error);
    }

    TEST_CASE("misalignment loss: zero on hits, excluded on zero objectives")
    {
        const std::vector<double> oracle = {2.0, 4.0, 8.0, 1.0};
        SUBCASE("all hits -> exactly 0 dB")
        {
            const LossReport report = misalignment_loss_db(oracle, oracle);
            CHECK(report.mean_db == 0.0);
            CHECK(report.included == 4);
            CHECK(report.excluded == 0);
        }
        SUBCASE("half-power misses average 10 log10(2) over the missed half")
        {
            const std::vector<double> algo = {1.0, 4.0, 4.0, 1.0};
            const LossReport report = misalignment_loss_db(oracle, algo);
            const double expected = (10.0 * std::log10(2.0) * 2.0) / 4.0;
            CHECK(report.mean_db ==
                  doctest::Approx(expected).epsilon(1e-12));
        }
        SUBCASE("zero algorithm objective is excluded, not infinite")
        {
            const std::vector<double> algo = {2.0, 0.0, 8.0, 1.0};
            const LossReport report = misalignment_loss_db(oracle, algo);
            CHECK(report.mean_db == 0.0);
            CHECK(report.included == 3);
            CHECK(report.excluded == 1);
        }
    }

    TEST_CASE("achievable rate: per-user additivity and interference penalty")
    {
        // Two users, one subcarrier, diagonal equivalent channels.
        CMat rows0 = CMat::Zero(1, 2), rows1 = CMat::Zero(1, 2);
        rows0(0, 0) = cplx(1.0, 0.0);
        rows1(0, 1) = cplx(1.0, 0.0);
        CMat p_di = CMat::Zero(2, 2);
        p_di(0, 0) = 1.0 / std::sqrt(2.0);
        p_di(1, 1) = 1.0 / std::sqrt(2.0);
        const double rho_user = 0.5, sigma_z2 = 0.1;
        const RateReport report =
            achievable_sum_rate({rows0, rows1}, {p_di}, rho_user, sigma_z2);
        REQUIRE(report.per_user.size() == 2);
        const double expected =
            std::log2(1.0 + rho_user * 0.5 / sigma_z2); // |h p|^2 = 1/2
        CHECK(report.per_user[0] ==
              doctest::Approx(expected).epsilon(1e-12));
        CHECK(report.per_user[1] ==
              doctest::Approx(expected).epsilon(1e-12));
        CHECK(report.sum_rate ==
              doctest::Approx(report.per_user[0] + report.per_user[1])
                  .epsilon(1e-12));

        // A precoder leaking into the other user costs rate.
        CMat leaky = CMat::Zero(2, 2);
        leaky(0, 0) = 1.0 / std::sqrt(2.0);
        leaky(0, 1) = 1.0 / std::sqrt(2.0); // user 1's column hits user 0
        const RateReport worse =
            achievable_sum_rate({rows0, rows1}, {leaky}, rho_user, sigma_z2);
        CHECK(worse.per_user[0] < report.per_user[0]);
    }

    TEST_CASE("snr gap: identical curves give 0, a 3 dB shift gives 3")
    {
        std::vector<double> snr, hybrid, baseline_same, baseline_shift;
        for (int s = -10; s <= 40; s += 5)
        {
            const double x = static_cast<double>(s);
            snr.push_back(x);
            hybrid.push_back(0.4 * x + 10.0);
            baseline_same.push_back(0.4 * x + 10.0);
            baseline_shift.push_back(0.4 * (x + 3.0) + 10.0);
        }
        const GapReport zero = snr_sweep_gap_db(snr, hybrid, baseline_same);
        CHECK(zero.gap_db == doctest::Approx(0.0).epsilon(1e-12));
        CHECK(zero.points_used > 0);
        const GapReport shifted =
            snr_sweep_gap_db(snr, hybrid, baseline_shift);
        CHECK(shifted.gap_db == doctest::Approx(3.0).epsilon(1e-10));
        CHECK(shifted.points_used == shifted.points_total);
    }

    TEST_CASE("snr gap: skips targets below range, extrapolates above")
    {
        const std::vector<double> snr = {0.0, 10.0, 20.0, 30.0};
        const std::vector<double> hybrid = {10.0, 20.0, 30.0, 40.0};
        // Baseline far below the hybrid curve in the averaged (upper) half:
        // no usable crossing points.
        const std::vector<double> low_baseline = {1.0, 2.0, 3.0, 4.0};
        const GapReport skipped = snr_sweep_gap_db(snr, hybrid, low_baseline);
        CHECK(skipped.points_used == 0);
        CHECK(skipped.points_total == 2);

        // Baseline above the hybrid's top value: the last segment (slope 1
        // rate per dB) extrapolates, so a +5 offset reads as a 5 dB gap.
        const std::vector<double> high_baseline = {15.0, 25.0, 35.0, 45.0};
        const GapReport extrapolated =
            snr_sweep_gap_db(snr, hybrid, high_baseline);
        CHECK(extrapolated.gap_db == doctest::Approx(5.0).epsilon(1e-10));
        CHECK(extrapolated.points_used == 2);
    }

} // TEST_SUITE
