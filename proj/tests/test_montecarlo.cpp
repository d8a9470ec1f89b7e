// SPDX-License-Identifier: Apache-2.0
//
// mmwave-hbf — link-level simulator for multiuser wideband mmWave hybrid
// beamforming with hierarchical codebooks and block-diagonalization precoding.
// Copyright (C) 2026 mmwave-hbf contributors
//
// Licensed under the Apache License, Version 2.0; see LICENSE for details.
// ------------------------------------------------------------------------

#include "hbf/montecarlo.hpp"
#include "hbf/report.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

using namespace hbf;

namespace
{

RunConfig small_config()
{
    RunConfig config;
    config.config_id = "unit";
    config.realizations = 25;
    config.snr_db = {0.0, 20.0};
    config.seed = 424242;
    return config;
}

bool points_identical(const std::vector<SnrPointResult> &a,
                      const std::vector<SnrPointResult> &b)
{
    if (a.size() != b.size())
        return false;
    for (std::size_t i = 0; i < a.size(); ++i)
    {
        if (a[i].snr_db != b[i].snr_db || a[i].realizations != b[i].realizations ||
            a[i].user_draws != b[i].user_draws || a[i].errors != b[i].errors ||
            a[i].bser != b[i].bser || a[i].loss_db != b[i].loss_db ||
            a[i].loss_excluded != b[i].loss_excluded ||
            a[i].sum_rate_hybrid != b[i].sum_rate_hybrid ||
            a[i].sum_rate_digital_bd != b[i].sum_rate_digital_bd ||
            a[i].rate_included != b[i].rate_included ||
            a[i].excluded_count != b[i].excluded_count)
            return false;
    }
    return true;
}

std::string read_file(const std::string &path)
{
    std::ifstream in(path, std::ios::binary);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

std::string temp_file(const std::string &name)
{
    return (std::filesystem::temp_directory_path() / name).string();
}

ChannelTensor structured_tensor(int num_users, int K, int m_ue, int m_ap)
{
    // Strongly beam-aligned channels: user u rides AP beam 3u+2 and STA
    // beam 2u+3 of the respective orthogonal sets (plenty of margin).
    const OrthogonalSet b_ap = build_orthogonal_set(m_ap);
    const OrthogonalSet b_ue = build_orthogonal_set(m_ue);
    ChannelTensor t;
    t.num_users = num_users;
    t.m_ue = m_ue;
    t.m_ap = m_ap;
    for (int k = 1; k <= K; ++k)
        t.k_indices.push_back(k);
    for (int u = 0; u < num_users; ++u)
    {
        const CMat h = 8.0 * b_ue.B.col(2 * u + 3) *
                       b_ap.B.col(3 * u + 2).adjoint();
        for (int k = 0; k < K; ++k)
            t.matrices.push_back(h);
    }
    return t;
}

} // namespace

TEST_SUITE("montecarlo")
{

    TEST_CASE("serial and parallel engines produce bit-identical statistics")
    {
        RunConfig config = small_config();
        config.num_users = 2;
        config.compute_rates = true;
        const MonteCarloResult serial =
            run_monte_carlo(config, ExecutionMode::serial);
        const MonteCarloResult parallel =
            run_monte_carlo(config, ExecutionMode::parallel);
        CHECK(points_identical(serial.points, parallel.points));
        REQUIRE(serial.points.size() == 2);
        CHECK(serial.points[0].realizations == 25);
        CHECK(serial.points[0].user_draws == 50);
    }

    TEST_CASE("worker count does not change results")
    {
        RunConfig config = small_config();
        config.num_users = 2;
        config.compute_rates = true;
        config.workers = 1;
        const MonteCarloResult one = run_monte_carlo(config);
        config.workers = 4;
        const MonteCarloResult four = run_monte_carlo(config);
        CHECK(points_identical(one.points, four.points));
    }

    TEST_CASE("channel draws are shared across pilot counts and SNR grids")
    {
        // The fully-digital BD curve depends only on the channel draws, so
        // it exposes the channel stream: different pilot counts and SNR
        // grids must reuse identical channels per realization index.
        RunConfig base = small_config();
        base.num_users = 1;
        base.compute_rates = true;
        base.snr_db = {20.0};

        RunConfig k4 = base;
        k4.num_pilots = 4;
        RunConfig k64 = base;
        k64.num_pilots = 64;
        const MonteCarloResult a = run_monte_carlo(k4);
        const MonteCarloResult b = run_monte_carlo(k64);
        REQUIRE(a.points[0].rate_included == 25);
        REQUIRE(b.points[0].rate_included == 25);
        CHECK(a.points[0].sum_rate_digital_bd ==
              b.points[0].sum_rate_digital_bd);

        RunConfig wide = base;
        wide.num_pilots = 4;
        wide.snr_db = {0.0, 20.0};
        const MonteCarloResult c = run_monte_carlo(wide);
        CHECK(c.points[1].sum_rate_digital_bd ==
              a.points[0].sum_rate_digital_bd);
    }

    TEST_CASE("same config and seed give byte-identical result files")
    {
        RunConfig config = small_config();
        const MonteCarloResult first = run_monte_carlo(config);
        const MonteCarloResult second = run_monte_carlo(config);
        const std::string path_a = temp_file("hbf_results_a.csv");
        const std::string path_b = temp_file("hbf_results_b.csv");
        write_results_csv(path_a, config.config_id, first.points);
        write_results_csv(path_b, config.config_id, second.points);
        const std::string bytes_a = read_file(path_a);
        const std::string bytes_b = read_file(path_b);
        CHECK(!bytes_a.empty());
        CHECK(bytes_a == bytes_b);
        std::filesystem::remove(path_a);
        std::filesystem::remove(path_b);
    }

    TEST_CASE("training log captures realization 0 at every SNR point")
    {
        RunConfig config = small_config();
        config.realizations = 3;
        config.training_log = true;
        const MonteCarloResult result = run_monte_carlo(config);
        REQUIRE(result.training_logs.size() == 2);
        for (const auto &entry : result.training_logs)
        {
            CHECK(!entry.second.empty());
            CHECK(static_cast<int>(entry.second.size()) ==
                  training_transmissions(ScenarioMode::full, 16, 16, 8, 4));
            CHECK(entry.second.front().stage == 1);
        }
        CHECK(result.training_logs[0].first == 0.0);
        CHECK(result.training_logs[1].first == 20.0);
    }

    TEST_CASE("higher SNR never hurts the error statistics on shared channels")
    {
        RunConfig config = small_config();
        config.realizations = 300;
        config.snr_db = {-10.0, 30.0};
        const MonteCarloResult result = run_monte_carlo(config);
        CHECK(result.points[0].bser >= result.points[1].bser);
    }

    TEST_CASE("rejects invalid configurations up front")
    {
        RunConfig config = small_config();
        config.num_users = 5;
        CHECK_THROWS_AS(run_monte_carlo(config), config_error);
    }

    TEST_CASE("file evaluation: aligned channels select exactly and serve all users")
    {
        const ChannelTensor tensor = structured_tensor(2, 8, 16, 16);
        RunConfig config;
        config.config_id = "file-unit";
        config.num_subcarriers = 8;
        config.num_pilots = 4;
        config.num_users = 2;
        config.realizations = 10;
        config.snr_db = {10.0, 20.0};
        config.seed = 5;
        const FileEvaluationResult result =
            evaluate_channel_tensor(tensor, config);
        REQUIRE(result.points.size() == 2);
        REQUIRE(result.oracle.size() == 2);
        // Planted beams: user 0 -> (AP 3, STA 4); user 1 -> (AP 6, STA 6)
        // in 1-based beam indices.
        CHECK(result.oracle[0].l_ap == 3);
        CHECK(result.oracle[0].l_ue == 4);
        CHECK(result.oracle[1].l_ap == 6);
        CHECK(result.oracle[1].l_ue == 6);
        for (const SnrPointResult &p : result.points)
        {
            CHECK(p.bser == 0.0); // strong single-beam channels: no errors
            CHECK(p.excluded_count == 0);
            CHECK(p.sum_rate_hybrid > 0.0);
            CHECK(p.sum_rate_digital_bd > 0.0);
        }
        REQUIRE(result.per_user_rates.size() == 2);
        REQUIRE(result.per_user_rates[0].size() == 2);
        CHECK(result.per_user_rates[0][0] > 0.0);
        // Serial evaluation matches the parallel default.
        const FileEvaluationResult serial =
            evaluate_channel_tensor(tensor, config, ExecutionMode::serial);
        CHECK(points_identical(result.points, serial.points));
    }

    TEST_CASE("file evaluation rejects mismatched dimensions")
    {
        const ChannelTensor tensor = structured_tensor(2, 8, 16, 16);
        RunConfig config;
        config.num_subcarriers = 8;
        config.num_pilots = 4;
        config.num_users = 3; // tensor has 2 users
        config.realizations = 5;
        config.snr_db = {10.0};
        CHECK_THROWS_AS(evaluate_channel_tensor(tensor, config), format_error);
    }

    TEST_CASE("file evaluation with colliding users is infeasible")
    {
        // Both users ride the same AP beam: the analog stage can never
        // serve them simultaneously, so no rate point is computable.
        const OrthogonalSet b_ap = build_orthogonal_set(16);
        const OrthogonalSet b_ue = build_orthogonal_set(16);
        ChannelTensor tensor;
        tensor.num_users = 2;
        tensor.m_ue = 16;
        tensor.m_ap = 16;
        for (int k = 1; k <= 8; ++k)
            tensor.k_indices.push_back(k);
        const CMat h = 8.0 * b_ue.B.col(4) * b_ap.B.col(7).adjoint();
        for (int u = 0; u < 2; ++u)
            for (int k = 0; k < 8; ++k)
                tensor.matrices.push_back(h);
        RunConfig config;
        config.num_subcarriers = 8;
        config.num_pilots = 4;
        config.num_users = 2;
        config.realizations = 5;
        config.snr_db = {30.0};
        CHECK_THROWS_AS(evaluate_channel_tensor(tensor, config),
                        infeasibility_error);
    }

} // TEST_SUITE
