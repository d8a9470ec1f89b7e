// SPDX-License-Identifier: Apache-2.0
//
// mmwave-hbf — link-level simulator for multiuser wideband mmWave hybrid
// beamforming with hierarchical codebooks and block-diagonalization precoding.
// Copyright (C) 2026 mmwave-hbf contributors
//
// Licensed under the Apache License, Version 2.0; see LICENSE for details.
// ------------------------------------------------------------------------
//
// hbf command-line front end.
//
//   hbf codebook              dump every codeword of the configured codebooks
//   hbf pattern               radiation-pattern CSVs for selected codewords
//   hbf montecarlo            Monte-Carlo sweep: BSER, misalignment loss, rates
//   hbf evaluate-channel-file run beam selection + precoding on a stored channel
//
// Exit codes: 0 success, 2 configuration error, 3 input-format error,
// 4 runtime infeasibility.

#include "hbf/array.hpp"
#include "hbf/channel_file.hpp"
#include "hbf/codebook.hpp"
#include "hbf/config.hpp"
#include "hbf/montecarlo.hpp"
#include "hbf/report.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace
{

struct CommonOptions
{
    std::string config_path;
    std::string out_dir;
    std::optional<std::uint64_t> seed;
    std::optional<int> realizations;
    std::string snr_spec;
    std::optional<int> workers;
    std::string execution = "parallel";
};

void add_common_options(CLI::App *cmd, CommonOptions &opt, bool with_run_flags)
{
    cmd->add_option("--config", opt.config_path,
                    "JSON configuration file (defaults used when omitted)");
    cmd->add_option("--out", opt.out_dir,
                    "output directory (overrides config output_dir)");
    if (with_run_flags)
    {
        cmd->add_option("--seed", opt.seed, "master seed override");
        cmd->add_option("--realizations", opt.realizations,
                        "Monte-Carlo realization count override");
        cmd->add_option("--snr-db", opt.snr_spec,
                        "SNR grid override: a number or start:step:stop (dB)");
        cmd->add_option("--workers", opt.workers,
                        "worker thread count (0 = all available)");
        cmd->add_option("--execution", opt.execution,
                        "execution mode: parallel (default) or serial")
            ->check(CLI::IsMember({"parallel", "serial"}));
    }
}

hbf::RunConfig resolve_config(const CommonOptions &opt)
{
    hbf::RunConfig config;
    if (!opt.config_path.empty())
        config = hbf::load_config_file(opt.config_path);
    if (opt.seed)
        config.seed = *opt.seed;
    if (opt.realizations)
        config.realizations = *opt.realizations;
    if (!opt.snr_spec.empty())
        config.snr_db = hbf::parse_snr_spec(opt.snr_spec);
    if (opt.workers)
        config.workers = *opt.workers;
    if (!opt.out_dir.empty())
        config.output_dir = opt.out_dir;
    config.validate_or_throw();
    return config;
}

hbf::ExecutionMode resolve_mode(const CommonOptions &opt)
{
    return opt.execution == "serial" ? hbf::ExecutionMode::serial
                                     : hbf::ExecutionMode::parallel;
}

std::string prepare_out_dir(const hbf::RunConfig &config)
{
    std::filesystem::path dir(config.output_dir);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec && !std::filesystem::is_directory(dir))
        throw hbf::config_error("cannot create output directory: " +
                                config.output_dir);
    return dir.string();
}

std::string join_path(const std::string &dir, const std::string &name)
{
    return (std::filesystem::path(dir) / name).string();
}

// "ap_narrow:2,3" -> name + indices; a missing ",n" leaves n = 0.
struct CodewordSelector
{
    std::string name;
    int m = 0;
    int n = 0;
};

CodewordSelector parse_selector(const std::string &text)
{
    const std::size_t colon = text.find(':');
    if (colon == std::string::npos || colon == 0 || colon + 1 >= text.size())
        throw hbf::config_error(
            "codeword selector must look like name:m or name:m,n (got '" +
            text + "')");
    CodewordSelector sel;
    sel.name = text.substr(0, colon);
    std::string rest = text.substr(colon + 1);
    const std::size_t comma = rest.find(',');
    try
    {
        if (comma == std::string::npos)
        {
            sel.m = std::stoi(rest);
        }
        else
        {
            sel.m = std::stoi(rest.substr(0, comma));
            sel.n = std::stoi(rest.substr(comma + 1));
        }
    }
    catch (const std::exception &)
    {
        throw hbf::config_error("codeword selector has non-numeric indices: '" +
                                text + "'");
    }
    return sel;
}

// Resolve a selector against the built codebooks; reports which array side
// (AP or STA) the codeword excites so the right geometry is used.
struct ResolvedCodeword
{
    hbf::CVec vector;
    bool sta_side = false;
    std::string label;
};

ResolvedCodeword resolve_codeword(const hbf::CodebookSet &codebooks,
                                  const CodewordSelector &sel)
{
    ResolvedCodeword out;
    auto require = [&](bool cond, const std::string &what) {
        if (!cond)
            throw hbf::config_error("codeword selector out of range: " + what);
    };
    if (sel.name == "orthogonal")
    {
        require(sel.m >= 1 && sel.m <= codebooks.b_ap.M,
                "orthogonal index m in 1.." + std::to_string(codebooks.b_ap.M));
        out.vector = codebooks.b_ap.B.col(sel.m - 1);
        out.label = "orthogonal_" + std::to_string(sel.m);
    }
    else if (sel.name == "orthogonal_sta")
    {
        require(sel.m >= 1 && sel.m <= codebooks.b_ue.M,
                "orthogonal_sta index m in 1.." +
                    std::to_string(codebooks.b_ue.M));
        out.vector = codebooks.b_ue.B.col(sel.m - 1);
        out.sta_side = true;
        out.label = "orthogonal_sta_" + std::to_string(sel.m);
    }
    else if (sel.name == "ap_sector")
    {
        const int count =
            static_cast<int>(codebooks.ap_sector.matrices.size());
        require(sel.m >= 1 && sel.m <= count,
                "ap_sector index m in 1.." + std::to_string(count));
        out.vector =
            hbf::codeword_vector(codebooks.ap_sector.matrices[sel.m - 1]);
        out.label = "ap_sector_" + std::to_string(sel.m);
    }
    else if (sel.name == "ap_narrow")
    {
        const int count =
            static_cast<int>(codebooks.ap_sector.matrices.size());
        require(sel.m >= 1 && sel.m <= count && sel.n >= 1 &&
                    sel.n <= codebooks.ap_narrow.n_rf,
                "ap_narrow indices (m,n) in 1.." + std::to_string(count) +
                    " x 1.." + std::to_string(codebooks.ap_narrow.n_rf));
        out.vector =
            hbf::codeword_vector(codebooks.ap_narrow.at(sel.m, sel.n));
        out.label = "ap_narrow_" + std::to_string(sel.m) + "_" +
                    std::to_string(sel.n);
    }
    else if (sel.name == "sta_sector")
    {
        require(codebooks.sta_sector.m_sub > 0,
                "sta_sector (this configuration has no STA codebooks)");
        require(sel.m >= 1 && sel.m <= codebooks.sta_sector.m_sub,
                "sta_sector index m in 1.." +
                    std::to_string(codebooks.sta_sector.m_sub));
        out.vector = codebooks.sta_sector.G.col(sel.m - 1);
        out.sta_side = true;
        out.label = "sta_sector_" + std::to_string(sel.m);
    }
    else if (sel.name == "sta_narrow")
    {
        require(codebooks.sta_narrow.m_sub > 0,
                "sta_narrow (this configuration has no STA codebooks)");
        require(sel.m >= 1 && sel.m <= codebooks.sta_narrow.m_sub &&
                    sel.n >= 1 &&
                    sel.n <= codebooks.sta_narrow.beams_per_sector,
                "sta_narrow indices (m,n) in 1.." +
                    std::to_string(codebooks.sta_narrow.m_sub) + " x 1.." +
                    std::to_string(codebooks.sta_narrow.beams_per_sector));
        out.vector = codebooks.sta_narrow.codeword(sel.m, sel.n);
        out.sta_side = true;
        out.label = "sta_narrow_" + std::to_string(sel.m) + "_" +
                    std::to_string(sel.n);
    }
    else
    {
        throw hbf::config_error(
            "unknown codebook name '" + sel.name +
            "' (expected orthogonal, orthogonal_sta, ap_sector, ap_narrow, "
            "sta_sector, or sta_narrow)");
    }
    return out;
}

int run_codebook(const CommonOptions &opt)
{
    const hbf::RunConfig config = resolve_config(opt);
    const std::string dir = prepare_out_dir(config);
    const bool with_sta = config.scenario != hbf::ScenarioMode::single_antenna_sta;
    const hbf::CodebookSet codebooks = hbf::build_codebook_set(
        config.m_ap, config.m_ue, config.m_sub, config.n_rf, with_sta);
    const std::string created = hbf::utc_timestamp();
    const std::string csv_path = join_path(dir, "codebook.csv");
    hbf::write_codebook_csv(csv_path, codebooks);
    hbf::write_manifest(join_path(dir, "manifest.json"), config,
                        {{"codebook.csv", csv_path}}, created,
                        hbf::utc_timestamp());
    std::cout << "wrote " << csv_path << "\n";
    return 0;
}

int run_pattern(const CommonOptions &opt,
                const std::vector<std::string> &selectors,
                std::vector<int> subcarriers, int grid_points)
{
    const hbf::RunConfig config = resolve_config(opt);
    if (selectors.empty())
        throw hbf::config_error("pattern requires at least one --codeword");
    if (grid_points < 2)
        throw hbf::config_error("pattern --grid must be at least 2 points");
    if (subcarriers.empty())
        subcarriers.push_back(config.num_subcarriers / 2 + 1);
    const hbf::FrequencyGrid grid = config.frequency_grid();
    for (int k : subcarriers)
        if (k < 1 || k > grid.num_subcarriers)
            throw hbf::config_error(
                "pattern subcarrier index " + std::to_string(k) +
                " outside 1.." + std::to_string(grid.num_subcarriers));

    const std::string dir = prepare_out_dir(config);
    const bool with_sta = config.scenario != hbf::ScenarioMode::single_antenna_sta;
    const hbf::CodebookSet codebooks = hbf::build_codebook_set(
        config.m_ap, config.m_ue, config.m_sub, config.n_rf, with_sta);
    const hbf::ArrayGeometry ap_geom = config.ap_geometry();
    const hbf::ArrayGeometry ue_geom = config.ue_geometry();
    const hbf::ElementPattern element{};
    const hbf::CouplingModel coupling{hbf::cplx(config.coupling_c, 0.0)};
    const std::vector<double> thetas = hbf::angle_grid(grid_points);

    const std::string created = hbf::utc_timestamp();
    std::vector<hbf::ManifestOutput> outputs;
    for (const std::string &text : selectors)
    {
        const ResolvedCodeword cw =
            resolve_codeword(codebooks, parse_selector(text));
        const hbf::ArrayGeometry &geom = cw.sta_side ? ue_geom : ap_geom;
        for (int k : subcarriers)
        {
            const double f_k = hbf::subcarrier_frequency(grid, k);
            const hbf::CMat S = hbf::coupling_matrix(geom, coupling, f_k);
            const std::vector<hbf::cplx> psi = hbf::radiation_pattern(
                geom, element, S, cw.vector, f_k, thetas);
            const std::string name =
                "pattern_" + cw.label + "_k" + std::to_string(k) + ".csv";
            const std::string path = join_path(dir, name);
            hbf::write_pattern_csv(path, thetas, f_k, psi);
            outputs.push_back({name, path});
        }
    }
    hbf::write_manifest(join_path(dir, "manifest.json"), config, outputs,
                        created, hbf::utc_timestamp());
    std::cout << "wrote " << outputs.size() << " pattern file(s) to " << dir
              << "\n";
    return 0;
}

int run_montecarlo(const CommonOptions &opt)
{
    const hbf::RunConfig config = resolve_config(opt);
    const std::string dir = prepare_out_dir(config);
    const std::string created = hbf::utc_timestamp();
    const hbf::MonteCarloResult result =
        hbf::run_monte_carlo(config, resolve_mode(opt));
    std::vector<hbf::ManifestOutput> outputs;
    const std::string results_path = join_path(dir, "results.csv");
    hbf::write_results_csv(results_path, config.config_id, result.points);
    outputs.push_back({"results.csv", results_path});
    if (config.training_log)
    {
        const std::string log_path = join_path(dir, "training_log.csv");
        hbf::write_training_log_csv(log_path, result.training_logs);
        outputs.push_back({"training_log.csv", log_path});
    }
    hbf::write_manifest(join_path(dir, "manifest.json"), config, outputs,
                        created, hbf::utc_timestamp());
    for (const hbf::SnrPointResult &p : result.points)
    {
        std::cout << "snr_db=" << hbf::format_double(p.snr_db)
                  << " bser=" << hbf::format_double(p.bser)
                  << " loss_db=" << hbf::format_double(p.loss_db);
        if (config.compute_rates)
            std::cout << " sum_rate_hybrid="
                      << hbf::format_double(p.sum_rate_hybrid)
                      << " sum_rate_digital_bd="
                      << hbf::format_double(p.sum_rate_digital_bd);
        std::cout << "\n";
    }
    std::cout << "wrote " << results_path << "\n";
    return 0;
}

int run_evaluate_file(const CommonOptions &opt, const std::string &file)
{
    const hbf::RunConfig config = resolve_config(opt);
    const std::string dir = prepare_out_dir(config);
    const hbf::ChannelTensor tensor = hbf::load_channel_file(file);
    const std::string created = hbf::utc_timestamp();
    const hbf::FileEvaluationResult result =
        hbf::evaluate_channel_tensor(tensor, config, resolve_mode(opt));
    std::vector<hbf::ManifestOutput> outputs;
    const std::string rates_path = join_path(dir, "rates.csv");
    hbf::write_results_csv(rates_path, config.config_id, result.points);
    outputs.push_back({"rates.csv", rates_path});
    const std::string per_user_path = join_path(dir, "rates_per_user.csv");
    hbf::write_per_user_rates_csv(per_user_path, config.config_id,
                                  result.points, result.per_user_rates);
    outputs.push_back({"rates_per_user.csv", per_user_path});
    hbf::write_manifest(join_path(dir, "manifest.json"), config, outputs,
                        created, hbf::utc_timestamp());
    for (std::size_t u = 0; u < result.oracle.size(); ++u)
        std::cout << "user " << (u + 1) << " oracle beams: ap="
                  << result.oracle[u].l_ap << " sta=" << result.oracle[u].l_ue
                  << "\n";
    for (const hbf::SnrPointResult &p : result.points)
        std::cout << "snr_db=" << hbf::format_double(p.snr_db)
                  << " bser=" << hbf::format_double(p.bser)
                  << " sum_rate_hybrid="
                  << hbf::format_double(p.sum_rate_hybrid)
                  << " sum_rate_digital_bd="
                  << hbf::format_double(p.sum_rate_digital_bd) << "\n";
    std::cout << "wrote " << rates_path << "\n";
    return 0;
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"mmwave-hbf: multiuser wideband mmWave hybrid beamforming "
                 "simulator"};
    app.require_subcommand(1);

    CommonOptions codebook_opt;
    CLI::App *codebook_cmd =
        app.add_subcommand("codebook", "dump all configured codewords as CSV");
    add_common_options(codebook_cmd, codebook_opt, false);

    CommonOptions pattern_opt;
    std::vector<std::string> pattern_selectors;
    std::vector<int> pattern_subcarriers;
    int pattern_grid = 2048;
    CLI::App *pattern_cmd = app.add_subcommand(
        "pattern", "radiation-pattern CSVs for selected codewords");
    add_common_options(pattern_cmd, pattern_opt, false);
    pattern_cmd->add_option("--codeword", pattern_selectors,
                            "codeword selector(s), e.g. ap_narrow:2,3");
    pattern_cmd->add_option("--subcarriers", pattern_subcarriers,
                            "subcarrier indices (default: center)");
    pattern_cmd->add_option("--grid", pattern_grid,
                            "angle grid resolution (default 2048)");

    CommonOptions mc_opt;
    CLI::App *mc_cmd = app.add_subcommand(
        "montecarlo", "Monte-Carlo sweep: BSER, misalignment loss, rates");
    add_common_options(mc_cmd, mc_opt, true);

    CommonOptions eval_opt;
    std::string eval_file;
    CLI::App *eval_cmd = app.add_subcommand(
        "evaluate-channel-file",
        "beam selection + precoding on a stored channel tensor");
    add_common_options(eval_cmd, eval_opt, true);
    eval_cmd->add_option("--file", eval_file, "MMWCH1 channel tensor file")
        ->required();

    try
    {
        app.parse(argc, argv);
        if (codebook_cmd->parsed())
            return run_codebook(codebook_opt);
        if (pattern_cmd->parsed())
            return run_pattern(pattern_opt, pattern_selectors,
                               pattern_subcarriers, pattern_grid);
        if (mc_cmd->parsed())
            return run_montecarlo(mc_opt);
        if (eval_cmd->parsed())
            return run_evaluate_file(eval_opt, eval_file);
        return 0;
    }
    catch (const CLI::ParseError &e)
    {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }
    catch (const hbf::config_error &e)
    {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 2;
    }
    catch (const hbf::format_error &e)
    {
        std::cerr << "input format error: " << e.what() << "\n";
        return 3;
    }
    catch (const hbf::infeasibility_error &e)
    {
        std::cerr << "infeasible run: " << e.what() << "\n";
        return 4;
    }
    catch (const std::exception &e)
    {
        std::cerr << "runtime error: " << e.what() << "\n";
        return 4;
    }
}
