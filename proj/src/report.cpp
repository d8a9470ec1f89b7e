// SPDX-License-Identifier: Apache-2.0
//
// mmwave-hbf — link-level simulator for multiuser wideband mmWave hybrid
// beamforming with hierarchical codebooks and block-diagonalization precoding.
// Copyright (C) 2026 mmwave-hbf contributors
//
// Licensed under the Apache License, Version 2.0; see LICENSE for details.
// ------------------------------------------------------------------------

#include "hbf/report.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>

namespace hbf
{

namespace
{

std::string format_full(double value)
{
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    return buf;
}

std::ofstream open_out(const std::string &path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw format_error("cannot open output file: " + path);
    return out;
}

void dump_codeword(std::ofstream &out, const std::string &name, int index_m,
                   int index_n, const CVec &v)
{
    for (Eigen::Index i = 0; i < v.size(); ++i)
    {
        out << name << ',' << index_m << ',' << index_n << ',' << (i + 1)
            << ',' << format_full(v[i].real()) << ','
            << format_full(v[i].imag()) << '\n';
    }
}

} // namespace

std::string format_double(double value)
{
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", value);
    return buf;
}

void write_results_csv(const std::string &path, const std::string &config_id,
                       const std::vector<SnrPointResult> &points)
{
    std::ofstream out = open_out(path);
    out << "config_id,snr_db,realizations,bser,loss_db,sum_rate_hybrid,"
           "sum_rate_digital_bd,excluded_count\n";
    for (const SnrPointResult &p : points)
    {
        out << config_id << ',' << format_double(p.snr_db) << ','
            << p.realizations << ',' << format_double(p.bser) << ','
            << format_double(p.loss_db) << ','
            << format_double(p.sum_rate_hybrid) << ','
            << format_double(p.sum_rate_digital_bd) << ','
            << p.excluded_count << '\n';
    }
}

void write_per_user_rates_csv(
    const std::string &path, const std::string &config_id,
    const std::vector<SnrPointResult> &points,
    const std::vector<std::vector<double>> &per_user_rates)
{
    if (points.size() != per_user_rates.size())
        throw contract_error("per-user rate table does not match SNR points");
    std::ofstream out = open_out(path);
    out << "config_id,snr_db,user,rate\n";
    for (std::size_t i = 0; i < points.size(); ++i)
    {
        const std::vector<double> &rates = per_user_rates[i];
        for (std::size_t u = 0; u < rates.size(); ++u)
        {
            out << config_id << ',' << format_double(points[i].snr_db) << ','
                << (u + 1) << ',' << format_double(rates[u]) << '\n';
        }
    }
}

void write_training_log_csv(
    const std::string &path,
    const std::vector<std::pair<double, TrainingLog>> &logs)
{
    std::ofstream out = open_out(path);
    out << "snr_db,realization,user,stage,index_a,index_b,objective\n";
    for (const auto &entry : logs)
    {
        for (const TrainingLogRecord &rec : entry.second)
        {
            out << format_double(entry.first) << ",0," << rec.user << ','
                << rec.stage << ',' << rec.index_a << ',' << rec.index_b
                << ',' << format_double(rec.objective) << '\n';
        }
    }
}

CVec codeword_vector(const CMat &p)
{
    if (p.cols() == 1)
        return p.col(0);
    CVec v = p * CVec::Ones(p.cols());
    const double n = v.norm();
    if (n > 0.0)
        v /= n;
    return v;
}

void write_codebook_csv(const std::string &path, const CodebookSet &codebooks)
{
    std::ofstream out = open_out(path);
    out << "codebook_name,index_m,index_n,element_index,real,imag\n";
    for (int m = 1; m <= codebooks.b_ap.M; ++m)
        dump_codeword(out, "orthogonal", m, 0, codebooks.b_ap.B.col(m - 1));
    if (codebooks.b_ue.M > 0 && codebooks.b_ue.M != codebooks.b_ap.M)
    {
        for (int m = 1; m <= codebooks.b_ue.M; ++m)
            dump_codeword(out, "orthogonal_sta", m, 0,
                          codebooks.b_ue.B.col(m - 1));
    }
    const int num_sectors =
        static_cast<int>(codebooks.ap_sector.matrices.size());
    for (int m = 1; m <= num_sectors; ++m)
        dump_codeword(out, "ap_sector", m, 0,
                      codeword_vector(codebooks.ap_sector.matrices[m - 1]));
    for (int m = 1; m <= num_sectors; ++m)
        for (int n = 1; n <= codebooks.ap_narrow.n_rf; ++n)
            dump_codeword(out, "ap_narrow", m, n,
                          codeword_vector(codebooks.ap_narrow.at(m, n)));
    for (int m = 1; m <= codebooks.sta_sector.m_sub; ++m)
        dump_codeword(out, "sta_sector", m, 0,
                      codebooks.sta_sector.G.col(m - 1));
    for (int m = 1; m <= codebooks.sta_narrow.m_sub; ++m)
        for (int n = 1; n <= codebooks.sta_narrow.beams_per_sector; ++n)
            dump_codeword(out, "sta_narrow", m, n,
                          codebooks.sta_narrow.codeword(m, n));
}

void write_pattern_csv(const std::string &path,
                       const std::vector<double> &theta_grid, double f_k_hz,
                       const std::vector<cplx> &psi)
{
    if (theta_grid.size() != psi.size())
        throw contract_error("pattern grid and samples differ in length");
    std::ofstream out = open_out(path);
    out << "theta_rad,f_k_hz,power_dbi\n";
    for (std::size_t i = 0; i < psi.size(); ++i)
    {
        const double power = std::norm(psi[i]);
        double dbi = -400.0;
        if (power > 0.0)
            dbi = std::max(-400.0, 10.0 * std::log10(power));
        out << format_double(theta_grid[i]) << ',' << format_double(f_k_hz)
            << ',' << format_double(dbi) << '\n';
    }
}

std::uint64_t file_fnv1a64(const std::string &path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw format_error("cannot read file for checksum: " + path);
    std::uint64_t hash = 14695981039346656037ULL;
    char buf[4096];
    while (in.read(buf, sizeof(buf)) || in.gcount() > 0)
    {
        const std::streamsize got = in.gcount();
        for (std::streamsize i = 0; i < got; ++i)
        {
            hash ^= static_cast<unsigned char>(buf[i]);
            hash *= 1099511628211ULL;
        }
        if (got < static_cast<std::streamsize>(sizeof(buf)))
            break;
    }
    return hash;
}

std::string utc_timestamp()
{
    const std::time_t now = std::time(nullptr);
    std::tm tm_utc{};
    gmtime_r(&now, &tm_utc);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
    return buf;
}

void write_manifest(const std::string &path, const RunConfig &config,
                    const std::vector<ManifestOutput> &outputs,
                    const std::string &created_utc,
                    const std::string &finished_utc)
{
    nlohmann::json j;
    j["code_version"] = k_code_version;
    const std::string canonical = canonical_config_json(config);
    j["config"] = nlohmann::json::parse(canonical);
    {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%016llx",
                      static_cast<unsigned long long>(fnv1a64(canonical)));
        j["config_hash"] = buf;
    }
    j["seed"] = config.seed;
    j["created_utc"] = created_utc;
    j["finished_utc"] = finished_utc;
    j["outputs"] = nlohmann::json::array();
    for (const ManifestOutput &o : outputs)
    {
        nlohmann::json entry;
        entry["name"] = o.name;
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%016llx",
                      static_cast<unsigned long long>(
                          file_fnv1a64(o.full_path)));
        entry["fnv1a64"] = buf;
        j["outputs"].push_back(entry);
    }
    std::ofstream out = open_out(path);
    out << j.dump(2) << '\n';
}

} // namespace hbf
