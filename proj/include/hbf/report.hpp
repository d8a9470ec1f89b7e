// SPDX-License-Identifier: Apache-2.0
//
// mmwave-hbf — link-level simulator for multiuser wideband mmWave hybrid
// beamforming with hierarchical codebooks and block-diagonalization precoding.
// Copyright (C) 2026 mmwave-hbf contributors
//
// Licensed under the Apache License, Version 2.0; see LICENSE for details.
// ------------------------------------------------------------------------

#ifndef HBF_REPORT_HPP
#define HBF_REPORT_HPP

#include "hbf/codebook.hpp"
#include "hbf/config.hpp"
#include "hbf/montecarlo.hpp"

#include <string>
#include <utility>
#include <vector>

namespace hbf
{

inline constexpr const char *k_code_version = "mmwave-hbf 1.0.0";

// Deterministic CSV number formatting ("%.12g"); every emitted byte is a
// pure function of the value.
std::string format_double(double value);

// Results CSV: config_id, snr_db, realizations, bser, loss_db,
// sum_rate_hybrid, sum_rate_digital_bd, excluded_count.
void write_results_csv(const std::string &path, const std::string &config_id,
                       const std::vector<SnrPointResult> &points);

// Long-format per-user hybrid rates (file evaluation output).
void write_per_user_rates_csv(
    const std::string &path, const std::string &config_id,
    const std::vector<SnrPointResult> &points,
    const std::vector<std::vector<double>> &per_user_rates);

// One row per training transmission of the logged realization.
void write_training_log_csv(
    const std::string &path,
    const std::vector<std::pair<double, TrainingLog>> &logs);

// Representative unit-norm excitation of a codebook entry: matrix codewords
// collapse to P * 1 normalized (all chains driven equally), vectors pass
// through unchanged.
CVec codeword_vector(const CMat &p);

// Codebook dump: codebook_name, index_m, index_n, element_index, real, imag
// with full round-trip precision ("%.17g").
void write_codebook_csv(const std::string &path, const CodebookSet &codebooks);

// Radiation-pattern samples: theta_rad, f_k_hz, power_dbi with
// power_dbi = 10 log10 |Psi|^2, clamped at -400 dB for exact nulls.
void write_pattern_csv(const std::string &path,
                       const std::vector<double> &theta_grid, double f_k_hz,
                       const std::vector<cplx> &psi);

// FNV-1a 64-bit checksum of a file's bytes (format_error when unreadable).
std::uint64_t file_fnv1a64(const std::string &path);

// "YYYY-MM-DDTHH:MM:SSZ" (UTC).
std::string utc_timestamp();

// Run manifest JSON: code version, canonical config + hash, seed,
// timestamps, and one checksum entry per emitted output file.
struct ManifestOutput
{
    std::string name;      // as recorded in the manifest
    std::string full_path; // file whose bytes are checksummed
};

void write_manifest(const std::string &path, const RunConfig &config,
                    const std::vector<ManifestOutput> &outputs,
                    const std::string &created_utc,
                    const std::string &finished_utc);

} // namespace hbf

#endif
