// SPDX-License-Identifier: Apache-2.0
//
// mmwave-hbf — link-level simulator for multiuser wideband mmWave hybrid
// beamforming with hierarchical codebooks and block-diagonalization precoding.
// Copyright (C) 2026 mmwave-hbf contributors
//
// Licensed under the Apache License, Version 2.0; see LICENSE for details.
// ------------------------------------------------------------------------

#ifndef HBF_CONFIG_HPP
#define HBF_CONFIG_HPP

#include "hbf/array.hpp"
#include "hbf/beamselect.hpp"
#include "hbf/channel.hpp"
#include "hbf/digital.hpp"

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace hbf
{

// Thrown on malformed or inconsistent run configurations (maps to CLI exit
// code 2; file-format problems use format_error and exit code 3).
class config_error : public std::runtime_error
{
  public:
    explicit config_error(const std::string &msg) : std::runtime_error(msg) {}
};

// One simulation run: OFDM/array dimensions, channel statistics, SNR grid,
// realization budget, and execution switches. Loaded from a JSON file with
// keys named exactly like the fields; every constraint violation produces a
// named diagnostic via validate().
struct RunConfig
{
    std::string config_id = "run";

    // Arrays and OFDM grid
    double f0_hz = 60e9;        // array design frequency
    double fc_hz = 58.32e9;     // carrier (grid center)
    double delta_f_hz = 5156.25e3;
    int num_subcarriers = 512;  // K
    int num_pilots = 16;        // K_tx
    int m_ap = 16;
    int m_ue = 16;
    int m_sub = 8;
    int n_rf = 4;
    int training_symbols = 64;  // T
    double element_spacing = 0.5;

    // Users and channel statistics
    int num_users = 1;          // U
    int num_paths = 1;          // L
    std::vector<double> power_profile_db = {0.0};
    double coupling_c = 0.1;

    // Evaluation
    std::vector<double> snr_db; // empty -> default_snr_grid()
    int realizations = 10000;
    std::uint64_t seed = 1;
    ScenarioMode scenario = ScenarioMode::full;
    bool compute_rates = false;
    bool genie_csi = false;
    CsiInterpolation csi_interpolation = CsiInterpolation::linear;
    bool training_log = false;
    int workers = 0;            // 0 = library default
    std::string output_dir = ".";

    // Empty result means the configuration is valid; otherwise one line per
    // violated constraint.
    std::vector<std::string> validate() const;

    // Throw config_error listing every diagnostic.
    void validate_or_throw() const;

    ArrayGeometry ap_geometry() const;
    ArrayGeometry ue_geometry() const;
    FrequencyGrid frequency_grid() const;
    ChannelConfig channel_config() const;
    std::vector<double> snr_grid() const; // snr_db or the default grid
};

// -10:5:40 dB.
std::vector<double> default_snr_grid();

// "start:step:stop" (inclusive) or a single number.
std::vector<double> parse_snr_spec(const std::string &spec);

// Parse/serialize. origin labels error messages (file path or "<flags>").
RunConfig config_from_json_text(const std::string &text,
                                const std::string &origin);
RunConfig load_config_file(const std::string &path);

// Canonical serialization of the result-determining fields (sorted keys, no
// whitespace); workers/output_dir/training_log are plumbing and excluded.
std::string canonical_config_json(const RunConfig &config);

// FNV-1a 64-bit hash (config hashes, output checksums).
std::uint64_t fnv1a64(std::string_view data);

} // namespace hbf

#endif
