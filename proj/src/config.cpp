// SPDX-License-Identifier: Apache-2.0
//
// mmwave-hbf — link-level simulator for multiuser wideband mmWave hybrid
// beamforming with hierarchical codebooks and block-diagonalization precoding.
// Copyright (C) 2026 mmwave-hbf contributors
//
// Licensed under the Apache License, Version 2.0; see LICENSE for details.
// ------------------------------------------------------------------------

#include "hbf/config.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace hbf
{

namespace
{

using nlohmann::json;

void require_positive_int(std::vector<std::string> &out, const char *name,
                          int value)
{
    if (value < 1)
        out.push_back(std::string(name) + " must be >= 1");
}

} // namespace

std::vector<std::string> RunConfig::validate() const
{
    std::vector<std::string> d;
    if (config_id.empty())
        d.push_back("config_id must not be empty");
    if (!(f0_hz > 0.0))
        d.push_back("f0_hz must be positive");
    if (!(fc_hz > 0.0))
        d.push_back("fc_hz must be positive");
    if (!(delta_f_hz > 0.0))
        d.push_back("delta_f_hz must be positive");
    if (num_subcarriers < 2)
        d.push_back("num_subcarriers must be >= 2");
    if (num_pilots < 1 || num_pilots > num_subcarriers)
        d.push_back("num_pilots must lie in [1, num_subcarriers]");
    require_positive_int(d, "m_ap", m_ap);
    require_positive_int(d, "m_ue", m_ue);
    require_positive_int(d, "n_rf", n_rf);
    if (n_rf >= 1 && m_ap >= 1 && m_ap % n_rf != 0)
        d.push_back("n_rf must divide m_ap");
    require_positive_int(d, "training_symbols", training_symbols);
    if (!(element_spacing > 0.0))
        d.push_back("element_spacing must be positive");
    require_positive_int(d, "num_users", num_users);
    if (num_users > n_rf)
        d.push_back("num_users must not exceed n_rf");
    require_positive_int(d, "num_paths", num_paths);
    if (static_cast<int>(power_profile_db.size()) != num_paths)
        d.push_back("power_profile_db must list one value per path");
    if (!(std::abs(coupling_c) < 1.0))
        d.push_back("coupling_c magnitude must be < 1");
    if (realizations < 1)
        d.push_back("realizations must be >= 1");
    if (workers < 0)
        d.push_back("workers must be >= 0");
    for (double s : snr_db)
        if (!std::isfinite(s))
            d.push_back("snr_db entries must be finite");

    switch (scenario)
    {
    case ScenarioMode::full:
    case ScenarioMode::single_user_exhaustive_sta:
        require_positive_int(d, "m_sub", m_sub);
        if (m_sub >= 1 && m_ue >= 1)
        {
            if (m_ue % m_sub != 0)
                d.push_back("m_sub must divide m_ue");
            else if ((m_ue / m_sub) % 2 != 0)
                d.push_back("m_ue/m_sub must be an even integer (the sector "
                            "wrap-around needs a half-step offset)");
        }
        if (scenario == ScenarioMode::single_user_exhaustive_sta &&
            num_users != 1)
            d.push_back("single_user_exhaustive_sta requires num_users = 1");
        break;
    case ScenarioMode::single_antenna_sta:
        if (m_ue != 1)
            d.push_back("single_antenna_sta requires m_ue = 1");
        if (m_sub != 1)
            d.push_back("single_antenna_sta requires m_sub = 1");
        if (num_users != 1)
            d.push_back("single_antenna_sta requires num_users = 1");
        break;
    }
    return d;
}

void RunConfig::validate_or_throw() const
{
    const std::vector<std::string> d = validate();
    if (d.empty())
        return;
    std::ostringstream msg;
    msg << "invalid configuration '" << config_id << "':";
    for (const std::string &line : d)
        msg << "\n  - " << line;
    throw config_error(msg.str());
}

ArrayGeometry RunConfig::ap_geometry() const
{
    return {m_ap, element_spacing, f0_hz};
}

ArrayGeometry RunConfig::ue_geometry() const
{
    return {m_ue, element_spacing, f0_hz};
}

FrequencyGrid RunConfig::frequency_grid() const
{
    return {fc_hz, delta_f_hz, num_subcarriers};
}

ChannelConfig RunConfig::channel_config() const
{
    ChannelConfig cc;
    cc.num_paths = num_paths;
    cc.power_profile_db = power_profile_db;
    cc.coupling_amplitude = coupling_c;
    cc.normalize = true;
    return cc;
}

std::vector<double> RunConfig::snr_grid() const
{
    return snr_db.empty() ? default_snr_grid() : snr_db;
}

std::vector<double> default_snr_grid()
{
    return parse_snr_spec("-10:5:40");
}

std::vector<double> parse_snr_spec(const std::string &spec)
{
    std::vector<std::string> parts;
    std::string token;
    std::istringstream in(spec);
    // ':' splits; a leading '-' belongs to the number.
    while (std::getline(in, token, ':'))
        parts.push_back(token);
    const auto to_double = [&spec](const std::string &s) {
        try
        {
            std::size_t pos = 0;
            const double v = std::stod(s, &pos);
            if (pos != s.size() || !std::isfinite(v))
                throw std::invalid_argument(s);
            return v;
        }
        catch (const std::exception &)
        {
            throw config_error("bad SNR spec '" + spec +
                               "': expected a number or start:step:stop");
        }
    };
    if (parts.size() == 1)
        return {to_double(parts[0])};
    if (parts.size() != 3)
        throw config_error("bad SNR spec '" + spec +
                           "': expected a number or start:step:stop");
    const double start = to_double(parts[0]);
    const double step = to_double(parts[1]);
    const double stop = to_double(parts[2]);
    if (!(step > 0.0))
        throw config_error("bad SNR spec '" + spec + "': step must be > 0");
    if (stop < start)
        throw config_error("bad SNR spec '" + spec + "': stop < start");
    const int count = static_cast<int>(std::floor((stop - start) / step + 1e-9)) + 1;
    std::vector<double> grid(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i)
        grid[static_cast<std::size_t>(i)] = start + step * i;
    return grid;
}

namespace
{

const std::set<std::string> &known_keys()
{
    static const std::set<std::string> keys = {
        "config_id",      "f0_hz",          "fc_hz",
        "delta_f_hz",     "num_subcarriers", "num_pilots",
        "m_ap",           "m_ue",           "m_sub",
        "n_rf",           "training_symbols", "element_spacing",
        "num_users",      "num_paths",      "power_profile_db",
        "coupling_c",     "snr_db",         "realizations",
        "seed",           "scenario",       "compute_rates",
        "genie_csi",      "csi_interpolation", "training_log",
        "workers",        "output_dir",
    };
    return keys;
}

template <typename T>
void read_field(const json &j, const char *key, T &field,
                const std::string &origin)
{
    if (!j.contains(key))
        return;
    try
    {
        field = j.at(key).get<T>();
    }
    catch (const json::exception &e)
    {
        throw config_error(origin + ": bad value for '" + key +
                           "': " + e.what());
    }
}

} // namespace

RunConfig config_from_json_text(const std::string &text,
                                const std::string &origin)
{
    json j;
    try
    {
        j = json::parse(text);
    }
    catch (const json::parse_error &e)
    {
        throw config_error(origin + ": JSON parse error: " + e.what());
    }
    if (!j.is_object())
        throw config_error(origin + ": top-level JSON value must be an object");

    std::vector<std::string> unknown;
    for (const auto &item : j.items())
        if (known_keys().count(item.key()) == 0)
            unknown.push_back(item.key());
    if (!unknown.empty())
    {
        std::string msg = origin + ": unknown configuration keys:";
        for (const std::string &k : unknown)
            msg += " '" + k + "'";
        throw config_error(msg);
    }

    RunConfig c;
    read_field(j, "config_id", c.config_id, origin);
    read_field(j, "f0_hz", c.f0_hz, origin);
    read_field(j, "fc_hz", c.fc_hz, origin);
    read_field(j, "delta_f_hz", c.delta_f_hz, origin);
    read_field(j, "num_subcarriers", c.num_subcarriers, origin);
    read_field(j, "num_pilots", c.num_pilots, origin);
    read_field(j, "m_ap", c.m_ap, origin);
    read_field(j, "m_ue", c.m_ue, origin);
    read_field(j, "m_sub", c.m_sub, origin);
    read_field(j, "n_rf", c.n_rf, origin);
    read_field(j, "training_symbols", c.training_symbols, origin);
    read_field(j, "element_spacing", c.element_spacing, origin);
    read_field(j, "num_users", c.num_users, origin);
    read_field(j, "num_paths", c.num_paths, origin);
    read_field(j, "power_profile_db", c.power_profile_db, origin);
    read_field(j, "coupling_c", c.coupling_c, origin);
    read_field(j, "realizations", c.realizations, origin);
    read_field(j, "seed", c.seed, origin);
    read_field(j, "compute_rates", c.compute_rates, origin);
    read_field(j, "genie_csi", c.genie_csi, origin);
    read_field(j, "training_log", c.training_log, origin);
    read_field(j, "workers", c.workers, origin);
    read_field(j, "output_dir", c.output_dir, origin);

    if (j.contains("snr_db"))
    {
        const json &s = j.at("snr_db");
        if (s.is_string())
            c.snr_db = parse_snr_spec(s.get<std::string>());
        else if (s.is_array())
        {
            try
            {
                c.snr_db = s.get<std::vector<double>>();
            }
            catch (const json::exception &e)
            {
                throw config_error(origin + ": bad value for 'snr_db': " +
                                   e.what());
            }
        }
        else if (s.is_number())
            c.snr_db = {s.get<double>()};
        else
            throw config_error(origin + ": 'snr_db' must be a number, a "
                                        "start:step:stop string, or an array");
    }
    if (j.contains("scenario"))
    {
        std::string name;
        read_field(j, "scenario", name, origin);
        try
        {
            c.scenario = scenario_from_string(name);
        }
        catch (const contract_error &e)
        {
            throw config_error(origin + ": " + e.what());
        }
    }
    if (j.contains("csi_interpolation"))
    {
        std::string name;
        read_field(j, "csi_interpolation", name, origin);
        try
        {
            c.csi_interpolation = csi_interpolation_from_string(name);
        }
        catch (const contract_error &e)
        {
            throw config_error(origin + ": " + e.what());
        }
    }
    return c;
}

RunConfig load_config_file(const std::string &path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw config_error("cannot open config file '" + path + "'");
    std::ostringstream text;
    text << in.rdbuf();
    return config_from_json_text(text.str(), path);
}

std::string canonical_config_json(const RunConfig &config)
{
    json j;
    j["config_id"] = config.config_id;
    j["f0_hz"] = config.f0_hz;
    j["fc_hz"] = config.fc_hz;
    j["delta_f_hz"] = config.delta_f_hz;
    j["num_subcarriers"] = config.num_subcarriers;
    j["num_pilots"] = config.num_pilots;
    j["m_ap"] = config.m_ap;
    j["m_ue"] = config.m_ue;
    j["m_sub"] = config.m_sub;
    j["n_rf"] = config.n_rf;
    j["training_symbols"] = config.training_symbols;
    j["element_spacing"] = config.element_spacing;
    j["num_users"] = config.num_users;
    j["num_paths"] = config.num_paths;
    j["power_profile_db"] = config.power_profile_db;
    j["coupling_c"] = config.coupling_c;
    j["snr_db"] = config.snr_grid();
    j["realizations"] = config.realizations;
    j["seed"] = config.seed;
    j["scenario"] = to_string(config.scenario);
    j["compute_rates"] = config.compute_rates;
    j["genie_csi"] = config.genie_csi;
    j["csi_interpolation"] = to_string(config.csi_interpolation);
    return j.dump();
}

std::uint64_t fnv1a64(std::string_view data)
{
    std::uint64_t hash = 14695981039346656037ULL;
    for (unsigned char byte : data)
    {
        hash ^= byte;
        hash *= 1099511628211ULL;
    }
    return hash;
}

} // namespace hbf
