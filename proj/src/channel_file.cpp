// SPDX-License-Identifier: Apache-2.0
//
// mmwave-hbf — link-level simulator for multiuser wideband mmWave hybrid
// beamforming with hierarchical codebooks and block-diagonalization precoding.
// Copyright (C) 2026 mmwave-hbf contributors
//
// Licensed under the Apache License, Version 2.0; see LICENSE for details.
// ------------------------------------------------------------------------

#include "hbf/channel_file.hpp"

#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>

namespace hbf
{

namespace
{

constexpr std::array<char, 8> k_magic = {'M', 'M', 'W', 'C', 'H', '1', '\0', '\0'};

// Largest accepted payload (16 GiB) — guards against corrupted headers
// requesting absurd allocations.
constexpr std::uint64_t k_max_payload_bytes = 1ULL << 34;

static_assert(std::endian::native == std::endian::little,
              "channel file I/O assumes a little-endian host");

void write_u32(std::ofstream &out, std::uint32_t v)
{
    out.write(reinterpret_cast<const char *>(&v), 4);
}

std::uint32_t read_u32(std::ifstream &in, std::uint64_t offset,
                       const char *field)
{
    std::uint32_t v = 0;
    in.read(reinterpret_cast<char *>(&v), 4);
    if (in.gcount() != 4)
        throw format_error("channel file truncated reading header field '" +
                           std::string(field) + "' at byte offset " +
                           std::to_string(offset));
    return v;
}

} // namespace

void save_channel_file(const ChannelTensor &tensor, const std::string &path)
{
    if (tensor.num_users < 1 || tensor.m_ue < 1 || tensor.m_ap < 1 ||
        tensor.num_subcarriers() < 1)
        throw contract_error("save_channel_file: empty tensor");
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw format_error("save_channel_file: cannot open '" + path + "'");
    out.write(k_magic.data(), k_magic.size());
    write_u32(out, static_cast<std::uint32_t>(tensor.num_users));
    write_u32(out, static_cast<std::uint32_t>(tensor.num_subcarriers()));
    write_u32(out, static_cast<std::uint32_t>(tensor.m_ue));
    write_u32(out, static_cast<std::uint32_t>(tensor.m_ap));
    std::vector<double> row_buf(static_cast<std::size_t>(tensor.m_ap) * 2);
    for (int u = 0; u < tensor.num_users; ++u)
        for (int ki = 0; ki < tensor.num_subcarriers(); ++ki)
        {
            const CMat &h = tensor.at(u, ki);
            for (int r = 0; r < tensor.m_ue; ++r)
            {
                for (int c = 0; c < tensor.m_ap; ++c)
                {
                    row_buf[2 * static_cast<std::size_t>(c)] = h(r, c).real();
                    row_buf[2 * static_cast<std::size_t>(c) + 1] = h(r, c).imag();
                }
                out.write(reinterpret_cast<const char *>(row_buf.data()),
                          static_cast<std::streamsize>(row_buf.size() *
                                                       sizeof(double)));
            }
        }
    if (!out)
        throw format_error("save_channel_file: write failed for '" + path + "'");
}

ChannelTensor load_channel_file(const std::string &path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw format_error("load_channel_file: cannot open '" + path + "'");
    std::array<char, 8> magic{};
    in.read(magic.data(), magic.size());
    if (in.gcount() != static_cast<std::streamsize>(magic.size()) ||
        magic != k_magic)
        throw format_error(
            "load_channel_file: bad magic at byte offset 0 (expected MMWCH1)");
    const std::uint32_t num_users = read_u32(in, 8, "U");
    const std::uint32_t num_k = read_u32(in, 12, "K");
    const std::uint32_t m_ue = read_u32(in, 16, "M_ue");
    const std::uint32_t m_ap = read_u32(in, 20, "M_ap");
    if (num_users == 0 || num_k == 0 || m_ue == 0 || m_ap == 0)
        throw format_error("load_channel_file: zero dimension in header "
                           "(byte offsets 8..23)");
    const std::uint64_t entries = static_cast<std::uint64_t>(num_users) * num_k *
                                  m_ue * m_ap;
    if (entries > k_max_payload_bytes / 16)
        throw format_error("load_channel_file: dimension overflow in header "
                           "(payload would exceed the 16 GiB cap)");

    ChannelTensor tensor;
    tensor.num_users = static_cast<int>(num_users);
    tensor.m_ue = static_cast<int>(m_ue);
    tensor.m_ap = static_cast<int>(m_ap);
    tensor.k_indices.resize(num_k);
    for (std::uint32_t k = 0; k < num_k; ++k)
        tensor.k_indices[k] = static_cast<int>(k + 1);
    tensor.matrices.reserve(static_cast<std::size_t>(num_users) * num_k);

    std::uint64_t offset = 24;
    std::vector<double> row_buf(static_cast<std::size_t>(m_ap) * 2);
    const std::streamsize row_bytes =
        static_cast<std::streamsize>(row_buf.size() * sizeof(double));
    for (std::uint32_t u = 0; u < num_users; ++u)
        for (std::uint32_t ki = 0; ki < num_k; ++ki)
        {
            CMat h(m_ue, m_ap);
            for (std::uint32_t r = 0; r < m_ue; ++r)
            {
                in.read(reinterpret_cast<char *>(row_buf.data()), row_bytes);
                if (in.gcount() != row_bytes)
                    throw format_error(
                        "load_channel_file: truncated payload at byte offset " +
                        std::to_string(offset + static_cast<std::uint64_t>(
                                                    in.gcount())));
                for (std::uint32_t c = 0; c < m_ap; ++c)
                    h(static_cast<int>(r), static_cast<int>(c)) =
                        cplx(row_buf[2 * c], row_buf[2 * c + 1]);
                offset += static_cast<std::uint64_t>(row_bytes);
            }
            tensor.matrices.push_back(std::move(h));
        }
    // Trailing bytes usually mean a header/payload mismatch on the producer
    // side; reject rather than ignore.
    char probe = 0;
    in.read(&probe, 1);
    if (in.gcount() == 1)
        throw format_error("load_channel_file: trailing bytes after payload "
                           "at byte offset " + std::to_string(offset));
    return tensor;
}

} // namespace hbf
