// SPDX-License-Identifier: Apache-2.0
//
// mmwave-hbf — link-level simulator for multiuser wideband mmWave hybrid
// beamforming with hierarchical codebooks and block-diagonalization precoding.
// Copyright (C) 2026 mmwave-hbf contributors
//
// Licensed under the Apache License, Version 2.0; see LICENSE for details.
// ------------------------------------------------------------------------

#ifndef HBF_CHANNEL_FILE_HPP
#define HBF_CHANNEL_FILE_HPP

#include "hbf/channel.hpp"

#include <string>

namespace hbf
{

// Binary channel-tensor container (externally computed channels, e.g. from a
// ray tracer):
//   bytes 0..7   magic "MMWCH1\0\0"
//   bytes 8..23  four little-endian uint32: U, K, M_ue, M_ap
//   payload      complex entries as little-endian float64 (real, imag) pairs,
//                u-major, then k, then row-major within each M_ue x M_ap matrix
// Loaded tensors always carry k_indices = 1..K.

void save_channel_file(const ChannelTensor &tensor, const std::string &path);

// Throws format_error (with the failing byte offset) on malformed magic,
// truncated payload, or implausible dimensions.
ChannelTensor load_channel_file(const std::string &path);

} // namespace hbf

#endif
