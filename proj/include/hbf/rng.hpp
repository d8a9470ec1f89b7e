// SPDX-License-Identifier: Apache-2.0
//
// mmwave-hbf — link-level simulator for multiuser wideband mmWave hybrid
// beamforming with hierarchical codebooks and block-diagonalization precoding.
// Copyright (C) 2026 mmwave-hbf contributors
//
// Licensed under the Apache License, Version 2.0; see LICENSE for details.
// ------------------------------------------------------------------------

#ifndef HBF_RNG_HPP
#define HBF_RNG_HPP

#include "hbf/common.hpp"

#include <cstdint>
#include <random>

namespace hbf
{

// SplitMix64 finalizer; used to whiten/combine seed material so that
// structured (master_seed, stream, index) tuples yield well-separated
// generator states.
inline std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Derive an independent stream seed from a master seed and up to three
// stream coordinates (e.g. purpose tag, SNR index, realization index).
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a,
                                 std::uint64_t b = 0, std::uint64_t c = 0)
{
    std::uint64_t s = splitmix64(master ^ 0x6a09e667f3bcc908ULL);
    s = splitmix64(s ^ a);
    s = splitmix64(s ^ b);
    return splitmix64(s ^ c);
}

// Deterministic random stream. Normal variates use an explicit Box-Muller
// transform (not std::normal_distribution, whose output is implementation
// defined) so that results are bit-identical across standard libraries.
class Rng
{
  public:
    explicit Rng(std::uint64_t seed) : gen_(splitmix64(seed)) {}

    // Uniform double in [0, 1) with 53 random bits.
    double uniform()
    {
        return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    }

    // Uniform double in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Standard normal pair via Box-Muller.
    void normal_pair(double &n1, double &n2)
    {
        double u1 = uniform();
        while (u1 <= 0.0)
            u1 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double t = 2.0 * pi * uniform();
        n1 = r * std::cos(t);
        n2 = r * std::sin(t);
    }

    double normal()
    {
        double n1, n2;
        normal_pair(n1, n2);
        return n1;
    }

    // Circularly-symmetric complex Gaussian CN(0, var).
    cplx cnormal(double var)
    {
        double n1, n2;
        normal_pair(n1, n2);
        const double s = std::sqrt(var / 2.0);
        return {s * n1, s * n2};
    }

    // Uniform integer in [0, n).
    std::uint64_t uniform_int(std::uint64_t n)
    {
        // Rejection-free modulo is biased for large n; n here is always tiny
        // (QPSK symbols, small index draws), so 64-bit modulo bias is < 2^-60.
        return gen_() % n;
    }

    std::uint64_t raw() { return gen_(); }

  private:
    std::mt19937_64 gen_;
};

} // namespace hbf

#endif
