// Copyright 2026 The relaylab Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>

namespace relaylab
{
/*!
 * Philox4x32-10 counter-based bijection (Salmon et al., SC 2011).
 *
 * Maps a 128-bit counter and 64-bit key to 128 random bits with no state,
 * so any element of a stream can be computed independently of the others.
 */
class Philox4x32
{
  public:
    using Counter = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    static constexpr Counter generate(Counter ctr, Key key)
    {
        for (int round = 0; round < 10; ++round)
        {
            if (round > 0)
            {
                key[0] += 0x9E3779B9u;
                key[1] += 0xBB67AE85u;
            }
            std::uint64_t const p0 = std::uint64_t{0xD2511F53u} * ctr[0];
            std::uint64_t const p1 = std::uint64_t{0xCD9E8D57u} * ctr[2];
            ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0],
                   static_cast<std::uint32_t>(p1),
                   static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1],
                   static_cast<std::uint32_t>(p0)};
        }
        return ctr;
    }
};

/*!
 * Uniform variates for one (seed, slot, stream) coordinate.
 *
 * The 128-bit Philox counter is laid out as (slot lo, slot hi, stream, block)
 * and the key is the 64-bit seed. Each block yields two doubles, so the
 * sequence returned by successive `uniform()` calls depends only on the
 * coordinate, never on what other coordinates were drawn before.
 */
class CounterStream
{
  public:
    constexpr CounterStream(std::uint64_t seed, std::uint64_t slot, std::uint32_t stream)
        : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)}
        , ctr_{static_cast<std::uint32_t>(slot), static_cast<std::uint32_t>(slot >> 32), stream, 0}
    {
    }

    //! Uniform double in the open interval (0, 1).
    constexpr double uniform()
    {
        if (next_ == 2)
            refill();
        std::uint64_t const bits = buffer_[next_++];
        return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
    }

  private:
    constexpr void refill()
    {
        auto const out = Philox4x32::generate(ctr_, key_);
        buffer_[0] = (std::uint64_t{out[1]} << 32) | out[0];
        buffer_[1] = (std::uint64_t{out[3]} << 32) | out[2];
        ++ctr_[3];
        next_ = 0;
    }

    Philox4x32::Key key_;
    Philox4x32::Counter ctr_;
    std::array<std::uint64_t, 2> buffer_{};
    int next_ = 2;
};

}  // namespace relaylab
