// Copyright 2026 The wgs-mbc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef WGS_PHILOX_HPP
#define WGS_PHILOX_HPP

#include <array>
#include <cstdint>

namespace wgs {

/// Philox4x32-10 counter-based generator (Salmon et al. 2011 construction).
struct Philox4x32 {
    using Counter = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    static Counter block(Counter ctr, Key key) {
        for (int r = 0; r < 10; r++) {
            if (r > 0) {
                key[0] += 0x9E3779B9u;
                key[1] += 0xBB67AE85u;
            }
            std::uint64_t p0 = std::uint64_t(0xD2511F53u) * ctr[0];
            std::uint64_t p1 = std::uint64_t(0xCD9E8D57u) * ctr[2];
            ctr = {std::uint32_t(p1 >> 32) ^ ctr[1] ^ key[0], std::uint32_t(p1),
                   std::uint32_t(p0 >> 32) ^ ctr[3] ^ key[1], std::uint32_t(p0)};
        }
        return ctr;
    }
};

/// Stream of uniforms for one substream (seed; a, b, c). Word 0 of the
/// counter is the block index, words 1..3 carry the substream ids.
class PhiloxStream {
   public:
    PhiloxStream(std::uint64_t seed, std::uint32_t a, std::uint32_t b = 0, std::uint32_t c = 0)
        : key_{std::uint32_t(seed), std::uint32_t(seed >> 32)}, ctr_{0, a, b, c} {
    }

    std::uint32_t next_u32() {
        if (pos_ == 4) {
            buf_ = Philox4x32::block(ctr_, key_);
            ctr_[0]++;
            pos_ = 0;
        }
        return buf_[pos_++];
    }

    /// Uniform in [0, 1) with 53 random bits.
    double uniform() {
        std::uint64_t hi = next_u32() >> 5, lo = next_u32() >> 6;
        return (hi * 67108864.0 + lo) * (1.0 / 9007199254740992.0);
    }

   private:
    Philox4x32::Key key_;
    Philox4x32::Counter ctr_;
    Philox4x32::Counter buf_{};
    int pos_ = 4;
};

}  // namespace wgs

#endif
