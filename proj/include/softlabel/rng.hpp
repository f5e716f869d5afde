// Copyright 2026 The softlabel Authors
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

#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string_view>

namespace softlabel {

/// SplitMix64 (Steele, Lea, Flood 2014). Every sampler below is defined in
/// terms of `next()` only, so sequences are reproducible in any language:
///
///   uniform01       (next() >> 11) * 2^-53
///   uniform_below   rejection on next() below 2^64 - (2^64 mod n), then mod n
///   normal          Box-Muller cosine branch, u1 = 1 - uniform01(), u2 = uniform01()
///   poisson         Knuth product-of-uniforms, mean split into chunks of <= 16
///   gamma           Marsaglia-Tsang; shape < 1 boosted by u^(1/shape)
///   beta            X/(X+Y) with X ~ gamma(a), Y ~ gamma(b)
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next()
    {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    std::uint64_t uniform_below(std::uint64_t n)
    {
        const std::uint64_t limit = (0 - n) % n;  // 2^64 mod n
        std::uint64_t x = next();
        while (x < limit) {
            x = next();
        }
        return x % n;
    }

    double normal()
    {
        const double u1 = 1.0 - uniform01();
        const double u2 = uniform01();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

    std::uint64_t poisson(double mean)
    {
        std::uint64_t total = 0;
        while (mean > 0.0) {
            const double chunk = mean > 16.0 ? 16.0 : mean;
            mean -= chunk;
            const double limit = std::exp(-chunk);
            double p = uniform01();
            while (p > limit) {
                ++total;
                p *= uniform01();
            }
        }
        return total;
    }

    double gamma(double shape)
    {
        if (shape < 1.0) {
            const double boost = std::pow(1.0 - uniform01(), 1.0 / shape);
            return gamma(shape + 1.0) * boost;
        }
        const double d = shape - 1.0 / 3.0;
        const double c = 1.0 / std::sqrt(9.0 * d);
        for (;;) {
            double x = 0.0;
            double v = 0.0;
            do {
                x = normal();
                v = 1.0 + c * x;
            } while (v <= 0.0);
            v = v * v * v;
            const double u = 1.0 - uniform01();
            if (std::log(u) < 0.5 * x * x + d - d * v + d * std::log(v)) {
                return d * v;
            }
        }
    }

    double beta(double a, double b)
    {
        const double x = gamma(a);
        const double y = gamma(b);
        return x / (x + y);
    }

private:
    std::uint64_t state_;
};

/// FNV-1a, 64-bit.
inline std::uint64_t fnv1a64(std::string_view text)
{
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 0x100000001B3ULL;
    }
    return h;
}

/// Independent substream seed for a labelled unit of work.
inline std::uint64_t derive_seed(std::uint64_t seed, std::string_view label)
{
    return SplitMix64(seed ^ fnv1a64(label)).next();
}

}  // namespace softlabel
