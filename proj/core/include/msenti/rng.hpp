// Copyright 2026 The msenti Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef MSENTI_RNG_HPP
#define MSENTI_RNG_HPP

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>

namespace msenti {

/**
 * xoshiro256** pseudo-random generator, seeded through splitmix64.
 *
 * Every random decision in the toolkit (splits, shuffles, initialization,
 * synthetic data) goes through this type so that results are bit-identical
 * across platforms and standard libraries. The std distributions and
 * std::shuffle are deliberately not used: their output is implementation
 * defined.
 */
class Xoshiro256 {
public:
    using result_type = std::uint64_t;

    explicit Xoshiro256(std::uint64_t seed);

    std::uint64_t next();
    std::uint64_t operator()() { return next(); }

    /// Uniform double in [0, 1) with 53 bits of randomness.
    double uniform();
    /// Uniform double in [lo, hi).
    double uniform(double lo, double hi);
    /// Uniform integer in [0, bound). bound must be > 0. Unbiased (rejection).
    std::uint64_t below(std::uint64_t bound);

    /// Fisher-Yates shuffle driven by below().
    template <typename T>
    void shuffle(std::span<T> items) {
        for (std::size_t i = items.size(); i > 1; --i) {
            const auto j = static_cast<std::size_t>(below(i));
            using std::swap;
            swap(items[i - 1], items[j]);
        }
    }

    static constexpr std::uint64_t min() { return 0; }
    static constexpr std::uint64_t max() { return ~std::uint64_t{0}; }

private:
    std::array<std::uint64_t, 4> s_{};
};

} // namespace msenti

#endif // MSENTI_RNG_HPP
