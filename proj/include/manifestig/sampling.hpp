/*
 * Copyright 2026 The manifest-ig Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef MANIFESTIG_SAMPLING_HPP
#define MANIFESTIG_SAMPLING_HPP

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "manifestig/apk.hpp"
#include "manifestig/dataset.hpp"
#include "manifestig/errors.hpp"

namespace manifestig {

// Selection recipe, reproducible across implementations:
//   1. sort the pool ascending by sha256 (filesystem enumeration order is
//      irrelevant from here on),
//   2. run a partial Fisher-Yates shuffle with std::mt19937_64(seed), drawing
//      each index as `gen() % remaining`,
//   3. keep the first n positions, returned in sha256 order.
// mt19937_64 output is bit-exact per the C++ standard, so the same seed picks
// the same samples everywhere.
inline std::vector<std::size_t> sample_pool_indices(std::size_t pool_size, std::size_t n, std::mt19937_64& gen) {
  std::vector<std::size_t> order(pool_size);
  std::iota(order.begin(), order.end(), std::size_t{0});
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(gen() % (pool_size - i));
    std::swap(order[i], order[j]);
  }
  order.resize(n);
  std::sort(order.begin(), order.end());
  return order;
}

struct BalancedSample {
  std::vector<ApkSource> malware;
  std::vector<ApkSource> benign;
};

// Draws n_per_class from each pool. The malware pool consumes the generator
// first; the benign pool continues the same stream.
inline BalancedSample sample_balanced(std::vector<ApkSource> malware_pool, std::vector<ApkSource> benign_pool,
                                      std::size_t n_per_class, std::uint64_t seed) {
  auto check = [&](const std::vector<ApkSource>& pool, ClassLabel label) {
    if (pool.size() < n_per_class) {
      throw Error(Errc::PoolTooSmall, std::string(to_string(label)) + " pool has " + std::to_string(pool.size()) +
                                          " samples, need " + std::to_string(n_per_class));
    }
  };
  check(malware_pool, ClassLabel::Malware);
  check(benign_pool, ClassLabel::Benign);

  auto by_sha = [](const ApkSource& a, const ApkSource& b) { return a.sha256 < b.sha256; };
  std::sort(malware_pool.begin(), malware_pool.end(), by_sha);
  std::sort(benign_pool.begin(), benign_pool.end(), by_sha);

  std::mt19937_64 gen(seed);
  BalancedSample out;
  for (std::size_t i : sample_pool_indices(malware_pool.size(), n_per_class, gen)) {
    out.malware.push_back(malware_pool[i]);
  }
  for (std::size_t i : sample_pool_indices(benign_pool.size(), n_per_class, gen)) {
    out.benign.push_back(benign_pool[i]);
  }
  return out;
}

}  // namespace manifestig

#endif  // MANIFESTIG_SAMPLING_HPP
