// Copyright 2026 The sidlab Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SIDLAB_SRC_IMAGE_ENUMERATOR_H_
#define SIDLAB_SRC_IMAGE_ENUMERATOR_H_

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <limits>
#include <thread>
#include <vector>

#include "sidlab/error.h"
#include "sidlab/functional.h"
#include "sidlab/linalg.h"

namespace sidlab::detail {

// Leaves per reduction block. Blocks are summed sequentially and their
// partial sums are combined in block order, independent of thread count.
inline constexpr std::uint64_t kBlock = 4096;

// Enumerates z in (F_p^n)^m together with the t images
// x_i = sum_j coeffs[i][j] z_j in F_p^n (as grid indices). Each of the n
// coordinates is an independent copy of the scalar map, so one "digit" of the
// enumeration ranges over F_p^m and contributes table[w][i] * p^d to x_i.
class ImageEnumerator {
 public:
  ImageEnumerator(const ModMatrix& coeffs, std::size_t m, std::int64_t p,
                  std::size_t n)
      : t_(coeffs.size()), n_(n) {
    const auto up = static_cast<std::uint64_t>(p);
    base_ = 1;
    for (std::size_t j = 0; j < m; ++j) base_ = mul_sat(base_, up);
    if (base_ > std::uint64_t{1} << 24) {
      throw Error(ErrorCode::kBudgetExceeded, "too many free variables");
    }
    count_ = 1;
    for (std::size_t d = 0; d < n; ++d) count_ = mul_sat(count_, base_);
    table_.assign(base_ * t_, 0);
    std::vector<std::int64_t> w(m, 0);
    for (std::uint64_t combo = 0; combo < base_; ++combo) {
      std::uint64_t rest = combo;
      for (std::size_t j = 0; j < m; ++j) {
        w[j] = static_cast<std::int64_t>(rest % up);
        rest /= up;
      }
      for (std::size_t i = 0; i < t_; ++i) {
        std::int64_t acc = 0;
        for (std::size_t j = 0; j < m; ++j) acc += coeffs[i][j] * w[j];
        acc %= p;
        if (acc < 0) acc += p;
        table_[combo * t_ + i] = static_cast<std::uint64_t>(acc);
      }
    }
    place_.resize(n);
    std::uint64_t pl = 1;
    for (std::size_t d = 0; d < n; ++d) {
      place_[d] = pl;
      pl *= up;
    }
  }

  // Saturates at UINT64_MAX.
  std::uint64_t count() const noexcept { return count_; }

  void check_budget(std::uint64_t budget, const char* what) const {
    if (count_ > budget) {
      throw Error(ErrorCode::kBudgetExceeded,
                  std::string(what) + " needs " +
                      (count_ == std::numeric_limits<std::uint64_t>::max()
                           ? std::string("more than 2^64")
                           : std::to_string(count_)) +
                      " points, budget is " + std::to_string(budget));
    }
  }

  // Sums leaf(x) over every point, x pointing at the t image indices.
  template <class Acc, class Leaf>
  Acc reduce(const EvalOptions& opts, Leaf&& leaf) const {
    const std::uint64_t blocks = (count_ + kBlock - 1) / kBlock;
    std::vector<Acc> partial(blocks);
    auto run_block = [&](std::uint64_t b) {
      const std::uint64_t start = b * kBlock;
      const std::uint64_t end = std::min(count_, start + kBlock);
      std::vector<std::uint64_t> digit(n_);
      std::uint64_t rest = start;
      for (std::size_t d = 0; d < n_; ++d) {
        digit[d] = rest % base_;
        rest /= base_;
      }
      std::vector<std::uint64_t> x(t_, 0);
      for (std::size_t d = 0; d < n_; ++d) {
        for (std::size_t i = 0; i < t_; ++i) {
          x[i] += table_[digit[d] * t_ + i] * place_[d];
        }
      }
      Acc acc{};
      for (std::uint64_t leaf_index = start; leaf_index < end; ++leaf_index) {
        acc += leaf(x.data());
        for (std::size_t d = 0; d < n_; ++d) {
          const std::uint64_t old = digit[d];
          const std::uint64_t next = old + 1 == base_ ? 0 : old + 1;
          for (std::size_t i = 0; i < t_; ++i) {
            x[i] = x[i] - table_[old * t_ + i] * place_[d] +
                   table_[next * t_ + i] * place_[d];
          }
          digit[d] = next;
          if (next != 0) break;
        }
      }
      partial[b] = acc;
    };

    const unsigned workers = static_cast<unsigned>(
        std::min<std::uint64_t>(std::max(1u, opts.threads), blocks));
    if (workers <= 1) {
      for (std::uint64_t b = 0; b < blocks; ++b) run_block(b);
    } else {
      std::atomic<std::uint64_t> next{0};
      std::vector<std::thread> pool;
      for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
          for (std::uint64_t b = next++; b < blocks; b = next++) run_block(b);
        });
      }
      for (auto& th : pool) th.join();
    }
    Acc total{};
    for (const auto& part : partial) total += part;
    return total;
  }

 private:
  static std::uint64_t mul_sat(std::uint64_t a, std::uint64_t b) {
    if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a) {
      return std::numeric_limits<std::uint64_t>::max();
    }
    return a * b;
  }

  std::size_t t_;
  std::size_t n_;
  std::uint64_t base_ = 1;
  std::uint64_t count_ = 1;
  std::vector<std::uint64_t> table_;
  std::vector<std::uint64_t> place_;
};

}  // namespace sidlab::detail

#endif  // SIDLAB_SRC_IMAGE_ENUMERATOR_H_
