//
// Copyright 2026 The TSForge Authors
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
//

#ifndef TSFORGE_CORE_SPECTRAL_HPP_
#define TSFORGE_CORE_SPECTRAL_HPP_

#include <cmath>
#include <numbers>
#include <span>
#include <vector>

namespace tsforge {

// Twiddle table for a direct DFT of length T, reused across series.
class DftTable {
 public:
  explicit DftTable(std::size_t length) : length_(length), cos_(length), sin_(length) {
    for (std::size_t m = 0; m < length; ++m) {
      const double angle = 2.0 * std::numbers::pi * static_cast<double>(m) / static_cast<double>(length);
      cos_[m] = std::cos(angle);
      sin_[m] = std::sin(angle);
    }
  }

  std::size_t length() const { return length_; }
  std::size_t n_bins() const { return length_ / 2 + 1; }

  // |X_k|^2 / T for k = 0..floor(T/2); `x` is read with the given stride so a
  // single feature of a series-major block can be passed directly.
  void periodogram(std::span<const double> x, std::size_t stride, std::span<double> out) const {
    for (std::size_t k = 0; k < n_bins(); ++k) {
      double re = 0.0;
      double im = 0.0;
      std::size_t m = 0;
      for (std::size_t t = 0; t < length_; ++t) {
        const double v = x[t * stride];
        re += v * cos_[m];
        im -= v * sin_[m];
        m += k;
        if (m >= length_) m -= length_;
      }
      out[k] = (re * re + im * im) / static_cast<double>(length_);
    }
  }

 private:
  std::size_t length_;
  std::vector<double> cos_;
  std::vector<double> sin_;
};

}  // namespace tsforge

#endif  // TSFORGE_CORE_SPECTRAL_HPP_
