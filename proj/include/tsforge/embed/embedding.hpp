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

#ifndef TSFORGE_EMBED_EMBEDDING_HPP_
#define TSFORGE_EMBED_EMBEDDING_HPP_

#include <map>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "tsforge/core/csv.hpp"
#include "tsforge/core/dataset.hpp"
#include "tsforge/core/error.hpp"

namespace tsforge::embed {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using RowVector = Eigen::RowVectorXd;

enum class SourceTag { real, synthetic };
enum class EmbedMethod { pca, tsne };

inline std::string_view to_string(SourceTag t) { return t == SourceTag::real ? "real" : "synthetic"; }
inline std::string_view to_string(EmbedMethod m) { return m == EmbedMethod::pca ? "pca" : "tsne"; }

inline EmbedMethod parse_embed_method(std::string_view s) {
  if (s == "pca") return EmbedMethod::pca;
  if (s == "tsne") return EmbedMethod::tsne;
  throw ParseError("unknown embedding method '" + std::string(s) + "' (valid: pca, tsne)");
}

struct EmbeddingResult {
  Matrix coords;  // [M, 2]
  std::vector<SourceTag> source_tags;
  EmbedMethod method = EmbedMethod::pca;
  std::map<std::string, double> diagnostics;
};

// [N, T]: each timestep averaged over the feature axis.
inline Matrix feature_average(const Dataset& ds) {
  Matrix out(static_cast<Eigen::Index>(ds.n()), static_cast<Eigen::Index>(ds.length()));
  const double inv = 1.0 / static_cast<double>(ds.dims());
  for (std::size_t i = 0; i < ds.n(); ++i) {
    for (std::size_t t = 0; t < ds.length(); ++t) {
      double s = 0.0;
      for (std::size_t d = 0; d < ds.dims(); ++d) s += ds(i, t, d);
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(t)) = s * inv;
    }
  }
  return out;
}

// Averaged feature vectors of real then synthetic series, with tags.
inline std::pair<Matrix, std::vector<SourceTag>> stack_points(const Dataset& real, const Dataset& synth) {
  if (real.length() != synth.length()) throw DimensionError("real and synthetic series lengths differ");
  Matrix points(static_cast<Eigen::Index>(real.n() + synth.n()), static_cast<Eigen::Index>(real.length()));
  points << feature_average(real), feature_average(synth);
  std::vector<SourceTag> tags(real.n(), SourceTag::real);
  tags.insert(tags.end(), synth.n(), SourceTag::synthetic);
  return {std::move(points), std::move(tags)};
}

namespace detail {

inline std::vector<SourceTag> tags_or_default(std::vector<SourceTag> tags, Eigen::Index rows) {
  if (tags.empty()) tags.assign(static_cast<std::size_t>(rows), SourceTag::real);
  if (tags.size() != static_cast<std::size_t>(rows)) throw DimensionError("source tag count differs from point count");
  return tags;
}

}  // namespace detail

inline void write_embedding_csv(std::ostream& out, const EmbeddingResult& r) {
  out << "x,y,tag\n";
  for (Eigen::Index i = 0; i < r.coords.rows(); ++i) {
    out << csv::format_real(r.coords(i, 0)) << ',' << csv::format_real(r.coords(i, 1)) << ','
        << to_string(r.source_tags[static_cast<std::size_t>(i)]) << '\n';
  }
}

}  // namespace tsforge::embed

#endif  // TSFORGE_EMBED_EMBEDDING_HPP_
