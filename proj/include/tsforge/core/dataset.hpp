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

#ifndef TSFORGE_CORE_DATASET_HPP_
#define TSFORGE_CORE_DATASET_HPP_

#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "tsforge/core/error.hpp"

namespace tsforge {

enum class LabelKind { none, static_class, temporal };

struct DatasetLabels {
  std::optional<std::vector<int>> static_labels;       // [N]
  std::optional<std::vector<double>> temporal_labels;  // [N * T], series-major

  bool operator==(const DatasetLabels&) const = default;
};

/*
 * N series x T timesteps x D features, stored series-major: value (i, t, d)
 * lives at index (i * T + t) * D + d. Optionally carries one class id per
 * series or one condition value per timestep, never both.
 *
 * Instances are immutable once constructed; every transform in the library
 * returns a new Dataset.
 */
class Dataset {
 public:
  Dataset(std::size_t n, std::size_t length, std::size_t dims, std::vector<double> values,
          DatasetLabels labels = {}, std::vector<std::string> feature_names = {})
      : n_(n),
        length_(length),
        dims_(dims),
        values_(std::move(values)),
        labels_(std::move(labels)),
        feature_names_(std::move(feature_names)) {
    validate();
  }

  std::size_t n() const { return n_; }
  std::size_t length() const { return length_; }
  std::size_t dims() const { return dims_; }
  std::size_t series_size() const { return length_ * dims_; }

  double operator()(std::size_t i, std::size_t t, std::size_t d) const {
    return values_[(i * length_ + t) * dims_ + d];
  }

  std::span<const double> values() const { return values_; }

  std::span<const double> series(std::size_t i) const {
    return std::span<const double>(values_).subspan(i * series_size(), series_size());
  }

  LabelKind label_kind() const {
    if (labels_.static_labels) return LabelKind::static_class;
    if (labels_.temporal_labels) return LabelKind::temporal;
    return LabelKind::none;
  }
  bool has_static_labels() const { return labels_.static_labels.has_value(); }
  bool has_temporal_labels() const { return labels_.temporal_labels.has_value(); }

  const std::vector<int>& static_labels() const {
    if (!labels_.static_labels) throw PreconditionError("dataset has no static labels");
    return *labels_.static_labels;
  }
  const std::vector<double>& temporal_labels() const {
    if (!labels_.temporal_labels) throw PreconditionError("dataset has no temporal labels");
    return *labels_.temporal_labels;
  }
  std::span<const double> temporal_path(std::size_t i) const {
    return std::span<const double>(temporal_labels()).subspan(i * length_, length_);
  }
  const DatasetLabels& labels() const { return labels_; }

  const std::vector<std::string>& feature_names() const { return feature_names_; }

  friend bool operator==(const Dataset&, const Dataset&) = default;

 private:
  void validate() {
    if (n_ < 1 || length_ < 1 || dims_ < 1) {
      throw DimensionError("dataset requires N >= 1, T >= 1, D >= 1");
    }
    if (values_.size() != n_ * length_ * dims_) {
      throw DimensionError("dataset value count does not equal N * T * D");
    }
    for (double v : values_) {
      if (!std::isfinite(v)) throw NumericError("dataset contains a non-finite value");
    }
    if (labels_.static_labels && labels_.temporal_labels) {
      throw PreconditionError("a dataset carries static or temporal labels, not both");
    }
    if (labels_.static_labels && labels_.static_labels->size() != n_) {
      throw DimensionError("static label count does not equal N");
    }
    if (labels_.temporal_labels) {
      if (labels_.temporal_labels->size() != n_ * length_) {
        throw DimensionError("temporal label count does not equal N * T");
      }
      for (double v : *labels_.temporal_labels) {
        if (!std::isfinite(v)) throw NumericError("temporal labels contain a non-finite value");
      }
    }
    if (feature_names_.empty()) {
      feature_names_.reserve(dims_);
      for (std::size_t d = 0; d < dims_; ++d) feature_names_.push_back("f" + std::to_string(d));
    } else if (feature_names_.size() != dims_) {
      throw DimensionError("feature name count does not equal D");
    }
  }

  std::size_t n_;
  std::size_t length_;
  std::size_t dims_;
  std::vector<double> values_;
  DatasetLabels labels_;
  std::vector<std::string> feature_names_;
};

// Accumulates series one at a time; used by every operation that emits a
// dataset of a known (T, D) and label form.
class DatasetBuilder {
 public:
  DatasetBuilder(std::size_t length, std::size_t dims, LabelKind kind,
                 std::vector<std::string> feature_names = {})
      : length_(length), dims_(dims), kind_(kind), feature_names_(std::move(feature_names)) {}

  explicit DatasetBuilder(const Dataset& like)
      : DatasetBuilder(like.length(), like.dims(), like.label_kind(), like.feature_names()) {}

  void add(std::span<const double> series, int static_label = 0,
           std::span<const double> temporal_path = {}) {
    if (series.size() != length_ * dims_) throw DimensionError("series has wrong size");
    values_.insert(values_.end(), series.begin(), series.end());
    if (kind_ == LabelKind::static_class) {
      static_.push_back(static_label);
    } else if (kind_ == LabelKind::temporal) {
      if (temporal_path.size() != length_) throw DimensionError("temporal path has wrong length");
      temporal_.insert(temporal_.end(), temporal_path.begin(), temporal_path.end());
    }
    ++count_;
  }

  // Copies series i of `source` including its label.
  void add_from(const Dataset& source, std::size_t i) {
    add(source.series(i), source.has_static_labels() ? source.static_labels()[i] : 0,
        source.has_temporal_labels() ? source.temporal_path(i) : std::span<const double>{});
  }

  std::size_t count() const { return count_; }

  Dataset build() && {
    DatasetLabels labels;
    if (kind_ == LabelKind::static_class) labels.static_labels = std::move(static_);
    if (kind_ == LabelKind::temporal) labels.temporal_labels = std::move(temporal_);
    return Dataset(count_, length_, dims_, std::move(values_), std::move(labels),
                   std::move(feature_names_));
  }

 private:
  std::size_t length_;
  std::size_t dims_;
  LabelKind kind_;
  std::vector<std::string> feature_names_;
  std::vector<double> values_;
  std::vector<int> static_;
  std::vector<double> temporal_;
  std::size_t count_ = 0;
};

inline Dataset select(const Dataset& ds, std::span<const std::size_t> indices) {
  DatasetBuilder builder(ds);
  for (std::size_t i : indices) {
    if (i >= ds.n()) throw DimensionError("series index out of range");
    builder.add_from(ds, i);
  }
  return std::move(builder).build();
}

// Series of `b` appended after those of `a`. Shapes and label forms must agree.
inline Dataset concat(const Dataset& a, const Dataset& b) {
  if (a.length() != b.length() || a.dims() != b.dims()) {
    throw DimensionError("concat requires equal (T, D)");
  }
  if (a.label_kind() != b.label_kind()) {
    throw PreconditionError("concat requires the same label form on both datasets");
  }
  DatasetBuilder builder(a);
  for (std::size_t i = 0; i < a.n(); ++i) builder.add_from(a, i);
  for (std::size_t i = 0; i < b.n(); ++i) builder.add_from(b, i);
  return std::move(builder).build();
}

inline Dataset without_labels(const Dataset& ds) {
  return Dataset(ds.n(), ds.length(), ds.dims(),
                 std::vector<double>(ds.values().begin(), ds.values().end()), {},
                 ds.feature_names());
}

inline Dataset with_values(const Dataset& like, std::vector<double> values) {
  return Dataset(like.n(), like.length(), like.dims(), std::move(values), like.labels(),
                 like.feature_names());
}

}  // namespace tsforge

#endif  // TSFORGE_CORE_DATASET_HPP_
