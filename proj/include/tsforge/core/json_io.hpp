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

#ifndef TSFORGE_CORE_JSON_IO_HPP_
#define TSFORGE_CORE_JSON_IO_HPP_

#include <cmath>
#include <ostream>
#include <sstream>
#include <string>

#include "json.hpp"
#include "tsforge/core/csv.hpp"
#include "tsforge/core/error.hpp"

namespace tsforge {

namespace detail {

template <class Json>
void write_json(std::ostream& out, const Json& j, int indent, int depth) {
  const auto newline = [&](int d) {
    if (indent < 0) return;
    out << '\n' << std::string(static_cast<std::size_t>(indent * d), ' ');
  };
  if (j.is_object()) {
    if (j.empty()) {
      out << "{}";
      return;
    }
    out << '{';
    bool first = true;
    for (auto it = j.begin(); it != j.end(); ++it) {
      if (!first) out << ',';
      first = false;
      newline(depth + 1);
      out << Json(it.key()).dump() << (indent < 0 ? ":" : ": ");
      write_json(out, it.value(), indent, depth + 1);
    }
    newline(depth);
    out << '}';
  } else if (j.is_array()) {
    if (j.empty()) {
      out << "[]";
      return;
    }
    // Arrays of numbers stay on one line.
    bool flat = true;
    for (const auto& v : j) flat = flat && v.is_number();
    out << '[';
    for (std::size_t k = 0; k < j.size(); ++k) {
      if (k > 0) out << (flat && indent >= 0 ? ", " : ",");
      if (!flat) newline(depth + 1);
      write_json(out, j[k], indent, depth + 1);
    }
    if (!flat) newline(depth);
    out << ']';
  } else if (j.is_number_float()) {
    const double v = j.template get<double>();
    if (!std::isfinite(v)) throw NumericError("cannot serialize a non-finite number to JSON");
    out << csv::format_real(v);
  } else {
    out << j.dump();
  }
}

}  // namespace detail

// Serializes `j` with every floating-point value written to 17 significant
// digits. indent < 0 gives a compact single line.
template <class Json>
std::string dump_json(const Json& j, int indent = 2) {
  std::ostringstream out;
  detail::write_json(out, j, indent, 0);
  return out.str();
}

}  // namespace tsforge

#endif  // TSFORGE_CORE_JSON_IO_HPP_
