// Copyright 2026 The dpiov Authors
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

#include "dpiov/domain.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <sstream>

namespace dpiov {
namespace {

std::string_view Trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> SplitCsv(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(Trim(line.substr(start)));
      break;
    }
    fields.push_back(Trim(line.substr(start, comma - start)));
    start = comma + 1;
  }
  return fields;
}

std::optional<double> ParseNumber(std::string_view s) {
  double v = 0;
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end || !std::isfinite(v)) return std::nullopt;
  return v;
}

int Log2Exact(std::int64_t v) {
  int bits = 0;
  while ((std::int64_t{1} << bits) < v) ++bits;
  return bits;
}

}  // namespace

bool IsPowerOfTwo(std::int64_t v) { return v > 0 && (v & (v - 1)) == 0; }

Domain::Domain(std::vector<Attribute> attributes)
    : attributes_(std::move(attributes)) {
  if (attributes_.empty()) {
    throw std::invalid_argument("domain needs at least one attribute");
  }
  for (const auto& a : attributes_) {
    if (a.cardinality < 1) {
      throw std::invalid_argument("attribute '" + a.name +
                                  "' has cardinality < 1");
    }
    if (total_size_ > (std::int64_t{1} << 40) / a.cardinality) {
      throw std::invalid_argument("domain too large");
    }
    total_size_ *= a.cardinality;
  }
}

Domain Domain::FromShape(std::span<const std::int64_t> shape) {
  std::vector<Attribute> attrs;
  for (std::size_t i = 0; i < shape.size(); ++i) {
    attrs.push_back({"a" + std::to_string(i), shape[i]});
  }
  return Domain(std::move(attrs));
}

Domain Domain::Parse(std::string_view label) {
  label = Trim(label);
  std::vector<std::int64_t> shape;
  const auto caret = label.find('^');
  auto parse_int = [&](std::string_view s) {
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || v < 1) {
      throw std::invalid_argument("bad domain label '" + std::string(label) + "'");
    }
    return v;
  };
  if (caret != std::string_view::npos) {
    const std::int64_t base = parse_int(label.substr(0, caret));
    const std::int64_t count = parse_int(label.substr(caret + 1));
    shape.assign(static_cast<std::size_t>(count), base);
  } else {
    std::size_t start = 0;
    while (true) {
      const auto x = label.find('x', start);
      shape.push_back(parse_int(label.substr(start, x - start)));
      if (x == std::string_view::npos) break;
      start = x + 1;
    }
  }
  return FromShape(shape);
}

std::int64_t Domain::CellIndex(std::span<const std::int64_t> coordinates) const {
  if (coordinates.size() != attributes_.size()) {
    throw std::invalid_argument("coordinate arity does not match domain");
  }
  std::int64_t cell = 0;
  for (std::size_t i = 0; i < attributes_.size(); ++i) {
    if (coordinates[i] < 0 || coordinates[i] >= attributes_[i].cardinality) {
      throw std::out_of_range("coordinate out of range for '" +
                              attributes_[i].name + "'");
    }
    cell = cell * attributes_[i].cardinality + coordinates[i];
  }
  return cell;
}

std::vector<std::int64_t> Domain::Coordinates(std::int64_t cell) const {
  if (cell < 0 || cell >= total_size_) throw std::out_of_range("cell index out of range");
  std::vector<std::int64_t> coords(attributes_.size());
  for (std::size_t i = attributes_.size(); i-- > 0;) {
    coords[i] = cell % attributes_[i].cardinality;
    cell /= attributes_[i].cardinality;
  }
  return coords;
}

std::string Domain::Label() const {
  std::string out;
  for (std::size_t i = 0; i < attributes_.size(); ++i) {
    if (i) out += 'x';
    out += std::to_string(attributes_[i].cardinality);
  }
  return out;
}

DataVector::DataVector(Domain domain, Eigen::VectorXd counts)
    : domain_(std::move(domain)), counts_(std::move(counts)) {
  if (counts_.size() != domain_.total_size()) {
    throw std::invalid_argument("data vector length " +
                                std::to_string(counts_.size()) +
                                " does not match domain size " +
                                std::to_string(domain_.total_size()));
  }
  if ((counts_.array() < 0).any() || !counts_.allFinite()) {
    throw std::invalid_argument("data vector counts must be finite and non-negative");
  }
}

DataVector::DataVector(Domain domain)
    : DataVector(domain, Eigen::VectorXd::Zero(domain.total_size())) {}

Binning Binning::Uniform(double lo, double hi, int bins) {
  if (!(hi > lo) || bins < 1) throw std::invalid_argument("bad uniform binning");
  Binning b;
  for (int i = 0; i <= bins; ++i) b.edges.push_back(lo + (hi - lo) * i / bins);
  return b;
}

Binning Binning::Levels(std::int64_t k) {
  if (k < 1) throw std::invalid_argument("levels must be >= 1");
  Binning b;
  b.levels = k;
  return b;
}

std::int64_t Binning::cardinality() const {
  return edges.empty() ? levels : static_cast<std::int64_t>(edges.size()) - 1;
}

std::optional<std::int64_t> Binning::Level(double value) const {
  if (edges.empty()) {
    if (value != std::floor(value) || value < 0 || value >= static_cast<double>(levels)) {
      return std::nullopt;
    }
    return static_cast<std::int64_t>(value);
  }
  if (value < edges.front() || value > edges.back()) return std::nullopt;
  if (value == edges.back()) return cardinality() - 1;
  const auto it = std::upper_bound(edges.begin(), edges.end(), value);
  return static_cast<std::int64_t>(it - edges.begin()) - 1;
}

TableSchema TableSchema::FromJson(const nlohmann::json& doc) {
  if (!doc.is_object() || !doc.contains("attributes") || !doc["attributes"].is_array()) {
    throw ParseError("schema: expected {\"attributes\": [...]}");
  }
  TableSchema schema;
  for (const auto& a : doc["attributes"]) {
    AttributeSchema attr;
    attr.name = a.at("name").get<std::string>();
    if (a.contains("bins")) {
      attr.binning.edges = a["bins"].get<std::vector<double>>();
      if (attr.binning.edges.size() < 2 ||
          !std::is_sorted(attr.binning.edges.begin(), attr.binning.edges.end()) ||
          std::adjacent_find(attr.binning.edges.begin(), attr.binning.edges.end()) !=
              attr.binning.edges.end()) {
        throw ParseError("schema: attribute '" + attr.name +
                         "' needs at least two strictly increasing bin edges");
      }
    } else if (a.contains("levels")) {
      attr.binning = Binning::Levels(a["levels"].get<std::int64_t>());
    } else {
      throw ParseError("schema: attribute '" + attr.name + "' needs bins or levels");
    }
    schema.attributes.push_back(std::move(attr));
  }
  if (schema.attributes.empty()) throw ParseError("schema: no attributes");
  return schema;
}

TableSchema TableSchema::Load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open schema file " + path.string());
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("schema " + path.string() + ": " + e.what());
  }
  return FromJson(doc);
}

nlohmann::json TableSchema::ToJson() const {
  nlohmann::json attrs = nlohmann::json::array();
  for (const auto& a : attributes) {
    nlohmann::json j = {{"name", a.name}};
    if (a.binning.edges.empty()) {
      j["levels"] = a.binning.levels;
    } else {
      j["bins"] = a.binning.edges;
    }
    attrs.push_back(std::move(j));
  }
  return {{"attributes", std::move(attrs)}};
}

Domain TableSchema::ToDomain() const {
  std::vector<Attribute> attrs;
  for (const auto& a : attributes) attrs.push_back({a.name, a.binning.cardinality()});
  return Domain(std::move(attrs));
}

Table::Table(TableSchema schema, std::vector<std::vector<double>> columns)
    : schema_(std::move(schema)), columns_(std::move(columns)) {
  if (columns_.size() != schema_.attributes.size()) {
    throw std::invalid_argument("table column count does not match schema");
  }
  num_rows_ = columns_.empty() ? 0 : columns_[0].size();
  levels_.resize(columns_.size());
  for (std::size_t a = 0; a < columns_.size(); ++a) {
    if (columns_[a].size() != num_rows_) {
      throw std::invalid_argument("table columns have unequal length");
    }
    levels_[a].reserve(num_rows_);
    for (double v : columns_[a]) {
      const auto level = schema_.attributes[a].binning.Level(v);
      if (!level) {
        std::ostringstream msg;
        msg << "value outside bins: column " << schema_.attributes[a].name
            << " value " << v;
        throw ParseError(msg.str());
      }
      levels_[a].push_back(*level);
    }
  }
}

Table ParseTable(std::istream& in, const TableSchema& schema) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError("line 1: missing CSV header");
  const auto header = SplitCsv(line);
  std::vector<std::size_t> source(schema.attributes.size());
  for (std::size_t a = 0; a < schema.attributes.size(); ++a) {
    const auto it = std::find(header.begin(), header.end(), schema.attributes[a].name);
    if (it == header.end()) {
      throw ParseError("line 1: header lacks column '" + schema.attributes[a].name + "'");
    }
    source[a] = static_cast<std::size_t>(it - header.begin());
  }

  std::vector<std::vector<double>> columns(schema.attributes.size());
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (Trim(line).empty()) continue;
    const auto fields = SplitCsv(line);
    if (fields.size() != header.size()) {
      throw ParseError("line " + std::to_string(line_no) + ": expected " +
                       std::to_string(header.size()) + " fields, got " +
                       std::to_string(fields.size()));
    }
    for (std::size_t a = 0; a < source.size(); ++a) {
      const auto v = ParseNumber(fields[source[a]]);
      if (!v) {
        throw ParseError("line " + std::to_string(line_no) + ": column " +
                         schema.attributes[a].name + " is not a number: '" +
                         std::string(fields[source[a]]) + "'");
      }
      const auto level = schema.attributes[a].binning.Level(*v);
      if (!level) {
        std::ostringstream msg;
        msg << "line " << line_no << ": value outside bins: column "
            << schema.attributes[a].name << " value " << *v;
        throw ParseError(msg.str());
      }
      columns[a].push_back(*v);
    }
  }
  return Table(schema, std::move(columns));
}

Table ParseTable(const std::filesystem::path& path, const TableSchema& schema) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open table file " + path.string());
  return ParseTable(in, schema);
}

DataVector BuildDataVector(const Table& table, const Domain& domain) {
  const auto& attrs = table.schema().attributes;
  if (attrs.size() != domain.num_attributes()) {
    throw std::invalid_argument("table has " + std::to_string(attrs.size()) +
                                " attributes, domain has " +
                                std::to_string(domain.num_attributes()));
  }
  for (std::size_t a = 0; a < attrs.size(); ++a) {
    if (attrs[a].name != domain.attributes()[a].name ||
        attrs[a].binning.cardinality() != domain.cardinality(a)) {
      throw std::invalid_argument("table attribute '" + attrs[a].name +
                                  "' does not match domain attribute '" +
                                  domain.attributes()[a].name + "'");
    }
  }
  Eigen::VectorXd counts = Eigen::VectorXd::Zero(domain.total_size());
  std::vector<std::int64_t> coords(attrs.size());
  for (std::size_t r = 0; r < table.num_rows(); ++r) {
    for (std::size_t a = 0; a < attrs.size(); ++a) coords[a] = table.level(r, a);
    counts[domain.CellIndex(coords)] += 1.0;
  }
  return DataVector(domain, std::move(counts));
}

BinaryDomain Binarize(const Domain& domain) {
  BinaryDomain bd(domain);
  for (const auto& a : domain.attributes()) {
    if (!IsPowerOfTwo(a.cardinality)) {
      throw std::invalid_argument("Fourier unavailable for this domain: attribute '" +
                                  a.name + "' has cardinality " +
                                  std::to_string(a.cardinality) +
                                  ", not a power of two");
    }
    bd.bit_widths_.push_back(Log2Exact(a.cardinality));
  }
  bd.bit_offsets_.resize(bd.bit_widths_.size());
  int offset = 0;
  for (std::size_t i = bd.bit_widths_.size(); i-- > 0;) {
    bd.bit_offsets_[i] = offset;
    offset += bd.bit_widths_[i];
  }
  bd.num_bits_ = offset;
  if (bd.num_bits_ > 40) throw std::invalid_argument("binary domain too wide");
  return bd;
}

std::uint64_t BinaryDomain::ToBits(std::int64_t cell) const {
  const auto coords = base_.Coordinates(cell);
  std::uint64_t bits = 0;
  for (std::size_t a = 0; a < coords.size(); ++a) {
    bits |= static_cast<std::uint64_t>(coords[a]) << bit_offsets_[a];
  }
  return bits;
}

std::int64_t BinaryDomain::FromBits(std::uint64_t bits) const {
  if (num_bits_ < 64 && (bits >> num_bits_) != 0) {
    throw std::out_of_range("bit string wider than domain");
  }
  std::vector<std::int64_t> coords(bit_widths_.size());
  for (std::size_t a = 0; a < coords.size(); ++a) {
    const std::uint64_t mask = (std::uint64_t{1} << bit_widths_[a]) - 1;
    coords[a] = static_cast<std::int64_t>((bits >> bit_offsets_[a]) & mask);
  }
  return base_.CellIndex(coords);
}

std::uint64_t BinaryDomain::AttributeMask(std::span<const int> attrs) const {
  std::uint64_t mask = 0;
  for (int a : attrs) {
    mask |= ((std::uint64_t{1} << bit_widths_[a]) - 1) << bit_offsets_[a];
  }
  return mask;
}

}  // namespace dpiov
