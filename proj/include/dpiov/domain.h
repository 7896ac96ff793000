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

#ifndef DPIOV_DOMAIN_H_
#define DPIOV_DOMAIN_H_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "json.hpp"

namespace dpiov {

struct Attribute {
  std::string name;
  std::int64_t cardinality = 1;

  friend bool operator==(const Attribute&, const Attribute&) = default;
};

// Ordered attribute list. Cells are numbered row-major over the declaration
// order: the last attribute varies fastest.
class Domain {
 public:
  explicit Domain(std::vector<Attribute> attributes);

  // Domain from a shape such as {4, 8}; attributes are named a0, a1, ...
  static Domain FromShape(std::span<const std::int64_t> shape);
  // Parses labels such as "4x8", "32" or "2^5" (five binary attributes).
  static Domain Parse(std::string_view label);

  const std::vector<Attribute>& attributes() const { return attributes_; }
  std::size_t num_attributes() const { return attributes_.size(); }
  std::int64_t cardinality(std::size_t attr) const {
    return attributes_[attr].cardinality;
  }
  std::int64_t total_size() const { return total_size_; }

  std::int64_t CellIndex(std::span<const std::int64_t> coordinates) const;
  std::vector<std::int64_t> Coordinates(std::int64_t cell) const;

  // "4x8" style label; a single attribute prints as its cardinality.
  std::string Label() const;

  friend bool operator==(const Domain& a, const Domain& b) {
    return a.attributes_ == b.attributes_;
  }

 private:
  std::vector<Attribute> attributes_;
  std::int64_t total_size_ = 1;
};

// Cell counts of a table over a domain. Counts are stored as reals so that
// post-processed estimates can reuse the same arithmetic.
class DataVector {
 public:
  DataVector(Domain domain, Eigen::VectorXd counts);
  // All-zero vector over `domain`.
  explicit DataVector(Domain domain);

  const Domain& domain() const { return domain_; }
  const Eigen::VectorXd& counts() const { return counts_; }
  double Total() const { return counts_.sum(); }

 private:
  Domain domain_;
  Eigen::VectorXd counts_;
};

// How raw column values map to attribute levels: either half-open bins
// [e_i, e_{i+1}) with the last bin closed, or integer levels 0..k-1.
struct Binning {
  std::vector<double> edges;
  std::int64_t levels = 0;

  static Binning Uniform(double lo, double hi, int bins);
  static Binning Levels(std::int64_t k);

  std::int64_t cardinality() const;
  std::optional<std::int64_t> Level(double value) const;
};

struct AttributeSchema {
  std::string name;
  Binning binning;
};

// Schema file: {"attributes":[{"name":..,"bins":[edges]} | {"name":..,"levels":k}]}
struct TableSchema {
  std::vector<AttributeSchema> attributes;

  static TableSchema FromJson(const nlohmann::json& doc);
  static TableSchema Load(const std::filesystem::path& path);
  nlohmann::json ToJson() const;
  Domain ToDomain() const;
};

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raw columns plus binned levels, one entry per schema attribute.
class Table {
 public:
  Table(TableSchema schema, std::vector<std::vector<double>> columns);

  const TableSchema& schema() const { return schema_; }
  std::size_t num_rows() const { return num_rows_; }
  const std::vector<double>& column(std::size_t attr) const {
    return columns_[attr];
  }
  std::int64_t level(std::size_t row, std::size_t attr) const {
    return levels_[attr][row];
  }

 private:
  TableSchema schema_;
  std::vector<std::vector<double>> columns_;
  std::vector<std::vector<std::int64_t>> levels_;
  std::size_t num_rows_ = 0;
};

// Reads a CSV whose header names columns; every schema attribute must be
// present, other columns are ignored. Errors carry the 1-based line number.
Table ParseTable(std::istream& in, const TableSchema& schema);
Table ParseTable(const std::filesystem::path& path, const TableSchema& schema);

DataVector BuildDataVector(const Table& table, const Domain& domain);

// Binary re-encoding of a domain whose cardinalities are all powers of two.
// Attribute fields are concatenated in declaration order with attribute 0
// in the most significant bits.
class BinaryDomain {
 public:
  const Domain& base() const { return base_; }
  const std::vector<int>& bit_widths() const { return bit_widths_; }
  int num_bits() const { return num_bits_; }
  // Shift of the least significant bit of the field of `attr`.
  int bit_offset(std::size_t attr) const { return bit_offsets_[attr]; }

  std::uint64_t ToBits(std::int64_t cell) const;
  std::int64_t FromBits(std::uint64_t bits) const;
  // Mask of all bits that belong to the listed attributes.
  std::uint64_t AttributeMask(std::span<const int> attrs) const;

 private:
  friend BinaryDomain Binarize(const Domain& domain);
  explicit BinaryDomain(Domain base) : base_(std::move(base)) {}

  Domain base_;
  std::vector<int> bit_widths_;
  std::vector<int> bit_offsets_;
  int num_bits_ = 0;
};

// Throws std::invalid_argument("Fourier unavailable for this domain ...")
// when a cardinality is not a power of two.
BinaryDomain Binarize(const Domain& domain);

bool IsPowerOfTwo(std::int64_t v);

}  // namespace dpiov

#endif  // DPIOV_DOMAIN_H_
