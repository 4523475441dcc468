#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace magma {

enum class Err {
  UnknownOperation,
  IndexOutOfRange,
  ParseError,
  EntryOutOfRange,
  DuplicateOperation,
  InvalidSize,
  UnboundVariable,
  UnknownSymbol,
  SubexpressionPair,
  RouteTooWeak,
  PrimeTooSmall,
  DimensionMismatch,
  NotGenerating,
  NotAGroup,
  ShapeMismatch,
  WeightOutOfRange,
  MissingConstant,
  ArityMismatch,
};

struct MagmaError : std::runtime_error {
  Err kind;
  MagmaError(Err k, const std::string& msg) : std::runtime_error(msg), kind(k) {}
};

using ElementId = int32_t;

struct OpTable {
  int n = 0;
  std::vector<ElementId> entries;  // row-major, row = left operand

  OpTable() = default;
  explicit OpTable(int size) : n(size), entries((size_t)size * size, 0) {}

  ElementId at(int i, int j) const { return entries[(size_t)i * n + j]; }
  ElementId& at(int i, int j) { return entries[(size_t)i * n + j]; }
  bool operator==(const OpTable&) const = default;
};

// A finite set {0..n-1} with named binary operations given by Cayley tables.
struct Structure {
  int n = 0;
  std::vector<std::pair<std::string, OpTable>> ops;        // declared order
  std::vector<std::pair<std::string, ElementId>> constants;

  const OpTable* find_op(const std::string& name) const;
  const OpTable& table(const std::string& name) const;  // throws UnknownOperation
  bool has_op(const std::string& name) const { return find_op(name) != nullptr; }
  OpTable& mutable_table(const std::string& name);

  std::optional<ElementId> find_constant(const std::string& name) const;
  ElementId constant(const std::string& name) const;  // throws MissingConstant

  void add_op(const std::string& name, OpTable t);  // throws DuplicateOperation
  void set_constant(const std::string& name, ElementId v);

  std::vector<std::string> op_names() const;

  bool operator==(const Structure&) const = default;
};

inline ElementId apply(const Structure& s, const std::string& op, ElementId x, ElementId y) {
  const OpTable& t = s.table(op);
  if (x < 0 || x >= s.n || y < 0 || y >= s.n)
    throw MagmaError(Err::IndexOutOfRange, "apply: element index out of range");
  return t.at(x, y);
}

// Text format "magma v1" (see README). Throws ParseError / EntryOutOfRange /
// DuplicateOperation with a line number in the message.
Structure load_structure(const std::string& text);
std::string save_structure(const Structure& s);

Structure make_zn(int n, bool with_multiplication);

Structure mutate_entry(const Structure& s, const std::string& op, int i, int j, ElementId v);

}  // namespace magma
