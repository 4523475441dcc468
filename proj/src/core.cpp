#include "magma/core.hpp"

#include <sstream>

namespace magma {

const OpTable* Structure::find_op(const std::string& name) const {
  for (const auto& [k, t] : ops)
    if (k == name) return &t;
  return nullptr;
}

const OpTable& Structure::table(const std::string& name) const {
  const OpTable* t = find_op(name);
  if (!t) throw MagmaError(Err::UnknownOperation, "operation not declared: " + name);
  return *t;
}

OpTable& Structure::mutable_table(const std::string& name) {
  for (auto& [k, t] : ops)
    if (k == name) return t;
  throw MagmaError(Err::UnknownOperation, "operation not declared: " + name);
}

std::optional<ElementId> Structure::find_constant(const std::string& name) const {
  for (const auto& [k, v] : constants)
    if (k == name) return v;
  return std::nullopt;
}

ElementId Structure::constant(const std::string& name) const {
  auto v = find_constant(name);
  if (!v) throw MagmaError(Err::MissingConstant, "constant not declared: " + name);
  return *v;
}

void Structure::add_op(const std::string& name, OpTable t) {
  if (find_op(name)) throw MagmaError(Err::DuplicateOperation, "duplicate operation: " + name);
  ops.emplace_back(name, std::move(t));
}

void Structure::set_constant(const std::string& name, ElementId v) {
  for (auto& [k, old] : constants)
    if (k == name) {
      old = v;
      return;
    }
  constants.emplace_back(name, v);
}

std::vector<std::string> Structure::op_names() const {
  std::vector<std::string> r;
  r.reserve(ops.size());
  for (const auto& [k, t] : ops) r.push_back(k);
  return r;
}

namespace {

[[noreturn]] void parse_fail(int line, const std::string& what) {
  throw MagmaError(Err::ParseError, "line " + std::to_string(line) + ": " + what);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

Structure load_structure(const std::string& text) {
  std::vector<std::string> lines;
  {
    std::string cur;
    for (char c : text) {
      if (c == '\n') {
        lines.push_back(cur);
        cur.clear();
      } else if (c != '\r') {
        cur += c;
      }
    }
    if (!cur.empty()) lines.push_back(cur);
  }
  size_t li = 0;
  auto next_line = [&]() -> const std::string& {
    if (li >= lines.size()) parse_fail((int)lines.size(), "unexpected end of file");
    return lines[li++];
  };

  if (next_line() != "magma v1") parse_fail(1, "expected magic 'magma v1'");

  const std::string& nline = next_line();
  if (nline.rfind("n=", 0) != 0) parse_fail((int)li, "expected 'n=<int>'");
  int n = 0;
  try {
    n = std::stoi(nline.substr(2));
  } catch (...) {
    parse_fail((int)li, "bad element count");
  }
  if (n <= 0) throw MagmaError(Err::InvalidSize, "structure must have n >= 1");

  const std::string& oline = next_line();
  if (oline.rfind("ops=", 0) != 0) parse_fail((int)li, "expected 'ops=<tok>,...'");
  std::vector<std::string> names = split(oline.substr(4), ',');
  if (names.size() == 1 && names[0].empty()) parse_fail((int)li, "at least one operation required");
  for (const auto& nm : names)
    if (nm.empty()) parse_fail((int)li, "empty operation token");

  Structure s;
  s.n = n;

  // optional constants
  while (li < lines.size() && lines[li].rfind("const ", 0) == 0) {
    std::string body = lines[li].substr(6);
    auto eq = body.find('=');
    if (eq == std::string::npos) parse_fail((int)li + 1, "expected 'const <name>=<int>'");
    std::string cname = body.substr(0, eq);
    int v = 0;
    try {
      v = std::stoi(body.substr(eq + 1));
    } catch (...) {
      parse_fail((int)li + 1, "bad constant value");
    }
    if (v < 0 || v >= n) throw MagmaError(Err::EntryOutOfRange, "constant " + cname + " out of range");
    s.set_constant(cname, v);
    ++li;
  }

  for (const auto& nm : names) {
    OpTable t(n);
    for (int i = 0; i < n; ++i) {
      const std::string& row = next_line();
      std::istringstream is(row);
      for (int j = 0; j < n; ++j) {
        long long v;
        if (!(is >> v)) parse_fail((int)li, "expected " + std::to_string(n) + " entries in row");
        if (v < 0 || v >= n)
          throw MagmaError(Err::EntryOutOfRange, "line " + std::to_string(li) + ": entry " +
                                                     std::to_string(v) + " out of range [0," +
                                                     std::to_string(n) + ")");
        t.at(i, j) = (ElementId)v;
      }
      std::string trailing;
      if (is >> trailing) parse_fail((int)li, "trailing data in row");
    }
    s.add_op(nm, std::move(t));
  }
  for (; li < lines.size(); ++li)
    if (!lines[li].empty()) parse_fail((int)li + 1, "trailing data after tables");
  return s;
}

std::string save_structure(const Structure& s) {
  std::ostringstream os;
  os << "magma v1\n";
  os << "n=" << s.n << "\n";
  os << "ops=";
  for (size_t i = 0; i < s.ops.size(); ++i) {
    if (i) os << ",";
    os << s.ops[i].first;
  }
  os << "\n";
  for (const auto& [k, v] : s.constants) os << "const " << k << "=" << v << "\n";
  for (const auto& [k, t] : s.ops) {
    for (int i = 0; i < s.n; ++i) {
      for (int j = 0; j < s.n; ++j) {
        if (j) os << ' ';
        os << t.at(i, j);
      }
      os << '\n';
    }
  }
  return os.str();
}

Structure make_zn(int n, bool with_multiplication) {
  if (n <= 0) throw MagmaError(Err::InvalidSize, "make_zn: n must be >= 1");
  Structure s;
  s.n = n;
  OpTable add(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) add.at(i, j) = (ElementId)((i + j) % n);
  s.add_op("+", std::move(add));
  if (with_multiplication) {
    OpTable mul(n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) mul.at(i, j) = (ElementId)(((long long)i * j) % n);
    s.add_op("*", std::move(mul));
  }
  s.set_constant("zero", 0);
  return s;
}

Structure mutate_entry(const Structure& s, const std::string& op, int i, int j, ElementId v) {
  if (i < 0 || i >= s.n || j < 0 || j >= s.n || v < 0 || v >= s.n)
    throw MagmaError(Err::IndexOutOfRange, "mutate_entry: index out of range");
  Structure out = s;
  out.mutable_table(op).at(i, j) = v;
  return out;
}

}  // namespace magma
