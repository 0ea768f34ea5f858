#include "bpg/matrix_market.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <vector>

#include "bpg/common.hpp"

namespace bpg {

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return s;
}

} // namespace

SymOperator mm_read(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("mm_read: cannot open " + path);

  std::string line;
  long lineno = 0;

  if (!std::getline(in, line)) throw ParseError("mm_read: empty file " + path, 0);
  ++lineno;
  {
    std::istringstream hs(line);
    std::string banner, object, format, field, symmetry;
    hs >> banner >> object >> format >> field >> symmetry;
    if (banner != "%%MatrixMarket" || lower(object) != "matrix")
      throw ParseError("mm_read: bad banner in " + path, lineno);
    format = lower(format);
    field = lower(field);
    symmetry = lower(symmetry);
    if (field != "real")
      throw ParseError("mm_read: only real field supported (line 1)", lineno);
    if (symmetry != "general" && symmetry != "symmetric")
      throw ParseError("mm_read: only general/symmetric supported (line 1)", lineno);

    const bool coordinate = (format == "coordinate");
    if (!coordinate && format != "array")
      throw ParseError("mm_read: unknown format '" + format + "'", lineno);

    // skip comments
    while (std::getline(in, line)) {
      ++lineno;
      if (!line.empty() && line[0] != '%') break;
    }
    std::istringstream szs(line);
    long rows = 0, cols = 0, nnz = 0;
    if (coordinate) {
      if (!(szs >> rows >> cols >> nnz))
        throw ParseError("mm_read: bad size line", lineno);
    } else {
      if (!(szs >> rows >> cols)) throw ParseError("mm_read: bad size line", lineno);
    }
    if (rows != cols) throw ParseError("mm_read: matrix not square", lineno);
    const int n = static_cast<int>(rows);

    // (i, j) -> (value, first line seen), upper-triangle key
    std::map<std::pair<int, int>, std::pair<double, long>> ent;
    auto put = [&](int i, int j, double v, long ln) {
      if (i < 1 || j < 1 || i > n || j > n)
        throw ParseError("mm_read: index out of range", ln);
      const bool swapped = i > j;
      const auto key = swapped ? std::make_pair(j - 1, i - 1) : std::make_pair(i - 1, j - 1);
      auto it = ent.find(key);
      if (it == ent.end()) {
        ent.emplace(key, std::make_pair(v, ln * (swapped ? -1 : 1)));
        return;
      }
      // a second sighting is legal only as the mirror of a general entry
      const long prev = it->second.second;
      const bool prev_swapped = prev < 0;
      if (prev == 0 || i == j || swapped == prev_swapped)
        throw ParseError("mm_read: duplicate entry at line " + std::to_string(ln), ln);
      if (it->second.first != v)
        throw ParseError("mm_read: conflicting symmetric entries (" + std::to_string(i) +
                             "," + std::to_string(j) + ") at line " + std::to_string(ln),
                         ln);
      it->second.second = 0; // matched pair
    };

    if (coordinate) {
      long seen = 0;
      while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '%') continue;
        std::istringstream es(line);
        long i, j;
        double v;
        if (!(es >> i >> j >> v)) throw ParseError("mm_read: bad entry", lineno);
        if (symmetry == "symmetric" && j > i)
          throw ParseError("mm_read: upper entry in symmetric file", lineno);
        put(static_cast<int>(i), static_cast<int>(j), v, lineno);
        ++seen;
      }
      if (seen != nnz)
        throw ParseError("mm_read: entry count " + std::to_string(seen) +
                             " does not match header " + std::to_string(nnz),
                         lineno);
    } else {
      // array format: column-major; symmetric stores the lower triangle only
      std::vector<double> vals;
      vals.reserve(size_t(rows) * cols);
      while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '%') continue;
        std::istringstream es(line);
        double v;
        while (es >> v) vals.push_back(v);
      }
      size_t t = 0;
      if (symmetry == "symmetric") {
        if (vals.size() != size_t(n) * (n + 1) / 2)
          throw ParseError("mm_read: array size mismatch", lineno);
        for (int j = 0; j < n; ++j)
          for (int i = j; i < n; ++i) put(i + 1, j + 1, vals[t++], lineno);
      } else {
        if (vals.size() != size_t(n) * n)
          throw ParseError("mm_read: array size mismatch", lineno);
        for (int j = 0; j < n; ++j)
          for (int i = 0; i < n; ++i) put(i + 1, j + 1, vals[t++], lineno);
      }
    }

    if (symmetry == "general") {
      for (const auto& [key, vl] : ent)
        if (key.first != key.second && vl.second != 0)
          throw ParseError("mm_read: entry (" + std::to_string(key.first + 1) + "," +
                               std::to_string(key.second + 1) +
                               ") lacks its symmetric counterpart",
                           std::labs(vl.second));
    }

    bool diagonal_only = true;
    for (const auto& [key, vl] : ent)
      if (key.first != key.second) {
        diagonal_only = false;
        break;
      }
    if (diagonal_only) {
      std::vector<double> d(n, 0.0);
      for (const auto& [key, vl] : ent) d[key.first] = vl.first;
      return SymOperator::diagonal(std::move(d));
    }

    std::vector<int> ptr(n + 1, 0), idx;
    std::vector<double> val;
    idx.reserve(ent.size());
    val.reserve(ent.size());
    for (const auto& [key, vl] : ent) ptr[key.first + 1]++;
    for (int i = 0; i < n; ++i) ptr[i + 1] += ptr[i];
    for (const auto& [key, vl] : ent) { // map iterates in (row, col) order
      idx.push_back(key.second);
      val.push_back(vl.first);
    }
    return SymOperator::csr_upper(n, std::move(ptr), std::move(idx), std::move(val));
  }
}

void mm_write(const SymOperator& op, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("mm_write: cannot open " + path);
  long nnz = 0;
  op.for_each_lower([&nnz](int, int, double) { ++nnz; });
  out << "%%MatrixMarket matrix coordinate real symmetric\n";
  out << op.dim() << " " << op.dim() << " " << nnz << "\n";
  char buf[64];
  op.for_each_lower([&](int i, int j, double v) {
    std::snprintf(buf, sizeof buf, "%d %d %.17g\n", i + 1, j + 1, v);
    out << buf;
  });
  if (!out) throw Error("mm_write: write failed for " + path);
}

} // namespace bpg
