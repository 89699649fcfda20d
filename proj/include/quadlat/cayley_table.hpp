#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

#include "quadlat/errors.hpp"

namespace quadlat {

using Element = std::uint32_t;
using Permutation = std::vector<Element>;

// Multiplication table of a finite groupoid on {0, ..., n-1}.
//
// entries are stored row-major: (*this)(x, y) is x.y.  Labels are display
// names only; every algorithm works on indices.  Immutable once built, so a
// table can be shared freely between threads.
class CayleyTable {
 public:
  CayleyTable() = default;

  CayleyTable(std::size_t order, std::vector<Element> entries,
              std::vector<std::string> labels = {})
      : order_(order), entries_(std::move(entries)), labels_(std::move(labels)) {
    validate();
  }

  template <typename F>
  static CayleyTable from_function(std::size_t order, F&& product,
                                   std::vector<std::string> labels = {}) {
    std::vector<Element> entries(order * order);
    for (std::size_t x = 0; x < order; ++x) {
      for (std::size_t y = 0; y < order; ++y) {
        entries[x * order + y] =
            static_cast<Element>(product(static_cast<Element>(x), static_cast<Element>(y)));
      }
    }
    return CayleyTable(order, std::move(entries), std::move(labels));
  }

  // Builds a table from labelled rows, the way tables are usually printed
  // and notebooks: header[j] names column j, rows[i][0] names the row and
  // rows[i][1..] are the products.  Row order may differ from header order;
  // indices follow the header.
  static CayleyTable from_labelled(std::vector<std::string> const& header,
                                   std::vector<std::vector<std::string>> const& rows) {
    std::size_t const n = header.size();
    auto index_of = [&](std::string const& label) -> Element {
      auto it = std::find(header.begin(), header.end(), label);
      if (it == header.end()) {
        throw FormatError("unknown label '" + label + "'");
      }
      return static_cast<Element>(it - header.begin());
    };
    if (rows.size() != n) {
      throw FormatError("labelled table needs " + std::to_string(n) + " rows");
    }
    std::vector<Element> entries(n * n);
    std::vector<bool> seen(n, false);
    for (auto const& row : rows) {
      if (row.size() != n + 1) {
        throw FormatError("labelled row '" + (row.empty() ? std::string() : row[0]) +
                          "' has wrong length");
      }
      Element const x = index_of(row[0]);
      if (seen[x]) {
        throw FormatError("row '" + row[0] + "' given twice");
      }
      seen[x] = true;
      for (std::size_t j = 0; j < n; ++j) {
        entries[x * n + j] = index_of(row[j + 1]);
      }
    }
    return CayleyTable(n, std::move(entries), header);
  }

  [[nodiscard]] std::size_t order() const noexcept { return order_; }

  [[nodiscard]] Element operator()(Element x, Element y) const noexcept {
    return entries_[x * order_ + y];
  }

  [[nodiscard]] std::span<Element const> row(Element x) const noexcept {
    return {entries_.data() + x * order_, order_};
  }

  [[nodiscard]] std::vector<Element> column(Element y) const {
    std::vector<Element> col(order_);
    for (std::size_t x = 0; x < order_; ++x) {
      col[x] = entries_[x * order_ + y];
    }
    return col;
  }

  [[nodiscard]] std::vector<Element> const& entries() const noexcept { return entries_; }
  [[nodiscard]] std::vector<std::string> const& labels() const noexcept { return labels_; }
  [[nodiscard]] bool has_labels() const noexcept { return !labels_.empty(); }

  // Label of x, or its decimal index when the table is unlabelled.
  [[nodiscard]] std::string name(Element x) const {
    return labels_.empty() ? std::to_string(x) : labels_[x];
  }

  [[nodiscard]] Element index_of(std::string const& label) const {
    auto it = std::find(labels_.begin(), labels_.end(), label);
    if (it == labels_.end()) {
      throw PreconditionError("no element labelled '" + label + "'");
    }
    return static_cast<Element>(it - labels_.begin());
  }

  [[nodiscard]] CayleyTable with_labels(std::vector<std::string> labels) const {
    return CayleyTable(order_, entries_, std::move(labels));
  }

  [[nodiscard]] CayleyTable without_labels() const { return CayleyTable(order_, entries_); }

  // Tables compare by their products only; labels are presentation.
  friend bool operator==(CayleyTable const& lhs, CayleyTable const& rhs) {
    return lhs.order_ == rhs.order_ && lhs.entries_ == rhs.entries_;
  }

 private:
  void validate() const {
    if (order_ == 0) {
      throw PreconditionError("a Cayley table needs at least one element");
    }
    if (entries_.size() != order_ * order_) {
      throw PreconditionError("Cayley table of order " + std::to_string(order_) + " needs " +
                              std::to_string(order_ * order_) + " entries, got " +
                              std::to_string(entries_.size()));
    }
    for (Element e : entries_) {
      if (e >= order_) {
        throw PreconditionError("entry " + std::to_string(e) + " out of range for order " +
                                std::to_string(order_));
      }
    }
    if (!labels_.empty()) {
      if (labels_.size() != order_) {
        throw PreconditionError("expected " + std::to_string(order_) + " labels, got " +
                                std::to_string(labels_.size()));
      }
      std::unordered_set<std::string> distinct(labels_.begin(), labels_.end());
      if (distinct.size() != labels_.size()) {
        throw PreconditionError("labels must be distinct");
      }
      for (auto const& l : labels_) {
        if (l.empty() || std::any_of(l.begin(), l.end(), [](char c) {
              return c == ' ' || c == '\t' || c == '\n' || c == '\r';
            })) {
          throw PreconditionError("label '" + l + "' is empty or contains whitespace");
        }
      }
    }
  }

  std::size_t order_ = 0;
  std::vector<Element> entries_;
  std::vector<std::string> labels_;
};

// The identity 0, 1, ..., n-1.
inline Permutation identity_permutation(std::size_t n) {
  Permutation p(n);
  std::iota(p.begin(), p.end(), Element{0});
  return p;
}

inline bool is_permutation_of_range(std::span<Element const> values, std::size_t n) {
  if (values.size() != n) {
    return false;
  }
  std::vector<bool> seen(n, false);
  for (Element v : values) {
    if (v >= n || seen[v]) {
      return false;
    }
    seen[v] = true;
  }
  return true;
}

inline Permutation inverse_permutation(Permutation const& p) {
  Permutation inv(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    inv[p[i]] = static_cast<Element>(i);
  }
  return inv;
}

// Transports the table along phi: result(phi(x), phi(y)) = phi(x.y).
// Labels travel with their elements.
inline CayleyTable relabel(CayleyTable const& t, Permutation const& phi) {
  std::size_t const n = t.order();
  if (!is_permutation_of_range(phi, n)) {
    throw PreconditionError("relabel: not a permutation of the carrier");
  }
  std::vector<Element> entries(n * n);
  for (Element x = 0; x < n; ++x) {
    for (Element y = 0; y < n; ++y) {
      entries[phi[x] * n + phi[y]] = phi[t(x, y)];
    }
  }
  std::vector<std::string> labels;
  if (t.has_labels()) {
    labels.resize(n);
    for (Element x = 0; x < n; ++x) {
      labels[phi[x]] = t.labels()[x];
    }
  }
  return CayleyTable(n, std::move(entries), std::move(labels));
}

// Reorders a labelled table so that its labels appear in `order`.
inline CayleyTable reorder_by_labels(CayleyTable const& t, std::vector<std::string> const& order) {
  if (order.size() != t.order()) {
    throw PreconditionError("reorder_by_labels: wrong number of labels");
  }
  Permutation phi(t.order());
  std::vector<bool> used(t.order(), false);
  for (std::size_t i = 0; i < order.size(); ++i) {
    Element const x = t.index_of(order[i]);
    if (used[x]) {
      throw PreconditionError("reorder_by_labels: label '" + order[i] + "' repeated");
    }
    used[x] = true;
    phi[x] = static_cast<Element>(i);
  }
  return relabel(t, phi);
}

// ---------------------------------------------------------------------------
// Text format
//
//   n
//   row 0: x.0 x.1 ... x.(n-1)
//   ...
//   # labels: l0 l1 ... l(n-1)        (optional)
//
// Blank lines and other '#' comment lines are ignored on input.

inline void write_table(std::ostream& out, CayleyTable const& t) {
  std::size_t const n = t.order();
  out << n << '\n';
  for (Element x = 0; x < n; ++x) {
    auto r = t.row(x);
    for (std::size_t y = 0; y < n; ++y) {
      if (y != 0) {
        out << ' ';
      }
      out << r[y];
    }
    out << '\n';
  }
  if (t.has_labels()) {
    out << "# labels:";
    for (auto const& l : t.labels()) {
      out << ' ' << l;
    }
    out << '\n';
  }
}

inline std::string to_text(CayleyTable const& t) {
  std::ostringstream oss;
  write_table(oss, t);
  return oss.str();
}

inline CayleyTable read_table(std::istream& in, std::string const& source = "<input>") {
  std::string line;
  std::size_t line_no = 0;
  std::size_t n = 0;
  bool have_order = false;
  std::vector<Element> entries;
  std::vector<std::string> labels;
  auto fail = [&](std::string const& what) -> FormatError {
    return FormatError(source + ":" + std::to_string(line_no) + ": " + what);
  };
  while (std::getline(in, line)) {
    ++line_no;
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) {
      continue;
    }
    if (line[first] == '#') {
      static constexpr std::string_view kTag = "# labels:";
      if (line.compare(first, kTag.size(), kTag) == 0) {
        if (!labels.empty()) {
          throw fail("labels given twice");
        }
        std::istringstream ls(line.substr(first + kTag.size()));
        std::string l;
        while (ls >> l) {
          labels.push_back(l);
        }
      }
      continue;
    }
    std::istringstream ls(line);
    if (!have_order) {
      long long v = 0;
      std::string rest;
      if (!(ls >> v) || v <= 0 || (ls >> rest)) {
        throw fail("first line must be a positive order");
      }
      n = static_cast<std::size_t>(v);
      have_order = true;
      entries.reserve(n * n);
      continue;
    }
    if (entries.size() == n * n) {
      throw fail("more than " + std::to_string(n) + " rows");
    }
    std::size_t count = 0;
    std::string tok;
    while (ls >> tok) {
      std::size_t pos = 0;
      long long v = 0;
      try {
        v = std::stoll(tok, &pos);
      } catch (std::exception const&) {
        throw fail("not an integer: '" + tok + "'");
      }
      if (pos != tok.size() || v < 0 || static_cast<std::size_t>(v) >= n) {
        throw fail("entry '" + tok + "' out of range 0.." + std::to_string(n - 1));
      }
      entries.push_back(static_cast<Element>(v));
      ++count;
    }
    if (count != n) {
      throw fail("row has " + std::to_string(count) + " entries, expected " + std::to_string(n));
    }
  }
  if (!have_order) {
    throw FormatError(source + ": empty table file");
  }
  if (entries.size() != n * n) {
    throw FormatError(source + ": expected " + std::to_string(n) + " rows, got " +
                      std::to_string(entries.size() / n));
  }
  try {
    return CayleyTable(n, std::move(entries), std::move(labels));
  } catch (PreconditionError const& e) {
    throw FormatError(source + ": " + e.what());
  }
}

inline CayleyTable parse_table(std::string const& text) {
  std::istringstream iss(text);
  return read_table(iss);
}

inline CayleyTable load_table(std::string const& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open table file '" + path + "'");
  }
  return read_table(in, path);
}

inline void save_table(std::string const& path, CayleyTable const& t) {
  std::ofstream out(path);
  if (!out) {
    throw IoError("cannot write table file '" + path + "'");
  }
  write_table(out, t);
  if (!out) {
    throw IoError("write failed for '" + path + "'");
  }
}

}  // namespace quadlat
