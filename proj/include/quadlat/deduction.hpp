#pragma once

// Forward-chaining completion of partial Cayley tables.
//
// A PartialTable holds Known/Unknown cells plus row and column indexes.  The
// engine applies a fixed list of rules in passes until nothing changes; every
// new cell is logged as a Step naming the rule, the variable instance and the
// cells it read.  A conflict ends the run.  replay() re-derives each step on a
// fresh table with its own evaluator, so a trace can be audited without
// trusting the engine.

#include <array>
#include <bit>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "quadlat/cayley_table.hpp"
#include "quadlat/errors.hpp"

namespace quadlat {

enum class Rule : std::uint8_t {
  seed,
  assume,
  idempotency,
  latin_naked,
  latin_hidden_row,
  latin_hidden_column,
  bookend,
  strong_elasticity,
  alterability,
  left_distributivity,
  right_distributivity,
  mediality,
  law_a,
  eq8,
  eq9,
};

constexpr std::string_view rule_name(Rule r) {
  switch (r) {
    case Rule::seed: return "SEED";
    case Rule::assume: return "ASSUME";
    case Rule::idempotency: return "idempotency";
    case Rule::latin_naked: return "latin-single";
    case Rule::latin_hidden_row: return "latin-row";
    case Rule::latin_hidden_column: return "latin-column";
    case Rule::bookend: return "bookend";
    case Rule::strong_elasticity: return "strong-elasticity";
    case Rule::alterability: return "alterability";
    case Rule::left_distributivity: return "left-distributivity";
    case Rule::right_distributivity: return "right-distributivity";
    case Rule::mediality: return "mediality";
    case Rule::law_a: return "A";
    case Rule::eq8: return "eq8";
    case Rule::eq9: return "eq9";
  }
  return "?";
}

// Rules applied after seeding, in this order.  The default is the set the
// Qn completions need; A, eq8 and eq9 are available but off.
struct RuleSet {
  std::vector<Rule> order{Rule::idempotency,         Rule::latin_naked,
                          Rule::latin_hidden_row,    Rule::latin_hidden_column,
                          Rule::bookend,             Rule::strong_elasticity,
                          Rule::alterability,        Rule::left_distributivity,
                          Rule::right_distributivity, Rule::mediality};

  static RuleSet with_extras() {
    RuleSet r;
    r.order.push_back(Rule::law_a);
    r.order.push_back(Rule::eq8);
    r.order.push_back(Rule::eq9);
    return r;
  }
};

using Cell = std::pair<Element, Element>;

struct Step {
  Rule rule = Rule::seed;
  Element x = 0, y = 0, v = 0;        // conclusion x.y = v
  std::uint8_t form = 0;              // which equation of a multi-equation rule
  std::uint8_t arity = 0;
  std::array<Element, 4> vars{};      // the variable instance
  std::vector<Cell> premises;
  std::string note;                   // seeds and assumptions only
};

using Trace = std::vector<Step>;

enum class ConflictKind : std::uint8_t {
  clash,         // a cell derived with two different values, or an identity instance fails
  row_repeat,    // derived value already sits elsewhere in the row
  column_repeat,
  empty_cell,    // no value fits the cell
  no_place,      // a value fits nowhere in a row or column
};

constexpr std::string_view conflict_name(ConflictKind k) {
  switch (k) {
    case ConflictKind::clash: return "clash";
    case ConflictKind::row_repeat: return "row-repeat";
    case ConflictKind::column_repeat: return "column-repeat";
    case ConflictKind::empty_cell: return "empty-cell";
    case ConflictKind::no_place: return "no-place";
  }
  return "?";
}

struct Conflict {
  ConflictKind kind = ConflictKind::clash;
  // The failing derivation.  For empty_cell, (x, y) is the cell; for
  // no_place, x is the row (or column, when along_column) and v the value.
  Step step;
  bool along_column = false;
  bool instance_only = false;  // the instance itself fails; step has no conclusion
  std::string detail;
};

// ---------------------------------------------------------------------------

class PartialTable {
 public:
  static constexpr std::size_t kMaxOrder = 64;

  explicit PartialTable(std::size_t n, std::vector<std::string> labels = {})
      : n_(n),
        cells_(n * n, -1),
        row_mask_(n, 0),
        col_mask_(n, 0),
        row_pos_(n * n, -1),
        col_pos_(n * n, -1),
        labels_(std::move(labels)) {
    if (n == 0 || n > kMaxOrder) {
      throw PreconditionError("partial table order must be in 1..64");
    }
    if (!labels_.empty() && labels_.size() != n) {
      throw PreconditionError("partial table: wrong number of labels");
    }
  }

  [[nodiscard]] std::size_t order() const noexcept { return n_; }
  [[nodiscard]] int at(Element x, Element y) const noexcept { return cells_[x * n_ + y]; }
  [[nodiscard]] bool known(Element x, Element y) const noexcept { return at(x, y) >= 0; }
  // Column of value v in row x, or -1.
  [[nodiscard]] int row_pos(Element x, Element v) const noexcept { return row_pos_[x * n_ + v]; }
  // Row of value v in column y, or -1.
  [[nodiscard]] int col_pos(Element y, Element v) const noexcept { return col_pos_[y * n_ + v]; }
  [[nodiscard]] std::uint64_t row_mask(Element x) const noexcept { return row_mask_[x]; }
  [[nodiscard]] std::uint64_t col_mask(Element y) const noexcept { return col_mask_[y]; }
  [[nodiscard]] std::size_t known_count() const noexcept { return known_; }
  [[nodiscard]] bool complete() const noexcept { return known_ == n_ * n_; }

  [[nodiscard]] std::uint64_t full_mask() const noexcept {
    return n_ == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n_) - 1;
  }
  [[nodiscard]] std::uint64_t candidates(Element x, Element y) const noexcept {
    return known(x, y) ? (std::uint64_t{1} << at(x, y))
                       : full_mask() & ~(row_mask_[x] | col_mask_[y]);
  }

  // Caller has checked the cell is unknown and v is free in row and column.
  void put(Element x, Element y, Element v) {
    cells_[x * n_ + y] = static_cast<int>(v);
    row_mask_[x] |= std::uint64_t{1} << v;
    col_mask_[y] |= std::uint64_t{1} << v;
    row_pos_[x * n_ + v] = static_cast<int>(y);
    col_pos_[y * n_ + v] = static_cast<int>(x);
    ++known_;
  }

  [[nodiscard]] std::vector<std::string> const& labels() const noexcept { return labels_; }
  [[nodiscard]] std::string name(Element x) const {
    return labels_.empty() ? std::to_string(x) : labels_[x];
  }

  [[nodiscard]] CayleyTable to_table() const {
    if (!complete()) {
      throw PreconditionError("partial table is not complete");
    }
    std::vector<Element> entries(cells_.begin(), cells_.end());
    return CayleyTable(n_, std::move(entries), labels_);
  }

  // Unknown cells print as '.'.
  [[nodiscard]] std::string to_text() const {
    std::ostringstream out;
    out << n_ << '\n';
    for (Element x = 0; x < n_; ++x) {
      for (Element y = 0; y < n_; ++y) {
        out << (y ? " " : "");
        if (known(x, y)) {
          out << at(x, y);
        } else {
          out << '.';
        }
      }
      out << '\n';
    }
    return out.str();
  }

 private:
  std::size_t n_;
  std::vector<int> cells_;
  std::vector<std::uint64_t> row_mask_;
  std::vector<std::uint64_t> col_mask_;
  std::vector<int> row_pos_;
  std::vector<int> col_pos_;
  std::size_t known_ = 0;
  std::vector<std::string> labels_;
};

// ---------------------------------------------------------------------------
// Equational laws as term pairs

namespace detail {

struct TermNode {
  int var = -1;  // >= 0 for a variable leaf
  int left = -1;
  int right = -1;
};

struct Law {
  Rule rule;
  std::uint8_t form;
  std::uint8_t arity;
  std::vector<TermNode> nodes;
  int lhs;
  int rhs;
};

class LawBuilder {
 public:
  int v(int i) {
    nodes_.push_back({i, -1, -1});
    return static_cast<int>(nodes_.size()) - 1;
  }
  int p(int l, int r) {
    nodes_.push_back({-1, l, r});
    return static_cast<int>(nodes_.size()) - 1;
  }
  Law done(Rule rule, std::uint8_t form, std::uint8_t arity, int lhs, int rhs) {
    return Law{rule, form, arity, std::move(nodes_), lhs, rhs};
  }

 private:
  std::vector<TermNode> nodes_;
};

// Every equational law the engine can use, keyed by (rule, form).
inline std::vector<Law> const& all_laws() {
  static std::vector<Law> const laws = [] {
    std::vector<Law> out;
    enum { X, Y, Z, W };
    {  // yx.xy = x
      LawBuilder b;
      int l = b.p(b.p(b.v(Y), b.v(X)), b.p(b.v(X), b.v(Y)));
      out.push_back(b.done(Rule::bookend, 0, 2, l, b.v(X)));
    }
    {  // x.yx = xy.x
      LawBuilder b;
      int l = b.p(b.v(X), b.p(b.v(Y), b.v(X)));
      int r = b.p(b.p(b.v(X), b.v(Y)), b.v(X));
      out.push_back(b.done(Rule::strong_elasticity, 0, 2, l, r));
    }
    {  // xy.x = yx.y
      LawBuilder b;
      int l = b.p(b.p(b.v(X), b.v(Y)), b.v(X));
      int r = b.p(b.p(b.v(Y), b.v(X)), b.v(Y));
      out.push_back(b.done(Rule::strong_elasticity, 1, 2, l, r));
    }
    {  // x.yz = xy.xz
      LawBuilder b;
      int l = b.p(b.v(X), b.p(b.v(Y), b.v(Z)));
      int r = b.p(b.p(b.v(X), b.v(Y)), b.p(b.v(X), b.v(Z)));
      out.push_back(b.done(Rule::left_distributivity, 0, 3, l, r));
    }
    {  // xy.z = xz.yz
      LawBuilder b;
      int l = b.p(b.p(b.v(X), b.v(Y)), b.v(Z));
      int r = b.p(b.p(b.v(X), b.v(Z)), b.p(b.v(Y), b.v(Z)));
      out.push_back(b.done(Rule::right_distributivity, 0, 3, l, r));
    }
    {  // xy.zw = xz.yw
      LawBuilder b;
      int l = b.p(b.p(b.v(X), b.v(Y)), b.p(b.v(Z), b.v(W)));
      int r = b.p(b.p(b.v(X), b.v(Z)), b.p(b.v(Y), b.v(W)));
      out.push_back(b.done(Rule::mediality, 0, 4, l, r));
    }
    {  // xy.x = zx.yz
      LawBuilder b;
      int l = b.p(b.p(b.v(X), b.v(Y)), b.v(X));
      int r = b.p(b.p(b.v(Z), b.v(X)), b.p(b.v(Y), b.v(Z)));
      out.push_back(b.done(Rule::law_a, 0, 3, l, r));
    }
    {  // x(y.yx) = (xy.x)y
      LawBuilder b;
      int l = b.p(b.v(X), b.p(b.v(Y), b.p(b.v(Y), b.v(X))));
      int r = b.p(b.p(b.p(b.v(X), b.v(Y)), b.v(X)), b.v(Y));
      out.push_back(b.done(Rule::eq8, 0, 2, l, r));
    }
    {  // (xy.y)x = y(x.yx)
      LawBuilder b;
      int l = b.p(b.p(b.p(b.v(X), b.v(Y)), b.v(Y)), b.v(X));
      int r = b.p(b.v(Y), b.p(b.v(X), b.p(b.v(Y), b.v(X))));
      out.push_back(b.done(Rule::eq9, 0, 2, l, r));
    }
    return out;
  }();
  return laws;
}

inline Law const* find_law(Rule rule, std::uint8_t form) {
  for (auto const& l : all_laws()) {
    if (l.rule == rule && l.form == form) {
      return &l;
    }
  }
  return nullptr;
}

// Outcome of one law instance against a partial table.
struct Derivation {
  enum class Kind { nothing, deduce, clash } kind = Kind::nothing;
  Element x = 0, y = 0, v = 0;
  std::vector<Cell> premises;
};

// Engine-side evaluator: uses the row/column position indexes.  When one
// side of the instance is known, the other side is forced top-down: a
// product with one known factor pins the other factor through the latin
// property, until a single unknown cell is reached.
class InstanceEvaluator {
 public:
  InstanceEvaluator(PartialTable const& t, Law const& law, std::array<Element, 4> const& vars)
      : t_(t), law_(law), vars_(vars) {}

  Derivation run() {
    Derivation d;
    int const l = eval(law_.lhs);
    int const r = eval(law_.rhs);
    if (l >= 0 && r >= 0) {
      if (l != r) {
        d.kind = Derivation::Kind::clash;
        d.premises = std::move(premises_);
      }
      return d;
    }
    if (l < 0 && r < 0) {
      return d;
    }
    force(l < 0 ? law_.lhs : law_.rhs, static_cast<Element>(l < 0 ? r : l), d);
    if (d.kind != Derivation::Kind::nothing) {
      d.premises = std::move(premises_);
    }
    return d;
  }

 private:
  int eval(int node) {
    auto const& n = law_.nodes[node];
    if (n.var >= 0) {
      return static_cast<int>(vars_[n.var]);
    }
    int const a = eval(n.left);
    if (a < 0) {
      return -1;
    }
    int const b = eval(n.right);
    if (b < 0) {
      return -1;
    }
    int const v = t_.at(static_cast<Element>(a), static_cast<Element>(b));
    if (v >= 0) {
      premises_.emplace_back(a, b);
    }
    return v;
  }

  void force(int node, Element target, Derivation& d) {
    auto const& n = law_.nodes[node];
    if (n.var >= 0) {
      if (vars_[n.var] != target) {
        d.kind = Derivation::Kind::clash;
      }
      return;
    }
    int const a = eval(n.left);
    int const b = eval(n.right);
    if (a >= 0 && b >= 0) {
      d.kind = Derivation::Kind::deduce;
      d.x = static_cast<Element>(a);
      d.y = static_cast<Element>(b);
      d.v = target;
      return;
    }
    if (a >= 0) {
      int const c = t_.row_pos(static_cast<Element>(a), target);
      if (c >= 0) {
        premises_.emplace_back(a, c);
        force(n.right, static_cast<Element>(c), d);
      }
    } else if (b >= 0) {
      int const r = t_.col_pos(static_cast<Element>(b), target);
      if (r >= 0) {
        premises_.emplace_back(r, b);
        force(n.left, static_cast<Element>(r), d);
      }
    }
  }

  PartialTable const& t_;
  Law const& law_;
  std::array<Element, 4> const& vars_;
  std::vector<Cell> premises_;
};

}  // namespace detail

// ---------------------------------------------------------------------------

struct DeductionOutcome {
  enum class Kind { completed, contradiction, stuck };
  Kind kind = Kind::stuck;
  std::optional<CayleyTable> table;  // completed only
  std::optional<Conflict> conflict;  // contradiction only
  Trace trace;
  PartialTable state{1};

  [[nodiscard]] bool completed() const noexcept { return kind == Kind::completed; }
  [[nodiscard]] bool contradiction() const noexcept { return kind == Kind::contradiction; }
  [[nodiscard]] bool stuck() const noexcept { return kind == Kind::stuck; }
};

constexpr std::string_view outcome_name(DeductionOutcome::Kind k) {
  switch (k) {
    case DeductionOutcome::Kind::completed: return "completed";
    case DeductionOutcome::Kind::contradiction: return "contradiction";
    case DeductionOutcome::Kind::stuck: return "stuck";
  }
  return "?";
}

class DeductionEngine {
 public:
  explicit DeductionEngine(std::size_t n, std::vector<std::string> labels = {},
                           RuleSet rules = {})
      : table_(n, std::move(labels)), rules_(std::move(rules)) {}

  [[nodiscard]] PartialTable const& table() const noexcept { return table_; }
  [[nodiscard]] Trace const& trace() const noexcept { return trace_; }
  [[nodiscard]] std::optional<Conflict> const& conflict() const noexcept { return conflict_; }

  // Adds a given fact.  Returns false (and records the conflict) when it
  // contradicts what is already known.
  bool seed(Element x, Element y, Element v, std::string note) {
    Step s;
    s.rule = Rule::seed;
    s.x = x, s.y = y, s.v = v;
    s.note = std::move(note);
    return record(std::move(s));
  }

  bool assume(Element x, Element y, Element v) {
    Step s;
    s.rule = Rule::assume;
    s.x = x, s.y = y, s.v = v;
    s.note = "case split";
    return record(std::move(s));
  }

  DeductionOutcome saturate() {
    while (!conflict_) {
      bool changed = false;
      for (Rule r : rules_.order) {
        std::size_t const before = table_.known_count();
        apply(r);
        if (conflict_) {
          break;
        }
        if (table_.known_count() != before) {
          changed = true;
          break;  // restart from the cheapest rule
        }
      }
      if (!changed) {
        break;
      }
    }
    if (!conflict_) {
      check_latin_dead_ends();
    }
    return outcome();
  }

  [[nodiscard]] DeductionOutcome outcome() const {
    DeductionOutcome o;
    o.trace = trace_;
    o.state = table_;
    if (conflict_) {
      o.kind = DeductionOutcome::Kind::contradiction;
      o.conflict = conflict_;
    } else if (table_.complete()) {
      o.kind = DeductionOutcome::Kind::completed;
      o.table = table_.to_table();
    } else {
      o.kind = DeductionOutcome::Kind::stuck;
    }
    return o;
  }

 private:
  bool record(Step s) {
    if (conflict_) {
      return false;
    }
    int const cur = table_.at(s.x, s.y);
    if (cur >= 0) {
      if (cur == static_cast<int>(s.v)) {
        return true;
      }
      fail(ConflictKind::clash, std::move(s),
           "cell already holds " + table_.name(static_cast<Element>(cur)));
      return false;
    }
    if (int c = table_.row_pos(s.x, s.v); c >= 0) {
      fail(ConflictKind::row_repeat, std::move(s),
           "value already at column " + table_.name(static_cast<Element>(c)));
      return false;
    }
    if (int r = table_.col_pos(s.y, s.v); r >= 0) {
      fail(ConflictKind::column_repeat, std::move(s),
           "value already at row " + table_.name(static_cast<Element>(r)));
      return false;
    }
    table_.put(s.x, s.y, s.v);
    trace_.push_back(std::move(s));
    return true;
  }

  void fail(ConflictKind kind, Step s, std::string detail, bool along_column = false,
            bool instance_only = false) {
    conflict_ = Conflict{kind, std::move(s), along_column, instance_only, std::move(detail)};
  }

  void apply(Rule r) {
    switch (r) {
      case Rule::idempotency: apply_idempotency(); return;
      case Rule::latin_naked: apply_naked(); return;
      case Rule::latin_hidden_row: apply_hidden(false); return;
      case Rule::latin_hidden_column: apply_hidden(true); return;
      case Rule::alterability: apply_alterability(); return;
      case Rule::seed:
      case Rule::assume: return;
      default:
        for (auto const& law : detail::all_laws()) {
          if (law.rule == r) {
            apply_law(law);
            if (conflict_) {
              return;
            }
          }
        }
    }
  }

  void apply_idempotency() {
    for (Element x = 0; x < table_.order() && !conflict_; ++x) {
      if (!table_.known(x, x)) {
        Step s;
        s.rule = Rule::idempotency;
        s.x = x, s.y = x, s.v = x;
        s.arity = 1;
        s.vars[0] = x;
        record(std::move(s));
      }
    }
  }

  void apply_naked() {
    std::size_t const n = table_.order();
    for (Element x = 0; x < n && !conflict_; ++x) {
      for (Element y = 0; y < n && !conflict_; ++y) {
        if (table_.known(x, y)) {
          continue;
        }
        std::uint64_t const cand = table_.candidates(x, y);
        if (cand == 0) {
          Step s;
          s.rule = Rule::latin_naked;
          s.x = x, s.y = y;
          fail(ConflictKind::empty_cell, std::move(s), "no value fits");
          return;
        }
        if (std::popcount(cand) == 1) {
          Step s;
          s.rule = Rule::latin_naked;
          s.x = x, s.y = y;
          s.v = static_cast<Element>(std::countr_zero(cand));
          for (Element u = 0; u < n; ++u) {
            if (u == s.v) {
              continue;
            }
            if (int c = table_.row_pos(x, u); c >= 0) {
              s.premises.emplace_back(x, c);
            } else {
              s.premises.emplace_back(table_.col_pos(y, u), y);
            }
          }
          record(std::move(s));
        }
      }
    }
  }

  // A value missing from a line that fits in exactly one of its cells.
  void apply_hidden(bool columns) {
    std::size_t const n = table_.order();
    for (Element line = 0; line < n && !conflict_; ++line) {
      std::uint64_t const have = columns ? table_.col_mask(line) : table_.row_mask(line);
      for (Element v = 0; v < n && !conflict_; ++v) {
        if (have >> v & 1) {
          continue;
        }
        int place = -1;
        int count = 0;
        for (Element j = 0; j < n; ++j) {
          Element const x = columns ? j : line;
          Element const y = columns ? line : j;
          if (!table_.known(x, y) && (table_.candidates(x, y) >> v & 1)) {
            place = static_cast<int>(j);
            ++count;
          }
        }
        Step s;
        s.rule = columns ? Rule::latin_hidden_column : Rule::latin_hidden_row;
        s.v = v;
        if (count == 0) {
          s.x = columns ? 0 : line;
          s.y = columns ? line : 0;
          fail(ConflictKind::no_place, std::move(s),
               "value " + table_.name(v) + " fits nowhere in " + (columns ? "column " : "row ") +
                   table_.name(line),
               columns);
          return;
        }
        if (count == 1) {
          s.x = columns ? static_cast<Element>(place) : line;
          s.y = columns ? line : static_cast<Element>(place);
          for (Element j = 0; j < n; ++j) {
            Element const x = columns ? j : line;
            Element const y = columns ? line : j;
            if (static_cast<int>(j) == place || table_.known(x, y)) {
              continue;
            }
            int const r = table_.col_pos(y, v);
            int const c = table_.row_pos(x, v);
            s.premises.push_back(r >= 0 ? Cell(r, y) : Cell(x, c));
          }
          record(std::move(s));
        }
      }
    }
  }

  // xy = zw  =>  yz = wx, over pairs of cells holding the same value.
  void apply_alterability() {
    std::size_t const n = table_.order();
    std::vector<std::vector<Cell>> by_value(n);
    for (Element x = 0; x < n; ++x) {
      for (Element y = 0; y < n; ++y) {
        if (table_.known(x, y)) {
          by_value[table_.at(x, y)].emplace_back(x, y);
        }
      }
    }
    for (auto const& cells : by_value) {
      for (auto const& [x, y] : cells) {
        for (auto const& [z, w] : cells) {
          int const p = table_.at(y, z);
          int const q = table_.at(w, x);
          if ((p >= 0) == (q >= 0)) {
            if (p >= 0 && p != q) {
              Step s;
              s.rule = Rule::alterability;
              s.arity = 4;
              s.vars = {x, y, z, w};
              s.premises = {{x, y}, {z, w}, {y, z}, {w, x}};
              fail(ConflictKind::clash, std::move(s), "yz != wx", false, true);
              return;
            }
            continue;
          }
          Step s;
          s.rule = Rule::alterability;
          s.arity = 4;
          s.vars = {x, y, z, w};
          if (p >= 0) {
            s.x = w, s.y = x, s.v = static_cast<Element>(p);
            s.premises = {{x, y}, {z, w}, {y, z}};
          } else {
            s.x = y, s.y = z, s.v = static_cast<Element>(q);
            s.premises = {{x, y}, {z, w}, {w, x}};
          }
          if (!record(std::move(s))) {
            return;
          }
        }
      }
    }
  }

  void apply_law(detail::Law const& law) {
    auto const n = static_cast<Element>(table_.order());
    std::array<Element, 4> vars{};
    std::size_t const arity = law.arity;
    while (true) {
      auto d = detail::InstanceEvaluator(table_, law, vars).run();
      if (d.kind != detail::Derivation::Kind::nothing) {
        Step s;
        s.rule = law.rule;
        s.form = law.form;
        s.arity = law.arity;
        s.vars = vars;
        s.premises = std::move(d.premises);
        if (d.kind == detail::Derivation::Kind::clash) {
          fail(ConflictKind::clash, std::move(s), "instance evaluates to two values", false, true);
          return;
        }
        s.x = d.x, s.y = d.y, s.v = d.v;
        if (!record(std::move(s))) {
          return;
        }
      }
      std::size_t i = arity;
      while (i > 0) {
        --i;
        if (++vars[i] < n) {
          break;
        }
        vars[i] = 0;
        if (i == 0) {
          return;
        }
      }
    }
  }

  // Dead ends the hidden-single rules do not visit once nothing changes.
  void check_latin_dead_ends() {
    apply_naked();
    if (!conflict_) {
      apply_hidden(false);
    }
    if (!conflict_) {
      apply_hidden(true);
    }
  }

  PartialTable table_;
  RuleSet rules_;
  Trace trace_;
  std::optional<Conflict> conflict_;
};

// ---------------------------------------------------------------------------
// Trace export

inline std::string format_step(Step const& s, PartialTable const& names) {
  std::ostringstream out;
  out << "cell(" << names.name(s.x) << ',' << names.name(s.y) << ") := " << names.name(s.v)
      << "  by " << rule_name(s.rule);
  if (!s.note.empty()) {
    out << '(' << s.note << ')';
  }
  out << " from [";
  for (std::size_t i = 0; i < s.premises.size(); ++i) {
    auto const [a, b] = s.premises[i];
    out << (i ? ", " : "") << "cell(" << names.name(a) << ',' << names.name(b) << ')';
  }
  out << ']';
  return out.str();
}

inline std::string format_conflict(Conflict const& c, PartialTable const& names) {
  std::ostringstream out;
  out << "CONTRADICTION " << conflict_name(c.kind) << ": ";
  switch (c.kind) {
    case ConflictKind::empty_cell:
      out << "cell(" << names.name(c.step.x) << ',' << names.name(c.step.y) << ")";
      break;
    case ConflictKind::no_place:
      out << c.detail;
      return out.str();
    default:
      if (c.instance_only) {
        out << rule_name(c.step.rule) << " instance (";
        for (std::size_t i = 0; i < c.step.arity; ++i) {
          out << (i ? "," : "") << names.name(c.step.vars[i]);
        }
        out << ")";
      } else {
        out << format_step(c.step, names);
      }
  }
  out << " -- " << c.detail;
  return out.str();
}

inline std::string format_trace(Trace const& trace, std::optional<Conflict> const& conflict,
                                PartialTable const& names) {
  std::string out;
  for (auto const& s : trace) {
    out += format_step(s, names);
    out += '\n';
  }
  if (conflict) {
    out += format_conflict(*conflict, names);
    out += '\n';
  }
  return out;
}

// ---------------------------------------------------------------------------
// Replay

struct ReplayReport {
  bool ok = false;
  std::size_t steps_checked = 0;
  bool conflict_confirmed = false;
  std::string message;
};

namespace detail {

// Minimal table for replay: cells only, lookups by scanning.
class ReplayTable {
 public:
  explicit ReplayTable(std::size_t n) : n_(n), cells_(n * n, -1) {}
  std::size_t order() const { return n_; }
  int at(Element x, Element y) const { return cells_[x * n_ + y]; }
  void put(Element x, Element y, Element v) { cells_[x * n_ + y] = static_cast<int>(v); }
  int find_in_row(Element x, Element v) const {
    for (Element j = 0; j < n_; ++j) {
      if (at(x, j) == static_cast<int>(v)) return static_cast<int>(j);
    }
    return -1;
  }
  int find_in_col(Element y, Element v) const {
    for (Element i = 0; i < n_; ++i) {
      if (at(i, y) == static_cast<int>(v)) return static_cast<int>(i);
    }
    return -1;
  }
  bool fits(Element x, Element y, Element v) const {
    return at(x, y) < 0 && find_in_row(x, v) < 0 && find_in_col(y, v) < 0;
  }

 private:
  std::size_t n_;
  std::vector<int> cells_;
};

// Evaluates a term; the result is the element or -1.
inline int replay_eval(ReplayTable const& t, Law const& law, int node,
                       std::array<Element, 4> const& vars) {
  auto const& nd = law.nodes[node];
  if (nd.var >= 0) {
    return static_cast<int>(vars[nd.var]);
  }
  int a = replay_eval(t, law, nd.left, vars);
  int b = replay_eval(t, law, nd.right, vars);
  return (a < 0 || b < 0) ? -1 : t.at(static_cast<Element>(a), static_cast<Element>(b));
}

// Solves term(node) = target for the one unknown cell it pins, if any.
// Returns {x, y, v} or nothing; `bad` is set when the target is impossible.
inline std::optional<std::array<Element, 3>> replay_solve(ReplayTable const& t, Law const& law,
                                                          int node, Element target,
                                                          std::array<Element, 4> const& vars,
                                                          bool& bad) {
  auto const& nd = law.nodes[node];
  if (nd.var >= 0) {
    bad = vars[nd.var] != target;
    return std::nullopt;
  }
  int a = replay_eval(t, law, nd.left, vars);
  int b = replay_eval(t, law, nd.right, vars);
  if (a >= 0 && b >= 0) {
    int const cur = t.at(static_cast<Element>(a), static_cast<Element>(b));
    if (cur >= 0) {
      bad = cur != static_cast<int>(target);
      return std::nullopt;
    }
    return std::array<Element, 3>{static_cast<Element>(a), static_cast<Element>(b), target};
  }
  if (a >= 0) {
    int c = t.find_in_row(static_cast<Element>(a), target);
    if (c >= 0) return replay_solve(t, law, nd.right, static_cast<Element>(c), vars, bad);
  } else if (b >= 0) {
    int r = t.find_in_col(static_cast<Element>(b), target);
    if (r >= 0) return replay_solve(t, law, nd.left, static_cast<Element>(r), vars, bad);
  }
  return std::nullopt;
}

// Re-derives what `s` claims from the replay table alone.  Returns the
// conclusion {x, y, v}; `clash` reports an instance that fails outright.
inline std::optional<std::array<Element, 3>> rederive(ReplayTable const& t, Step const& s,
                                                      bool& clash, std::string& why) {
  std::size_t const n = t.order();
  clash = false;
  switch (s.rule) {
    case Rule::seed:
    case Rule::assume:
      return std::array<Element, 3>{s.x, s.y, s.v};
    case Rule::idempotency:
      return std::array<Element, 3>{s.vars[0], s.vars[0], s.vars[0]};
    case Rule::latin_naked: {
      if (t.at(s.x, s.y) >= 0) {
        why = "cell already known";
        return std::nullopt;
      }
      std::vector<Element> fit;
      for (Element v = 0; v < n; ++v) {
        if (t.find_in_row(s.x, v) < 0 && t.find_in_col(s.y, v) < 0) fit.push_back(v);
      }
      if (fit.size() != 1) {
        why = std::to_string(fit.size()) + " values fit";
        return std::nullopt;
      }
      return std::array<Element, 3>{s.x, s.y, fit[0]};
    }
    case Rule::latin_hidden_row:
    case Rule::latin_hidden_column: {
      bool const col = s.rule == Rule::latin_hidden_column;
      Element const line = col ? s.y : s.x;
      if ((col ? t.find_in_col(line, s.v) : t.find_in_row(line, s.v)) >= 0) {
        why = "value already placed";
        return std::nullopt;
      }
      std::vector<Element> places;
      for (Element j = 0; j < n; ++j) {
        Element x = col ? j : line, y = col ? line : j;
        if (t.fits(x, y, s.v)) places.push_back(j);
      }
      if (places.size() != 1) {
        why = std::to_string(places.size()) + " places fit";
        return std::nullopt;
      }
      return col ? std::array<Element, 3>{places[0], line, s.v}
                 : std::array<Element, 3>{line, places[0], s.v};
    }
    case Rule::alterability: {
      auto [x, y, z, w] = s.vars;
      int e1 = t.at(x, y), e2 = t.at(z, w);
      if (e1 < 0 || e1 != e2) {
        why = "xy = zw not established";
        return std::nullopt;
      }
      int p = t.at(y, z), q = t.at(w, x);
      if (p >= 0 && q >= 0) {
        clash = p != q;
        return std::nullopt;
      }
      if (p >= 0) return std::array<Element, 3>{w, x, static_cast<Element>(p)};
      if (q >= 0) return std::array<Element, 3>{y, z, static_cast<Element>(q)};
      why = "neither yz nor wx known";
      return std::nullopt;
    }
    default: {
      Law const* law = find_law(s.rule, s.form);
      if (!law) {
        why = "unknown law";
        return std::nullopt;
      }
      int l = replay_eval(t, *law, law->lhs, s.vars);
      int r = replay_eval(t, *law, law->rhs, s.vars);
      if (l >= 0 && r >= 0) {
        clash = l != r;
        return std::nullopt;
      }
      if (l < 0 && r < 0) {
        why = "neither side known";
        return std::nullopt;
      }
      bool bad = false;
      auto res = replay_solve(t, *law, l < 0 ? law->lhs : law->rhs,
                              static_cast<Element>(l < 0 ? r : l), s.vars, bad);
      clash = bad;
      if (!res && !bad) why = "instance pins no cell";
      return res;
    }
  }
}

}  // namespace detail

// Re-runs a trace step by step on an empty table of order n.  Each step
// must follow from earlier ones by its rule; a final conflict, if given,
// must be reproduced.
inline ReplayReport replay(std::size_t n, Trace const& trace,
                           std::optional<Conflict> const& conflict = std::nullopt) {
  ReplayReport rep;
  detail::ReplayTable t(n);
  for (auto const& s : trace) {
    bool clash = false;
    std::string why;
    auto c = detail::rederive(t, s, clash, why);
    std::string const where = "step " + std::to_string(rep.steps_checked) + " (" +
                              std::string(rule_name(s.rule)) + "): ";
    if (!c) {
      rep.message = where + (clash ? "instance fails" : why);
      return rep;
    }
    if ((*c)[0] != s.x || (*c)[1] != s.y || (*c)[2] != s.v) {
      rep.message = where + "derives a different cell or value";
      return rep;
    }
    if (!t.fits(s.x, s.y, s.v)) {
      rep.message = where + "conclusion breaks the latin property or overwrites a cell";
      return rep;
    }
    t.put(s.x, s.y, s.v);
    ++rep.steps_checked;
  }
  if (!conflict) {
    rep.ok = true;
    return rep;
  }
  Step const& s = conflict->step;
  switch (conflict->kind) {
    case ConflictKind::empty_cell: {
      bool any = false;
      for (Element v = 0; v < n; ++v) any = any || t.fits(s.x, s.y, v);
      rep.conflict_confirmed = t.at(s.x, s.y) < 0 && !any;
      break;
    }
    case ConflictKind::no_place: {
      Element const line = conflict->along_column ? s.y : s.x;
      bool placed = conflict->along_column ? t.find_in_col(line, s.v) >= 0
                                           : t.find_in_row(line, s.v) >= 0;
      bool any = false;
      for (Element j = 0; j < n; ++j) {
        any = any || (conflict->along_column ? t.fits(j, line, s.v) : t.fits(line, j, s.v));
      }
      rep.conflict_confirmed = !placed && !any;
      break;
    }
    default: {
      bool clash = false;
      std::string why;
      auto c = detail::rederive(t, s, clash, why);
      if (conflict->instance_only) {
        rep.conflict_confirmed = clash;
      } else if (c) {
        auto [x, y, v] = *c;
        rep.conflict_confirmed = !t.fits(x, y, v) && t.at(x, y) != static_cast<int>(v);
      }
    }
  }
  rep.ok = rep.conflict_confirmed;
  if (!rep.ok) {
    rep.message = "final conflict does not reproduce";
  }
  return rep;
}

}  // namespace quadlat
