#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <future>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include <json.hpp>

#include "quadlat/errors.hpp"
#include "quadlat/zm_linear.hpp"

namespace quadlat {

struct ClassificationRow {
  std::uint64_t m = 0;
  std::uint64_t a = 0;
  std::uint64_t b = 0;
  std::uint64_t k = 0;

  friend bool operator==(ClassificationRow const&, ClassificationRow const&) = default;
};

enum class SweepKind { scan, classify };

// Re-checks a row against the congruence, the k equation and the dual pair.
inline void verify_row(ClassificationRow const& r) {
  auto bad = [&r](std::string const& what) {
    throw InvariantViolation("row m=" + std::to_string(r.m) + " a=" + std::to_string(r.a) +
                             ": " + what);
  };
  if (r.m < 2 || r.a >= r.m || r.b >= r.m) bad("coefficients out of range");
  if (!solves_quadratic_congruence(r.m, r.a)) bad("a does not solve 2a^2-2a+1 = 0");
  if ((r.a + r.b) % r.m != 1 % r.m) bad("a + b != 1");
  if (((r.a + r.m - 1) % r.m) * r.k % r.m != r.a) bad("(a-1)k != a");
  if (r.k == 0 || r.k >= r.m) bad("k outside 1..m-1");
  std::uint64_t const kd = translatability_k_quadratical(r.m, r.b);
  if (r.k + kd != r.m) bad("k(a) + k(1-a) != m");
  if (r.k == kd) bad("k(a) == k(1-a)");
}

// Rows contributed by a single modulus.
inline std::vector<ClassificationRow> rows_for_modulus(std::uint64_t m, SweepKind kind,
                                                       std::uint64_t max_k) {
  std::vector<ClassificationRow> out;
  if (m < 2) {
    return out;
  }
  for (std::uint64_t a : solve_quadratic_congruence(m)) {
    ClassificationRow r{m, a, (m + 1 - a) % m, translatability_k_quadratical(m, a)};
    verify_row(r);
    if (kind == SweepKind::scan ? r.k < max_k : r.a < r.b) {
      out.push_back(r);
    }
  }
  return out;
}

inline void sort_rows(std::vector<ClassificationRow>& rows, SweepKind kind) {
  if (kind == SweepKind::scan) {
    std::sort(rows.begin(), rows.end(), [](auto const& x, auto const& y) {
      return std::tie(x.k, x.m, x.a) < std::tie(y.k, y.m, y.a);
    });
  } else {
    std::sort(rows.begin(), rows.end(), [](auto const& x, auto const& y) {
      return std::tie(x.m, x.a) < std::tie(y.m, y.a);
    });
  }
}

// Moduli first..last, split into `jobs` interleaved shards.  The merged,
// sorted result does not depend on the job count.
inline std::vector<ClassificationRow> sweep_range(std::uint64_t first, std::uint64_t last,
                                                  SweepKind kind, std::uint64_t max_k,
                                                  std::size_t jobs = 1) {
  std::vector<ClassificationRow> rows;
  if (first > last) {
    return rows;
  }
  if (jobs == 0) {
    jobs = std::max(1u, std::thread::hardware_concurrency());
  }
  if (jobs == 1) {
    for (std::uint64_t m = first; m <= last; ++m) {
      auto r = rows_for_modulus(m, kind, max_k);
      rows.insert(rows.end(), r.begin(), r.end());
    }
  } else {
    std::vector<std::future<std::vector<ClassificationRow>>> shards;
    for (std::size_t s = 0; s < jobs; ++s) {
      shards.push_back(std::async(std::launch::async, [=] {
        std::vector<ClassificationRow> part;
        for (std::uint64_t m = first + s; m <= last; m += jobs) {
          auto r = rows_for_modulus(m, kind, max_k);
          part.insert(part.end(), r.begin(), r.end());
        }
        return part;
      }));
    }
    for (auto& f : shards) {
      auto part = f.get();
      rows.insert(rows.end(), part.begin(), part.end());
    }
  }
  sort_rows(rows, kind);
  return rows;
}

// Every (m, a) with m <= max_m and k < max_k, sorted by (k, m, a).
inline std::vector<ClassificationRow> scan_k_table(std::uint64_t max_m, std::uint64_t max_k,
                                                   std::size_t jobs = 1) {
  return sweep_range(2, max_m, SweepKind::scan, max_k, jobs);
}

// One row per dual pair (a < b), m <= max_m, sorted by (m, a).
inline std::vector<ClassificationRow> classify(std::uint64_t max_m, std::size_t jobs = 1) {
  return sweep_range(2, max_m, SweepKind::classify, 0, jobs);
}

// ---------------------------------------------------------------------------
// Output

enum class RowFormat { csv, json };

inline std::string csv_header(SweepKind kind) {
  return kind == SweepKind::scan ? "k,m,a,b" : "m,a,b,k";
}

inline std::string to_csv(std::vector<ClassificationRow> const& rows, SweepKind kind) {
  std::ostringstream out;
  out << csv_header(kind) << '\n';
  for (auto const& r : rows) {
    if (kind == SweepKind::scan) {
      out << r.k << ',' << r.m << ',' << r.a << ',' << r.b << '\n';
    } else {
      out << r.m << ',' << r.a << ',' << r.b << ',' << r.k << '\n';
    }
  }
  return out.str();
}

inline nlohmann::ordered_json to_json_value(std::vector<ClassificationRow> const& rows,
                                            SweepKind kind) {
  auto arr = nlohmann::ordered_json::array();
  for (auto const& r : rows) {
    nlohmann::ordered_json o;
    if (kind == SweepKind::scan) {
      o["k"] = r.k, o["m"] = r.m, o["a"] = r.a, o["b"] = r.b;
    } else {
      o["m"] = r.m, o["a"] = r.a, o["b"] = r.b, o["k"] = r.k;
    }
    arr.push_back(std::move(o));
  }
  return arr;
}

inline std::string to_json(std::vector<ClassificationRow> const& rows, SweepKind kind) {
  return to_json_value(rows, kind).dump(2) + "\n";
}

inline std::string render_rows(std::vector<ClassificationRow> const& rows, SweepKind kind,
                               RowFormat format) {
  return format == RowFormat::csv ? to_csv(rows, kind) : to_json(rows, kind);
}

namespace detail {

// Writes through a sibling temp file so a crash never leaves half a file.
inline void write_file_atomic(std::filesystem::path const& path, std::string const& content) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw IoError("cannot write '" + tmp.string() + "'");
    }
    out << content;
    out.flush();
    if (!out) {
      throw IoError("write failed for '" + tmp.string() + "'");
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    throw IoError("cannot replace '" + path.string() + "': " + ec.message());
  }
}

inline std::string read_file(std::filesystem::path const& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open '" + path.string() + "'");
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace detail

inline void emit(std::vector<ClassificationRow> const& rows, SweepKind kind, RowFormat format,
                 std::filesystem::path const& path) {
  detail::write_file_atomic(path, render_rows(rows, kind, format));
}

// Parses CSV produced by to_csv (or a hand transcription with the same
// header).  Columns may appear in either documented order.
inline std::vector<ClassificationRow> parse_rows_csv(std::string const& text,
                                                     std::string const& source = "<csv>") {
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  std::vector<ClassificationRow> rows;
  std::optional<SweepKind> kind;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (!kind) {
      if (line == csv_header(SweepKind::scan)) {
        kind = SweepKind::scan;
      } else if (line == csv_header(SweepKind::classify)) {
        kind = SweepKind::classify;
      } else {
        throw FormatError(source + ":" + std::to_string(line_no) + ": unknown header '" + line +
                          "'");
      }
      continue;
    }
    std::array<std::uint64_t, 4> v{};
    std::istringstream ls(line);
    std::string cell;
    std::size_t i = 0;
    while (std::getline(ls, cell, ',')) {
      std::size_t pos = 0;
      try {
        if (i >= 4 || cell.empty() || cell[0] == '-') throw std::invalid_argument("bad");
        v[i] = std::stoull(cell, &pos);
      } catch (std::exception const&) {
        throw FormatError(source + ":" + std::to_string(line_no) + ": bad field '" + cell + "'");
      }
      if (pos != cell.size()) {
        throw FormatError(source + ":" + std::to_string(line_no) + ": bad field '" + cell + "'");
      }
      ++i;
    }
    if (i != 4) {
      throw FormatError(source + ":" + std::to_string(line_no) + ": expected 4 fields");
    }
    rows.push_back(*kind == SweepKind::scan ? ClassificationRow{v[1], v[2], v[3], v[0]}
                                            : ClassificationRow{v[0], v[1], v[2], v[3]});
  }
  if (!kind) {
    throw FormatError(source + ": missing header");
  }
  return rows;
}

// ---------------------------------------------------------------------------
// Checkpointed sweep
//
// The checkpoint is a small text file:
//   last_m=<int>
//   kind=scan|classify
//   max_k=<int>
// and the rows found so far live next to it in "<checkpoint>.rows" as CSV.
// Both are rewritten atomically after each batch of moduli.

struct SweepConfig {
  SweepKind kind = SweepKind::scan;
  std::uint64_t max_m = 0;
  std::uint64_t max_k = 40;
  std::size_t jobs = 1;
  std::filesystem::path checkpoint;  // empty: no checkpointing
  std::uint64_t batch = 100;         // moduli per checkpoint write
  // Testing hook: stop (as if interrupted) once this modulus is done.
  std::optional<std::uint64_t> stop_after;
};

struct SweepResult {
  std::vector<ClassificationRow> rows;  // complete, sorted
  std::uint64_t resumed_from = 0;       // last_m read from the checkpoint, 0 if none
  std::uint64_t computed_from = 0;      // first modulus computed in this run
  std::size_t new_rows = 0;             // rows found by this run
  bool interrupted = false;
};

struct Checkpoint {
  std::uint64_t last_m = 0;
  SweepKind kind = SweepKind::scan;
  std::uint64_t max_k = 0;
};

inline std::filesystem::path rows_path(std::filesystem::path const& checkpoint) {
  auto p = checkpoint;
  p += ".rows";
  return p;
}

inline Checkpoint parse_checkpoint(std::string const& text, std::string const& source) {
  std::istringstream in(text);
  std::map<std::string, std::string> fields;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw FormatError(source + ": corrupt checkpoint line '" + line + "'");
    }
    fields[line.substr(0, eq)] = line.substr(eq + 1);
  }
  auto number = [&](std::string const& key) -> std::uint64_t {
    auto it = fields.find(key);
    if (it == fields.end()) {
      throw FormatError(source + ": corrupt checkpoint, missing " + key);
    }
    std::size_t pos = 0;
    std::uint64_t v = 0;
    try {
      if (it->second.empty() || it->second[0] == '-') throw std::invalid_argument("neg");
      v = std::stoull(it->second, &pos);
    } catch (std::exception const&) {
      pos = std::string::npos;
    }
    if (pos != it->second.size()) {
      throw FormatError(source + ": corrupt checkpoint, bad " + key + " '" + it->second + "'");
    }
    return v;
  };
  Checkpoint c;
  c.last_m = number("last_m");
  c.max_k = number("max_k");
  auto kind = fields.find("kind");
  if (kind == fields.end() || (kind->second != "scan" && kind->second != "classify")) {
    throw FormatError(source + ": corrupt checkpoint, bad kind");
  }
  c.kind = kind->second == "scan" ? SweepKind::scan : SweepKind::classify;
  return c;
}

inline std::string format_checkpoint(Checkpoint const& c) {
  return "last_m=" + std::to_string(c.last_m) +
         "\nkind=" + (c.kind == SweepKind::scan ? "scan" : "classify") +
         "\nmax_k=" + std::to_string(c.max_k) + "\n";
}

// Runs (or resumes) a sweep to cfg.max_m.  A checkpoint that cannot be
// parsed, belongs to a different sweep, or disagrees with its rows file is
// refused with FormatError; the sweep never silently restarts.
inline SweepResult run_sweep(SweepConfig const& cfg) {
  SweepResult res;
  std::vector<ClassificationRow> rows;
  std::uint64_t const max_k = cfg.kind == SweepKind::scan ? cfg.max_k : 0;
  std::uint64_t done = 1;
  bool const checkpointing = !cfg.checkpoint.empty();
  if (checkpointing && std::filesystem::exists(cfg.checkpoint)) {
    std::string const src = cfg.checkpoint.string();
    Checkpoint c = parse_checkpoint(detail::read_file(cfg.checkpoint), src);
    if (c.kind != cfg.kind || c.max_k != max_k) {
      throw FormatError(src + ": checkpoint belongs to a different sweep");
    }
    auto const rp = rows_path(cfg.checkpoint);
    if (!std::filesystem::exists(rp)) {
      throw FormatError(src + ": rows file '" + rp.string() + "' is missing");
    }
    rows = parse_rows_csv(detail::read_file(rp), rp.string());
    for (auto const& r : rows) {
      if (r.m > c.last_m) {
        throw FormatError(rp.string() + ": row with m=" + std::to_string(r.m) +
                          " beyond last_m=" + std::to_string(c.last_m));
      }
      verify_row(r);
    }
    res.resumed_from = c.last_m;
    done = std::max<std::uint64_t>(c.last_m, 1);
  }
  res.computed_from = done + 1;
  auto save = [&](std::uint64_t last) {
    if (!checkpointing) return;
    auto sorted = rows;
    sort_rows(sorted, cfg.kind);
    detail::write_file_atomic(rows_path(cfg.checkpoint), to_csv(sorted, cfg.kind));
    detail::write_file_atomic(cfg.checkpoint, format_checkpoint({last, cfg.kind, max_k}));
  };
  std::uint64_t const batch = std::max<std::uint64_t>(1, cfg.batch);
  for (std::uint64_t first = done + 1; first <= cfg.max_m; first += batch) {
    std::uint64_t last = std::min(cfg.max_m, first + batch - 1);
    if (cfg.stop_after && *cfg.stop_after < last) {
      last = std::max(first - 1, *cfg.stop_after);
    }
    if (last >= first) {
      auto part = sweep_range(first, last, cfg.kind, max_k, cfg.jobs);
      res.new_rows += part.size();
      rows.insert(rows.end(), part.begin(), part.end());
      save(last);
    }
    if (cfg.stop_after && *cfg.stop_after <= last) {
      res.interrupted = last < cfg.max_m;
      break;
    }
  }
  std::erase_if(rows, [&](ClassificationRow const& r) { return r.m > cfg.max_m; });
  sort_rows(rows, cfg.kind);
  res.rows = std::move(rows);
  return res;
}

// ---------------------------------------------------------------------------
// Discrepancy report against a transcribed reference table

struct Discrepancy {
  enum class Kind { field_differs, missing_from_reference, absent_from_output, out_of_bounds };
  Kind kind;
  ClassificationRow reference;  // meaningful unless missing_from_reference
  ClassificationRow computed;   // meaningful unless absent_from_output / out_of_bounds
  std::string note;
};

struct DiscrepancyReport {
  std::vector<Discrepancy> items;
  [[nodiscard]] bool clean() const { return items.empty(); }
  [[nodiscard]] std::string to_text() const;
};

inline std::string format_row(ClassificationRow const& r) {
  return "k=" + std::to_string(r.k) + " m=" + std::to_string(r.m) + " a=" + std::to_string(r.a) +
         " b=" + std::to_string(r.b);
}

inline std::string DiscrepancyReport::to_text() const {
  std::ostringstream out;
  if (items.empty()) {
    out << "no discrepancies\n";
  }
  for (auto const& d : items) {
    switch (d.kind) {
      case Discrepancy::Kind::field_differs:
        out << "differs: reference " << format_row(d.reference) << ", formula "
            << format_row(d.computed) << " (" << d.note << ")\n";
        break;
      case Discrepancy::Kind::missing_from_reference:
        out << "not in reference: " << format_row(d.computed) << '\n';
        break;
      case Discrepancy::Kind::absent_from_output:
        out << "not reproduced: " << format_row(d.reference) << " (" << d.note << ")\n";
        break;
      case Discrepancy::Kind::out_of_bounds:
        out << "outside sweep bounds: " << format_row(d.reference) << '\n';
        break;
    }
  }
  return out.str();
}

// Matches rows by (m, a); reference rows outside the sweep bounds are listed
// separately rather than as failures.
inline DiscrepancyReport compare_with_reference(std::vector<ClassificationRow> const& computed,
                                                std::vector<ClassificationRow> const& reference,
                                                std::uint64_t max_m) {
  DiscrepancyReport rep;
  std::map<std::pair<std::uint64_t, std::uint64_t>, ClassificationRow> by_key;
  for (auto const& r : computed) {
    by_key[{r.m, r.a}] = r;
  }
  std::map<std::pair<std::uint64_t, std::uint64_t>, bool> matched;
  for (auto const& ref : reference) {
    if (ref.m > max_m) {
      rep.items.push_back({Discrepancy::Kind::out_of_bounds, ref, {}, ""});
      continue;
    }
    auto it = by_key.find({ref.m, ref.a});
    if (it == by_key.end()) {
      std::string why = solves_quadratic_congruence(ref.m, ref.a % std::max<std::uint64_t>(ref.m, 1))
                            ? "a solves the congruence but the row is filtered out"
                            : "a does not solve 2a^2-2a+1 = 0";
      rep.items.push_back({Discrepancy::Kind::absent_from_output, ref, {}, why});
      continue;
    }
    matched[it->first] = true;
    ClassificationRow const& c = it->second;
    if (!(c == ref)) {
      std::string note;
      if (c.b != ref.b) note += "b = 1-a mod m is " + std::to_string(c.b);
      if (c.k != ref.k) {
        if (!note.empty()) note += "; ";
        note += "(a-1)k = a mod m gives k = " + std::to_string(c.k);
      }
      rep.items.push_back({Discrepancy::Kind::field_differs, ref, c, note});
    }
  }
  for (auto const& r : computed) {
    if (!matched.count({r.m, r.a})) {
      rep.items.push_back({Discrepancy::Kind::missing_from_reference, {}, r, ""});
    }
  }
  return rep;
}

}  // namespace quadlat
