// quadlat: command-line front end for the quadlat library.
//
// Exit codes: 0 ok, 1 usage or I/O, 2 precondition/invariant failure,
// 3 search cap exceeded.

#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "quadlat/quadlat.hpp"

namespace {

using namespace quadlat;
using Json = nlohmann::ordered_json;

enum class Format { text, csv, json };

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitInvariant = 2;
constexpr int kExitCap = 3;

struct Common {
  Format format = Format::text;
  std::string output;  // empty: stdout
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--format", c.format, "Output format")
      ->transform(CLI::CheckedTransformer(
          std::map<std::string, Format>{
              {"text", Format::text}, {"csv", Format::csv}, {"json", Format::json}},
          CLI::ignore_case));
  cmd->add_option("-o,--output", c.output, "Write the result here instead of stdout");
}

void write_out(Common const& c, std::string const& content) {
  if (c.output.empty()) {
    std::cout << content;
    return;
  }
  std::ofstream out(c.output, std::ios::binary);
  if (!out) {
    throw IoError("cannot open '" + c.output + "' for writing");
  }
  out << content;
  if (!out) {
    throw IoError("write to '" + c.output + "' failed");
  }
}

std::string json_text(Json const& j) { return j.dump(2) + "\n"; }

// A table given by file or by Z_m coefficients.
struct TableSource {
  std::string path;
  std::optional<std::uint64_t> m;
  std::optional<std::uint64_t> a;
  std::optional<std::uint64_t> b;
  std::uint64_t c = 0;
};

void add_source(CLI::App* cmd, TableSource& s, std::string const& file_flag = "-i,--input") {
  auto* in = cmd->add_option(file_flag, s.path, "Table file");
  auto* m = cmd->add_option("-m,--modulus", s.m, "Modulus of a linear table over Z_m");
  cmd->add_option("-a", s.a, "Coefficient of x")->needs(m);
  cmd->add_option("-b", s.b, "Coefficient of y (default 1-a)")->needs(m);
  cmd->add_option("-c", s.c, "Constant term (requires -b)")->needs(m);
  in->excludes(m);
}

CayleyTable load_source(TableSource const& s) {
  if (!s.path.empty()) {
    return load_table(s.path);
  }
  if (!s.m || !s.a) {
    throw CLI::ValidationError("table", "give -i FILE or -m M -a A");
  }
  if (s.b) {
    return linear_table(LinearSpec::make(static_cast<std::int64_t>(*s.m),
                                         static_cast<std::int64_t>(*s.a),
                                         static_cast<std::int64_t>(*s.b),
                                         static_cast<std::int64_t>(s.c)));
  }
  if (s.c != 0) {
    throw CLI::ValidationError("-c", "a constant term needs an explicit -b");
  }
  return quadratical_over_zm(*s.m, *s.a);
}

// Element by label, falling back to a 0-based index.
Element parse_element(CayleyTable const& t, std::string const& token) {
  if (t.has_labels()) {
    auto const& labels = t.labels();
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (labels[i] == token) {
        return static_cast<Element>(i);
      }
    }
  }
  Element v = 0;
  auto const [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
  if (ec != std::errc{} || ptr != token.data() + token.size() || v >= t.order()) {
    throw PreconditionError("no element '" + token + "' in a table of order " +
                            std::to_string(t.order()));
  }
  return v;
}

Json names_json(CayleyTable const& t, std::span<Element const> xs) {
  Json arr = Json::array();
  for (Element x : xs) {
    arr.push_back(t.name(x));
  }
  return arr;
}

std::string join_names(CayleyTable const& t, std::span<Element const> xs) {
  std::string out;
  for (Element x : xs) {
    if (!out.empty()) {
      out += ' ';
    }
    out += t.name(x);
  }
  return out;
}

template <typename Range>
std::string join(Range const& r, char const* sep = " ") {
  std::ostringstream out;
  bool first = true;
  for (auto const& v : r) {
    out << (first ? "" : sep) << v;
    first = false;
  }
  return out.str();
}

Json table_json(CayleyTable const& t) {
  Json j;
  j["order"] = t.order();
  j["labels"] = t.has_labels() ? Json(t.labels()) : Json(nullptr);
  Json rows = Json::array();
  for (Element x = 0; x < t.order(); ++x) {
    rows.push_back(std::vector<Element>(t.row(x).begin(), t.row(x).end()));
  }
  j["rows"] = std::move(rows);
  return j;
}

std::string render_table(CayleyTable const& t, Format f) {
  switch (f) {
    case Format::text: return to_text(t);
    case Format::json: return json_text(table_json(t));
    case Format::csv: {
      std::ostringstream out;
      for (Element x = 0; x < t.order(); ++x) {
        out << join(t.row(x), ",") << '\n';
      }
      return out.str();
    }
  }
  return {};
}

// ---------------------------------------------------------------------------

struct SolveCmd {
  std::uint64_t m = 0;
  Common io;

  void run() const {
    auto const roots = solve_quadratic_congruence(m);
    switch (io.format) {
      case Format::text: write_out(io, join(roots) + "\n"); break;
      case Format::csv: {
        std::string s = "m,a\n";
        for (auto a : roots) s += std::to_string(m) + "," + std::to_string(a) + "\n";
        write_out(io, s);
        break;
      }
      case Format::json: write_out(io, json_text(Json{{"m", m}, {"solutions", roots}})); break;
    }
  }
};

struct TableCmd {
  TableSource src;
  std::optional<std::size_t> translatable_n;
  std::size_t k = 0;
  Common io;

  void run() const {
    CayleyTable const t = translatable_n ? build_idempotent_k_translatable(*translatable_n, k)
                                         : load_source(src);
    write_out(io, render_table(t, io.format));
  }
};

struct CheckCmd {
  TableSource src;
  bool all = false;
  std::vector<std::string> ids;
  Common io;

  void run() const {
    CayleyTable const t = load_source(src);
    IdentityReport rep;
    std::optional<bool> quadratical;
    if (all || !ids.empty()) {
      std::vector<IdentityId> chosen;
      if (all) {
        chosen.assign(kAllIdentities.begin(), kAllIdentities.end());
      }
      for (auto const& name : ids) {
        auto id = parse_identity(name);
        if (!id) {
          throw CLI::ValidationError("--identity", "unknown identity '" + name + "'");
        }
        chosen.push_back(*id);
      }
      rep = check_identities(t, chosen);
    } else {
      QuadraticalVerdict v = check_quadratical(t);
      quadratical = v.quadratical;
      rep = std::move(v.witness);
    }
    switch (io.format) {
      case Format::text: {
        std::string s;
        for (auto const& [id, v] : rep.verdicts) {
          s += std::string(identity_name(id)) + ": ";
          s += v.holds() ? "holds" : "fails at (" + join_names(t, *v.counterexample) + ")";
          s += '\n';
        }
        if (quadratical) {
          s += std::string("quadratical: ") + (*quadratical ? "yes" : "no") + '\n';
        }
        write_out(io, s);
        break;
      }
      case Format::csv: {
        std::string s = "identity,holds,counterexample\n";
        for (auto const& [id, v] : rep.verdicts) {
          s += std::string(identity_name(id)) + "," + (v.holds() ? "true," : "false,") +
               (v.holds() ? "" : join(*v.counterexample)) + "\n";
        }
        write_out(io, s);
        break;
      }
      case Format::json: {
        Json j;
        j["order"] = t.order();
        Json list = Json::array();
        for (auto const& [id, v] : rep.verdicts) {
          list.push_back({{"identity", identity_name(id)},
                          {"holds", v.holds()},
                          {"counterexample", v.holds() ? Json(nullptr) : Json(*v.counterexample)}});
        }
        j["identities"] = std::move(list);
        j["quadratical"] = quadratical ? Json(*quadratical) : Json(nullptr);
        write_out(io, json_text(j));
        break;
      }
    }
  }
};

struct KCmd {
  TableSource src;
  std::string ordering;
  Common io;

  void run() const {
    std::vector<std::uint64_t> ks;
    if (src.path.empty() && src.m && src.a) {
      if (src.b) {
        ks = translatability_k_linear(LinearSpec::make(
            static_cast<std::int64_t>(*src.m), static_cast<std::int64_t>(*src.a),
            static_cast<std::int64_t>(*src.b), static_cast<std::int64_t>(src.c)));
      } else {
        ks.push_back(translatability_k_quadratical(*src.m, *src.a));
      }
    } else {
      CayleyTable const t = load_source(src);
      Permutation order = identity_permutation(t.order());
      if (!ordering.empty()) {
        order.clear();
        std::istringstream in(ordering);
        std::string tok;
        while (std::getline(in, tok, ',')) {
          order.push_back(parse_element(t, tok));
        }
      }
      for (std::size_t k : all_valid_k(t, order)) {
        ks.push_back(k);
      }
    }
    switch (io.format) {
      case Format::text: write_out(io, ks.empty() ? "none\n" : join(ks) + "\n"); break;
      case Format::csv: {
        std::string s = "k\n";
        for (auto k : ks) s += std::to_string(k) + "\n";
        write_out(io, s);
        break;
      }
      case Format::json: write_out(io, json_text(Json{{"k", ks}})); break;
    }
  }
};

struct OrderSearchCmd {
  TableSource src;
  Common io;

  void run() const {
    CayleyTable const t = load_source(src);
    auto const w = find_translatable_ordering(t);
    switch (io.format) {
      case Format::text:
        write_out(io, w ? "ordering: " + join_names(t, w->ordering) +
                              "\nk: " + std::to_string(w->k) + "\n"
                        : "none\n");
        break;
      case Format::csv:
        write_out(io, w ? "k,ordering\n" + std::to_string(w->k) + "," + join(w->ordering, ";") +
                              "\n"
                        : "k,ordering\n");
        break;
      case Format::json:
        write_out(io, json_text(w ? Json{{"found", true},
                                         {"k", w->k},
                                         {"ordering", w->ordering},
                                         {"labels", names_json(t, w->ordering)}}
                                  : Json{{"found", false}, {"k", nullptr}, {"ordering", nullptr},
                                         {"labels", nullptr}}));
        break;
    }
  }
};

Json decomposition_json(CayleyTable const& t, QnDecomposition const& d) {
  Json blocks = Json::array();
  for (auto const& b : d.blocks) {
    blocks.push_back(names_json(t, b));
  }
  return Json{{"n", d.n},
              {"a", t.name(d.a)},
              {"b", t.name(d.b)},
              {"center", t.name(d.center)},
              {"covers", d.partitions(t.order())},
              {"blocks", std::move(blocks)}};
}

std::string decomposition_text(CayleyTable const& t, QnDecomposition const& d) {
  std::string s = "n: " + std::to_string(d.n) + "\na: " + t.name(d.a) + "\nb: " + t.name(d.b) +
                  "\ncenter: " + t.name(d.center) + "\n";
  for (std::size_t i = 0; i < d.blocks.size(); ++i) {
    s += "H" + std::to_string(i + 1) + ": " + join_names(t, d.blocks[i]) + "\n";
  }
  s += std::string("covers: ") + (d.partitions(t.order()) ? "yes" : "no") + "\n";
  return s;
}

std::string decomposition_csv(CayleyTable const& t, QnDecomposition const& d) {
  std::string s = "block,t1,t2,t3,t4\n";
  for (std::size_t i = 0; i < d.blocks.size(); ++i) {
    s += std::to_string(i + 1);
    for (Element e : d.blocks[i]) s += "," + t.name(e);
    s += "\n";
  }
  return s;
}

struct HChainCmd {
  TableSource src;
  std::string a, b;
  std::size_t n = 1;
  Common io;

  void run() const {
    CayleyTable const t = load_source(src);
    auto const d = h_chain(t, parse_element(t, a), parse_element(t, b), n);
    switch (io.format) {
      case Format::text: write_out(io, decomposition_text(t, d)); break;
      case Format::csv: write_out(io, decomposition_csv(t, d)); break;
      case Format::json: write_out(io, json_text(decomposition_json(t, d))); break;
    }
  }
};

struct DetectFormCmd {
  TableSource src;
  std::string canonical;
  bool seed_labels = false;
  Common io;

  void run() const {
    CayleyTable const t = load_source(src);
    auto const d = detect_form(t);
    if (d && !canonical.empty()) {
      save_table(canonical, canonical_form(t, *d, seed_labels));
    }
    switch (io.format) {
      case Format::text: write_out(io, d ? decomposition_text(t, *d) : "none\n"); break;
      case Format::csv: write_out(io, d ? decomposition_csv(t, *d) : "block,t1,t2,t3,t4\n"); break;
      case Format::json:
        write_out(io, json_text(d ? decomposition_json(t, *d) : Json(nullptr)));
        break;
    }
  }
};

std::string choice_label(std::size_t n, std::size_t choice) {
  return std::to_string(n) + std::to_string(choice);
}

struct CompleteQnCmd {
  std::size_t n = 2;
  std::size_t choice = 1;
  bool minimal = false;
  bool extras = false;
  bool seed_labels = false;
  std::string trace_path;
  std::string table_path;
  Common io;

  void run() const {
    QnOptions opt;
    opt.seeds = minimal ? SeedLevel::minimal : SeedLevel::full;
    opt.rules = extras ? RuleSet::with_extras() : RuleSet{};
    opt.symbolic_labels = seed_labels;
    DeductionOutcome const o = complete_qn(n, choice, opt);
    std::size_t const order = o.state.order();
    ReplayReport const rep = replay(order, o.trace, o.conflict);
    if (!trace_path.empty()) {
      std::ofstream out(trace_path);
      if (!out) {
        throw IoError("cannot open '" + trace_path + "' for writing");
      }
      out << format_trace(o.trace, o.conflict, o.state);
    }
    if (!table_path.empty()) {
      if (o.table) {
        save_table(table_path, *o.table);
      } else {
        std::ofstream out(table_path);
        out << o.state.to_text();
      }
    }
    std::string const conflict = o.conflict ? format_conflict(*o.conflict, o.state) : "";
    switch (io.format) {
      case Format::text: {
        std::string s = "Q" + std::to_string(n) + " aba.a = " + choice_label(n, choice) + ": " +
                        std::string(outcome_name(o.kind)) + "\n";
        s += "known: " + std::to_string(o.state.known_count()) + "/" +
             std::to_string(order * order) + "\n";
        s += "steps: " + std::to_string(o.trace.size()) + "\n";
        if (o.conflict) s += "conflict: " + conflict + "\n";
        s += "replay: " + std::string(rep.ok ? "ok" : "FAILED " + rep.message) + "\n";
        if (o.table) {
          s += std::string("quadratical: ") + (is_quadratical(*o.table) ? "yes" : "no") + "\n";
        }
        write_out(io, s);
        break;
      }
      case Format::csv:
        write_out(io, "n,choice,outcome,known,steps,replay_ok\n" + std::to_string(n) + "," +
                          std::to_string(choice) + "," + std::string(outcome_name(o.kind)) + "," +
                          std::to_string(o.state.known_count()) + "," +
                          std::to_string(o.trace.size()) + "," + (rep.ok ? "true" : "false") +
                          "\n");
        break;
      case Format::json:
        write_out(io, json_text(Json{{"n", n},
                                     {"choice", choice},
                                     {"outcome", outcome_name(o.kind)},
                                     {"known", o.state.known_count()},
                                     {"steps", o.trace.size()},
                                     {"conflict", o.conflict ? Json(conflict) : Json(nullptr)},
                                     {"replay_ok", rep.ok},
                                     {"table", o.table ? table_json(*o.table) : Json(nullptr)}}));
        break;
    }
    if (!rep.ok) {
      throw InvariantViolation("trace replay failed: " + rep.message);
    }
  }
};

struct RefuteCmd {
  std::size_t n = 6;
  std::size_t jobs = 0;
  std::size_t depth = 3;
  Common io;

  void run() const {
    Q6Report const r = refute_qn(n, jobs, depth);
    auto status = [](RefutationCase const& c) -> std::string {
      if (c.refuted) return "refuted";
      if (c.completed_found) return "completed";
      if (c.budget_exhausted) return "budget-exhausted";
      return "unconfirmed";
    };
    auto detail = [](RefutationCase const& c) -> std::string {
      if (c.root.contradiction()) {
        return "contradiction without case split: " +
               format_conflict(*c.root.conflict, c.root.state);
      }
      if (c.root.completed()) {
        return "completed without case split";
      }
      std::size_t contra = 0;
      for (auto const& l : c.leaves) contra += l.kind == DeductionOutcome::Kind::contradiction;
      return "stuck at " + std::to_string(c.root.state.known_count()) + " cells; split into " +
             std::to_string(c.leaves.size()) + " branches, " + std::to_string(contra) +
             " contradictions";
    };
    switch (io.format) {
      case Format::text: {
        std::string s;
        for (auto const& c : r.cases) {
          s += "aba.a = " + choice_label(n, c.choice) + ": " + status(c) + " (" + detail(c) +
               ")\n";
        }
        s += std::string("Q") + std::to_string(n) + ": " +
             (r.all_refuted() ? "no quadratical quasigroup of this form" : "not refuted") + "\n";
        write_out(io, s);
        break;
      }
      case Format::csv: {
        std::string s = "choice,status,root,leaves\n";
        for (auto const& c : r.cases) {
          s += choice_label(n, c.choice) + "," + status(c) + "," +
               std::string(outcome_name(c.root.kind)) + "," + std::to_string(c.leaves.size()) +
               "\n";
        }
        write_out(io, s);
        break;
      }
      case Format::json: {
        Json cases = Json::array();
        for (auto const& c : r.cases) {
          Json leaves = Json::array();
          for (auto const& l : c.leaves) {
            Json assumed = Json::array();
            for (auto const& st : l.assumptions) {
              assumed.push_back(c.root.state.name(st.x) + "." + c.root.state.name(st.y) + " = " +
                                c.root.state.name(st.v));
            }
            leaves.push_back({{"assumptions", std::move(assumed)},
                              {"outcome", outcome_name(l.kind)},
                              {"replay_ok", l.replay_ok},
                              {"summary", l.summary}});
          }
          cases.push_back({{"choice", choice_label(n, c.choice)},
                           {"status", status(c)},
                           {"root", outcome_name(c.root.kind)},
                           {"detail", detail(c)},
                           {"leaves", std::move(leaves)}});
        }
        write_out(io, json_text(Json{{"n", n}, {"all_refuted", r.all_refuted()},
                                     {"cases", std::move(cases)}}));
        break;
      }
    }
    if (!r.all_refuted()) {
      throw InvariantViolation("Q" + std::to_string(n) + " not refuted within depth " +
                               std::to_string(depth));
    }
  }
};

struct DualCmd {
  TableSource src;
  bool starred = false;
  Common io;

  void run() const {
    CayleyTable const t = load_source(src);
    if (starred) {
      if (t.order() % 4 != 1) {
        throw PreconditionError("--starred needs a canonical table of order 4n+1");
      }
      write_out(io, render_table(starred_dual(t, (t.order() - 1) / 4), io.format));
      return;
    }
    write_out(io, render_table(dual(t), io.format));
  }
};

struct ProductCmd {
  std::string lhs, rhs;
  Common io;

  void run() const {
    write_out(io, render_table(direct_product(load_table(lhs), load_table(rhs)), io.format));
  }
};

struct IsoCmd {
  TableSource src;
  std::string other;
  Common io;

  void run() const {
    CayleyTable const from = load_source(src);
    CayleyTable const to = load_table(other);
    auto const phi = find_isomorphism(from, to);
    switch (io.format) {
      case Format::text: {
        if (!phi) {
          write_out(io, "none\n");
          break;
        }
        std::string s;
        for (Element x = 0; x < from.order(); ++x) {
          s += from.name(x) + " -> " + to.name((*phi)[x]) + "\n";
        }
        write_out(io, s);
        break;
      }
      case Format::csv: {
        std::string s = "from,to\n";
        if (phi) {
          for (Element x = 0; x < from.order(); ++x) {
            s += std::to_string(x) + "," + std::to_string((*phi)[x]) + "\n";
          }
        }
        write_out(io, s);
        break;
      }
      case Format::json:
        write_out(io, json_text(Json{{"isomorphic", phi.has_value()},
                                     {"map", phi ? Json(*phi) : Json(nullptr)}}));
        break;
    }
  }
};

struct SweepCmd {
  SweepKind kind = SweepKind::scan;
  std::uint64_t max_m = 0;
  std::uint64_t max_k = 40;
  std::size_t jobs = 0;
  std::string checkpoint;
  std::string reference;
  std::string report_path;
  Common io;

  void run() const {
    SweepConfig cfg;  // rows are tabular, so text output is CSV
    cfg.kind = kind;
    cfg.max_m = max_m;
    cfg.max_k = kind == SweepKind::scan ? max_k : 0;
    cfg.jobs = jobs == 0 ? std::max(1u, std::thread::hardware_concurrency()) : jobs;
    cfg.checkpoint = checkpoint;
    SweepResult const res = run_sweep(cfg);
    RowFormat const rf = io.format == Format::json ? RowFormat::json : RowFormat::csv;
    std::string const body = render_rows(res.rows, kind, rf);
    if (io.output.empty()) {
      std::cout << body;
    } else {
      emit(res.rows, kind, rf, io.output);
    }
    if (!reference.empty()) {
      auto const ref = parse_rows_csv(detail::read_file(reference), reference);
      DiscrepancyReport const rep = compare_with_reference(res.rows, ref, max_m);
      if (report_path.empty()) {
        std::cerr << rep.to_text();
      } else {
        detail::write_file_atomic(report_path, rep.to_text());
      }
    }
  }
};

int exit_code_for(std::exception_ptr e) {
  try {
    std::rethrow_exception(e);
  } catch (CapExceeded const& ex) {
    std::cerr << "quadlat: " << ex.what() << '\n';
    return kExitCap;
  } catch (PreconditionError const& ex) {
    std::cerr << "quadlat: " << ex.what() << '\n';
    return kExitInvariant;
  } catch (InvariantViolation const& ex) {
    std::cerr << "quadlat: " << ex.what() << '\n';
    return kExitInvariant;
  } catch (FormatError const& ex) {
    std::cerr << "quadlat: " << ex.what() << '\n';
    return kExitUsage;
  } catch (IoError const& ex) {
    std::cerr << "quadlat: " << ex.what() << '\n';
    return kExitUsage;
  } catch (std::filesystem::filesystem_error const& ex) {
    std::cerr << "quadlat: " << ex.what() << '\n';
    return kExitUsage;
  } catch (Error const& ex) {
    std::cerr << "quadlat: " << ex.what() << '\n';
    return kExitInvariant;
  } catch (std::exception const& ex) {
    std::cerr << "quadlat: " << ex.what() << '\n';
    return kExitInvariant;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quadratical quasigroups: construction, checking, completion and enumeration"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "quadlat 1.0");

  SolveCmd solve;
  auto* c_solve = app.add_subcommand("solve", "Roots of 2a^2 - 2a + 1 = 0 mod m");
  c_solve->add_option("-m,--modulus", solve.m, "Modulus")->required()->check(CLI::PositiveNumber);
  add_common(c_solve, solve.io);

  TableCmd table;
  auto* c_table = app.add_subcommand("table", "Emit a table from Z_m coefficients or a file");
  add_source(c_table, table.src);
  auto* tn = c_table->add_option("--translatable", table.translatable_n,
                                 "Order of the idempotent k-translatable quasigroup to build");
  c_table->add_option("-k", table.k, "Shift for --translatable")->needs(tn);
  add_common(c_table, table.io);

  CheckCmd check;
  auto* c_check = app.add_subcommand("check", "Check identities (default: quadratical axioms)");
  add_source(c_check, check.src);
  c_check->add_flag("--all", check.all, "Check every supported identity");
  c_check->add_option("--identity", check.ids, "Identity to check (repeatable)");
  add_common(c_check, check.io);

  KCmd kcmd;
  auto* c_k = app.add_subcommand("k", "Translatability index (from -m/-a) or valid shifts of a table");
  add_source(c_k, kcmd.src);
  c_k->add_option("--ordering", kcmd.ordering, "Comma-separated element ordering (labels or indices)");
  add_common(c_k, kcmd.io);

  OrderSearchCmd osearch;
  auto* c_os = app.add_subcommand("order-search", "Exhaustive search for a translatable ordering");
  add_source(c_os, osearch.src);
  add_common(c_os, osearch.io);

  HChainCmd hchain;
  auto* c_h = app.add_subcommand("hchain", "Blocks H1..Hn from a base pair");
  add_source(c_h, hchain.src);
  c_h->add_option("--base-a", hchain.a, "First base element (label or index)")->required();
  c_h->add_option("--base-b", hchain.b, "Second base element (label or index)")->required();
  c_h->add_option("-n,--depth", hchain.n, "Number of blocks")->check(CLI::PositiveNumber);
  add_common(c_h, hchain.io);

  DetectFormCmd detect;
  auto* c_d = app.add_subcommand("detect-form", "Find a base pair whose H-chain covers the table");
  add_source(c_d, detect.src);
  c_d->add_option("--canonical", detect.canonical, "Write the canonically labelled table here");
  c_d->add_flag("--seed-labels", detect.seed_labels, "Label block 1 as a, ab, ba, b");
  add_common(c_d, detect.io);

  CompleteQnCmd cq;
  auto* c_cq = app.add_subcommand("complete-qn", "Complete or refute a Qn table for one aba.a choice");
  c_cq->add_option("-n", cq.n, "Number of blocks")->required()->check(CLI::Range(1, 15));
  c_cq->add_option("--choice", cq.choice, "Slot k of block n equal to aba.a")
      ->required()
      ->check(CLI::Range(1, 4));
  c_cq->add_flag("--minimal", cq.minimal, "Seed only definitions, idempotency and the choice");
  c_cq->add_flag("--extras", cq.extras, "Also use law A and the two elasticity consequences");
  c_cq->add_flag("--seed-labels", cq.seed_labels, "Label block 1 as a, ab, ba, b");
  c_cq->add_option("--trace", cq.trace_path, "Write the deduction trace here");
  c_cq->add_option("--table", cq.table_path, "Write the completed (or partial) table here");
  add_common(c_cq, cq.io);

  RefuteCmd refute;
  auto* c_r = app.add_subcommand("refute-q6", "Refute all four aba.a cases of Q6");
  c_r->add_option("-n", refute.n, "Number of blocks")->check(CLI::Range(1, 15));
  c_r->add_option("--jobs", refute.jobs, "Worker threads (0: all cores)");
  c_r->add_option("--depth", refute.depth, "Case-split depth")->check(CLI::Range(0, 3));
  add_common(c_r, refute.io);

  DualCmd dualc;
  auto* c_dual = app.add_subcommand("dual", "Dual table x*y = y.x");
  add_source(c_dual, dualc.src);
  c_dual->add_flag("--starred", dualc.starred, "Relabel a canonical Qn dual by starred elements");
  add_common(c_dual, dualc.io);

  ProductCmd product;
  auto* c_p = app.add_subcommand("product", "Direct product of two tables");
  c_p->add_option("lhs", product.lhs, "First factor")->required();
  c_p->add_option("rhs", product.rhs, "Second factor")->required();
  add_common(c_p, product.io);

  IsoCmd iso;
  auto* c_iso = app.add_subcommand("iso", "Find an isomorphism between two tables");
  add_source(c_iso, iso.src);
  c_iso->add_option("-j,--other", iso.other, "Target table file")->required();
  add_common(c_iso, iso.io);

  SweepCmd scan;
  scan.kind = SweepKind::scan;
  auto* c_scan = app.add_subcommand("scan", "Rows k,m,a,b for m <= max-m, k < max-k");
  SweepCmd cls;
  cls.kind = SweepKind::classify;
  auto* c_cls = app.add_subcommand("classify", "Rows m,a,b,k with a < b for m <= max-m");
  for (auto [cmd, s] : {std::pair{c_scan, &scan}, std::pair{c_cls, &cls}}) {
    cmd->add_option("--max-m", s->max_m, "Largest modulus")->required()->check(CLI::PositiveNumber);
    cmd->add_option("--jobs", s->jobs, "Worker threads (0: all cores)");
    cmd->add_option("--checkpoint", s->checkpoint, "Resumable checkpoint file");
    cmd->add_option("--reference", s->reference, "CSV to compare against");
    cmd->add_option("--report", s->report_path, "Write the discrepancy report here (default stderr)");
    add_common(cmd, s->io);
  }
  c_scan->add_option("--max-k", scan.max_k, "Keep rows with k below this")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (CLI::ParseError const& e) {
    int const rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*c_solve) solve.run();
    else if (*c_table) table.run();
    else if (*c_check) check.run();
    else if (*c_k) kcmd.run();
    else if (*c_os) osearch.run();
    else if (*c_h) hchain.run();
    else if (*c_d) detect.run();
    else if (*c_cq) cq.run();
    else if (*c_r) refute.run();
    else if (*c_dual) dualc.run();
    else if (*c_p) product.run();
    else if (*c_iso) iso.run();
    else if (*c_scan) scan.run();
    else if (*c_cls) cls.run();
  } catch (CLI::ValidationError const& e) {
    std::cerr << "quadlat: " << e.what() << '\n';
    return kExitUsage;
  } catch (...) {
    return exit_code_for(std::current_exception());
  }
  return kExitOk;
}
