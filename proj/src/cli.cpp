#include "qie/cli.hpp"

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "qie/error.hpp"
#include "qie/report.hpp"

namespace qie {

namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Path, "gen:<name>", or a bare generator name when no such file exists.
LinkDiagram load_link_ref(const std::string& ref) {
  if (ref.rfind("gen:", 0) == 0) return generate(ref.substr(4));
  if (std::filesystem::exists(ref)) return read_link_file(ref, ValidationMode::Lenient);
  try {
    return generate(ref);
  } catch (const ParseError&) {
  } catch (const ValidationError&) {
  }
  throw ParseError(fmt::format("'{}' is neither a readable link file nor a generator name", ref));
}

LinkDiagram load_link(const std::string& path, const std::string& gen) {
  if (path.empty() == gen.empty()) throw UsageError("give exactly one of --link or --gen");
  return gen.empty() ? read_link_file(path, ValidationMode::Lenient) : generate(gen);
}

std::size_t resolve_row_cap(const std::optional<std::size_t>& flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("QIE_ROW_CAP")) {
    try {
      std::size_t pos = 0;
      const auto v = std::stoull(env, &pos);
      if (pos == std::string_view(env).size() && v > 0) return v;
    } catch (const std::exception&) {
    }
    throw UsageError(fmt::format("QIE_ROW_CAP must be a positive integer, got '{}'", env));
  }
  return kDefaultRowCap;
}

struct SolveFlags {
  std::string method = "dc";
  bool census = false;
  bool lenient = false;
  bool timing = false;
  std::string format = "text";
  int chunk_size = 3;
  std::optional<std::size_t> row_cap;
  int threads = 0;
};

void add_solve_flags(CLI::App* cmd, SolveFlags& f) {
  cmd->add_option("--method", f.method, "dc (divide and conquer) or brute")->check(CLI::IsMember({"dc", "brute"}));
  cmd->add_flag("--census", f.census, "list color partitions per image size");
  cmd->add_flag("--lenient", f.lenient, "accept diagrams that fail strict validation");
  cmd->add_flag("--timing", f.timing, "include wall time (makes output non-reproducible)");
  cmd->add_option("--format", f.format, "text, json or csv")->check(CLI::IsMember({"text", "json", "csv"}));
  cmd->add_option("--chunk-size", f.chunk_size, "crossings per chunk, 1-5")->check(CLI::Range(1, 5));
  cmd->add_option("--row-cap", f.row_cap, "join row cap (default 1e7, or QIE_ROW_CAP)");
  cmd->add_option("--threads", f.threads, "worker threads (0 = OpenMP default)")->check(CLI::NonNegativeNumber);
}

RunReport run_solve(const LinkDiagram& d, const FiniteQuandle& q, const SolveFlags& f) {
  auto strict = validate(d, ValidationMode::Strict);
  std::vector<std::string> notes;
  if (!strict.clean()) {
    if (!f.lenient)
      throw ValidationError(fmt::format("{} is not strict-valid: {} (use --lenient to solve anyway)", d.name,
                                        strict.violations.front()));
    for (const auto& v : strict.violations) notes.push_back("lenient: " + v);
  }
  SolverSettings settings{f.method, f.chunk_size, resolve_row_cap(f.row_cap)};
  const auto t0 = std::chrono::steady_clock::now();
  HomSet h = f.method == "brute" ? brute_force_solve(d, q)
                                 : solve(d, q, SolveOptions{f.chunk_size, settings.row_cap, f.threads});
  const auto t1 = std::chrono::steady_clock::now();
  notes.insert(notes.end(), h.warnings.begin(), h.warnings.end());
  h.warnings = std::move(notes);
  RunReport r = make_report(h, settings, f.census);
  if (f.timing) r.seconds = std::chrono::duration<double>(t1 - t0).count();
  return r;
}

void write_output(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw ValidationError(fmt::format("cannot open '{}' for writing", path));
  file << text;
  if (!file) throw ValidationError(fmt::format("failed writing '{}'", path));
}

int cmd_check_quandle(const std::string& spec, std::ostream& out) {
  const auto q = build_quandle(spec);
  const auto rep = check_axioms(q);
  auto line = [&](const char* name, bool ok, const std::optional<std::array<Element, 3>>& cx) {
    out << name << ": " << (ok ? "pass" : "FAIL");
    if (cx) out << fmt::format(" (counterexample {}, {}, {})", q.label((*cx)[0]), q.label((*cx)[1]), q.label((*cx)[2]));
    out << "\n";
  };
  out << "quandle: " << q.spec() << "\n" << "size: " << q.size() << "\n";
  line("idempotent", rep.idempotent, rep.idempotent_counterexample);
  line("right_invertible", rep.right_invertible, rep.invertibility_counterexample);
  line("distributive", rep.distributive, rep.distributive_counterexample);
  if (q.kind() == QuandleKind::Symplectic && rep.ok()) {
    const auto nz = nonzero_elements(q);
    const auto orbits = connected_components(q, nz);
    out << fmt::format("nonzero subquandle: {} ({} orbit{} over {} elements)\n",
                       orbits.size() == 1 ? "connected" : "disconnected", orbits.size(), orbits.size() == 1 ? "" : "s",
                       nz.size());
  }
  return rep.ok() ? kExitOk : kExitInput;
}

int cmd_check_link(const LinkDiagram& d, std::ostream& out, std::ostream& err) {
  const auto rep = validate(d, ValidationMode::Strict);
  out << fmt::format("link: {}\narcs: {}\ncrossings: {}\n", d.name, d.arc_count, d.crossings.size());
  if (rep.clean()) {
    out << "strict validation: clean\n";
    return kExitOk;
  }
  out << fmt::format("strict validation: {} violation{}\n", rep.violations.size(), rep.violations.size() == 1 ? "" : "s");
  for (const auto& v : rep.violations) err << "violation: " << v << "\n";
  return kExitInput;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Quandle coloring invariants of knot and link diagrams", "qie"};
  app.require_subcommand(1);

  SolveFlags sf;
  std::string link, gen, quandle;
  auto* solve_cmd = app.add_subcommand("solve", "count colorings and compute the enhanced polynomial");
  solve_cmd->add_option("--link", link, "link file (JSON or text)");
  solve_cmd->add_option("--gen", gen, "generator: hopfsum, aslink:N, unknot, hopf, trefoil, trefoil_r1, figure8");
  solve_cmd->add_option("--quandle", quandle, "quandle spec, e.g. symplectic:p=5,n=1")->required();
  add_solve_flags(solve_cmd, sf);

  SolveFlags cf;
  std::string link_a, link_b, cquandle;
  auto* compare_cmd = app.add_subcommand("compare", "compare two links by their invariants");
  compare_cmd->add_option("--link-a", link_a, "path, gen:<name> or generator name")->required();
  compare_cmd->add_option("--link-b", link_b, "path, gen:<name> or generator name")->required();
  compare_cmd->add_option("--quandle", cquandle, "quandle spec")->required();
  add_solve_flags(compare_cmd, cf);

  std::string ggen, gout, gformat = "json";
  auto* generate_cmd = app.add_subcommand("generate", "write a generated link diagram");
  generate_cmd->add_option("--gen", ggen, "generator name")->required();
  generate_cmd->add_option("--out", gout, "output path (default: standard output)");
  generate_cmd->add_option("--format", gformat, "json or text")->check(CLI::IsMember({"json", "text"}));

  std::string kquandle, klink, kgen;
  auto* check_cmd = app.add_subcommand("check", "verify quandle axioms or validate a link");
  check_cmd->add_option("--quandle", kquandle, "quandle spec");
  check_cmd->add_option("--link", klink, "link file");
  check_cmd->add_option("--gen", kgen, "generator name");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (*solve_cmd) {
      const auto d = load_link(link, gen);
      const auto q = build_quandle(quandle);
      out << render(run_solve(d, q, sf), parse_format(sf.format));
      return kExitOk;
    }
    if (*compare_cmd) {
      const auto q = build_quandle(cquandle);
      CompareReport r;
      r.a = run_solve(load_link_ref(link_a), q, cf);
      r.b = run_solve(load_link_ref(link_b), q, cf);
      r.a.census.reset();
      r.b.census.reset();
      r.verdict = distinguishes(r.a.polynomial, r.b.polynomial);
      out << render(r, parse_format(cf.format));
      return r.verdict.enhanced ? kExitOk : kExitNotDistinguished;
    }
    if (*generate_cmd) {
      const auto d = generate(ggen);
      write_output(gout, gformat == "json" ? serialize(d) + "\n" : to_text(d), out);
      return kExitOk;
    }
    if (*check_cmd) {
      const int given = !kquandle.empty() + !klink.empty() + !kgen.empty();
      if (given != 1) throw UsageError("give exactly one of --quandle, --link or --gen");
      if (!kquandle.empty()) return cmd_check_quandle(kquandle, out);
      return cmd_check_link(klink.empty() ? generate(kgen) : read_link_file(klink, ValidationMode::Lenient), out, err);
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const GuardError& e) {
    err << "guard: " << e.what() << "\n";
    return kExitGuard;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return kExitInput;
  } catch (const ValidationError& e) {
    err << "invalid input: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::invalid_argument& e) {
    err << "invalid input: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitUsage;
}

}  // namespace qie
