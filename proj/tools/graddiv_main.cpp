// Command line front-end: element checks, complex checks, and convergence /
// superconvergence studies with CSV, markdown, and gnuplot table output.
#include "graddiv/checks.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <string>
#include <vector>

using namespace graddiv;

namespace {

struct Options {
  std::string cell = "tet";
  int k = 2;
  std::string family = "-1";
  std::vector<int> N;
  std::vector<std::string> h;
  std::string solver = "direct";
  double tol = 1e-12;
  std::string out = ".";
  std::vector<std::string> format = {"csv"};
};

void add_common(CLI::App* cmd, Options& opt, bool with_run_flags)
{
  // --h (mesh size) below rules out the conventional -h short help flag
  cmd->set_help_flag("--help", "Print help");
  cmd->add_option("--cell", opt.cell, "Cell type")->check(CLI::IsMember({"tet", "hex"}));
  cmd->add_option("--k", opt.k, "Enrichment order k (>= 2)");
  cmd->add_option("--family", opt.family, "Family offset r - k")
      ->check(CLI::IsMember({"-1", "0", "+1", "1", "all"}));
  cmd->add_option("--N", opt.N, "Mesh subdivisions, comma separated")->delimiter(',');
  if (with_run_flags) {
    cmd->add_option("--h", opt.h, "Mesh sizes (hex), e.g. 1/8,1/16")->delimiter(',');
    cmd->add_option("--solver", opt.solver, "Linear solver")
        ->check(CLI::IsMember({"direct", "cg"}));
    cmd->add_option("--tol", opt.tol, "Iterative solver tolerance");
    cmd->add_option("--out", opt.out, "Output directory");
    cmd->add_option("--format", opt.format, "Output formats: csv,md,dat")->delimiter(',');
  }
}

CellType parse_cell(const std::string& s) { return s == "tet" ? CellType::Tet : CellType::Hex; }

std::vector<int> parse_families(const std::string& s)
{
  if (s == "all") return {-1, 0, 1};
  if (s == "-1") return {-1};
  if (s == "0") return {0};
  return {1};
}

const char* family_tag(int offset) { return offset < 0 ? "m1" : (offset == 0 ? "0" : "p1"); }

const char* family_name(int offset) { return offset < 0 ? "-1" : (offset == 0 ? "0" : "+1"); }

// Mesh list from --N or, for hexes, --h entries of the form 1/8 or 0.125.
// Returns empty on invalid input.
std::vector<int> mesh_list(const Options& opt, CellType cell, std::string& err)
{
  std::vector<int> list = opt.N;
  if (!opt.h.empty()) {
    if (cell != CellType::Hex) {
      err = "--h applies to hex meshes only";
      return {};
    }
    for (const auto& hs : opt.h) {
      double h = 0;
      const auto slash = hs.find('/');
      try {
        h = slash == std::string::npos ? std::stod(hs)
                                       : std::stod(hs.substr(0, slash)) / std::stod(hs.substr(slash + 1));
      } catch (const std::exception&) {
        err = "cannot parse mesh size '" + hs + "'";
        return {};
      }
      if (h <= 0 || h > 1) {
        err = "mesh size out of range: '" + hs + "'";
        return {};
      }
      const int n = int(std::lround(1.0 / h));
      if (std::abs(n * h - 1.0) > 1e-9) {
        err = "1/h must be an integer: '" + hs + "'";
        return {};
      }
      list.push_back(n);
    }
  }
  if (list.empty()) {
    err = "no mesh sizes given (use --N or --h)";
    return {};
  }
  for (std::size_t i = 0; i + 1 < list.size(); ++i)
    if (list[i] >= list[i + 1]) {
      err = "mesh list must be strictly increasing";
      return {};
    }
  for (int n : list)
    if (n < 1) {
      err = "mesh subdivisions must be >= 1";
      return {};
    }
  return list;
}

int validate_k(const Options& opt)
{
  const int kmax = opt.cell == "hex" ? 4 : 5;
  if (opt.k < 2 || opt.k > kmax) {
    std::fprintf(stderr, "error: k must be in [2, %d] for %s cells\n", kmax, opt.cell.c_str());
    return 2;
  }
  return 0;
}

int cmd_element_check(const Options& opt)
{
  if (int rc = validate_k(opt)) return rc;
  const CellType cell = parse_cell(opt.cell);
  bool all_ok = true;
  for (int offset : parse_families(opt.family)) {
    const int r = opt.k + offset;
    auto res = check_element(cell, r, opt.k);
    std::printf("element-check %s k=%d family=%s (r=%d): dim=%zu unisolvent=%s "
                "dims=%s P%d-reproduction=%s local-exactness=%s -> %s\n",
                opt.cell.c_str(), opt.k, family_name(offset), r, res.dim, res.unisolvent_ok ? "yes" : "NO",
                res.dim_ok ? "ok" : "MISMATCH", r - 1, res.reproduces ? "yes" : "NO",
                res.local_exact ? "yes" : "NO", res.ok() ? "PASS" : "FAIL");
    all_ok = all_ok && res.ok();
  }
  return all_ok ? 0 : 1;
}

int cmd_complex_check(const Options& opt)
{
  if (int rc = validate_k(opt)) return rc;
  const CellType cell = parse_cell(opt.cell);
  std::vector<int> Ns = opt.N.empty() ? std::vector<int>{2} : opt.N;
  bool all_ok = true;
  for (int N : Ns) {
    if (N < 1) {
      std::fprintf(stderr, "error: mesh subdivisions must be >= 1\n");
      return 2;
    }
    for (int offset : parse_families(opt.family)) {
      const int r = opt.k + offset;
      auto res = check_complex(cell, N, r, opt.k);
      std::printf("complex-check %s N=%d k=%d family=%s (r=%d):\n", opt.cell.c_str(), N, opt.k,
                  family_name(offset), r);
      std::printf("  dims %zu -> %zu -> %zu -> %zu, alternating sum %ld (expect 1)\n",
                  res.dim_sigma, res.dim_v, res.dim_w, res.dim_sigma_plus, res.alternating_sum);
      std::printf("  |curl o grad| = %.3e, |div o curl| = %.3e\n", res.comp_cg, res.comp_dc);
      std::printf("  ker grad = constants: %s, im grad = ker curl: %s, im curl = ker div: %s, "
                  "div onto: %s\n",
                  res.grad_kernel_ok ? "yes" : "NO", res.exact_at_v ? "yes" : "NO",
                  res.exact_at_w ? "yes" : "NO", res.div_onto ? "yes" : "NO");
      std::printf("  commuting identities: %s -> %s\n", res.commuting_ok ? "exact" : "FAIL",
                  res.ok() ? "PASS" : "FAIL");
      all_ok = all_ok && res.ok();
    }
  }
  return all_ok ? 0 : 1;
}

void write_tables(const RateTable& table, const Options& opt, const std::string& stem)
{
  std::filesystem::create_directories(opt.out);
  const std::set<std::string> fmts(opt.format.begin(), opt.format.end());
  auto write = [&](const std::string& ext, const std::string& text) {
    std::ofstream f(std::filesystem::path(opt.out) / (stem + "." + ext), std::ios::binary);
    f << text;
  };
  if (fmts.count("csv")) write("csv", to_csv(table));
  if (fmts.count("md")) write("md", to_markdown(table));
  if (fmts.count("dat")) write("dat", to_dat(table));
}

int cmd_study(const Options& opt, bool super)
{
  if (int rc = validate_k(opt)) return rc;
  const CellType cell = parse_cell(opt.cell);
  if (super && cell != CellType::Hex) {
    std::fprintf(stderr, "error: superconvergence norms are defined on hex meshes only\n");
    return 2;
  }
  for (const auto& f : opt.format)
    if (f != "csv" && f != "md" && f != "dat") {
      std::fprintf(stderr, "error: unknown format '%s'\n", f.c_str());
      return 2;
    }
  std::string err;
  auto Ns = mesh_list(opt, cell, err);
  if (Ns.empty()) {
    std::fprintf(stderr, "error: %s\n", err.c_str());
    return 2;
  }
  const SolverMethod method = opt.solver == "cg" ? SolverMethod::CG : SolverMethod::Direct;
  const bool discrete = cell == CellType::Hex;
  const char* command = super ? "superconvergence" : "convergence";

  for (int offset : parse_families(opt.family)) {
    const int r = opt.k + offset;
    RateTable table;
    table.norms = discrete ? std::vector<std::string>{"e_l2",          "e_V",
                                                      "div_e_l2",      "div_e_U",
                                                      "grad_div_e_l2", "grad_div_e_W"}
                           : std::vector<std::string>{"e_l2", "div_e_l2", "grad_div_e_l2"};
    std::printf("%s %s k=%d family=%s (r=%d), solver=%s\n", command, opt.cell.c_str(), opt.k,
                family_name(offset), r, opt.solver.c_str());
    for (int N : Ns) {
      SolveRun run;
      try {
        run = solve_quad_div(cell, N, r, opt.k, method, opt.tol, discrete);
      } catch (const std::exception& e) {
        std::printf("  N=%d: solve failed (%s), row skipped\n", N, e.what());
        continue;
      }
      if (discrete)
        table.add_row(N, run.h,
                      {run.norms.l2, run.dnorms.v, run.norms.div_l2, run.dnorms.u,
                       run.norms.div_h1, run.dnorms.w});
      else
        table.add_row(N, run.h, {run.norms.l2, run.norms.div_l2, run.norms.div_h1});
      std::printf("  N=%d h=%.6f dofs=%zu free=%zu %.1fs\n", N, run.h, run.ndofs, run.nfree,
                  run.seconds);
    }
    if (table.N.empty()) {
      std::fprintf(stderr, "error: no mesh produced a solvable system\n");
      return 1;
    }
    std::printf("%s", to_markdown(table).c_str());
    char stem[128];
    std::snprintf(stem, sizeof stem, "%s_%s_k%d_f%s", command, opt.cell.c_str(), opt.k,
                  family_tag(offset));
    write_tables(table, opt, stem);
  }
  return 0;
}

} // namespace

int main(int argc, char** argv)
{
  CLI::App app{"Grad-div conforming finite elements: element and complex checks, "
               "convergence and superconvergence studies for the quad-div problem"};
  app.require_subcommand(1);
  app.set_help_flag("--help", "Print help");

  Options opt;
  auto* ec = app.add_subcommand("element-check", "Reference element verification");
  add_common(ec, opt, false);
  auto* cc = app.add_subcommand("complex-check", "Discrete de Rham complex verification");
  add_common(cc, opt, false);
  auto* cv = app.add_subcommand("convergence", "Quad-div convergence study");
  add_common(cv, opt, true);
  auto* sc = app.add_subcommand("superconvergence", "Discrete-norm superconvergence study (hex)");
  add_common(sc, opt, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (ec->parsed()) return cmd_element_check(opt);
    if (cc->parsed()) return cmd_complex_check(opt);
    if (cv->parsed()) return cmd_study(opt, false);
    return cmd_study(opt, true);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
