#include "measinv/cli.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>
#include <openssl/evp.h>

#include "measinv/bounds.hpp"
#include "measinv/inversion.hpp"
#include "measinv/io.hpp"
#include "measinv/search.hpp"
#include "measinv/spectra.hpp"

#ifndef MEASINV_VERSION
#define MEASINV_VERSION "0.0.0"
#endif

namespace measinv {

namespace {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string sha256_hex(std::string_view data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1) {
    throw Error(ErrorKind::Internal, "SHA-256 digest failed");
  }
  std::ostringstream hex;
  for (unsigned int i = 0; i < len; ++i) hex << std::hex << std::setw(2) << std::setfill('0') << int{md[i]};
  return hex.str();
}

// Collects everything that goes into manifest.json for one run.
struct Manifest {
  std::string command;
  json config = json::object();
  std::optional<std::uint64_t> seed;
  json inputs = json::array();
  json outputs = json::array();
  std::string started = utc_now();

  std::string add_input(const fs::path& path) {
    std::string content = read_text_file(path);
    inputs.push_back({{"path", path.string()}, {"sha256", sha256_hex(content)}});
    return content;
  }

  void write(const fs::path& dir, const std::string& status) const {
    json doc = {{"command", command},
                {"config", config},
                {"seed", seed ? json(*seed) : json(nullptr)},
                {"version", MEASINV_VERSION},
                {"inputs", inputs},
                {"outputs", outputs},
                {"status", status},
                {"started_utc", started},
                {"finished_utc", utc_now()}};
    write_text_file(dir / "manifest.json", doc.dump(2) + "\n");
  }
};

struct DeltaEstimate {
  double lower = 0.0;
  double observed = 0.0;
  SpectrumProfile profile;
};

struct GridOptions {
  std::int64_t mesh = 0;  // 0 selects refinement
  double target_gap = 1e-3;
  std::int64_t max_mesh = 1024;
  unsigned workers = 1;
};

DeltaEstimate estimate_delta(const DiscreteMeasure& mu, const GridOptions& grid) {
  DeltaEstimate e;
  if (mu.group().is_finite()) {
    e.profile = transform(mu);
  } else if (grid.mesh > 0) {
    e.profile = transform_grid(mu, grid.mesh, grid.workers);
  } else {
    e.profile = refine_until(mu, grid.target_gap, grid.max_mesh, grid.workers);
  }
  const SpectralMin m = spectral_min(e.profile);
  e.lower = m.lower;
  e.observed = m.observed;
  return e;
}

json grid_config(const GridOptions& g) {
  return {{"mesh", g.mesh}, {"target_gap", g.target_gap}, {"max_mesh", g.max_mesh}, {"workers", g.workers}};
}

void add_grid_options(CLI::App* cmd, GridOptions& g) {
  cmd->add_option("--mesh", g.mesh, "Grid points per axis on Z^d (default: refine)")->check(CLI::PositiveNumber);
  cmd->add_option("--target-gap", g.target_gap, "Certificate gap for refinement")->check(CLI::PositiveNumber);
  cmd->add_option("--max-mesh", g.max_mesh, "Largest mesh tried by refinement")->check(CLI::PositiveNumber);
  cmd->add_option("--workers", g.workers, "Worker threads")->check(CLI::PositiveNumber);
}

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NotApplicable:
    case ErrorKind::GroupMismatch:
    case ErrorKind::DependentSupport: return kExitNotApplicable;
    case ErrorKind::Singular:
    case ErrorKind::Infeasible: return kExitInfeasible;
    case ErrorKind::Parse: return kExitParse;
    default: return kExitFailure;
  }
}

// ---------------------------------------------------------------------------

struct TransformArgs {
  fs::path input;
  fs::path out;
  GridOptions grid;
};

void cmd_transform(const TransformArgs& a, Manifest& m, std::ostream& out) {
  const DiscreteMeasure mu = parse_measure(m.add_input(a.input));
  m.config = {{"input", a.input.string()}, {"grid", grid_config(a.grid)}};
  const DeltaEstimate e = estimate_delta(mu, a.grid);
  write_text_file(a.out / "spectrum.csv", spectrum_csv(e.profile));
  m.outputs.push_back("spectrum.csv");
  out << "delta_lower=" << format_double(e.lower) << " delta_observed=" << format_double(e.observed)
      << " exact=" << (e.profile.exact ? "true" : "false") << " points=" << e.profile.size() << '\n';
}

struct InvertArgs {
  fs::path input;
  fs::path out;
  std::string method = "auto";
  double tol = kDefaultTolerance;
  std::size_t dense_cap = kDefaultDenseCap;
  std::size_t max_terms = kDefaultMaxTerms;
  GridOptions grid;
};

InversionResult invert_with(const DiscreteMeasure& mu, const InvertArgs& a) {
  if (a.method == "dense") return dense_invert(mu, a.dense_cap);
  if (a.method == "neumann") return neumann_invert(mu, a.tol, a.max_terms);
  if (a.method == "nikolski") {
    return nikolski_invert(mu, estimate_delta(mu, a.grid).lower, a.tol, a.max_terms);
  }

  // auto: dominant atom, then self-convolution, then the dense oracle.
  std::vector<std::string> reasons;
  auto fallible = [&](auto&& attempt) -> std::optional<InversionResult> {
    try {
      return attempt();
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::Internal) throw;
      reasons.push_back(e.what());
      return std::nullopt;
    }
  };
  if (auto r = fallible([&] { return neumann_invert(mu, a.tol, a.max_terms); })) return *r;
  if (auto r = fallible([&] { return nikolski_invert(mu, estimate_delta(mu, a.grid).lower, a.tol, a.max_terms); })) {
    return *r;
  }
  if (mu.group().is_finite()) return dense_invert(mu, a.dense_cap);
  std::string message = "no inversion route applies:";
  for (const auto& r : reasons) message += " [" + r + "]";
  throw Error(ErrorKind::NotApplicable, message);
}

void cmd_invert(const InvertArgs& a, Manifest& m, std::ostream& out) {
  const DiscreteMeasure mu = parse_measure(m.add_input(a.input));
  m.config = {{"input", a.input.string()}, {"method", a.method},       {"tol", a.tol},
              {"dense_cap", a.dense_cap},  {"max_terms", a.max_terms}, {"grid", grid_config(a.grid)}};
  const InversionResult r = invert_with(mu, a);
  write_text_file(a.out / "inversion.json", inversion_json(r));
  m.outputs.push_back("inversion.json");
  out << "method=" << to_string(r.method) << " norm=" << format_double(r.inverse_norm)
      << " residual=" << format_double(r.residual)
      << " guarantee=" << (r.guarantee ? format_double(*r.guarantee) : "none") << '\n';
}

struct BoundsArgs {
  fs::path input;
  fs::path out;
  std::string delta_from;
  std::size_t dense_cap = kDefaultDenseCap;
  GridOptions grid;
};

std::optional<double> observed_norm(const DiscreteMeasure& mu, double delta, std::size_t cap) {
  try {
    if (mu.group().is_finite() && mu.group().order() <= cap) return dense_invert(mu, cap).inverse_norm;
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::Singular) throw;
    return std::nullopt;
  }
  try {
    return neumann_invert(mu).inverse_norm;
  } catch (const Error&) {
  }
  try {
    return nikolski_invert(mu, delta).inverse_norm;
  } catch (const Error&) {
  }
  return std::nullopt;
}

void cmd_bounds(const BoundsArgs& a, Manifest& m, std::ostream& out) {
  const DiscreteMeasure mu = parse_measure(m.add_input(a.input));
  const bool finite = mu.group().is_finite();
  const std::string mode = a.delta_from.empty() ? (finite ? "exact" : "grid") : a.delta_from;
  if (mode == "exact" && !finite) {
    throw CLI::ValidationError("--delta-from", "exact needs a finite group; use grid on Z^d");
  }
  m.config = {{"input", a.input.string()},
              {"delta_from", mode},
              {"dense_cap", a.dense_cap},
              {"grid", grid_config(a.grid)}};
  const DeltaEstimate e = estimate_delta(mu, a.grid);
  const BoundReport report = build_report(mu, e.lower, observed_norm(mu, e.lower, a.dense_cap));
  write_text_file(a.out / "report.json", report_json(report));
  m.outputs.push_back("report.json");
  out << "delta=" << format_double(report.delta) << " observed_inverse_norm="
      << (report.observed_inverse_norm ? format_double(*report.observed_inverse_norm) : "none") << '\n';
  for (const auto& v : report.verdicts) {
    out << to_string(v.theorem) << ' ' << (v.applies ? "applies" : "n/a");
    if (v.predicted) out << " predicted=" << format_double(*v.predicted);
    out << '\n';
  }
  if (!report.violations().empty()) throw Error(ErrorKind::Internal, "a reported bound is violated");
}

struct SearchArgs {
  fs::path out;
  std::string group;
  std::vector<double> deltas;
  double delta = 0.0;
  std::string claim;
  std::uint64_t seed = 0;
  SearchConfig cfg;
};

json search_config(const SearchConfig& c) {
  return {{"group", c.group.to_string()}, {"real_only", c.real_only},     {"restarts", c.restarts},
          {"steps", c.steps},             {"scale", c.initial_scale},     {"decay", c.decay},
          {"seed", c.seed},               {"workers", c.workers},         {"dense_cap", c.dense_cap}};
}

void add_search_options(CLI::App* cmd, SearchArgs& a) {
  cmd->add_option("--group", a.group, "Group, e.g. Z32 or Z2^4")->required();
  cmd->add_option("--seed", a.cfg.seed, "Seed for all randomness")->required();
  cmd->add_option("--restarts", a.cfg.restarts, "Independent restarts")->check(CLI::PositiveNumber);
  cmd->add_option("--steps", a.cfg.steps, "Steps per restart")->check(CLI::PositiveNumber);
  cmd->add_option("--scale", a.cfg.initial_scale, "Initial proposal scale")->check(CLI::PositiveNumber);
  cmd->add_option("--decay", a.cfg.decay, "Per-step scale decay")->check(CLI::Range(0.0, 1.0));
  cmd->add_flag("--real-only", a.cfg.real_only, "Perturb real parts only");
  cmd->add_option("--workers", a.cfg.workers, "Worker threads for restarts")->check(CLI::PositiveNumber);
}

void cmd_sweep(SearchArgs& a, Manifest& m, std::ostream& out) {
  if (a.deltas.empty()) throw CLI::ValidationError("--deltas", "needs at least one value");
  for (double d : a.deltas) {
    if (!(d > 0.5 && d <= 1.0)) throw CLI::ValidationError("--deltas", "values must lie in (1/2, 1]");
  }
  a.cfg.group = parse_group(a.group);
  m.seed = a.cfg.seed;
  m.config = search_config(a.cfg);
  m.config["deltas"] = a.deltas;
  const SweepTable table = gap_sweep(a.cfg.group, a.deltas, a.cfg);
  write_text_file(a.out / "sweep.csv", sweep_csv(table));
  m.outputs.push_back("sweep.csv");
  std::size_t respected = 0;
  for (const auto& r : table.rows) respected += r.bounds_respected ? 1 : 0;
  out << "rows=" << table.rows.size() << " bounds_respected=" << respected
      << " monotone=" << (table.monotone ? "true" : "false") << '\n';
}

void cmd_adversarial(SearchArgs& a, Manifest& m, std::ostream& out) {
  a.cfg.group = parse_group(a.group);
  a.cfg.delta_target = a.delta;
  const AtomClaim claim = a.claim == "sumadw" ? AtomClaim::Sumadw
                          : a.claim == "pocz" ? AtomClaim::Pocz
                                              : AtomClaim::Dyadic;
  m.seed = a.cfg.seed;
  m.config = search_config(a.cfg);
  m.config["claim"] = a.claim;
  m.config["delta"] = a.delta;
  const AdversarialOutcome r = adversarial_atom_test(a.cfg, claim);
  write_text_file(a.out / "adversarial.json", adversarial_json(r, claim, a.delta));
  m.outputs.push_back("adversarial.json");
  out << "violation_found=" << (r.violation_found ? "true" : "false") << " min_margin=" << format_double(r.min_margin)
      << " recursive_agreement=" << (r.recursive_agreement ? "true" : "false") << '\n';
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Inversion experiments for discrete measures on abelian groups", "measinv"};
  app.set_version_flag("--version", MEASINV_VERSION);
  app.require_subcommand(1);

  TransformArgs transform_args;
  auto* transform_cmd = app.add_subcommand("transform", "Fourier transform of a measure file");
  transform_cmd->add_option("measure", transform_args.input, "Measure file")->required()->check(CLI::ExistingFile);
  transform_cmd->add_option("--out", transform_args.out, "Output directory")->required();
  add_grid_options(transform_cmd, transform_args.grid);

  InvertArgs invert_args;
  auto* invert_cmd = app.add_subcommand("invert", "Invert a measure");
  invert_cmd->add_option("measure", invert_args.input, "Measure file")->required()->check(CLI::ExistingFile);
  invert_cmd->add_option("--out", invert_args.out, "Output directory")->required();
  invert_cmd->add_option("--method", invert_args.method, "Inversion route")
      ->check(CLI::IsMember({"dense", "neumann", "nikolski", "auto"}));
  invert_cmd->add_option("--tol", invert_args.tol, "Residual tolerance")->check(CLI::PositiveNumber);
  invert_cmd->add_option("--dense-cap", invert_args.dense_cap, "Largest group order for dense inversion");
  invert_cmd->add_option("--max-terms", invert_args.max_terms, "Neumann term budget");
  add_grid_options(invert_cmd, invert_args.grid);

  BoundsArgs bounds_args;
  auto* bounds_cmd = app.add_subcommand("bounds", "Evaluate every inverse-norm bound");
  bounds_cmd->add_option("measure", bounds_args.input, "Measure file")->required()->check(CLI::ExistingFile);
  bounds_cmd->add_option("--out", bounds_args.out, "Output directory")->required();
  bounds_cmd->add_option("--delta-from", bounds_args.delta_from, "Source of delta")
      ->check(CLI::IsMember({"exact", "grid"}));
  bounds_cmd->add_option("--dense-cap", bounds_args.dense_cap, "Largest group order for dense inversion");
  add_grid_options(bounds_cmd, bounds_args.grid);

  SearchArgs sweep_args;
  auto* sweep_cmd = app.add_subcommand("sweep", "Search the largest inverse norm over a delta grid");
  sweep_cmd->add_option("--out", sweep_args.out, "Output directory")->required();
  sweep_cmd->add_option("--deltas", sweep_args.deltas, "Comma-separated delta grid")->required()->delimiter(',');
  add_search_options(sweep_cmd, sweep_args);

  SearchArgs adv_args;
  auto* adv_cmd = app.add_subcommand("adversarial", "Search for a counterexample to an atom-mass claim");
  adv_cmd->add_option("--out", adv_args.out, "Output directory")->required();
  adv_cmd->add_option("--claim", adv_args.claim, "Claim to attack")
      ->required()
      ->check(CLI::IsMember({"sumadw", "pocz", "dyadic"}));
  adv_cmd->add_option("--delta", adv_args.delta, "Spectral lower bound")->required();
  add_search_options(adv_cmd, adv_args);

  std::vector<const char*> argv{"measinv"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  Manifest manifest;
  fs::path out_dir;
  if (transform_cmd->parsed()) {
    manifest.command = "transform";
    out_dir = transform_args.out;
  } else if (invert_cmd->parsed()) {
    manifest.command = "invert";
    out_dir = invert_args.out;
  } else if (bounds_cmd->parsed()) {
    manifest.command = "bounds";
    out_dir = bounds_args.out;
  } else if (sweep_cmd->parsed()) {
    manifest.command = "sweep";
    out_dir = sweep_args.out;
  } else {
    manifest.command = "adversarial";
    out_dir = adv_args.out;
  }

  int code = kExitOk;
  std::string status = "ok";
  try {
    fs::create_directories(out_dir);
    if (transform_cmd->parsed()) cmd_transform(transform_args, manifest, out);
    if (invert_cmd->parsed()) cmd_invert(invert_args, manifest, out);
    if (bounds_cmd->parsed()) cmd_bounds(bounds_args, manifest, out);
    if (sweep_cmd->parsed()) cmd_sweep(sweep_args, manifest, out);
    if (adv_cmd->parsed()) cmd_adversarial(adv_args, manifest, out);
  } catch (const CLI::ValidationError& e) {
    err << "usage error: " << e.what() << '\n';
    code = kExitUsage;
    status = std::string("usage: ") + e.what();
  } catch (const Error& e) {
    err << to_string(e.kind()) << ": " << e.what() << '\n';
    code = exit_code(e.kind());
    status = std::string(to_string(e.kind())) + ": " + e.what();
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    code = kExitFailure;
    status = std::string("error: ") + e.what();
  }
  try {
    if (fs::is_directory(out_dir)) manifest.write(out_dir, status);
  } catch (const std::exception& e) {
    err << "cannot write manifest: " << e.what() << '\n';
    if (code == kExitOk) code = kExitFailure;
  }
  return code;
}

}  // namespace measinv
