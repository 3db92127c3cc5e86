// qatn: command-line driver for instance generation, solvers, gap scans,
// schedules and dense annealing runs.

#include <CLI11.hpp>
#include <chrono>
#include <filesystem>
#include <fmt/format.h>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "qatn/anneal_sim.hpp"
#include "qatn/automata_mpo.hpp"
#include "qatn/dmrg.hpp"
#include "qatn/encoding.hpp"
#include "qatn/qkp_solvers.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitValidation = 2;
constexpr int kExitRuntime = 3;

// Raised when a numerical check run by the tool itself fails.
struct ValidationFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw qatn::ParseError("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw qatn::ParseError("'" + path + "' is not valid JSON: " + e.what());
  }
}

void write_file(const fs::path& path, const std::string& body) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << body;
}

// Shared run bookkeeping: resolved config, root seed, output locations.
struct Run {
  std::string subcommand;
  std::string out_dir = ".";
  std::string out;
  std::uint64_t seed = 0;
  json config = json::object();

  std::string hash() const { return fmt::format("{:016x}", fnv1a(config.dump())); }
  fs::path output_path() const { return fs::path(out_dir) / out; }

  std::string csv_header() const { return fmt::format("# seed={} config_hash={}\n", seed, hash()); }

  void write_manifest(const json& summary = json::object()) const {
    json m = {{"subcommand", subcommand}, {"seed", seed},       {"config_hash", hash()},
              {"config", config},         {"output", out},      {"summary", summary}};
    write_file(fs::path(out_dir) / (out + ".manifest"), m.dump(2) + "\n");
  }
};

struct EncodingOpts {
  double lambda = qatn::kDefaultLambda;
  std::string convention = "minus-half";
};

void add_encoding_opts(CLI::App* app, EncodingOpts& e) {
  app->add_option("--lambda", e.lambda, "Penalty multiplier")->capture_default_str();
  app->add_option("--convention", e.convention, "Spin convention")
      ->check(CLI::IsMember({"minus-half", "plus-half"}))
      ->capture_default_str();
}

void add_common(CLI::App* app, Run& run, const std::string& default_out) {
  app->add_option("--out-dir", run.out_dir, "Output directory")->capture_default_str();
  app->add_option("--out", run.out, "Output file name inside the output directory (default " + default_out + ")");
  app->add_option("--seed", run.seed, "Root seed")->capture_default_str();
}

struct DmrgOpts {
  std::size_t chi = 32;
  std::size_t sweeps = 20;
  double energy_tol = 1e-9;
  double variance_tol = 1e-8;
};

void add_dmrg_opts(CLI::App* app, DmrgOpts& d) {
  app->add_option("--chi", d.chi, "Bond dimension cap")->check(CLI::PositiveNumber)->capture_default_str();
  app->add_option("--sweeps", d.sweeps, "Maximum sweeps")->check(CLI::PositiveNumber)->capture_default_str();
  app->add_option("--energy-tol", d.energy_tol, "Inter-sweep energy tolerance")->capture_default_str();
  app->add_option("--variance-tol", d.variance_tol, "Variance tolerance")->capture_default_str();
}

qatn::DmrgParams to_params(const DmrgOpts& d, std::uint64_t seed) {
  qatn::DmrgParams p;
  p.chi_max = d.chi;
  p.max_sweeps = d.sweeps;
  p.energy_tol = d.energy_tol;
  p.variance_tol = d.variance_tol;
  p.seed = seed;
  return p;
}

json dmrg_json(const DmrgOpts& d) {
  return {{"chi", d.chi}, {"sweeps", d.sweeps}, {"energy_tol", d.energy_tol}, {"variance_tol", d.variance_tol}};
}

// Problem source shared by gap-scan and evolve: a QKP instance or an Ising model.
struct ModelSource {
  std::string instance;
  std::string ising;
  EncodingOpts enc;

  qatn::IsingModel load() const {
    if (instance.empty() && ising.empty()) throw CLI::RequiredError("--instance or --ising");
    if (!ising.empty()) return qatn::ising_from_json(read_json(ising));
    const auto inst = qatn::qkp_from_json(read_json(instance));
    return qatn::qubo_to_ising(qatn::qkp_to_qubo(inst, enc.lambda), qatn::spin_convention_from_string(enc.convention));
  }

  json describe() const {
    if (!ising.empty()) return {{"ising", ising}};
    return {{"instance", instance}, {"lambda", enc.lambda}, {"convention", enc.convention}};
  }
};

void add_source(CLI::App* app, ModelSource& src) {
  auto* a = app->add_option("--instance", src.instance, "QKP instance JSON")->check(CLI::ExistingFile);
  auto* b = app->add_option("--ising", src.ising, "Ising model JSON")->check(CLI::ExistingFile);
  a->excludes(b);
  b->excludes(a);
  add_encoding_opts(app, src.enc);
}

// ---------------------------------------------------------------------------

struct GenOpts {
  std::size_t n = 20;
  std::int64_t capacity = 100;
  std::int64_t value_max = 100;
  std::int64_t weight_max = 100;
  double pair_density = 0.5;
};

void run_gen(Run& run, const GenOpts& g) {
  run.config = {{"n", g.n},
                {"capacity", g.capacity},
                {"value_max", g.value_max},
                {"weight_max", g.weight_max},
                {"pair_density", g.pair_density}};
  const auto inst = qatn::gen_instance(g.n, g.capacity, g.value_max, g.weight_max, g.pair_density, run.seed);
  json j = qatn::to_json(inst);
  j["provenance"] = {{"seed", run.seed}, {"config_hash", run.hash()}};
  write_file(run.output_path(), j.dump(2) + "\n");
  run.write_manifest({{"fingerprint", fmt::format("{:016x}", qatn::fingerprint(inst))}});
}

struct SolveOpts {
  std::string instance;
  std::string method = "dp";
  EncodingOpts enc;
  DmrgOpts dmrg;
  std::size_t reads = 50;
  std::size_t sa_sweeps = 1000;
  bool verify = false;
};

qatn::SolveReport solve_dmrg(const qatn::QkpInstance& inst, const SolveOpts& o, std::uint64_t seed) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto conv = qatn::spin_convention_from_string(o.enc.convention);
  const auto ising = qatn::qubo_to_ising(qatn::qkp_to_qubo(inst, o.enc.lambda), conv);
  auto params = to_params(o.dmrg, seed);
  params.energy_offset = ising.offset;
  const auto out = qatn::dmrg_ground(qatn::annealing_mpo(ising, 1.0), params);
  const auto qubits = qatn::dominant_basis_state(out.state);
  const auto bits = qatn::decode_spins(qatn::qubit_spins(qubits), conv);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  auto report = qatn::make_report(inst, "dmrg", bits, secs);
  report.extras = {{"energy", out.energy},
                   {"offset", ising.offset},
                   {"qubo_cost", qatn::qkp_cost(inst, bits, o.enc.lambda)},
                   {"variance", out.variance},
                   {"sweeps", out.sweeps_used},
                   {"converged", out.converged},
                   {"lambda", o.enc.lambda},
                   {"convention", o.enc.convention}};
  return report;
}

void run_solve(Run& run, const SolveOpts& o) {
  run.config = {{"instance", o.instance}, {"method", o.method}};
  if (o.method == "sa") {
    run.config["reads"] = o.reads;
    run.config["sa_sweeps"] = o.sa_sweeps;
  }
  if (o.method == "sa" || o.method == "dmrg") {
    run.config["lambda"] = o.enc.lambda;
    run.config["convention"] = o.enc.convention;
  }
  if (o.method == "dmrg") run.config["dmrg"] = dmrg_json(o.dmrg);
  if (o.method == "dp") run.config["verify"] = o.verify;

  const auto inst = qatn::qkp_from_json(read_json(o.instance));
  qatn::SolveReport report;
  if (o.method == "bf") {
    report = qatn::brute_force(inst);
  } else if (o.method == "dp") {
    report = qatn::dp_solve(inst, o.verify);
  } else if (o.method == "sa") {
    const auto t0 = std::chrono::steady_clock::now();
    const auto qubo = qatn::qkp_to_qubo(inst, o.enc.lambda);
    qatn::SaParams p;
    p.reads = o.reads;
    p.sweeps = o.sa_sweeps;
    p.seed = run.seed;
    const auto r = qatn::classical_sa(qubo, p);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    report = qatn::make_report(inst, "sa", r.bits, secs);
    report.extras = {{"energy", r.energy}, {"offset", qubo.offset}, {"lambda", o.enc.lambda}};
  } else {
    report = solve_dmrg(inst, o, run.seed);
  }
  report.extras["seed"] = run.seed;
  report.extras["config_hash"] = run.hash();
  write_file(run.output_path(), qatn::to_json(report).dump(2) + "\n");
  std::cout << fmt::format("{}: value={} weight={} feasible={}\n", report.solver, report.value, report.weight,
                           report.feasible);
  run.write_manifest({{"value", report.value}, {"feasible", report.feasible}});
}

struct GapOpts {
  ModelSource src;
  DmrgOpts dmrg;
  std::size_t steps = 21;
  double w = 0.0;  // 0 selects the automatic weight
};

void run_gap_scan(Run& run, const GapOpts& o) {
  run.config = {{"source", o.src.describe()}, {"steps", o.steps}, {"dmrg", dmrg_json(o.dmrg)}, {"w", o.w}};
  const auto ising = o.src.load();
  qatn::WPolicy policy;
  if (o.w > 0.0) policy.fixed = o.w;
  const auto r = qatn::gap_scan(ising, o.steps, to_params(o.dmrg, run.seed), policy);
  std::ostringstream csv;
  csv << run.csv_header();
  qatn::write_gap_csv(csv, r);
  write_file(run.output_path(), csv.str());
  std::size_t clamped = 0;
  for (bool c : r.clamped) clamped += c ? 1 : 0;
  std::cout << fmt::format("g_min={:.12g} at s={:.12g}\n", r.g_min, r.argmin_s);
  run.write_manifest({{"g_min", r.g_min}, {"argmin_s", r.argmin_s}, {"clamped_points", clamped}});
}

struct ScheduleOpts {
  std::string gaps;
  double epsilon = 0.0;  // 0 selects the default
  std::size_t degree = qatn::kDefaultScheduleDegree;
};

void run_schedule(Run& run, const ScheduleOpts& o) {
  run.config = {{"gaps", o.gaps}, {"epsilon", o.epsilon}, {"degree", o.degree}};
  std::ifstream in(o.gaps);
  if (!in) throw qatn::ParseError("cannot open '" + o.gaps + "'");
  const auto gaps = qatn::read_gap_csv(in);
  const auto sched =
      qatn::build_schedule(gaps, o.epsilon > 0.0 ? std::optional<double>(o.epsilon) : std::nullopt, o.degree);
  json j = qatn::to_json(sched);
  j["provenance"] = {{"seed", run.seed}, {"config_hash", run.hash()}};
  write_file(run.output_path(), j.dump(2) + "\n");
  run.write_manifest({{"epsilon", sched.epsilon}});
}

struct EvolveOpts {
  ModelSource src;
  std::string schedule;
  double total_time = 50.0;
  std::size_t steps = qatn::kDefaultEvolveSteps;
};

void run_evolve(Run& run, const EvolveOpts& o) {
  run.config = {{"source", o.src.describe()},
                {"schedule", o.schedule.empty() ? "linear" : o.schedule},
                {"time", o.total_time},
                {"steps", o.steps}};
  const auto ising = o.src.load();
  const auto sched = o.schedule.empty() ? qatn::linear_schedule() : qatn::schedule_from_json(read_json(o.schedule));
  const auto trace = qatn::evolve(ising, sched, o.total_time, o.steps);
  std::ostringstream csv;
  csv << run.csv_header();
  qatn::write_trace_csv(csv, trace);
  write_file(run.output_path(), csv.str());
  std::cout << fmt::format("final overlap={:.12g} energy={:.12g}\n", trace.final_overlap(), trace.energies.back());
  run.write_manifest({{"final_overlap", trace.final_overlap()}, {"final_energy", trace.energies.back()}});
}

struct ValidateOpts {
  std::size_t n_max = 8;
  std::size_t draws = 50;
  std::string tables;
  double tol = 1e-11;
};

double max_abs_diff(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) { return (a - b).cwiseAbs().maxCoeff(); }

void run_mpo_validate(Run& run, const ValidateOpts& o) {
  run.config = {{"n_max", o.n_max}, {"draws", o.draws}, {"tol", o.tol}, {"tables", o.tables}};
  double worst = 0.0;
  std::size_t checked = 0;
  if (!o.tables.empty()) {
    // User tables have no independent reference; check the operator is Hermitian.
    const auto h = qatn::mpo_from_tables(qatn::tables_from_json(read_json(o.tables)));
    const auto dense = qatn::mpo_to_dense(h);
    worst = max_abs_diff(dense, dense.adjoint());
    checked = 1;
  } else {
    if (o.n_max < 1 || o.n_max > qatn::kDenseSiteCap) throw CLI::ValidationError("--n-max", "must lie in 1..14");
    std::mt19937_64 rng(run.seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (std::size_t n = 1; n <= o.n_max; ++n) {
      for (std::size_t d = 0; d < o.draws; ++d) {
        qatn::IsingModel m;
        m.n = n;
        for (std::size_t i = 0; i < n; ++i) m.h.push_back(u(rng));
        for (std::size_t i = 0; i < n; ++i)
          for (std::size_t k = i + 1; k < n; ++k) m.j[{i, k}] = u(rng);
        for (double s : {0.0, 0.3, 0.7, 1.0}) {
          worst = std::max(worst, max_abs_diff(qatn::mpo_to_dense(qatn::annealing_mpo(m, s)),
                                               qatn::dense_hamiltonian(m, s)));
          ++checked;
        }
      }
    }
  }
  std::cout << fmt::format("max deviation {:.3e} over {} checks\n", worst, checked);
  const json summary = {{"max_deviation", worst}, {"checks", checked}, {"pass", worst <= o.tol}};
  write_file(run.output_path(), summary.dump(2) + "\n");
  run.write_manifest(summary);
  if (!(worst <= o.tol)) throw ValidationFailure(fmt::format("max deviation {:.3e} exceeds {:.1e}", worst, o.tol));
}

struct CompareOpts {
  std::vector<std::string> reports;
  std::string reference;
};

void run_compare(Run& run, const CompareOpts& o) {
  run.config = {{"reports", o.reports}, {"reference", o.reference}};
  std::vector<qatn::SolveReport> reports;
  for (const auto& path : o.reports) reports.push_back(qatn::report_from_json(read_json(path)));
  std::optional<qatn::SolveReport> ref;
  if (!o.reference.empty()) ref = qatn::report_from_json(read_json(o.reference));
  const auto table = qatn::compare(reports, ref);
  std::cout << table.to_text();
  write_file(run.output_path(), run.csv_header() + table.to_csv());
  run.write_manifest({{"rows", table.rows.size()}});
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum-annealing tensor-network toolkit for quadratic knapsack problems"};
  app.require_subcommand(1);
  Run run;

  GenOpts gen;
  auto* gen_cmd = app.add_subcommand("gen", "Generate a random QKP instance");
  add_common(gen_cmd, run, "instance.json");
  gen_cmd->add_option("--n", gen.n, "Number of items")->check(CLI::PositiveNumber)->capture_default_str();
  gen_cmd->add_option("--capacity", gen.capacity, "Knapsack capacity")->check(CLI::PositiveNumber)->capture_default_str();
  gen_cmd->add_option("--value-max", gen.value_max, "Largest value")->check(CLI::PositiveNumber)->capture_default_str();
  gen_cmd->add_option("--weight-max", gen.weight_max, "Largest weight")->check(CLI::PositiveNumber)->capture_default_str();
  gen_cmd->add_option("--pair-density", gen.pair_density, "Probability of a pair bonus")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();

  SolveOpts solve;
  auto* solve_cmd = app.add_subcommand("solve", "Solve a QKP instance");
  add_common(solve_cmd, run, "report-<method>.json");
  solve_cmd->add_option("--instance", solve.instance, "QKP instance JSON")->required()->check(CLI::ExistingFile);
  solve_cmd->add_option("--method", solve.method, "Solver")
      ->check(CLI::IsMember({"bf", "dp", "sa", "dmrg"}))
      ->capture_default_str();
  add_encoding_opts(solve_cmd, solve.enc);
  add_dmrg_opts(solve_cmd, solve.dmrg);
  solve_cmd->add_option("--reads", solve.reads, "SA reads")->check(CLI::PositiveNumber)->capture_default_str();
  solve_cmd->add_option("--sa-sweeps", solve.sa_sweeps, "SA sweeps per read")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  solve_cmd->add_flag("--verify", solve.verify, "Check DP table consistency after each item");

  GapOpts gap;
  auto* gap_cmd = app.add_subcommand("gap-scan", "Scan the spectral gap along the annealing path with DMRG");
  add_common(gap_cmd, run, "gaps.csv");
  add_source(gap_cmd, gap.src);
  add_dmrg_opts(gap_cmd, gap.dmrg);
  gap_cmd->add_option("--steps", gap.steps, "Grid points over s in [0, 1]")
      ->check(CLI::Range(std::size_t{2}, std::size_t{100000}))
      ->capture_default_str();
  gap_cmd->add_option("--w", gap.w, "Fixed penalty weight (0 = automatic)")->capture_default_str();

  ScheduleOpts sched;
  auto* sched_cmd = app.add_subcommand("schedule", "Build a gap-adapted schedule from a gap CSV");
  add_common(sched_cmd, run, "schedule.json");
  sched_cmd->add_option("--gaps", sched.gaps, "Gap CSV")->required()->check(CLI::ExistingFile);
  sched_cmd->add_option("--epsilon", sched.epsilon, "Velocity floor (0 = default)")->capture_default_str();
  sched_cmd->add_option("--degree", sched.degree, "Polynomial fit degree")->capture_default_str();

  EvolveOpts evo;
  auto* evo_cmd = app.add_subcommand("evolve", "Dense state-vector annealing run");
  add_common(evo_cmd, run, "trace.csv");
  add_source(evo_cmd, evo.src);
  evo_cmd->add_option("--schedule", evo.schedule, "Schedule JSON (default linear)")->check(CLI::ExistingFile);
  evo_cmd->add_option("--time", evo.total_time, "Total annealing time")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  evo_cmd->add_option("--steps", evo.steps, "Propagation steps")->check(CLI::PositiveNumber)->capture_default_str();

  ValidateOpts val;
  auto* val_cmd = app.add_subcommand("mpo-validate", "Compare the annealing MPO against the dense Hamiltonian");
  add_common(val_cmd, run, "mpo-validate.json");
  val_cmd->add_option("--n-max", val.n_max, "Largest chain length")->capture_default_str();
  val_cmd->add_option("--draws", val.draws, "Random models per length")->capture_default_str();
  val_cmd->add_option("--tables", val.tables, "Rule-table JSON to check for Hermiticity")->check(CLI::ExistingFile);
  val_cmd->add_option("--tol", val.tol, "Allowed deviation")->capture_default_str();

  CompareOpts cmp;
  auto* cmp_cmd = app.add_subcommand("compare", "Tabulate solver reports for one instance");
  add_common(cmp_cmd, run, "comparison.csv");
  cmp_cmd->add_option("reports", cmp.reports, "Report JSON files")->required()->check(CLI::ExistingFile);
  cmp_cmd->add_option("--reference", cmp.reference, "Reference report")->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  auto default_out = [&](const char* name) {
    if (run.out.empty()) run.out = name;
  };
  try {
    if (gen_cmd->parsed()) {
      run.subcommand = "gen";
      default_out("instance.json");
      run_gen(run, gen);
    } else if (solve_cmd->parsed()) {
      run.subcommand = "solve";
      if (run.out.empty()) run.out = "report-" + solve.method + ".json";
      run_solve(run, solve);
    } else if (gap_cmd->parsed()) {
      run.subcommand = "gap-scan";
      default_out("gaps.csv");
      run_gap_scan(run, gap);
    } else if (sched_cmd->parsed()) {
      run.subcommand = "schedule";
      default_out("schedule.json");
      run_schedule(run, sched);
    } else if (evo_cmd->parsed()) {
      run.subcommand = "evolve";
      default_out("trace.csv");
      run_evolve(run, evo);
    } else if (val_cmd->parsed()) {
      run.subcommand = "mpo-validate";
      default_out("mpo-validate.json");
      run_mpo_validate(run, val);
    } else if (cmp_cmd->parsed()) {
      run.subcommand = "compare";
      default_out("comparison.csv");
      run_compare(run, cmp);
    }
  } catch (const ValidationFailure& e) {
    std::cerr << "validation failed: " << e.what() << "\n";
    return kExitValidation;
  } catch (const CLI::Error& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const qatn::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitOk;
}
