#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "hlim/errors.hpp"
#include "hlim/sweep.hpp"

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitBlowup = 3;

struct Options {
  std::string config;
  std::string out = "out";
  int jobs = 1;
  std::string mode;
  std::string system = "shmhd";
  double eps = 0.1;
  int states = 20;
};

hlim::SweepConfig load(const Options &o) {
  hlim::SweepConfig cfg = o.config.empty() ? hlim::SweepConfig{} : hlim::load_config(o.config);
  if (!o.mode.empty())
    cfg.mode = hlim::parse_mode(o.mode);
  cfg.validate();
  return cfg;
}

int cmd_simulate(const Options &o) {
  const hlim::SweepConfig cfg = load(o);
  hlim::SystemKind kind;
  if (o.system == "shmhd")
    kind = hlim::SystemKind::shmhd;
  else if (o.system == "pehm")
    kind = hlim::SystemKind::pehm;
  else
    throw hlim::ValidationError("--system must be shmhd or pehm");
  if (!(o.eps > 0.0))
    throw hlim::ValidationError("--eps must be positive");
  const hlim::SimulationResult r = hlim::simulate(cfg, kind, o.eps);
  hlim::emit_simulation_report(r, cfg, o.out);
  const std::filesystem::path out(o.out);
  if (r.final_shmhd) {
    const auto &s = *r.final_shmhd;
    hlim::write_snapshot(out / "a1.fld", s.a.h1);
    hlim::write_snapshot(out / "a2.fld", s.a.h2);
    hlim::write_snapshot(out / "a3.fld", s.a.v);
    hlim::write_snapshot(out / "b1.fld", s.b.h1);
    hlim::write_snapshot(out / "b2.fld", s.b.h2);
    hlim::write_snapshot(out / "b3.fld", s.b.v);
  } else if (r.final_pehm) {
    const auto &s = *r.final_pehm;
    hlim::write_snapshot(out / "a1.fld", s.a_h.h1);
    hlim::write_snapshot(out / "a2.fld", s.a_h.h2);
    hlim::write_snapshot(out / "b1.fld", s.b_h.h1);
    hlim::write_snapshot(out / "b2.fld", s.b_h.h2);
  }
  std::cout << "ledger " << (r.ledger.pass ? "PASS" : "FAIL") << " max_excess "
            << hlim::format_number(r.ledger.max_excess) << '\n';
  return 0;
}

int cmd_sweep(const Options &o) {
  const hlim::SweepConfig cfg = load(o);
  if (o.jobs < 1)
    throw hlim::ValidationError("--jobs must be >= 1");
  const hlim::SweepResult r = hlim::run_sweep(cfg, o.jobs);
  hlim::emit_report(r, o.out);
  for (const auto &c : r.cells)
    std::cout << "eps " << hlim::format_number(c.eps) << ' '
              << (c.ok ? hlim::format_number(c.error(cfg.mode)) : "failed: " + c.message) << '\n';
  if (r.fit)
    std::cout << "slope " << hlim::format_number(r.fit->slope) << " r2 " << hlim::format_number(r.fit->r_squared)
              << '\n';
  else
    std::cout << "no fit: " << r.note << '\n';
  return 0;
}

int cmd_verify(const Options &o) {
  const hlim::SweepConfig cfg = load(o);
  const hlim::VerifyReport rep = hlim::run_constraint_battery(cfg.grid, cfg.spectrum, o.states, cfg.seed);
  std::ostringstream text;
  for (const auto &c : rep.checks)
    text << (c.pass ? "PASS " : "FAIL ") << c.name << ": " << hlim::format_number(c.value) << " (threshold "
         << hlim::format_number(c.threshold) << ")\n";
  text << rep.states << " states, " << (rep.pass() ? "all checks passed" : "some checks failed") << '\n';
  std::cout << text.str();
  if (!o.out.empty()) {
    std::filesystem::create_directories(o.out);
    std::ofstream(std::filesystem::path(o.out) / "verify.txt", std::ios::binary) << text.str();
  }
  return rep.pass() ? 0 : kExitValidation;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"hydrostatic-limit MHD solvers and convergence harness"};
  app.require_subcommand(1);
  Options o;

  auto common = [&](CLI::App *sub) {
    sub->add_option("--config", o.config, "configuration file (key = value)")->check(CLI::ExistingFile);
    sub->add_option("--out", o.out, "output directory");
    sub->add_option("--jobs", o.jobs, "concurrent cells");
    sub->add_option("--mode", o.mode, "error metric")->check(CLI::IsMember({"l2", "h1"}));
  };
  auto *sim = app.add_subcommand("simulate", "run one system at one eps");
  common(sim);
  sim->add_option("--system", o.system, "shmhd or pehm")->check(CLI::IsMember({"shmhd", "pehm"}));
  sim->add_option("--eps", o.eps, "aspect ratio");
  auto *sweep = app.add_subcommand("sweep", "convergence-rate study over the eps ladder");
  common(sweep);
  auto *verify = app.add_subcommand("verify", "constraint and invariant battery");
  common(verify);
  verify->add_option("--states", o.states, "number of seeded states");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitValidation;
  }

  try {
    if (*sim)
      return cmd_simulate(o);
    if (*sweep)
      return cmd_sweep(o);
    return cmd_verify(o);
  } catch (const hlim::ValidationError &e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const hlim::SolverBlowup &e) {
    std::cerr << "blow-up: " << e.what() << '\n';
    return kExitBlowup;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
