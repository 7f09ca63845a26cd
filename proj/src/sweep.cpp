#include "hlim/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <thread>

#include "hlim/errors.hpp"

namespace hlim {

const char *to_string(MetricMode m) { return m == MetricMode::l2 ? "l2" : "h1"; }

MetricMode parse_mode(const std::string &s) {
  if (s == "l2")
    return MetricMode::l2;
  if (s == "h1")
    return MetricMode::h1;
  throw ValidationError("mode must be l2 or h1, got '" + s + "'");
}

void SweepConfig::validate() const {
  grid.validate();
  if (!(alpha >= 2.0) || !std::isfinite(alpha))
    throw ValidationError("config: alpha must be >= 2");
  if (mode == MetricMode::h1 && !(alpha > 2.0))
    throw ValidationError("config: mode h1 requires alpha > 2");
  for (std::size_t i = 0; i < eps_ladder.size(); ++i) {
    if (!(eps_ladder[i] > 0.0) || !std::isfinite(eps_ladder[i]))
      throw ValidationError("config: eps values must be positive");
    if (i > 0 && !(eps_ladder[i] < eps_ladder[i - 1]))
      throw ValidationError("config: eps ladder must be strictly decreasing");
  }
  if (!(dt > 0.0) || !std::isfinite(dt))
    throw ValidationError("config: dt must be positive");
  if (!(t_end >= 0.0) || !std::isfinite(t_end))
    throw ValidationError("config: t_end must be non-negative");
  if (sample_every < 1)
    throw ValidationError("config: sample_every must be >= 1");
  if (!(spectrum.amplitude >= 0.0) || !std::isfinite(spectrum.amplitude))
    throw ValidationError("config: amplitude must be finite and non-negative");
  if (!(spectrum.m0 > 0.0) || !std::isfinite(spectrum.m0))
    throw ValidationError("config: spectrum_m0 must be positive");
}

namespace {

std::string trim(const std::string &s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos)
    return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// Accepts plain numbers and multiples of pi written as "2pi" or "pi".
double parse_real(const std::string &v) {
  std::string s = v;
  double factor = 1.0;
  if (s.size() >= 2 && s.compare(s.size() - 2, 2, "pi") == 0) {
    factor = std::numbers::pi;
    s = s.substr(0, s.size() - 2);
    if (s.empty())
      return factor;
  }
  std::size_t used = 0;
  double x = 0.0;
  try {
    x = std::stod(s, &used);
  } catch (const std::exception &) {
    throw std::invalid_argument("not a number");
  }
  if (used != s.size())
    throw std::invalid_argument("trailing characters");
  return x * factor;
}

long long parse_integer(const std::string &v) {
  long long x = 0;
  const auto *first = v.data();
  const auto *last = v.data() + v.size();
  auto [ptr, ec] = std::from_chars(first, last, x);
  if (ec != std::errc() || ptr != last)
    throw std::invalid_argument("not an integer");
  return x;
}

bool parse_bool(const std::string &v) {
  if (v == "on" || v == "true" || v == "1" || v == "yes")
    return true;
  if (v == "off" || v == "false" || v == "0" || v == "no")
    return false;
  throw std::invalid_argument("not a boolean (on/off)");
}

} // namespace

SweepConfig parse_config(const std::string &text, const std::string &origin) {
  SweepConfig cfg;
  std::vector<double> ladder;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos)
      line = line.substr(0, hash);
    line = trim(line);
    if (line.empty())
      continue;
    const auto eq = line.find('=');
    auto where = [&]() { return origin + ":" + std::to_string(lineno) + ": "; };
    if (eq == std::string::npos)
      throw ValidationError(where() + "expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    try {
      if (key == "n1")
        cfg.grid.n1 = static_cast<int>(parse_integer(value));
      else if (key == "n2")
        cfg.grid.n2 = static_cast<int>(parse_integer(value));
      else if (key == "n3")
        cfg.grid.n3 = static_cast<int>(parse_integer(value));
      else if (key == "l1")
        cfg.grid.l1 = parse_real(value);
      else if (key == "l2")
        cfg.grid.l2 = parse_real(value);
      else if (key == "alpha")
        cfg.alpha = parse_real(value);
      else if (key == "eps")
        ladder.push_back(parse_real(value));
      else if (key == "dt")
        cfg.dt = parse_real(value);
      else if (key == "t_end")
        cfg.t_end = parse_real(value);
      else if (key == "seed") {
        const long long s = parse_integer(value);
        if (s < 0)
          throw std::invalid_argument("must be non-negative");
        cfg.seed = static_cast<std::uint64_t>(s);
      } else if (key == "amplitude")
        cfg.spectrum.amplitude = parse_real(value);
      else if (key == "spectrum_m0")
        cfg.spectrum.m0 = parse_real(value);
      else if (key == "sample_every")
        cfg.sample_every = static_cast<int>(parse_integer(value));
      else if (key == "mode")
        cfg.mode = parse_mode(value);
      else if (key == "nonlinear")
        cfg.nonlinear = parse_bool(value);
      else
        throw ValidationError(where() + "unknown key '" + key + "'");
    } catch (const ValidationError &) {
      throw;
    } catch (const std::exception &e) {
      throw ValidationError(where() + "invalid value '" + value + "' for key '" + key + "': " + e.what());
    }
  }
  if (!ladder.empty())
    cfg.eps_ladder = std::move(ladder);
  try {
    cfg.validate();
  } catch (const ValidationError &e) {
    throw ValidationError(origin + ": " + e.what());
  }
  return cfg;
}

SweepConfig load_config(const std::filesystem::path &path) {
  std::ifstream is(path);
  if (!is)
    throw ValidationError("config: cannot open " + path.string());
  std::stringstream ss;
  ss << is.rdbuf();
  return parse_config(ss.str(), path.string());
}

std::optional<RateFit> fit_rate(const std::vector<double> &eps, const std::vector<double> &err,
                                double gamma_half_predicted) {
  std::vector<double> x, y;
  for (std::size_t i = 0; i < eps.size() && i < err.size(); ++i) {
    if (eps[i] > 0.0 && err[i] > 0.0 && std::isfinite(err[i])) {
      x.push_back(std::log(eps[i]));
      y.push_back(std::log(err[i]));
    }
  }
  const std::size_t n = x.size();
  if (n < 2)
    return std::nullopt;
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0)
    return std::nullopt;
  RateFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = y[i] - (fit.intercept + fit.slope * x[i]);
    ss_res += r * r;
  }
  fit.r_squared = syy > 0.0 ? std::clamp(1.0 - ss_res / syy, 0.0, 1.0) : 1.0;
  fit.gamma_half_predicted = gamma_half_predicted;
  return fit;
}

double PairResult::error(MetricMode mode) const {
  if (mode == MetricMode::h1)
    return summary.sup_d_h1 ? std::sqrt(*summary.sup_d_h1) : std::nan("");
  return std::sqrt(summary.sup_d_l2);
}

namespace {

struct LiftedData {
  ElsasserState shmhd;
  PehmState pehm;
};

LiftedData lift_initial_data(const SweepConfig &cfg) {
  auto grid = Grid::make(cfg.grid);
  InitialData d = generate_initial_data(cfg.seed, cfg.spectrum, grid);
  LiftedData out;
  out.shmhd.a = {d.a_h.h1, d.a_h.h2, d.a3};
  out.shmhd.b = {d.b_h.h1, d.b_h.h2, d.b3};
  out.pehm.a_h = std::move(d.a_h);
  out.pehm.b_h = std::move(d.b_h);
  return out;
}

} // namespace

PairResult run_pair(const SweepConfig &cfg, double eps, const PairOptions &options) {
  PairResult res;
  res.eps = eps;
  try {
    cfg.validate();
    LiftedData init = lift_initial_data(cfg);
    const ShmhdParams sp{eps, cfg.alpha, cfg.dt, cfg.t_end, true, cfg.nonlinear};
    const PehmParams pp{cfg.dt, cfg.t_end, true, cfg.nonlinear};
    const bool h1 = cfg.mode == MetricMode::h1;

    ShmhdSolver shmhd(std::move(init.shmhd), sp);
    PehmSolver pehm(std::move(init.pehm), pp);

    auto sample = [&]() {
      const ElsasserState lifted = options.shmhd_as_pehm_lift ? lift_to_elsasser(pehm.state()) : ElsasserState{};
      const ElsasserState &se = options.shmhd_as_pehm_lift ? lifted : shmhd.state();
      res.diffs.push_back(difference_metrics(se, pehm.state(), eps, cfg.alpha, h1));
      res.shmhd_records.push_back(options.shmhd_as_pehm_lift
                                      ? shmhd_record(se, eps, cfg.alpha, 0.0)
                                      : shmhd.record());
      res.pehm_records.push_back(pehm.record());
    };

    sample();
    const StepPlan plan = plan_steps(0.0, cfg.t_end, cfg.dt);
    for (std::size_t k = 1; k <= plan.steps; ++k) {
      const double dt = k == plan.steps ? plan.last_dt : cfg.dt;
      if (!options.shmhd_as_pehm_lift)
        shmhd.advance(dt);
      pehm.advance(dt);
      if (k % static_cast<std::size_t>(cfg.sample_every) == 0 || k == plan.steps)
        sample();
    }
    accumulate_difference_dissipation(res.diffs);

    PairSummary &s = res.summary;
    for (const auto &d : res.diffs) {
      s.sup_d_l2 = std::max(s.sup_d_l2, d.d_l2);
      if (d.d_h1)
        s.sup_d_h1 = std::max(s.sup_d_h1.value_or(0.0), *d.d_h1);
    }
    s.final_d_diss_accum = res.diffs.back().d_diss_accum;
    s.shmhd_ledger = energy_ledger(res.shmhd_records);
    s.pehm_ledger = energy_ledger(res.pehm_records);
    for (const auto &r : res.shmhd_records) {
      s.max_parity_defect = std::max(s.max_parity_defect, r.parity_defect);
      s.max_div_defect = std::max(s.max_div_defect, r.div_defect);
    }
    for (const auto &r : res.pehm_records) {
      s.max_parity_defect = std::max(s.max_parity_defect, r.parity_defect);
      s.max_div_defect = std::max(s.max_div_defect, r.div_defect);
    }
    s.max_pressure_discrepancy = pehm.max_pressure_discrepancy();
    res.ok = true;
  } catch (const std::exception &e) {
    res.ok = false;
    res.message = e.what();
  }
  return res;
}

SweepResult run_sweep(const SweepConfig &cfg, int jobs) {
  cfg.validate();
  SweepResult out;
  out.config = cfg;
  out.cells.resize(cfg.eps_ladder.size());

  const int workers = std::max(1, std::min<int>(jobs, static_cast<int>(cfg.eps_ladder.size())));
  std::atomic<std::size_t> next{0};
  auto work = [&]() {
    for (std::size_t i = next++; i < cfg.eps_ladder.size(); i = next++)
      out.cells[i] = run_pair(cfg, cfg.eps_ladder[i]);
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w)
      pool.emplace_back(work);
    for (auto &t : pool)
      t.join();
  }

  std::vector<std::string> notes;
  if (cfg.eps_ladder.size() < 3)
    notes.push_back("fewer than 3 ladder points, any fit is informational only");
  if (cfg.alpha > 2.0) {
    std::vector<double> eps, err;
    for (const auto &c : out.cells)
      if (c.ok) {
        eps.push_back(c.eps);
        err.push_back(c.error(cfg.mode));
      }
    out.fit = fit_rate(eps, err, 0.5 * gamma_of_alpha(cfg.alpha));
    if (!out.fit)
      notes.push_back("fewer than 2 successful cells with positive error, no fit");
  } else {
    notes.push_back("alpha <= 2 has no predicted rate, no fit");
  }
  for (std::size_t i = 0; i < notes.size(); ++i)
    out.note += (i ? "; " : "") + notes[i];
  return out;
}

SimulationResult simulate(const SweepConfig &cfg, SystemKind system, double eps,
                          const std::optional<ElsasserState> &initial) {
  cfg.validate();
  SimulationResult res;
  res.system = system;
  res.eps = eps;
  ElsasserState s0;
  if (initial) {
    s0 = *initial;
  } else {
    LiftedData d = lift_initial_data(cfg);
    s0 = std::move(d.shmhd);
  }
  if (system == SystemKind::shmhd) {
    const ShmhdParams sp{eps, cfg.alpha, cfg.dt, s0.t + cfg.t_end, true, cfg.nonlinear};
    ShmhdTrajectory traj = run(s0, sp, cfg.sample_every);
    res.records = std::move(traj.records);
    res.final_shmhd = std::move(traj.final_state);
    res.cfl_warnings = traj.cfl_warnings;
  } else {
    const PehmParams pp{cfg.dt, s0.t + cfg.t_end, true, cfg.nonlinear};
    PehmState p0{s0.a.horizontal(), s0.b.horizontal(), s0.t};
    p0.a_h = barotropic_project(p0.a_h);
    p0.b_h = barotropic_project(p0.b_h);
    PehmTrajectory traj = run(p0, pp, cfg.sample_every);
    res.records = std::move(traj.records);
    res.final_pehm = std::move(traj.final_state);
    res.cfl_warnings = traj.cfl_warnings;
  }
  res.ledger = energy_ledger(res.records);
  return res;
}

} // namespace hlim
