#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "hlim/errors.hpp"
#include "hlim/sweep.hpp"

namespace hlim {

std::string format_number(double v) {
  if (std::isnan(v))
    return "nan";
  if (std::isinf(v))
    return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12e", v);
  return buf;
}

namespace {

const char *kRunsHeader =
    "run_id,system,eps,alpha,t,e_l2,dissipation_accum,d_l2,d_diss_accum,d_h1,parity_defect,div_defect\n";

std::ofstream open_output(const std::filesystem::path &path) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os)
    throw std::runtime_error("cannot write " + path.string());
  return os;
}

void prepare_dir(const std::filesystem::path &dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir))
    throw std::runtime_error("cannot create output directory " + dir.string());
}

void write_record_row(std::ostream &os, std::size_t run_id, const char *system, double eps, double alpha,
                      const DiagnosticsRecord &r, const DiffRecord *d) {
  os << run_id << ',' << system << ',' << format_number(eps) << ',' << format_number(alpha) << ','
     << format_number(r.t) << ',' << format_number(r.e_l2) << ',' << format_number(r.dissipation_accum) << ',';
  if (d) {
    os << format_number(d->d_l2) << ',' << format_number(d->d_diss_accum) << ',';
    if (d->d_h1)
      os << format_number(*d->d_h1);
  } else {
    os << ",,";
  }
  os << ',' << format_number(r.parity_defect) << ',' << format_number(r.div_defect) << '\n';
}

std::string cell_status(const PairResult &c) {
  if (!c.ok) {
    std::string m = "failed: " + c.message;
    std::replace(m.begin(), m.end(), ',', ';');
    std::replace(m.begin(), m.end(), '\n', ' ');
    return m;
  }
  return "ok";
}

std::string svg_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

void write_svg(const SweepResult &r, const std::filesystem::path &path) {
  constexpr double w = 480, h = 360, left = 60, right = 20, top = 20, bottom = 50;
  std::vector<std::pair<double, double>> pts;
  for (const auto &c : r.cells) {
    if (!c.ok)
      continue;
    const double e = c.error(r.config.mode);
    if (e > 0.0 && std::isfinite(e))
      pts.emplace_back(std::log10(c.eps), std::log10(e));
  }
  std::ofstream os = open_output(path);
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h << "\">\n";
  os << "<rect x=\"0\" y=\"0\" width=\"" << w << "\" height=\"" << h << "\" fill=\"white\"/>\n";
  os << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << w - left - right << "\" height=\""
     << h - top - bottom << "\" fill=\"none\" stroke=\"black\"/>\n";
  os << "<text x=\"" << w / 2 << "\" y=\"" << h - 12 << "\" text-anchor=\"middle\" font-size=\"12\">log10 eps</text>\n";
  os << "<text x=\"14\" y=\"" << h / 2 << "\" text-anchor=\"middle\" font-size=\"12\" transform=\"rotate(-90 14 "
     << h / 2 << ")\">log10 error (" << to_string(r.config.mode) << ")</text>\n";
  if (!pts.empty()) {
    double x0 = pts[0].first, x1 = x0, y0 = pts[0].second, y1 = y0;
    for (const auto &[x, y] : pts) {
      x0 = std::min(x0, x);
      x1 = std::max(x1, x);
      y0 = std::min(y0, y);
      y1 = std::max(y1, y);
    }
    if (x1 - x0 < 1e-12) {
      x0 -= 0.5;
      x1 += 0.5;
    }
    if (y1 - y0 < 1e-12) {
      y0 -= 0.5;
      y1 += 0.5;
    }
    const double padx = 0.05 * (x1 - x0), pady = 0.05 * (y1 - y0);
    x0 -= padx;
    x1 += padx;
    y0 -= pady;
    y1 += pady;
    auto sx = [&](double x) { return left + (x - x0) / (x1 - x0) * (w - left - right); };
    auto sy = [&](double y) { return h - bottom - (y - y0) / (y1 - y0) * (h - top - bottom); };
    if (r.fit && pts.size() >= 2) {
      const double lx0 = x0, lx1 = x1;
      const double ly0 = (r.fit->intercept + r.fit->slope * lx0 * std::log(10.0)) / std::log(10.0);
      const double ly1 = (r.fit->intercept + r.fit->slope * lx1 * std::log(10.0)) / std::log(10.0);
      os << "<line x1=\"" << svg_number(sx(lx0)) << "\" y1=\"" << svg_number(sy(ly0)) << "\" x2=\""
         << svg_number(sx(lx1)) << "\" y2=\"" << svg_number(sy(ly1)) << "\" stroke=\"steelblue\"/>\n";
      os << "<text x=\"" << left + 8 << "\" y=\"" << top + 16 << "\" font-size=\"12\">slope "
         << svg_number(r.fit->slope) << "</text>\n";
    }
    for (const auto &[x, y] : pts)
      os << "<circle cx=\"" << svg_number(sx(x)) << "\" cy=\"" << svg_number(sy(y))
         << "\" r=\"4\" fill=\"black\"/>\n";
  }
  os << "</svg>\n";
}

} // namespace

void emit_report(const SweepResult &r, const std::filesystem::path &out_dir) {
  prepare_dir(out_dir);
  const double alpha = r.config.alpha;
  {
    std::ofstream os = open_output(out_dir / "runs.csv");
    os << kRunsHeader;
    for (std::size_t i = 0; i < r.cells.size(); ++i) {
      const PairResult &c = r.cells[i];
      for (std::size_t k = 0; k < c.shmhd_records.size(); ++k)
        write_record_row(os, i, "shmhd", c.eps, alpha, c.shmhd_records[k], k < c.diffs.size() ? &c.diffs[k] : nullptr);
      for (const auto &rec : c.pehm_records)
        write_record_row(os, i, "pehm", c.eps, alpha, rec, nullptr);
    }
  }
  {
    std::ofstream os = open_output(out_dir / "sweep.csv");
    os << "eps,sup_err_l2,sup_err_h1,status\n";
    for (const auto &c : r.cells) {
      os << format_number(c.eps) << ',';
      if (c.ok) {
        os << format_number(c.error(MetricMode::l2)) << ',';
        if (c.summary.sup_d_h1)
          os << format_number(c.error(MetricMode::h1));
      } else {
        os << ',';
      }
      os << ',' << cell_status(c) << '\n';
    }
  }
  {
    std::ofstream os = open_output(out_dir / "summary.txt");
    const SweepConfig &cfg = r.config;
    os << "grid " << cfg.grid.n1 << 'x' << cfg.grid.n2 << 'x' << cfg.grid.n3 << " l1 " << format_number(cfg.grid.l1)
       << " l2 " << format_number(cfg.grid.l2) << '\n';
    os << "alpha " << format_number(cfg.alpha) << " dt " << format_number(cfg.dt) << " t_end "
       << format_number(cfg.t_end) << " seed " << cfg.seed << " mode " << to_string(cfg.mode) << '\n';
    if (r.cells.empty()) {
      os << "empty eps ladder: nothing was run, no rate fitted\n";
    } else {
      for (const auto &c : r.cells) {
        os << "eps " << format_number(c.eps) << ": ";
        if (!c.ok) {
          os << cell_status(c) << '\n';
          continue;
        }
        os << "error " << format_number(c.error(cfg.mode)) << " final_d_diss_accum "
           << format_number(c.summary.final_d_diss_accum) << " ledger shmhd "
           << (c.summary.shmhd_ledger.pass ? "PASS" : "FAIL") << " (excess "
           << format_number(c.summary.shmhd_ledger.max_excess) << ") pehm "
           << (c.summary.pehm_ledger.pass ? "PASS" : "FAIL") << " (excess "
           << format_number(c.summary.pehm_ledger.max_excess) << ") parity "
           << format_number(c.summary.max_parity_defect) << " div " << format_number(c.summary.max_div_defect)
           << '\n';
      }
      if (r.fit)
        os << "fit slope " << format_number(r.fit->slope) << " intercept " << format_number(r.fit->intercept)
           << " r2 " << format_number(r.fit->r_squared) << " predicted " << format_number(r.fit->gamma_half_predicted)
           << '\n';
      else
        os << "no rate fitted\n";
    }
    if (!r.note.empty())
      os << "note: " << r.note << '\n';
  }
  write_svg(r, out_dir / "rate.svg");
}

void emit_simulation_report(const SimulationResult &r, const SweepConfig &cfg, const std::filesystem::path &out_dir) {
  prepare_dir(out_dir);
  const char *system = r.system == SystemKind::shmhd ? "shmhd" : "pehm";
  {
    std::ofstream os = open_output(out_dir / "runs.csv");
    os << kRunsHeader;
    for (const auto &rec : r.records)
      write_record_row(os, 0, system, r.eps, cfg.alpha, rec, nullptr);
  }
  std::ofstream os = open_output(out_dir / "summary.txt");
  os << "system " << system << " eps " << format_number(r.eps) << " alpha " << format_number(cfg.alpha) << " dt "
     << format_number(cfg.dt) << " t_end " << format_number(cfg.t_end) << " seed " << cfg.seed << '\n';
  os << "ledger " << (r.ledger.pass ? "PASS" : "FAIL") << " max_excess " << format_number(r.ledger.max_excess)
     << " max_residual " << format_number(r.ledger.max_residual) << '\n';
  os << "cfl_warnings " << r.cfl_warnings << '\n';
}

std::size_t CsvTable::column(const std::string &name) const {
  const auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end())
    throw std::out_of_range("csv: no column " + name);
  return static_cast<std::size_t>(it - header.begin());
}

namespace {

std::vector<std::string> split_row(const std::string &line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream is(line);
  while (std::getline(is, cell, ','))
    out.push_back(cell);
  if (!line.empty() && line.back() == ',')
    out.emplace_back();
  return out;
}

} // namespace

CsvTable read_csv(const std::filesystem::path &path) {
  std::ifstream is(path);
  if (!is)
    throw std::runtime_error("cannot read " + path.string());
  CsvTable t;
  std::string line;
  if (std::getline(is, line))
    t.header = split_row(line);
  while (std::getline(is, line)) {
    if (line.empty())
      continue;
    auto row = split_row(line);
    if (row.size() != t.header.size())
      throw std::runtime_error("csv: ragged row in " + path.string());
    t.rows.push_back(std::move(row));
  }
  return t;
}

} // namespace hlim
