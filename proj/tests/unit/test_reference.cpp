#include <doctest.h>

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "hlim/sweep.hpp"

using namespace hlim;

namespace {

std::map<std::string, double> read_expected(const std::filesystem::path &p) {
  std::ifstream is(p);
  std::map<std::string, double> out;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#')
      continue;
    const auto eq = line.find('=');
    std::string key = line.substr(0, eq);
    key.erase(key.find_last_not_of(' ') + 1);
    out[key] = std::stod(line.substr(eq + 1));
  }
  return out;
}

} // namespace

TEST_CASE("pinned reference pair") {
  const std::filesystem::path dir(HLIM_FIXTURE_DIR);
  const SweepConfig cfg = load_config(dir / "reference_pair.cfg");
  const auto expected = read_expected(dir / "reference_pair.expected");
  const PairResult r = run_pair(cfg, cfg.eps_ladder.front());
  REQUIRE(r.ok);
  CHECK(std::isfinite(r.summary.sup_d_l2));
  CHECK(r.summary.shmhd_ledger.pass);
  CHECK(r.summary.pehm_ledger.pass);
  CHECK(r.error(MetricMode::l2) == doctest::Approx(expected.at("error_l2")).epsilon(1e-8));
  CHECK(r.summary.final_d_diss_accum == doctest::Approx(expected.at("final_d_diss_accum")).epsilon(1e-8));
}

TEST_CASE("fixture configs load") {
  const std::filesystem::path dir(HLIM_FIXTURE_DIR);
  for (const char *name : {"sweep_alpha4.cfg", "sweep_alpha3.cfg", "sweep_alpha4_h1.cfg", "simulate_seed7.cfg",
                           "verify.cfg", "reference_pair.cfg", "blowup.cfg", "small_sweep.cfg"})
    CHECK_NOTHROW(load_config(dir / name));
  CHECK_THROWS(load_config(dir / "bad_ladder.cfg"));
  CHECK(load_config(dir / "sweep_alpha4_h1.cfg").mode == MetricMode::h1);
  CHECK(load_config(dir / "sweep_alpha3.cfg").alpha == 3.0);
}
