#include <cmath>
#include <fmt/format.h>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>

#include "qatn/automata_mpo.hpp"
#include "qatn/dmrg.hpp"
#include "qatn/parallel.hpp"

namespace qatn {

GapScanError::GapScanError(double s, const std::string& what)
    : Error(fmt::format("gap scan failed at s={}: {}", s, what)), s_(s) {}

void GapScanResult::finalize() {
  g_min = std::numeric_limits<double>::infinity();
  argmin_s = 0.0;
  for (std::size_t i = 0; i < gaps.size(); ++i) {
    if (gaps[i] < g_min) {
      g_min = gaps[i];
      argmin_s = s_grid[i];
    }
  }
  if (gaps.empty()) g_min = 0.0;
}

GapScanResult gap_scan(const IsingModel& ising, std::size_t steps, const DmrgParams& params,
                       const WPolicy& w_policy) {
  if (steps < 2) throw InvalidArgument("gap scan needs at least 2 grid points");
  validate(params);
  GapScanResult r;
  r.s_grid.resize(steps);
  r.e0.resize(steps);
  r.e1.resize(steps);
  r.gaps.resize(steps);
  r.clamped.assign(steps, false);
  std::vector<char> clamped(steps, 0);  // vector<bool> is not safe to write concurrently

  parallel_for(steps, [&](std::size_t i) {
    const double s = static_cast<double>(i) / static_cast<double>(steps - 1);
    r.s_grid[i] = s;
    try {
      const Mpo h = annealing_mpo(ising, s);
      DmrgParams p = params;
      p.energy_offset = 0.0;
      p.seed = params.seed ^ static_cast<std::uint64_t>(i);
      DmrgOutcome ground = dmrg_ground(h, p);
      if (!ground.converged) {
        // one reseeded retry from a different random start
        p.seed = mix_seed(p.seed);
        DmrgOutcome retry = dmrg_ground(h, p);
        if (retry.energy < ground.energy) ground = std::move(retry);
      }
      const double w = w_policy.weight(ground, 0.0);
      const DmrgOutcome excited = excited_state(h, ground, w, p);
      double gap = excited.energy - ground.energy;
      if (gap < 0.0) {
        if (gap < -kGapClampTol * std::max(1.0, std::abs(ground.energy))) {
          throw Error(fmt::format("excited energy {} below ground energy {}", excited.energy, ground.energy));
        }
        gap = 0.0;
        clamped[i] = 1;
      }
      r.e0[i] = ground.energy;
      r.e1[i] = excited.energy;
      r.gaps[i] = gap;
    } catch (const GapScanError&) {
      throw;
    } catch (const std::exception& e) {
      throw GapScanError(s, e.what());
    }
  });
  for (std::size_t i = 0; i < steps; ++i) r.clamped[i] = clamped[i] != 0;
  r.finalize();
  return r;
}

void write_gap_csv(std::ostream& os, const GapScanResult& r) {
  os << "s,e0,e1,gap\n";
  for (std::size_t i = 0; i < r.s_grid.size(); ++i) {
    os << fmt::format("{:.12g},{:.12g},{:.12g},{:.12g}\n", r.s_grid[i], r.e0[i], r.e1[i], r.gaps[i]);
  }
}

GapScanResult read_gap_csv(std::istream& is) {
  GapScanResult r;
  std::string line;
  bool header = false;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    if (!header) {
      if (line != "s,e0,e1,gap") throw ParseError("gap CSV header must be 's,e0,e1,gap'");
      header = true;
      continue;
    }
    std::istringstream row(line);
    std::string cell;
    double v[4];
    for (int c = 0; c < 4; ++c) {
      if (!std::getline(row, cell, ',')) throw ParseError(fmt::format("gap CSV line {} has too few columns", lineno));
      try {
        v[c] = std::stod(cell);
      } catch (const std::exception&) {
        throw ParseError(fmt::format("gap CSV line {} column {} is not a number", lineno, c + 1));
      }
    }
    r.s_grid.push_back(v[0]);
    r.e0.push_back(v[1]);
    r.e1.push_back(v[2]);
    r.gaps.push_back(v[3]);
    r.clamped.push_back(false);
  }
  if (!header) throw ParseError("gap CSV is empty");
  r.finalize();
  return r;
}

}  // namespace qatn
