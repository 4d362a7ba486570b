#include "calib/transport.hpp"

#include <cmath>
#include <string>

#include "calib/error.hpp"
#include "calib/lp.hpp"

namespace calib {

namespace {

TransportResult solve_transport(const std::vector<Atom>& src, const std::vector<double>& src_mass,
                                const std::vector<Atom>& dst, const std::vector<double>& dst_mass,
                                bool keep_labels) {
  LpProblem lp;
  for (double m : src_mass) lp.add_row(m);
  for (double m : dst_mass) lp.add_row(m);
  std::vector<std::pair<std::size_t, std::size_t>> cells;
  for (std::size_t i = 0; i < src.size(); ++i) {
    for (std::size_t j = 0; j < dst.size(); ++j) {
      if (keep_labels && src[i].y != dst[j].y) continue;
      lp.add_column(ground_cost(src[i], dst[j]),
                    {{static_cast<int>(i), 1.0}, {static_cast<int>(src.size() + j), 1.0}});
      cells.emplace_back(i, j);
    }
  }
  LpSolution sol = solve_lp(lp);
  if (sol.status != LpStatus::Optimal) {
    throw Error(ErrorCode::NumericalFailure, "transport LP did not reach an optimum");
  }
  TransportResult out;
  for (std::size_t k = 0; k < cells.size(); ++k) {
    if (sol.x[k] <= 0.0) continue;
    out.plan.push_back({cells[k].first, cells[k].second, sol.x[k]});
    out.value += sol.x[k] * ground_cost(src[cells[k].first], dst[cells[k].second]);
  }
  return out;
}

std::vector<double> masses(const Pld& pld, double scale) {
  std::vector<double> m;
  for (const auto& a : pld.atoms()) m.push_back(a.mass * scale);
  return m;
}

}  // namespace

TransportResult wasserstein(const Pld& mu, const Pld& nu) {
  // Both totals are 1 only up to kMassTolerance; renormalize so the LP is consistent.
  return solve_transport(mu.atoms(), masses(mu, 1.0 / mu.total_mass()), nu.atoms(),
                         masses(nu, 1.0 / nu.total_mass()), false);
}

TransportResult wasserstein_label_preserving(const Pld& mu, const Pld& nu) {
  double tmu = tau(mu);
  double tnu = tau(nu);
  if (std::abs(tmu - tnu) > kMassTolerance) {
    throw Error(ErrorCode::TauMismatch,
                "label-1 masses differ: " + std::to_string(tmu) + " vs " + std::to_string(tnu));
  }
  double total_mu[2] = {0.0, 0.0};
  double total_nu[2] = {0.0, 0.0};
  for (const auto& a : mu.atoms()) total_mu[a.y] += a.mass;
  for (const auto& a : nu.atoms()) total_nu[a.y] += a.mass;
  // Rescale each label block of nu onto mu's block total. A block that is empty on
  // one side carries at most kMassTolerance on the other and is dropped.
  std::vector<Atom> src_atoms, dst_atoms;
  std::vector<double> src, dst;
  std::vector<std::size_t> src_index, dst_index;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    const auto& a = mu.atoms()[i];
    if (total_nu[a.y] <= 0.0) continue;
    src_atoms.push_back(a);
    src.push_back(a.mass);
    src_index.push_back(i);
  }
  for (std::size_t j = 0; j < nu.size(); ++j) {
    const auto& a = nu.atoms()[j];
    if (total_mu[a.y] <= 0.0) continue;
    dst_atoms.push_back(a);
    dst.push_back(a.mass * total_mu[a.y] / total_nu[a.y]);
    dst_index.push_back(j);
  }
  TransportResult out = solve_transport(src_atoms, src, dst_atoms, dst, true);
  for (auto& e : out.plan) {
    e.source = src_index[e.source];
    e.target = dst_index[e.target];
  }
  return out;
}

}  // namespace calib
