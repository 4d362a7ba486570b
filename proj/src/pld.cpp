#include "calib/pld.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "calib/error.hpp"

namespace calib {

namespace {

void check_total(double total, const char* what) {
  if (std::abs(total - 1.0) > kMassTolerance) {
    throw Error(ErrorCode::MassNotOne,
                std::string(what) + " total mass " + std::to_string(total) + " is not 1");
  }
}

std::vector<Atom> canonicalize(std::vector<Atom> atoms) {
  std::sort(atoms.begin(), atoms.end(), [](const Atom& a, const Atom& b) { return a.p < b.p; });
  // Snap predictions within kValueTolerance of a cluster start onto that start.
  for (std::size_t i = 1; i < atoms.size(); ++i) {
    if (atoms[i].p - atoms[i - 1].p <= kValueTolerance) atoms[i].p = atoms[i - 1].p;
  }
  std::stable_sort(atoms.begin(), atoms.end(), [](const Atom& a, const Atom& b) {
    return a.p < b.p || (a.p == b.p && a.y < b.y);
  });
  std::vector<Atom> out;
  for (const auto& a : atoms) {
    if (!out.empty() && out.back().p == a.p && out.back().y == a.y) {
      out.back().mass += a.mass;
    } else {
      out.push_back(a);
    }
  }
  std::erase_if(out, [](const Atom& a) { return a.mass == 0.0; });
  return out;
}

}  // namespace

Pld Pld::make(std::vector<Atom> atoms) {
  double total = 0.0;
  for (const auto& a : atoms) {
    if (!std::isfinite(a.p)) throw Error(ErrorCode::NonFinite, "non-finite prediction");
    if (!(a.p >= 0.0 && a.p <= 1.0)) {
      throw Error(ErrorCode::AtomOutOfRange, "prediction " + std::to_string(a.p) + " not in [0,1]");
    }
    if (a.y != 0 && a.y != 1) {
      throw Error(ErrorCode::AtomOutOfRange, "label " + std::to_string(a.y) + " not in {0,1}");
    }
    if (!std::isfinite(a.mass)) throw Error(ErrorCode::NonFinite, "non-finite mass");
    if (a.mass < 0.0) throw Error(ErrorCode::NegativeMass, "negative mass");
    total += a.mass;
  }
  check_total(total, "PLD");
  return Pld(canonicalize(std::move(atoms)));
}

double Pld::total_mass() const {
  double total = 0.0;
  for (const auto& a : atoms_) total += a.mass;
  return total;
}

bool Pld::operator==(const Pld& other) const {
  if (atoms_.size() != other.atoms_.size()) return false;
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    const auto& a = atoms_[i];
    const auto& b = other.atoms_[i];
    if (a.y != b.y || std::abs(a.p - b.p) > kValueTolerance ||
        std::abs(a.mass - b.mass) > kValueTolerance) {
      return false;
    }
  }
  return true;
}

std::vector<ValueMass> by_value(const Pld& pld) {
  std::vector<ValueMass> out;
  for (const auto& a : pld.atoms()) {
    if (out.empty() || out.back().p != a.p) out.push_back({a.p, 0.0, 0.0});
    (a.y == 1 ? out.back().mass1 : out.back().mass0) += a.mass;
  }
  return out;
}

FinitePredictionTask make_task(std::vector<TaskPoint> points) {
  double total = 0.0;
  for (const auto& pt : points) {
    if (!std::isfinite(pt.weight)) throw Error(ErrorCode::NonFinite, "non-finite weight");
    if (pt.weight < 0.0) throw Error(ErrorCode::NegativeMass, "negative weight");
    if (!(pt.bayes >= 0.0 && pt.bayes <= 1.0) || !(pt.prediction >= 0.0 && pt.prediction <= 1.0)) {
      throw Error(ErrorCode::AtomOutOfRange, "bayes or prediction not in [0,1]");
    }
    total += pt.weight;
  }
  check_total(total, "task");
  return {std::move(points)};
}

double tau(const Pld& pld) {
  double t = 0.0;
  for (const auto& a : pld.atoms()) {
    if (a.y == 1) t += a.mass;
  }
  return t;
}

double ece(const Pld& pld) {
  double total = 0.0;
  for (const auto& v : by_value(pld)) total += std::abs(v.mass1 - v.p * v.mass());
  return total;
}

bool is_calibrated(const Pld& pld, double tol) {
  for (const auto& v : by_value(pld)) {
    if (std::abs(v.mass0 * v.p - v.mass1 * (1.0 - v.p)) > tol) return false;
  }
  return true;
}

Pld pushforward(const FinitePredictionTask& task) {
  std::vector<Atom> atoms;
  atoms.reserve(2 * task.points.size());
  for (const auto& pt : task.points) {
    atoms.push_back({pt.prediction, 1, pt.weight * pt.bayes});
    atoms.push_back({pt.prediction, 0, pt.weight * (1.0 - pt.bayes)});
  }
  return Pld::make(std::move(atoms));
}

Pld mix(const Pld& a, const Pld& b, double weight_a) {
  if (!(weight_a >= 0.0 && weight_a <= 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "mixture weight not in [0,1]");
  }
  std::vector<Atom> atoms;
  for (const auto& x : a.atoms()) atoms.push_back({x.p, x.y, weight_a * x.mass});
  for (const auto& x : b.atoms()) atoms.push_back({x.p, x.y, (1.0 - weight_a) * x.mass});
  return Pld::make(std::move(atoms));
}

Pld relabel_bernoulli(const Pld& pld) {
  std::vector<Atom> atoms;
  for (const auto& v : by_value(pld)) {
    atoms.push_back({v.p, 1, v.mass() * v.p});
    atoms.push_back({v.p, 0, v.mass() * (1.0 - v.p)});
  }
  return Pld::make(std::move(atoms));
}

Pld apply_postprocessing(const Pld& pld, const PostProcessing& kappa) {
  std::vector<Atom> atoms;
  atoms.reserve(pld.size());
  for (const auto& a : pld.atoms()) atoms.push_back({kappa(a.p), a.y, a.mass});
  return Pld::make(std::move(atoms));
}

}  // namespace calib
