#pragma once

#include <cstddef>
#include <vector>

#include "calib/postprocessing.hpp"

namespace calib {

inline constexpr double kMassTolerance = 1e-9;
inline constexpr double kValueTolerance = 1e-12;

struct Atom {
  double p = 0.0;
  int y = 0;
  double mass = 0.0;
};

// Finitely supported distribution over (prediction, label) pairs.
// Atoms are kept sorted by (p, y) with duplicates merged and zero masses dropped.
class Pld {
 public:
  static Pld make(std::vector<Atom> atoms);

  const std::vector<Atom>& atoms() const { return atoms_; }
  std::size_t size() const { return atoms_.size(); }
  double total_mass() const;

  bool operator==(const Pld& other) const;

 private:
  explicit Pld(std::vector<Atom> atoms) : atoms_(std::move(atoms)) {}
  std::vector<Atom> atoms_;
};

// Mass at one distinct prediction value, split by label.
struct ValueMass {
  double p = 0.0;
  double mass0 = 0.0;
  double mass1 = 0.0;

  double mass() const { return mass0 + mass1; }
  double conditional_mean() const { return mass() > 0.0 ? mass1 / mass() : p; }
};

std::vector<ValueMass> by_value(const Pld& pld);

struct TaskPoint {
  double weight = 0.0;
  double bayes = 0.0;
  double prediction = 0.0;
};

// Finite domain with a weight, a Bayes probability and a prediction per point.
struct FinitePredictionTask {
  std::vector<TaskPoint> points;
};

FinitePredictionTask make_task(std::vector<TaskPoint> points);

double tau(const Pld& pld);
double ece(const Pld& pld);
bool is_calibrated(const Pld& pld, double tol);

Pld pushforward(const FinitePredictionTask& task);
Pld mix(const Pld& a, const Pld& b, double weight_a);
// Keeps the prediction marginal and redraws each label as Bernoulli(p).
Pld relabel_bernoulli(const Pld& pld);
Pld apply_postprocessing(const Pld& pld, const PostProcessing& kappa);

}  // namespace calib
