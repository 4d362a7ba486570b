#pragma once

#include <vector>

#include "calib/pld.hpp"
#include "calib/postprocessing.hpp"
#include "calib/smoothing.hpp"

namespace calib {

inline constexpr double kMaxLambdaTotal = 2.0;

struct VComponent {
  double v = 0.5;
  double lambda = 1.0;
};

// Adds a * y + b to the loss.
struct Affine {
  double a = 0.0;
  double b = 0.0;
};

inline double sgn(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

// V-shaped loss -(y - v) sgn(p - v).
inline double v_loss(double v, double p, int y) { return -(y - v) * sgn(p - v); }

// Nonnegative combination of V-shaped losses plus an affine term in y.
class VMixtureLoss {
 public:
  static VMixtureLoss make(std::vector<VComponent> components, Affine affine = {});
  static VMixtureLoss v_shaped(double v, double lambda = 1.0);
  // |1(p >= 1/2) - y| away from p = 1/2.
  static VMixtureLoss zero_one();

  const std::vector<VComponent>& components() const { return components_; }
  const Affine& affine() const { return affine_; }
  double lambda_total() const;

  double operator()(double p, int y) const;

 private:
  VMixtureLoss(std::vector<VComponent> components, Affine affine)
      : components_(std::move(components)), affine_(affine) {}
  std::vector<VComponent> components_;
  Affine affine_;
};

double expected_loss(const Pld& pld, const VMixtureLoss& loss);
double expected_loss_smoothed(const SmoothedPld& spld, const VMixtureLoss& loss);
double expected_loss_smoothed_post(const SmoothedPld& spld, const PostProcessing& kappa,
                                   const VMixtureLoss& loss);

// For these proper losses the minimizing report under y ~ Bernoulli(qbar) is qbar.
double bayes_response(const VMixtureLoss& loss, double qbar);

// True if on the grid {0, step, ..., 1} reporting p is never beaten by any q
// under y ~ Bernoulli(p), up to 1e-9.
bool properness_check(const VMixtureLoss& loss, double grid_step);

}  // namespace calib
