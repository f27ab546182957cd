#pragma once

#include <string>
#include <vector>

#include "stvac/io.hpp"
#include "stvac/tensor.hpp"

namespace stvac {

// Coefficients of G(rho) = G0 + G1 rho + G2 rho^2 + ... for the asymptotically
// hyperbolic metric rho^-2 (drho^2 + G(rho)) with Ric = -n g, n = boundary dimension
struct FGData {
  int n = 0;
  std::vector<TensorField> coeff;  // coeff[m] = G_m on the boundary chart, m = 0..order
  bool log_term = false;           // n even: a log coefficient may appear at order n (not computed)
  std::vector<double> rho;         // evaluation radii

  int order() const { return static_cast<int>(coeff.size()) - 1; }
  const Chart& chart() const { return coeff.front().chart(); }
  const TensorField& undetermined() const { return coeff.at(n); }
};

// order-by-order recursion, solved per boundary node; Gn is the free traceless
// part at order n (its trace is fixed by G0 and must agree)
FGData fg_expand(const TensorField& G0, const TensorField& Gn, int order);

// G(rho) from the truncated series
TensorField fg_metric(const FGData& d, double rho);

// |Ric + n g|_g of the truncated metric on the slice rho, sup over the boundary
// chart; rho-derivatives are exact, boundary derivatives use the chart
double fg_residual(const FGData& d, double rho);

struct FGDecay {
  std::vector<double> rho, residual;
  double slope = 0.0;  // least-squares slope of log residual against log rho
};
FGDecay fg_decay(const FGData& d);

struct FGComparison {
  std::vector<double> difference;  // sup |a_m - b_m| per order
  int first_difference = -1;       // -1: agree to computed order
  double tolerance = 0.0;
};
FGComparison fg_compare(const FGData& a, const FGData& b, double tol = 1e-12);

Bundle to_bundle(const FGData& d);
FGData fg_from_bundle(const Bundle& b);

}  // namespace stvac
