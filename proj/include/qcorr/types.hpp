#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <string>

namespace qcorr {

using cxd = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using RVec = Eigen::VectorXd;

/// Global numeric tolerances. All comparisons in the library go through
/// this configuration; the CLI may override fields at startup, after
/// which the struct is treated as read-only.
struct Tolerances {
  double herm = 1e-9;        // Hermiticity residual
  double psd = 1e-9;         // allowed negative eigenvalue magnitude
  double num = 1e-10;        // generic numeric agreement
  double trace = 1e-10;      // trace normalization slack
  double supp = 1e-10;       // support-leakage threshold for relative entropy
  double agree = 1e-8;       // cross-formula agreement
  double eig_floor = 1e-14;  // eigenvalues below this count as exactly zero
  double zero = 1e-12;       // degenerate-truncation threshold
  double cptp = 1e-9;        // Kraus completeness residual
  double conv = 1e-6;        // sweep convergence at full rank
  double conv_model = 1e-3;  // fixed-cutoff model-state comparisons
  double markov = 1e-8;      // Markov verdict threshold on CMI
  double fr = 1e-6;          // Fawzi-Renner inequality slack
  double bound = 1e-9;       // continuity-bound verification slack
  double mono = 1e-9;        // monotonicity slack
  double constraint = 1e-6;  // capacity constraint slack
};

Tolerances& tols();

struct layout_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct numeric_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct degenerate_truncation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// eta(x) = -x ln x with eta(0) = 0.
inline double eta(double x) { return x > 0.0 ? -x * std::log(x) : 0.0; }

/// Binary entropy h2(p) = eta(p) + eta(1-p), in nats.
inline double binary_entropy(double p) { return eta(p) + eta(1.0 - p); }

}  // namespace qcorr
