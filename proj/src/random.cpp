#include "qcorr/random.hpp"

#include <cmath>

#include "qcorr/tensor.hpp"

namespace qcorr {

double Rng::normal() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  double u1 = 0.0;
  do {
    u1 = uniform();
  } while (u1 <= 0.0);
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * M_PI * u2;
  spare_ = r * std::sin(theta);
  have_spare_ = true;
  return r * std::cos(theta);
}

Mat ginibre(Rng& rng, long rows, long cols) {
  Mat g(rows, cols);
  for (long i = 0; i < rows; ++i)
    for (long j = 0; j < cols; ++j) g(i, j) = rng.cnormal();
  return g;
}

MultipartiteState random_state(const SubsystemLayout& layout, int rank,
                               Rng& rng) {
  if (rank < 1) throw layout_error("random_state: rank must be positive");
  const long d = layout.total_dim();
  if (rank > d) throw layout_error("random_state: rank exceeds dimension");
  const Mat g = ginibre(rng, d, rank);
  Mat rho = g * g.adjoint();
  rho /= rho.trace().real();
  return MultipartiteState::trusted(std::move(rho), layout);
}

MultipartiteState random_state(const SubsystemLayout& layout, int rank,
                               std::uint64_t seed) {
  Rng rng(seed);
  return random_state(layout, rank, rng);
}

MultipartiteState random_pure_state(const SubsystemLayout& layout, Rng& rng) {
  return random_state(layout, 1, rng);
}

Mat haar_isometry(Rng& rng, long rows, long cols) {
  if (rows < cols) throw layout_error("haar_isometry: rows < cols");
  const Mat g = ginibre(rng, rows, cols);
  Eigen::HouseholderQR<Mat> qr(g);
  Mat q = qr.householderQ() * Mat::Identity(rows, cols);
  // Fix column phases so the map from g is deterministic and smooth.
  const Mat r = q.adjoint() * g;
  for (long j = 0; j < cols; ++j) {
    const cxd rjj = r(j, j);
    const double mag = std::abs(rjj);
    if (mag > 0.0) q.col(j) *= rjj / mag;
  }
  return q;
}

SubsystemLayout qubits(const std::vector<std::string>& labels) {
  SubsystemLayout layout;
  for (const auto& l : labels) layout.push_back(l, 2);
  return layout;
}

}  // namespace qcorr
