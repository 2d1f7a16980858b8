#include "holo/geometry.hpp"

#include <cmath>
#include <string>

#include "holo/errors.hpp"

namespace holo {

namespace {

void require_finite(const Eigen::VectorXd& v, const char* what) {
  if (!v.allFinite()) throw ValidationError(std::string(what) + " has non-finite entries");
}

}  // namespace

FlatChart::FlatChart(Eigen::MatrixXd sigma, std::vector<Period> periods)
    : sigma_(std::move(sigma)), periods_(std::move(periods)) {
  const auto n = sigma_.rows();
  if (n < 1 || sigma_.cols() != n) throw ValidationError("metric must be a non-empty square matrix");
  if (static_cast<Eigen::Index>(periods_.size()) != n)
    throw ValidationError("expected " + std::to_string(n) + " period entries, got " +
                          std::to_string(periods_.size()));
  if (!sigma_.allFinite()) throw ValidationError("metric has non-finite entries");

  const double scale = sigma_.cwiseAbs().maxCoeff();
  if ((sigma_ - sigma_.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(scale, 1.0))
    throw ValidationError("metric is not symmetric");

  Eigen::LLT<Eigen::MatrixXd> llt(sigma_);
  if (llt.info() != Eigen::Success || (llt.matrixL().toDenseMatrix().diagonal().array() <= 0.0).any())
    throw ValidationError("metric is not positive-definite");

  for (std::size_t i = 0; i < periods_.size(); ++i) {
    if (periods_[i] && !(*periods_[i] > 0.0 && std::isfinite(*periods_[i])))
      throw ValidationError("period " + std::to_string(i) + " must be positive and finite");
  }

  const Eigen::MatrixXd L = llt.matrixL();
  sigma_inv_ = llt.solve(Eigen::MatrixXd::Identity(n, n));
  det_ = L.diagonal().prod();
  det_ *= det_;
  // A = L^{-T}: A^T sigma A = L^{-1} L L^T L^{-T} = I.
  frame_ = L.transpose().triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(n, n));
}

bool FlatChart::operator==(const FlatChart& other) const {
  return sigma_ == other.sigma_ && periods_ == other.periods_;
}

FlatChart make_chart(int n, const Eigen::MatrixXd& sigma, std::vector<Period> periods) {
  if (n < 1) throw ValidationError("chart dimension must be positive");
  if (sigma.rows() != n || sigma.cols() != n)
    throw ValidationError("metric must be " + std::to_string(n) + "x" + std::to_string(n));
  return FlatChart(sigma, std::move(periods));
}

TangentComplex complexify(const FlatChart& chart, const Eigen::VectorXd& qdot,
                          const Eigen::VectorXd& pdot, const Eigen::VectorXd& p,
                          const Christoffel& gamma) {
  const int n = chart.dim();
  if (qdot.size() != n || pdot.size() != n || p.size() != n)
    throw ValidationError("complexify: vectors must have length " + std::to_string(n));
  require_finite(qdot, "qdot");
  require_finite(pdot, "pdot");
  require_finite(p, "p");

  Eigen::VectorXd connection = pdot;
  if (!gamma.empty()) {
    if (static_cast<int>(gamma.size()) != n)
      throw ValidationError("complexify: Christoffel array must have " + std::to_string(n) + " slices");
    for (int k = 0; k < n; ++k) {
      if (gamma[k].rows() != n || gamma[k].cols() != n)
        throw ValidationError("complexify: Christoffel slice has wrong shape");
      // p_k Gamma^k_{ml} qdot^l
      connection -= p[k] * (gamma[k] * qdot);
    }
  }
  TangentComplex t;
  t.z = qdot.cast<cplx>() + cplx(0.0, 1.0) * (chart.metric_inverse() * connection).cast<cplx>();
  return t;
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> decomplexify(const FlatChart& chart,
                                                         const TangentComplex& t) {
  if (t.z.size() != chart.dim()) throw ValidationError("decomplexify: dimension mismatch");
  Eigen::VectorXd qdot = t.z.real();
  Eigen::VectorXd pdot = chart.metric() * t.z.imag();
  return {qdot, pdot};
}

double reduce_periodic(double x, double period) {
  // Result in (-L/2, L/2].
  double r = std::remainder(x, period);
  if (r <= -0.5 * period) r += period;
  return r;
}

PhasePoint exp_map(const FlatChart& chart, const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  const int n = chart.dim();
  if (x.size() != n || y.size() != n) throw ValidationError("exp_map: dimension mismatch");
  PhasePoint out{x, y};
  for (int i = 0; i < n; ++i) {
    if (const auto& L = chart.periods()[i]) out.q[i] = reduce_periodic(x[i], *L);
  }
  return out;
}

double norm_sq(const FlatChart& chart, const TangentComplex& t) {
  if (t.z.size() != chart.dim()) throw ValidationError("norm_sq: dimension mismatch");
  const Eigen::VectorXd a = t.z.real();
  const Eigen::VectorXd b = t.z.imag();
  // sigma real symmetric: z^T sigma conj(z) = a^T sigma a + b^T sigma b.
  return a.dot(chart.metric() * a) + b.dot(chart.metric() * b);
}

double volume_factor(const FlatChart& chart) { return chart.metric_det(); }

}  // namespace holo
