#pragma once

#include <functional>

#include "holo/bargmann.hpp"
#include "holo/parallel.hpp"
#include "holo/quadrature.hpp"

namespace holo {

/// Values of one or more holomorphic functions at a point.
using VectorEval = std::function<Eigen::VectorXcd(const Eigen::VectorXcd&)>;

/// Weighted inner-node row for outer node i: entry j already includes the
/// quadrature weight of inner node j.
using StepWeights = std::function<Eigen::VectorXcd(Eigen::Index)>;

/// g(i, :) = sum_j W(i, j) f(m_i + z_j)^T, with `width` functions in f.
///
/// Parallel over outer nodes; each row is summed serially in node order, so
/// the serial and OpenMP paths agree bit for bit.
Eigen::MatrixXcd accumulate_step(const TangentNodes& outer, const TangentNodes& inner, const VectorEval& f,
                                 Eigen::Index width, const StepWeights& weights, Exec exec = Exec::parallel);

/// Discrete orthogonal projection of sampled values onto the span of `basis`
/// under the outer rule: Gd^{-1} sum_i w_i conj(phi(m_i)) g(i, :), with
/// Gd = sum_i w_i conj(phi(m_i)) phi(m_i)^T.
Eigen::MatrixXcd project_samples(const TangentNodes& outer, const BasisSpec& basis, const Eigen::MatrixXcd& g);

}  // namespace holo
