#pragma once

#include "stvac/tensor.hpp"

namespace stvac {

// Coordinate derivatives. `partial` keeps the shape; `gradient_tensor` adds a
// covariant index placed first among the covariant ones.
TensorField partial(const TensorField& t, int coord);
TensorField gradient_tensor(const TensorField& t);
// d_a d_b T, [a][b] first among covariant indices; same-axis pairs use direct stencils
TensorField second_partials(const TensorField& t);
// derivative of every component along a grid axis (also parameter axes)
TensorField axis_derivative(const TensorField& t, int axis);

TensorField christoffel(const MetricField& m);                        // Gamma^k_ij
TensorField christoffel_gradient(const MetricField& m, const TensorField& gamma);  // [k][a][i][j] = d_a Gamma^k_ij
TensorField riemann(const MetricField& m, const TensorField& gamma);               // R^a_bcd
TensorField ricci(const MetricField& m);
TensorField ricci(const MetricField& m, const TensorField& gamma);
TensorField scalar_curvature(const MetricField& m);

// nabla_k T^{a..}_{b..}, k first among covariant indices
TensorField covariant_derivative(const MetricField& m, const TensorField& t, const TensorField& gamma);
TensorField covariant_derivative(const MetricField& m, const TensorField& t);
// nabla_a nabla_b T_c.. of a covariant tensor, built from second partials
TensorField second_covariant_derivative(const MetricField& m, const TensorField& t, const TensorField& gamma);
TensorField second_covariant_derivative(const MetricField& m, const TensorField& t);

TensorField lichnerowicz(const MetricField& m, const TensorField& h);
TensorField divergence(const MetricField& m, const TensorField& h);            // -nabla^i h_ij
TensorField codifferential(const MetricField& m, const TensorField& w);        // -nabla^i w_i
TensorField symmetrized_gradient(const MetricField& m, const TensorField& w);  // (nabla_i w_j + nabla_j w_i)/2
TensorField hessian(const MetricField& m, const TensorField& f);
TensorField laplacian(const MetricField& m, const TensorField& f);  // +nabla^i nabla_i f
TensorField exterior_derivative(const TensorField& f_or_w);         // df, or (dw)_ij = d_i w_j - d_j w_i
TensorField lie_derivative(const TensorField& X, const TensorField& t);
// L_X t for X = w# and t covariant of rank <= 2, built from nabla w and nabla t
// so that only w itself is differentiated
TensorField lie_derivative_dual(const MetricField& m, const TensorField& w, const TensorField& t);
TensorField linearized_ricci(const MetricField& m, const TensorField& h);

// pointwise algebra
TensorField trace(const MetricField& m, const TensorField& h);
TensorField sharp(const MetricField& m, const TensorField& w);
TensorField flat(const MetricField& m, const TensorField& X);
TensorField compose(const MetricField& m, const TensorField& a, const TensorField& b);  // a_ik g^kl b_lj
TensorField norm2(const MetricField& m, const TensorField& t);
TensorField inner(const MetricField& m, const TensorField& a, const TensorField& b);
TensorField contract_vector(const TensorField& t, const TensorField& X, int slot);
TensorField outer(const TensorField& a, const TensorField& b);
TensorField symmetric_product(const TensorField& a, const TensorField& b);  // (a(x)b + b(x)a)/2

}  // namespace stvac
