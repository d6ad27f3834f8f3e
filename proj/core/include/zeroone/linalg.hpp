#pragma once

#include <complex>

#include <Eigen/Dense>

namespace zeroone {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

/// Numerical thresholds shared by the matrix-analysis routines. One record so
/// every call site states the same defaults and can override them per call.
struct Tolerances {
  double cluster_tol = 1e-6;         // eigenvalue join radius and rank threshold scale
  double unit_tol = 1e-8;            // |eigenvalue| vs 1
  double reconstruction_tol = 1e-6;  // ||A - T K T^-1|| / ||A||
  double det_tol = 1e-9;             // ||det| - 1| for membership in the measure-preserving group
  double defect_eps = 1e-9;          // eigenvalue scatter budget for defective clusters
};

/// Spectral norm (largest singular value).
double op_norm(const Matrix& a);
double op_norm(const ComplexMatrix& a);

bool all_finite(const Matrix& a);

/// Throws NonFiniteInput / InvalidArgument unless `a` is a finite, non-empty square matrix.
void require_square_finite(const Matrix& a, const char* what);

/// Throws InvalidGenerator unless | |det g| - 1 | <= det_tol.
void require_measure_preserving(const Matrix& g, double det_tol, const char* what);

bool is_measure_preserving(const Matrix& g, double det_tol = Tolerances{}.det_tol);

Matrix rotation2(double angle);
Matrix shear2();

/// Integer power by repeated squaring; negative exponents go through the inverse.
Matrix matrix_power(const Matrix& a, long exponent);

}  // namespace zeroone
