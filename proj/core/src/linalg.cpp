#include "zeroone/linalg.hpp"

#include <cmath>
#include <string>

#include "zeroone/errors.hpp"

namespace zeroone {

double op_norm(const Matrix& a) {
  if (a.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(a);
  return svd.singularValues()(0);
}

double op_norm(const ComplexMatrix& a) {
  if (a.size() == 0) return 0.0;
  Eigen::JacobiSVD<ComplexMatrix> svd(a);
  return svd.singularValues()(0);
}

bool all_finite(const Matrix& a) { return a.allFinite(); }

void require_square_finite(const Matrix& a, const char* what) {
  if (a.rows() == 0 || a.rows() != a.cols()) {
    throw Error(ErrorCode::InvalidArgument,
                std::string(what) + " must be a non-empty square matrix, got " +
                    std::to_string(a.rows()) + "x" + std::to_string(a.cols()));
  }
  if (!a.allFinite()) {
    throw Error(ErrorCode::NonFiniteInput, std::string(what) + " has NaN or Inf entries");
  }
}

bool is_measure_preserving(const Matrix& g, double det_tol) {
  return std::abs(std::abs(g.determinant()) - 1.0) <= det_tol;
}

void require_measure_preserving(const Matrix& g, double det_tol, const char* what) {
  require_square_finite(g, what);
  const double det = g.determinant();
  if (std::abs(std::abs(det) - 1.0) > det_tol) {
    throw Error(ErrorCode::InvalidGenerator,
                std::string(what) + " has |det| = " + std::to_string(std::abs(det)) + ", expected 1");
  }
}

Matrix rotation2(double angle) {
  Matrix r(2, 2);
  r << std::cos(angle), -std::sin(angle), std::sin(angle), std::cos(angle);
  return r;
}

Matrix shear2() {
  Matrix s(2, 2);
  s << 1.0, 1.0, 0.0, 1.0;
  return s;
}

Matrix matrix_power(const Matrix& a, long exponent) {
  Matrix base = exponent < 0 ? Matrix(a.inverse()) : a;
  unsigned long e = exponent < 0 ? static_cast<unsigned long>(-exponent) : static_cast<unsigned long>(exponent);
  Matrix result = Matrix::Identity(a.rows(), a.cols());
  while (e > 0) {
    if (e & 1UL) result = result * base;
    base = base * base;
    e >>= 1U;
  }
  return result;
}

}  // namespace zeroone
