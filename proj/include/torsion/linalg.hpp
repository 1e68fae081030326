#ifndef TORSION_LINALG_HPP
#define TORSION_LINALG_HPP

#include <complex>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace torsion {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Largest singular value; 0 for empty matrices.
double operator_norm(const Matrix& m);

/// Block-diagonal assembly; empty blocks are skipped.
Matrix block_diagonal(const std::vector<Matrix>& blocks);

/// Conjugate transpose with respect to Gram matrices: A^dagger = G_from^{-1} A^* G_to
/// for A mapping a space with Gram G_from into one with Gram G_to.
Matrix gram_adjoint(const Matrix& a, const Matrix& gram_from, const Matrix& gram_to);

bool is_integral(const Matrix& m);

/// Exact equality including shape (Eigen's operator== asserts on shape mismatch).
bool identical(const Matrix& a, const Matrix& b);
bool identical(const std::vector<Matrix>& a, const std::vector<Matrix>& b);

/// Throws GramNotPositive unless g is square, Hermitian and positive definite.
void require_positive_gram(const Matrix& g, std::string_view label);

}  // namespace torsion

#endif
