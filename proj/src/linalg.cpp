#include "torsion/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "torsion/error.hpp"

namespace torsion {

double operator_norm(const Matrix& m) {
    if (m.size() == 0)
        return 0.0;
    Eigen::JacobiSVD<Matrix> svd(m);
    return svd.singularValues()(0);
}

Matrix block_diagonal(const std::vector<Matrix>& blocks) {
    Index rows = 0, cols = 0;
    for (const auto& b : blocks) {
        rows += b.rows();
        cols += b.cols();
    }
    Matrix out = Matrix::Zero(rows, cols);
    Index r = 0, c = 0;
    for (const auto& b : blocks) {
        out.block(r, c, b.rows(), b.cols()) = b;
        r += b.rows();
        c += b.cols();
    }
    return out;
}

Matrix gram_adjoint(const Matrix& a, const Matrix& gram_from, const Matrix& gram_to) {
    if (a.size() == 0)
        return Matrix::Zero(a.cols(), a.rows());
    Eigen::LLT<Matrix> llt(gram_from);
    return llt.solve(a.adjoint() * gram_to);
}

bool is_integral(const Matrix& m) {
    for (Index j = 0; j < m.cols(); ++j)
        for (Index i = 0; i < m.rows(); ++i) {
            const Complex z = m(i, j);
            if (z.imag() != 0.0 || std::nearbyint(z.real()) != z.real())
                return false;
        }
    return true;
}

bool identical(const Matrix& a, const Matrix& b) {
    return a.rows() == b.rows() && a.cols() == b.cols() && (a.size() == 0 || a == b);
}

bool identical(const std::vector<Matrix>& a, const std::vector<Matrix>& b) {
    return std::equal(a.begin(), a.end(), b.begin(), b.end(),
                      [](const Matrix& x, const Matrix& y) { return identical(x, y); });
}

void require_positive_gram(const Matrix& g, std::string_view label) {
    const std::string name(label);
    if (g.rows() != g.cols())
        throw Error(ErrorKind::GramNotPositive, name + " is not square");
    if (g.size() == 0)
        return;
    const double scale = std::max(1.0, g.cwiseAbs().maxCoeff());
    if ((g - g.adjoint()).cwiseAbs().maxCoeff() > 1e-12 * scale)
        throw Error(ErrorKind::GramNotPositive, name + " is not Hermitian");
    Eigen::SelfAdjointEigenSolver<Matrix> es(g, Eigen::EigenvaluesOnly);
    if (es.eigenvalues()(0) <= 0.0)
        throw Error(ErrorKind::GramNotPositive, name + " has smallest eigenvalue " + std::to_string(es.eigenvalues()(0)));
}

}  // namespace torsion
