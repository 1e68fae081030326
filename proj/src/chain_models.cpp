#include "torsion/chain_models.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace torsion {

namespace {

std::string shape(const Matrix& m) {
    return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

double residual_scale(double a, double b) { return std::max(1.0, a * b); }

}  // namespace

// ---------------------------------------------------------------------------
// GradedCochainComplex

GradedCochainComplex::GradedCochainComplex(std::vector<Index> dims, std::vector<Matrix> coboundary,
                                           std::vector<Matrix> gram)
    : dims_(std::move(dims)), coboundary_(std::move(coboundary)), gram_(std::move(gram)) {
    if (dims_.empty())
        throw Error(ErrorKind::ShapeMismatch, "complex needs at least one degree");
    for (Index n : dims_)
        if (n < 0)
            throw Error(ErrorKind::ShapeMismatch, "negative dimension");

    const auto degrees = dims_.size();
    if (coboundary_.empty()) {
        for (std::size_t p = 0; p + 1 < degrees; ++p)
            coboundary_.push_back(Matrix::Zero(dims_[p + 1], dims_[p]));
    }
    if (coboundary_.size() + 1 != degrees)
        throw Error(ErrorKind::ShapeMismatch, "expected " + std::to_string(degrees - 1) + " coboundary matrices, got " +
                                                  std::to_string(coboundary_.size()));
    for (std::size_t p = 0; p < coboundary_.size(); ++p) {
        const Matrix& d = coboundary_[p];
        if (d.rows() != dims_[p + 1] || d.cols() != dims_[p])
            throw Error(ErrorKind::ShapeMismatch, "coboundary " + std::to_string(p) + " has shape " + shape(d) +
                                                      ", expected " + std::to_string(dims_[p + 1]) + "x" +
                                                      std::to_string(dims_[p]));
    }

    if (gram_.empty()) {
        for (Index n : dims_)
            gram_.push_back(Matrix::Identity(n, n));
    }
    if (gram_.size() != degrees)
        throw Error(ErrorKind::ShapeMismatch, "expected one Gram matrix per degree");
    for (std::size_t p = 0; p < degrees; ++p) {
        if (gram_[p].rows() != dims_[p] || gram_[p].cols() != dims_[p])
            throw Error(ErrorKind::ShapeMismatch, "Gram " + std::to_string(p) + " has shape " + shape(gram_[p]));
        require_positive_gram(gram_[p], "Gram matrix of degree " + std::to_string(p));
    }

    integral_ = std::all_of(coboundary_.begin(), coboundary_.end(), [](const Matrix& d) { return is_integral(d); });

    for (std::size_t p = 0; p + 1 < coboundary_.size(); ++p) {
        const Matrix& a = coboundary_[p];
        const Matrix& b = coboundary_[p + 1];
        if (a.size() == 0 || b.size() == 0)
            continue;
        const Matrix prod = b * a;
        // Small integer products are exact in double arithmetic.
        const double tol = integral_ ? 0.0 : 1e-12 * residual_scale(a.norm(), b.norm());
        const double res = prod.cwiseAbs().maxCoeff();
        if (res > tol)
            throw Error(ErrorKind::NotSquareZero, "delta_" + std::to_string(p + 1) + " delta_" + std::to_string(p) +
                                                      " has residual " + std::to_string(res));
    }
}

Index GradedCochainComplex::dim(int p) const noexcept {
    if (p < 0 || p >= degree_count())
        return 0;
    return dims_[static_cast<std::size_t>(p)];
}

Index GradedCochainComplex::total_dim() const noexcept {
    Index n = 0;
    for (Index d : dims_)
        n += d;
    return n;
}

Matrix GradedCochainComplex::coboundary(int p) const {
    if (p < 0 || p >= static_cast<int>(coboundary_.size()))
        return Matrix::Zero(dim(p + 1), dim(p));
    return coboundary_[static_cast<std::size_t>(p)];
}

const Matrix& GradedCochainComplex::gram(int p) const {
    if (p < 0 || p >= degree_count())
        throw Error(ErrorKind::DegreeMismatch, "no degree " + std::to_string(p));
    return gram_[static_cast<std::size_t>(p)];
}

double GradedCochainComplex::square_zero_residual() const {
    double worst = 0.0;
    for (std::size_t p = 0; p + 1 < coboundary_.size(); ++p) {
        const Matrix prod = coboundary_[p + 1] * coboundary_[p];
        if (prod.size() > 0)
            worst = std::max(worst, operator_norm(prod));
    }
    return worst;
}

GradedCochainComplex GradedCochainComplex::with_grams(std::vector<Matrix> gram) const {
    return GradedCochainComplex(dims_, coboundary_, std::move(gram));
}

Index GradedCochainComplex::parity_dim(Parity parity) const {
    Index n = 0;
    for (int p = static_cast<int>(parity); p < degree_count(); p += 2)
        n += dim(p);
    return n;
}

Index GradedCochainComplex::parity_offset(int degree) const {
    Index n = 0;
    for (int p = degree % 2; p < degree; p += 2)
        n += dim(p);
    return n;
}

Matrix GradedCochainComplex::parity_gram(Parity parity) const {
    std::vector<Matrix> blocks;
    for (int p = static_cast<int>(parity); p < degree_count(); p += 2)
        blocks.push_back(gram(p));
    return block_diagonal(blocks);
}

// ---------------------------------------------------------------------------
// Graded operators

Matrix GradedOperator::block(const GradedCochainComplex& c, int p) const {
    if (p >= 0 && p < static_cast<int>(blocks.size()) && blocks[static_cast<std::size_t>(p)].size() > 0)
        return blocks[static_cast<std::size_t>(p)];
    return Matrix::Zero(c.dim(p + shift), c.dim(p));
}

void GradedOperator::check_shape(const GradedCochainComplex& c) const {
    for (std::size_t i = 0; i < blocks.size(); ++i) {
        const Matrix& b = blocks[i];
        if (b.size() == 0)
            continue;
        const int p = static_cast<int>(i);
        if (b.rows() != c.dim(p + shift) || b.cols() != c.dim(p))
            throw Error(ErrorKind::ShapeMismatch, "operator of degree " + std::to_string(shift) + " at degree " +
                                                      std::to_string(p) + " has shape " + shape(b) + ", expected " +
                                                      std::to_string(c.dim(p + shift)) + "x" +
                                                      std::to_string(c.dim(p)));
    }
}

namespace {

template <typename BlockFn>
Matrix assemble_parity(const GradedCochainComplex& c, Parity from, int shift, BlockFn&& block) {
    const Parity to = (shift % 2 == 0) ? from : flip(from);
    Matrix out = Matrix::Zero(c.parity_dim(to), c.parity_dim(from));
    for (int p = static_cast<int>(from); p < c.degree_count(); p += 2) {
        const int q = p + shift;
        if (q < 0 || q >= c.degree_count() || c.dim(p) == 0 || c.dim(q) == 0)
            continue;
        out.block(c.parity_offset(q), c.parity_offset(p), c.dim(q), c.dim(p)) = block(p);
    }
    return out;
}

}  // namespace

Matrix GradedOperator::parity_matrix(const GradedCochainComplex& c, Parity from) const {
    return assemble_parity(c, from, shift, [&](int p) { return block(c, p); });
}

Matrix parity_coboundary(const GradedCochainComplex& c, Parity from) {
    return assemble_parity(c, from, 1, [&](int p) { return c.coboundary(p); });
}

GradedOperator zero_operator(const GradedCochainComplex& c, int shift) {
    GradedOperator op{shift, {}};
    for (int p = 0; p < c.degree_count(); ++p)
        op.blocks.push_back(Matrix::Zero(c.dim(p + shift), c.dim(p)));
    return op;
}

GradedOperator scaled(const GradedOperator& op, Complex factor) {
    GradedOperator out = op;
    for (auto& b : out.blocks)
        b *= factor;
    return out;
}

GradedOperator sum(const GradedOperator& a, const GradedOperator& b) {
    if (a.shift != b.shift)
        throw Error(ErrorKind::DegreeMismatch, "cannot add operators of different degree");
    GradedOperator out{a.shift, {}};
    const std::size_t n = std::max(a.blocks.size(), b.blocks.size());
    for (std::size_t p = 0; p < n; ++p) {
        const bool has_a = p < a.blocks.size() && a.blocks[p].size() > 0;
        const bool has_b = p < b.blocks.size() && b.blocks[p].size() > 0;
        if (has_a && has_b)
            out.blocks.push_back(a.blocks[p] + b.blocks[p]);
        else if (has_a)
            out.blocks.push_back(a.blocks[p]);
        else if (has_b)
            out.blocks.push_back(b.blocks[p]);
        else
            out.blocks.emplace_back();
    }
    return out;
}

Cochain apply_coboundary(const GradedCochainComplex& c, const Cochain& x) {
    if (x.coefficients.size() != c.dim(x.degree))
        throw Error(ErrorKind::DegreeMismatch, "cochain of degree " + std::to_string(x.degree) + " has length " +
                                                   std::to_string(x.coefficients.size()));
    return Cochain{x.degree + 1, c.coboundary(x.degree) * x.coefficients};
}

// ---------------------------------------------------------------------------
// Twisted complexes

TwistedComplex::TwistedComplex(Matrix d_even, Matrix d_odd, Matrix gram_even, Matrix gram_odd)
    : d_even_(std::move(d_even)), d_odd_(std::move(d_odd)), gram_even_(std::move(gram_even)),
      gram_odd_(std::move(gram_odd)) {
    require_positive_gram(gram_even_, "even Gram matrix");
    require_positive_gram(gram_odd_, "odd Gram matrix");
    const Index ne = gram_even_.rows(), no = gram_odd_.rows();
    if (d_even_.rows() != no || d_even_.cols() != ne)
        throw Error(ErrorKind::ShapeMismatch, "even differential has shape " + shape(d_even_));
    if (d_odd_.rows() != ne || d_odd_.cols() != no)
        throw Error(ErrorKind::ShapeMismatch, "odd differential has shape " + shape(d_odd_));
    const double res = square_zero_residual();
    if (res > 1e-12 * residual_scale(d_even_.norm(), d_odd_.norm()))
        throw Error(ErrorKind::NotSquareZero, "twisted differential squares to " + std::to_string(res));
}

double TwistedComplex::square_zero_residual() const {
    double a = 0.0, b = 0.0;
    if (d_even_.size() > 0 && d_odd_.size() > 0) {
        a = operator_norm(d_odd_ * d_even_);
        b = operator_norm(d_even_ * d_odd_);
    }
    return std::max(a, b);
}

TwistedComplex twisted_differential(const GradedCochainComplex& c, const std::vector<GradedOperator>& flux,
                                    double tol) {
    for (const auto& op : flux) {
        if (op.shift == 1)
            throw Error(ErrorKind::FluxHasDegreeOne, "flux components of degree 1 are not allowed");
        if (op.shift < 1 || op.shift % 2 == 0)
            throw Error(ErrorKind::FluxEvenDegree, "flux component of degree " + std::to_string(op.shift) +
                                                       " is not of odd degree >= 3");
        op.check_shape(c);
    }

    Matrix d[2], l[2];
    for (Parity from : {Parity::Even, Parity::Odd}) {
        const int i = static_cast<int>(from);
        d[i] = parity_coboundary(c, from);
        l[i] = Matrix::Zero(d[i].rows(), d[i].cols());
        for (const auto& op : flux)
            l[i] += op.parity_matrix(c, from);
    }

    const double scale = residual_scale(d[0].norm() + d[1].norm() + l[0].norm() + l[1].norm(),
                                        d[0].norm() + d[1].norm() + l[0].norm() + l[1].norm());
    for (int i = 0; i < 2; ++i) {
        const int j = 1 - i;
        if (d[i].size() == 0 || d[j].size() == 0)
            continue;
        const Matrix closure = d[j] * l[i] + l[j] * d[i];
        if (closure.size() > 0 && closure.cwiseAbs().maxCoeff() > tol * scale)
            throw Error(ErrorKind::FluxNotClosed, "delta h != 0 (residual " +
                                                      std::to_string(closure.cwiseAbs().maxCoeff()) + ")");
        const Matrix square = l[j] * l[i];
        if (square.size() > 0 && square.cwiseAbs().maxCoeff() > tol * scale)
            throw Error(ErrorKind::FluxNotNilpotent, "h cup h != 0 (residual " +
                                                         std::to_string(square.cwiseAbs().maxCoeff()) + ")");
    }

    return TwistedComplex(d[0] + l[0], d[1] + l[1], c.parity_gram(Parity::Even), c.parity_gram(Parity::Odd));
}

// ---------------------------------------------------------------------------
// Rank-nullity oracle

namespace {

using BigInt = boost::multiprecision::cpp_int;

Index exact_rank(const Matrix& m) {
    std::vector<std::vector<BigInt>> a(static_cast<std::size_t>(m.rows()),
                                       std::vector<BigInt>(static_cast<std::size_t>(m.cols())));
    for (Index i = 0; i < m.rows(); ++i)
        for (Index j = 0; j < m.cols(); ++j)
            a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = static_cast<long long>(m(i, j).real());

    // Fraction-free (Bareiss) elimination.
    const std::size_t rows = a.size(), cols = rows ? a[0].size() : 0;
    BigInt prev = 1;
    std::size_t rank = 0;
    for (std::size_t col = 0; col < cols && rank < rows; ++col) {
        std::size_t pivot = rank;
        while (pivot < rows && a[pivot][col] == 0)
            ++pivot;
        if (pivot == rows)
            continue;
        std::swap(a[pivot], a[rank]);
        for (std::size_t i = rank + 1; i < rows; ++i) {
            for (std::size_t j = col + 1; j < cols; ++j)
                a[i][j] = (a[rank][col] * a[i][j] - a[i][col] * a[rank][j]) / prev;
            a[i][col] = 0;
        }
        prev = a[rank][col];
        ++rank;
    }
    return static_cast<Index>(rank);
}

}  // namespace

Index matrix_rank(const Matrix& m, double relative_tol) {
    if (m.size() == 0)
        return 0;
    if (is_integral(m) && m.cwiseAbs().maxCoeff() < 1e15)
        return exact_rank(m);
    Eigen::JacobiSVD<Matrix> svd(m);
    const RealVector& s = svd.singularValues();
    if (s(0) == 0.0)
        return 0;
    Index r = 0;
    for (Index i = 0; i < s.size(); ++i)
        if (s(i) > relative_tol * s(0))
            ++r;
    return r;
}

std::vector<Index> cohomology_dimensions(const GradedCochainComplex& c) {
    std::vector<Index> ranks;
    for (int p = 0; p < c.degree_count(); ++p)
        ranks.push_back(matrix_rank(c.coboundary(p)));
    std::vector<Index> h;
    for (int p = 0; p < c.degree_count(); ++p) {
        const Index incoming = p > 0 ? ranks[static_cast<std::size_t>(p - 1)] : 0;
        h.push_back(c.dim(p) - ranks[static_cast<std::size_t>(p)] - incoming);
    }
    return h;
}

}  // namespace torsion
