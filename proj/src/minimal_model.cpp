#include "torsion/minimal_model.hpp"

#include <algorithm>
#include <bit>
#include <tuple>

namespace torsion {

FormalModel::FormalModel(Eigen::MatrixXd intersection_form, int odd_generators)
    : form_(std::move(intersection_form)), odd_(odd_generators) {
    if (form_.rows() != form_.cols())
        throw Error(ErrorKind::ShapeMismatch, "intersection form must be square");
    if ((form_ - form_.transpose()).cwiseAbs().maxCoeff() > 0.0)
        throw Error(ErrorKind::ValidationError, "intersection form must be symmetric");
    if (odd_ < 0 || odd_ > 16)
        throw Error(ErrorKind::ValidationError, "odd generator count must be in 0..16");

    const int b = even_generators();
    const int a_count = b > 0 ? b + 2 : 1;
    for (int a = 0; a < a_count; ++a)
        for (unsigned mask = 0; mask < (1u << odd_); ++mask)
            basis_.push_back({a, mask, a_degree(a) + 3 * std::popcount(mask)});
    std::stable_sort(basis_.begin(), basis_.end(), [](const Monomial& x, const Monomial& y) {
        return std::tie(x.degree, x.a_index, x.mask) < std::tie(y.degree, y.a_index, y.mask);
    });
    top_degree_ = basis_.back().degree;
}

int FormalModel::a_degree(int a_index) const {
    if (a_index == 0)
        return 0;
    return a_index <= even_generators() ? 2 : 4;
}

std::vector<Index> FormalModel::dims() const {
    std::vector<Index> d(static_cast<std::size_t>(top_degree_ + 1), 0);
    for (const auto& m : basis_)
        ++d[static_cast<std::size_t>(m.degree)];
    return d;
}

Index FormalModel::local_index(const Monomial& m) const {
    Index i = 0;
    for (const auto& n : basis_) {
        if (n.degree != m.degree)
            continue;
        if (n.a_index == m.a_index && n.mask == m.mask)
            return i;
        ++i;
    }
    throw Error(ErrorKind::ValidationError, "monomial not in basis");
}

GradedCochainComplex FormalModel::complex() const { return GradedCochainComplex(dims(), {}); }

std::pair<double, FormalModel::Monomial> FormalModel::multiply(const Monomial& left, const Monomial& right) const {
    const int b = even_generators();
    const int top = b + 1;
    double coeff = 1.0;
    int a = 0;

    // A factor.
    if (left.a_index == 0) {
        a = right.a_index;
    } else if (right.a_index == 0) {
        a = left.a_index;
    } else if (left.a_index <= b && right.a_index <= b) {
        coeff = form_(left.a_index - 1, right.a_index - 1);
        a = top;
    } else {
        return {0.0, {}};
    }

    // Exterior factor: y_T y_S, sign of the shuffle putting T u S in order.
    if (left.mask & right.mask)
        return {0.0, {}};
    int inversions = 0;
    for (int t = 0; t < odd_; ++t)
        if (left.mask & (1u << t))
            inversions += std::popcount(right.mask & ((1u << t) - 1u));
    if (inversions % 2)
        coeff = -coeff;
    // Koszul sign (-1)^{|y_T| |alpha_right|} is +1: A is concentrated in even degrees.

    const unsigned mask = left.mask | right.mask;
    return {coeff, Monomial{a, mask, a_degree(a) + 3 * std::popcount(mask)}};
}

GradedOperator FormalModel::left_multiplication(const Monomial& m) const {
    const auto d = dims();
    GradedOperator op{m.degree, {}};
    for (int p = 0; p <= top_degree_; ++p) {
        const int q = p + m.degree;
        const Index rows = (q >= 0 && q <= top_degree_) ? d[static_cast<std::size_t>(q)] : 0;
        op.blocks.push_back(Matrix::Zero(rows, d[static_cast<std::size_t>(p)]));
    }
    for (const auto& src : basis_) {
        const auto [coeff, prod] = multiply(m, src);
        if (coeff == 0.0)
            continue;
        op.blocks[static_cast<std::size_t>(src.degree)](local_index(prod), local_index(src)) += coeff;
    }
    return op;
}

GradedOperator FormalModel::degree_two(const std::vector<double>& coeffs) const {
    if (static_cast<int>(coeffs.size()) != even_generators())
        throw Error(ErrorKind::ShapeMismatch, "need one coefficient per degree-2 generator");
    GradedOperator total = zero_operator(complex(), 2);
    for (int i = 0; i < even_generators(); ++i)
        total = sum(total, scaled(left_multiplication({i + 1, 0u, 2}), coeffs[static_cast<std::size_t>(i)]));
    return total;
}

GradedOperator FormalModel::degree_three(const std::vector<double>& coeffs) const {
    if (static_cast<int>(coeffs.size()) != odd_)
        throw Error(ErrorKind::ShapeMismatch, "need one coefficient per degree-3 generator");
    GradedOperator total = zero_operator(complex(), 3);
    for (int j = 0; j < odd_; ++j)
        total = sum(total, scaled(left_multiplication({0, 1u << j, 3}), coeffs[static_cast<std::size_t>(j)]));
    return total;
}

}  // namespace torsion
