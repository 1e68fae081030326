#ifndef TORSION_MINIMAL_MODEL_HPP
#define TORSION_MINIMAL_MODEL_HPP

#include <vector>

#include "torsion/chain_models.hpp"

namespace torsion {

/**
 * Graded-commutative algebra A (x) Lambda(y_1..y_a) with zero differential.
 *
 * A has a unit in degree 0, b classes x_i in degree 2 with x_i x_j = Q_ij t
 * for a symmetric form Q, and a top class t in degree 4 (the cohomology ring
 * of a simply connected 4-manifold). The y_j have degree 3 and anticommute.
 * With b = 0 the A factor is just the unit.
 *
 * Basis elements are monomials alpha (x) y_S, ordered by degree, then by the
 * A index (unit, x_1..x_b, t), then by the bitmask S.
 */
class FormalModel {
public:
    FormalModel(Eigen::MatrixXd intersection_form, int odd_generators);

    struct Monomial {
        int a_index;  // 0 = unit, 1..b = x_i, b+1 = t
        unsigned mask;
        int degree;
    };

    int top_degree() const noexcept { return top_degree_; }
    std::vector<Index> dims() const;
    const std::vector<Monomial>& basis() const noexcept { return basis_; }
    /// Position of a monomial within its degree.
    Index local_index(const Monomial& m) const;

    GradedCochainComplex complex() const;

    /// Left multiplication by a basis monomial.
    GradedOperator left_multiplication(const Monomial& m) const;
    /// Left multiplication by sum_i coeffs[i] x_i.
    GradedOperator degree_two(const std::vector<double>& coeffs) const;
    /// Left multiplication by sum_j coeffs[j] y_j.
    GradedOperator degree_three(const std::vector<double>& coeffs) const;

    int even_generators() const noexcept { return static_cast<int>(form_.rows()); }
    int odd_generators() const noexcept { return odd_; }
    const Eigen::MatrixXd& intersection_form() const noexcept { return form_; }

private:
    /// Product of two monomials: (coefficient, monomial); coefficient 0 when it vanishes.
    std::pair<double, Monomial> multiply(const Monomial& left, const Monomial& right) const;
    int a_degree(int a_index) const;

    Eigen::MatrixXd form_;
    int odd_ = 0;
    int top_degree_ = 0;
    std::vector<Monomial> basis_;
};

}  // namespace torsion

#endif
