#ifndef TORSION_CHAIN_MODELS_HPP
#define TORSION_CHAIN_MODELS_HPP

#include <algorithm>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "torsion/error.hpp"
#include "torsion/linalg.hpp"

namespace torsion {

enum class Parity { Even = 0, Odd = 1 };

constexpr Parity flip(Parity p) noexcept { return p == Parity::Even ? Parity::Odd : Parity::Even; }
constexpr Parity parity_of(int degree) noexcept { return (degree % 2 == 0) ? Parity::Even : Parity::Odd; }
constexpr const char* to_string(Parity p) noexcept { return p == Parity::Even ? "even" : "odd"; }

/**
 * Finite Z-graded cochain complex with an inner product per degree.
 *
 * Degrees run 0..top. coboundary(p) maps C^p to C^{p+1} and is an
 * n_{p+1} x n_p matrix; outside 0..top-1 it is the appropriately shaped zero
 * matrix. Gram matrices default to the identity, i.e. the cochain basis is
 * orthonormal.
 */
class GradedCochainComplex {
public:
    GradedCochainComplex() = default;

    /// Throws NotSquareZero, ShapeMismatch or GramNotPositive.
    GradedCochainComplex(std::vector<Index> dims, std::vector<Matrix> coboundary,
                         std::vector<Matrix> gram = {});

    int top_degree() const noexcept { return static_cast<int>(dims_.size()) - 1; }
    int degree_count() const noexcept { return static_cast<int>(dims_.size()); }
    const std::vector<Index>& dims() const noexcept { return dims_; }
    Index dim(int p) const noexcept;
    Index total_dim() const noexcept;

    Matrix coboundary(int p) const;
    const Matrix& gram(int p) const;
    const std::vector<Matrix>& grams() const noexcept { return gram_; }
    const std::vector<Matrix>& coboundaries() const noexcept { return coboundary_; }

    /// True when every coboundary entry is an integer (Gram matrices ignored).
    bool integral() const noexcept { return integral_; }

    /// Largest ||delta_{p+1} delta_p||, computed in floating point.
    double square_zero_residual() const;

    GradedCochainComplex with_grams(std::vector<Matrix> gram) const;

    // Concatenated degrees of one parity, in increasing degree order.
    Index parity_dim(Parity parity) const;
    Index parity_offset(int degree) const;
    Matrix parity_gram(Parity parity) const;

    bool operator==(const GradedCochainComplex& o) const {
        return dims_ == o.dims_ && identical(coboundary_, o.coboundary_) && identical(gram_, o.gram_);
    }

private:
    std::vector<Index> dims_;
    std::vector<Matrix> coboundary_;
    std::vector<Matrix> gram_;
    bool integral_ = true;
};

/// A degree-shifting operator on a graded complex, e.g. multiplication by a
/// form. blocks[p] maps C^p to C^{p+shift}; missing blocks are zero.
struct GradedOperator {
    int shift = 0;
    std::vector<Matrix> blocks;

    Matrix block(const GradedCochainComplex& c, int p) const;
    /// Throws ShapeMismatch if a stored block disagrees with the complex.
    void check_shape(const GradedCochainComplex& c) const;
    /// Assembled map from the parity-`from` space to the parity-`from + shift` space.
    Matrix parity_matrix(const GradedCochainComplex& c, Parity from) const;

    bool operator==(const GradedOperator& o) const { return shift == o.shift && identical(blocks, o.blocks); }
};

GradedOperator zero_operator(const GradedCochainComplex& c, int shift);
GradedOperator scaled(const GradedOperator& op, Complex factor);
GradedOperator sum(const GradedOperator& a, const GradedOperator& b);

/// Assembled coboundary from the parity-`from` space into the other parity.
Matrix parity_coboundary(const GradedCochainComplex& c, Parity from);

struct Cochain {
    int degree = 0;
    Vector coefficients;

    bool operator==(const Cochain& o) const { return degree == o.degree && identical(coefficients, o.coefficients); }
};

Cochain apply_coboundary(const GradedCochainComplex& c, const Cochain& x);

/// Z2-graded complex: d_even maps the even space into the odd one, d_odd back.
class TwistedComplex {
public:
    TwistedComplex() = default;
    /// Throws NotSquareZero, ShapeMismatch or GramNotPositive.
    TwistedComplex(Matrix d_even, Matrix d_odd, Matrix gram_even, Matrix gram_odd);

    const Matrix& d(Parity from) const noexcept { return from == Parity::Even ? d_even_ : d_odd_; }
    const Matrix& gram(Parity p) const noexcept { return p == Parity::Even ? gram_even_ : gram_odd_; }
    Index dim(Parity p) const noexcept { return gram(p).rows(); }
    double square_zero_residual() const;

private:
    Matrix d_even_;
    Matrix d_odd_;
    Matrix gram_even_;
    Matrix gram_odd_;
};

// ---------------------------------------------------------------------------
// Simplicial complexes

using Simplex = std::vector<int>;

class SimplicialComplex {
public:
    SimplicialComplex() = default;

    int dimension() const noexcept { return static_cast<int>(simplices_.size()) - 1; }
    const std::vector<int>& vertices() const noexcept { return vertices_; }
    const std::vector<Simplex>& simplices(int p) const;
    Index count(int p) const;
    std::optional<Index> index_of(const Simplex& s) const;

    std::vector<Index> f_vector() const;
    long euler_characteristic() const;

    /// Sign per top simplex, if a coherent orientation has been attached.
    const std::optional<std::vector<int>>& orientation() const noexcept { return orientation_; }
    /// Throws InvalidOrientation if adjacent top simplices agree on a shared face.
    SimplicialComplex with_orientation(std::vector<int> signs) const;

    bool operator==(const SimplicialComplex& other) const {
        return simplices_ == other.simplices_ && orientation_ == other.orientation_;
    }

private:
    friend SimplicialComplex build_simplicial(std::vector<Simplex>, bool);

    std::vector<int> vertices_;
    std::vector<std::vector<Simplex>> simplices_;
    std::vector<std::map<Simplex, Index>> index_;
    std::optional<std::vector<int>> orientation_;
};

/**
 * Closure of a list of top simplices under taking faces.
 *
 * Vertex tuples are sorted; a tuple with a repeated vertex raises
 * InvalidSimplex and a repeated tuple raises DuplicateSimplex. Tops of
 * different dimensions raise InconsistentDimension unless
 * allow_mixed_dimensions is set.
 */
SimplicialComplex build_simplicial(std::vector<Simplex> top_simplices, bool allow_mixed_dimensions = false);

/// Coherent orientation of a pseudomanifold, first top simplex of each
/// component positive. Throws NotOrientable.
SimplicialComplex orient(const SimplicialComplex& k);

/// Flat unitary holonomy on oriented edges (a, b), a < b, mapping the fibre
/// at a to the fibre at b. Edges without an entry carry the identity.
struct LocalSystem {
    int rank = 1;
    std::map<std::pair<int, int>, Matrix> edge_holonomy;

    /// Identity at every edge of the given rank.
    static LocalSystem trivial(int rank);
    Matrix holonomy(int a, int b) const;
    /// Throws NonUnitaryHolonomy / NonFlatLocalSystem.
    void validate(const SimplicialComplex& k, double tol = 1e-12) const;

    bool operator==(const LocalSystem& o) const {
        return rank == o.rank && edge_holonomy.size() == o.edge_holonomy.size() &&
               std::equal(edge_holonomy.begin(), edge_holonomy.end(), o.edge_holonomy.begin(),
                          [](const auto& x, const auto& y) { return x.first == y.first && identical(x.second, y.second); });
    }
};

/**
 * Signed incidence coboundaries, (delta c)(v0..v{p+1}) = sum_i (-1)^i c(face_i).
 *
 * With a local system the value of a cochain on a simplex lives in the fibre
 * over its first vertex; the face opposite v0 is transported back along
 * U(v0 v1)^dagger. Cochains are laid out simplex-major (rank m blocks).
 */
GradedCochainComplex coboundary_matrices(const SimplicialComplex& k,
                                         const std::optional<LocalSystem>& local = std::nullopt);

/// Alexander-Whitney cup product. Returns the zero cochain of degree p+q
/// (length 0 when p+q > dim K).
Cochain cup(const Cochain& a, const Cochain& b, const SimplicialComplex& k);

/// Left multiplication c -> h cup c as a graded operator.
GradedOperator cup_operator(const SimplicialComplex& k, const Cochain& h);

/// d_h = delta + sum of odd-degree multiplication operators, assembled on
/// even/odd spaces. Throws FluxHasDegreeOne, FluxEvenDegree, FluxNotClosed,
/// FluxNotNilpotent.
TwistedComplex twisted_differential(const GradedCochainComplex& c, const std::vector<GradedOperator>& flux,
                                    double tol = 1e-12);

/// Simplicial flux given as cochains: checks delta h = 0 and h cup h = 0 by
/// direct evaluation, then assembles with cup operators.
TwistedComplex twisted_differential(const SimplicialComplex& k, const GradedCochainComplex& c,
                                    const std::vector<Cochain>& flux, double tol = 1e-12);

/// <[h], [K]>: signed sum over coherently oriented top simplices.
double pair_with_fundamental_class(const SimplicialComplex& k, const Cochain& h);

/// Cohomology dimensions by rank-nullity. Exact elimination for integral
/// complexes, SVD rank otherwise. Independent of any Laplacian.
std::vector<Index> cohomology_dimensions(const GradedCochainComplex& c);

/// Matrix rank: fraction-free exact elimination when integral, SVD otherwise.
Index matrix_rank(const Matrix& m, double relative_tol = 1e-9);

}  // namespace torsion

#endif
