#include "torsion/builders.hpp"

#include <cmath>
#include <numeric>
#include <numbers>
#include <random>

#include "torsion/minimal_model.hpp"

namespace torsion {

SimplicialComplex cycle_complex(int n) {
    if (n < 3)
        throw Error(ErrorKind::ValidationError, "cycle needs at least 3 vertices");
    std::vector<Simplex> edges;
    for (int i = 0; i < n; ++i)
        edges.push_back({i, (i + 1) % n});
    return build_simplicial(std::move(edges));
}

SimplicialComplex simplex_boundary(int n) {
    if (n < 1)
        throw Error(ErrorKind::ValidationError, "simplex_boundary needs n >= 1");
    std::vector<Simplex> faces;
    for (int drop = 0; drop <= n; ++drop) {
        Simplex s;
        for (int v = 0; v <= n; ++v)
            if (v != drop)
                s.push_back(v);
        faces.push_back(std::move(s));
    }
    return build_simplicial(std::move(faces));
}

GradedCochainComplex lens_complex(int p, int q, int k) {
    if (p < 2)
        throw Error(ErrorKind::ValidationError, "lens space needs p >= 2");
    if (std::gcd(p, q) != 1)
        throw Error(ErrorKind::ValidationError, "lens space needs gcd(p, q) = 1");
    int r = 1;
    while ((static_cast<long>(r) * q - 1) % p != 0)
        ++r;

    const int exponent = ((k % p) + p) % p;
    const auto root = [p](int e) { return std::polar(1.0, 2.0 * std::numbers::pi * e / p); };
    const Complex w = root(exponent);
    const Complex norm = exponent == 0 ? Complex(p) : Complex(0.0);
    const Complex wr = root(static_cast<int>((static_cast<long>(exponent) * r) % p));

    auto one = [](Complex z) { return Matrix::Constant(1, 1, z); };
    return GradedCochainComplex({1, 1, 1, 1}, {one(w - 1.0), one(norm), one(wr - 1.0)});
}

GradedCochainComplex minimal_sphere(int n) {
    if (n < 1)
        throw Error(ErrorKind::ValidationError, "minimal_sphere needs n >= 1");
    std::vector<Index> dims(static_cast<std::size_t>(n + 1), 0);
    dims.front() = 1;
    dims.back() = 1;
    return GradedCochainComplex(std::move(dims), {});
}

GradedOperator unit_multiplication(const GradedCochainComplex& c, const Cochain& h) {
    if (c.dim(0) != 1)
        throw Error(ErrorKind::ValidationError, "unit multiplication needs a one-dimensional degree 0");
    if (h.degree < 0 || h.degree > c.top_degree() || h.coefficients.size() != c.dim(h.degree))
        throw Error(ErrorKind::DegreeMismatch, "flux is not a cochain of this complex");
    GradedOperator op = zero_operator(c, h.degree);
    op.blocks[0] = h.coefficients;
    return op;
}

BundleData hopf_bundle(double f, double h2, double r) {
    GradedCochainComplex base = minimal_sphere(2);
    auto gen = [&](double x) {
        GradedOperator op = zero_operator(base, 2);
        op.blocks[0] = Matrix::Constant(1, 1, x);
        return op;
    };
    BundleData b{base, gen(f), gen(h2), zero_operator(base, 3), FiberRadius{r, false}};
    validate(b);
    return b;
}

BundleData trivial_bundle(GradedCochainComplex base, double r) {
    GradedOperator f = zero_operator(base, 2);
    GradedOperator h2 = zero_operator(base, 2);
    GradedOperator h3 = zero_operator(base, 3);
    BundleData b{std::move(base), std::move(f), std::move(h2), std::move(h3), FiberRadius{r, false}};
    validate(b);
    return b;
}

namespace {

Matrix embed(const Matrix& block, Index rows, Index cols) {
    Matrix out = Matrix::Zero(rows, cols);
    out.topLeftCorner(block.rows(), block.cols()) = block;
    return out;
}

}  // namespace

BundleData random_bundle(std::uint64_t seed, const RandomBundleShape& shape) {
    if (shape.even_generators < 0 || shape.odd_generators < 0 || shape.acyclic_pairs < 0)
        throw Error(ErrorKind::ValidationError, "random bundle shape must be nonnegative");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);

    const int b = shape.even_generators;
    Eigen::MatrixXd q(b, b);
    for (int i = 0; i < b; ++i)
        for (int j = i; j < b; ++j)
            q(i, j) = q(j, i) = unit(rng);
    const FormalModel model(q, shape.odd_generators);

    std::vector<double> f(static_cast<std::size_t>(b)), h2(static_cast<std::size_t>(b));
    for (auto& x : f)
        x = unit(rng);
    for (auto& x : h2)
        x = unit(rng);
    if (b > 0) {
        // Project h2 so that f^T Q h2 = 0, making F H2 vanish.
        Eigen::Map<Eigen::VectorXd> fv(f.data(), b), hv(h2.data(), b);
        const Eigen::VectorXd w = q * fv;
        if (w.squaredNorm() > 0.0)
            hv -= (w.dot(hv) / w.squaredNorm()) * w;
    }
    std::vector<double> c(static_cast<std::size_t>(shape.odd_generators));
    for (auto& x : c)
        x = unit(rng);

    const GradedOperator f_alg = model.degree_two(f);
    const GradedOperator h2_alg = model.degree_two(h2);
    const GradedOperator h3_alg = model.degree_three(c);

    // Acyclic pairs e -> w e', appended after the algebra basis in each degree.
    const int top = model.top_degree();
    std::vector<Index> dims = model.dims();
    struct Pair {
        int degree;
        Index col, row;
        Complex weight;
    };
    std::vector<Pair> pairs;
    std::uniform_int_distribution<int> where(0, std::max(0, top - 1));
    for (int i = 0; i < shape.acyclic_pairs && top > 0; ++i) {
        const int p = where(rng);
        const double magnitude = 0.5 + 1.5 * std::abs(unit(rng));
        const Complex weight = std::polar(magnitude, std::numbers::pi * unit(rng));
        const Index col = dims[static_cast<std::size_t>(p)]++;
        const Index row = dims[static_cast<std::size_t>(p + 1)]++;
        pairs.push_back({p, col, row, weight});
    }
    std::vector<Matrix> deltas;
    for (int p = 0; p < top; ++p)
        deltas.push_back(Matrix::Zero(dims[static_cast<std::size_t>(p + 1)], dims[static_cast<std::size_t>(p)]));
    for (const auto& pr : pairs)
        deltas[static_cast<std::size_t>(pr.degree)](pr.row, pr.col) = pr.weight;

    std::vector<Matrix> grams;
    for (Index n : dims) {
        Matrix m(n, n);
        for (Index i = 0; i < n; ++i)
            for (Index j = 0; j < n; ++j)
                m(i, j) = Complex(unit(rng), unit(rng));
        Matrix g = Matrix::Identity(n, n);
        if (n > 0)
            g += (m * m.adjoint()) * (0.5 / static_cast<double>(n));
        grams.push_back(0.5 * (g + g.adjoint()));
    }
    GradedCochainComplex base(dims, std::move(deltas), std::move(grams));

    auto lift = [&](const GradedOperator& op) {
        GradedOperator out{op.shift, {}};
        for (int p = 0; p <= top; ++p)
            out.blocks.push_back(embed(op.block(model.complex(), p), base.dim(p + op.shift), base.dim(p)));
        return out;
    };
    const double radius = std::exp(std::log(4.0) * unit(rng));
    BundleData bundle{base, lift(f_alg), lift(h2_alg), lift(h3_alg), FiberRadius{radius, false}};
    validate(bundle);
    return bundle;
}

}  // namespace torsion
