#include <algorithm>
#include <cmath>
#include <deque>
#include <set>
#include <string>

#include "torsion/chain_models.hpp"

namespace torsion {

namespace {

std::string describe(const Simplex& s) {
    std::string out = "(";
    for (std::size_t i = 0; i < s.size(); ++i)
        out += (i ? "," : "") + std::to_string(s[i]);
    return out + ")";
}

Simplex face(const Simplex& s, std::size_t drop) {
    Simplex f;
    f.reserve(s.size() - 1);
    for (std::size_t i = 0; i < s.size(); ++i)
        if (i != drop)
            f.push_back(s[i]);
    return f;
}

}  // namespace

SimplicialComplex build_simplicial(std::vector<Simplex> top_simplices, bool allow_mixed_dimensions) {
    if (top_simplices.empty())
        throw Error(ErrorKind::InvalidSimplex, "no simplices given");

    std::set<Simplex> seen;
    std::size_t top_size = 0;
    for (auto& s : top_simplices) {
        if (s.empty())
            throw Error(ErrorKind::InvalidSimplex, "empty simplex");
        std::sort(s.begin(), s.end());
        if (s.front() < 0)
            throw Error(ErrorKind::InvalidSimplex, "negative vertex id in " + describe(s));
        if (std::adjacent_find(s.begin(), s.end()) != s.end())
            throw Error(ErrorKind::InvalidSimplex, "repeated vertex in " + describe(s));
        if (!seen.insert(s).second)
            throw Error(ErrorKind::DuplicateSimplex, describe(s));
        if (top_size != 0 && s.size() != top_size && !allow_mixed_dimensions)
            throw Error(ErrorKind::InconsistentDimension,
                        describe(s) + " has dimension " + std::to_string(s.size() - 1) + ", expected " +
                            std::to_string(top_size - 1));
        top_size = std::max(top_size, s.size());
    }

    std::vector<std::set<Simplex>> by_dim(top_size);
    std::deque<Simplex> pending(top_simplices.begin(), top_simplices.end());
    while (!pending.empty()) {
        Simplex s = std::move(pending.front());
        pending.pop_front();
        if (!by_dim[s.size() - 1].insert(s).second)
            continue;
        if (s.size() > 1)
            for (std::size_t i = 0; i < s.size(); ++i)
                pending.push_back(face(s, i));
    }

    SimplicialComplex k;
    for (const auto& simplices : by_dim) {
        k.simplices_.emplace_back(simplices.begin(), simplices.end());
        std::map<Simplex, Index> index;
        Index i = 0;
        for (const auto& s : simplices)
            index.emplace(s, i++);
        k.index_.push_back(std::move(index));
    }
    for (const auto& v : k.simplices_[0])
        k.vertices_.push_back(v[0]);
    return k;
}

const std::vector<Simplex>& SimplicialComplex::simplices(int p) const {
    static const std::vector<Simplex> none;
    if (p < 0 || p > dimension())
        return none;
    return simplices_[static_cast<std::size_t>(p)];
}

Index SimplicialComplex::count(int p) const { return static_cast<Index>(simplices(p).size()); }

std::optional<Index> SimplicialComplex::index_of(const Simplex& s) const {
    const int p = static_cast<int>(s.size()) - 1;
    if (p < 0 || p > dimension())
        return std::nullopt;
    const auto& index = index_[static_cast<std::size_t>(p)];
    auto it = index.find(s);
    if (it == index.end())
        return std::nullopt;
    return it->second;
}

std::vector<Index> SimplicialComplex::f_vector() const {
    std::vector<Index> f;
    for (int p = 0; p <= dimension(); ++p)
        f.push_back(count(p));
    return f;
}

long SimplicialComplex::euler_characteristic() const {
    long chi = 0;
    for (int p = 0; p <= dimension(); ++p)
        chi += (p % 2 == 0 ? 1 : -1) * static_cast<long>(count(p));
    return chi;
}

namespace {

// (face index, induced sign) pairs for every codim-1 face of every top simplex.
std::map<Simplex, std::vector<std::pair<Index, int>>> top_face_incidence(const SimplicialComplex& k) {
    std::map<Simplex, std::vector<std::pair<Index, int>>> incidence;
    const auto& tops = k.simplices(k.dimension());
    for (std::size_t t = 0; t < tops.size(); ++t)
        for (std::size_t i = 0; i < tops[t].size() && tops[t].size() > 1; ++i)
            incidence[face(tops[t], i)].emplace_back(static_cast<Index>(t), (i % 2 == 0) ? 1 : -1);
    return incidence;
}

}  // namespace

SimplicialComplex SimplicialComplex::with_orientation(std::vector<int> signs) const {
    if (static_cast<Index>(signs.size()) != count(dimension()))
        throw Error(ErrorKind::InvalidOrientation, "need one sign per top simplex");
    for (int s : signs)
        if (s != 1 && s != -1)
            throw Error(ErrorKind::InvalidOrientation, "orientation signs must be +1 or -1");
    for (const auto& [f, users] : top_face_incidence(*this)) {
        if (users.size() != 2)
            continue;
        const int a = signs[static_cast<std::size_t>(users[0].first)] * users[0].second;
        const int b = signs[static_cast<std::size_t>(users[1].first)] * users[1].second;
        if (a == b)
            throw Error(ErrorKind::InvalidOrientation, "top simplices induce equal signs on face " + describe(f));
    }
    SimplicialComplex out = *this;
    out.orientation_ = std::move(signs);
    return out;
}

SimplicialComplex orient(const SimplicialComplex& k) {
    const Index n = k.count(k.dimension());
    const auto incidence = top_face_incidence(k);
    std::vector<std::vector<std::pair<Index, int>>> adjacency(static_cast<std::size_t>(n));
    for (const auto& [f, users] : incidence) {
        if (users.size() > 2)
            throw Error(ErrorKind::NotOrientable, "face " + describe(f) + " is shared by more than two top simplices");
        if (users.size() == 2) {
            // Neighbours must induce opposite signs: s_b * e_b = -(s_a * e_a).
            const int rel = -users[0].second * users[1].second;
            adjacency[static_cast<std::size_t>(users[0].first)].emplace_back(users[1].first, rel);
            adjacency[static_cast<std::size_t>(users[1].first)].emplace_back(users[0].first, rel);
        }
    }
    std::vector<int> signs(static_cast<std::size_t>(n), 0);
    for (Index start = 0; start < n; ++start) {
        if (signs[static_cast<std::size_t>(start)] != 0)
            continue;
        signs[static_cast<std::size_t>(start)] = 1;
        std::deque<Index> queue{start};
        while (!queue.empty()) {
            const Index a = queue.front();
            queue.pop_front();
            for (auto [b, rel] : adjacency[static_cast<std::size_t>(a)]) {
                const int want = rel * signs[static_cast<std::size_t>(a)];
                int& sb = signs[static_cast<std::size_t>(b)];
                if (sb == 0) {
                    sb = want;
                    queue.push_back(b);
                } else if (sb != want) {
                    throw Error(ErrorKind::NotOrientable, "no coherent orientation exists");
                }
            }
        }
    }
    return k.with_orientation(std::move(signs));
}

// ---------------------------------------------------------------------------
// Local systems

LocalSystem LocalSystem::trivial(int rank) { return LocalSystem{rank, {}}; }

Matrix LocalSystem::holonomy(int a, int b) const {
    auto it = edge_holonomy.find({a, b});
    if (it == edge_holonomy.end())
        return Matrix::Identity(rank, rank);
    return it->second;
}

void LocalSystem::validate(const SimplicialComplex& k, double tol) const {
    if (rank < 1)
        throw Error(ErrorKind::NonUnitaryHolonomy, "local system rank must be positive");
    const Matrix id = Matrix::Identity(rank, rank);
    for (const auto& [edge, u] : edge_holonomy) {
        if (u.rows() != rank || u.cols() != rank)
            throw Error(ErrorKind::NonUnitaryHolonomy, "holonomy on edge has wrong rank");
        if (edge.first >= edge.second)
            throw Error(ErrorKind::NonUnitaryHolonomy, "holonomy edges must be written (a,b) with a < b");
        if (!k.index_of({edge.first, edge.second}))
            throw Error(ErrorKind::NonUnitaryHolonomy, "holonomy given on an edge not in the complex");
        if ((u.adjoint() * u - id).cwiseAbs().maxCoeff() > tol)
            throw Error(ErrorKind::NonUnitaryHolonomy, "holonomy on edge (" + std::to_string(edge.first) + "," +
                                                           std::to_string(edge.second) + ") is not unitary");
    }
    for (const auto& s : k.simplices(2)) {
        const Matrix lhs = holonomy(s[1], s[2]) * holonomy(s[0], s[1]);
        if ((lhs - holonomy(s[0], s[2])).cwiseAbs().maxCoeff() > tol)
            throw Error(ErrorKind::NonFlatLocalSystem, "holonomy around " + describe(s) + " is not trivial");
    }
}

GradedCochainComplex coboundary_matrices(const SimplicialComplex& k, const std::optional<LocalSystem>& local) {
    const int m = local ? local->rank : 1;
    if (local)
        local->validate(k);

    std::vector<Index> dims;
    for (int p = 0; p <= k.dimension(); ++p)
        dims.push_back(k.count(p) * m);

    std::vector<Matrix> deltas;
    for (int p = 0; p < k.dimension(); ++p) {
        Matrix d = Matrix::Zero(k.count(p + 1) * m, k.count(p) * m);
        const auto& simplices = k.simplices(p + 1);
        for (std::size_t row = 0; row < simplices.size(); ++row) {
            const Simplex& s = simplices[row];
            for (std::size_t i = 0; i < s.size(); ++i) {
                const Index col = *k.index_of(face(s, i));
                const double sign = (i % 2 == 0) ? 1.0 : -1.0;
                Matrix blk = Matrix::Identity(m, m) * sign;
                if (local && i == 0)
                    blk = local->holonomy(s[0], s[1]).adjoint();
                d.block(static_cast<Index>(row) * m, col * m, m, m) = blk;
            }
        }
        deltas.push_back(std::move(d));
    }
    return GradedCochainComplex(std::move(dims), std::move(deltas));
}

// ---------------------------------------------------------------------------
// Cup products

namespace {

void require_cochain(const SimplicialComplex& k, const Cochain& c, const char* name) {
    if (c.degree < 0 || c.degree > k.dimension() || c.coefficients.size() != k.count(c.degree))
        throw Error(ErrorKind::DegreeMismatch, std::string(name) + " is not a cochain of degree " +
                                                   std::to_string(c.degree) + " on this complex");
}

}  // namespace

Cochain cup(const Cochain& a, const Cochain& b, const SimplicialComplex& k) {
    require_cochain(k, a, "left factor");
    require_cochain(k, b, "right factor");
    const int deg = a.degree + b.degree;
    Cochain out{deg, Vector::Zero(k.count(deg))};
    const auto& simplices = k.simplices(deg);
    for (std::size_t i = 0; i < simplices.size(); ++i) {
        const Simplex& s = simplices[i];
        const Simplex front(s.begin(), s.begin() + a.degree + 1);
        const Simplex back(s.begin() + a.degree, s.end());
        out.coefficients(static_cast<Index>(i)) = a.coefficients(*k.index_of(front)) * b.coefficients(*k.index_of(back));
    }
    return out;
}

GradedOperator cup_operator(const SimplicialComplex& k, const Cochain& h) {
    require_cochain(k, h, "flux");
    GradedOperator op{h.degree, {}};
    for (int p = 0; p <= k.dimension(); ++p) {
        const int q = p + h.degree;
        Matrix blk = Matrix::Zero(k.count(q), k.count(p));
        const auto& simplices = k.simplices(q);
        for (std::size_t i = 0; i < simplices.size(); ++i) {
            const Simplex& s = simplices[i];
            const Simplex front(s.begin(), s.begin() + h.degree + 1);
            const Simplex back(s.begin() + h.degree, s.end());
            blk(static_cast<Index>(i), *k.index_of(back)) += h.coefficients(*k.index_of(front));
        }
        op.blocks.push_back(std::move(blk));
    }
    return op;
}

TwistedComplex twisted_differential(const SimplicialComplex& k, const GradedCochainComplex& c,
                                    const std::vector<Cochain>& flux, double tol) {
    std::vector<GradedOperator> ops;
    Vector total_sq;
    double norm = 0.0;
    for (const auto& h : flux) {
        require_cochain(k, h, "flux");
        if (h.degree == 1)
            throw Error(ErrorKind::FluxHasDegreeOne, "flux components of degree 1 are not allowed");
        if (h.degree % 2 == 0)
            throw Error(ErrorKind::FluxEvenDegree, "flux component of degree " + std::to_string(h.degree));
        const Cochain dh = apply_coboundary(c, h);
        const double scale = std::max(1.0, h.coefficients.norm());
        if (dh.coefficients.size() > 0 && dh.coefficients.cwiseAbs().maxCoeff() > tol * scale)
            throw Error(ErrorKind::FluxNotClosed, "delta h has residual " +
                                                      std::to_string(dh.coefficients.cwiseAbs().maxCoeff()));
        norm += h.coefficients.norm();
        ops.push_back(cup_operator(k, h));
    }
    // (sum h_i) cup (sum h_j), grouped by degree.
    std::map<int, Vector> square;
    for (const auto& a : flux)
        for (const auto& b : flux) {
            const Cochain ab = cup(a, b, k);
            if (ab.coefficients.size() == 0)
                continue;
            auto [it, fresh] = square.try_emplace(ab.degree, ab.coefficients);
            if (!fresh)
                it->second += ab.coefficients;
        }
    for (const auto& [deg, v] : square)
        if (v.cwiseAbs().maxCoeff() > tol * std::max(1.0, norm * norm))
            throw Error(ErrorKind::FluxNotNilpotent, "h cup h is nonzero in degree " + std::to_string(deg));
    return twisted_differential(c, ops, tol);
}

double pair_with_fundamental_class(const SimplicialComplex& k, const Cochain& h) {
    if (!k.orientation())
        throw Error(ErrorKind::NotOriented, "complex carries no orientation");
    if (h.degree != k.dimension())
        throw Error(ErrorKind::NotTopDegree, "cochain has degree " + std::to_string(h.degree) + ", complex has dimension " +
                                                 std::to_string(k.dimension()));
    require_cochain(k, h, "cochain");
    const auto& signs = *k.orientation();
    Complex total = 0.0;
    for (std::size_t i = 0; i < signs.size(); ++i)
        total += static_cast<double>(signs[i]) * h.coefficients(static_cast<Index>(i));
    return total.real();
}

}  // namespace torsion
