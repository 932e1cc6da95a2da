#include "relmech/metric.hpp"

#include <cmath>
#include <string>
#include <utility>

namespace relmech {

BundleMetric::BundleMetric(std::size_t dim, MatrixFn at) : dim_(dim), at_(std::move(at)) {
    if (dim_ < 1 || dim_ > kMaxDim) throw PreconditionError("metric dimension must be in [1, 8]");
}

BundleMetric BundleMetric::constant(const SquareMatrix& g) {
    return BundleMetric(g.size(), [g](const Coords&) { return g; });
}

BundleMetric BundleMetric::euclidean(std::size_t dim) { return constant(SquareMatrix::identity(dim)); }

BundleMetric BundleMetric::minkowski() { return constant(SquareMatrix::diagonal({1.0, -1.0, -1.0, -1.0})); }

BundleMetric BundleMetric::polar_plane() {
    return BundleMetric(2, [](const Coords& x) { return SquareMatrix::diagonal({1.0, x[0] * x[0]}); });
}

BundleMetric BundleMetric::unit_sphere() {
    return BundleMetric(2, [](const Coords& x) {
        const double s = std::sin(x[0]);
        return SquareMatrix::diagonal({1.0, s * s});
    });
}

SquareMatrix BundleMetric::at(const Coords& point) const {
    if (point.size() != dim_) throw PreconditionError("point dimension does not match metric");
    SquareMatrix g = at_(point);
    if (g.size() != dim_ || !g.all_finite()) throw NumericError("metric matrix is malformed or non-finite");
    for (std::size_t i = 0; i < dim_; ++i)
        for (std::size_t j = i + 1; j < dim_; ++j)
            if (std::abs(g(i, j) - g(j, i)) > 1e-12) throw NumericError("metric matrix is not symmetric");
    if (std::abs(determinant(g)) <= 1e-12) throw NumericError("metric matrix is degenerate");
    return g;
}

double epsilon(double lambda, ZeroSign zero) {
    if (lambda < 0.0) return -1.0;
    if (lambda > 0.0) return 1.0;
    return zero == ZeroSign::positive ? 1.0 : -1.0;
}

namespace {

double bilinear(const SquareMatrix& g, const Coords& u, const Coords& v) {
    double acc = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < v.size(); ++j) row += g(i, j) * v[j];
        acc += u[i] * row;
    }
    return acc;
}

}  // namespace

double scalar_product(const BundleMetric& g, const TangentVector& u, const TangentVector& v) {
    if (!same_base(u, v)) throw PreconditionError("scalar_product: vectors attached at different points");
    if (u.dim() != g.dim() || v.dim() != g.dim()) throw PreconditionError("scalar_product: dimension mismatch");
    return bilinear(g.at(u.base), u.comps, v.comps);
}

double scalar_square(const BundleMetric& g, const TangentVector& v) { return scalar_product(g, v, v); }

bool is_effectively_null(double square, const Coords& comps) {
    const double n = max_norm(comps);
    return std::abs(square) < kNullThreshold * n * n || n == 0.0;
}

double causal_square(const BundleMetric& g, const TangentVector& v) {
    const double sq = scalar_square(g, v);
    return is_effectively_null(sq, v.comps) ? 0.0 : sq;
}

AdaptedBasis adapted_basis(const BundleMetric& g, const TangentVector& v1) {
    const double sq = scalar_square(g, v1);
    if (is_effectively_null(sq, v1.comps)) {
        throw DegenerateDirectionError(
            "adapted basis needs a non-null first vector; for a null velocity the energy is spread "
            "over all components and cannot be connected with a single one");
    }
    const std::size_t n = g.dim();
    const SquareMatrix gx = g.at(v1.base);

    AdaptedBasis basis;
    basis.signature1 = epsilon(sq);
    basis.vectors.push_back({v1.base, v1.comps * (1.0 / std::sqrt(std::abs(sq)))});
    std::vector<double> squares{basis.signature1};

    // Try to add candidate c, orthogonalized against all accepted vectors.
    auto try_add = [&](const Coords& c) {
        Coords w = c;
        for (std::size_t k = 0; k < basis.vectors.size(); ++k) {
            const Coords& l = basis.vectors[k].comps;
            w -= l * (bilinear(gx, c, l) / squares[k]);
        }
        const double norm = max_norm(w);
        if (norm < 1e-10) return;
        const double wsq = bilinear(gx, w, w);
        if (is_effectively_null(wsq, w)) return;
        basis.vectors.push_back({v1.base, w * (1.0 / std::sqrt(std::abs(wsq)))});
        squares.push_back(epsilon(wsq));
    };

    for (std::size_t axis = 0; axis < n && basis.vectors.size() < n; ++axis) try_add(Coords::unit(n, axis));
    // Indefinite metrics can make a projected axis null; mixed seeds cover that case.
    for (std::size_t i = 0; i < n && basis.vectors.size() < n; ++i)
        for (std::size_t j = i + 1; j < n && basis.vectors.size() < n; ++j) {
            try_add(Coords::unit(n, i) + Coords::unit(n, j));
            if (basis.vectors.size() < n) try_add(Coords::unit(n, i) - Coords::unit(n, j));
        }
    if (basis.vectors.size() < n) throw NumericError("could not complete an orthogonal adapted basis");
    return basis;
}

double first_component(const BundleMetric& g, const TangentVector& a, const AdaptedBasis& basis) {
    if (max_abs_diff(a.base, basis.base()) > kBaseTolerance)
        throw PreconditionError("first_component: vector not attached at the basis point");
    const TangentVector lambda1{a.base, basis.first().comps};
    return scalar_product(g, a, lambda1) / basis.signature1;
}

std::vector<double> basis_components(const BundleMetric& g, const TangentVector& a, const AdaptedBasis& basis) {
    if (max_abs_diff(a.base, basis.base()) > kBaseTolerance)
        throw PreconditionError("basis_components: vector not attached at the basis point");
    std::vector<double> out;
    out.reserve(basis.vectors.size());
    for (const auto& l : basis.vectors) {
        const TangentVector li{a.base, l.comps};
        out.push_back(scalar_product(g, a, li) / scalar_square(g, li));
    }
    return out;
}

}  // namespace relmech
