#pragma once
#include <cstddef>
#include <functional>
#include <vector>

#include "relmech/geometry.hpp"

namespace relmech {

// Pointwise symmetric nondegenerate bilinear form g_x on T_x(M); not necessarily positive.
class BundleMetric {
public:
    using MatrixFn = std::function<SquareMatrix(const Coords&)>;

    BundleMetric(std::size_t dim, MatrixFn at);

    static BundleMetric constant(const SquareMatrix& g);
    static BundleMetric euclidean(std::size_t dim);
    // Signature (+,-,-,-) on (x^0 = ct, x, y, z).
    static BundleMetric minkowski();
    // diag(1, r^2) on (r, theta).
    static BundleMetric polar_plane();
    // diag(1, sin^2 theta) on (theta, phi).
    static BundleMetric unit_sphere();

    std::size_t dim() const { return dim_; }

    // Validated matrix: symmetric to 1e-12 and |det| > 1e-12, else NumericError.
    SquareMatrix at(const Coords& point) const;

private:
    std::size_t dim_;
    MatrixFn at_;
};

// Convention for epsilon(0); both are admissible and the general results do not depend on it.
enum class ZeroSign { positive, negative };

// -1 for lambda < 0, +1 for lambda > 0, and the convention value at 0.
double epsilon(double lambda, ZeroSign zero = ZeroSign::positive);

// |lambda| := epsilon(lambda) lambda.
inline double signed_abs(double lambda, ZeroSign zero = ZeroSign::positive) {
    return epsilon(lambda, zero) * lambda;
}

double scalar_product(const BundleMetric& g, const TangentVector& u, const TangentVector& v);
double scalar_square(const BundleMetric& g, const TangentVector& v);

// A square |(V)^2| < 1e-10 ||V||_inf^2 is treated as null.
inline constexpr double kNullThreshold = 1e-10;
bool is_effectively_null(double square, const Coords& comps);

// Scalar square with effectively-null values snapped to exactly zero, so that
// epsilon() does not pick up the sign of rounding noise on light-like vectors.
double causal_square(const BundleMetric& g, const TangentVector& v);

// Orthogonal basis at v1.base whose first vector is v1 / |(v1)^2|^{1/2}.
struct AdaptedBasis {
    std::vector<TangentVector> vectors;
    double signature1 = 1.0;  // (lambda_1)^2

    const TangentVector& first() const { return vectors.front(); }
    const Coords& base() const { return vectors.front().base; }
};

// Throws DegenerateDirectionError for a null v1.
AdaptedBasis adapted_basis(const BundleMetric& g, const TangentVector& v1);

// A^1 = A . lambda_1 / (lambda_1)^2.
double first_component(const BundleMetric& g, const TangentVector& a, const AdaptedBasis& basis);

// All components A^i = A . lambda_i / (lambda_i)^2 in the (orthogonal) basis.
std::vector<double> basis_components(const BundleMetric& g, const TangentVector& a,
                                     const AdaptedBasis& basis);

}  // namespace relmech
