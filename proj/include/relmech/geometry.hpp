#pragma once
#include <cstddef>
#include <functional>
#include <memory>
#include <string>

#include "relmech/linalg.hpp"

namespace relmech {

// A single global coordinate chart together with the connection coefficients
// of a covariant differentiation expressed in it.
class ManifoldChart {
public:
    // Gamma^out_{in1,in2} at a point.
    using CoefficientFn =
        std::function<double(const Coords& point, std::size_t in1, std::size_t in2, std::size_t out)>;
    // Fills every coefficient at a point in one call.
    using TableFn = std::function<void(const Coords& point, ConnectionCoefficients& out)>;

    ManifoldChart(std::size_t dim, CoefficientFn connection, std::string name);

    static ManifoldChart from_table(std::size_t dim, TableFn fill, std::string name);
    static ManifoldChart flat(std::size_t dim, std::string name = "cartesian");
    // Constant coefficients; entries not supplied are zero.
    static ManifoldChart constant(const ConnectionCoefficients& gamma, std::string name);

    // Euclidean plane in polar coordinates (r, theta), Levi-Civita connection.
    static ManifoldChart polar_plane();
    // Unit 2-sphere in (theta, phi), Levi-Civita connection.
    static ManifoldChart unit_sphere();

    std::size_t dim() const { return dim_; }
    const std::string& name() const { return name_; }
    bool is_flat() const { return flat_; }

    double coefficient(const Coords& point, std::size_t in1, std::size_t in2, std::size_t out) const;

    // Throws NumericError if any coefficient is non-finite.
    ConnectionCoefficients coefficients(const Coords& point) const;

private:
    ManifoldChart(std::size_t dim, TableFn fill, std::string name, bool flat);

    std::size_t dim_;
    TableFn fill_;
    std::string name_;
    bool flat_;
};

// Parametrized curve gamma: [a, b] -> M with its tangent.
class Path {
public:
    using PointFn = std::function<Coords(double)>;

    Path(double a, double b, PointFn eval, PointFn tangent);

    // Installs a central-difference tangent with step 1e-6 (b - a).
    static Path from_eval(double a, double b, PointFn eval);
    // Chart-coordinate straight segment on [0, 1]; endpoints are reproduced exactly.
    static Path line(const Coords& from, const Coords& to);
    static Path constant(const Coords& point, double a = 0.0, double b = 1.0);

    double lower() const { return a_; }
    double upper() const { return b_; }
    std::size_t dim() const { return dim_; }
    bool contains(double s) const;

    // Unchecked evaluations; use path_point / path_tangent_vector for domain checks.
    Coords point(double s) const { return eval_(s); }
    Coords tangent(double s) const { return tangent_(s); }

private:
    double a_;
    double b_;
    std::size_t dim_;
    PointFn eval_;
    PointFn tangent_;
};

// Vector V in T_x(M): base realizes the projection pi(V) = x.
struct TangentVector {
    Coords base;
    Coords comps;

    std::size_t dim() const { return comps.size(); }
};

// Base-point tolerance used by operation preconditions.
inline constexpr double kBaseTolerance = 1e-9;

bool same_base(const TangentVector& a, const TangentVector& b, double tol = kBaseTolerance);
void require_base(const TangentVector& v, const Coords& point, const char* what,
                  double tol = kBaseTolerance);

// Componentwise difference of two vectors attached at the same point; result keeps a.base.
TangentVector subtract(const TangentVector& a, const TangentVector& b);
TangentVector scaled(const TangentVector& v, double k);

// A vector-valued function along a path; value(s).base must equal path(s).
struct FieldAlongPath {
    Path path;
    std::function<TangentVector(double)> value;

    TangentVector at(double s) const { return value(s); }
};

Coords path_point(const Path& p, double s);
TangentVector path_tangent_vector(const Path& p, double s);

}  // namespace relmech
