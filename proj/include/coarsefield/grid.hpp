#pragma once

/**
 * @file grid.hpp
 * @brief Matrix-valued functions sampled on a parameter grid in [0, 1]:
 *        projection stabilization, orthogonalization of a pair, and
 *        extension of an orthonormal frame to a neighbourhood.
 *
 * A field m with values in rows x cols matrices has left Gram value
 * a(t) = m(t) m(t)*. All three constructions leave the value at the anchor
 * node t0 untouched and only modify nodes of a contiguous interval around it.
 */

#include "coarsefield/matrix.hpp"

#include <functional>
#include <vector>

namespace coarsefield {

struct GridField {
    std::vector<Rational> grid;         ///< strictly increasing, inside [0, 1]
    std::vector<ComplexMatrix> values;  ///< one per node, common shape
    Rational modulus;                   ///< ||v(t_{i+1}) - v(t_i)|| <= modulus * (t_{i+1} - t_i)

    /// Structural checks plus the declared modulus (rejected when it fails).
    static GridField make(std::vector<Rational> grid, std::vector<ComplexMatrix> values,
                          Rational modulus);
    /// Declares a dyadic modulus just above the observed difference quotients.
    static GridField with_observed_modulus(std::vector<Rational> grid,
                                           std::vector<ComplexMatrix> values);

    std::size_t size() const { return grid.size(); }
    std::size_t rows() const { return values.front().rows(); }
    std::size_t cols() const { return values.front().cols(); }
};

/// N + 1 equally spaced nodes k / N.
std::vector<Rational> uniform_grid(std::size_t intervals);

/// Largest difference quotient between adjacent nodes.
double observed_modulus(const std::vector<Rational>& grid, const std::vector<ComplexMatrix>& values);

struct GridInterval {
    std::size_t lo = 0;
    std::size_t hi = 0;  ///< inclusive
    bool contains(std::size_t i) const { return lo <= i && i <= hi; }
    std::size_t size() const { return hi - lo + 1; }
    friend bool operator==(const GridInterval&, const GridInterval&) = default;
};

/// Gram threshold: ||a - a^2|| < 3/16 confines the spectrum of a Hermitian a
/// to (-1/4, 1/4) U (3/4, 5/4).
double projection_threshold();

/// 0 on (-inf, 1/4], linear from 0 to 4/3 on [1/4, 3/4], 1/x on [3/4, inf).
double splice_weight(double x);

/// ||a - a^2|| in operator norm.
double projection_defect(const ComplexMatrix& a);

struct StabilizeResult {
    GridField field;                  ///< n
    GridInterval projection;          ///< maximal interval around t0 with ||a - a^2|| < 3/16
    GridInterval corrected;           ///< nodes where n = g(a)^(1/2) m (t0 keeps m(t0))
    std::vector<double> defect;       ///< ||a - a^2|| per node
    double deviation = 0;             ///< max over nodes of ||n - m||
    double idempotency = 0;           ///< max over the projection interval of ||f(a) - f(a)^2||
};

/// Precondition: a(t0) is a projection within 1e-10. Rejected ("grid too
/// coarse") when no neighbour of t0 inside the projection interval can be
/// corrected within eps; the error detail names the smallest workable eps.
StabilizeResult stabilize_projection(const GridField& m, std::size_t t0, double eps);

struct OrthogonalizeResult {
    GridField first;       ///< m'
    GridField second;      ///< n'
    GridInterval interval; ///< both Gram values projections and m' n'* = 0, within 1e-9
    double cross = 0;      ///< max of ||m' n'*|| over the interval
    double defect = 0;     ///< max Gram projection defect over the interval
};

/// Precondition: m(t0) n(t0)* = 0 and both Gram values at t0 are projections, within 1e-10.
OrthogonalizeResult orthogonalize_pair(const GridField& m, const GridField& n, std::size_t t0,
                                       double eps);

struct FrameResult {
    std::vector<GridField> frame;
    GridInterval interval;     ///< Gram = identity and p idempotent, within 1e-9
    double gram_error = 0;     ///< max over the interval of ||e_i e_j* - delta_ij||
    double idempotency = 0;    ///< max over the interval of ||p - p^2||, p = sum e_i* e_i
};

/// Precondition: the frame is orthonormal at t0 within 1e-10.
FrameResult frame_extend(const std::vector<GridField>& frame, std::size_t t0, double eps);

}  // namespace coarsefield
