#pragma once

/**
 * @file metric.hpp
 * @brief Finite metric spaces, glued metrics on X ⊔ Y, min-plus composition
 *        and coarse-order certificates.
 *
 * A glued metric is a metric on the disjoint union of two uniformly discrete
 * spaces that restricts to the given metrics and keeps the two pieces a
 * positive distance apart. All arithmetic is exact; on finite spaces every
 * infimum is an attained minimum.
 */

#include "coarsefield/matrix.hpp"
#include "coarsefield/rational.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace coarsefield {

class FiniteMetricSpace {
public:
    FiniteMetricSpace() = default;

    /// Structural checks only (square table, unique ids, known basepoint);
    /// the metric axioms are checked by validate_metric().
    static FiniteMetricSpace make(std::vector<std::string> points, RationalMatrix dist,
                                  std::optional<std::string> basepoint = std::nullopt);

    std::size_t size() const { return points_.size(); }
    const std::vector<std::string>& points() const { return points_; }
    const std::string& point(std::size_t i) const { return points_[i]; }
    const RationalMatrix& dist() const { return dist_; }
    const Rational& operator()(std::size_t i, std::size_t j) const { return dist_(i, j); }
    const std::optional<std::string>& basepoint() const { return basepoint_; }

    /// Index of a point id; throws a structural error for unknown ids.
    std::size_t index_of(const std::string& id) const;
    std::optional<std::size_t> find(const std::string& id) const;

    /// Declared basepoint, else the first point.
    std::size_t default_basepoint() const;

    friend bool operator==(const FiniteMetricSpace& a, const FiniteMetricSpace& b) {
        return a.points_ == b.points_ && a.dist_ == b.dist_;
    }

private:
    std::vector<std::string> points_;
    RationalMatrix dist_;
    std::optional<std::string> basepoint_;
};

struct Violation {
    std::string property;             ///< "diagonal", "symmetry", "positivity", "triangle", "gap"
    std::vector<std::string> points;  ///< the offending pair or triple
    std::string detail;
};

struct ValidationReport {
    bool passed = false;
    std::optional<Rational> separation;  ///< min distance between distinct points
    std::vector<std::pair<Rational, std::size_t>> ball_profile;  ///< (R, max closed-ball size)
    std::optional<Violation> violation;
};

/// Checks the metric axioms exactly and reports the bounded-geometry profile.
ValidationReport validate_metric(const FiniteMetricSpace& space,
                                 const std::vector<Rational>& radii = {});

/// A metric on left ⊔ right that restricts to the given metrics and has a positive gap.
class GluedMetric {
public:
    const FiniteMetricSpace& left() const { return left_; }
    const FiniteMetricSpace& right() const { return right_; }
    const RationalMatrix& cross() const { return cross_; }
    const Rational& operator()(std::size_t x, std::size_t y) const { return cross_(x, y); }

    Rational gap() const;

    /// The same metric read on right ⊔ left.
    GluedMetric adjoint() const;

    /// The full metric on left ⊔ right; right ids get a prime when they clash with left ids.
    FiniteMetricSpace combined() const;

    friend bool operator==(const GluedMetric& a, const GluedMetric& b) {
        return a.left_ == b.left_ && a.right_ == b.right_ && a.cross_ == b.cross_;
    }

private:
    friend GluedMetric glue(const FiniteMetricSpace&, const FiniteMetricSpace&, RationalMatrix);
    friend GluedMetric glue_unchecked(FiniteMetricSpace, FiniteMetricSpace, RationalMatrix);

    FiniteMetricSpace left_;
    FiniteMetricSpace right_;
    RationalMatrix cross_;
};

/// Validates and builds a glued metric. Rejects (ErrorKind::Rejected, with the
/// violating pair or triple in the error detail) when any axiom fails.
GluedMetric glue(const FiniteMetricSpace& left, const FiniteMetricSpace& right,
                 RationalMatrix cross);

/// Builds without validation; for callers that have already proven the axioms.
GluedMetric glue_unchecked(FiniteMetricSpace left, FiniteMetricSpace right, RationalMatrix cross);

/// Checks the glue axioms without throwing.
std::optional<Violation> check_glue(const FiniteMetricSpace& left,
                                    const FiniteMetricSpace& right,
                                    const RationalMatrix& cross);

/// Min-plus product of a glue over (X,Y) with one over (Y,Z), plus the
/// midpoint y attaining each minimum (lowest index on ties).
struct Composition {
    GluedMetric metric;
    Matrix<std::size_t> midpoint;
};

Composition compose(const GluedMetric& first, const GluedMetric& second);

struct DerivedMetrics {
    GluedMetric adjoint;
    FiniteMetricSpace induced_on_left;   ///< on X: min over u in Y of d(x1,u)+d(x2,u)
    FiniteMetricSpace induced_on_right;  ///< on Y: min over u in X of d(u,y1)+d(u,y2)
};

DerivedMetrics derived_metrics(const GluedMetric& d);

/// cross(x,y) = d_X(x,x0) + 1 + d_Y(y0,y); the bottom class of the glue order.
GluedMetric smallest_metric(const FiniteMetricSpace& left, const FiniteMetricSpace& right,
                            std::optional<std::string> left_base = std::nullopt,
                            std::optional<std::string> right_base = std::nullopt);

/// Piecewise-linear strictly increasing map of [0, inf) through its breakpoints,
/// extended beyond the last breakpoint with the slope of the last segment.
class ControlFunction {
public:
    /// Slope used to lift flat steps so the certificate is strictly increasing.
    static const Rational& repair_slope();

    static ControlFunction identity();
    /// Requires a first breakpoint at t = 0 and strict increase in both coordinates.
    static ControlFunction from_breakpoints(std::vector<std::pair<Rational, Rational>> points);

    /// The tightest monotone bound phi(t) = max{ d2 : d1 <= t } over the cross
    /// pairs, with flat steps repaired to the slope above.
    static ControlFunction tightest(const GluedMetric& d1, const GluedMetric& d2);

    const std::vector<std::pair<Rational, Rational>>& breakpoints() const { return points_; }
    const std::vector<std::pair<Rational, Rational>>& constraints() const { return constraints_; }

    Rational operator()(const Rational& t) const;
    Rational inverse(const Rational& s) const;

    /// outer ∘ this, exact (breakpoints merged through the inverse).
    ControlFunction then(const ControlFunction& outer) const;

    /// d2(x,y) <= phi(d1(x,y)) for every cross pair.
    bool certifies(const GluedMetric& d1, const GluedMetric& d2) const;
    bool satisfies_constraints() const;

private:
    std::vector<std::pair<Rational, Rational>> points_;
    std::vector<std::pair<Rational, Rational>> constraints_;
};

struct FamilyPoint {
    int axis = 0;                ///< 0 for the origin / half-line; 1.. for axis-union; -1 explicit
    std::int64_t coordinate = 0; ///< position on the axis, or index for explicit spaces
    friend bool operator==(const FamilyPoint&, const FamilyPoint&) = default;
};

struct Truncation {
    FiniteMetricSpace space;
    std::vector<FamilyPoint> coords;
};

/// An infinite (or large) space sampled by balls of growing radius.
class SpaceFamily {
public:
    enum class Kind { Explicit, AxisUnion, HalfLine };

    static SpaceFamily half_line();
    /// Union of `axes` copies of N_0 glued at the origin, with the l1 metric.
    static SpaceFamily axis_union(int axes);
    static SpaceFamily explicit_space(FiniteMetricSpace space);

    Kind kind() const { return kind_; }
    int axes() const { return axes_; }

    /// Points within `radius` of the basepoint, with the family's distances.
    Truncation truncate(const Rational& radius) const;
    Rational distance(const FamilyPoint& a, const FamilyPoint& b) const;
    /// Distance to the basepoint (origin, 0, or declared basepoint).
    Rational norm(const FamilyPoint& p) const;

private:
    Kind kind_ = Kind::HalfLine;
    int axes_ = 1;
    std::optional<FiniteMetricSpace> space_;
};

/// A glued metric given by a formula on two space families.
struct GlueFamily {
    std::string name;
    SpaceFamily left;
    SpaceFamily right;
    std::function<Rational(const FamilyPoint&, const FamilyPoint&)> cross;

    /// The validated glue on the truncations at `radius`.
    GluedMetric at(const Rational& radius) const;
};

GlueFamily smallest_family(const SpaceFamily& left, const SpaceFamily& right);
/// cross(x, y') = d(x, y) + shift on two copies of one family.
GlueFamily shifted_diagonal_family(const SpaceFamily& space, const Rational& shift);
/// Axis-union glue with unit-weight bridges (i, n) ~ (sigma(i), n)'; all other
/// pairs route through the origin. `sigma` is a partial injection of axes
/// (entry 0 = unbridged).
GlueFamily axis_bridge_family(int axes, const std::vector<int>& sigma);

enum class CoarseVerdict { Leq, Geq, Equivalent, Inconclusive };

const char* to_string(CoarseVerdict v);

struct CoarseComparison {
    CoarseVerdict verdict = CoarseVerdict::Inconclusive;
    std::optional<ControlFunction> forward;   ///< d2 <= phi(d1)
    std::optional<ControlFunction> backward;  ///< d1 <= psi(d2)
    std::string note;
};

/// Snapshot comparison: finite data always admits both certificates.
CoarseComparison control_compare(const GluedMetric& d1, const GluedMetric& d2);

/// Family-level comparison: a direction is certified only when the tightest
/// bound computed at `radius` and `2 * radius` agree for all t <= window
/// (default radius / 2).
CoarseComparison control_compare(const GlueFamily& d1, const GlueFamily& d2,
                                 const Rational& radius,
                                 std::optional<Rational> window = std::nullopt);

}  // namespace coarsefield
