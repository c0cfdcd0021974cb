#include "coarsefield/metric.hpp"

#include "coarsefield/error.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace coarsefield {

namespace {

Rational floor_of(const Rational& q) {
    mpz_class f;
    mpz_fdiv_q(f.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    return Rational(f);
}

std::int64_t to_int64(const Rational& q) {
    const mpz_class f = floor_of(q).get_num();
    if (!f.fits_slong_p()) fail(ErrorKind::Precondition, "truncation radius too large");
    return f.get_si();
}

std::optional<Violation> first_violation(const FiniteMetricSpace& s) {
    const std::size_t n = s.size();
    for (std::size_t i = 0; i < n; ++i)
        if (sgn(s(i, i)) != 0)
            return Violation{"diagonal", {s.point(i)}, "d(x,x) = " + to_string(s(i, i))};
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (s(i, j) != s(j, i))
                return Violation{"symmetry", {s.point(i), s.point(j)}, "d(x,y) != d(y,x)"};
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (sgn(s(i, j)) <= 0)
                return Violation{"positivity", {s.point(i), s.point(j)},
                                 "d(x,y) = " + to_string(s(i, j)) + " for distinct points"};
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k)
                if (s(i, k) > s(i, j) + s(j, k))
                    return Violation{"triangle",
                                     {s.point(i), s.point(j), s.point(k)},
                                     "d(x,z) = " + to_string(s(i, k)) + " > d(x,y) + d(y,z) = " +
                                         to_string(s(i, j) + s(j, k))};
    return std::nullopt;
}

void require_same_pair(const GluedMetric& a, const GluedMetric& b) {
    if (a.left().points() != b.left().points() || a.right().points() != b.right().points())
        fail(ErrorKind::Structural, "glued metrics live on different point sets");
    if (!(a.left() == b.left()) || !(a.right() == b.right()))
        fail(ErrorKind::Structural, "glued metrics restrict to different metrics");
}

// (d1 value, d2 value) for every cross pair.
std::vector<std::pair<Rational, Rational>> cross_pairs(const GluedMetric& d1,
                                                      const GluedMetric& d2) {
    std::vector<std::pair<Rational, Rational>> out;
    for (std::size_t x = 0; x < d1.left().size(); ++x)
        for (std::size_t y = 0; y < d1.right().size(); ++y) out.emplace_back(d1(x, y), d2(x, y));
    return out;
}

// Running maximum of d2 over d1 <= t, at each distinct d1 value t.
std::vector<std::pair<Rational, Rational>> raw_bound(const GluedMetric& d1,
                                                    const GluedMetric& d2) {
    auto pairs = cross_pairs(d1, d2);
    std::sort(pairs.begin(), pairs.end());
    std::vector<std::pair<Rational, Rational>> steps;
    for (const auto& [t, v] : pairs) {
        if (!steps.empty() && steps.back().first == t) {
            if (v > steps.back().second) steps.back().second = v;
        } else {
            Rational best = steps.empty() ? v : std::max(v, steps.back().second);
            steps.emplace_back(t, best);
        }
    }
    return steps;
}

std::optional<Rational> step_value(const std::vector<std::pair<Rational, Rational>>& steps,
                                   const Rational& t) {
    std::optional<Rational> out;
    for (const auto& [s, v] : steps) {
        if (s > t) break;
        out = v;
    }
    return out;
}

bool stable_on(const std::vector<std::pair<Rational, Rational>>& small,
               const std::vector<std::pair<Rational, Rational>>& large, const Rational& window) {
    std::set<Rational> ts;
    for (const auto& s : small)
        if (s.first <= window) ts.insert(s.first);
    for (const auto& s : large)
        if (s.first <= window) ts.insert(s.first);
    for (const auto& t : ts)
        if (step_value(small, t) != step_value(large, t)) return false;
    return true;
}

}  // namespace

// ---------------------------------------------------------------------------
// FiniteMetricSpace

FiniteMetricSpace FiniteMetricSpace::make(std::vector<std::string> points, RationalMatrix dist,
                                          std::optional<std::string> basepoint) {
    if (dist.rows() != points.size() || dist.cols() != points.size())
        fail(ErrorKind::Structural, "distance table is " + std::to_string(dist.rows()) + "x" +
                                        std::to_string(dist.cols()) + " for " +
                                        std::to_string(points.size()) + " points");
    std::set<std::string> seen;
    for (const auto& p : points)
        if (!seen.insert(p).second) fail(ErrorKind::Structural, "duplicate point id '" + p + "'");
    if (basepoint && !seen.count(*basepoint))
        fail(ErrorKind::Structural, "basepoint '" + *basepoint + "' is not a point");
    FiniteMetricSpace s;
    s.points_ = std::move(points);
    s.dist_ = std::move(dist);
    s.basepoint_ = std::move(basepoint);
    return s;
}

std::optional<std::size_t> FiniteMetricSpace::find(const std::string& id) const {
    auto it = std::find(points_.begin(), points_.end(), id);
    if (it == points_.end()) return std::nullopt;
    return static_cast<std::size_t>(it - points_.begin());
}

std::size_t FiniteMetricSpace::index_of(const std::string& id) const {
    auto i = find(id);
    if (!i) fail(ErrorKind::Structural, "unknown point '" + id + "'");
    return *i;
}

std::size_t FiniteMetricSpace::default_basepoint() const {
    if (points_.empty()) fail(ErrorKind::Structural, "empty space has no basepoint");
    return basepoint_ ? index_of(*basepoint_) : 0;
}

ValidationReport validate_metric(const FiniteMetricSpace& space,
                                 const std::vector<Rational>& radii) {
    ValidationReport report;
    const std::size_t n = space.size();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (!report.separation || space(i, j) < *report.separation)
                report.separation = space(i, j);
    for (const auto& r : radii) {
        std::size_t best = 0;
        for (std::size_t i = 0; i < n; ++i) {
            std::size_t count = 0;
            for (std::size_t j = 0; j < n; ++j)
                if (space(i, j) <= r) ++count;
            best = std::max(best, count);
        }
        report.ball_profile.emplace_back(r, best);
    }
    report.violation = first_violation(space);
    report.passed = !report.violation.has_value();
    return report;
}

// ---------------------------------------------------------------------------
// GluedMetric

Rational GluedMetric::gap() const {
    Rational best = cross_(0, 0);
    for (const auto& v : cross_.data()) best = std::min(best, v);
    return best;
}

GluedMetric GluedMetric::adjoint() const {
    return glue_unchecked(right_, left_, cross_.transpose());
}

FiniteMetricSpace GluedMetric::combined() const {
    const std::size_t nx = left_.size(), ny = right_.size();
    std::vector<std::string> ids = left_.points();
    std::set<std::string> taken(ids.begin(), ids.end());
    bool clash = false;
    for (const auto& p : right_.points()) clash = clash || taken.count(p);
    for (const auto& p : right_.points()) ids.push_back(clash ? p + "'" : p);
    RationalMatrix d(nx + ny, nx + ny);
    for (std::size_t i = 0; i < nx; ++i)
        for (std::size_t j = 0; j < nx; ++j) d(i, j) = left_(i, j);
    for (std::size_t i = 0; i < ny; ++i)
        for (std::size_t j = 0; j < ny; ++j) d(nx + i, nx + j) = right_(i, j);
    for (std::size_t x = 0; x < nx; ++x)
        for (std::size_t y = 0; y < ny; ++y) d(x, nx + y) = d(nx + y, x) = cross_(x, y);
    return FiniteMetricSpace::make(std::move(ids), std::move(d));
}

GluedMetric glue_unchecked(FiniteMetricSpace left, FiniteMetricSpace right, RationalMatrix cross) {
    GluedMetric g;
    g.left_ = std::move(left);
    g.right_ = std::move(right);
    g.cross_ = std::move(cross);
    return g;
}

std::optional<Violation> check_glue(const FiniteMetricSpace& left,
                                    const FiniteMetricSpace& right,
                                    const RationalMatrix& cross) {
    if (left.size() == 0 || right.size() == 0)
        fail(ErrorKind::Structural, "cannot glue an empty space");
    if (cross.rows() != left.size() || cross.cols() != right.size())
        fail(ErrorKind::Structural, "cross table must be |X| x |Y|");
    if (auto v = first_violation(left)) return v;
    if (auto v = first_violation(right)) return v;
    for (std::size_t x = 0; x < left.size(); ++x)
        for (std::size_t y = 0; y < right.size(); ++y)
            if (sgn(cross(x, y)) <= 0)
                return Violation{"gap", {left.point(x), right.point(y)},
                                 "cross distance " + to_string(cross(x, y)) + " is not positive"};
    return first_violation(glue_unchecked(left, right, cross).combined());
}

GluedMetric glue(const FiniteMetricSpace& left, const FiniteMetricSpace& right,
                 RationalMatrix cross) {
    if (auto v = check_glue(left, right, cross)) {
        nlohmann::json detail = {{"property", v->property}, {"points", v->points},
                                 {"detail", v->detail}};
        fail(ErrorKind::Rejected, "not a glued metric: " + v->property + " fails", detail);
    }
    return glue_unchecked(left, right, std::move(cross));
}

Composition compose(const GluedMetric& first, const GluedMetric& second) {
    if (!(first.right() == second.left()))
        fail(ErrorKind::Structural, "composition needs a common middle space");
    const std::size_t nx = first.left().size(), ny = first.right().size(),
                      nz = second.right().size();
    RationalMatrix cross(nx, nz);
    Matrix<std::size_t> mid(nx, nz, 0);
    for (std::size_t x = 0; x < nx; ++x)
        for (std::size_t z = 0; z < nz; ++z) {
            Rational best = first(x, 0) + second(0, z);
            std::size_t arg = 0;
            for (std::size_t y = 1; y < ny; ++y) {
                Rational v = first(x, y) + second(y, z);
                if (v < best) {
                    best = v;
                    arg = y;
                }
            }
            cross(x, z) = best;
            mid(x, z) = arg;
        }
    if (auto v = check_glue(first.left(), second.right(), cross))
        fail(ErrorKind::Internal, "min-plus product is not a glued metric: " + v->detail);
    return {glue_unchecked(first.left(), second.right(), std::move(cross)), std::move(mid)};
}

namespace {

FiniteMetricSpace induced(const GluedMetric& d, bool on_left) {
    const FiniteMetricSpace& base = on_left ? d.left() : d.right();
    const std::size_t n = base.size();
    const std::size_t m = on_left ? d.right().size() : d.left().size();
    auto at = [&](std::size_t p, std::size_t u) { return on_left ? d(p, u) : d(u, p); };
    RationalMatrix out(n, n);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) {
            if (a == b) continue;
            Rational best = at(a, 0) + at(b, 0);
            for (std::size_t u = 1; u < m; ++u) best = std::min(best, Rational(at(a, u) + at(b, u)));
            out(a, b) = best;
        }
    return FiniteMetricSpace::make(base.points(), std::move(out), base.basepoint());
}

}  // namespace

DerivedMetrics derived_metrics(const GluedMetric& d) {
    DerivedMetrics out{d.adjoint(), induced(d, true), induced(d, false)};
    for (const auto* s : {&out.induced_on_left, &out.induced_on_right})
        if (auto v = first_violation(*s))
            fail(ErrorKind::Internal, "induced metric fails " + v->property);
    const auto through_right = compose(d, out.adjoint).metric;
    const auto through_left = compose(out.adjoint, d).metric;
    for (std::size_t a = 0; a < d.left().size(); ++a)
        for (std::size_t b = 0; b < d.left().size(); ++b)
            if (a != b && through_right(a, b) != out.induced_on_left(a, b))
                fail(ErrorKind::Internal, "d*d disagrees with the induced metric on X");
    for (std::size_t a = 0; a < d.right().size(); ++a)
        for (std::size_t b = 0; b < d.right().size(); ++b)
            if (a != b && through_left(a, b) != out.induced_on_right(a, b))
                fail(ErrorKind::Internal, "dd* disagrees with the induced metric on Y");
    return out;
}

GluedMetric smallest_metric(const FiniteMetricSpace& left, const FiniteMetricSpace& right,
                            std::optional<std::string> left_base,
                            std::optional<std::string> right_base) {
    const std::size_t x0 = left_base ? left.index_of(*left_base) : left.default_basepoint();
    const std::size_t y0 = right_base ? right.index_of(*right_base) : right.default_basepoint();
    RationalMatrix cross(left.size(), right.size());
    for (std::size_t x = 0; x < left.size(); ++x)
        for (std::size_t y = 0; y < right.size(); ++y) cross(x, y) = left(x, x0) + 1 + right(y0, y);
    return glue(left, right, std::move(cross));
}

// ---------------------------------------------------------------------------
// ControlFunction

const Rational& ControlFunction::repair_slope() {
    static const Rational slope(1, 1024);
    return slope;
}

ControlFunction ControlFunction::identity() {
    return from_breakpoints({{Rational(0), Rational(0)}, {Rational(1), Rational(1)}});
}

ControlFunction ControlFunction::from_breakpoints(
    std::vector<std::pair<Rational, Rational>> points) {
    if (points.empty()) fail(ErrorKind::Structural, "control function needs breakpoints");
    if (sgn(points.front().first) != 0)
        fail(ErrorKind::Structural, "first breakpoint must sit at t = 0");
    if (sgn(points.front().second) < 0)
        fail(ErrorKind::Structural, "control function must be non-negative at 0");
    for (std::size_t i = 1; i < points.size(); ++i)
        if (points[i].first <= points[i - 1].first || points[i].second <= points[i - 1].second)
            fail(ErrorKind::Structural, "control function breakpoints must strictly increase");
    ControlFunction f;
    f.points_ = std::move(points);
    return f;
}

ControlFunction ControlFunction::tightest(const GluedMetric& d1, const GluedMetric& d2) {
    require_same_pair(d1, d2);
    std::vector<std::pair<Rational, Rational>> pts{{Rational(0), Rational(0)}};
    for (auto [t, v] : raw_bound(d1, d2)) {
        const auto& [pt, pv] = pts.back();
        Rational lifted = pv + repair_slope() * (t - pt);
        pts.emplace_back(t, std::max(v, lifted));
    }
    ControlFunction f = from_breakpoints(std::move(pts));
    f.constraints_ = cross_pairs(d1, d2);
    return f;
}

Rational ControlFunction::operator()(const Rational& t) const {
    if (sgn(t) < 0) fail(ErrorKind::Precondition, "control functions live on [0, inf)");
    if (points_.size() == 1) return points_[0].second + t;
    std::size_t i = 1;
    while (i + 1 < points_.size() && points_[i].first < t) ++i;
    const auto& [t0, v0] = points_[i - 1];
    const auto& [t1, v1] = points_[i];
    return v0 + (v1 - v0) / (t1 - t0) * (t - t0);
}

Rational ControlFunction::inverse(const Rational& s) const {
    if (s < points_.front().second)
        fail(ErrorKind::Precondition, "value below the range of the control function");
    if (points_.size() == 1) return s - points_[0].second;
    std::size_t i = 1;
    while (i + 1 < points_.size() && points_[i].second < s) ++i;
    const auto& [t0, v0] = points_[i - 1];
    const auto& [t1, v1] = points_[i];
    return t0 + (t1 - t0) / (v1 - v0) * (s - v0);
}

ControlFunction ControlFunction::then(const ControlFunction& outer) const {
    std::set<Rational> ts;
    for (const auto& p : points_) ts.insert(p.first);
    for (const auto& p : outer.points_)
        if (p.first >= points_.front().second) ts.insert(inverse(p.first));
    // One point past the last kink pins the slope of the linear extension.
    ts.insert(*ts.rbegin() + 1);
    std::vector<std::pair<Rational, Rational>> pts;
    for (const auto& t : ts) pts.emplace_back(t, outer((*this)(t)));
    return from_breakpoints(std::move(pts));
}

bool ControlFunction::certifies(const GluedMetric& d1, const GluedMetric& d2) const {
    require_same_pair(d1, d2);
    for (const auto& [a, b] : cross_pairs(d1, d2))
        if ((*this)(a) < b) return false;
    return true;
}

bool ControlFunction::satisfies_constraints() const {
    for (const auto& [a, b] : constraints_)
        if ((*this)(a) < b) return false;
    return true;
}

// ---------------------------------------------------------------------------
// Families

SpaceFamily SpaceFamily::half_line() { return SpaceFamily{}; }

SpaceFamily SpaceFamily::axis_union(int axes) {
    if (axes < 1) fail(ErrorKind::Structural, "axis union needs at least one axis");
    SpaceFamily f;
    f.kind_ = Kind::AxisUnion;
    f.axes_ = axes;
    return f;
}

SpaceFamily SpaceFamily::explicit_space(FiniteMetricSpace space) {
    if (space.size() == 0) fail(ErrorKind::Structural, "explicit family over an empty space");
    SpaceFamily f;
    f.kind_ = Kind::Explicit;
    f.space_ = std::move(space);
    return f;
}

Rational SpaceFamily::distance(const FamilyPoint& a, const FamilyPoint& b) const {
    switch (kind_) {
        case Kind::HalfLine: return Rational(std::abs(a.coordinate - b.coordinate));
        case Kind::AxisUnion:
            if (a.axis == b.axis) return Rational(std::abs(a.coordinate - b.coordinate));
            return Rational(a.coordinate + b.coordinate);
        case Kind::Explicit:
            return (*space_)(static_cast<std::size_t>(a.coordinate),
                             static_cast<std::size_t>(b.coordinate));
    }
    return Rational(0);
}

Rational SpaceFamily::norm(const FamilyPoint& p) const {
    if (kind_ == Kind::Explicit)
        return (*space_)(space_->default_basepoint(), static_cast<std::size_t>(p.coordinate));
    return Rational(p.coordinate);
}

Truncation SpaceFamily::truncate(const Rational& radius) const {
    if (sgn(radius) < 0) fail(ErrorKind::Precondition, "negative truncation radius");
    Truncation t;
    std::vector<std::string> ids;
    std::optional<std::string> base;
    switch (kind_) {
        case Kind::HalfLine: {
            const std::int64_t top = to_int64(radius);
            for (std::int64_t n = 0; n <= top; ++n) {
                ids.push_back(std::to_string(n));
                t.coords.push_back({0, n});
            }
            base = "0";
            break;
        }
        case Kind::AxisUnion: {
            const std::int64_t top = to_int64(radius);
            ids.push_back("o");
            t.coords.push_back({0, 0});
            for (int axis = 1; axis <= axes_; ++axis)
                for (std::int64_t n = 1; n <= top; ++n) {
                    ids.push_back("e" + std::to_string(axis) + ":" + std::to_string(n));
                    t.coords.push_back({axis, n});
                }
            base = "o";
            break;
        }
        case Kind::Explicit: {
            const std::size_t b = space_->default_basepoint();
            for (std::size_t i = 0; i < space_->size(); ++i)
                if ((*space_)(b, i) <= radius) {
                    ids.push_back(space_->point(i));
                    t.coords.push_back({-1, static_cast<std::int64_t>(i)});
                }
            base = space_->point(b);
            break;
        }
    }
    RationalMatrix d(ids.size(), ids.size());
    for (std::size_t i = 0; i < ids.size(); ++i)
        for (std::size_t j = 0; j < ids.size(); ++j) d(i, j) = distance(t.coords[i], t.coords[j]);
    t.space = FiniteMetricSpace::make(std::move(ids), std::move(d), base);
    return t;
}

GluedMetric GlueFamily::at(const Rational& radius) const {
    const Truncation l = left.truncate(radius), r = right.truncate(radius);
    RationalMatrix c(l.space.size(), r.space.size());
    for (std::size_t x = 0; x < l.coords.size(); ++x)
        for (std::size_t y = 0; y < r.coords.size(); ++y) c(x, y) = cross(l.coords[x], r.coords[y]);
    return glue(l.space, r.space, std::move(c));
}

GlueFamily smallest_family(const SpaceFamily& left, const SpaceFamily& right) {
    return {"smallest", left, right, [left, right](const FamilyPoint& x, const FamilyPoint& y) -> Rational {
                return left.norm(x) + 1 + right.norm(y);
            }};
}

GlueFamily shifted_diagonal_family(const SpaceFamily& space, const Rational& shift) {
    if (sgn(shift) <= 0) fail(ErrorKind::Precondition, "diagonal shift must be positive");
    return {"shifted-diagonal", space, space,
            [space, shift](const FamilyPoint& x, const FamilyPoint& y) -> Rational {
                return space.distance(x, y) + shift;
            }};
}

GlueFamily axis_bridge_family(int axes, const std::vector<int>& sigma) {
    if (static_cast<int>(sigma.size()) != axes)
        fail(ErrorKind::Structural, "bridge map needs one entry per axis");
    std::set<int> targets;
    for (int j : sigma) {
        if (j < 0 || j > axes) fail(ErrorKind::Structural, "bridge target out of range");
        if (j != 0 && !targets.insert(j).second)
            fail(ErrorKind::Structural, "bridge map must be injective");
    }
    const SpaceFamily y = SpaceFamily::axis_union(axes);
    return {"axis-bridge", y, y, [sigma](const FamilyPoint& a, const FamilyPoint& b) -> Rational {
                const bool bridged = a.coordinate > 0 && b.coordinate > 0 &&
                                     sigma[static_cast<std::size_t>(a.axis - 1)] == b.axis;
                if (bridged) return Rational(std::abs(a.coordinate - b.coordinate) + 1);
                return Rational(a.coordinate + b.coordinate + 1);
            }};
}

// ---------------------------------------------------------------------------
// Comparison

const char* to_string(CoarseVerdict v) {
    switch (v) {
        case CoarseVerdict::Leq: return "leq";
        case CoarseVerdict::Geq: return "geq";
        case CoarseVerdict::Equivalent: return "equivalent";
        case CoarseVerdict::Inconclusive: return "inconclusive";
    }
    return "inconclusive";
}

CoarseComparison control_compare(const GluedMetric& d1, const GluedMetric& d2) {
    require_same_pair(d1, d2);
    CoarseComparison c;
    c.forward = ControlFunction::tightest(d1, d2);
    c.backward = ControlFunction::tightest(d2, d1);
    c.verdict = CoarseVerdict::Equivalent;
    c.note = "finite snapshot: both certificates always exist";
    return c;
}

CoarseComparison control_compare(const GlueFamily& d1, const GlueFamily& d2,
                                 const Rational& radius, std::optional<Rational> window) {
    if (sgn(radius) <= 0) fail(ErrorKind::Precondition, "comparison radius must be positive");
    const Rational w = window ? *window : Rational(radius / 2);
    const GluedMetric a_small = d1.at(radius), b_small = d2.at(radius);
    const GluedMetric a_large = d1.at(2 * radius), b_large = d2.at(2 * radius);
    require_same_pair(a_small, b_small);
    const bool forward = stable_on(raw_bound(a_small, b_small), raw_bound(a_large, b_large), w);
    const bool backward = stable_on(raw_bound(b_small, a_small), raw_bound(b_large, a_large), w);
    CoarseComparison c;
    if (forward) c.forward = ControlFunction::tightest(a_large, b_large);
    if (backward) c.backward = ControlFunction::tightest(b_large, a_large);
    if (forward && backward)
        c.verdict = CoarseVerdict::Equivalent;
    else if (forward)
        c.verdict = CoarseVerdict::Leq;
    else if (backward)
        c.verdict = CoarseVerdict::Geq;
    else
        c.verdict = CoarseVerdict::Inconclusive;
    c.note = "certified on truncations R=" + to_string(radius) + " and 2R for t <= " + to_string(w);
    return c;
}

}  // namespace coarsefield
