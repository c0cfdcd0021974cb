#include "coarsefield/grid.hpp"

#include "coarsefield/error.hpp"
#include "coarsefield/hermitian.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace coarsefield {

namespace {

using cd = std::complex<double>;

GridInterval expand(std::size_t t0, const GridInterval& allowed,
                    const std::function<bool(std::size_t)>& ok) {
    GridInterval r{t0, t0};
    while (r.lo > allowed.lo && ok(r.lo - 1)) --r.lo;
    while (r.hi < allowed.hi && ok(r.hi + 1)) ++r.hi;
    return r;
}

GridInterval meet(const GridInterval& a, const GridInterval& b) {
    return {std::max(a.lo, b.lo), std::min(a.hi, b.hi)};
}

void require_node(const GridField& f, std::size_t t0) {
    if (t0 >= f.size()) fail(ErrorKind::Structural, "anchor node outside the grid");
}

void require_same_grid(const GridField& a, const GridField& b) {
    if (a.grid != b.grid) fail(ErrorKind::Structural, "fields live on different grids");
    if (a.rows() != b.rows() || a.cols() != b.cols())
        fail(ErrorKind::Structural, "fields have different value shapes");
}

ComplexMatrix gram(const ComplexMatrix& m) { return m * m.adjoint(); }

// n - sum_i (n e_i*) e_i on the contiguous region around t0 where the
// correction stays below `limit`; the anchor keeps n(t0).
std::pair<GridField, GridInterval> remove_components(const GridField& n,
                                                     const std::vector<const GridField*>& basis,
                                                     std::size_t t0, double limit,
                                                     const GridInterval& allowed) {
    std::vector<ComplexMatrix> correction;
    for (std::size_t t = 0; t < n.size(); ++t) {
        ComplexMatrix c(n.rows(), n.cols());
        for (const auto* e : basis) c += (n.values[t] * e->values[t].adjoint()) * e->values[t];
        correction.push_back(std::move(c));
    }
    const GridInterval region =
        expand(t0, allowed, [&](std::size_t t) { return operator_norm(correction[t]) < limit; });
    std::vector<ComplexMatrix> out = n.values;
    for (std::size_t t = region.lo; t <= region.hi; ++t)
        if (t != t0) out[t] = n.values[t] - correction[t];
    return {GridField::with_observed_modulus(n.grid, std::move(out)), region};
}

}  // namespace

// ---------------------------------------------------------------------------

GridField GridField::make(std::vector<Rational> grid, std::vector<ComplexMatrix> values,
                          Rational modulus) {
    if (grid.empty()) fail(ErrorKind::Structural, "grid field needs at least one node");
    if (grid.size() != values.size())
        fail(ErrorKind::Structural, "one value per grid node is required");
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (sgn(grid[i]) < 0 || grid[i] > 1) fail(ErrorKind::Structural, "grid node outside [0, 1]");
        if (i > 0 && !(grid[i - 1] < grid[i]))
            fail(ErrorKind::Structural, "grid must be strictly increasing");
        if (values[i].rows() != values[0].rows() || values[i].cols() != values[0].cols())
            fail(ErrorKind::Structural, "grid values have different shapes");
    }
    if (sgn(modulus) < 0) fail(ErrorKind::Structural, "negative continuity modulus");
    for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
        const double step = operator_norm(values[i + 1] - values[i]);
        const double allowed = to_double(Rational(modulus * (grid[i + 1] - grid[i])));
        if (step > allowed * (1 + 1e-12) + 1e-15) {
            std::ostringstream os;
            os << "continuity modulus fails between nodes " << i << " and " << i + 1 << ": "
               << step << " > " << allowed;
            fail(ErrorKind::Rejected, os.str(), {{"node", i}, {"step", step}, {"allowed", allowed}});
        }
    }
    return {std::move(grid), std::move(values), std::move(modulus)};
}

double observed_modulus(const std::vector<Rational>& grid, const std::vector<ComplexMatrix>& values) {
    double best = 0;
    for (std::size_t i = 0; i + 1 < grid.size(); ++i)
        best = std::max(best, operator_norm(values[i + 1] - values[i]) /
                                  to_double(Rational(grid[i + 1] - grid[i])));
    return best;
}

GridField GridField::with_observed_modulus(std::vector<Rational> grid,
                                           std::vector<ComplexMatrix> values) {
    constexpr double scale = 1 << 20;
    const double ratio = observed_modulus(grid, values);
    Rational modulus(static_cast<long>(std::ceil(ratio * scale)) + 1, static_cast<long>(scale));
    modulus.canonicalize();
    return make(std::move(grid), std::move(values), std::move(modulus));
}

std::vector<Rational> uniform_grid(std::size_t intervals) {
    if (intervals == 0) fail(ErrorKind::Structural, "grid needs at least one interval");
    std::vector<Rational> g;
    for (std::size_t k = 0; k <= intervals; ++k)
        g.push_back(make_rational(static_cast<std::int64_t>(k), static_cast<std::int64_t>(intervals)));
    return g;
}

double projection_threshold() { return 3.0 / 16.0; }

double splice_weight(double x) {
    if (x <= 0.25) return 0;
    if (x <= 0.75) return (x - 0.25) * (4.0 / 3.0) / 0.5;
    return 1 / x;
}

double projection_defect(const ComplexMatrix& a) { return operator_norm(a - a * a); }

// ---------------------------------------------------------------------------

StabilizeResult stabilize_projection(const GridField& m, std::size_t t0, double eps) {
    require_node(m, t0);
    if (!(eps > 0)) fail(ErrorKind::Precondition, "tolerance must be positive");
    const std::size_t n = m.size();
    StabilizeResult r;
    std::vector<ComplexMatrix> a;
    for (std::size_t t = 0; t < n; ++t) {
        a.push_back(gram(m.values[t]));
        r.defect.push_back(projection_defect(a.back()));
    }
    if (r.defect[t0] > 1e-10)
        fail(ErrorKind::Precondition, "Gram value at the anchor is not a projection",
             {{"defect", r.defect[t0]}});

    const GridInterval whole{0, n - 1};
    r.projection = expand(t0, whole, [&](std::size_t t) { return r.defect[t] < projection_threshold(); });

    std::vector<ComplexMatrix> corrected(n);
    std::vector<double> shift(n, 0);
    for (std::size_t t = r.projection.lo; t <= r.projection.hi; ++t) {
        const auto e = hermitian_eigen(a[t]);
        corrected[t] = apply_function(e, [](double x) { return std::sqrt(splice_weight(x)); }) *
                       m.values[t];
        shift[t] = operator_norm(corrected[t] - m.values[t]);
        const ComplexMatrix f = apply_function(e, [](double x) { return x * splice_weight(x); });
        r.idempotency = std::max(r.idempotency, projection_defect(f));
    }
    if (r.idempotency >= 1e-9)
        fail(ErrorKind::Internal, "functional calculus did not produce a projection");

    r.corrected = expand(t0, r.projection, [&](std::size_t t) { return shift[t] < eps; });
    if (r.corrected.size() == 1 && r.projection.size() > 1) {
        double workable = std::numeric_limits<double>::infinity();
        if (t0 > 0 && r.projection.contains(t0 - 1)) workable = shift[t0 - 1];
        if (r.projection.contains(t0 + 1)) workable = std::min(workable, shift[t0 + 1]);
        std::ostringstream os;
        os << "grid too coarse: correcting the nodes next to the anchor needs eps > " << workable;
        fail(ErrorKind::Rejected, os.str(), {{"smallest_workable_eps", workable}});
    }

    std::vector<ComplexMatrix> out = m.values;
    for (std::size_t t = r.corrected.lo; t <= r.corrected.hi; ++t)
        if (t != t0) out[t] = corrected[t];
    for (std::size_t t = 0; t < n; ++t)
        r.deviation = std::max(r.deviation, operator_norm(out[t] - m.values[t]));
    r.field = GridField::with_observed_modulus(m.grid, std::move(out));
    return r;
}

OrthogonalizeResult orthogonalize_pair(const GridField& m, const GridField& n, std::size_t t0,
                                       double eps) {
    require_same_grid(m, n);
    require_node(m, t0);
    if (operator_norm(m.values[t0] * n.values[t0].adjoint()) > 1e-10)
        fail(ErrorKind::Precondition, "the pair is not orthogonal at the anchor");
    if (projection_defect(gram(m.values[t0])) > 1e-10 || projection_defect(gram(n.values[t0])) > 1e-10)
        fail(ErrorKind::Precondition, "a Gram value at the anchor is not a projection");

    const StabilizeResult first = stabilize_projection(m, t0, eps / 2);
    auto [reduced, region] = remove_components(n, {&first.field}, t0, eps / 2, first.corrected);
    const StabilizeResult second = stabilize_projection(reduced, t0, eps / 2);

    OrthogonalizeResult out;
    out.first = first.field;
    out.second = second.field;
    const GridInterval candidate = meet(region, second.corrected);
    std::vector<double> cross(m.size(), 0), defect(m.size(), 0);
    for (std::size_t t = candidate.lo; t <= candidate.hi; ++t) {
        cross[t] = operator_norm(out.first.values[t] * out.second.values[t].adjoint());
        defect[t] = std::max(projection_defect(gram(out.first.values[t])),
                             projection_defect(gram(out.second.values[t])));
    }
    out.interval = expand(t0, candidate,
                          [&](std::size_t t) { return cross[t] <= 1e-9 && defect[t] <= 1e-9; });
    for (std::size_t t = out.interval.lo; t <= out.interval.hi; ++t) {
        out.cross = std::max(out.cross, cross[t]);
        out.defect = std::max(out.defect, defect[t]);
    }
    return out;
}

FrameResult frame_extend(const std::vector<GridField>& frame, std::size_t t0, double eps) {
    if (frame.empty()) fail(ErrorKind::Structural, "empty frame");
    for (const auto& e : frame) require_same_grid(frame.front(), e);
    require_node(frame.front(), t0);
    const std::size_t k = frame.size(), r = frame.front().rows();

    auto gram_error = [&](const std::vector<GridField>& f, std::size_t t) {
        double worst = 0;
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = 0; j < k; ++j) {
                ComplexMatrix g = f[i].values[t] * f[j].values[t].adjoint();
                if (i == j) g -= ComplexMatrix::identity(r);
                worst = std::max(worst, operator_norm(g));
            }
        return worst;
    };
    if (gram_error(frame, t0) > 1e-10)
        fail(ErrorKind::Precondition, "the frame is not orthonormal at the anchor");

    FrameResult out;
    const StabilizeResult head = stabilize_projection(frame.front(), t0, eps / 2);
    out.frame.push_back(head.field);
    GridInterval interval = head.corrected;
    // One orthogonalization pass per additional frame element.
    for (std::size_t j = 1; j < k; ++j) {
        std::vector<const GridField*> basis;
        for (const auto& e : out.frame) basis.push_back(&e);
        auto [reduced, region] = remove_components(frame[j], basis, t0, eps / 2, interval);
        const StabilizeResult s = stabilize_projection(reduced, t0, eps / 2);
        out.frame.push_back(s.field);
        interval = meet(region, s.corrected);
    }

    std::vector<double> gram_err(frame.front().size(), 0), idem(frame.front().size(), 0);
    for (std::size_t t = interval.lo; t <= interval.hi; ++t) {
        gram_err[t] = gram_error(out.frame, t);
        ComplexMatrix p(frame.front().cols(), frame.front().cols());
        for (const auto& e : out.frame) p += e.values[t].adjoint() * e.values[t];
        idem[t] = projection_defect(p);
    }
    out.interval = expand(t0, interval,
                          [&](std::size_t t) { return gram_err[t] <= 1e-9 && idem[t] <= 1e-9; });
    for (std::size_t t = out.interval.lo; t <= out.interval.hi; ++t) {
        out.gram_error = std::max(out.gram_error, gram_err[t]);
        out.idempotency = std::max(out.idempotency, idem[t]);
    }
    return out;
}

}  // namespace coarsefield
