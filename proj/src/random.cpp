#include "coarsefield/random.hpp"

#include "coarsefield/error.hpp"

#include <algorithm>
#include <numeric>

namespace coarsefield {

namespace {

// Floyd–Warshall on an (n x n) weight table; entries already hold edge weights.
void close_paths(RationalMatrix& w) {
    const std::size_t n = w.rows();
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (w(i, k) + w(k, j) < w(i, j)) w(i, j) = w(i, k) + w(k, j);
}

Rational diameter(const FiniteMetricSpace& s) {
    Rational d(0);
    for (const auto& v : s.dist().data()) d = std::max(d, v);
    return d;
}

}  // namespace

long uniform_int(Rng& rng, long lo, long hi) {
    return std::uniform_int_distribution<long>(lo, hi)(rng);
}

FiniteMetricSpace random_metric_space(Rng& rng, std::size_t n, const std::string& prefix,
                                      long max_weight) {
    RationalMatrix w(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            w(i, j) = w(j, i) = make_rational(uniform_int(rng, 2, 2 * max_weight), 2);
    close_paths(w);
    std::vector<std::string> ids;
    for (std::size_t i = 0; i < n; ++i) ids.push_back(prefix + std::to_string(i));
    return FiniteMetricSpace::make(std::move(ids), std::move(w));
}

GluedMetric random_glue(Rng& rng, const FiniteMetricSpace& left, const FiniteMetricSpace& right) {
    const std::size_t nx = left.size(), ny = right.size();
    const Rational floor_weight = std::max(Rational(1), Rational(std::max(diameter(left), diameter(right)) / 2));
    // Combined weight table; missing cross edges start at a safe upper value.
    RationalMatrix w(nx + ny, nx + ny);
    Rational far = diameter(left) + diameter(right) + 100;
    for (std::size_t i = 0; i < nx; ++i)
        for (std::size_t j = 0; j < nx; ++j) w(i, j) = left(i, j);
    for (std::size_t i = 0; i < ny; ++i)
        for (std::size_t j = 0; j < ny; ++j) w(nx + i, nx + j) = right(i, j);
    const long edges = uniform_int(rng, 1, static_cast<long>(nx * ny));
    for (std::size_t x = 0; x < nx; ++x)
        for (std::size_t y = 0; y < ny; ++y) w(x, nx + y) = w(nx + y, x) = far;
    for (long e = 0; e < edges; ++e) {
        const auto x = static_cast<std::size_t>(uniform_int(rng, 0, static_cast<long>(nx) - 1));
        const auto y = static_cast<std::size_t>(uniform_int(rng, 0, static_cast<long>(ny) - 1));
        const Rational weight = floor_weight + make_rational(uniform_int(rng, 0, 8), 2);
        w(x, nx + y) = w(nx + y, x) = std::min(w(x, nx + y), weight);
    }
    close_paths(w);
    RationalMatrix cross(nx, ny);
    for (std::size_t x = 0; x < nx; ++x)
        for (std::size_t y = 0; y < ny; ++y) cross(x, y) = w(x, nx + y);
    return glue(left, right, std::move(cross));
}

ComplexRational random_scalar(Rng& rng) {
    for (;;) {
        ComplexRational z(make_rational(uniform_int(rng, -4, 4), uniform_int(rng, 1, 2)),
                          uniform_int(rng, 0, 2) == 0 ? make_rational(uniform_int(rng, -3, 3), 1)
                                                      : Rational(0));
        if (!z.is_zero()) return z;
    }
}

ExactOperator random_banded(Rng& rng, const GluedMetric& d, const Rational& band,
                            std::size_t max_fiber) {
    ExactOperator op(d.left(), d.right());
    std::vector<std::size_t> col(d.left().size(), 0), row(d.right().size(), 0);
    std::vector<std::pair<std::size_t, std::size_t>> slots;
    for (std::size_t x = 0; x < d.left().size(); ++x)
        for (std::size_t y = 0; y < d.right().size(); ++y)
            if (d(x, y) <= band) slots.emplace_back(x, y);
    std::shuffle(slots.begin(), slots.end(), rng);
    for (auto [x, y] : slots) {
        if (col[x] >= max_fiber || row[y] >= max_fiber || uniform_int(rng, 0, 2) == 0) continue;
        ++col[x];
        ++row[y];
        op.set(y, x, random_scalar(rng));
    }
    return op;
}

PartialTranslation random_translation(Rng& rng, const GluedMetric& d) {
    std::vector<std::size_t> xs(d.left().size()), zs(d.right().size());
    std::iota(xs.begin(), xs.end(), 0);
    std::iota(zs.begin(), zs.end(), 0);
    std::shuffle(xs.begin(), xs.end(), rng);
    std::shuffle(zs.begin(), zs.end(), rng);
    const std::size_t k = static_cast<std::size_t>(
        uniform_int(rng, 1, static_cast<long>(std::min(xs.size(), zs.size()))));
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t i = 0; i < k; ++i) pairs.emplace_back(xs[i], zs[i]);
    return PartialTranslation::tight(std::move(pairs), d);
}

FinitePoset random_poset(Rng& rng, std::size_t n, double density) {
    std::bernoulli_distribution edge(density);
    std::vector<std::string> ids;
    std::vector<std::pair<std::size_t, std::size_t>> below;
    for (std::size_t i = 0; i < n; ++i) {
        ids.push_back("p" + std::to_string(i));
        for (std::size_t j = i + 1; j < n; ++j)
            if (edge(rng)) below.emplace_back(i, j);
    }
    return FinitePoset::from_relations(std::move(ids), below);
}

TroFamily random_field_family(Rng& rng, std::size_t elements, std::size_t rows, std::size_t cols) {
    FinitePoset p = random_poset(rng, elements, 0.5);
    std::vector<std::vector<bool>> base_rows(elements, std::vector<bool>(rows)),
        base_cols(elements, std::vector<bool>(cols));
    for (std::size_t a = 0; a < elements; ++a) {
        base_rows[a][static_cast<std::size_t>(uniform_int(rng, 0, static_cast<long>(rows) - 1))] = true;
        base_cols[a][static_cast<std::size_t>(uniform_int(rng, 0, static_cast<long>(cols) - 1))] = true;
        for (std::size_t i = 0; i < rows; ++i)
            if (uniform_int(rng, 0, 3) == 0) base_rows[a][i] = true;
        for (std::size_t j = 0; j < cols; ++j)
            if (uniform_int(rng, 0, 3) == 0) base_cols[a][j] = true;
    }
    // Union over everything below keeps the family increasing.
    std::vector<std::vector<std::size_t>> row_sets(elements), col_sets(elements);
    for (std::size_t a = 0; a < elements; ++a) {
        for (std::size_t i = 0; i < rows; ++i) {
            bool on = false;
            for (std::size_t c = 0; c < elements; ++c) on = on || (p.leq(c, a) && base_rows[c][i]);
            if (on) row_sets[a].push_back(i);
        }
        for (std::size_t j = 0; j < cols; ++j) {
            bool on = false;
            for (std::size_t c = 0; c < elements; ++c) on = on || (p.leq(c, a) && base_cols[c][j]);
            if (on) col_sets[a].push_back(j);
        }
    }
    return TroFamily::block_support(std::move(p), rows, cols, row_sets, col_sets);
}

PosetFieldElement random_field_element(Rng& rng, const TroFamily& family) {
    PosetFieldElement m(family.rows(), family.cols());
    const long terms = uniform_int(rng, 1, 3);
    for (long t = 0; t < terms; ++t) {
        const auto a = static_cast<std::size_t>(
            uniform_int(rng, 0, static_cast<long>(family.poset().size()) - 1));
        ExactMatrix s(family.rows(), family.cols());
        for (const auto& g : family.generators(a))
            if (uniform_int(rng, 0, 1) == 1) s += random_scalar(rng) * g;
        if (!s.is_zero()) m += PosetFieldElement::generator(family, a, std::move(s));
    }
    return m;
}

BlockClassMatrix random_partial_permutation(Rng& rng, BlockClassMatrix::Index size) {
    std::vector<BlockClassMatrix::Index> targets(static_cast<std::size_t>(size));
    std::iota(targets.begin(), targets.end(), 1);
    std::shuffle(targets.begin(), targets.end(), rng);
    BlockClassMatrix m;
    for (BlockClassMatrix::Index i = 1; i <= size; ++i)
        if (uniform_int(rng, 0, 1) == 1) m.set(i, targets[static_cast<std::size_t>(i - 1)], "I");
    return m;
}

BlockClassMatrix random_diagonal(Rng& rng, BlockClassMatrix::Index size) {
    BlockClassMatrix m;
    for (BlockClassMatrix::Index i = 1; i <= size; ++i)
        if (uniform_int(rng, 0, 1) == 1) m.set(i, i, "I");
    return m;
}

}  // namespace coarsefield
