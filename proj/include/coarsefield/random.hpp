#pragma once

/**
 * @file random.hpp
 * @brief Seeded generators of random instances for property suites: metric
 *        spaces, glues, banded operators, partial translations, posets,
 *        field families and block-class matrices.
 */

#include "coarsefield/block.hpp"
#include "coarsefield/field.hpp"
#include "coarsefield/metric.hpp"
#include "coarsefield/poset.hpp"
#include "coarsefield/roe.hpp"

#include <random>

namespace coarsefield {

using Rng = std::mt19937_64;

/// Uniform integer in [lo, hi].
long uniform_int(Rng& rng, long lo, long hi);

/// Shortest-path closure of random positive weights (integers and halves up to max_weight).
FiniteMetricSpace random_metric_space(Rng& rng, std::size_t n, const std::string& prefix,
                                      long max_weight = 6);

/// Random cross edges of weight at least half the larger diameter, closed
/// under shortest paths on X ⊔ Y; the restrictions are preserved by construction.
GluedMetric random_glue(Rng& rng, const FiniteMetricSpace& left, const FiniteMetricSpace& right);

/// Non-zero small complex rational.
ComplexRational random_scalar(Rng& rng);

/// Entries only where d(x, y) <= band, at most max_fiber per row and per column.
ExactOperator random_banded(Rng& rng, const GluedMetric& d, const Rational& band,
                            std::size_t max_fiber);

/// Random injective partial map with the tight bound.
PartialTranslation random_translation(Rng& rng, const GluedMetric& d);

/// Natural labelling p0..p{n-1}: each pair i < j related with the given probability, then closed.
FinitePoset random_poset(Rng& rng, std::size_t n, double density = 0.35);

/// Block-support family on a random poset with monotone row and column sets.
TroFamily random_field_family(Rng& rng, std::size_t elements, std::size_t rows, std::size_t cols);

/// Sum of one to three generator terms with small integer combinations of generator matrices.
PosetFieldElement random_field_element(Rng& rng, const TroFamily& family);

/// Random partial injection of {1..size} into itself with classes "I".
BlockClassMatrix random_partial_permutation(Rng& rng, BlockClassMatrix::Index size);
/// Random diagonal matrix on {1..size}.
BlockClassMatrix random_diagonal(Rng& rng, BlockClassMatrix::Index size);

}  // namespace coarsefield
