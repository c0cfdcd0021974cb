#pragma once

/**
 * @file roe.hpp
 * @brief Sparse operators indexed by metric-space points: propagation,
 *        the T S* R bound, partial translations, decomposition into
 *        weighted partial translations, and factorization through a midpoint space.
 */

#include "coarsefield/matrix.hpp"
#include "coarsefield/metric.hpp"

#include <complex>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace coarsefield {

/// Operator H_X -> H_Y stored as (y, x) -> value. No stored entry is zero:
/// exact scalars drop exact zeros, doubles drop entries below
/// float_threshold() times the largest magnitude.
template <class Scalar>
class BasicOperator {
public:
    using Key = std::pair<std::size_t, std::size_t>;  ///< (row y, column x)

    BasicOperator() = default;
    BasicOperator(FiniteMetricSpace domain, FiniteMetricSpace codomain)
        : domain_(std::move(domain)), codomain_(std::move(codomain)) {}

    static double float_threshold() { return 1e-12; }

    const FiniteMetricSpace& domain() const { return domain_; }
    const FiniteMetricSpace& codomain() const { return codomain_; }
    const std::map<Key, Scalar>& entries() const { return entries_; }
    std::size_t nonzeros() const { return entries_.size(); }
    bool is_zero() const { return entries_.empty(); }

    Scalar at(std::size_t y, std::size_t x) const;
    void set(std::size_t y, std::size_t x, const Scalar& value);

    BasicOperator adjoint() const;
    Matrix<Scalar> dense() const;

    /// Largest number of stored entries in one column / one row.
    std::size_t column_degree() const;
    std::size_t row_degree() const;

    BasicOperator& operator+=(const BasicOperator& o);
    friend BasicOperator operator+(BasicOperator a, const BasicOperator& b) { return a += b; }
    friend BasicOperator operator-(BasicOperator a, const BasicOperator& b) {
        for (const auto& [k, v] : b.entries_) a.set(k.first, k.second, a.at(k.first, k.second) - v);
        return a;
    }

    /// this ∘ other: requires other.codomain() == this->domain().
    friend BasicOperator operator*(const BasicOperator& a, const BasicOperator& b) {
        return a.after(b);
    }

    friend bool operator==(const BasicOperator& a, const BasicOperator& b) {
        return a.domain_ == b.domain_ && a.codomain_ == b.codomain_ && a.entries_ == b.entries_;
    }

    /// Drops float entries below the relative threshold; no-op for exact scalars.
    void prune();

private:
    BasicOperator after(const BasicOperator& first) const;

    FiniteMetricSpace domain_;
    FiniteMetricSpace codomain_;
    std::map<Key, Scalar> entries_;
};

using ExactOperator = BasicOperator<ComplexRational>;
using FloatOperator = BasicOperator<std::complex<double>>;

/// Max of d(x, y) over stored (y, x); 0 for the zero operator. The operator
/// must map left -> right or right -> left of the glue.
template <class Scalar>
Rational propagation(const BasicOperator<Scalar>& s, const GluedMetric& d);
/// Same, for an operator from a space to itself.
template <class Scalar>
Rational propagation(const BasicOperator<Scalar>& s, const FiniteMetricSpace& space);

struct TroProduct {
    ExactOperator product;  ///< T S* R
    Rational propagation;
    Rational bound;         ///< prop(T) + prop(S) + prop(R)
};

/// T, S, R : H_X -> H_Y over `d`.
TroProduct tro_triple(const ExactOperator& t, const ExactOperator& s, const ExactOperator& r,
                      const GluedMetric& d);

/// Injective partial map x -> t(x) with d(x, t(x)) < bound.
struct PartialTranslation {
    std::vector<std::pair<std::size_t, std::size_t>> pairs;  ///< (x, t(x)), ascending in x
    Rational bound;

    /// bound = max displacement + 1.
    static PartialTranslation tight(std::vector<std::pair<std::size_t, std::size_t>> pairs,
                                    const GluedMetric& d);

    bool injective() const;
    bool within_bound(const GluedMetric& d) const;
};

template <class Scalar>
BasicOperator<Scalar> translation_operator(const PartialTranslation& t,
                                           const FiniteMetricSpace& domain,
                                           const FiniteMetricSpace& codomain);

template <class Scalar>
struct DecompositionPiece {
    PartialTranslation translation;
    std::vector<Scalar> coefficients;  ///< f_i on X; zero outside the translation's domain
};

template <class Scalar>
struct Decomposition {
    std::vector<DecompositionPiece<Scalar>> pieces;
    std::size_t column_degree = 0;
    std::size_t row_degree = 0;
};

/// S = sum_i T_i diag(f_i) by repeatedly peeling a maximal matching off the
/// support, scanning entries in (x, y) order. Each translation has bound L + 1.
template <class Scalar>
Decomposition<Scalar> decompose(const BasicOperator<Scalar>& s, const GluedMetric& d,
                                const Rational& max_propagation);

template <class Scalar>
BasicOperator<Scalar> reconstruct(const Decomposition<Scalar>& dec, const FiniteMetricSpace& domain,
                                  const FiniteMetricSpace& codomain);

struct Factorization {
    Composition composed;
    std::vector<ExactOperator> first;   ///< F_i : H_X -> H_Y
    std::vector<ExactOperator> second;  ///< G_i : H_Y -> H_Z
    std::vector<std::size_t> midpoint;  ///< chosen y for each pair of t, in order
    std::size_t max_fiber = 0;
    Rational first_propagation;         ///< max over i of d1-propagation of F_i
    Rational second_propagation;        ///< max over i of d2-propagation of G_i
};

/// Splits a partial translation for compose(d1, d2) into T = sum_i G_i F_i
/// through the retained midpoints; the domain of t is cut into pieces on
/// which the midpoint map is injective (first fit, ascending x).
Factorization factor_through(const PartialTranslation& t, const GluedMetric& d1,
                             const GluedMetric& d2);

/// Bipartite support graph in DOT.
template <class Scalar>
std::string support_dot(const BasicOperator<Scalar>& s);

}  // namespace coarsefield
