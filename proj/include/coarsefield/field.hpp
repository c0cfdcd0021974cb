#pragma once

/**
 * @file field.hpp
 * @brief Fields of matrix bimodules over a finite poset: an increasing family
 *        a -> M_a of matrix spaces, elements sum chi_a (x) s, evaluation at
 *        poset elements and spectrum points, fibers, and the field axiom checks.
 */

#include "coarsefield/matrix.hpp"
#include "coarsefield/poset.hpp"

#include <optional>
#include <string>
#include <vector>

namespace coarsefield {

/// a -> M_a = span of the listed generator matrices, all of one shape.
class TroFamily {
public:
    static TroFamily make(FinitePoset poset, std::size_t rows, std::size_t cols,
                          std::vector<std::vector<ExactMatrix>> generators);

    /// M_a = all rows x cols matrices supported on row_sets[a] x col_sets[a].
    static TroFamily block_support(FinitePoset poset, std::size_t rows, std::size_t cols,
                                   const std::vector<std::vector<std::size_t>>& row_sets,
                                   const std::vector<std::vector<std::size_t>>& col_sets);

    const FinitePoset& poset() const { return poset_; }
    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    const std::vector<ExactMatrix>& generators(std::size_t a) const { return gens_[a]; }

    /// First pair a <= b with M_a not inside M_b, if any.
    std::optional<std::pair<std::size_t, std::size_t>> compatibility_violation() const;

    /// a -> span M_a M_a* (left coefficients) and a -> span M_a* M_a (right coefficients).
    TroFamily left_algebra() const;
    TroFamily right_algebra() const;

    /// Basis of span{ M_a : a <= t }.
    std::vector<ExactMatrix> fiber(std::size_t t) const;
    /// Basis of span{ M_a : the spectrum point assigns 1 to a }.
    std::vector<ExactMatrix> fiber(const std::vector<std::string>& generators,
                                   const SpectrumPoint& point) const;

private:
    FinitePoset poset_;
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<std::vector<ExactMatrix>> gens_;
};

/// value times the product of chi_a over a in monomial (empty = unit).
struct FieldTerm {
    std::vector<std::size_t> monomial;  ///< sorted, without repeats
    ExactMatrix value;
};

class PosetFieldElement {
public:
    PosetFieldElement() = default;
    PosetFieldElement(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols) {}

    /// chi_a (x) s; rejected when s is not in span M_a.
    static PosetFieldElement generator(const TroFamily& family, std::size_t a, ExactMatrix s);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    const std::vector<FieldTerm>& terms() const { return terms_; }

    PosetFieldElement& operator+=(const PosetFieldElement& o);
    friend PosetFieldElement operator+(PosetFieldElement a, const PosetFieldElement& b) {
        return a += b;
    }
    friend PosetFieldElement operator*(const ComplexRational& c, PosetFieldElement m);
    friend PosetFieldElement operator*(const PosetFieldElement& a, const PosetFieldElement& b);

    PosetFieldElement adjoint() const;
    /// chi_c * this.
    PosetFieldElement times_indicator(std::size_t c) const;

    /// Sum of the terms whose monomial lies below t.
    ExactMatrix evaluate(const FinitePoset& p, std::size_t t) const;
    /// Sum of the terms whose monomial is assigned 1; structural error when a
    /// monomial element is not among the generators.
    ExactMatrix evaluate(const FinitePoset& p, const std::vector<std::string>& generators,
                         const SpectrumPoint& point) const;

private:
    void add_term(std::vector<std::size_t> monomial, const ExactMatrix& value);

    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<FieldTerm> terms_;
};

struct AxiomCheck {
    std::string name;
    bool passed = true;
    std::size_t instances = 0;
    std::string detail;  ///< first failure
};

struct AxiomReport {
    std::vector<AxiomCheck> checks;
    bool passed() const;
};

struct FieldSample {
    std::vector<PosetFieldElement> module;         ///< rows x cols
    std::vector<PosetFieldElement> left_algebra;   ///< rows x rows, over left_algebra()
    std::vector<PosetFieldElement> right_algebra;  ///< cols x cols, over right_algebra()
    std::vector<std::size_t> points;
};

/// Evaluation along sequence[k] (poset elements) against a limit spectrum point.
struct NormSequence {
    std::vector<std::size_t> sequence;
    std::vector<std::string> generators;
    SpectrumPoint limit;
    std::size_t tail = 0;
};

struct NormTrace {
    std::vector<double> deviations;  ///< | ||pi_{t_k}(m)|| - ||pi_t(m)|| | per k
    double tail_deviation = 0;       ///< max over k >= tail
    bool monotone_tail = true;       ///< deviations non-increasing from tail on
};

NormTrace norm_trace(const PosetFieldElement& m, const FinitePoset& p, const NormSequence& seq);

AxiomReport check_field_axioms(const TroFamily& family, const FieldSample& sample,
                               const std::optional<NormSequence>& continuity = std::nullopt);

}  // namespace coarsefield
