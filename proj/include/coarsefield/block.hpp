#pragma once

/**
 * @file block.hpp
 * @brief Block-class matrices over glues of the axis union with itself:
 *        validation, the diagonal sequence b_k, three-valued order probes,
 *        the eventual-value functional phi along b_k, and the two refutations
 *        built on it.
 *
 * Entry (i, j) of a matrix is the class of the glue between axis i on the
 * left and axis j on the right, taken from a small entry poset whose bottom
 * is "0" (the smallest glue) and whose top is "I" (the unit-shift diagonal).
 * Indices are 1-based.
 */

#include "coarsefield/metric.hpp"
#include "coarsefield/poset.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace coarsefield {

/// The chain 0 < I.
FinitePoset default_entry_poset();

/// Structural error unless "0" is the smallest and "I" the largest element.
void require_entry_poset(const FinitePoset& p);

class BlockClassMatrix {
public:
    using Index = std::int64_t;
    using Position = std::pair<Index, Index>;

    BlockClassMatrix() : BlockClassMatrix(default_entry_poset()) {}
    explicit BlockClassMatrix(FinitePoset entry_poset);

    /// Entries with class "0" are dropped; indices must be >= 1.
    static BlockClassMatrix make(FinitePoset entry_poset,
                                 const std::vector<std::pair<Position, std::string>>& entries,
                                 bool infinite_diagonal = false);

    const FinitePoset& entry_poset() const { return poset_; }
    const std::map<Position, std::string>& entries() const { return entries_; }
    bool infinite_diagonal() const { return infinite_diagonal_; }

    void set(Index i, Index j, const std::string& cls);
    void set_infinite_diagonal(bool on) { infinite_diagonal_ = on; }

    /// Explicit entry, "I" on the diagonal beyond the bound when the
    /// infinite-diagonal flag is set, "0" otherwise.
    std::string at(Index i, Index j) const;

    /// Largest index of an explicit non-zero entry (0 when there is none).
    Index bound() const;
    bool is_zero() const { return entries_.empty() && !infinite_diagonal_; }
    bool is_diagonal() const;
    std::string describe() const;

    friend bool operator==(const BlockClassMatrix& a, const BlockClassMatrix& b) {
        return a.poset_ == b.poset_ && a.entries_ == b.entries_ &&
               a.infinite_diagonal_ == b.infinite_diagonal_;
    }

private:
    FinitePoset poset_;
    std::map<Position, std::string> entries_;
    bool infinite_diagonal_ = false;
};

struct BlockViolation {
    std::string line;  ///< "row" or "column"
    BlockClassMatrix::Index index = 0;
    std::vector<BlockClassMatrix::Position> entries;
};

/// At most one non-zero entry in every row and every column.
std::optional<BlockViolation> validate_block_matrix(const BlockClassMatrix& m);

/// I on (i, i) for i <= k. Structural error for k < 1.
BlockClassMatrix b_sequence(BlockClassMatrix::Index k,
                            const FinitePoset& entry_poset = default_entry_poset());

enum class FamilyVerdict { Leq, NotLeq, Inconclusive };
const char* to_string(FamilyVerdict v);

struct OrderProbe {
    std::string left;
    std::string right;
    FamilyVerdict verdict = FamilyVerdict::Inconclusive;
    std::string reason;
};

/// Sound three-valued order: not-leq from an entrywise violation; leq for
/// equal matrices, the zero matrix, and pairs of diagonal matrices with
/// entries <= I that dominate entrywise; inconclusive otherwise.
OrderProbe family_leq(const BlockClassMatrix& a, const BlockClassMatrix& b);

struct CoronaEvaluation {
    bool value = false;
    BlockClassMatrix::Index stable_after = 0;  ///< chi_a(b_n) = value for every n > stable_after
    std::vector<OrderProbe> probes;            ///< n = 1 .. stable_after + margin
};

/// phi(chi_a) = lim chi_a(b_n) with chi_a(b) = [a <= b]; the limit is read at
/// n = bound + 1 and checked constant up to bound + margin. Inconclusive
/// probes raise ErrorKind::Inconclusive with the probe list.
CoronaEvaluation corona_phi(const BlockClassMatrix& a, BlockClassMatrix::Index margin);

/// phi(chi_a chi_b), the product read along the same b_n.
CoronaEvaluation corona_phi_joint(const BlockClassMatrix& a, const BlockClassMatrix& b,
                                  BlockClassMatrix::Index margin);

struct AccumulationRefutation {
    std::optional<BlockClassMatrix::Index> k0;  ///< least k >= 0 with candidate <= b_k (b_0 = 0)
    std::optional<BlockClassMatrix> separator;  ///< c = b_{k0 + 1}
    std::vector<BlockClassMatrix::Index> members;     ///< probed k with b_k in U[candidate] & V[c]
    std::vector<BlockClassMatrix::Index> exceptions;  ///< 1..k0: the only k that can be members
    std::string neighbourhood;
    std::vector<OrderProbe> probes;
};

/// A neighbourhood of the candidate containing only finitely many b_k.
/// Probes run up to bound + margin.
AccumulationRefutation refute_accumulation(const BlockClassMatrix& candidate,
                                           BlockClassMatrix::Index margin);

struct EscapeWitness {
    BlockClassMatrix a;
    bool phi = false;       ///< phi(chi_a)
    bool value_at_b = false;  ///< chi_a(b)
    std::string branch;
};

/// Some a with phi(chi_a) != chi_a(b): a = b_{bound + 1} when phi(chi_b) = 1,
/// otherwise a = b itself.
EscapeWitness corona_escape_witness(const BlockClassMatrix& b, BlockClassMatrix::Index margin);

/// Chain 0 < b1 < ... < bK.
FinitePoset diagonal_chain_poset(std::size_t k);

/// Spectrum of the algebra generated by chi_{b_1..b_K} over {0, b_1..b_K},
/// with the limit of the signatures of b_n (n up to K + margin) as witness.
Spectrum block_spectrum(std::size_t k, BlockClassMatrix::Index margin);

/// Classes of the axis-pair blocks of a glue family over two copies of the
/// axis union, by family-level comparison with the smallest and unit-shift glues.
BlockClassMatrix extract_block_classes(const GlueFamily& family, const Rational& radius);

}  // namespace coarsefield
