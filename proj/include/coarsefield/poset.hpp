#pragma once

/**
 * @file poset.hpp
 * @brief Finite posets, the clopen topology generated by upsets and their
 *        complements, separation witnesses, and the spectrum of the Boolean
 *        algebra generated by upset indicators.
 */

#include <boost/dynamic_bitset.hpp>

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace coarsefield {

using Bits = boost::dynamic_bitset<>;

class FinitePoset {
public:
    FinitePoset() = default;

    /// Checks reflexivity, antisymmetry and transitivity; structural error otherwise.
    static FinitePoset make(std::vector<std::string> elements, std::vector<std::vector<bool>> leq);
    /// Order generated by the given (lower, upper) pairs.
    static FinitePoset from_relations(std::vector<std::string> elements,
                                      const std::vector<std::pair<std::size_t, std::size_t>>& below);
    /// 0 < 1 < ... < n-1 with ids "0".."n-1".
    static FinitePoset chain(std::size_t n);
    /// n pairwise incomparable elements with ids "c1".."cn".
    static FinitePoset antichain(std::size_t n);

    std::size_t size() const { return elements_.size(); }
    const std::vector<std::string>& elements() const { return elements_; }
    const std::string& element(std::size_t i) const { return elements_[i]; }
    std::size_t index_of(const std::string& id) const;
    std::optional<std::size_t> find(const std::string& id) const;

    bool leq(std::size_t a, std::size_t b) const { return up_[a][b]; }
    bool less(std::size_t a, std::size_t b) const { return a != b && up_[a][b]; }

    /// {b : a <= b} as a bit vector over the elements.
    const Bits& upset(std::size_t a) const { return up_[a]; }
    Bits everything() const { return Bits(size()).set(); }

    bool is_minimal(std::size_t a) const;
    std::vector<std::size_t> minimal_elements() const;
    std::optional<std::size_t> smallest_element() const;

    /// Covering pairs (a, b): a < b with nothing strictly between.
    std::vector<std::pair<std::size_t, std::size_t>> hasse_edges() const;

    friend bool operator==(const FinitePoset& a, const FinitePoset& b) {
        return a.elements_ == b.elements_ && a.up_ == b.up_;
    }

private:
    std::vector<std::string> elements_;
    std::vector<Bits> up_;
};

/// Symbolic expression over the subbase {U_a, V_a}.
class Term {
public:
    enum class Op { Universe, Empty, Upset, Lower, Complement, Intersection, Union };

    static Term universe();
    static Term empty();
    static Term upset(std::size_t a);  ///< U_a
    static Term lower(std::size_t a);  ///< V_a = complement of U_a

    Op op() const { return node_->op; }
    std::size_t element() const { return node_->element; }

    Bits evaluate(const FinitePoset& p) const;
    std::string to_string(const FinitePoset& p) const;

    friend Term complement(const Term& t);
    friend Term intersection(const Term& a, const Term& b);
    friend Term set_union(const Term& a, const Term& b);

private:
    struct Node {
        Op op;
        std::size_t element = 0;
        std::vector<Term> children;
    };
    explicit Term(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
    static Term make(Op op, std::size_t element, std::vector<Term> children);

    std::shared_ptr<const Node> node_;
};

Term complement(const Term& t);
Term intersection(const Term& a, const Term& b);
Term set_union(const Term& a, const Term& b);

struct ClopenSet {
    Bits carrier;
    Term term;
};

ClopenSet make_clopen(const FinitePoset& p, Term term);
ClopenSet complement(const FinitePoset& p, const ClopenSet& s);
ClopenSet intersection(const FinitePoset& p, const ClopenSet& a, const ClopenSet& b);

/// U_a and V_a for every a, in the order U_0, V_0, U_1, V_1, ...
std::vector<ClopenSet> subbase_sets(const FinitePoset& p);

/// Intersection of every subbase set containing c: the smallest open set around c.
ClopenSet minimal_neighbourhood(const FinitePoset& p, std::size_t c);

bool is_open(const FinitePoset& p, const Bits& s);
bool is_closed(const FinitePoset& p, const Bits& s);

/// Disjoint clopen sets (first contains a, second contains b): (U_a, V_a)
/// when a <= b fails, else (V_b, U_b).
std::pair<ClopenSet, ClopenSet> hausdorff_witness(const FinitePoset& p, std::size_t a,
                                                  std::size_t b);

struct UrysohnResult {
    ClopenSet set;         ///< a in set, set disjoint from F
    bool continuous = false;  ///< both preimages of the indicator are open
};

/// Single subbase set when one works (U_a first, then U_c / V_c in order),
/// otherwise the greedy intersection of subbase sets around a.
UrysohnResult urysohn_function(const FinitePoset& p, const Bits& closed, std::size_t a);

/// First minimal element covered by no U_{a_j}, or nullopt when the candidate covers them all.
std::optional<std::size_t> refute_subcover(const FinitePoset& p,
                                           const std::vector<std::size_t>& minimals,
                                           const std::vector<std::size_t>& candidate);

/// Hasse diagram in DOT; nodes with equal membership across `sets` share a colour.
std::string hasse_dot(const FinitePoset& p, const std::vector<ClopenSet>& sets = {});

// ---------------------------------------------------------------------------
// Spectrum

/// Generators chi_a over a finite universe; each universe element carries the
/// bit vector of generator values (its signature).
class GeneratedAlgebra {
public:
    /// Generators and universe are element indices of `p`; every generator must lie in the universe.
    static GeneratedAlgebra from_poset(const FinitePoset& p, const std::vector<std::size_t>& generators,
                                       const std::vector<std::size_t>& universe);
    /// Signatures given directly, one per universe label.
    static GeneratedAlgebra from_signatures(std::vector<std::string> generators,
                                            std::vector<std::string> universe,
                                            std::vector<Bits> signatures);

    const std::vector<std::string>& generators() const { return generators_; }
    const std::vector<std::string>& universe() const { return universe_; }
    const std::vector<Bits>& signatures() const { return signatures_; }

    /// Universe labels grouped by signature, in order of first appearance.
    std::vector<std::pair<Bits, std::vector<std::string>>> atoms() const;

    /// Generator order (a <= b) when known from an ambient poset.
    const std::optional<std::vector<std::vector<bool>>>& generator_order() const { return order_; }
    std::optional<bool> has_smallest_element() const { return smallest_; }
    std::string fingerprint() const;

private:
    std::vector<std::string> generators_;
    std::vector<std::string> universe_;
    std::vector<Bits> signatures_;
    std::optional<std::vector<std::vector<bool>>> order_;
    std::optional<bool> smallest_;
};

/// A caller-supplied sequence whose signatures are constant from `tail` on.
struct LimitWitness {
    std::string name;
    std::vector<Bits> sequence;
    std::size_t tail = 0;
};

struct SpectrumPoint {
    Bits assignment;  ///< bit g = value of the g-th generator
    std::vector<std::string> realized_by;
    std::vector<std::string> limits;
    bool realized() const { return !realized_by.empty(); }
};

struct Spectrum {
    std::vector<std::string> generators;
    std::vector<SpectrumPoint> points;
    std::vector<std::vector<bool>> order;  ///< order[r][t]: every 1 of r is a 1 of t
    std::string fingerprint;
    std::optional<bool> smallest_element;
};

/// Signature of a limit witness; structural error when it does not stabilise on its tail.
Bits limit_signature(const LimitWitness& w, std::size_t generators);

Spectrum gamma_spectrum(const GeneratedAlgebra& alg, const std::vector<LimitWitness>& limits = {});

}  // namespace coarsefield
