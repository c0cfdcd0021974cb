#include "coarsefield/block.hpp"

#include "coarsefield/error.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace coarsefield {

namespace {

using Index = BlockClassMatrix::Index;

nlohmann::json probe_json(const std::vector<OrderProbe>& probes) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& p : probes)
        out.push_back({{"left", p.left}, {"right", p.right}, {"verdict", to_string(p.verdict)},
                       {"reason", p.reason}});
    return out;
}

bool decided(const OrderProbe& p, const std::vector<OrderProbe>& transcript) {
    if (p.verdict == FamilyVerdict::Inconclusive)
        fail(ErrorKind::Inconclusive, "order probe " + p.left + " <= " + p.right + " is undecided",
             {{"probes", probe_json(transcript)}});
    return p.verdict == FamilyVerdict::Leq;
}

}  // namespace

FinitePoset default_entry_poset() {
    return FinitePoset::make({"0", "I"}, {{true, true}, {false, true}});
}

void require_entry_poset(const FinitePoset& p) {
    const auto zero = p.find("0"), unit = p.find("I");
    if (!zero || !unit) fail(ErrorKind::Structural, "entry poset needs classes \"0\" and \"I\"");
    for (std::size_t a = 0; a < p.size(); ++a)
        if (!p.leq(*zero, a) || !p.leq(a, *unit))
            fail(ErrorKind::Structural, "\"0\" must be the smallest and \"I\" the largest class");
}

// ---------------------------------------------------------------------------

BlockClassMatrix::BlockClassMatrix(FinitePoset entry_poset) : poset_(std::move(entry_poset)) {
    require_entry_poset(poset_);
}

BlockClassMatrix BlockClassMatrix::make(FinitePoset entry_poset,
                                        const std::vector<std::pair<Position, std::string>>& entries,
                                        bool infinite_diagonal) {
    BlockClassMatrix m(std::move(entry_poset));
    std::set<Position> seen;
    for (const auto& [pos, cls] : entries) {
        if (!seen.insert(pos).second)
            fail(ErrorKind::Structural, "entry (" + std::to_string(pos.first) + "," +
                                            std::to_string(pos.second) + ") given twice");
        m.set(pos.first, pos.second, cls);
    }
    m.infinite_diagonal_ = infinite_diagonal;
    return m;
}

void BlockClassMatrix::set(Index i, Index j, const std::string& cls) {
    if (i < 1 || j < 1) fail(ErrorKind::Structural, "block indices start at 1");
    poset_.index_of(cls);
    if (cls == "0")
        entries_.erase({i, j});
    else
        entries_[{i, j}] = cls;
}

std::string BlockClassMatrix::at(Index i, Index j) const {
    auto it = entries_.find({i, j});
    if (it != entries_.end()) return it->second;
    if (infinite_diagonal_ && i == j && i > bound()) return "I";
    return "0";
}

BlockClassMatrix::Index BlockClassMatrix::bound() const {
    Index b = 0;
    for (const auto& [pos, cls] : entries_) b = std::max({b, pos.first, pos.second});
    return b;
}

bool BlockClassMatrix::is_diagonal() const {
    return std::all_of(entries_.begin(), entries_.end(),
                       [](const auto& e) { return e.first.first == e.first.second; });
}

std::string BlockClassMatrix::describe() const {
    if (is_zero()) return "0";
    if (!infinite_diagonal_ && is_diagonal()) {
        const Index k = bound();
        bool is_b = static_cast<Index>(entries_.size()) == k;
        for (const auto& [pos, cls] : entries_) is_b = is_b && cls == "I";
        if (is_b) return "b_" + std::to_string(k);
    }
    std::ostringstream os;
    os << '{';
    bool first = true;
    for (const auto& [pos, cls] : entries_) {
        os << (first ? "" : ",") << '(' << pos.first << ',' << pos.second << ")=" << cls;
        first = false;
    }
    if (infinite_diagonal_) os << (first ? "" : ",") << "I on the diagonal beyond " << bound();
    os << '}';
    return os.str();
}

std::optional<BlockViolation> validate_block_matrix(const BlockClassMatrix& m) {
    std::map<Index, std::vector<BlockClassMatrix::Position>> rows, cols;
    for (const auto& [pos, cls] : m.entries()) {
        rows[pos.first].push_back(pos);
        cols[pos.second].push_back(pos);
    }
    for (const auto& [i, list] : rows)
        if (list.size() > 1) return BlockViolation{"row", i, list};
    for (const auto& [j, list] : cols)
        if (list.size() > 1) return BlockViolation{"column", j, list};
    return std::nullopt;
}

BlockClassMatrix b_sequence(Index k, const FinitePoset& entry_poset) {
    if (k < 1) fail(ErrorKind::Structural, "b_k is defined for k >= 1");
    BlockClassMatrix m(entry_poset);
    for (Index i = 1; i <= k; ++i) m.set(i, i, "I");
    return m;
}

const char* to_string(FamilyVerdict v) {
    switch (v) {
        case FamilyVerdict::Leq: return "leq";
        case FamilyVerdict::NotLeq: return "not-leq";
        case FamilyVerdict::Inconclusive: return "inconclusive";
    }
    return "inconclusive";
}

OrderProbe family_leq(const BlockClassMatrix& a, const BlockClassMatrix& b) {
    if (!(a.entry_poset() == b.entry_poset()))
        fail(ErrorKind::Structural, "matrices use different entry posets");
    OrderProbe probe{a.describe(), b.describe(), FamilyVerdict::Inconclusive, ""};
    if (a == b) {
        probe.verdict = FamilyVerdict::Leq;
        probe.reason = "equal matrices";
        return probe;
    }
    if (a.is_zero()) {
        probe.verdict = FamilyVerdict::Leq;
        probe.reason = "the zero matrix is the smallest class";
        return probe;
    }
    const FinitePoset& p = a.entry_poset();
    std::set<BlockClassMatrix::Position> positions;
    for (const auto& [pos, cls] : a.entries()) positions.insert(pos);
    for (const auto& [pos, cls] : b.entries()) positions.insert(pos);
    // One diagonal index past both bounds covers the infinite-diagonal tails.
    const Index top = std::max(a.bound(), b.bound()) + 1;
    for (Index i = 1; i <= top; ++i) positions.insert({i, i});
    for (const auto& [i, j] : positions) {
        const std::string x = a.at(i, j), y = b.at(i, j);
        if (!p.leq(p.index_of(x), p.index_of(y))) {
            probe.verdict = FamilyVerdict::NotLeq;
            probe.reason = "entry (" + std::to_string(i) + "," + std::to_string(j) + "): " + x +
                           " is not below " + y;
            return probe;
        }
    }
    if (a.is_diagonal() && b.is_diagonal()) {
        probe.verdict = FamilyVerdict::Leq;
        probe.reason = "diagonal matrices with entrywise dominance";
        return probe;
    }
    probe.reason = "entrywise dominance outside the diagonal family";
    return probe;
}

// ---------------------------------------------------------------------------

CoronaEvaluation corona_phi(const BlockClassMatrix& a, Index margin) {
    if (margin < 1) fail(ErrorKind::Precondition, "probe margin must be at least 1");
    CoronaEvaluation e;
    e.stable_after = a.bound();
    std::vector<bool> values;
    for (Index n = 1; n <= e.stable_after + margin; ++n) {
        e.probes.push_back(family_leq(a, b_sequence(n, a.entry_poset())));
        values.push_back(decided(e.probes.back(), e.probes));
    }
    e.value = values[static_cast<std::size_t>(e.stable_after)];
    for (Index n = e.stable_after + 1; n <= e.stable_after + margin; ++n)
        if (values[static_cast<std::size_t>(n - 1)] != e.value)
            fail(ErrorKind::Internal, "chi_a(b_n) does not stabilise beyond the bound");
    return e;
}

CoronaEvaluation corona_phi_joint(const BlockClassMatrix& a, const BlockClassMatrix& b,
                                  Index margin) {
    if (margin < 1) fail(ErrorKind::Precondition, "probe margin must be at least 1");
    CoronaEvaluation e;
    e.stable_after = std::max(a.bound(), b.bound());
    std::vector<bool> values;
    for (Index n = 1; n <= e.stable_after + margin; ++n) {
        const BlockClassMatrix bn = b_sequence(n, a.entry_poset());
        e.probes.push_back(family_leq(a, bn));
        const bool va = decided(e.probes.back(), e.probes);
        e.probes.push_back(family_leq(b, bn));
        const bool vb = decided(e.probes.back(), e.probes);
        values.push_back(va && vb);
    }
    e.value = values[static_cast<std::size_t>(e.stable_after)];
    for (Index n = e.stable_after + 1; n <= e.stable_after + margin; ++n)
        if (values[static_cast<std::size_t>(n - 1)] != e.value)
            fail(ErrorKind::Internal, "joint indicator does not stabilise beyond the bound");
    return e;
}

AccumulationRefutation refute_accumulation(const BlockClassMatrix& candidate, Index margin) {
    if (margin < 1) fail(ErrorKind::Precondition, "probe margin must be at least 1");
    if (auto v = validate_block_matrix(candidate))
        fail(ErrorKind::Precondition, "candidate has two non-zero entries in " + v->line + " " +
                                          std::to_string(v->index));
    const FinitePoset& p = candidate.entry_poset();
    const Index last = candidate.bound() + margin;
    auto member = [&](Index k) { return k == 0 ? BlockClassMatrix(p) : b_sequence(k, p); };

    AccumulationRefutation r;
    std::vector<bool> below(static_cast<std::size_t>(last + 1));
    for (Index k = 0; k <= last; ++k) {
        r.probes.push_back(family_leq(candidate, member(k)));
        below[static_cast<std::size_t>(k)] = decided(r.probes.back(), r.probes);
        if (below[static_cast<std::size_t>(k)] && !r.k0) r.k0 = k;
    }
    if (!r.k0) {
        r.neighbourhood = "U[" + candidate.describe() + "]";
        return r;
    }
    const BlockClassMatrix c = b_sequence(*r.k0 + 1, p);
    r.separator = c;
    r.neighbourhood = "U[" + candidate.describe() + "] & V[" + c.describe() + "]";
    for (Index k = 1; k <= *r.k0; ++k) r.exceptions.push_back(k);
    for (Index k = 1; k <= last; ++k) {
        r.probes.push_back(family_leq(c, member(k)));
        const bool above_c = decided(r.probes.back(), r.probes);
        if (below[static_cast<std::size_t>(k)] && !above_c) r.members.push_back(k);
        if (k > *r.k0 && !above_c)
            fail(ErrorKind::Internal, "b_k beyond k0 escapes U[c]");
    }
    for (auto k : r.members)
        if (k > *r.k0) fail(ErrorKind::Internal, "neighbourhood member outside the exception set");
    return r;
}

EscapeWitness corona_escape_witness(const BlockClassMatrix& b, Index margin) {
    if (auto v = validate_block_matrix(b))
        fail(ErrorKind::Precondition,
             "matrix has two non-zero entries in " + v->line + " " + std::to_string(v->index));
    const CoronaEvaluation own = corona_phi(b, margin);
    EscapeWitness w;
    if (!own.value) {
        w.a = b;
        w.phi = false;
        w.value_at_b = decided(family_leq(b, b), {});
        w.branch = "phi(chi_b) = 0 while chi_b(b) = 1";
    } else {
        w.a = b_sequence(b.bound() + 1, b.entry_poset());
        w.phi = corona_phi(w.a, margin).value;
        w.value_at_b = decided(family_leq(w.a, b), {});
        w.branch = "a = b_n beyond the support of b";
    }
    if (w.phi == w.value_at_b) fail(ErrorKind::Internal, "escape witness does not separate");
    return w;
}

FinitePoset diagonal_chain_poset(std::size_t k) {
    std::vector<std::string> ids{"0"};
    for (std::size_t i = 1; i <= k; ++i) ids.push_back("b" + std::to_string(i));
    std::vector<std::vector<bool>> leq(k + 1, std::vector<bool>(k + 1, false));
    for (std::size_t i = 0; i <= k; ++i)
        for (std::size_t j = i; j <= k; ++j) leq[i][j] = true;
    return FinitePoset::make(std::move(ids), std::move(leq));
}

Spectrum block_spectrum(std::size_t k, Index margin) {
    if (k < 1) fail(ErrorKind::Structural, "block spectrum needs at least one generator");
    if (margin < 1) fail(ErrorKind::Precondition, "probe margin must be at least 1");
    const FinitePoset p = default_entry_poset();
    std::vector<std::string> gens, universe{"0"};
    std::vector<BlockClassMatrix> gen_mats;
    for (std::size_t g = 1; g <= k; ++g) {
        gens.push_back("b" + std::to_string(g));
        universe.push_back(gens.back());
        gen_mats.push_back(b_sequence(static_cast<Index>(g), p));
    }
    auto signature = [&](const BlockClassMatrix& u) {
        Bits sig(k);
        for (std::size_t g = 0; g < k; ++g) sig[g] = decided(family_leq(gen_mats[g], u), {});
        return sig;
    };
    std::vector<Bits> sigs{signature(BlockClassMatrix(p))};
    for (const auto& m : gen_mats) sigs.push_back(signature(m));
    LimitWitness w{"b_n", {}, k};
    for (Index n = 1; n <= static_cast<Index>(k) + margin; ++n)
        w.sequence.push_back(signature(b_sequence(n, p)));
    return gamma_spectrum(GeneratedAlgebra::from_signatures(gens, universe, sigs), {w});
}

BlockClassMatrix extract_block_classes(const GlueFamily& family, const Rational& radius) {
    if (family.left.kind() != SpaceFamily::Kind::AxisUnion ||
        family.right.kind() != SpaceFamily::Kind::AxisUnion)
        fail(ErrorKind::Structural, "block classes need axis-union families on both sides");
    const SpaceFamily half = SpaceFamily::half_line();
    const GlueFamily smallest = smallest_family(half, half);
    const GlueFamily unit = shifted_diagonal_family(half, Rational(1));
    BlockClassMatrix out;
    nlohmann::json undecided = nlohmann::json::array();
    for (int i = 1; i <= family.left.axes(); ++i)
        for (int j = 1; j <= family.right.axes(); ++j) {
            auto lift = [](int axis, const FamilyPoint& p) {
                return FamilyPoint{p.coordinate == 0 ? 0 : axis, p.coordinate};
            };
            const GlueFamily block{"block", half, half,
                                   [family, i, j, lift](const FamilyPoint& x, const FamilyPoint& y) -> Rational {
                                       return family.cross(lift(i, x), lift(j, y));
                                   }};
            if (control_compare(block, smallest, radius).verdict == CoarseVerdict::Equivalent)
                continue;
            if (control_compare(block, unit, radius).verdict == CoarseVerdict::Equivalent) {
                out.set(i, j, "I");
                continue;
            }
            undecided.push_back({i, j});
        }
    if (!undecided.empty())
        fail(ErrorKind::Inconclusive, "some blocks match neither the smallest nor the unit glue",
             {{"blocks", undecided}});
    return out;
}

}  // namespace coarsefield
