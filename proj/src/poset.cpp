#include "coarsefield/poset.hpp"

#include "coarsefield/error.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace coarsefield {

// ---------------------------------------------------------------------------
// FinitePoset

FinitePoset FinitePoset::make(std::vector<std::string> elements,
                              std::vector<std::vector<bool>> leq) {
    const std::size_t n = elements.size();
    if (leq.size() != n) fail(ErrorKind::Structural, "order matrix does not match element count");
    for (const auto& row : leq)
        if (row.size() != n) fail(ErrorKind::Structural, "order matrix must be square");
    std::set<std::string> seen;
    for (const auto& e : elements)
        if (!seen.insert(e).second) fail(ErrorKind::Structural, "duplicate element '" + e + "'");
    for (std::size_t a = 0; a < n; ++a)
        if (!leq[a][a]) fail(ErrorKind::Structural, "order is not reflexive at " + elements[a]);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a + 1; b < n; ++b)
            if (leq[a][b] && leq[b][a])
                fail(ErrorKind::Structural,
                     "order is not antisymmetric at " + elements[a] + ", " + elements[b]);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
            if (leq[a][b])
                for (std::size_t c = 0; c < n; ++c)
                    if (leq[b][c] && !leq[a][c])
                        fail(ErrorKind::Structural, "order is not transitive at " + elements[a] +
                                                        ", " + elements[b] + ", " + elements[c]);
    FinitePoset p;
    p.elements_ = std::move(elements);
    p.up_.assign(n, Bits(n));
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) p.up_[a][b] = leq[a][b];
    return p;
}

FinitePoset FinitePoset::from_relations(
    std::vector<std::string> elements,
    const std::vector<std::pair<std::size_t, std::size_t>>& below) {
    const std::size_t n = elements.size();
    std::vector<std::vector<bool>> leq(n, std::vector<bool>(n, false));
    for (std::size_t a = 0; a < n; ++a) leq[a][a] = true;
    for (auto [a, b] : below) {
        if (a >= n || b >= n) fail(ErrorKind::Structural, "relation names an unknown element");
        leq[a][b] = true;
    }
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t a = 0; a < n; ++a)
            if (leq[a][k])
                for (std::size_t b = 0; b < n; ++b)
                    if (leq[k][b]) leq[a][b] = true;
    return make(std::move(elements), std::move(leq));
}

FinitePoset FinitePoset::chain(std::size_t n) {
    std::vector<std::string> ids;
    std::vector<std::vector<bool>> leq(n, std::vector<bool>(n, false));
    for (std::size_t i = 0; i < n; ++i) {
        ids.push_back(std::to_string(i));
        for (std::size_t j = i; j < n; ++j) leq[i][j] = true;
    }
    return make(std::move(ids), std::move(leq));
}

FinitePoset FinitePoset::antichain(std::size_t n) {
    std::vector<std::string> ids;
    std::vector<std::vector<bool>> leq(n, std::vector<bool>(n, false));
    for (std::size_t i = 0; i < n; ++i) {
        ids.push_back("c" + std::to_string(i + 1));
        leq[i][i] = true;
    }
    return make(std::move(ids), std::move(leq));
}

std::optional<std::size_t> FinitePoset::find(const std::string& id) const {
    auto it = std::find(elements_.begin(), elements_.end(), id);
    if (it == elements_.end()) return std::nullopt;
    return static_cast<std::size_t>(it - elements_.begin());
}

std::size_t FinitePoset::index_of(const std::string& id) const {
    auto i = find(id);
    if (!i) fail(ErrorKind::Structural, "unknown poset element '" + id + "'");
    return *i;
}

bool FinitePoset::is_minimal(std::size_t a) const {
    for (std::size_t b = 0; b < size(); ++b)
        if (less(b, a)) return false;
    return true;
}

std::vector<std::size_t> FinitePoset::minimal_elements() const {
    std::vector<std::size_t> out;
    for (std::size_t a = 0; a < size(); ++a)
        if (is_minimal(a)) out.push_back(a);
    return out;
}

std::optional<std::size_t> FinitePoset::smallest_element() const {
    for (std::size_t a = 0; a < size(); ++a)
        if (up_[a].all()) return a;
    return std::nullopt;
}

std::vector<std::pair<std::size_t, std::size_t>> FinitePoset::hasse_edges() const {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t a = 0; a < size(); ++a)
        for (std::size_t b = 0; b < size(); ++b) {
            if (!less(a, b)) continue;
            bool covering = true;
            for (std::size_t c = 0; c < size() && covering; ++c)
                if (less(a, c) && less(c, b)) covering = false;
            if (covering) out.emplace_back(a, b);
        }
    return out;
}

// ---------------------------------------------------------------------------
// Terms

Term Term::make(Op op, std::size_t element, std::vector<Term> children) {
    return Term(std::make_shared<const Node>(Node{op, element, std::move(children)}));
}

Term Term::universe() { return make(Op::Universe, 0, {}); }
Term Term::empty() { return make(Op::Empty, 0, {}); }
Term Term::upset(std::size_t a) { return make(Op::Upset, a, {}); }
Term Term::lower(std::size_t a) { return make(Op::Lower, a, {}); }

Term complement(const Term& t) {
    switch (t.op()) {
        case Term::Op::Upset: return Term::lower(t.element());
        case Term::Op::Lower: return Term::upset(t.element());
        case Term::Op::Universe: return Term::empty();
        case Term::Op::Empty: return Term::universe();
        case Term::Op::Complement: return t.node_->children.front();
        default: return Term::make(Term::Op::Complement, 0, {t});
    }
}

Term intersection(const Term& a, const Term& b) {
    if (a.op() == Term::Op::Universe) return b;
    if (b.op() == Term::Op::Universe) return a;
    return Term::make(Term::Op::Intersection, 0, {a, b});
}

Term set_union(const Term& a, const Term& b) {
    if (a.op() == Term::Op::Empty) return b;
    if (b.op() == Term::Op::Empty) return a;
    return Term::make(Term::Op::Union, 0, {a, b});
}

Bits Term::evaluate(const FinitePoset& p) const {
    const auto& ch = node_->children;
    switch (node_->op) {
        case Op::Universe: return p.everything();
        case Op::Empty: return Bits(p.size());
        case Op::Upset: return p.upset(node_->element);
        case Op::Lower: return ~p.upset(node_->element);
        case Op::Complement: return ~ch[0].evaluate(p);
        case Op::Intersection: return ch[0].evaluate(p) & ch[1].evaluate(p);
        case Op::Union: return ch[0].evaluate(p) | ch[1].evaluate(p);
    }
    return Bits(p.size());
}

std::string Term::to_string(const FinitePoset& p) const {
    const auto& ch = node_->children;
    switch (node_->op) {
        case Op::Universe: return "P";
        case Op::Empty: return "{}";
        case Op::Upset: return "U[" + p.element(node_->element) + "]";
        case Op::Lower: return "V[" + p.element(node_->element) + "]";
        case Op::Complement: return "~" + ch[0].to_string(p);
        case Op::Intersection: return "(" + ch[0].to_string(p) + " & " + ch[1].to_string(p) + ")";
        case Op::Union: return "(" + ch[0].to_string(p) + " | " + ch[1].to_string(p) + ")";
    }
    return "?";
}

ClopenSet make_clopen(const FinitePoset& p, Term term) {
    Bits carrier = term.evaluate(p);
    return {std::move(carrier), std::move(term)};
}

ClopenSet complement(const FinitePoset& p, const ClopenSet& s) {
    ClopenSet c = make_clopen(p, complement(s.term));
    if (c.carrier != ~s.carrier) fail(ErrorKind::Internal, "complemented term disagrees with carrier");
    return c;
}

ClopenSet intersection(const FinitePoset& p, const ClopenSet& a, const ClopenSet& b) {
    return make_clopen(p, intersection(a.term, b.term));
}

// ---------------------------------------------------------------------------
// Topology

std::vector<ClopenSet> subbase_sets(const FinitePoset& p) {
    std::vector<ClopenSet> out;
    for (std::size_t a = 0; a < p.size(); ++a) {
        out.push_back(make_clopen(p, Term::upset(a)));
        out.push_back(complement(p, out.back()));
    }
    return out;
}

ClopenSet minimal_neighbourhood(const FinitePoset& p, std::size_t c) {
    ClopenSet n = make_clopen(p, Term::universe());
    for (std::size_t a = 0; a < p.size(); ++a)
        n = intersection(p, n, make_clopen(p, p.leq(a, c) ? Term::upset(a) : Term::lower(a)));
    return n;
}

bool is_open(const FinitePoset& p, const Bits& s) {
    for (std::size_t c = 0; c < p.size(); ++c)
        if (s[c] && !minimal_neighbourhood(p, c).carrier.is_subset_of(s)) return false;
    return true;
}

bool is_closed(const FinitePoset& p, const Bits& s) { return is_open(p, ~s); }

std::pair<ClopenSet, ClopenSet> hausdorff_witness(const FinitePoset& p, std::size_t a,
                                                  std::size_t b) {
    if (a >= p.size() || b >= p.size()) fail(ErrorKind::Structural, "unknown poset element");
    if (a == b) fail(ErrorKind::Structural, "separation needs two distinct elements");
    std::pair<ClopenSet, ClopenSet> out =
        !p.leq(a, b) ? std::pair{make_clopen(p, Term::upset(a)), make_clopen(p, Term::lower(a))}
                     : std::pair{make_clopen(p, Term::lower(b)), make_clopen(p, Term::upset(b))};
    if (!out.first.carrier[a] || !out.second.carrier[b] ||
        (out.first.carrier & out.second.carrier).any())
        fail(ErrorKind::Internal, "separation witness is not a disjoint pair");
    return out;
}

UrysohnResult urysohn_function(const FinitePoset& p, const Bits& closed, std::size_t a) {
    if (closed.size() != p.size()) fail(ErrorKind::Structural, "closed set has the wrong universe");
    if (a >= p.size()) fail(ErrorKind::Structural, "unknown poset element");
    if (closed[a]) fail(ErrorKind::Precondition, "the point lies in the closed set");
    if (!is_closed(p, closed)) fail(ErrorKind::Precondition, "the set is not closed");

    auto fits = [&](const ClopenSet& s) { return s.carrier[a] && !(s.carrier & closed).any(); };
    std::optional<ClopenSet> found;
    ClopenSet own = make_clopen(p, Term::upset(a));
    if (fits(own)) found = own;
    for (std::size_t c = 0; c < p.size() && !found; ++c) {
        ClopenSet u = make_clopen(p, Term::upset(c));
        ClopenSet v = make_clopen(p, Term::lower(c));
        if (fits(u))
            found = u;
        else if (fits(v))
            found = v;
    }
    if (!found) {
        ClopenSet w = make_clopen(p, Term::universe());
        for (std::size_t c = 0; c < p.size() && (w.carrier & closed).any(); ++c) {
            ClopenSet s = make_clopen(p, p.leq(c, a) ? Term::upset(c) : Term::lower(c));
            if ((w.carrier & closed & ~s.carrier).any()) w = intersection(p, w, s);
        }
        if (!fits(w)) fail(ErrorKind::Internal, "no subbase intersection separates the point");
        found = w;
    }
    UrysohnResult r{*found, false};
    r.continuous = is_open(p, r.set.carrier) && is_open(p, ~r.set.carrier);
    return r;
}

std::optional<std::size_t> refute_subcover(const FinitePoset& p,
                                           const std::vector<std::size_t>& minimals,
                                           const std::vector<std::size_t>& candidate) {
    for (auto c : minimals) {
        if (c >= p.size()) fail(ErrorKind::Structural, "unknown poset element");
        if (!p.is_minimal(c))
            fail(ErrorKind::Precondition, "'" + p.element(c) + "' is not a minimal element");
    }
    for (auto a : candidate)
        if (a >= p.size()) fail(ErrorKind::Structural, "unknown poset element");
    for (auto c : minimals) {
        bool covered = false;
        for (auto a : candidate) covered = covered || p.leq(a, c);
        if (!covered) return c;
    }
    return std::nullopt;
}

std::string hasse_dot(const FinitePoset& p, const std::vector<ClopenSet>& sets) {
    static const char* palette[] = {"lightblue", "lightpink", "palegreen", "khaki",
                                    "plum",      "lightsalmon", "lightcyan", "wheat"};
    std::map<std::string, std::size_t> classes;
    std::ostringstream os;
    os << "digraph hasse {\n  rankdir=BT;\n  node [style=filled];\n";
    for (std::size_t a = 0; a < p.size(); ++a) {
        std::string key;
        for (const auto& s : sets) key += s.carrier[a] ? '1' : '0';
        auto [it, inserted] = classes.emplace(key, classes.size());
        os << "  n" << a << " [label=\"" << p.element(a) << "\", fillcolor="
           << palette[it->second % 8] << "];\n";
    }
    for (auto [a, b] : p.hasse_edges()) os << "  n" << a << " -> n" << b << ";\n";
    os << "}\n";
    return os.str();
}

// ---------------------------------------------------------------------------
// Spectrum

GeneratedAlgebra GeneratedAlgebra::from_poset(const FinitePoset& p,
                                              const std::vector<std::size_t>& generators,
                                              const std::vector<std::size_t>& universe) {
    std::set<std::size_t> in_universe(universe.begin(), universe.end());
    for (auto u : universe)
        if (u >= p.size()) fail(ErrorKind::Structural, "unknown universe element");
    for (auto g : generators) {
        if (g >= p.size()) fail(ErrorKind::Structural, "unknown generator");
        if (!in_universe.count(g))
            fail(ErrorKind::Structural, "generator '" + p.element(g) + "' is not in the universe");
    }
    GeneratedAlgebra alg;
    std::vector<std::vector<bool>> order(generators.size(), std::vector<bool>(generators.size()));
    for (std::size_t i = 0; i < generators.size(); ++i) {
        alg.generators_.push_back(p.element(generators[i]));
        for (std::size_t j = 0; j < generators.size(); ++j)
            order[i][j] = p.leq(generators[i], generators[j]);
    }
    for (auto u : universe) {
        alg.universe_.push_back(p.element(u));
        Bits sig(generators.size());
        for (std::size_t i = 0; i < generators.size(); ++i) sig[i] = p.leq(generators[i], u);
        alg.signatures_.push_back(std::move(sig));
    }
    alg.order_ = std::move(order);
    alg.smallest_ = p.smallest_element().has_value();
    return alg;
}

GeneratedAlgebra GeneratedAlgebra::from_signatures(std::vector<std::string> generators,
                                                   std::vector<std::string> universe,
                                                   std::vector<Bits> signatures) {
    if (universe.size() != signatures.size())
        fail(ErrorKind::Structural, "one signature per universe element is required");
    for (const auto& s : signatures)
        if (s.size() != generators.size())
            fail(ErrorKind::Structural, "signature length differs from the generator count");
    GeneratedAlgebra alg;
    alg.generators_ = std::move(generators);
    alg.universe_ = std::move(universe);
    alg.signatures_ = std::move(signatures);
    return alg;
}

std::vector<std::pair<Bits, std::vector<std::string>>> GeneratedAlgebra::atoms() const {
    std::vector<std::pair<Bits, std::vector<std::string>>> out;
    for (std::size_t u = 0; u < universe_.size(); ++u) {
        auto it = std::find_if(out.begin(), out.end(),
                               [&](const auto& a) { return a.first == signatures_[u]; });
        if (it == out.end())
            out.push_back({signatures_[u], {universe_[u]}});
        else
            it->second.push_back(universe_[u]);
    }
    return out;
}

std::string GeneratedAlgebra::fingerprint() const {
    std::string s = "generators=[";
    for (std::size_t i = 0; i < generators_.size(); ++i) s += (i ? "," : "") + generators_[i];
    s += "];universe=[";
    for (std::size_t i = 0; i < universe_.size(); ++i) s += (i ? "," : "") + universe_[i];
    return s + "]";
}

Bits limit_signature(const LimitWitness& w, std::size_t generators) {
    if (w.tail >= w.sequence.size())
        fail(ErrorKind::Structural, "limit witness '" + w.name + "' has an empty tail");
    for (const auto& s : w.sequence)
        if (s.size() != generators)
            fail(ErrorKind::Structural, "limit witness '" + w.name + "' has the wrong width");
    for (std::size_t k = w.tail + 1; k < w.sequence.size(); ++k)
        if (w.sequence[k] != w.sequence[w.tail])
            fail(ErrorKind::Structural,
                 "limit witness '" + w.name + "' does not stabilise on its tail");
    return w.sequence[w.tail];
}

Spectrum gamma_spectrum(const GeneratedAlgebra& alg, const std::vector<LimitWitness>& limits) {
    const std::size_t g = alg.generators().size();
    Spectrum s;
    s.generators = alg.generators();
    s.fingerprint = alg.fingerprint();
    s.smallest_element = alg.has_smallest_element();

    auto admit = [&](const Bits& sig) -> SpectrumPoint& {
        for (auto& pt : s.points)
            if (pt.assignment == sig) return pt;
        s.points.push_back({sig, {}, {}});
        return s.points.back();
    };
    for (const auto& [sig, members] : alg.atoms()) admit(sig).realized_by = members;
    for (const auto& w : limits) {
        Bits sig = limit_signature(w, g);
        if (const auto& order = alg.generator_order())
            for (std::size_t a = 0; a < g; ++a)
                for (std::size_t b = 0; b < g; ++b)
                    if ((*order)[a][b] && sig[b] && !sig[a])
                        fail(ErrorKind::Structural, "limit witness '" + w.name +
                                                        "' is not downward closed at " +
                                                        s.generators[a]);
        admit(sig).limits.push_back(w.name);
    }
    const std::size_t n = s.points.size();
    s.order.assign(n, std::vector<bool>(n, false));
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t t = 0; t < n; ++t)
            s.order[r][t] = s.points[r].assignment.is_subset_of(s.points[t].assignment);
    return s;
}

}  // namespace coarsefield
