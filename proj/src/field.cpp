#include "coarsefield/field.hpp"

#include "coarsefield/error.hpp"
#include "coarsefield/hermitian.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace coarsefield {

namespace {

std::vector<std::size_t> merge(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
    std::vector<std::size_t> out;
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

std::vector<ExactMatrix> products(const std::vector<ExactMatrix>& gens, bool left) {
    std::vector<ExactMatrix> out;
    for (const auto& g : gens)
        for (const auto& h : gens) out.push_back(left ? g * h.adjoint() : g.adjoint() * h);
    return independent_subset(out);
}

bool spans_inside(const std::vector<ExactMatrix>& inner, const std::vector<ExactMatrix>& outer) {
    for (const auto& g : inner) {
        if (g.is_zero()) continue;
        if (outer.empty() || !in_span(outer, g)) return false;
    }
    return true;
}

bool in_fiber(const std::vector<ExactMatrix>& basis, const ExactMatrix& v) {
    if (v.is_zero()) return true;
    return !basis.empty() && in_span(basis, v);
}

std::string point_name(const FinitePoset& p, std::size_t t) { return "t=" + p.element(t); }

}  // namespace

// ---------------------------------------------------------------------------
// TroFamily

TroFamily TroFamily::make(FinitePoset poset, std::size_t rows, std::size_t cols,
                          std::vector<std::vector<ExactMatrix>> generators) {
    if (generators.size() != poset.size())
        fail(ErrorKind::Structural, "one generator list per poset element is required");
    for (const auto& list : generators)
        for (const auto& g : list)
            if (g.rows() != rows || g.cols() != cols)
                fail(ErrorKind::Structural, "generator matrix has the wrong shape");
    TroFamily f;
    f.poset_ = std::move(poset);
    f.rows_ = rows;
    f.cols_ = cols;
    f.gens_ = std::move(generators);
    return f;
}

TroFamily TroFamily::block_support(FinitePoset poset, std::size_t rows, std::size_t cols,
                                   const std::vector<std::vector<std::size_t>>& row_sets,
                                   const std::vector<std::vector<std::size_t>>& col_sets) {
    if (row_sets.size() != poset.size() || col_sets.size() != poset.size())
        fail(ErrorKind::Structural, "one row set and one column set per poset element");
    std::vector<std::vector<ExactMatrix>> gens(poset.size());
    for (std::size_t a = 0; a < poset.size(); ++a)
        for (auto i : row_sets[a])
            for (auto j : col_sets[a]) {
                if (i >= rows || j >= cols) fail(ErrorKind::Structural, "support index out of range");
                ExactMatrix e(rows, cols);
                e(i, j) = ComplexRational(1);
                gens[a].push_back(std::move(e));
            }
    return make(std::move(poset), rows, cols, std::move(gens));
}

std::optional<std::pair<std::size_t, std::size_t>> TroFamily::compatibility_violation() const {
    for (std::size_t a = 0; a < poset_.size(); ++a)
        for (std::size_t b = 0; b < poset_.size(); ++b)
            if (a != b && poset_.leq(a, b) && !spans_inside(gens_[a], gens_[b]))
                return std::pair{a, b};
    return std::nullopt;
}

TroFamily TroFamily::left_algebra() const {
    std::vector<std::vector<ExactMatrix>> gens;
    for (const auto& g : gens_) gens.push_back(products(g, true));
    return make(poset_, rows_, rows_, std::move(gens));
}

TroFamily TroFamily::right_algebra() const {
    std::vector<std::vector<ExactMatrix>> gens;
    for (const auto& g : gens_) gens.push_back(products(g, false));
    return make(poset_, cols_, cols_, std::move(gens));
}

std::vector<ExactMatrix> TroFamily::fiber(std::size_t t) const {
    if (t >= poset_.size()) fail(ErrorKind::Structural, "unknown poset element");
    std::vector<ExactMatrix> all;
    for (std::size_t a = 0; a < poset_.size(); ++a)
        if (poset_.leq(a, t)) all.insert(all.end(), gens_[a].begin(), gens_[a].end());
    return independent_subset(all);
}

std::vector<ExactMatrix> TroFamily::fiber(const std::vector<std::string>& generators,
                                          const SpectrumPoint& point) const {
    if (point.assignment.size() != generators.size())
        fail(ErrorKind::Structural, "spectrum point does not match its generators");
    std::vector<ExactMatrix> all;
    for (std::size_t g = 0; g < generators.size(); ++g)
        if (point.assignment[g]) {
            const std::size_t a = poset_.index_of(generators[g]);
            all.insert(all.end(), gens_[a].begin(), gens_[a].end());
        }
    return independent_subset(all);
}

// ---------------------------------------------------------------------------
// PosetFieldElement

void PosetFieldElement::add_term(std::vector<std::size_t> monomial, const ExactMatrix& value) {
    if (value.rows() != rows_ || value.cols() != cols_)
        fail(ErrorKind::Structural, "field term has the wrong shape");
    auto it = std::find_if(terms_.begin(), terms_.end(),
                           [&](const FieldTerm& t) { return t.monomial == monomial; });
    if (it == terms_.end()) {
        if (!value.is_zero()) terms_.push_back({std::move(monomial), value});
        return;
    }
    it->value += value;
    if (it->value.is_zero()) terms_.erase(it);
}

PosetFieldElement PosetFieldElement::generator(const TroFamily& family, std::size_t a,
                                               ExactMatrix s) {
    if (a >= family.poset().size()) fail(ErrorKind::Structural, "unknown poset element");
    if (!in_fiber(family.generators(a), s))
        fail(ErrorKind::Rejected,
             "matrix is not in the span of the generators at '" + family.poset().element(a) + "'");
    PosetFieldElement m(family.rows(), family.cols());
    m.add_term({a}, s);
    return m;
}

PosetFieldElement& PosetFieldElement::operator+=(const PosetFieldElement& o) {
    if (o.rows_ != rows_ || o.cols_ != cols_) fail(ErrorKind::Structural, "sum of mismatched fields");
    for (const auto& t : o.terms_) add_term(t.monomial, t.value);
    return *this;
}

PosetFieldElement operator*(const ComplexRational& c, PosetFieldElement m) {
    PosetFieldElement out(m.rows_, m.cols_);
    for (const auto& t : m.terms_) out.add_term(t.monomial, c * t.value);
    return out;
}

PosetFieldElement operator*(const PosetFieldElement& a, const PosetFieldElement& b) {
    if (a.cols_ != b.rows_) fail(ErrorKind::Structural, "product of mismatched fields");
    PosetFieldElement out(a.rows_, b.cols_);
    for (const auto& s : a.terms_)
        for (const auto& t : b.terms_) out.add_term(merge(s.monomial, t.monomial), s.value * t.value);
    return out;
}

PosetFieldElement PosetFieldElement::adjoint() const {
    PosetFieldElement out(cols_, rows_);
    for (const auto& t : terms_) out.add_term(t.monomial, t.value.adjoint());
    return out;
}

PosetFieldElement PosetFieldElement::times_indicator(std::size_t c) const {
    PosetFieldElement out(rows_, cols_);
    for (const auto& t : terms_) out.add_term(merge(t.monomial, {c}), t.value);
    return out;
}

ExactMatrix PosetFieldElement::evaluate(const FinitePoset& p, std::size_t t) const {
    if (t >= p.size()) fail(ErrorKind::Structural, "unknown poset element");
    ExactMatrix sum(rows_, cols_);
    for (const auto& term : terms_) {
        bool on = true;
        for (auto a : term.monomial) on = on && p.leq(a, t);
        if (on) sum += term.value;
    }
    return sum;
}

ExactMatrix PosetFieldElement::evaluate(const FinitePoset& p,
                                        const std::vector<std::string>& generators,
                                        const SpectrumPoint& point) const {
    if (point.assignment.size() != generators.size())
        fail(ErrorKind::Structural, "spectrum point does not match its generators");
    ExactMatrix sum(rows_, cols_);
    for (const auto& term : terms_) {
        bool on = true;
        for (auto a : term.monomial) {
            auto it = std::find(generators.begin(), generators.end(), p.element(a));
            if (it == generators.end())
                fail(ErrorKind::Structural,
                     "'" + p.element(a) + "' is not a generator of the spectrum point");
            on = on && point.assignment[static_cast<std::size_t>(it - generators.begin())];
        }
        if (on) sum += term.value;
    }
    return sum;
}

// ---------------------------------------------------------------------------
// Axioms

bool AxiomReport::passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const AxiomCheck& c) { return c.passed; });
}

NormTrace norm_trace(const PosetFieldElement& m, const FinitePoset& p, const NormSequence& seq) {
    if (seq.tail >= seq.sequence.size())
        fail(ErrorKind::Structural, "norm sequence has an empty tail");
    NormTrace trace;
    const double limit = operator_norm(to_complex(m.evaluate(p, seq.generators, seq.limit)));
    for (auto t : seq.sequence)
        trace.deviations.push_back(std::abs(operator_norm(to_complex(m.evaluate(p, t))) - limit));
    for (std::size_t k = seq.tail; k < trace.deviations.size(); ++k) {
        trace.tail_deviation = std::max(trace.tail_deviation, trace.deviations[k]);
        if (k > seq.tail && trace.deviations[k] > trace.deviations[k - 1])
            trace.monotone_tail = false;
    }
    return trace;
}

AxiomReport check_field_axioms(const TroFamily& family, const FieldSample& sample,
                               const std::optional<NormSequence>& continuity) {
    const FinitePoset& p = family.poset();
    const TroFamily left = family.left_algebra(), right = family.right_algebra();
    for (const auto& m : sample.module)
        if (m.rows() != family.rows() || m.cols() != family.cols())
            fail(ErrorKind::Structural, "module sample has the wrong shape");
    for (const auto& a : sample.left_algebra)
        if (a.rows() != family.rows() || a.cols() != family.rows())
            fail(ErrorKind::Structural, "left algebra sample has the wrong shape");
    for (const auto& b : sample.right_algebra)
        if (b.rows() != family.cols() || b.cols() != family.cols())
            fail(ErrorKind::Structural, "right algebra sample has the wrong shape");
    for (auto t : sample.points)
        if (t >= p.size()) fail(ErrorKind::Structural, "unknown sample point");

    AxiomReport report;
    auto record = [](AxiomCheck& c, bool ok, const std::string& where) {
        ++c.instances;
        if (!ok && c.passed) {
            c.passed = false;
            c.detail = where;
        }
    };

    AxiomCheck compat{"family is increasing", true, 0, {}};
    if (auto v = family.compatibility_violation())
        record(compat, false, p.element(v->first) + " <= " + p.element(v->second));
    else
        record(compat, true, "");
    report.checks.push_back(compat);

    AxiomCheck fibers{"values lie in fibers", true, 0, {}};
    for (auto t : sample.points) {
        const auto fm = family.fiber(t), fa = left.fiber(t), fb = right.fiber(t);
        for (const auto& m : sample.module) record(fibers, in_fiber(fm, m.evaluate(p, t)), point_name(p, t));
        for (const auto& a : sample.left_algebra)
            record(fibers, in_fiber(fa, a.evaluate(p, t)), point_name(p, t) + " (left algebra)");
        for (const auto& b : sample.right_algebra)
            record(fibers, in_fiber(fb, b.evaluate(p, t)), point_name(p, t) + " (right algebra)");
    }
    report.checks.push_back(fibers);

    AxiomCheck left_action{"left action: pi(am) = p(a) pi(m)", true, 0, {}};
    AxiomCheck right_action{"right action: pi(mb) = pi(m) q(b)", true, 0, {}};
    AxiomCheck left_inner{"left inner product: p(mn*) = pi(m) pi(n)*", true, 0, {}};
    AxiomCheck right_inner{"right inner product: q(m*n) = pi(m)* pi(n)", true, 0, {}};
    for (auto t : sample.points) {
        const std::string where = point_name(p, t);
        for (const auto& m : sample.module) {
            const ExactMatrix pm = m.evaluate(p, t);
            for (const auto& a : sample.left_algebra)
                record(left_action, (a * m).evaluate(p, t) == a.evaluate(p, t) * pm, where);
            for (const auto& b : sample.right_algebra)
                record(right_action, (m * b).evaluate(p, t) == pm * b.evaluate(p, t), where);
            for (const auto& n : sample.module) {
                const ExactMatrix pn = n.evaluate(p, t);
                record(left_inner, (m * n.adjoint()).evaluate(p, t) == pm * pn.adjoint(), where);
                record(right_inner, (m.adjoint() * n).evaluate(p, t) == pm.adjoint() * pn, where);
            }
        }
    }
    for (auto* c : {&left_action, &right_action, &left_inner, &right_inner}) report.checks.push_back(*c);

    AxiomCheck surjective{"generators evaluate to themselves", true, 0, {}};
    for (std::size_t a = 0; a < p.size(); ++a)
        for (const auto& s : family.generators(a))
            record(surjective, PosetFieldElement::generator(family, a, s).evaluate(p, a) == s,
                   point_name(p, a));
    report.checks.push_back(surjective);

    if (continuity) {
        AxiomCheck norms{"norm continuity along the sequence", true, 0, {}};
        for (const auto& m : sample.module) {
            const NormTrace trace = norm_trace(m, p, *continuity);
            std::ostringstream os;
            os << "tail deviation " << trace.tail_deviation;
            record(norms, trace.monotone_tail && trace.deviations.back() <= 1e-12, os.str());
        }
        report.checks.push_back(norms);
    }
    return report;
}

}  // namespace coarsefield
