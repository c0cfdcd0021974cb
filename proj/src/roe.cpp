#include "coarsefield/roe.hpp"

#include "coarsefield/error.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <type_traits>

namespace coarsefield {

template <class Scalar>
Scalar BasicOperator<Scalar>::at(std::size_t y, std::size_t x) const {
    auto it = entries_.find({y, x});
    return it == entries_.end() ? Scalar{} : it->second;
}

template <class Scalar>
void BasicOperator<Scalar>::set(std::size_t y, std::size_t x, const Scalar& value) {
    if (y >= codomain_.size() || x >= domain_.size())
        fail(ErrorKind::Structural, "operator entry outside its index spaces");
    if (is_exact_zero(value))
        entries_.erase({y, x});
    else
        entries_[{y, x}] = value;
}

template <class Scalar>
void BasicOperator<Scalar>::prune() {
    if constexpr (std::is_same_v<Scalar, std::complex<double>>) {
        double largest = 0;
        for (const auto& [k, v] : entries_) largest = std::max(largest, std::abs(v));
        const double cut = float_threshold() * largest;
        for (auto it = entries_.begin(); it != entries_.end();)
            it = std::abs(it->second) <= cut ? entries_.erase(it) : std::next(it);
    }
}

template <class Scalar>
BasicOperator<Scalar> BasicOperator<Scalar>::adjoint() const {
    BasicOperator r(codomain_, domain_);
    for (const auto& [k, v] : entries_) r.entries_[{k.second, k.first}] = conjugate(v);
    return r;
}

template <class Scalar>
Matrix<Scalar> BasicOperator<Scalar>::dense() const {
    Matrix<Scalar> m(codomain_.size(), domain_.size());
    for (const auto& [k, v] : entries_) m(k.first, k.second) = v;
    return m;
}

template <class Scalar>
std::size_t BasicOperator<Scalar>::column_degree() const {
    std::map<std::size_t, std::size_t> count;
    std::size_t best = 0;
    for (const auto& [k, v] : entries_) best = std::max(best, ++count[k.second]);
    return best;
}

template <class Scalar>
std::size_t BasicOperator<Scalar>::row_degree() const {
    std::map<std::size_t, std::size_t> count;
    std::size_t best = 0;
    for (const auto& [k, v] : entries_) best = std::max(best, ++count[k.first]);
    return best;
}

template <class Scalar>
BasicOperator<Scalar>& BasicOperator<Scalar>::operator+=(const BasicOperator& o) {
    if (!(domain_ == o.domain_) || !(codomain_ == o.codomain_))
        fail(ErrorKind::Structural, "sum of operators between different spaces");
    for (const auto& [k, v] : o.entries_) set(k.first, k.second, at(k.first, k.second) + v);
    prune();
    return *this;
}

template <class Scalar>
BasicOperator<Scalar> BasicOperator<Scalar>::after(const BasicOperator& first) const {
    if (!(first.codomain_ == domain_))
        fail(ErrorKind::Structural, "operator product through different middle spaces");
    std::map<std::size_t, std::vector<std::pair<std::size_t, Scalar>>> by_column;
    for (const auto& [k, v] : entries_) by_column[k.second].emplace_back(k.first, v);
    std::map<Key, Scalar> acc;
    for (const auto& [k, v] : first.entries_) {
        auto it = by_column.find(k.first);
        if (it == by_column.end()) continue;
        for (const auto& [z, w] : it->second) {
            auto [slot, inserted] = acc.try_emplace({z, k.second}, w * v);
            if (!inserted) slot->second += w * v;
        }
    }
    BasicOperator r(first.domain_, codomain_);
    for (const auto& [k, v] : acc)
        if (!is_exact_zero(v)) r.entries_.emplace(k, v);
    r.prune();
    return r;
}

template class BasicOperator<ComplexRational>;
template class BasicOperator<std::complex<double>>;

// ---------------------------------------------------------------------------

template <class Scalar>
Rational propagation(const BasicOperator<Scalar>& s, const GluedMetric& d) {
    const bool forward = s.domain() == d.left() && s.codomain() == d.right();
    const bool backward = s.domain() == d.right() && s.codomain() == d.left();
    if (!forward && !backward)
        fail(ErrorKind::Structural, "operator index spaces do not match the glue");
    Rational best(0);
    for (const auto& [k, v] : s.entries()) {
        const Rational& dist = forward ? d(k.second, k.first) : d(k.first, k.second);
        if (dist > best) best = dist;
    }
    return best;
}

template <class Scalar>
Rational propagation(const BasicOperator<Scalar>& s, const FiniteMetricSpace& space) {
    if (!(s.domain() == space) || !(s.codomain() == space))
        fail(ErrorKind::Structural, "operator index spaces do not match the metric");
    Rational best(0);
    for (const auto& [k, v] : s.entries())
        if (space(k.first, k.second) > best) best = space(k.first, k.second);
    return best;
}

template Rational propagation(const ExactOperator&, const GluedMetric&);
template Rational propagation(const FloatOperator&, const GluedMetric&);
template Rational propagation(const ExactOperator&, const FiniteMetricSpace&);
template Rational propagation(const FloatOperator&, const FiniteMetricSpace&);

TroProduct tro_triple(const ExactOperator& t, const ExactOperator& s, const ExactOperator& r,
                      const GluedMetric& d) {
    for (const auto* op : {&t, &s, &r})
        if (!(op->domain() == d.left()) || !(op->codomain() == d.right()))
            fail(ErrorKind::Structural, "T, S and R must all map H_X to H_Y over the glue");
    TroProduct out;
    out.product = t * s.adjoint() * r;
    out.propagation = propagation(out.product, d);
    out.bound = propagation(t, d) + propagation(s, d) + propagation(r, d);
    if (out.propagation > out.bound)
        fail(ErrorKind::Internal, "T S* R exceeds the propagation bound");
    return out;
}

// ---------------------------------------------------------------------------

PartialTranslation PartialTranslation::tight(
    std::vector<std::pair<std::size_t, std::size_t>> pairs, const GluedMetric& d) {
    std::sort(pairs.begin(), pairs.end());
    Rational widest(0);
    for (auto [x, z] : pairs) {
        if (x >= d.left().size() || z >= d.right().size())
            fail(ErrorKind::Structural, "translation names an unknown point");
        widest = std::max(widest, d(x, z));
    }
    PartialTranslation t{std::move(pairs), widest + 1};
    if (!t.injective()) fail(ErrorKind::Precondition, "partial translation is not injective");
    return t;
}

bool PartialTranslation::injective() const {
    std::set<std::size_t> xs, zs;
    for (auto [x, z] : pairs)
        if (!xs.insert(x).second || !zs.insert(z).second) return false;
    return true;
}

bool PartialTranslation::within_bound(const GluedMetric& d) const {
    for (auto [x, z] : pairs)
        if (x >= d.left().size() || z >= d.right().size() || !(d(x, z) < bound)) return false;
    return true;
}

template <class Scalar>
BasicOperator<Scalar> translation_operator(const PartialTranslation& t,
                                           const FiniteMetricSpace& domain,
                                           const FiniteMetricSpace& codomain) {
    BasicOperator<Scalar> op(domain, codomain);
    for (auto [x, z] : t.pairs) op.set(z, x, Scalar(1));
    return op;
}

template ExactOperator translation_operator(const PartialTranslation&, const FiniteMetricSpace&,
                                            const FiniteMetricSpace&);
template FloatOperator translation_operator(const PartialTranslation&, const FiniteMetricSpace&,
                                            const FiniteMetricSpace&);

template <class Scalar>
Decomposition<Scalar> decompose(const BasicOperator<Scalar>& s, const GluedMetric& d,
                                const Rational& max_propagation) {
    if (propagation(s, d) > max_propagation)
        fail(ErrorKind::Precondition, "operator propagation exceeds " + to_string(max_propagation));
    if (!(s.domain() == d.left()))
        fail(ErrorKind::Structural, "decomposition needs an operator from the left space");
    Decomposition<Scalar> dec;
    dec.column_degree = s.column_degree();
    dec.row_degree = s.row_degree();
    // Remaining support, ordered by (x, y).
    std::set<std::pair<std::size_t, std::size_t>> left;
    for (const auto& [k, v] : s.entries()) left.emplace(k.second, k.first);
    while (!left.empty()) {
        std::set<std::size_t> used_x, used_y;
        DecompositionPiece<Scalar> piece;
        piece.coefficients.assign(s.domain().size(), Scalar{});
        piece.translation.bound = max_propagation + 1;
        for (auto it = left.begin(); it != left.end();) {
            auto [x, y] = *it;
            if (used_x.count(x) || used_y.count(y)) {
                ++it;
                continue;
            }
            used_x.insert(x);
            used_y.insert(y);
            piece.translation.pairs.emplace_back(x, y);
            piece.coefficients[x] = s.at(y, x);
            it = left.erase(it);
        }
        dec.pieces.push_back(std::move(piece));
    }
    return dec;
}

template <class Scalar>
BasicOperator<Scalar> reconstruct(const Decomposition<Scalar>& dec, const FiniteMetricSpace& domain,
                                  const FiniteMetricSpace& codomain) {
    BasicOperator<Scalar> sum(domain, codomain);
    for (const auto& piece : dec.pieces) {
        BasicOperator<Scalar> diag(domain, domain);
        for (std::size_t x = 0; x < domain.size(); ++x) diag.set(x, x, piece.coefficients[x]);
        sum += translation_operator<Scalar>(piece.translation, domain, codomain) * diag;
    }
    return sum;
}

template Decomposition<ComplexRational> decompose(const ExactOperator&, const GluedMetric&,
                                                  const Rational&);
template Decomposition<std::complex<double>> decompose(const FloatOperator&, const GluedMetric&,
                                                       const Rational&);
template ExactOperator reconstruct(const Decomposition<ComplexRational>&, const FiniteMetricSpace&,
                                   const FiniteMetricSpace&);
template FloatOperator reconstruct(const Decomposition<std::complex<double>>&,
                                   const FiniteMetricSpace&, const FiniteMetricSpace&);

// ---------------------------------------------------------------------------

Factorization factor_through(const PartialTranslation& t, const GluedMetric& d1,
                             const GluedMetric& d2) {
    Factorization out;
    out.composed = compose(d1, d2);
    const GluedMetric& d = out.composed.metric;
    if (!t.injective()) fail(ErrorKind::Precondition, "partial translation is not injective");
    if (!t.within_bound(d))
        fail(ErrorKind::Precondition, "translation violates its bound under the composed metric");

    const FiniteMetricSpace &x_space = d1.left(), &y_space = d1.right(), &z_space = d2.right();
    std::vector<std::set<std::size_t>> used;  // midpoints taken by each piece
    std::map<std::size_t, std::size_t> fiber;
    for (auto [x, z] : t.pairs) {
        const std::size_t y = out.composed.midpoint(x, z);
        out.midpoint.push_back(y);
        out.max_fiber = std::max(out.max_fiber, ++fiber[y]);
        std::size_t i = 0;
        while (i < used.size() && used[i].count(y)) ++i;
        if (i == used.size()) {
            used.emplace_back();
            out.first.emplace_back(x_space, y_space);
            out.second.emplace_back(y_space, z_space);
        }
        used[i].insert(y);
        out.first[i].set(y, x, ComplexRational(1));
        out.second[i].set(z, y, ComplexRational(1));
    }

    ExactOperator sum(x_space, z_space);
    std::set<std::pair<std::size_t, std::size_t>> seen;
    for (std::size_t i = 0; i < out.first.size(); ++i) {
        ExactOperator term = out.second[i] * out.first[i];
        for (const auto& [k, v] : term.entries())
            if (!seen.insert(k).second) fail(ErrorKind::Internal, "factor supports overlap");
        sum += term;
        out.first_propagation = std::max(out.first_propagation, propagation(out.first[i], d1));
        out.second_propagation = std::max(out.second_propagation, propagation(out.second[i], d2));
    }
    if (!(sum == translation_operator<ComplexRational>(t, x_space, z_space)))
        fail(ErrorKind::Internal, "sum of G_i F_i differs from the translation");
    if (!(out.first_propagation < t.bound) || !(out.second_propagation < t.bound))
        fail(ErrorKind::Internal, "a factor leg reaches the translation bound");
    return out;
}

template <class Scalar>
std::string support_dot(const BasicOperator<Scalar>& s) {
    std::ostringstream os;
    os << "digraph support {\n  rankdir=LR;\n";
    for (std::size_t x = 0; x < s.domain().size(); ++x)
        os << "  x" << x << " [label=\"" << s.domain().point(x) << "\", shape=box];\n";
    for (std::size_t y = 0; y < s.codomain().size(); ++y)
        os << "  y" << y << " [label=\"" << s.codomain().point(y) << "\", shape=ellipse];\n";
    for (const auto& [k, v] : s.entries()) os << "  x" << k.second << " -> y" << k.first << ";\n";
    os << "}\n";
    return os.str();
}

template std::string support_dot(const ExactOperator&);
template std::string support_dot(const FloatOperator&);

}  // namespace coarsefield
