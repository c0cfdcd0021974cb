// Acceptance run: one line per criterion with its verdict and runtime.

#include "coarsefield/block.hpp"
#include "coarsefield/field.hpp"
#include "coarsefield/grid.hpp"
#include "coarsefield/hermitian.hpp"
#include "coarsefield/metric.hpp"
#include "coarsefield/poset.hpp"
#include "coarsefield/random.hpp"
#include "coarsefield/roe.hpp"

#include "oracles.hpp"
#include "support.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <set>
#include <sstream>
#include <string>

using namespace coarsefield;
using support::q;
using Index = BlockClassMatrix::Index;

namespace {

struct Outcome {
    bool ok = true;
    std::string detail;
};

// Collects the first failure; later ones only bump the count.
class Tally {
public:
    void expect(bool cond, const std::string& what) {
        ++checks_;
        if (cond) return;
        ++failures_;
        if (first_.empty()) first_ = what;
    }
    Outcome done(const std::string& summary) const {
        std::ostringstream os;
        os << summary << ", " << checks_ << " checks";
        if (failures_) os << ", " << failures_ << " failed, first: " << first_;
        return {failures_ == 0, os.str()};
    }

private:
    std::size_t checks_ = 0;
    std::size_t failures_ = 0;
    std::string first_;
};

FiniteMetricSpace small_space(Rng& rng, long max, const std::string& prefix) {
    return random_metric_space(rng, static_cast<std::size_t>(uniform_int(rng, 1, max)), prefix);
}

// --- 1 ----------------------------------------------------------------------

Outcome min_plus_associativity() {
    Rng rng(1001);
    Tally t;
    for (int round = 0; round < 200; ++round) {
        const auto w = small_space(rng, 5, "w"), x = small_space(rng, 5, "x");
        const auto y = small_space(rng, 5, "y"), z = small_space(rng, 5, "z");
        const auto d1 = random_glue(rng, w, x), d2 = random_glue(rng, x, y), d3 = random_glue(rng, y, z);
        const auto left = compose(compose(d1, d2).metric, d3).metric.cross();
        const auto right = compose(d1, compose(d2, d3).metric).metric.cross();
        t.expect(left == right, "triple " + std::to_string(round) + ": parenthesizations differ");
        const auto brute = oracle::min_plus(oracle::min_plus(support::cross(d1), support::cross(d2)),
                                            support::cross(d3));
        t.expect(support::table(left) == brute, "triple " + std::to_string(round) + ": differs from brute force");
    }
    return t.done("200 triples");
}

// --- 2 ----------------------------------------------------------------------

Outcome derived_identity() {
    Rng rng(1002);
    Tally t;
    for (int round = 0; round < 100; ++round) {
        const auto d = random_glue(rng, small_space(rng, 6, "x"), small_space(rng, 6, "y"));
        const auto c = support::cross(d);
        const auto right_derived = oracle::right_derived(c);
        oracle::Table ct(c.empty() ? 0 : c[0].size(), std::vector<Rational>(c.size()));
        for (std::size_t i = 0; i < c.size(); ++i)
            for (std::size_t j = 0; j < c[i].size(); ++j) ct[j][i] = c[i][j];
        const auto left_derived = oracle::right_derived(ct);
        // X -> Y -> X and Y -> X -> Y; both orders of the product.
        const auto xx = support::table(compose(d, d.adjoint()).metric.cross());
        const auto yy = support::table(compose(d.adjoint(), d).metric.cross());
        const auto derived = derived_metrics(d);
        const auto on_x = support::table(derived.induced_on_left), on_y = support::table(derived.induced_on_right);
        const std::string tag = "glue " + std::to_string(round);
        for (std::size_t a = 0; a < xx.size(); ++a)
            for (std::size_t b = 0; b < xx.size(); ++b)
                if (a != b) {
                    t.expect(xx[a][b] == right_derived[a][b], tag + ": (d*d) off the diagonal");
                    t.expect(on_x[a][b] == right_derived[a][b], tag + ": induced metric on X");
                }
        for (std::size_t a = 0; a < yy.size(); ++a)
            for (std::size_t b = 0; b < yy.size(); ++b)
                if (a != b) {
                    t.expect(yy[a][b] == left_derived[a][b], tag + ": (dd*) off the diagonal");
                    t.expect(on_y[a][b] == left_derived[a][b], tag + ": induced metric on Y");
                }
    }
    return t.done("100 glues");
}

// --- 3 ----------------------------------------------------------------------

GluedMetric line_glue(const std::vector<long>& a, const std::vector<long>& b) {
    auto space = [](const std::string& prefix, const std::vector<long>& pos) {
        std::vector<std::string> ids;
        RationalMatrix d(pos.size(), pos.size());
        for (std::size_t i = 0; i < pos.size(); ++i) {
            ids.push_back(prefix + std::to_string(i));
            for (std::size_t j = 0; j < pos.size(); ++j) d(i, j) = std::abs(pos[i] - pos[j]);
        }
        return FiniteMetricSpace::make(ids, d);
    };
    RationalMatrix c(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) c(i, j) = std::abs(a[i] - b[j]);
    return glue(space("x", a), space("y", b), c);
}

Outcome tro_bound() {
    Rng rng(1003);
    Tally t;
    for (int round = 0; round < 100; ++round) {
        const auto d = random_glue(rng, small_space(rng, 6, "x"), small_space(rng, 6, "y"));
        const Rational l = q(uniform_int(rng, 2, 10));
        const auto a = random_banded(rng, d, l, 3), s = random_banded(rng, d, l, 3), r = random_banded(rng, d, l, 3);
        const auto p = tro_triple(a, s, r, d);
        const auto brute = oracle::multiply(
            oracle::multiply(support::dense(a), oracle::adjoint(support::dense(s))), support::dense(r));
        const std::string tag = "triple " + std::to_string(round);
        t.expect(support::dense(p.product) == brute, tag + ": product differs from brute force");
        t.expect(p.propagation == oracle::propagation(brute, support::cross(d)), tag + ": propagation");
        t.expect(p.propagation <= 3 * l, tag + ": exceeds 3L");
    }
    // x=0, u=1, v=2, y=3 on a line; every factor has propagation 1, the product 3.
    const auto d = line_glue({0, 2}, {1, 3});
    ExactOperator a(d.left(), d.right()), s(d.left(), d.right()), r(d.left(), d.right());
    r.set(0, 0, 1);
    s.set(0, 1, 1);
    a.set(1, 1, 1);
    const auto p = tro_triple(a, s, r, d);
    t.expect(propagation(a, d) == 1 && propagation(s, d) == 1 && propagation(r, d) == 1, "chain factors");
    t.expect(p.propagation == 3, "chain instance does not reach 3L");
    return t.done("100 triples + chain instance");
}

// --- 4 ----------------------------------------------------------------------

Outcome decomposition_exactness() {
    Rng rng(1004);
    Tally t;
    for (int round = 0; round < 100; ++round) {
        const auto d = random_glue(rng, small_space(rng, 6, "x"), small_space(rng, 6, "y"));
        const auto s = random_banded(rng, d, q(uniform_int(rng, 2, 12)), 3);
        const auto dec = decompose(s, d, propagation(s, d));
        oracle::Dense sum = oracle::zeros(d.right().size(), d.left().size());
        for (const auto& piece : dec.pieces)
            for (auto [x, z] : piece.translation.pairs) sum[z][x] += piece.coefficients[x];
        const std::string tag = "operator " + std::to_string(round);
        t.expect(sum == support::dense(s), tag + ": reconstruction");
        t.expect(dec.pieces.size() <= dec.column_degree * dec.row_degree, tag + ": piece count");
        t.expect(dec.column_degree <= 3 && dec.row_degree <= 3, tag + ": fiber bound");
    }
    return t.done("100 operators");
}

// --- 5 ----------------------------------------------------------------------

Outcome factorization() {
    Rng rng(1005);
    Tally t;
    for (int round = 0; round < 50; ++round) {
        const auto x = small_space(rng, 6, "x"), y = small_space(rng, 6, "y"), z = small_space(rng, 6, "z");
        const auto d1 = random_glue(rng, x, y), d2 = random_glue(rng, y, z);
        const auto tr = random_translation(rng, compose(d1, d2).metric);
        const auto f = factor_through(tr, d1, d2);
        oracle::Dense sum = oracle::zeros(z.size(), x.size()), expected = oracle::zeros(z.size(), x.size());
        for (auto [a, b] : tr.pairs) expected[b][a] = 1;
        const std::string tag = "translation " + std::to_string(round);
        for (std::size_t i = 0; i < f.first.size(); ++i) {
            sum = oracle::add(sum, oracle::multiply(support::dense(f.second[i]), support::dense(f.first[i])));
            t.expect(oracle::propagation(support::dense(f.first[i]), support::cross(d1)) < tr.bound, tag + ": F leg");
            t.expect(oracle::propagation(support::dense(f.second[i]), support::cross(d2)) < tr.bound, tag + ": G leg");
        }
        std::map<std::size_t, std::size_t> fiber;
        for (auto m : f.midpoint) ++fiber[m];
        std::size_t biggest = 0;
        for (auto [m, n] : fiber) biggest = std::max(biggest, n);
        t.expect(sum == expected, tag + ": sum of G F");
        t.expect(f.first.size() <= biggest, tag + ": piece count above max fiber");
    }
    return t.done("50 translations");
}

// --- 6 ----------------------------------------------------------------------

Outcome topology_suite() {
    Tally t;
    std::size_t posets = 0;
    for (std::size_t n = 1; n <= 5; ++n)
        for (const auto& order : oracle::posets_up_to_iso(n)) {
            ++posets;
            std::vector<std::string> ids;
            for (std::size_t i = 0; i < n; ++i) ids.push_back("p" + std::to_string(i));
            const auto p = FinitePoset::make(ids, order);
            const auto algebra = oracle::generated_algebra(order);
            auto subset = [&](const Bits& b) {
                oracle::Subset s = 0;
                for (std::size_t i = 0; i < n; ++i)
                    if (b[i]) s |= oracle::Subset(1) << i;
                return s;
            };
            const std::string tag = "poset #" + std::to_string(posets);
            for (std::size_t a = 0; a < n; ++a)
                for (std::size_t b = 0; b < n; ++b) {
                    if (a == b) continue;
                    const auto [u, v] = hausdorff_witness(p, a, b);
                    t.expect(u.carrier[a] && v.carrier[b] && !(u.carrier & v.carrier).any(), tag + ": witness");
                    t.expect(is_open(p, u.carrier) && is_closed(p, u.carrier) && is_open(p, v.carrier) &&
                                 is_closed(p, v.carrier),
                             tag + ": witness not clopen");
                    t.expect(algebra.count(subset(u.carrier)) && algebra.count(subset(v.carrier)),
                             tag + ": witness outside the generated algebra");
                }
            for (std::size_t c = 0; c < n; ++c) {
                Bits single(n);
                single[c] = true;
                t.expect(is_open(p, single), tag + ": singleton not open");
                t.expect(algebra.count(oracle::Subset(1) << c) == 1, tag + ": singleton not in the algebra");
                t.expect(minimal_neighbourhood(p, c).carrier == single, tag + ": minimal neighbourhood");
            }
            std::vector<std::size_t> all(n);
            for (std::size_t i = 0; i < n; ++i) all[i] = i;
            const auto s = gamma_spectrum(GeneratedAlgebra::from_poset(p, all, all));
            bool realized = true;
            for (const auto& pt : s.points) realized = realized && pt.realized();
            t.expect(s.points.size() == n && realized, tag + ": spectrum size");
            t.expect(oracle::atoms(algebra).size() == n, tag + ": oracle atom count");
        }
    t.expect(posets == 1 + 2 + 5 + 16 + 63, "poset enumeration count");
    return t.done(std::to_string(posets) + " posets");
}

// --- 7 ----------------------------------------------------------------------

Outcome noncompactness() {
    Rng rng(1007);
    Tally t;
    std::size_t samples = 0;
    for (std::size_t m = 1; m <= 10; ++m) {
        const auto p = FinitePoset::antichain(m);
        for (int round = 0; round < 100; ++round) {
            std::vector<std::size_t> all(m);
            for (std::size_t i = 0; i < m; ++i) all[i] = i;
            std::shuffle(all.begin(), all.end(), rng);
            const auto size = static_cast<std::size_t>(uniform_int(rng, 0, static_cast<long>(m) - 1));
            std::vector<std::size_t> candidate(all.begin(), all.begin() + static_cast<long>(size));
            const auto missed = refute_subcover(p, p.minimal_elements(), candidate);
            ++samples;
            const bool outside =
                missed && std::find(candidate.begin(), candidate.end(), *missed) == candidate.end();
            t.expect(outside, "m = " + std::to_string(m) + ": no uncovered minimal reported");
        }
    }
    return t.done(std::to_string(samples) + " candidates");
}

// --- 8 ----------------------------------------------------------------------

bool below_b(const BlockClassMatrix& a, Index n) {
    if (a.infinite_diagonal()) return false;
    for (const auto& [pos, cls] : a.entries())
        if (pos.first != pos.second || pos.first > n) return false;
    return true;
}

Outcome corona_suite() {
    Rng rng(1008);
    Tally t;
    for (Index k = 1; k <= 10; ++k) {
        const auto e = corona_phi(b_sequence(k), 16);
        t.expect(e.value && e.stable_after == k, "phi(chi_b" + std::to_string(k) + ")");
    }
    for (Index m = 2; m <= 8; ++m) {
        BlockClassMatrix a;
        for (Index i = m; i <= 8; ++i) a.set(i, i, "I");
        a.set_infinite_diagonal(true);
        const auto e = corona_phi(a, 16);
        t.expect(!e.value && e.stable_after == 8, "diagonal tail from " + std::to_string(m));
    }
    std::size_t decided = 0;
    for (int round = 0; round < 500 && decided < 50; ++round) {
        auto draw = [&] {
            const Index size = uniform_int(rng, 1, 8);
            auto m = uniform_int(rng, 0, 1) ? random_diagonal(rng, size) : random_partial_permutation(rng, size);
            if (uniform_int(rng, 0, 4) == 0) m.set_infinite_diagonal(true);
            return m;
        };
        const auto a = draw(), b = draw();
        try {
            const auto pa = corona_phi(a, 12), pb = corona_phi(b, 12), joint = corona_phi_joint(a, b, 12);
            ++decided;
            t.expect(joint.value == (pa.value && pb.value), "multiplicativity on pair " + std::to_string(round));
            t.expect(pa.value == below_b(a, a.bound() + 100), "phi against the support oracle");
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::Inconclusive) throw;
        }
    }
    t.expect(decided == 50, "fewer than 50 decidable pairs");
    for (int round = 0; round < 20; ++round) {
        BlockClassMatrix c = round % 4 == 3 ? random_partial_permutation(rng, uniform_int(rng, 1, 6))
                                            : b_sequence(uniform_int(rng, 1, 12));
        const auto r = refute_accumulation(c, 16);
        bool finite = true;
        for (auto k : r.members)
            finite = finite && std::find(r.exceptions.begin(), r.exceptions.end(), k) != r.exceptions.end();
        if (r.k0) finite = finite && r.exceptions.size() == static_cast<std::size_t>(*r.k0);
        t.expect(finite, "refutation " + std::to_string(round));
    }
    for (unsigned mask = 0; mask < (1u << 8); ++mask) {
        BlockClassMatrix b;
        for (Index i = 1; i <= 8; ++i)
            if (mask >> (i - 1) & 1) b.set(i, i, "I");
        const auto w = corona_escape_witness(b, 8);
        t.expect(w.phi != w.value_at_b, "escape for support mask " + std::to_string(mask));
        t.expect(w.value_at_b == (w.a == b || below_b(w.a, 0)), "escape value at b");
    }
    return t.done("b_1..b_10, tails, 50 pairs, 20 candidates, 256 diagonals");
}

// --- 9 ----------------------------------------------------------------------

ComplexMatrix scalar(double x) { return ComplexMatrix{{std::complex<double>(x)}}; }

GridInterval run_of(std::size_t t0, std::size_t n, const std::function<bool(std::size_t)>& inside) {
    GridInterval r{t0, t0};
    while (r.lo > 0 && inside(r.lo - 1)) --r.lo;
    while (r.hi + 1 < n && inside(r.hi + 1)) ++r.hi;
    return r;
}

Outcome projection_stabilization() {
    Tally t;
    const auto grid = uniform_grid(100);
    auto below = [](const Rational& l) { return l * (1 - l) < q(3, 16); };

    auto dip = [&](std::size_t k) {
        Rational d = abs(Rational(grid[k] - q(1, 2)));
        Rational a = 1 - 4 * d;
        return sgn(a) < 0 ? Rational(0) : a;
    };
    std::vector<ComplexMatrix> dv, gv;
    for (std::size_t k = 0; k <= 100; ++k) {
        dv.push_back(scalar(std::sqrt(to_double(dip(k)))));
        ComplexMatrix m(2, 2);
        m(0, 0) = 1;
        m(1, 1) = std::sqrt(to_double(grid[k]));
        gv.push_back(m);
    }
    struct Case {
        std::string name;
        GridField field;
        std::size_t t0;
        GridInterval expected;
    };
    const std::vector<Case> cases{
        {"scalar dip", GridField::with_observed_modulus(grid, dv), 50,
         run_of(50, 101, [&](std::size_t k) { return below(dip(k)); })},
        {"diag(1,t)", GridField::with_observed_modulus(grid, gv), 0,
         run_of(0, 101, [&](std::size_t k) { return below(grid[k]); })},
    };
    for (const auto& c : cases) {
        const auto r = stabilize_projection(c.field, c.t0, 0.2);
        t.expect(r.projection == c.expected, c.name + ": U differs from the analytic set");
        t.expect(r.idempotency < 1e-9, c.name + ": f(a) not idempotent on U");
        t.expect(r.field.values[c.t0] == c.field.values[c.t0], c.name + ": anchor moved");
        t.expect(r.deviation < 0.2, c.name + ": sup deviation");
    }
    std::ostringstream os;
    os << "dip U = [" << cases[0].expected.lo << "," << cases[0].expected.hi << "], diag U = ["
       << cases[1].expected.lo << "," << cases[1].expected.hi << "]";
    return t.done(os.str());
}

// --- 10 ---------------------------------------------------------------------

ComplexMatrix row(std::initializer_list<double> v) {
    ComplexMatrix m(1, v.size());
    std::size_t j = 0;
    for (double x : v) m(0, j++) = x;
    return m;
}

Outcome orthogonalization_and_frames() {
    Tally t;
    const auto grid = uniform_grid(100);
    std::vector<ComplexMatrix> mv, nv, e1, e2;
    for (const auto& g : grid) {
        const double x = to_double(g);
        mv.push_back(row({std::cos(x), std::sin(x)}));
        nv.push_back(row({0, 1}));
        e1.push_back(row({std::cos(x), std::sin(x), 0}));
        e2.push_back(row({0, std::cos(x), std::sin(x)}));
    }
    const auto pair = orthogonalize_pair(GridField::with_observed_modulus(grid, mv),
                                         GridField::with_observed_modulus(grid, nv), 0, 0.2);
    t.expect(pair.interval.size() > 1, "rotation pair: U is only the anchor");
    double cross = 0;
    for (std::size_t k = pair.interval.lo; k <= pair.interval.hi; ++k)
        cross = std::max(cross, operator_norm(pair.first.values[k] * pair.second.values[k].adjoint()));
    t.expect(cross <= 1e-9, "rotation pair: cross Gram");

    const auto frame = frame_extend(
        {GridField::with_observed_modulus(grid, e1), GridField::with_observed_modulus(grid, e2)}, 0, 0.2);
    t.expect(frame.interval.size() > 1, "frame: U is only the anchor");
    double gram = 0, idem = 0;
    for (std::size_t k = frame.interval.lo; k <= frame.interval.hi; ++k) {
        for (std::size_t i = 0; i < 2; ++i)
            for (std::size_t j = 0; j < 2; ++j) {
                const auto g = frame.frame[i].values[k] * frame.frame[j].values[k].adjoint();
                gram = std::max(gram, std::abs(g(0, 0) - (i == j ? 1.0 : 0.0)));
            }
        ComplexMatrix p(3, 3);
        for (const auto& e : frame.frame) p += e.values[k].adjoint() * e.values[k];
        idem = std::max(idem, operator_norm(p - p * p));
    }
    t.expect(gram <= 1e-9, "frame: Gram not identity");
    t.expect(idem <= 1e-9, "frame: p not idempotent");
    std::ostringstream os;
    os << "pair U = [" << pair.interval.lo << "," << pair.interval.hi << "] cross " << cross << ", frame U = ["
       << frame.interval.lo << "," << frame.interval.hi << "] gram " << gram << " idem " << idem;
    return t.done(os.str());
}

// --- 11 ---------------------------------------------------------------------

// Sum of the terms whose monomial lies below t, read straight off the term list.
ExactMatrix brute_eval(const PosetFieldElement& m, const FinitePoset& p, std::size_t t) {
    ExactMatrix r(m.rows(), m.cols());
    for (const auto& term : m.terms()) {
        bool below = true;
        for (auto a : term.monomial) below = below && p.leq(a, t);
        if (below) r += term.value;
    }
    return r;
}

Outcome field_axioms() {
    Rng rng(1011);
    Tally t;
    for (int round = 0; round < 100; ++round) {
        const std::size_t n = round % 2 ? 3 : 2;
        const auto fam = random_field_family(rng, static_cast<std::size_t>(uniform_int(rng, 1, 3)), n, n);
        const auto& p = fam.poset();
        FieldSample sample;
        for (int i = 0; i < 2; ++i) {
            sample.module.push_back(random_field_element(rng, fam));
            sample.left_algebra.push_back(random_field_element(rng, fam.left_algebra()));
            sample.right_algebra.push_back(random_field_element(rng, fam.right_algebra()));
        }
        for (std::size_t x = 0; x < p.size(); ++x) sample.points.push_back(x);
        const auto report = check_field_axioms(fam, sample);
        const std::string tag = "sample " + std::to_string(round);
        t.expect(report.passed(), tag + ": library axiom report");
        for (auto x : sample.points)
            for (const auto& m : sample.module) {
                const auto pm = brute_eval(m, p, x);
                for (const auto& a : sample.left_algebra)
                    t.expect(brute_eval(a * m, p, x) == brute_eval(a, p, x) * pm, tag + ": left action");
                for (const auto& b : sample.right_algebra)
                    t.expect(brute_eval(m * b, p, x) == pm * brute_eval(b, p, x), tag + ": right action");
                for (const auto& o : sample.module) {
                    const auto po = brute_eval(o, p, x);
                    t.expect(brute_eval(m * o.adjoint(), p, x) == pm * po.adjoint(), tag + ": left inner product");
                    t.expect(brute_eval(m.adjoint() * o, p, x) == pm.adjoint() * po, tag + ": right inner product");
                }
            }
    }
    const std::size_t k = 8;
    const auto p = diagonal_chain_poset(k);
    std::vector<std::vector<std::size_t>> sets(k + 1, {0, 1});
    const auto fam = TroFamily::block_support(p, 2, 2, sets, sets);
    ExactMatrix s(2, 2);
    s(0, 0) = ComplexRational(q(3));
    s(1, 0) = ComplexRational(q(0), q(4));
    const auto m = PosetFieldElement::generator(fam, 1, s);
    NormSequence seq;
    for (std::size_t i = 1; i <= k; ++i) {
        seq.sequence.push_back(i);
        seq.generators.push_back("b" + std::to_string(i));
    }
    seq.limit.assignment = Bits(k);
    seq.limit.assignment.set();
    const auto trace = norm_trace(m, p, seq);
    t.expect(trace.tail_deviation == 0 && trace.monotone_tail, "norm continuity along b_k");
    return t.done("100 samples, b_1..b_8 toward the corona point");
}

struct Criterion {
    int id;
    const char* name;
    double limit_seconds;
    std::function<Outcome()> run;
};

}  // namespace

int main() {
    const std::vector<Criterion> criteria{
        {1, "min-plus associativity", 5, min_plus_associativity},
        {2, "derived-metric identity", 5, derived_identity},
        {3, "TRO propagation bound", 10, tro_bound},
        {4, "decomposition exactness", 10, decomposition_exactness},
        {5, "factorization through the middle space", 10, factorization},
        {6, "finite poset topology", 30, topology_suite},
        {7, "noncompactness refuter", 2, noncompactness},
        {8, "corona functional", 5, corona_suite},
        {9, "projection stabilization", 5, projection_stabilization},
        {10, "orthogonalization and frames", 10, orthogonalization_and_frames},
        {11, "field axioms", 10, field_axioms},
    };
    int failed = 0;
    for (const auto& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("threw: ") + e.what()};
        }
        const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const bool in_time = seconds < c.limit_seconds;
        const bool pass = o.ok && in_time;
        if (!pass) ++failed;
        std::printf("[%s] %2d %s: %s; %.3f s (limit %.0f s%s)\n", pass ? "PASS" : "FAIL", c.id, c.name,
                    o.detail.c_str(), seconds, c.limit_seconds, in_time ? "" : ", exceeded");
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
