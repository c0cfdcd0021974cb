#include "coarsefield/poset.hpp"
#include "coarsefield/random.hpp"

#include "oracles.hpp"
#include "support.hpp"

#include <doctest.h>

using namespace coarsefield;

namespace {

std::vector<std::string> ids(const FinitePoset& p, const Bits& b) {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < p.size(); ++i)
        if (b[i]) out.push_back(p.element(i));
    return out;
}

FinitePoset diamond() {
    return FinitePoset::from_relations({"0", "a", "b", "1"}, {{0, 1}, {0, 2}, {1, 3}, {2, 3}});
}

FinitePoset from_order(const oracle::Order& leq) {
    std::vector<std::string> names;
    for (std::size_t i = 0; i < leq.size(); ++i) names.push_back("q" + std::to_string(i));
    return FinitePoset::make(names, leq);
}

}  // namespace

TEST_SUITE("topology") {

TEST_CASE("subbase sets of small posets") {
    const auto chain = FinitePoset::chain(3);
    const auto u1 = make_clopen(chain, Term::upset(1)), v1 = make_clopen(chain, Term::lower(1));
    CHECK(ids(chain, u1.carrier) == std::vector<std::string>{"1", "2"});
    CHECK(ids(chain, v1.carrier) == std::vector<std::string>{"0"});
    CHECK(make_clopen(chain, Term::upset(0)).carrier.all());

    const auto d = diamond();
    const auto a = d.index_of("a");
    CHECK(ids(d, make_clopen(d, Term::upset(a)).carrier) == std::vector<std::string>{"a", "1"});
    CHECK(ids(d, make_clopen(d, Term::lower(a)).carrier) == std::vector<std::string>{"0", "b"});

    const auto sets = subbase_sets(d);
    REQUIRE(sets.size() == 2 * d.size());
    for (std::size_t i = 0; i + 1 < sets.size(); i += 2) CHECK((sets[i].carrier ^ sets[i + 1].carrier).all());
}

TEST_CASE("terms print and evaluate consistently") {
    const auto d = diamond();
    const Term t = intersection(Term::upset(1), complement(Term::upset(3)));
    CHECK(t.to_string(d) == "(U[a] & V[1])");
    CHECK(complement(t).to_string(d) == "~(U[a] & V[1])");
    CHECK(ids(d, t.evaluate(d)) == std::vector<std::string>{"a"});
    const auto s = make_clopen(d, t);
    CHECK((complement(d, s).carrier == ~s.carrier));
    CHECK(complement(d, s).term.evaluate(d) == ~s.carrier);
}

TEST_CASE("invalid orders are structural errors") {
    CHECK(support::error_kind([] {
              FinitePoset::make({"a", "b"}, {{true, true}, {true, true}});
          }) == ErrorKind::Structural);
    CHECK(support::error_kind([] {
              FinitePoset::make({"a", "b", "c"},
                                {{true, true, false}, {false, true, true}, {false, false, true}});
          }) == ErrorKind::Structural);
    CHECK(support::error_kind([] { FinitePoset::make({"a"}, {{false}}); }) == ErrorKind::Structural);
}

TEST_CASE("Hausdorff witnesses follow the case split") {
    const auto d = diamond();
    const auto a = d.index_of("a"), b = d.index_of("b");
    SUBCASE("incomparable") {
        const auto [u, v] = hausdorff_witness(d, a, b);
        CHECK(u.term.to_string(d) == "U[a]");
        CHECK(v.term.to_string(d) == "V[a]");
    }
    SUBCASE("a below b") {
        const auto [u, v] = hausdorff_witness(d, 0, a);
        CHECK(u.term.to_string(d) == "V[a]");
        CHECK(v.term.to_string(d) == "U[a]");
        CHECK(u.carrier[0]);
        CHECK(v.carrier[a]);
    }
    SUBCASE("chain pair (1, 0)") {
        const auto c = FinitePoset::chain(2);
        const auto [u, v] = hausdorff_witness(c, 1, 0);
        CHECK(ids(c, u.carrier) == std::vector<std::string>{"1"});
        CHECK(ids(c, v.carrier) == std::vector<std::string>{"0"});
    }
    CHECK(support::error_kind([&] { hausdorff_witness(d, a, a); }) == ErrorKind::Structural);
}

TEST_CASE("Hausdorff witnesses on random posets") {
    Rng rng(17);
    for (int round = 0; round < 200; ++round) {
        const auto p = random_poset(rng, uniform_int(rng, 2, 8), 0.1 * uniform_int(rng, 0, 8));
        for (std::size_t a = 0; a < p.size(); ++a)
            for (std::size_t b = 0; b < p.size(); ++b) {
                if (a == b) continue;
                const auto [u, v] = hausdorff_witness(p, a, b);
                CHECK(u.carrier[a]);
                CHECK(v.carrier[b]);
                CHECK_FALSE((u.carrier & v.carrier).any());
                CHECK(u.term.evaluate(p) == u.carrier);
            }
    }
}

TEST_CASE("Urysohn functions") {
    const auto chain = FinitePoset::chain(3);
    SUBCASE("empty closed set") {
        const auto r = urysohn_function(chain, Bits(3), 1);
        CHECK(r.set.term.to_string(chain) == "U[1]");
        CHECK(r.continuous);
    }
    SUBCASE("diamond, F = {0}, a = top") {
        const auto d = diamond();
        Bits f(4);
        f[0] = true;
        const auto r = urysohn_function(d, f, 3);
        CHECK(ids(d, r.set.carrier) == std::vector<std::string>{"1"});
    }
    SUBCASE("chain, F = {2}, a = 0") {
        Bits f(3);
        f[2] = true;
        const auto r = urysohn_function(chain, f, 0);
        CHECK(r.set.term.to_string(chain) == "V[1]");
        CHECK(ids(chain, r.set.carrier) == std::vector<std::string>{"0"});
    }
    SUBCASE("the point must lie outside F") {
        Bits f(3);
        f[0] = true;
        CHECK(support::error_kind([&] { urysohn_function(chain, f, 0); }) == ErrorKind::Precondition);
    }
}

TEST_CASE("Urysohn sets avoid F on random posets") {
    Rng rng(4);
    for (int round = 0; round < 100; ++round) {
        const auto p = random_poset(rng, uniform_int(rng, 2, 7));
        Bits f(p.size());
        for (std::size_t i = 0; i < p.size(); ++i) f[i] = uniform_int(rng, 0, 2) == 0;
        for (std::size_t a = 0; a < p.size(); ++a) {
            if (f[a]) continue;
            const auto r = urysohn_function(p, f, a);
            CHECK(r.set.carrier[a]);
            CHECK_FALSE((r.set.carrier & f).any());
            CHECK(r.continuous);
        }
    }
}

TEST_CASE("every finite poset is discrete, checked against the brute-force algebra") {
    for (std::size_t n = 1; n <= 4; ++n)
        for (const auto& order : oracle::posets_up_to_iso(n)) {
            const auto p = from_order(order);
            const auto alg = oracle::generated_algebra(order);
            for (std::size_t c = 0; c < n; ++c) {
                CHECK(alg.count(oracle::Subset(1) << c) == 1);
                const auto nb = minimal_neighbourhood(p, c);
                CHECK(nb.carrier.count() == 1);
                CHECK(nb.carrier[c]);
                CHECK(nb.term.evaluate(p) == nb.carrier);
                Bits single(n);
                single[c] = true;
                CHECK(is_open(p, single));
                CHECK(is_closed(p, single));
            }
        }
}

TEST_CASE("poset classes up to isomorphism") {
    const std::vector<std::size_t> expected = {1, 1, 2, 5, 16, 63};
    for (std::size_t n = 0; n <= 5; ++n) CHECK(oracle::posets_up_to_iso(n).size() == expected[n]);
}

TEST_CASE("subcover refutation") {
    const auto p = FinitePoset::antichain(5);
    SUBCASE("first two minimals") {
        CHECK(refute_subcover(p, {0, 1, 2, 3, 4}, {0, 1}) == std::optional<std::size_t>(2));
    }
    SUBCASE("all minimals cover") {
        CHECK_FALSE(refute_subcover(p, {0, 1, 2, 3, 4}, {0, 1, 2, 3, 4}));
    }
    SUBCASE("a non-minimal candidate covers no minimal element") {
        // c1..c5 minimal, b above c3 only.
        std::vector<std::string> names = {"c1", "c2", "c3", "c4", "c5", "b"};
        const auto q = FinitePoset::from_relations(names, {{2, 5}});
        CHECK(refute_subcover(q, {0, 1, 2, 3, 4}, {5}) == std::optional<std::size_t>(0));
        CHECK(support::error_kind([&] { refute_subcover(q, {5}, {}); }) == ErrorKind::Precondition);
    }
}

TEST_CASE("strict subsets of the minimals never cover") {
    Rng rng(23);
    for (int round = 0; round < 100; ++round) {
        const std::size_t m = uniform_int(rng, 1, 10);
        const auto p = FinitePoset::antichain(m);
        std::vector<std::size_t> all(m), cand;
        for (std::size_t i = 0; i < m; ++i) all[i] = i;
        for (std::size_t i = 0; i < m; ++i)
            if (uniform_int(rng, 0, 1)) cand.push_back(i);
        if (cand.size() == m) cand.pop_back();
        const auto missed = refute_subcover(p, all, cand);
        REQUIRE(missed);
        CHECK(std::find(cand.begin(), cand.end(), *missed) == cand.end());
    }
}

TEST_CASE("spectrum of the three-element chain") {
    const auto p = FinitePoset::chain(3);
    const auto s = gamma_spectrum(GeneratedAlgebra::from_poset(p, {0, 1, 2}, {0, 1, 2}));
    REQUIRE(s.points.size() == 3);
    for (const auto& pt : s.points) CHECK(pt.realized());
    CHECK(s.order == std::vector<std::vector<bool>>{{true, true, true}, {false, true, true}, {false, false, true}});
    CHECK(*s.smallest_element);
}

TEST_CASE("spectrum with a declared limit along the naturals") {
    const auto p = FinitePoset::chain(6);
    const auto alg = GeneratedAlgebra::from_poset(p, {0, 1, 2}, {0, 1, 2, 3, 4, 5});
    LimitWitness w{"n", {}, 2};
    for (int n = 0; n < 12; ++n) {
        Bits sig(3);
        for (int g = 0; g < 3; ++g) sig[g] = g <= n;
        w.sequence.push_back(sig);
    }
    const auto s = gamma_spectrum(alg, {w});
    REQUIRE(s.points.size() == 3);
    const auto& top = s.points.back();
    CHECK(top.assignment.all());
    CHECK(top.realized_by == std::vector<std::string>{"2", "3", "4", "5"});
    CHECK(top.limits == std::vector<std::string>{"n"});
}

TEST_CASE("limit witnesses are validated") {
    const auto p = FinitePoset::chain(3);
    const auto alg = GeneratedAlgebra::from_poset(p, {0, 1, 2}, {0, 1, 2});
    Bits bad(3);
    bad[2] = true;
    CHECK(support::error_kind([&] { gamma_spectrum(alg, {{"bad", {bad, bad}, 0}}); }) == ErrorKind::Structural);
    Bits one(3);
    one[0] = true;
    CHECK(support::error_kind([&] { gamma_spectrum(alg, {{"moving", {one, one.flip()}, 0}}); }) ==
          ErrorKind::Structural);
    CHECK(support::error_kind([&] { GeneratedAlgebra::from_poset(p, {2}, {0, 1}); }) == ErrorKind::Structural);
}

TEST_CASE("spectrum of every small poset is the poset, matching the atom oracle") {
    for (std::size_t n = 1; n <= 5; ++n)
        for (const auto& order : oracle::posets_up_to_iso(n)) {
            const auto p = from_order(order);
            std::vector<std::size_t> all(n);
            for (std::size_t i = 0; i < n; ++i) all[i] = i;
            const auto s = gamma_spectrum(GeneratedAlgebra::from_poset(p, all, all));
            CHECK(s.points.size() == oracle::atoms(oracle::generated_algebra(order)).size());
            REQUIRE(s.points.size() == n);
            for (std::size_t r = 0; r < n; ++r) {
                REQUIRE(s.points[r].realized_by.size() == 1);
                const auto a = p.index_of(s.points[r].realized_by[0]);
                for (std::size_t t = 0; t < n; ++t) {
                    const auto b = p.index_of(s.points[t].realized_by[0]);
                    CHECK(s.order[r][t] == p.leq(a, b));
                }
            }
        }
}

TEST_CASE("a partial universe merges elements with equal signatures") {
    const auto d = diamond();
    const auto alg = GeneratedAlgebra::from_poset(d, {1}, {0, 1, 2, 3});
    const auto atoms = alg.atoms();
    REQUIRE(atoms.size() == 2);
    CHECK(atoms[0].second == std::vector<std::string>{"0", "b"});
    CHECK(atoms[1].second == std::vector<std::string>{"a", "1"});
    CHECK(alg.fingerprint() == "generators=[a];universe=[0,a,b,1]");
}

TEST_CASE("Hasse diagram export") {
    const auto d = diamond();
    const std::string dot = hasse_dot(d, subbase_sets(d));
    CHECK(dot.find("digraph") != std::string::npos);
    CHECK(dot.find("n0 -> n1") != std::string::npos);
    CHECK(dot.find("n0 -> n3") == std::string::npos);
    CHECK(d.hasse_edges().size() == 4);
}

}
