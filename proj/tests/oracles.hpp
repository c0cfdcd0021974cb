#pragma once

// Brute-force reference computations. Nothing here calls into the library's
// algorithms; only the scalar types and plain containers are shared.

#include "coarsefield/rational.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <vector>

namespace oracle {

using coarsefield::ComplexRational;
using coarsefield::Rational;
using Table = std::vector<std::vector<Rational>>;

// --- metrics ---------------------------------------------------------------

/// Full distance table of X ⊔ Y: X indices first.
inline Table combined(const Table& dx, const Table& dy, const Table& cross) {
    const std::size_t n = dx.size(), m = dy.size();
    Table t(n + m, std::vector<Rational>(n + m));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) t[i][j] = dx[i][j];
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) t[n + i][n + j] = dy[i][j];
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < m; ++j) t[i][n + j] = t[n + j][i] = cross[i][j];
    return t;
}

inline bool is_metric(const Table& d) {
    const std::size_t n = d.size();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (d[i][j] != d[j][i]) return false;
            if ((i == j) != (d[i][j] == 0)) return false;
            if (d[i][j] < 0) return false;
            for (std::size_t k = 0; k < n; ++k)
                if (d[i][k] > d[i][j] + d[j][k]) return false;
        }
    return true;
}

/// (x, z) -> min over y of a[x][y] + b[y][z].
inline Table min_plus(const Table& a, const Table& b) {
    Table r(a.size(), std::vector<Rational>(b.empty() ? 0 : b[0].size()));
    for (std::size_t x = 0; x < a.size(); ++x)
        for (std::size_t z = 0; z < r[x].size(); ++z) {
            std::optional<Rational> best;
            for (std::size_t y = 0; y < b.size(); ++y) {
                Rational v = a[x][y] + b[y][z];
                if (!best || v < *best) best = v;
            }
            r[x][z] = *best;
        }
    return r;
}

/// d^r(x1, x2) = min over y of d(x1, y) + d(x2, y).
inline Table right_derived(const Table& cross) {
    Table r(cross.size(), std::vector<Rational>(cross.size()));
    for (std::size_t a = 0; a < cross.size(); ++a)
        for (std::size_t b = 0; b < cross.size(); ++b) {
            std::optional<Rational> best;
            for (std::size_t y = 0; y < cross[a].size(); ++y) {
                Rational v = cross[a][y] + cross[b][y];
                if (!best || v < *best) best = v;
            }
            r[a][b] = *best;
        }
    return r;
}

// --- dense exact complex matrices -------------------------------------------

using Dense = std::vector<std::vector<ComplexRational>>;

inline Dense zeros(std::size_t r, std::size_t c) { return Dense(r, std::vector<ComplexRational>(c)); }

inline Dense multiply(const Dense& a, const Dense& b) {
    Dense r = zeros(a.size(), b.empty() ? 0 : b[0].size());
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < r[i].size(); ++j)
            for (std::size_t k = 0; k < b.size(); ++k) r[i][j] += a[i][k] * b[k][j];
    return r;
}

inline Dense add(Dense a, const Dense& b) {
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < a[i].size(); ++j) a[i][j] += b[i][j];
    return a;
}

inline Dense adjoint(const Dense& a) {
    Dense r = zeros(a.empty() ? 0 : a[0].size(), a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < a[i].size(); ++j) r[j][i] = {a[i][j].re, -a[i][j].im};
    return r;
}

/// Largest cross[x][y] over the non-zero entries (row y, column x); 0 when empty.
inline Rational propagation(const Dense& op, const Table& cross) {
    Rational best = 0;
    for (std::size_t y = 0; y < op.size(); ++y)
        for (std::size_t x = 0; x < op[y].size(); ++x)
            if (!op[y][x].is_zero() && cross[x][y] > best) best = cross[x][y];
    return best;
}

// --- posets -----------------------------------------------------------------

/// Reflexive order as adjacency rows leq[a][b].
using Order = std::vector<std::vector<bool>>;

/// All posets on n points up to isomorphism, as canonical (lexicographically
/// least over relabellings) order matrices. Every finite poset has a natural
/// labelling, so closing upper-triangular relations covers all classes.
inline std::vector<Order> posets_up_to_iso(std::size_t n) {
    std::vector<std::pair<std::size_t, std::size_t>> slots;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) slots.push_back({i, j});
    std::set<std::vector<bool>> seen;
    std::vector<Order> out;
    std::vector<std::size_t> perm(n);
    for (std::uint32_t mask = 0; mask < (1u << slots.size()); ++mask) {
        Order leq(n, std::vector<bool>(n, false));
        for (std::size_t i = 0; i < n; ++i) leq[i][i] = true;
        for (std::size_t s = 0; s < slots.size(); ++s)
            if (mask >> s & 1) leq[slots[s].first][slots[s].second] = true;
        bool transitive = true;
        for (std::size_t a = 0; a < n && transitive; ++a)
            for (std::size_t b = 0; b < n && transitive; ++b)
                for (std::size_t c = 0; c < n && transitive; ++c)
                    if (leq[a][b] && leq[b][c] && !leq[a][c]) transitive = false;
        if (!transitive) continue;
        std::iota(perm.begin(), perm.end(), 0);
        std::optional<std::vector<bool>> best;
        do {
            std::vector<bool> key;
            for (std::size_t a = 0; a < n; ++a)
                for (std::size_t b = 0; b < n; ++b) key.push_back(leq[perm[a]][perm[b]]);
            if (!best || key < *best) best = key;
        } while (std::next_permutation(perm.begin(), perm.end()));
        if (seen.insert(*best).second) {
            Order canon(n, std::vector<bool>(n));
            for (std::size_t a = 0; a < n; ++a)
                for (std::size_t b = 0; b < n; ++b) canon[a][b] = (*best)[a * n + b];
            out.push_back(canon);
        }
    }
    return out;
}

using Subset = std::uint32_t;

/// Every set in the Boolean algebra generated by the upsets {b : a <= b}
/// and their complements (the whole algebra, by closure under the
/// operations; sizes stay tiny at desk scale).
inline std::set<Subset> generated_algebra(const Order& leq) {
    const std::size_t n = leq.size();
    const Subset full = n == 32 ? ~Subset(0) : (Subset(1) << n) - 1;
    std::set<Subset> alg = {0, full};
    for (std::size_t a = 0; a < n; ++a) {
        Subset up = 0;
        for (std::size_t b = 0; b < n; ++b)
            if (leq[a][b]) up |= Subset(1) << b;
        alg.insert(up);
        alg.insert(full & ~up);
    }
    for (bool grew = true; grew;) {
        grew = false;
        std::vector<Subset> cur(alg.begin(), alg.end());
        for (auto s : cur)
            for (auto t : cur)
                for (Subset u : {Subset(s & t), Subset(s | t), Subset(full & ~s)})
                    if (alg.insert(u).second) grew = true;
    }
    return alg;
}

/// Atoms of a finite Boolean algebra of subsets.
inline std::vector<Subset> atoms(const std::set<Subset>& alg) {
    std::vector<Subset> out;
    for (auto s : alg) {
        if (s == 0) continue;
        bool minimal = true;
        for (auto t : alg)
            if (t != 0 && t != s && (t & s) == t) minimal = false;
        if (minimal) out.push_back(s);
    }
    return out;
}

}  // namespace oracle
