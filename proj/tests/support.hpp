#pragma once

// Conversions from library values to the plain tables the oracles use.

#include "coarsefield/metric.hpp"
#include "coarsefield/roe.hpp"
#include "oracles.hpp"

namespace support {

inline coarsefield::Rational q(long n, long d = 1) { return coarsefield::make_rational(n, d); }

inline oracle::Table table(const coarsefield::RationalMatrix& m) {
    oracle::Table t(m.rows(), std::vector<coarsefield::Rational>(m.cols()));
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) t[i][j] = m(i, j);
    return t;
}

inline oracle::Table table(const coarsefield::FiniteMetricSpace& s) { return table(s.dist()); }

inline oracle::Table cross(const coarsefield::GluedMetric& d) { return table(d.cross()); }

inline oracle::Dense dense(const coarsefield::ExactOperator& op) {
    oracle::Dense r = oracle::zeros(op.codomain().size(), op.domain().size());
    for (const auto& [k, v] : op.entries()) r[k.first][k.second] = v;
    return r;
}

/// Points p0..p{n-1} with the given distance rows.
inline coarsefield::FiniteMetricSpace space(const std::string& prefix,
                                            std::vector<std::vector<long>> rows) {
    std::vector<std::string> ids;
    coarsefield::RationalMatrix d(rows.size(), rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        ids.push_back(prefix + std::to_string(i));
        for (std::size_t j = 0; j < rows.size(); ++j) d(i, j) = rows[i][j];
    }
    return coarsefield::FiniteMetricSpace::make(ids, d);
}

inline coarsefield::RationalMatrix matrix(std::vector<std::vector<long>> rows) {
    coarsefield::RationalMatrix m(rows.size(), rows.empty() ? 0 : rows[0].size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < rows[i].size(); ++j) m(i, j) = rows[i][j];
    return m;
}

}  // namespace support

#include "coarsefield/error.hpp"

#include <optional>

namespace support {

/// Kind of the library error thrown by f, if any.
template <class F>
std::optional<coarsefield::ErrorKind> error_kind(F&& f) {
    try {
        f();
    } catch (const coarsefield::Error& e) {
        return e.kind();
    }
    return std::nullopt;
}

}  // namespace support
