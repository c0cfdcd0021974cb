#include "coarsefield/error.hpp"
#include "coarsefield/matrix.hpp"
#include "coarsefield/rational.hpp"

#include <sstream>

namespace coarsefield {

Rational make_rational(std::int64_t num, std::int64_t den) {
    if (den == 0) fail(ErrorKind::Structural, "rational with zero denominator");
    Rational q(static_cast<long>(num), static_cast<long>(den));
    q.canonicalize();
    return q;
}

std::string to_string(const Rational& q) { return q.get_str(); }

std::ostream& operator<<(std::ostream& os, const ComplexRational& z) {
    if (sgn(z.im) == 0) return os << z.re.get_str();
    return os << '(' << z.re.get_str() << (sgn(z.im) < 0 ? "-" : "+") << Rational(abs(z.im)).get_str()
              << "i)";
}

const char* to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::Structural: return "structural";
        case ErrorKind::Precondition: return "precondition";
        case ErrorKind::Rejected: return "rejected";
        case ErrorKind::Inconclusive: return "inconclusive";
        case ErrorKind::Internal: return "internal";
    }
    return "unknown";
}

int exit_code(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::Structural: return 2;
        case ErrorKind::Precondition: return 2;
        case ErrorKind::Rejected: return 1;
        case ErrorKind::Inconclusive: return 3;
        case ErrorKind::Internal: return 1;
    }
    return 2;
}

ComplexMatrix to_complex(const ExactMatrix& m) {
    ComplexMatrix r(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) r(i, j) = to_complex(m(i, j));
    return r;
}

namespace {

// Row-echelon reduction of flattened vectors; returns the pivot rows kept.
class Echelon {
public:
    explicit Echelon(std::size_t width) : width_(width) {}

    // Reduces v against the current basis; inserts it when independent.
    bool insert(std::vector<ComplexRational> v) {
        for (std::size_t r = 0; r < rows_.size(); ++r) {
            const std::size_t p = pivots_[r];
            if (v[p].is_zero()) continue;
            const ComplexRational factor = v[p];
            for (std::size_t j = p; j < width_; ++j) v[j] -= factor * rows_[r][j];
        }
        std::size_t p = 0;
        while (p < width_ && v[p].is_zero()) ++p;
        if (p == width_) return false;
        const ComplexRational lead = v[p];
        for (std::size_t j = p; j < width_; ++j) v[j] = v[j] / lead;
        // Keep the basis fully reduced so later insertions stay consistent.
        for (auto& row : rows_) {
            if (row[p].is_zero()) continue;
            const ComplexRational f = row[p];
            for (std::size_t j = p; j < width_; ++j) row[j] -= f * v[j];
        }
        rows_.push_back(std::move(v));
        pivots_.push_back(p);
        return true;
    }

    bool contains(std::vector<ComplexRational> v) const {
        for (std::size_t r = 0; r < rows_.size(); ++r) {
            const std::size_t p = pivots_[r];
            if (v[p].is_zero()) continue;
            const ComplexRational factor = v[p];
            for (std::size_t j = 0; j < width_; ++j) v[j] -= factor * rows_[r][j];
        }
        for (const auto& x : v)
            if (!x.is_zero()) return false;
        return true;
    }

    std::size_t rank() const { return rows_.size(); }

private:
    std::size_t width_;
    std::vector<std::vector<ComplexRational>> rows_;
    std::vector<std::size_t> pivots_;
};

std::size_t common_width(const std::vector<ExactMatrix>& vs, const ExactMatrix* extra) {
    std::size_t rows = 0, cols = 0;
    bool seen = false;
    auto check = [&](const ExactMatrix& m) {
        if (!seen) {
            rows = m.rows();
            cols = m.cols();
            seen = true;
        } else if (m.rows() != rows || m.cols() != cols) {
            fail(ErrorKind::Structural, "span computation over matrices of different shapes");
        }
    };
    for (const auto& v : vs) check(v);
    if (extra) check(*extra);
    return rows * cols;
}

}  // namespace

std::size_t exact_rank(const std::vector<ExactMatrix>& vectors) {
    Echelon e(common_width(vectors, nullptr));
    for (const auto& v : vectors) e.insert(v.data());
    return e.rank();
}

bool in_span(const std::vector<ExactMatrix>& spanning, const ExactMatrix& target) {
    Echelon e(common_width(spanning, &target));
    for (const auto& v : spanning) e.insert(v.data());
    return e.contains(target.data());
}

std::vector<ExactMatrix> independent_subset(const std::vector<ExactMatrix>& vectors) {
    std::vector<ExactMatrix> kept;
    if (vectors.empty()) return kept;
    Echelon e(common_width(vectors, nullptr));
    for (const auto& v : vectors)
        if (e.insert(v.data())) kept.push_back(v);
    return kept;
}

}  // namespace coarsefield
