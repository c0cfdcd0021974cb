#include "coarsefield/hermitian.hpp"

#include "coarsefield/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace coarsefield {

namespace {

using cd = std::complex<double>;

double off_diagonal_norm(const ComplexMatrix& a) {
    double s = 0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            if (i != j) s += std::norm(a(i, j));
    return std::sqrt(s);
}

// Annihilates a(p, q) with the unitary G = phase * rotation acting on columns p, q.
void rotate(ComplexMatrix& a, ComplexMatrix& v, std::size_t p, std::size_t q) {
    const double mag = std::abs(a(p, q));
    if (mag == 0) return;
    const cd w_bar = std::conj(a(p, q)) / mag;
    const double app = a(p, p).real(), aqq = a(q, q).real();
    const double theta = (aqq - app) / (2 * mag);
    const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1));
    const double c = 1 / std::sqrt(t * t + 1), s = t * c;
    const cd gpp = c, gpq = s, gqp = -s * w_bar, gqq = c * w_bar;

    const std::size_t n = a.rows();
    for (std::size_t k = 0; k < n; ++k) {
        const cd akp = a(k, p), akq = a(k, q);
        a(k, p) = akp * gpp + akq * gqp;
        a(k, q) = akp * gpq + akq * gqq;
        const cd vkp = v(k, p), vkq = v(k, q);
        v(k, p) = vkp * gpp + vkq * gqp;
        v(k, q) = vkp * gpq + vkq * gqq;
    }
    for (std::size_t k = 0; k < n; ++k) {
        const cd apk = a(p, k), aqk = a(q, k);
        a(p, k) = std::conj(gpp) * apk + std::conj(gqp) * aqk;
        a(q, k) = std::conj(gpq) * apk + std::conj(gqq) * aqk;
    }
    a(p, q) = a(q, p) = 0;
    a(p, p) = a(p, p).real();
    a(q, q) = a(q, q).real();
}

}  // namespace

double frobenius_norm(const ComplexMatrix& m) {
    double s = 0;
    for (const auto& z : m.data()) s += std::norm(z);
    return std::sqrt(s);
}

EigenDecomposition hermitian_eigen(const ComplexMatrix& input, double tolerance) {
    if (input.rows() != input.cols()) fail(ErrorKind::Structural, "eigensolver needs a square matrix");
    const std::size_t n = input.rows();
    const double scale = std::max(1.0, frobenius_norm(input));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (std::abs(input(i, j) - std::conj(input(j, i))) > 1e-10 * scale)
                fail(ErrorKind::Precondition, "matrix is not Hermitian");

    ComplexMatrix a = input;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) a(j, i) = std::conj(a(i, j));
    for (std::size_t i = 0; i < n; ++i) a(i, i) = a(i, i).real();
    ComplexMatrix v = ComplexMatrix::identity(n);

    EigenDecomposition e;
    const double target = tolerance * scale;
    while ((e.off_norm = off_diagonal_norm(a)) > target) {
        if (++e.sweeps > 100) fail(ErrorKind::Internal, "Jacobi iteration did not converge");
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) rotate(a, v, p, q);
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return a(i, i).real() < a(j, j).real(); });
    e.vectors = ComplexMatrix(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        e.values.push_back(a(order[k], order[k]).real());
        for (std::size_t i = 0; i < n; ++i) e.vectors(i, k) = v(i, order[k]);
    }
    return e;
}

ComplexMatrix apply_function(const EigenDecomposition& e, const std::function<double(double)>& f) {
    const std::size_t n = e.values.size();
    ComplexMatrix scaled = e.vectors;
    for (std::size_t k = 0; k < n; ++k) {
        const double fk = f(e.values[k]);
        for (std::size_t i = 0; i < n; ++i) scaled(i, k) *= fk;
    }
    return scaled * e.vectors.adjoint();
}

ComplexMatrix functional_calculus(const ComplexMatrix& a, const std::function<double(double)>& f) {
    return apply_function(hermitian_eigen(a), f);
}

double operator_norm(const ComplexMatrix& m) {
    const double fro = frobenius_norm(m);
    if (fro == 0) return 0;
    // Normalise first so the absolute eigensolver tolerance is relative to ||m||.
    const ComplexMatrix u = cd(1 / fro) * m;
    const ComplexMatrix gram = u.rows() <= u.cols() ? u * u.adjoint() : u.adjoint() * u;
    const auto e = hermitian_eigen(gram);
    return fro * std::sqrt(std::max(0.0, e.values.back()));
}

}  // namespace coarsefield
