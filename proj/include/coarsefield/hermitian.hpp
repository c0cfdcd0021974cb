#pragma once

/**
 * @file hermitian.hpp
 * @brief Cyclic Jacobi eigensolver for small complex Hermitian matrices and
 *        the functional calculus built on it.
 */

#include "coarsefield/matrix.hpp"

#include <functional>
#include <vector>

namespace coarsefield {

struct EigenDecomposition {
    std::vector<double> values;  ///< ascending
    ComplexMatrix vectors;       ///< column k belongs to values[k]; A = V diag(values) V*
    int sweeps = 0;
    double off_norm = 0;         ///< off-diagonal Frobenius norm at exit
};

/// Cyclic sweeps in (p, q) row order until the off-diagonal norm falls below
/// tolerance * max(1, ||A||_F). Precondition error when A is not Hermitian.
EigenDecomposition hermitian_eigen(const ComplexMatrix& a, double tolerance = 1e-12);

/// V diag(f(lambda)) V*.
ComplexMatrix apply_function(const EigenDecomposition& e, const std::function<double(double)>& f);
ComplexMatrix functional_calculus(const ComplexMatrix& a, const std::function<double(double)>& f);

double frobenius_norm(const ComplexMatrix& m);
/// Largest singular value, via the eigenvalues of the smaller Gram matrix.
double operator_norm(const ComplexMatrix& m);

}  // namespace coarsefield
