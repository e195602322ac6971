#include "mrsim/linear_solver.hpp"

#include <cmath>

#include <Eigen/Dense>
#include <Eigen/SparseLU>

namespace mrsim {

namespace {

constexpr int kDenseLimit = 64;

template <typename Scalar>
Eigen::Vector<Scalar, Eigen::Dynamic> solve_impl(
    int n, const std::vector<Eigen::Triplet<Scalar>>& entries,
    const Eigen::Vector<Scalar, Eigen::Dynamic>& rhs) {
    if (n == 0) {
        return {};
    }
    if (n <= kDenseLimit) {
        Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> a =
            Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>::Zero(n, n);
        for (const auto& t : entries) {
            a(t.row(), t.col()) += t.value();
        }
        // Partial-pivot LU: extreme yet solvable conditioning (cosh blowups
        // during divergence) must not be misread as rank deficiency. A truly
        // singular matrix surfaces as a non-finite solve result.
        Eigen::PartialPivLU<Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>> lu(a);
        Eigen::Vector<Scalar, Eigen::Dynamic> x = lu.solve(rhs);
        if (!x.allFinite()) {
            throw SolverError("singular Jacobian (rcond " + std::to_string(lu.rcond()) + ")");
        }
        return x;
    }
    Eigen::SparseMatrix<Scalar> a(n, n);
    a.setFromTriplets(entries.begin(), entries.end());
    a.makeCompressed();
    Eigen::SparseLU<Eigen::SparseMatrix<Scalar>> lu;
    lu.analyzePattern(a);
    lu.factorize(a);
    if (lu.info() != Eigen::Success) {
        throw SolverError("singular Jacobian (sparse LU factorization failed)");
    }
    Eigen::Vector<Scalar, Eigen::Dynamic> x = lu.solve(rhs);
    if (!x.allFinite()) {
        throw SolverError("singular Jacobian (non-finite solve result)");
    }
    return x;
}

}  // namespace

Eigen::VectorXd solve_linear(int n, const Triplets& entries, const Eigen::VectorXd& rhs) {
    return solve_impl<double>(n, entries, rhs);
}

Eigen::VectorXcd solve_linear_complex(
    int n, const std::vector<Eigen::Triplet<std::complex<double>>>& entries,
    const Eigen::VectorXcd& rhs) {
    return solve_impl<std::complex<double>>(n, entries, rhs);
}

}  // namespace mrsim
