#pragma once

#include <complex>
#include <stdexcept>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

namespace mrsim {

class SolverError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

using Triplets = std::vector<Eigen::Triplet<double>>;

/// Solve A x = b where A is given as (possibly duplicated) triplets.
/// Dense full-pivot LU for n <= 64, sparse LU above. Throws SolverError
/// when A is singular to working precision.
Eigen::VectorXd solve_linear(int n, const Triplets& entries, const Eigen::VectorXd& rhs);

/// Complex variant, same size policy; used by AC analysis.
Eigen::VectorXcd solve_linear_complex(int n,
                                      const std::vector<Eigen::Triplet<std::complex<double>>>& entries,
                                      const Eigen::VectorXcd& rhs);

}  // namespace mrsim
