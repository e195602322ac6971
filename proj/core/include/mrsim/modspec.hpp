#pragma once

#include <Eigen/Dense>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace mrsim {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Raised when a device evaluation violates its contract (non-finite
/// output, inconsistent dimensions).
class ModelError : public std::runtime_error {
  public:
    explicit ModelError(const std::string& what) : std::runtime_error(what) {}
};

/// A declared limited variable: an affine combination of the device's
/// branch inputs x and internal unknowns y whose Newton proposals may be
/// damped by one of the classic limiter functions.
struct LimitedVarSpec {
    enum class Limiter { none, pnjlim, sinhlim };

    std::string name;
    Limiter limiter = Limiter::none;
    Vec x_coeff;  ///< size |x|
    Vec y_coeff;  ///< size |y|
    double k = 1.0;        ///< sinhlim slope
    double vt = 0.025852;  ///< pnjlim thermal voltage
    double xcrit = 0.5;    ///< pnjlim critical threshold

    [[nodiscard]] double expression(const Vec& x, const Vec& y) const {
        return x_coeff.dot(x) + y_coeff.dot(y);
    }
};

/// Outputs of one device evaluation.
///
/// fe/qe feed the explicit outputs z = d/dt qe + fe (KCL stamps); fi/qi
/// feed one implicit row per internal unknown, 0 = d/dt qi + fi. The
/// Jacobians are evaluated with any declared limited expression
/// substituted by the supplied value and chained back through the
/// expression's affine coefficients; dfe_dlim/dfi_dlim carry the raw
/// sensitivity to each substituted value so a solver can reconstruct the
/// companion-model residual correction.
struct EvalResult {
    Vec fe, qe, fi, qi;
    Mat dfe_dx, dfe_dy, dqe_dx, dqe_dy;
    Mat dfi_dx, dfi_dy, dqi_dx, dqi_dy;
    Mat dfe_dlim, dfi_dlim;
};

/// A device model: declared ports, internal unknowns, parameters, limited
/// variables, and the evaluation function. Evaluation is pure; there is no
/// internal state and no notion of time inside a device.
struct ModelDescriptor {
    std::string model;
    std::vector<std::string> x_names;  ///< branch inputs (voltages)
    std::vector<std::string> z_names;  ///< explicit outputs (currents)
    std::vector<std::string> y_names;  ///< internal unknowns
    std::vector<std::string> u_names;  ///< inputs (unused by shipped devices)
    std::vector<std::pair<std::string, double>> params;  ///< resolved values
    std::vector<LimitedVarSpec> limited;

    /// Core evaluation callback; lim_vals has one entry per declared
    /// limited variable and holds the substituted expression values.
    std::function<EvalResult(const Vec& x, const Vec& y, const Vec& u, const Vec& lim_vals)> eval_fn;

    [[nodiscard]] double param(const std::string& name) const;
};

/// Evaluate a descriptor with full contract checking. When lim_vals is
/// null the limited expressions are evaluated from (x, y), which makes the
/// substitution the identity. Throws ModelError naming the offending entry
/// if any output is non-finite or mis-sized.
EvalResult evaluate(const ModelDescriptor& d, const Vec& x, const Vec& y, const Vec& u,
                    const Vec* lim_vals = nullptr);

/// Evaluate the declared limited expressions at (x, y).
Vec limited_expressions(const ModelDescriptor& d, const Vec& x, const Vec& y);

/// Apply each declared limiter to the proposed expression values.
Vec limit_step(const ModelDescriptor& d, const Vec& proposed, const Vec& old_vals);

/// Compare the analytic Jacobians against central finite differences at
/// (x, y, u); returns the worst relative discrepancy.
double check_jacobians(const ModelDescriptor& d, const Vec& x, const Vec& y, const Vec& u);

}  // namespace mrsim
