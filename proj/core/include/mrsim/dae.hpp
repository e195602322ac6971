#pragma once

#include <map>
#include <string>
#include <vector>

#include "mrsim/circuit.hpp"
#include "mrsim/linear_solver.hpp"
#include "mrsim/modspec.hpp"

namespace mrsim {

struct Tolerances {
    double reltol = 1e-6;
    double abstol_v = 1e-6;    ///< node voltages and internal unknowns
    double abstol_i = 1e-12;   ///< branch/inductor currents
    double residualtol = 1e-12;
    double gmin = 1e-12;
};

enum class UnknownKind { voltage, current, internal };

/// Instance compiled against the global unknown layout.
struct CompiledInstance {
    std::string name;
    std::string kind;
    ModelDescriptor model;
    int node_p = -1;  ///< global index of the + node voltage, -1 for ground
    int node_n = -1;
    std::vector<int> y_index;    ///< global index per internal unknown
    std::vector<int> lim_index;  ///< global limited-variable slot per model.limited entry
    SourceWaveform waveform;
    bool is_source = false;
    bool is_vsource = false;
};

/// Limited variable lifted to the global unknown vector:
/// expr(X) = sum of coeff * X[idx] over `expr`.
struct GlobalLimitedVar {
    int instance = 0;
    int local = 0;
    std::vector<std::pair<int, double>> expr;
};

struct EvalContext {
    double t = 0.0;
    /// DC semantics: sources contribute their dc value, not value(t).
    bool dc = false;
    /// Instance index -> value replacing the source waveform (dc sweeps, homotopy).
    const std::map<int, double>* source_overrides = nullptr;
};

/// One assembled evaluation: residual splits r = d/dt q + f.
struct EvalPoint {
    Vec f;
    Vec q;
    Triplets G;  ///< ∂f/∂X
    Triplets C;  ///< ∂q/∂X
    Mat df_dlim; ///< n x num_limited; companion-correction columns (limiting only)
};

/// Flattened MNA system over ModSpec devices. Unknown order: node voltages
/// by first appearance, then vsource branch currents, then remaining
/// internal unknowns in instance order. Row i is the equation paired with
/// unknown i (KCL for node voltages, fi/qi rows for the rest). Immutable
/// after assembly.
class DaeSystem {
  public:
    static DaeSystem assemble(const Circuit& circuit, const Tolerances& tol = {});

    [[nodiscard]] int size() const { return static_cast<int>(names_.size()); }
    [[nodiscard]] const std::vector<std::string>& unknown_names() const { return names_; }
    [[nodiscard]] UnknownKind unknown_kind(int i) const { return kinds_[i]; }
    [[nodiscard]] double abstol(int i) const;
    [[nodiscard]] const Tolerances& tolerances() const { return tol_; }

    [[nodiscard]] const std::vector<CompiledInstance>& instances() const { return instances_; }
    [[nodiscard]] int instance_index(const std::string& lowercase_name) const;
    [[nodiscard]] int unknown_index(const std::string& lowercase_name) const;

    [[nodiscard]] const std::vector<GlobalLimitedVar>& limited_vars() const { return limited_; }
    [[nodiscard]] int num_limited() const { return static_cast<int>(limited_.size()); }
    [[nodiscard]] Vec limited_exprs(const Vec& x) const;
    [[nodiscard]] Vec limit_step(const Vec& proposed, const Vec& old_vals) const;

    /// Evaluate device equations at x. When lim_vals is non-null its entries
    /// are substituted for the registered limited expressions and
    /// EvalPoint::df_dlim carries the correction columns.
    [[nodiscard]] EvalPoint eval(const Vec& x, const EvalContext& ctx,
                                 const Vec* lim_vals = nullptr) const;

    /// Source value at context time, honoring overrides.
    [[nodiscard]] double source_value(int instance, const EvalContext& ctx) const;

    /// Unit-excitation right-hand side for AC analysis of the given source.
    [[nodiscard]] Vec source_unit_vector(int instance) const;

  private:
    Tolerances tol_;
    std::vector<std::string> names_;
    std::vector<UnknownKind> kinds_;
    std::vector<CompiledInstance> instances_;
    std::vector<GlobalLimitedVar> limited_;
    std::map<std::string, int> name_to_unknown_;
    std::map<std::string, int> name_to_instance_;
};

}  // namespace mrsim
