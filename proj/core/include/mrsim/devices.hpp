#pragma once

#include <map>
#include <string>
#include <vector>

#include "mrsim/modspec.hpp"
#include "mrsim/smoothfuncs.hpp"

namespace mrsim {

inline constexpr double k_boltzmann = 1.380649e-23;   // J/K
inline constexpr double q_electron = 1.602176634e-19;  // C

/// Thermal voltage kT/q in volts.
[[nodiscard]] inline double thermal_voltage(double temp_kelvin) {
    return k_boltzmann * temp_kelvin / q_electron;
}

/// Tunable hysteretic two-terminal ("hys") model parameters.
struct HysParams {
    double r = 1.0;     ///< ohm
    double tau = 1e-6;  ///< state time constant, s
};

/// Filament-gap RRAM model parameters. Gap lengths are in nanometres.
struct RramParams {
    double i0 = 1e-3;     ///< A
    double g0 = 0.25;     ///< nm
    double v0 = 0.25;     ///< V
    double nu0 = 1e6;     ///< nm/s growth prefactor
    double ea = 0.6;      ///< eV
    double a0 = 0.25;     ///< nm
    double tox = 12.0;    ///< nm
    double gamma0 = 16.0;
    double beta = 1.25;   ///< 1/nm^3
    double temp = 300.0;  ///< K
    double min_gap = 0.0;
    double max_gap = 1.7;
    double kclip = 200.0;
    double smoothing = 1e-8;
    double maxslope = 1e15;

    [[nodiscard]] double vt() const { return thermal_voltage(temp); }
};

/// Parameters for the switchable memristor family: five I-V variants
/// (f1_switch) by six state-equation variants (f2_switch), state s
/// normalized to [0, 1] with s = 1 the low-resistance end.
struct MemristorParams {
    int f1_switch = 1;
    int f2_switch = 1;

    // f1 variant 1 (ion drift) and shared resistances
    double ron = 100.0;
    double roff = 1e4;
    // f1 variant 2 (exponential conductance)
    double lambda = 4.6052;
    // f1 variant 3 (polynomial-sinh)
    double n = 2.0;
    double beta = 1e-3;
    double alpha = 2.0;
    double chi = 1e-4;
    double gammai = 2.0;
    // f1 variant 4 (threshold sinh)
    double a1 = 2e-3;
    double a2 = 1e-3;
    double b = 2.0;
    // f1 variant 5 (filament gap I-V)
    double i0 = 1e-3;
    double g0 = 0.25;
    double v0 = 0.25;
    // f2 variant 1 (linear ion drift rate)
    double mu_v = 0.01;
    // f2 variant 2 (monomial rate)
    double a = 1.0;
    double m = 3.0;
    // f2 variant 3 (Simmons tunnel barrier rate)
    double c_off = 1e-5;
    double c_on = 1e-5;
    double i_off = 0.1;
    double i_on = 0.1;
    double a_off = 0.2;
    double a_on = 0.8;
    double w_c = 0.1;
    double ib = 0.5;
    // f2 variant 4 (threshold polynomial rate)
    double k_off = 0.1;
    double k_on = -0.1;
    double v_off = 0.5;
    double v_on = -0.5;
    double alpha_off = 3.0;
    double alpha_on = 3.0;
    // f2 variant 5 (threshold exponential rate)
    double ap = 1.0;
    double an = 1.0;
    double vp = 0.3;
    double vn = 0.3;
    // f2 variant 6 (gap growth rate mapped onto s)
    double nu0 = 1e4;
    double ea = 0.6;
    double a0 = 0.25;
    double tox = 12.0;
    double gamma0 = 16.0;
    double beta0 = 1.25;
    double temp = 300.0;

    double min_gap = 0.0;
    double max_gap = 1.7;
    double kclip = 200.0;
    double smoothing = 1e-8;
    double maxslope = 1e15;

    [[nodiscard]] double vt() const { return thermal_voltage(temp); }
};

/// hys branch current: (v/R)*(tanh s + 1).
Dual2 hys_f1(const Dual2& v, const Dual2& s, const HysParams& p);

/// hys state rate: (v - s^3 + s)/tau.
Dual2 hys_f2(const Dual2& v, const Dual2& s, const HysParams& p);

/// RRAM tunneling current.
Dual2 rram_f1(const Dual2& vtb, const Dual2& gap, const RramParams& p);

/// RRAM gap growth rate (unclipped), nm/s.
Dual2 rram_f2(const Dual2& vtb, const Dual2& gap, const RramParams& p);

/// RRAM gap growth rate with boundary clipping.
Dual2 rram_f2_star(const Dual2& vtb, const Dual2& gap, const RramParams& p);

/// Blend a raw state rate with boundary clipping terms that force the
/// rate positive below `lo` and negative above `hi`.
Dual2 clip_state_rate(const Dual2& f2, const Dual2& state, double lo, double hi, double kclip,
                      double smoothing, double maxslope);

/// Memristor I-V, selected by p.f1_switch.
Dual2 memristor_f1(const Dual2& vpn, const Dual2& s, const MemristorParams& p);

/// Memristor state rate before clipping, selected by p.f2_switch.
Dual2 memristor_f2(const Dual2& vpn, const Dual2& s, const MemristorParams& p);

/// Memristor state rate with [0, 1] boundary clipping.
Dual2 memristor_f2_star(const Dual2& vpn, const Dual2& s, const MemristorParams& p);

/// One parameter of a device kind.
struct DeviceParamInfo {
    std::string name;
    double default_value = 0.0;
    std::string description;
};

/// Registry entry describing one supported device kind.
struct DeviceInfo {
    std::string kind;
    std::string description;
    std::vector<DeviceParamInfo> params;
    bool is_source = false;
};

/// All supported device kinds in registry order.
const std::vector<DeviceInfo>& device_registry();

/// Look up a registry entry; null when the kind is unknown.
const DeviceInfo* find_device_info(const std::string& kind);

/// Build a descriptor for `kind` with parameter overrides applied on top
/// of the registry defaults. Throws std::invalid_argument for unknown
/// kinds, unknown parameter names, or invalid parameter values.
ModelDescriptor build_device(const std::string& kind, const std::map<std::string, double>& overrides);

}  // namespace mrsim
