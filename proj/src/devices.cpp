#include "sramwb/devices.hpp"

#include <cmath>
#include <set>

#include "dual.hpp"
#include "sramwb/errors.hpp"
#include "sramwb/units.hpp"

namespace sramwb {

TechnologyParams TechnologyParams::defaults() { return derive_tech_params({}); }

// ---------------------------------------------------------------------------
// Technology derivation

namespace {

constexpr const char* kDeviceKeys[] = {"vth0", "gamma", "phi_f", "alpha", "kp",   "lambda", "n",
                                       "i0",   "avth",  "phi_ms", "q_b0", "q_ox", "q_i"};
constexpr const char* kGlobalKeys[] = {"t_ox", "eps_ox", "eps_si", "n_a", "temp"};

// Keys whose shared form is NMOS-referenced and flips sign for PMOS.
bool mirrored(const std::string& key) { return key == "vth0" || key == "gamma" || key == "phi_f"; }

DeviceParams default_device(Polarity pol) {
  const double s = pol == Polarity::Nmos ? 1.0 : -1.0;
  DeviceParams d;
  d.vth0 = 0.4 * s;
  d.gamma = 0.3 * s;
  d.phi_f = -0.35 * s;
  d.alpha = 5e6;  // alpha * L = 10 at L = 2 um
  d.kprime = pol == Polarity::Nmos ? 100e-6 : 40e-6;
  d.lambda = 0.05;
  d.n = 1.25;
  d.i0 = 1e-12;
  d.avth = 3e-9;  // 3 mV*um
  return d;
}

std::optional<double> lookup(const TechnologyInputs& raw, const std::string& key, Polarity pol) {
  const std::string own = key + (pol == Polarity::Nmos ? "_n" : "_p");
  if (auto it = raw.values.find(own); it != raw.values.end()) return it->second;
  if (auto it = raw.values.find(key); it != raw.values.end()) {
    return (pol == Polarity::Pmos && mirrored(key)) ? -it->second : it->second;
  }
  return std::nullopt;
}

}  // namespace

const std::vector<std::string>& technology_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> k;
    for (const char* key : kDeviceKeys) {
      k.emplace_back(key);
      k.push_back(std::string(key) + "_n");
      k.push_back(std::string(key) + "_p");
    }
    for (const char* key : kGlobalKeys) k.emplace_back(key);
    return k;
  }();
  return keys;
}

TechnologyParams derive_tech_params(const TechnologyInputs& raw) {
  const std::set<std::string> known(technology_keys().begin(), technology_keys().end());
  for (const auto& [key, value] : raw.values) {
    if (!known.count(key)) throw ConfigError("unknown technology key '" + key + "'");
  }
  auto global = [&](const char* key, double fallback) {
    auto it = raw.values.find(key);
    return it == raw.values.end() ? fallback : it->second;
  };

  TechnologyParams p;
  p.t_ox = global("t_ox", 20e-9);
  p.eps_ox = global("eps_ox", 3.5e-11);
  p.eps_si = global("eps_si", 1.04e-10);
  p.temperature = global("temp", 300.15);
  if (auto it = raw.values.find("n_a"); it != raw.values.end()) p.doping = it->second;

  if (!(p.t_ox > 0.0)) throw DomainError("oxide thickness t_ox must be positive");
  if (!(p.temperature > 0.0)) throw DomainError("temperature must be positive");
  p.c_ox = p.eps_ox / p.t_ox;

  for (Polarity pol : {Polarity::Nmos, Polarity::Pmos}) {
    DeviceParams d = default_device(pol);
    const double s = pol == Polarity::Nmos ? 1.0 : -1.0;
    auto set = [&](const char* key, double& field) {
      if (auto v = lookup(raw, key, pol)) field = *v;
    };
    set("phi_f", d.phi_f);
    set("alpha", d.alpha);
    set("kp", d.kprime);
    set("lambda", d.lambda);
    set("n", d.n);
    set("i0", d.i0);
    set("avth", d.avth);

    if (auto g = lookup(raw, "gamma", pol)) {
      d.gamma = *g;
    } else if (p.doping) {
      d.gamma = s * std::sqrt(2.0 * kElementaryCharge * p.eps_si * *p.doping) / p.c_ox;
    }

    if (auto v = lookup(raw, "vth0", pol)) {
      d.vth0 = *v;
    } else if (auto phi_ms = lookup(raw, "phi_ms", pol)) {
      if (auto q_b0 = lookup(raw, "q_b0", pol)) {
        const double q_ox = lookup(raw, "q_ox", pol).value_or(0.0);
        const double q_i = lookup(raw, "q_i", pol).value_or(0.0);
        d.vth0 = *phi_ms - 2.0 * d.phi_f - (*q_b0 + q_ox + q_i) / p.c_ox;
      }
    }

    if (d.n < 1.0) throw DomainError("subthreshold factor n must be >= 1");
    if (!(d.kprime > 0.0)) throw DomainError("process transconductance kp must be positive");
    p.device(pol) = d;
  }
  return p;
}

std::vector<std::string> describe(const TechnologyParams& p) {
  std::vector<std::string> lines;
  lines.push_back(std::string("tech model=") +
                  (p.model == ModelKind::Blended ? "blended" : "subthreshold") +
                  " temp=" + format_plain(p.temperature) + " t_ox=" + format_plain(p.t_ox) +
                  " eps_ox=" + format_plain(p.eps_ox) + " eps_si=" + format_plain(p.eps_si) +
                  " c_ox=" + format_plain(p.c_ox) +
                  (p.doping ? " n_a=" + format_plain(*p.doping) : std::string()));
  for (Polarity pol : {Polarity::Nmos, Polarity::Pmos}) {
    const auto& d = p.device(pol);
    lines.push_back(std::string("tech ") + (pol == Polarity::Nmos ? "nmos" : "pmos") +
                    " vth0=" + format_plain(d.vth0) + " gamma=" + format_plain(d.gamma) +
                    " phi_f=" + format_plain(d.phi_f) + " alpha=" + format_plain(d.alpha) +
                    " kp=" + format_plain(d.kprime) + " lambda=" + format_plain(d.lambda) +
                    " n=" + format_plain(d.n) + " i0=" + format_plain(d.i0) +
                    " avth=" + format_plain(d.avth));
  }
  return lines;
}

// ---------------------------------------------------------------------------
// Device equations

namespace {

using detail::value_of;
using std::abs, std::exp, std::expm1, std::log, std::sqrt;

template <class T>
T safe_sqrt_abs(const T& x) {
  T a = abs(x);
  if (value_of(a) < 1e-18) a = T(1e-18);
  return sqrt(a);
}

template <class T>
T threshold(const DeviceParams& p, double length, const T& vds, const T& vsb) {
  const double surface = -2.0 * p.phi_f;
  return p.vth0 + p.gamma * (safe_sqrt_abs(surface + vsb) - std::sqrt(std::abs(surface))) -
         vds * std::exp(-p.alpha * length);
}

template <class T>
T subthreshold(const DeviceParams& p, double beta, const T& vgs, const T& vds, const T& vth,
               double v_t) {
  const double nvt = p.n * v_t;
  // (1 - exp(-V_DS/v_T)) written with expm1 to stay accurate near V_DS = 0.
  return beta * p.i0 * exp((vgs - vth) / nvt) * (-expm1(-vds / v_t));
}

template <class T>
T square_law(const DeviceParams& p, double beta, const T& vov, const T& vds) {
  const T clm = 1.0 + p.lambda * vds;
  if (vds < vov) return p.kprime * beta * (vov * vds - 0.5 * vds * vds) * clm;
  return 0.5 * p.kprime * beta * vov * vov * clm;
}

// NMOS-frame current with V_DS >= 0.
template <class T>
T channel_current(const DeviceParams& p, double length, double width, const T& vgs, const T& vds,
                  const T& vsb, double v_t, ModelKind model) {
  const double beta = width / length;
  const T vth = threshold(p, length, vds, vsb);
  if (model == ModelKind::SubthresholdOnly) return subthreshold(p, beta, vgs, vds, vth, v_t);

  const T vov = vgs - vth;
  const double vov_top = 3.0 * p.n * v_t;
  if (value_of(vov) <= 0.0) return subthreshold(p, beta, vgs, vds, vth, v_t);
  if (value_of(vov) >= vov_top) return square_law(p, beta, vov, vds);

  // Geometric interpolation between the subthreshold current at V_th and the
  // square-law current at V_th + 3 n v_T. Both ends vanish linearly in V_DS,
  // so their ratio is formed analytically to stay finite at V_DS = 0.
  const T floor_current = beta * p.i0 * (-expm1(-vds / v_t));
  T ratio;
  if (value_of(vds) < vov_top) {
    const T x = vds / v_t;
    const T x_over = value_of(x) < 1e-6 ? T(1.0) + 0.5 * x : x / (-expm1(-x));
    const T g = (vov_top - 0.5 * vds) * (1.0 + p.lambda * vds);
    ratio = (p.kprime * v_t / p.i0) * g * x_over;
  } else {
    ratio = square_law(p, beta, T(vov_top), vds) / floor_current;
  }
  const T t = vov / vov_top;
  return floor_current * exp(t * log(ratio));
}

template <class T>
T drain_current(DeviceParams p, Polarity pol, double length, double width, T vd, T vg, T vs, T vb,
                double v_t, ModelKind model) {
  double sign = 1.0;
  if (pol == Polarity::Pmos) {
    vd = -vd;
    vg = -vg;
    vs = -vs;
    vb = -vb;
    p.vth0 = -p.vth0;
    p.gamma = -p.gamma;
    p.phi_f = -p.phi_f;
    sign = -1.0;
  }
  if (value_of(vd) >= value_of(vs))
    return sign * channel_current(p, length, width, vg - vs, vd - vs, vs - vb, v_t, model);
  return -sign * channel_current(p, length, width, vg - vd, vs - vd, vd - vb, v_t, model);
}

void require_geometry(double length, double width) {
  if (!(length > 0.0) || !(width > 0.0)) throw DomainError("device L and W must be positive");
}

}  // namespace

double threshold_voltage(const DeviceParams& p, const BiasPoint& b) {
  if (!(b.length > 0.0)) throw DomainError("device L must be positive");
  return threshold(p, b.length, b.vds, b.vsb);
}

double subthreshold_current(const DeviceParams& p, const BiasPoint& b, const ThermalContext& th) {
  require_geometry(b.length, b.width);
  const double vth = threshold(p, b.length, b.vds, b.vsb);
  return subthreshold(p, b.width / b.length, b.vgs, b.vds, vth, th.v_t);
}

double mos_current(const DeviceParams& p, Polarity pol, const BiasPoint& b,
                   const ThermalContext& th, ModelKind model) {
  require_geometry(b.length, b.width);
  // Source at 0 V: V_D = V_DS, V_G = V_GS, V_B = -V_SB.
  return drain_current<double>(p, pol, b.length, b.width, b.vds, b.vgs, 0.0, -b.vsb, th.v_t,
                               model);
}

SmallSignal small_signal(const DeviceParams& p, Polarity pol, const BiasPoint& b,
                         const ThermalContext& th, ModelKind model) {
  auto tc = terminal_current(p, pol, b.length, b.width, {b.vds, b.vgs, 0.0, -b.vsb}, th.v_t,
                             model);
  return {tc.id, tc.g[1], tc.g[0], tc.g[3]};
}

TerminalCurrent terminal_current(const DeviceParams& p, Polarity pol, double length, double width,
                                 const std::array<double, 4>& v, double v_t, ModelKind model,
                                 double vth_shift) {
  require_geometry(length, width);
  using D = detail::Dual<4>;
  DeviceParams shifted = p;
  shifted.vth0 += vth_shift;
  D i = drain_current<D>(shifted, pol, length, width, D::variable(v[0], 0), D::variable(v[1], 1),
                         D::variable(v[2], 2), D::variable(v[3], 3), v_t, model);
  return {i.v, i.d};
}

}  // namespace sramwb
