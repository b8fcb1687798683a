#include <algorithm>
#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "thermistor/error.hpp"
#include "thermistor/experiments.hpp"
#include "thermistor/random.hpp"

namespace thermistor {

namespace {

[[noreturn]] void config_error(const std::string& what) { throw Error(ErrorCode::ConfigError, what); }

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

double to_double(const std::string& where, const std::string& text) {
  double v = 0.0;
  const auto t = trim(text);
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty())
    config_error(where + ": expected a number, got '" + text + "'");
  return v;
}

long long to_integer(const std::string& where, const std::string& text) {
  long long v = 0;
  const auto t = trim(text);
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty())
    config_error(where + ": expected an integer, got '" + text + "'");
  return v;
}

std::uint64_t to_unsigned(const std::string& where, const std::string& text) {
  std::uint64_t v = 0;
  const auto t = trim(text);
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty())
    config_error(where + ": expected a nonnegative integer, got '" + text + "'");
  return v;
}

bool to_bool(const std::string& where, const std::string& text) {
  const auto t = trim(text);
  if (t == "true" || t == "1" || t == "yes" || t == "on") return true;
  if (t == "false" || t == "0" || t == "no" || t == "off") return false;
  config_error(where + ": expected true or false, got '" + text + "'");
}

std::vector<double> to_list(const std::string& where, const std::string& text) {
  std::vector<double> out;
  std::istringstream in(text);
  std::string tok;
  while (in >> tok) out.push_back(to_double(where, tok));
  if (out.empty()) config_error(where + ": expected a whitespace-separated list of numbers");
  return out;
}

std::string list_text(const std::vector<double>& v) {
  std::string out;
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (k) out += ' ';
    out += format_number(v[k]);
  }
  return out;
}

template <class E>
E to_enum(const std::string& where, const std::string& text, std::initializer_list<E> options) {
  const auto t = trim(text);
  for (E e : options)
    if (t == to_string(e)) return e;
  std::string known;
  for (E e : options) known += std::string(known.empty() ? "" : ", ") + to_string(e);
  config_error(where + ": unknown value '" + t + "' (expected one of " + known + ")");
}

const std::initializer_list<InitialFamily> kInitialFamilies{
    InitialFamily::zero, InitialFamily::constant, InitialFamily::sine,
    InitialFamily::bump, InitialFamily::fourier,  InitialFamily::step};

struct Binding {
  std::string section;
  std::string key;
  std::function<void(ExperimentConfig&, const std::string& where, const std::string&)> set;
  // Returns nullopt for unset optional keys, which are not rendered.
  std::function<std::optional<std::string>(const ExperimentConfig&)> get;
};

template <class Member>
Binding number(std::string section, std::string key, Member member) {
  return {std::move(section), std::move(key),
          [member](ExperimentConfig& c, const std::string& w, const std::string& v) {
            member(c) = to_double(w, v);
          },
          [member](const ExperimentConfig& c) -> std::optional<std::string> {
            return format_number(member(c));
          }};
}

template <class Member>
Binding optional_number(std::string section, std::string key, Member member) {
  return {std::move(section), std::move(key),
          [member](ExperimentConfig& c, const std::string& w, const std::string& v) {
            member(c) = to_double(w, v);
          },
          [member](const ExperimentConfig& c) -> std::optional<std::string> {
            const auto& value = member(c);
            if (!value) return std::nullopt;
            return format_number(*value);
          }};
}

template <class Member>
Binding integer(std::string section, std::string key, Member member) {
  return {std::move(section), std::move(key),
          [member](ExperimentConfig& c, const std::string& w, const std::string& v) {
            using T = std::remove_reference_t<decltype(member(c))>;
            if constexpr (std::is_unsigned_v<T>) {
              member(c) = static_cast<T>(to_unsigned(w, v));
            } else {
              member(c) = static_cast<T>(to_integer(w, v));
            }
          },
          [member](const ExperimentConfig& c) -> std::optional<std::string> {
            return std::to_string(member(c));
          }};
}

template <class Member>
Binding boolean(std::string section, std::string key, Member member) {
  return {std::move(section), std::move(key),
          [member](ExperimentConfig& c, const std::string& w, const std::string& v) {
            member(c) = to_bool(w, v);
          },
          [member](const ExperimentConfig& c) -> std::optional<std::string> {
            return member(c) ? "true" : "false";
          }};
}

template <class Member>
Binding list(std::string section, std::string key, Member member) {
  return {std::move(section), std::move(key),
          [member](ExperimentConfig& c, const std::string& w, const std::string& v) {
            member(c) = to_list(w, v);
          },
          [member](const ExperimentConfig& c) -> std::optional<std::string> {
            return list_text(member(c));
          }};
}

template <class E, class Member>
Binding enumeration(std::string section, std::string key, Member member,
                    std::initializer_list<E> options) {
  std::vector<E> opts(options);
  return {std::move(section), std::move(key),
          [member, opts](ExperimentConfig& c, const std::string& w, const std::string& v) {
            const auto t = trim(v);
            for (E e : opts)
              if (t == to_string(e)) {
                member(c) = e;
                return;
              }
            std::string known;
            for (E e : opts) known += std::string(known.empty() ? "" : ", ") + to_string(e);
            config_error(w + ": unknown value '" + t + "' (expected one of " + known + ")");
          },
          [member](const ExperimentConfig& c) -> std::optional<std::string> {
            return std::string(to_string(member(c)));
          }};
}

#define M(expr) [](auto& c) -> auto& { return expr; }

const std::vector<Binding>& bindings() {
  static const std::vector<Binding> table = [] {
    std::vector<Binding> b;
    b.push_back(number("problem", "m", M(c.problem.m)));
    b.push_back(optional_number("problem", "kappa", M(c.problem.kappa)));
    b.push_back(optional_number("problem", "current_I", M(c.problem.current_I)));
    b.push_back(optional_number("problem", "area_B", M(c.problem.area_B)));
    b.push_back(number("problem", "horizon", M(c.problem.horizon)));
    b.push_back(number("problem", "reg_r", M(c.problem.reg_r)));
    b.push_back(boolean("problem", "mms", M(c.problem.mms)));
    b.push_back(number("problem", "mms_amplitude", M(c.problem.mms_amplitude)));

    b.push_back(integer("domain", "dim", M(c.domain.dim)));
    b.push_back(number("domain", "length_x", M(c.domain.length_x)));
    b.push_back(number("domain", "length_y", M(c.domain.length_y)));
    b.push_back(integer("domain", "cells_x", M(c.domain.cells_x)));
    b.push_back(integer("domain", "cells_y", M(c.domain.cells_y)));

    b.push_back(enumeration("material", "family", M(c.material.family),
                            {MaterialFamily::identity, MaterialFamily::smoothed_piecewise,
                             MaterialFamily::cubic_affine}));
    b.push_back(number("material", "slope_low", M(c.material.slope_low)));
    b.push_back(number("material", "slope_high", M(c.material.slope_high)));
    b.push_back(number("material", "center", M(c.material.center)));
    b.push_back(number("material", "width", M(c.material.width)));
    b.push_back(number("material", "linear", M(c.material.linear)));
    b.push_back(number("material", "cubic", M(c.material.cubic)));
    b.push_back(number("material", "knot", M(c.material.knot)));

    b.push_back(enumeration("source", "family", M(c.source.family),
                            {SourceFamily::constant_floor, SourceFamily::gaussian_bump}));
    b.push_back(number("source", "sigma", M(c.source.sigma)));
    b.push_back(number("source", "amplitude", M(c.source.amplitude)));
    b.push_back(number("source", "center", M(c.source.center)));
    b.push_back(number("source", "width", M(c.source.width)));

    b.push_back(enumeration("initial", "family", M(c.initial.family), kInitialFamilies));
    b.push_back(number("initial", "amplitude", M(c.initial.amplitude)));
    b.push_back(number("initial", "center", M(c.initial.center)));
    b.push_back(number("initial", "width", M(c.initial.width)));
    b.push_back(integer("initial", "modes", M(c.initial.modes)));
    b.push_back(boolean("initial", "mollify", M(c.initial.mollify)));

    b.push_back(number("stepper", "dt", M(c.stepper.dt)));
    b.push_back(number("stepper", "newton_tol", M(c.stepper.newton_tol)));
    b.push_back(integer("stepper", "newton_max_iters", M(c.stepper.newton_max_iters)));
    b.push_back(integer("stepper", "picard_max_iters", M(c.stepper.picard_max_iters)));
    b.push_back(number("stepper", "picard_tol", M(c.stepper.picard_tol)));
    b.push_back(integer("stepper", "dt_halving_max", M(c.stepper.dt_halving_max)));
    b.push_back(enumeration("stepper", "jacobian", M(c.stepper.jacobian),
                            {JacobianMode::face_normal, JacobianMode::lagged}));

    b.push_back(integer("record", "count", M(c.record_count)));

    b.push_back(integer("ensemble", "count", M(c.ensemble.count)));
    b.push_back(enumeration("ensemble", "family", M(c.ensemble.family), kInitialFamilies));
    b.push_back(number("ensemble", "amplitude_min", M(c.ensemble.amplitude_min)));
    b.push_back(number("ensemble", "amplitude_max", M(c.ensemble.amplitude_max)));
    b.push_back(integer("ensemble", "modes", M(c.ensemble.modes)));
    b.push_back(integer("ensemble", "seed", M(c.seed)));

    b.push_back(integer("mms", "levels", M(c.mms.levels)));
    b.push_back(number("mms", "dt_coarse", M(c.mms.dt_coarse)));
    b.push_back(integer("mms", "temporal_cells", M(c.mms.temporal_cells)));
    b.push_back(integer("mms", "cells_coarse", M(c.mms.cells_coarse)));
    b.push_back(number("mms", "dt_h2_factor", M(c.mms.dt_h2_factor)));
    b.push_back(number("mms", "spatial_horizon", M(c.mms.spatial_horizon)));
    b.push_back(number("mms", "min_temporal_order", M(c.mms.min_temporal_order)));
    b.push_back(number("mms", "min_spatial_order", M(c.mms.min_spatial_order)));

    b.push_back(list("reg-sweep", "r_values", M(c.reg_sweep.r_values)));
    b.push_back(number("reg-sweep", "sup_tolerance", M(c.reg_sweep.sup_tolerance)));
    b.push_back(number("reg-sweep", "bound_slack", M(c.reg_sweep.bound_slack)));
    b.push_back(number("reg-sweep", "energy_factor", M(c.reg_sweep.energy_factor)));

    b.push_back(number("uniqueness", "offset", M(c.uniqueness.offset)));
    b.push_back(number("uniqueness", "tolerance_factor", M(c.uniqueness.tolerance_factor)));

    b.push_back(list("absorbing", "amplitudes", M(c.absorbing.amplitudes)));
    b.push_back(number("absorbing", "eta", M(c.absorbing.eta)));
    b.push_back(number("absorbing", "fit_fraction", M(c.absorbing.fit_fraction)));

    b.push_back(integer("attractor", "count", M(c.attractor.count)));
    b.push_back(enumeration("attractor", "family_a", M(c.attractor.family_a), kInitialFamilies));
    b.push_back(number("attractor", "amplitude_a_min", M(c.attractor.amplitude_a_min)));
    b.push_back(number("attractor", "amplitude_a_max", M(c.attractor.amplitude_a_max)));
    b.push_back(enumeration("attractor", "family_b", M(c.attractor.family_b), kInitialFamilies));
    b.push_back(number("attractor", "amplitude_b_min", M(c.attractor.amplitude_b_min)));
    b.push_back(number("attractor", "amplitude_b_max", M(c.attractor.amplitude_b_max)));
    b.push_back(integer("attractor", "modes", M(c.attractor.modes)));
    b.push_back(number("attractor", "cutoff", M(c.attractor.cutoff)));
    b.push_back(number("attractor", "merge_tol", M(c.attractor.merge_tol)));
    b.push_back(number("attractor", "tolerance", M(c.attractor.tolerance)));
    b.push_back(number("attractor", "ratio", M(c.attractor.ratio)));

    b.push_back(integer("verify", "tartar_samples", M(c.verify.tartar_samples)));
    b.push_back(integer("verify", "legendre_samples", M(c.verify.legendre_samples)));
    b.push_back(integer("verify", "ghidaglia_draws", M(c.verify.ghidaglia_draws)));
    b.push_back(integer("verify", "gronwall_draws", M(c.verify.gronwall_draws)));
    b.push_back(integer("verify", "oracle_configs", M(c.verify.oracle_configs)));
    return b;
  }();
  return table;
}

#undef M

void validate(const ExperimentConfig& c) {
  std::ostringstream msg;
  const auto& p = c.problem;
  if (!(p.m >= 2.0)) msg << "[problem] m must be >= 2; ";
  if (p.kappa && !(*p.kappa >= 0.0)) msg << "[problem] kappa must be nonnegative; ";
  if (p.current_I.has_value() != p.area_B.has_value())
    msg << "[problem] current_I and area_B must be given together; ";
  if (p.area_B && !(*p.area_B != 0.0)) msg << "[problem] area_B must be nonzero; ";
  if (p.kappa && p.current_I && p.area_B) {
    const double from_ib = (*p.current_I * *p.current_I) / (*p.area_B * *p.area_B);
    if (std::abs(from_ib - *p.kappa) > 1e-12 * std::max(1.0, std::abs(*p.kappa)))
      msg << "[problem] kappa disagrees with current_I^2 / area_B^2; ";
  }
  if (!(p.horizon >= 0.0)) msg << "[problem] horizon must be >= 0; ";
  if (!(p.reg_r >= 0.0)) msg << "[problem] reg_r must be >= 0; ";
  if (c.domain.dim != 1 && c.domain.dim != 2) msg << "[domain] dim must be 1 or 2; ";
  if (c.record_count < 1) msg << "[record] count must be >= 1; ";
  if (c.ensemble.count < 0) msg << "[ensemble] count must be >= 0; ";
  if (c.ensemble.amplitude_min > c.ensemble.amplitude_max)
    msg << "[ensemble] amplitude_min exceeds amplitude_max; ";
  if (c.ensemble.modes < 1 || c.initial.modes < 1 || c.attractor.modes < 1)
    msg << "fourier modes must be >= 1; ";
  if (c.mms.levels < 2) msg << "[mms] levels must be >= 2; ";
  if (c.reg_sweep.r_values.size() < 2) msg << "[reg-sweep] needs at least two r values; ";
  for (double r : c.reg_sweep.r_values)
    if (!(r > 0.0)) msg << "[reg-sweep] r values must be positive; ";
  if (c.absorbing.amplitudes.empty()) msg << "[absorbing] amplitudes must not be empty; ";
  if (!(c.absorbing.fit_fraction > 0.0 && c.absorbing.fit_fraction <= 1.0))
    msg << "[absorbing] fit_fraction must lie in (0, 1]; ";
  if (c.attractor.count < 1) msg << "[attractor] count must be >= 1; ";
  if (c.attractor.amplitude_a_min > c.attractor.amplitude_a_max ||
      c.attractor.amplitude_b_min > c.attractor.amplitude_b_max)
    msg << "[attractor] amplitude ranges are inverted; ";
  const auto text = msg.str();
  if (!text.empty()) config_error(text);
  // Law and grid constructors and the stepper check the rest.
  try {
    (void)c.domain.grid();
    (void)c.material.law();
    (void)c.source.law();
    c.stepper.validate();
  } catch (const Error& e) {
    config_error(e.what());
  }
}

}  // namespace

const char* to_string(Scenario scenario) noexcept {
  switch (scenario) {
    case Scenario::simulate: return "simulate";
    case Scenario::mms: return "mms";
    case Scenario::reg_sweep: return "reg-sweep";
    case Scenario::uniqueness: return "uniqueness";
    case Scenario::absorbing: return "absorbing";
    case Scenario::attractor: return "attractor";
    case Scenario::verify: return "verify";
  }
  return "unknown";
}

Scenario parse_scenario(std::string_view name) {
  return to_enum("scenario", std::string(name),
                 {Scenario::simulate, Scenario::mms, Scenario::reg_sweep, Scenario::uniqueness,
                  Scenario::absorbing, Scenario::attractor, Scenario::verify});
}

Grid DomainSettings::grid() const {
  if (dim == 1) return Grid::interval(length_x, cells_x);
  return Grid::rectangle(length_x, length_y, cells_x, cells_y);
}

MaterialLaw MaterialSettings::law() const {
  switch (family) {
    case MaterialFamily::identity: return MaterialLaw::identity();
    case MaterialFamily::smoothed_piecewise:
      return MaterialLaw::smoothed_piecewise(slope_low, slope_high, center, width);
    case MaterialFamily::cubic_affine: return MaterialLaw::cubic_affine(linear, cubic, knot);
  }
  return MaterialLaw::identity();
}

SourceLaw SourceSettings::law() const {
  if (family == SourceFamily::gaussian_bump)
    return SourceLaw::gaussian_bump(sigma, amplitude, center, width);
  return SourceLaw::constant_floor(sigma);
}

ExperimentConfig parse_config(std::string_view text) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  std::istringstream in{std::string(text)};
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    config_error(std::string("malformed config: ") + e.what());
  }

  std::map<std::pair<std::string, std::string>, const Binding*> index;
  for (const auto& b : bindings()) index[{b.section, b.key}] = &b;

  ExperimentConfig config;
  for (const auto& [section, body] : tree) {
    if (body.empty() && !body.data().empty())
      config_error("key '" + section + "' outside a section");
    bool known_section = false;
    for (const auto& b : bindings()) known_section = known_section || b.section == section;
    if (!known_section) config_error("unknown section [" + section + "]");
    for (const auto& [key, value] : body) {
      const auto it = index.find({section, key});
      if (it == index.end()) config_error("unknown key '" + key + "' in [" + section + "]");
      it->second->set(config, "[" + section + "] " + key, value.data());
    }
  }
  validate(config);
  return config;
}

void set_config_value(ExperimentConfig& config, std::string_view section, std::string_view key,
                      std::string_view value) {
  for (const auto& b : bindings()) {
    if (b.section != section || b.key != key) continue;
    ExperimentConfig updated = config;
    b.set(updated, "[" + b.section + "] " + b.key, std::string(value));
    validate(updated);
    config = std::move(updated);
    return;
  }
  config_error("unknown key '" + std::string(key) + "' in [" + std::string(section) + "]");
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) config_error("cannot open config file " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

std::string render_config(const ExperimentConfig& config) {
  std::ostringstream out;
  std::string current;
  for (const auto& b : bindings()) {
    const auto value = b.get(config);
    if (!value) continue;
    if (b.section != current) {
      if (!current.empty()) out << '\n';
      out << '[' << b.section << "]\n";
      current = b.section;
    }
    out << b.key << " = " << *value << '\n';
  }
  return out.str();
}

ProblemSpec effective_problem(const ExperimentConfig& config, std::uint64_t seed) {
  ProblemSpec spec;
  const auto& p = config.problem;
  spec.m = p.m;
  spec.current_I = p.current_I;
  spec.area_B = p.area_B;
  if (p.kappa) {
    spec.kappa = *p.kappa;
  } else if (p.current_I && p.area_B) {
    spec.kappa = (*p.current_I * *p.current_I) / (*p.area_B * *p.area_B);
  } else {
    spec.kappa = 1.0;
  }
  spec.grid = config.domain.grid();
  spec.horizon_M = p.horizon;
  spec.material = config.material.law();
  spec.source = config.source.law();
  spec.mms.enabled = p.mms;
  spec.mms.amplitude = p.mms_amplitude;

  const auto& init = config.initial;
  if (init.family == InitialFamily::fourier) {
    spec.initial = random_fourier(init.amplitude, init.modes, spec.grid.dim(), mix_seed(seed, 0));
  } else {
    spec.initial.family = init.family;
    spec.initial.amplitude = init.amplitude;
  }
  spec.initial.center = init.center;
  spec.initial.width = init.width;

  if (p.reg_r > 0.0) {
    spec = regularize(spec, p.reg_r);
    if (!init.mollify) spec.initial.mollify_r = 0.0;
  }
  return spec;
}

InitialData ensemble_member(const EnsembleSpec& ensemble, int dim, std::uint64_t seed, int index) {
  const std::uint64_t member_seed = mix_seed(seed, static_cast<std::uint64_t>(index) + 1);
  std::mt19937_64 rng(member_seed);
  const double amplitude = uniform(rng, ensemble.amplitude_min, ensemble.amplitude_max);
  InitialData init;
  switch (ensemble.family) {
    case InitialFamily::fourier:
      return random_fourier(amplitude, ensemble.modes, dim, mix_seed(member_seed, 1));
    case InitialFamily::bump:
    case InitialFamily::step: {
      init.family = ensemble.family;
      init.amplitude = amplitude;
      init.center = uniform(rng, 0.3, 0.7);
      init.width = uniform(rng, 0.15, 0.3);
      return init;
    }
    default:
      init.family = ensemble.family;
      init.amplitude = amplitude;
      return init;
  }
}

}  // namespace thermistor
