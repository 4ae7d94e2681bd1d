#include "bppsample/annealer.hpp"

#include <charconv>

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <ostream>

#include <Eigen/Dense>

#include "json.hpp"

namespace bppsample {

using nlohmann::json;
using Complex = std::complex<double>;

AnnealConfig AnnealConfig::defaults_for(const Instance &inst) {
  AnnealConfig config;
  config.beta = static_cast<double>(inst.min_weight()) / 5.0;
  config.alpha = static_cast<double>(inst.capacity()) * config.beta;
  config.gamma = 2.0;
  config.anneal_time = 1e-14;
  config.n_trotter = 500;
  config.h0_scale = std::pow(10.0, inst.size()) / inst.size();
  config.hbar = 6.58e-16;
  return config;
}

AnnealConfig AnnealConfig::moderate_for(const Instance &inst) {
  AnnealConfig config = defaults_for(inst);
  config.h0_scale = 1.0;
  return config;
}

void AnnealConfig::validate() const {
  auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
  if (!(std::isfinite(alpha) && alpha >= 0.0)) {
    throw ValidationError("alpha must be finite and non-negative");
  }
  if (!positive(beta)) {
    throw ValidationError("beta must be positive");
  }
  if (!positive(gamma)) {
    throw ValidationError("gamma must be positive");
  }
  if (!positive(anneal_time)) {
    throw ValidationError("anneal_time must be positive");
  }
  if (n_trotter < 1) {
    throw ValidationError("n_trotter must be at least 1");
  }
  if (!(std::isfinite(h0_scale) && h0_scale >= 0.0)) {
    throw ValidationError("h0_scale must be finite and non-negative");
  }
  if (!positive(hbar)) {
    throw ValidationError("hbar must be positive");
  }
  for (double a : alpha_sweep) {
    if (!(std::isfinite(a) && a >= 0.0)) {
      throw ValidationError("alpha sweep values must be finite and "
                            "non-negative");
    }
  }
}

double AnnealConfig::alpha_for_call(std::int64_t call_index) const {
  if (alpha_sweep.empty()) {
    return alpha;
  }
  const auto k = static_cast<std::size_t>(call_index) % alpha_sweep.size();
  return alpha_sweep[k];
}

std::vector<double> alpha_sweep_values(double beta, Weight capacity,
                                       int count) {
  if (count < 1) {
    throw ValidationError("alpha sweep needs at least one value");
  }
  const double top = 2.0 * beta * static_cast<double>(capacity);
  std::vector<double> values;
  values.reserve(count);
  for (int k = 0; k < count; ++k) {
    values.push_back(count == 1 ? 0.0 : top * k / (count - 1));
  }
  return values;
}

AnnealConfig anneal_config_from_json_text(const std::string &text,
                                          const Instance &inst) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error &e) {
    throw ValidationError(std::string("malformed anneal config: ") + e.what());
  }
  if (!doc.is_object()) {
    throw ValidationError("anneal config must be a JSON object");
  }
  static const char *const kKeys[] = {
      "alpha", "beta",   "gamma",   "anneal_time", "n_trotter",
      "h0_scale", "hbar", "profile", "alpha_sweep"};
  for (const auto &[key, value] : doc.items()) {
    if (std::find_if(std::begin(kKeys), std::end(kKeys), [&](const char *k) {
          return key == k;
        }) == std::end(kKeys)) {
      throw ValidationError("unknown anneal config key '" + key + "'");
    }
  }

  AnnealConfig config = AnnealConfig::defaults_for(inst);
  if (doc.contains("profile")) {
    const auto profile =
        doc["profile"].is_string() ? doc["profile"].get<std::string>() : "";
    if (profile == "moderate") {
      config = AnnealConfig::moderate_for(inst);
    } else if (profile != "literal") {
      throw ValidationError("profile must be 'literal' or 'moderate'");
    }
  }

  auto number = [&](const char *key) -> double {
    if (!doc[key].is_number()) {
      throw ValidationError(std::string("anneal config key '") + key +
                            "' must be a number");
    }
    return doc[key].get<double>();
  };

  if (doc.contains("beta")) {
    if (doc["beta"].is_string()) {
      if (doc["beta"].get<std::string>() != "minw/5") {
        throw ValidationError("beta string must be \"minw/5\"");
      }
      config.beta = static_cast<double>(inst.min_weight()) / 5.0;
    } else {
      config.beta = number("beta");
    }
  }
  // alpha defaults to C*beta with the beta resolved above.
  config.alpha = static_cast<double>(inst.capacity()) * config.beta;
  if (doc.contains("alpha")) {
    if (doc["alpha"].is_string()) {
      if (doc["alpha"].get<std::string>() != "C*beta") {
        throw ValidationError("alpha string must be \"C*beta\"");
      }
    } else {
      config.alpha = number("alpha");
    }
  }
  if (doc.contains("gamma")) {
    config.gamma = number("gamma");
  }
  if (doc.contains("anneal_time")) {
    config.anneal_time = number("anneal_time");
  }
  if (doc.contains("n_trotter")) {
    if (!doc["n_trotter"].is_number_integer()) {
      throw ValidationError("n_trotter must be an integer");
    }
    config.n_trotter = doc["n_trotter"].get<int>();
  }
  if (doc.contains("h0_scale")) {
    config.h0_scale = number("h0_scale");
  }
  if (doc.contains("hbar")) {
    config.hbar = number("hbar");
  }
  if (doc.contains("alpha_sweep")) {
    const auto &sweep = doc["alpha_sweep"];
    if (sweep.is_number_integer()) {
      config.alpha_sweep = alpha_sweep_values(config.beta, inst.capacity(),
                                              sweep.get<int>());
    } else if (sweep.is_array()) {
      for (const auto &v : sweep) {
        if (!v.is_number()) {
          throw ValidationError("alpha_sweep entries must be numbers");
        }
        config.alpha_sweep.push_back(v.get<double>());
      }
    } else {
      throw ValidationError("alpha_sweep must be a count or a list");
    }
  }
  config.validate();
  return config;
}

int DiagonalHamiltonian::qubits() const {
  return std::countr_zero(energies.size());
}

StateVector StateVector::uniform(int qubits) {
  const std::size_t dim = std::size_t{1} << qubits;
  StateVector psi;
  psi.amplitudes.assign(dim, Complex(1.0 / std::sqrt(double(dim)), 0.0));
  return psi;
}

int StateVector::qubits() const { return std::countr_zero(amplitudes.size()); }

double StateVector::norm() const {
  double total = 0.0;
  for (const Complex &a : amplitudes) {
    total += std::norm(a);
  }
  return std::sqrt(total);
}

double Schedule::lambda(double s) const {
  switch (kind) {
  case Kind::linear:
    return s;
  }
  return s;
}

double target_weight(double alpha, double beta, Weight capacity) {
  if (!(beta > 0.0)) {
    throw ValidationError("beta must be positive");
  }
  return static_cast<double>(capacity) - alpha / (2.0 * beta);
}

DiagonalHamiltonian build_diagonal(const Instance &inst, double alpha,
                                   double beta) {
  if (!(beta > 0.0)) {
    throw ValidationError("beta must be positive");
  }
  const std::uint64_t dim = inst.subset_count();
  DiagonalHamiltonian h;
  h.energies.resize(dim);
  // Gray-code walk keeps the running weight exact.
  std::uint32_t gray = 0;
  Weight weight = 0;
  const auto energy = [&](Weight w) {
    const double excess = static_cast<double>(w - inst.capacity());
    return alpha * excess + beta * excess * excess;
  };
  h.energies[0] = energy(0);
  for (std::uint64_t k = 1; k < dim; ++k) {
    const int flip = std::countr_zero(k);
    gray ^= 1u << flip;
    weight += ((gray >> flip) & 1u) ? inst.weight(flip) : -inst.weight(flip);
    h.energies[gray] = energy(weight);
  }
  return h;
}

DiagonalHamiltonian build_diagonal_pauli(const Instance &inst, double alpha,
                                         double beta) {
  const int n = inst.size();
  const double eps =
      static_cast<double>(inst.total_weight()) / 2.0 -
      static_cast<double>(inst.capacity());
  DiagonalHamiltonian h;
  h.energies.resize(inst.subset_count());
  for (std::uint64_t mask = 0; mask < inst.subset_count(); ++mask) {
    // x_i = 1 <=> Z_i eigenvalue -1.
    auto z = [&](int i) { return ((mask >> i) & 1u) ? -1.0 : 1.0; };
    double e = 0.0;
    for (int i = 0; i < n; ++i) {
      const double wi = static_cast<double>(inst.weight(i));
      for (int j = i + 1; j < n; ++j) {
        e += beta * wi * static_cast<double>(inst.weight(j)) / 2.0 * z(i) *
             z(j);
      }
      e -= wi * (alpha / 2.0 + beta * eps) * z(i);
    }
    h.energies[mask] = e;
  }
  return h;
}

DiagonalHamiltonian apply_penalties(DiagonalHamiltonian h,
                                    const FeasibleSet &measured,
                                    double gamma) {
  if (!(gamma > 0.0)) {
    throw ValidationError("gamma must be positive");
  }
  for (const PackageSubset s : measured) {
    h.energies.at(s.mask) += gamma;
  }
  return h;
}

namespace {

// exp(i phi X) on every qubit.
void apply_mixing(std::vector<Complex> &amps, int qubits, double phi) {
  const double c = std::cos(phi);
  const double s = std::sin(phi);
  const std::size_t dim = amps.size();
  for (int q = 0; q < qubits; ++q) {
    const std::size_t stride = std::size_t{1} << q;
    for (std::size_t base = 0; base < dim; base += 2 * stride) {
      for (std::size_t i = base; i < base + stride; ++i) {
        const Complex a = amps[i];
        const Complex b = amps[i + stride];
        amps[i] = Complex(c * a.real() - s * b.imag(),
                          c * a.imag() + s * b.real());
        amps[i + stride] = Complex(c * b.real() - s * a.imag(),
                                   c * b.imag() + s * a.real());
      }
    }
  }
}

// amps[i] *= phase[i]; phase[i] *= step[i]. Written out to keep the
// multiply inline (std::complex operator* goes through __muldc3).
void apply_phases(std::vector<Complex> &amps, std::vector<Complex> &phase,
                  const std::vector<Complex> &step) {
  for (std::size_t i = 0; i < amps.size(); ++i) {
    const double pr = phase[i].real();
    const double pi = phase[i].imag();
    const double sr = step[i].real();
    const double si = step[i].imag();
    const double npr = pr * sr - pi * si;
    const double npi = pr * si + pi * sr;
    phase[i] = Complex(npr, npi);
    const double ar = amps[i].real();
    const double ai = amps[i].imag();
    amps[i] = Complex(ar * npr - ai * npi, ar * npi + ai * npr);
  }
}

} // namespace

Evolution evolve(const AnnealConfig &config, const DiagonalHamiltonian &h,
                 const Schedule &schedule) {
  config.validate();
  const int qubits = h.qubits();
  if (h.energies.empty() || (std::size_t{1} << qubits) != h.energies.size()) {
    throw ValidationError("Hamiltonian size must be a power of two");
  }
  Evolution result;
  result.state = StateVector::uniform(qubits);
  auto &amps = result.state.amplitudes;

  const double dt = config.anneal_time / config.n_trotter;
  // Half-step mixing angle for exp(-i dt/2hbar (1-l) H0), H0 = -h0 sum X.
  auto mixing_angle = [&](int k) {
    const double l = schedule.lambda(static_cast<double>(k) / config.n_trotter);
    return dt / (2.0 * config.hbar) * (1.0 - l) * config.h0_scale;
  };

  // Linear schedule: the diagonal factor of step k is z^k with
  // z = exp(-i dt/hbar E / n_T), accumulated by repeated multiplication.
  const double unit = dt / config.hbar / config.n_trotter;
  std::vector<Complex> step(amps.size());
  for (std::size_t i = 0; i < amps.size(); ++i) {
    const double theta = -unit * h.energies[i];
    step[i] = Complex(std::cos(theta), std::sin(theta));
  }
  std::vector<Complex> phase(amps.size(), Complex(1.0, 0.0));

  const int last = config.n_trotter - 1;
  double pending = 0.0; // trailing half-step not yet applied
  for (int k = 1; k <= last; ++k) {
    const double half = mixing_angle(k);
    apply_mixing(amps, qubits, pending + half);
    apply_phases(amps, phase, step);
    pending = half;
  }
  if (last >= 1) {
    apply_mixing(amps, qubits, pending);
  }

  const double norm = result.state.norm();
  result.norm_drift = std::abs(norm - 1.0);
  if (result.norm_drift > 1e-12) {
    for (Complex &a : amps) {
      a /= norm;
    }
    result.renormalized = true;
  }
  return result;
}

PackageSubset measure(const StateVector &psi, Xoshiro256 &rng) {
  const double norm = psi.norm();
  if (std::abs(norm - 1.0) > 1e-6) {
    throw ValidationError("cannot measure a state with norm " +
                          std::to_string(norm));
  }
  const double u = rng.uniform01() * norm * norm;
  double cumulative = 0.0;
  std::size_t fallback = 0;
  for (std::size_t k = 0; k < psi.amplitudes.size(); ++k) {
    const double p = std::norm(psi.amplitudes[k]);
    if (p > 0.0) {
      fallback = k;
    }
    cumulative += p;
    if (u < cumulative) {
      return PackageSubset{static_cast<std::uint32_t>(k)};
    }
  }
  // Rounding left u past the last cumulative sum.
  return PackageSubset{static_cast<std::uint32_t>(fallback)};
}

PackageSubset anneal_sample(const Instance &inst, const AnnealConfig &config,
                            SamplerState &state, std::int64_t call_index,
                            const AnnealObserver &observer) {
  const DiagonalHamiltonian bare =
      build_diagonal(inst, config.alpha_for_call(call_index), config.beta);
  const DiagonalHamiltonian penalized =
      apply_penalties(bare, state.found, config.gamma);
  const Evolution evolution = evolve(config, penalized);
  if (observer) {
    observer(AnnealProbe{call_index, &bare, &penalized, &evolution.state});
  }
  return measure(evolution.state, state.rng);
}

SampleTrace run_anneal(const Instance &inst, const AnnealConfig &config,
                       std::uint64_t seed, std::int64_t oracle_size,
                       const RunLimits &limits, std::string instance_id,
                       const AnnealObserver &observer) {
  check_run_preconditions(limits, oracle_size);
  config.validate();
  SampleTrace trace;
  trace.strategy = Strategy::anneal;
  trace.seed = seed;
  trace.instance_id = std::move(instance_id);
  trace.oracle_size = oracle_size;
  SamplerState state(derive_seed(seed, std::uint64_t(Stream::anneal)));
  std::int64_t calls = 0;
  drive(trace, state, inst,
        [&](SamplerState &s) {
          return anneal_sample(inst, config, s, calls++, observer);
        },
        limits);
  return trace;
}

GapReport gap_diagnostic(const AnnealConfig &config,
                         const DiagonalHamiltonian &problem,
                         std::span<const double> lambda_grid) {
  if (lambda_grid.empty()) {
    throw ValidationError("lambda grid must not be empty");
  }
  for (double l : lambda_grid) {
    if (!(l >= 0.0 && l <= 1.0)) {
      throw ValidationError("lambda grid values must lie in [0, 1]");
    }
  }
  const int qubits = problem.qubits();
  const Eigen::Index dim = static_cast<Eigen::Index>(problem.energies.size());

  Eigen::MatrixXd mixing = Eigen::MatrixXd::Zero(dim, dim);
  for (Eigen::Index k = 0; k < dim; ++k) {
    for (int q = 0; q < qubits; ++q) {
      mixing(k, k ^ (Eigen::Index{1} << q)) = -config.h0_scale;
    }
  }
  const Eigen::VectorXd diag = Eigen::Map<const Eigen::VectorXd>(
      problem.energies.data(), dim);
  Eigen::MatrixXd drive_op = -mixing;
  drive_op.diagonal() += diag;

  double scale = 1.0;
  for (double e : problem.energies) {
    scale = std::max(scale, std::abs(e));
  }
  scale = std::max(scale, config.h0_scale * qubits);
  const double degenerate_tol = 1e-9 * scale;

  GapReport report;
  report.min_gap_sq = std::numeric_limits<double>::infinity();
  for (double l : lambda_grid) {
    Eigen::MatrixXd h = (1.0 - l) * mixing;
    h.diagonal() += l * diag;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h);
    const auto &values = solver.eigenvalues();
    double gap = dim > 1 ? values(1) - values(0) : 0.0;
    if (gap < degenerate_tol) {
      gap = 0.0;
    }
    report.min_gap_sq = std::min(report.min_gap_sq, gap * gap);
    if (dim > 1) {
      const double element = std::abs(solver.eigenvectors().col(0).dot(
          drive_op * solver.eigenvectors().col(1)));
      report.max_drive = std::max(report.max_drive, element);
    }
  }
  report.adiabatic_ratio =
      report.min_gap_sq > 0.0 ? report.max_drive / report.min_gap_sq
                              : std::numeric_limits<double>::infinity();
  return report;
}

GapReport gap_diagnostic(const Instance &inst, const AnnealConfig &config,
                         std::span<const double> lambda_grid) {
  if (inst.size() > 12) {
    throw ValidationError("gap diagnostic is limited to 12 packages");
  }
  return gap_diagnostic(config, build_diagonal(inst, config.alpha, config.beta),
                        lambda_grid);
}

void write_statevector_csv(const StateVector &psi, std::ostream &out) {
  auto shortest = [](double v) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, end);
  };
  out << "mask_hex,re,im\n";
  for (std::size_t k = 0; k < psi.amplitudes.size(); ++k) {
    out << mask_hex(PackageSubset{static_cast<std::uint32_t>(k)}) << ','
        << shortest(psi.amplitudes[k].real()) << ','
        << shortest(psi.amplitudes[k].imag()) << '\n';
  }
}

} // namespace bppsample
