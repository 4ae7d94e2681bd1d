#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "bppsample/instance.hpp"
#include "bppsample/sampling.hpp"

namespace bppsample {

/**
 * Parameters of the digitized annealing simulation.
 *
 * Energies are in abstract weight units; only the products
 * dt * energy / hbar enter the evolution.
 */
struct AnnealConfig {
  double alpha = 0.0;       // linear coefficient of the problem Hamiltonian
  double beta = 1.0;        // quadratic coefficient
  double gamma = 2.0;       // penalty added to every already-measured state
  double anneal_time = 1e-14;
  int n_trotter = 500;
  double h0_scale = 1.0;    // mixing Hamiltonian is -h0_scale * sum_i X_i
  double hbar = 6.58e-16;
  /// When non-empty, anneal call k uses alpha_sweep[k % size] instead of
  /// `alpha`.
  std::vector<double> alpha_sweep;

  /// beta = min(w)/5, alpha = C*beta, T = 1e-14, gamma = 2, n_T = 500,
  /// ||H0|| = 10^n read as a spectral norm (h0_scale = 10^n / n).
  static AnnealConfig defaults_for(const Instance &inst);

  /// Same as the defaults but with h0_scale = 1.
  static AnnealConfig moderate_for(const Instance &inst);

  void validate() const;

  double alpha_for_call(std::int64_t call_index) const;

  bool operator==(const AnnealConfig &) const = default;
};

/// `count` alpha values evenly covering [0, 2*beta*C].
std::vector<double> alpha_sweep_values(double beta, Weight capacity,
                                       int count);

/// Parses an anneal config JSON document. Missing keys take the defaults for
/// `inst`; `alpha` may be "C*beta" and `beta` may be "minw/5". An optional
/// `profile` key selects "literal" (default) or "moderate" base values.
AnnealConfig anneal_config_from_json_text(const std::string &text,
                                          const Instance &inst);

/// Diagonal operator in the computational basis, indexed by mask.
struct DiagonalHamiltonian {
  std::vector<double> energies;

  int qubits() const;
};

struct StateVector {
  std::vector<std::complex<double>> amplitudes;

  static StateVector uniform(int qubits);
  int qubits() const;
  double norm() const;
  double probability(PackageSubset s) const {
    return std::norm(amplitudes.at(s.mask));
  }
};

/// Mixing function lambda(s) on normalized time s = t/T.
struct Schedule {
  enum class Kind { linear };
  Kind kind = Kind::linear;

  double lambda(double s) const;
};

/// alpha*(W - C) + beta*(W - C)^2 for every mask, W the subset weight.
DiagonalHamiltonian build_diagonal(const Instance &inst, double alpha,
                                   double beta);

/// Same spectrum up to a constant, evaluated from the Ising coefficients:
/// beta*w_i*w_j/2 on Z_i Z_j (i<j) and -w_i*(alpha/2 + beta*eps) on Z_i with
/// eps = sum(w)/2 - C and x_i = (1 - Z_i)/2.
DiagonalHamiltonian build_diagonal_pauli(const Instance &inst, double alpha,
                                         double beta);

/// Weight at which the problem Hamiltonian is minimal: C - alpha/(2 beta).
double target_weight(double alpha, double beta, Weight capacity);

/// Adds gamma to the energy of every measured mask.
DiagonalHamiltonian apply_penalties(DiagonalHamiltonian h,
                                    const FeasibleSet &measured, double gamma);

struct Evolution {
  StateVector state;
  double norm_drift = 0.0; // |norm - 1| before any renormalization
  bool renormalized = false;
};

/**
 * Symmetric Trotter product of the annealing path, starting from the uniform
 * superposition (the ground state of -sum X_i):
 *
 *   for k = 1 .. n_T-1, dt = T/n_T:
 *     exp(-i dt/2hbar (1-l_k) H0) exp(-i dt/hbar l_k H_P) exp(-i dt/2hbar
 * (1-l_k) H0)
 *
 * with l_k = lambda(k dt / T). Adjacent mixing half-steps are fused.
 */
Evolution evolve(const AnnealConfig &config, const DiagonalHamiltonian &h,
                 const Schedule &schedule = {});

/// Draws a basis state with probability |amplitude|^2.
PackageSubset measure(const StateVector &psi, Xoshiro256 &rng);

/// Hamiltonians of one anneal call, handed to debug observers.
struct AnnealProbe {
  std::int64_t call_index = 0;
  const DiagonalHamiltonian *bare = nullptr;
  const DiagonalHamiltonian *penalized = nullptr;
  const StateVector *state = nullptr;
};

using AnnealObserver = std::function<void(const AnnealProbe &)>;

/**
 * One anneal call: problem Hamiltonian, penalties for `state.found`,
 * evolution, measurement with `state.rng`. The caller records the outcome.
 */
PackageSubset anneal_sample(const Instance &inst, const AnnealConfig &config,
                            SamplerState &state, std::int64_t call_index = 0,
                            const AnnealObserver &observer = {});

/// Full annealing run from `seed` until coverage or limits.
SampleTrace run_anneal(const Instance &inst, const AnnealConfig &config,
                       std::uint64_t seed, std::int64_t oracle_size,
                       const RunLimits &limits, std::string instance_id = {},
                       const AnnealObserver &observer = {});

struct GapReport {
  double min_gap_sq = 0.0;
  double max_drive = 0.0;
  /// max_drive / min_gap_sq; infinite when the gap closes.
  double adiabatic_ratio = 0.0;
};

/**
 * Dense spectral diagnostic of H(l) = (1-l) H0 + l H_P over `lambda_grid`.
 * Cost grows as 8^n; intended for n <= 12.
 */
GapReport gap_diagnostic(const AnnealConfig &config,
                         const DiagonalHamiltonian &problem,
                         std::span<const double> lambda_grid);

GapReport gap_diagnostic(const Instance &inst, const AnnealConfig &config,
                         std::span<const double> lambda_grid);

/// Writes `mask_hex,re,im`.
void write_statevector_csv(const StateVector &psi, std::ostream &out);

} // namespace bppsample
