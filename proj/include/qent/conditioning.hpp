#pragma once

#include <string_view>

#include "qent/amplitudes.hpp"

namespace qent {

enum class Partition { electron_ion, electron_photon_number, qutrit, ququart, modes };

/// Short tag used in file headers: AB, AC, qutrit, ququart, modes.
std::string_view to_string(Partition p);

/// How the no-photon and one-photon sectors overlap after the photon modes
/// are traced out.
enum class CrossTerms {
  orthogonal,  // sectors orthogonal; cross terms exactly zero
  single_bin,  // photon reference state = unit-norm single bin at eps_l = 0
};

struct ConditioningOptions {
  CrossTerms cross_terms = CrossTerms::orthogonal;
  double norm_floor = 1e-12;
};

/// Conditioned, renormalized density matrix. Hermitian and of unit trace.
struct ReducedDensity {
  Partition label = Partition::electron_ion;
  CMatrix matrix;
  double norm = 0.0;  // trace before normalization
  std::size_t dim() const { return static_cast<std::size_t>(matrix.rows()); }
};

/// Basis {a, b}: the electron traced out, no photon emitted.
ReducedDensity rho_electron_ion(const AmplitudeSet& amps, const ConditioningOptions& opts = {});

/// Basis {0 photons, 1 photon} with the ion in its ground state.
ReducedDensity rho_electron_photon_number(const AmplitudeSet& amps, const ConditioningOptions& opts = {});

/// Basis {alpha, beta, gamma}.
ReducedDensity rho_qutrit(const AmplitudeSet& amps, const ConditioningOptions& opts = {});

/// Basis {alpha, beta, gamma, delta}.
ReducedDensity rho_ququart(const AmplitudeSet& amps, const ConditioningOptions& opts = {});

/// Photon-mode density matrix conditioned on one emitted photon, over the
/// photon bins. When the amplitude set carries a sub-bin line residual, one
/// extra trailing mode holds it.
ReducedDensity rho_modes(const AmplitudeSet& amps, const ConditioningOptions& opts = {});

/// Any partition by tag.
ReducedDensity reduced_density(const AmplitudeSet& amps, Partition p, const ConditioningOptions& opts = {});

}  // namespace qent
