#pragma once

#include <string_view>
#include <vector>

#include "qent/amplitudes.hpp"

namespace qent {

enum class Branch { alpha, beta, gamma_bar, delta_bar, gamma_fluor, delta_fluor };

std::string_view to_string(Branch b);

/// Non-negative density per unit energy on the electron axis (alpha, beta,
/// gamma_bar, delta_bar) or the photon axis (gamma_fluor, delta_fluor).
struct SpectrumCurve {
  EnergyGrid axis;
  std::vector<double> values;
  Branch branch = Branch::alpha;
  double eval_time = 0.0;

  /// Trapezoid integral over the axis.
  double integral() const;
};

/// Photoelectron spectrum of one branch; gamma and delta are marginalized
/// over the photon energy. Throws DomainError for a fluorescence branch.
SpectrumCurve photoelectron_spectrum(const AmplitudeSet& amps, Branch branch);

/// Fluorescence spectrum (marginalized over the electron energy) of the
/// gamma or delta branch. Throws DomainError for other branches.
SpectrumCurve fluorescence_spectrum(const AmplitudeSet& amps, Branch branch);

/// Bhattacharyya coefficient of the two curves after normalization to unit
/// area. Throws DomainError on differing axes or a zero-area curve.
double overlap_coefficient(const SpectrumCurve& a, const SpectrumCurve& b);

struct Peak {
  std::size_t index = 0;
  double position = 0.0;     // axis value
  double height = 0.0;       // smoothed value
  double uncertainty = 0.0;  // one bin
};

/// Local maxima of the 3-bin moving average that exceed `threshold` times
/// its global maximum, in ascending position.
std::vector<Peak> find_peaks(const SpectrumCurve& curve, double threshold = 0.05);

}  // namespace qent
