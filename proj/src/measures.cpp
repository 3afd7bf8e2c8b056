#include "qent/measures.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "qent/conditioning.hpp"
#include "qent/errors.hpp"

namespace qent {

namespace {

constexpr int max_sweeps = 100;
constexpr double negative_limit = -1e-6;

// Dimension above which the entropy goes through the compressed spectrum.
constexpr Eigen::Index direct_limit = 64;

Spectrum sorted(std::vector<double> values) {
  std::sort(values.begin(), values.end(), std::greater<>());
  Spectrum s;
  s.dim = values.size();
  s.values = std::move(values);
  return s;
}

}  // namespace

double Spectrum::sum() const {
  double s = 0.0;
  for (double v : values) s += v;
  return s;
}

Spectrum hermitian_eigenvalues(const CMatrix& m) {
  if (m.rows() != m.cols()) throw NumericalError("eigenvalues need a square matrix");
  const Eigen::Index d = m.rows();
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if ((m - m.adjoint()).cwiseAbs().maxCoeff() > 1e-10 * scale)
    throw NumericalError("matrix is not Hermitian");

  CMatrix a = 0.5 * (m + m.adjoint());
  const double norm = a.norm();
  auto off_norm = [&a, d] {
    double s = 0.0;
    for (Eigen::Index q = 0; q < d; ++q)
      for (Eigen::Index p = 0; p < q; ++p) s += 2.0 * std::norm(a(p, q));
    return std::sqrt(s);
  };

  int sweep = 0;
  while (norm > 0.0 && off_norm() > 1e-12 * norm) {
    if (++sweep > max_sweeps) throw NumericalError("Jacobi eigensolver did not converge");
    for (Eigen::Index p = 0; p < d - 1; ++p) {
      for (Eigen::Index q = p + 1; q < d; ++q) {
        const double apq = std::abs(a(p, q));
        if (apq <= 1e-300) continue;
        // Phase e^{i phi} of a_pq is removed first, then a real rotation.
        const cplx e = a(p, q) / apq;
        const double tau = (a(p, p).real() - a(q, q).real()) / (2.0 * apq);
        const double t = (tau >= 0.0 ? -1.0 : 1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        const cplx se = s * std::conj(e);  // s e^{-i phi}
        const cplx ce = c * std::conj(e);  // c e^{-i phi}
        for (Eigen::Index k = 0; k < d; ++k) {
          const cplx akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - se * akq;
          a(k, q) = s * akp + ce * akq;
        }
        for (Eigen::Index k = 0; k < d; ++k) {
          const cplx apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - std::conj(se) * aqk;
          a(q, k) = s * apk + std::conj(ce) * aqk;
        }
        a(p, q) = a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
      }
    }
  }
  std::vector<double> values(static_cast<std::size_t>(d));
  for (Eigen::Index i = 0; i < d; ++i) values[static_cast<std::size_t>(i)] = a(i, i).real();
  return sorted(std::move(values));
}

Spectrum psd_eigenvalues(const CMatrix& m, double tolerance) {
  if (m.rows() != m.cols()) throw NumericalError("eigenvalues need a square matrix");
  const Eigen::Index d = m.rows();
  Eigen::VectorXd diag = m.diagonal().real();
  const double trace = diag.sum();
  if (!(trace > 0.0)) throw NumericalError("positive semidefinite matrix with non-positive trace");
  if (diag.minCoeff() < negative_limit * trace) throw NumericalError("matrix has a negative diagonal entry");

  CMatrix l(d, 0);
  for (Eigen::Index r = 0; r < d; ++r) {
    Eigen::Index piv = 0;
    const double top = diag.maxCoeff(&piv);
    if (top <= tolerance * trace) break;
    CVector col = m.col(piv);
    if (r > 0) col.noalias() -= l * l.row(piv).adjoint();
    col /= std::sqrt(top);
    l.conservativeResize(d, r + 1);
    l.col(r) = col;
    for (Eigen::Index i = 0; i < d; ++i) diag[i] -= std::norm(col[i]);
    diag[piv] = 0.0;
  }
  if (l.cols() == 0) return sorted(std::vector<double>(1, 0.0));
  const CMatrix small = l.adjoint() * l;
  auto s = hermitian_eigenvalues(0.5 * (small + small.adjoint()));
  s.dim = static_cast<std::size_t>(d);
  return s;
}

double von_neumann_entropy(const Spectrum& spectrum) {
  double s = 0.0;
  for (double v : spectrum.values) {
    if (v < negative_limit) throw NumericalError("density matrix has a negative eigenvalue");
    const double x = std::clamp(v, 0.0, 1.0);
    if (x > 0.0) s -= x * std::log2(x);
  }
  return s;
}

double von_neumann_entropy(const ReducedDensity& rho) {
  if (rho.matrix.rows() > direct_limit) return von_neumann_entropy(psd_eigenvalues(rho.matrix));
  return von_neumann_entropy(hermitian_eigenvalues(rho.matrix));
}

double concurrence(const CMatrix& rho) {
  const double purity = rho.cwiseAbs2().sum();
  return std::sqrt(std::max(0.0, 2.0 * (1.0 - purity)));
}

double concurrence(const ReducedDensity& rho) { return concurrence(rho.matrix); }

std::pair<double, double> max_lines(std::size_t d) {
  if (d < 1) throw DomainError("dimension must be at least 1");
  const double dd = static_cast<double>(d);
  return {std::log2(dd), std::sqrt(2.0 - 2.0 / dd)};
}

}  // namespace qent
