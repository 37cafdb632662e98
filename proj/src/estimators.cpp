#include "hrfe/estimators.hpp"

#include "hrfe/linsolve.hpp"
#include "hrfe/polyroots.hpp"

#include <unsupported/Eigen/FFT>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace hrfe {

namespace {

constexpr double kTwoPi = 6.28318530717958647692528676655900577;

bool is_grid_method(Method m) {
  return m == Method::FftMusic || m == Method::Ev || m == Method::MinNorm;
}

bool uses_m_dim(Method m) {
  return m == Method::RootMusic || m == Method::EspritTls || is_grid_method(m);
}

SubspaceSplit<double> split_for(const SampleWindow& w, const EstimatorConfig& cfg,
                                Index m_dim) {
  auto r = autocorrelation_matrix<double>(w.samples, m_dim, cfg.corr);
  if (!(r.matrix.diagonal().maxCoeff() > 0.0))
    throw EstimationError(method_name(cfg.method) +
                          ": correlation matrix is zero (empty window?)");
  return eig_hermitian_sorted(r, 2 * cfg.p_real);
}

EstimateSet make_set(const EstimatorConfig& cfg, std::vector<double> freqs,
                     std::vector<std::string> warnings = {}) {
  EstimateSet s;
  s.frequencies_hz = std::move(freqs);
  s.method = cfg.method;
  s.config = cfg;
  s.warnings = std::move(warnings);
  return s;
}

// Denominator ||G^H e(f)||^2 (optionally eigenvalue-weighted) on the first
// grid_size/2 + 1 bins of a zero-padded FFT per noise-basis column.
VecXd grid_denominator(const MatXd& noise_basis, int grid_size,
                       const VecXd* weights) {
  const Index m = noise_basis.rows();
  const Index half = grid_size / 2;
  VecXd den = VecXd::Zero(half + 1);
  Eigen::FFT<double> fft;
  Eigen::VectorXcd in = Eigen::VectorXcd::Zero(grid_size);
  Eigen::VectorXcd out(grid_size);
  for (Index c = 0; c < noise_basis.cols(); ++c) {
    for (Index i = 0; i < m; ++i) in[i] = std::complex<double>(noise_basis(i, c), 0.0);
    fft.fwd(out, in);
    const double w = weights ? (*weights)[c] : 1.0;
    for (Index k = 0; k <= half; ++k) den[k] += w * std::norm(out[k]);
  }
  return den;
}

VecXd single_vector_denominator(const VecXd& a, int grid_size) {
  const Index half = grid_size / 2;
  Eigen::FFT<double> fft;
  Eigen::VectorXcd in = Eigen::VectorXcd::Zero(grid_size);
  for (Index i = 0; i < a.size(); ++i) in[i] = std::complex<double>(a[i], 0.0);
  Eigen::VectorXcd out(grid_size);
  fft.fwd(out, in);
  VecXd den(half + 1);
  for (Index k = 0; k <= half; ++k) den[k] = std::norm(out[k]);
  return den;
}

// Shared search: peaks of 1/den, refined on den, mapped to Hz, ascending.
std::vector<double> grid_search(const VecXd& den, const EstimatorConfig& cfg,
                                double fs_hz) {
  VecXd ps(den.size());
  for (Index k = 0; k < den.size(); ++k) ps[k] = 1.0 / den[k];
  const auto peaks = detail::pick_peaks(ps, cfg.p_real, 2);
  std::vector<double> freqs;
  freqs.reserve(peaks.size());
  for (Index k : peaks) {
    double f = (static_cast<double>(k) + detail::refine_peak(den, k)) * fs_hz /
               cfg.grid_size;
    f = std::min(std::max(f, 0.0), fs_hz / 2.0);
    freqs.push_back(f);
  }
  std::sort(freqs.begin(), freqs.end());
  return freqs;
}

VecXd ev_weights(const SubspaceSplit<double>& split, Index n_noise,
                 std::vector<std::string>& warnings) {
  const double lambda_max = split.eigenvalues[split.eigenvalues.size() - 1];
  if (!(lambda_max > 0.0))
    throw EstimationError("ev: all eigenvalues are non-positive");
  const double floor = 1e-12 * lambda_max;
  VecXd w(n_noise);
  bool clamped = false;
  for (Index i = 0; i < n_noise; ++i) {
    const double lambda = split.eigenvalues[i];
    if (lambda < floor) clamped = true;
    w[i] = 1.0 / std::max(lambda, floor);
  }
  if (clamped)
    warnings.push_back("ev: noise eigenvalues at or below 1e-12 * lambda_max "
                       "were clamped in the weighting");
  return w;
}

struct GridEval {
  VecXd den;
  std::vector<std::string> warnings;
};

GridEval grid_eval(const SampleWindow& w, const EstimatorConfig& cfg) {
  GridEval out;
  const auto split = split_for(w, cfg, cfg.m_dim);
  const MatXd noise = split.noise_basis();
  switch (cfg.method) {
    case Method::FftMusic:
      out.den = grid_denominator(noise, cfg.grid_size, nullptr);
      break;
    case Method::Ev: {
      const VecXd weights = ev_weights(split, noise.cols(), out.warnings);
      out.den = grid_denominator(noise, cfg.grid_size, &weights);
      break;
    }
    case Method::MinNorm: {
      // a = G g1 / ||g1||^2 with g1 the first row of G; a[0] == 1.
      const VecXd g1 = noise.row(0).transpose();
      const double norm2 = g1.squaredNorm();
      if (norm2 < 1e-10)
        throw EstimationError(
            "min-norm: first coordinate is orthogonal to the noise subspace");
      const VecXd a = (noise * g1) / norm2;
      out.den = single_vector_denominator(a, cfg.grid_size);
      break;
    }
    default:
      throw std::invalid_argument("pseudospectrum is defined for the grid methods "
                                  "(fft-music, ev, min-norm) only");
  }
  return out;
}

}  // namespace

std::string method_name(Method m) {
  switch (m) {
    case Method::Prony: return "prony";
    case Method::Pisarenko: return "pisarenko";
    case Method::RootMusic: return "root-music";
    case Method::FftMusic: return "fft-music";
    case Method::Ev: return "ev";
    case Method::EspritTls: return "esprit-tls";
    case Method::MinNorm: return "min-norm";
  }
  throw std::invalid_argument("method_name: bad enum value");
}

Method parse_method(const std::string& name) {
  for (Method m : all_methods)
    if (method_name(m) == name) return m;
  std::string valid;
  for (Method m : all_methods) {
    if (!valid.empty()) valid += ", ";
    valid += method_name(m);
  }
  throw ConfigError("unknown method '" + name + "' (valid: " + valid + ")");
}

void EstimatorConfig::validate() const {
  if (p_real < 1) throw std::invalid_argument("p_real must be >= 1");
  if (uses_m_dim(method) && m_dim <= 2 * p_real + 1)
    throw std::invalid_argument("m_dim must exceed 2*p_real + 1");
  if (method == Method::EspritTls && m_dim < 4 * p_real + 1)
    throw std::invalid_argument("esprit-tls needs m_dim >= 4*p_real + 1");
  if (is_grid_method(method)) {
    if (grid_size < 64 || (grid_size & (grid_size - 1)) != 0)
      throw std::invalid_argument("grid_size must be a power of two >= 64");
  }
}

namespace detail {

VecXd music_polynomial_coefficients(const MatXd& noise_basis) {
  const Index m = noise_basis.rows();
  if (m < 2 || noise_basis.cols() < 1)
    throw std::invalid_argument("music_polynomial_coefficients: empty basis");
  const MatXd c = noise_basis * noise_basis.transpose();
  VecXd q(2 * m - 1);
  for (Index d = 0; d < m; ++d) {
    double s = 0.0;
    for (Index i = 0; i + d < m; ++i) s += c(i, i + d);
    q[m - 1 + d] = s;
    q[m - 1 - d] = s;
  }
  return q;
}

std::vector<Index> pick_peaks(const VecXd& values, int count, Index min_separation) {
  const Index n = values.size();
  std::vector<Index> candidates;
  for (Index k = 0; k < n; ++k) {
    const bool left = k == 0 || values[k] > values[k - 1];
    const bool right = k == n - 1 || values[k] > values[k + 1];
    if (left && right) candidates.push_back(k);
  }
  std::sort(candidates.begin(), candidates.end(), [&values](Index a, Index b) {
    if (values[a] != values[b]) return values[a] > values[b];
    return a < b;
  });
  std::vector<Index> picked;
  for (Index k : candidates) {
    bool clear = true;
    for (Index q : picked)
      if (std::abs(k - q) < min_separation) {
        clear = false;
        break;
      }
    if (clear) picked.push_back(k);
    if (static_cast<int>(picked.size()) == count) break;
  }
  if (static_cast<int>(picked.size()) < count)
    throw EstimationError("pseudospectrum peak search found " +
                          std::to_string(picked.size()) + " of " +
                          std::to_string(count) + " peaks");
  return picked;
}

double refine_peak(const VecXd& denominator, Index k) {
  if (k <= 0 || k >= denominator.size() - 1) return 0.0;
  const double dm = denominator[k - 1];
  const double d0 = denominator[k];
  const double dp = denominator[k + 1];
  const double curve = dm - 2.0 * d0 + dp;
  if (!(curve > 0.0) || !std::isfinite(curve)) return 0.0;
  const double delta = 0.5 * (dm - dp) / curve;
  return std::min(0.5, std::max(-0.5, delta));
}

std::vector<double> pair_conjugate_freqs(const std::vector<std::complex<double>>& zs,
                                         double fs_hz) {
  if (zs.empty() || zs.size() % 2 != 0)
    throw EstimationError("conjugate pairing needs a non-empty even root set");
  std::vector<double> f;
  f.reserve(zs.size());
  for (const auto& z : zs) f.push_back(std::abs(std::arg(z)) / kTwoPi * fs_hz);
  std::sort(f.begin(), f.end());
  std::vector<double> out;
  out.reserve(zs.size() / 2);
  for (std::size_t i = 0; i + 1 < f.size(); i += 2)
    out.push_back(0.5 * (f[i] + f[i + 1]));
  return out;
}

}  // namespace detail

EstimateSet prony_estimate(const SampleWindow& w, const EstimatorConfig& cfg) {
  cfg.validate();
  const VecXd& x = w.samples;
  const Index n = x.size();
  const int order = 2 * cfg.p_real;
  if (n <= 2 * order)
    throw std::invalid_argument("prony: window must exceed twice the model order");

  MatXd a(n - order, order);
  VecXd b(n - order);
  for (Index i = 0; i < n - order; ++i) {
    for (int j = 0; j < order; ++j) a(i, j) = x[order + i - 1 - j];
    b[i] = -x[order + i];
  }
  const VecXd lp = least_squares(a, b);

  CVecXd coeffs(order + 1);
  coeffs[order] = 1.0;
  for (int j = 1; j <= order; ++j) coeffs[order - j] = lp[j - 1];
  const auto roots = poly_roots(coeffs).roots;

  std::vector<std::complex<double>> upper;
  for (Index i = 0; i < roots.size(); ++i)
    if (roots[i].imag() > 0.0) upper.push_back(roots[i]);
  if (static_cast<int>(upper.size()) < cfg.p_real)
    throw EstimationError("prony: root selection found " +
                          std::to_string(upper.size()) + " of " +
                          std::to_string(cfg.p_real) + " conjugate pairs");
  std::partial_sort(upper.begin(), upper.begin() + cfg.p_real, upper.end(),
                    [](const auto& l, const auto& r) { return std::abs(l) > std::abs(r); });
  upper.resize(cfg.p_real);

  std::vector<double> freqs;
  freqs.reserve(upper.size());
  for (const auto& z : upper) freqs.push_back(std::arg(z) / kTwoPi * w.fs_hz);
  std::sort(freqs.begin(), freqs.end());
  return make_set(cfg, std::move(freqs));
}

EstimateSet pisarenko_estimate(const SampleWindow& w, const EstimatorConfig& cfg) {
  cfg.validate();
  const Index m = 2 * cfg.p_real + 1;  // fixed by the method; cfg.m_dim unused
  const auto split = split_for(w, cfg, m);
  const VecXd& lambda = split.eigenvalues;
  const double scale = std::max(std::abs(lambda[m - 1]), std::abs(lambda[0]));

  std::vector<std::string> warnings;
  if (lambda[1] - lambda[0] <= 64.0 * std::numeric_limits<double>::epsilon() * scale)
    throw EstimationError(
        "pisarenko: smallest eigenvalue has multiplicity > 1 (degenerate noise subspace)");
  if (lambda[0] > 0.0 && lambda[1] < 1.1 * lambda[0])
    warnings.push_back("pisarenko: eigenvalue gap below 10%, low-confidence estimate");

  const CVecXd coeffs = split.basis.col(0).cast<std::complex<double>>();
  const auto roots = poly_roots(coeffs).roots;
  std::vector<std::complex<double>> zs(roots.data(), roots.data() + roots.size());
  auto freqs = detail::pair_conjugate_freqs(zs, w.fs_hz);
  return make_set(cfg, std::move(freqs), std::move(warnings));
}

EstimateSet root_music_estimate(const SampleWindow& w, const EstimatorConfig& cfg) {
  cfg.validate();
  const auto split = split_for(w, cfg, cfg.m_dim);
  const VecXd q = detail::music_polynomial_coefficients(split.noise_basis());
  const auto roots = poly_roots(CVecXd(q.cast<std::complex<double>>())).roots;

  std::vector<std::complex<double>> inside;
  for (Index i = 0; i < roots.size(); ++i)
    if (std::abs(roots[i]) < 1.0) inside.push_back(roots[i]);
  const int need = 2 * cfg.p_real;
  if (static_cast<int>(inside.size()) < need)
    throw EstimationError("root-music: only " + std::to_string(inside.size()) +
                          " of " + std::to_string(need) +
                          " roots lie strictly inside the unit circle");
  std::partial_sort(inside.begin(), inside.begin() + need, inside.end(),
                    [](const auto& l, const auto& r) { return std::abs(l) > std::abs(r); });
  inside.resize(need);
  auto freqs = detail::pair_conjugate_freqs(inside, w.fs_hz);
  return make_set(cfg, std::move(freqs));
}

EstimateSet fft_music_estimate(const SampleWindow& w, const EstimatorConfig& cfg) {
  cfg.validate();
  auto eval = grid_eval(w, cfg);
  auto freqs = grid_search(eval.den, cfg, w.fs_hz);
  return make_set(cfg, std::move(freqs), std::move(eval.warnings));
}

EstimateSet ev_estimate(const SampleWindow& w, const EstimatorConfig& cfg) {
  return fft_music_estimate(w, cfg);  // dispatch differs only through cfg.method
}

EstimateSet min_norm_estimate(const SampleWindow& w, const EstimatorConfig& cfg) {
  return fft_music_estimate(w, cfg);
}

EstimateSet esprit_tls_estimate(const SampleWindow& w, const EstimatorConfig& cfg) {
  cfg.validate();
  const auto split = split_for(w, cfg, cfg.m_dim);
  const MatXd u = split.signal_basis();
  const MatXd s1 = u.topRows(u.rows() - 1);
  const MatXd s2 = u.bottomRows(u.rows() - 1);
  const MatXd psi = tls_solve(s1, s2);

  Eigen::EigenSolver<MatXd> es(psi, /*computeEigenvectors=*/false);
  if (es.info() != Eigen::Success)
    throw NumericalError("esprit-tls: rotation eigensolver failed");
  const Eigen::VectorXcd ev = es.eigenvalues();
  std::vector<std::complex<double>> zs(ev.data(), ev.data() + ev.size());
  auto freqs = detail::pair_conjugate_freqs(zs, w.fs_hz);
  return make_set(cfg, std::move(freqs));
}

Pseudospectrum pseudospectrum(const SampleWindow& w, const EstimatorConfig& cfg) {
  cfg.validate();
  auto eval = grid_eval(w, cfg);
  Pseudospectrum ps;
  ps.freqs_hz.resize(eval.den.size());
  ps.values.resize(eval.den.size());
  for (Index k = 0; k < eval.den.size(); ++k) {
    ps.freqs_hz[k] = static_cast<double>(k) * w.fs_hz / cfg.grid_size;
    ps.values[k] = 1.0 / eval.den[k];
  }
  return ps;
}

std::vector<double> estimate_amplitudes(const SampleWindow& w,
                                        const std::vector<double>& freqs_hz) {
  if (freqs_hz.empty())
    throw std::invalid_argument("estimate_amplitudes: need at least one frequency");
  const Index n = w.samples.size();
  const Index k = static_cast<Index>(freqs_hz.size());
  if (n < 2 * k)
    throw std::invalid_argument("estimate_amplitudes: window too short for the fit");
  MatXd design(n, 2 * k);
  for (Index j = 0; j < k; ++j) {
    const double omega = kTwoPi * freqs_hz[j] / w.fs_hz;
    for (Index i = 0; i < n; ++i) {
      design(i, 2 * j) = std::cos(omega * i);
      design(i, 2 * j + 1) = std::sin(omega * i);
    }
  }
  const VecXd sol = least_squares(design, w.samples);
  std::vector<double> amps;
  amps.reserve(k);
  for (Index j = 0; j < k; ++j)
    amps.push_back(std::hypot(sol[2 * j], sol[2 * j + 1]));
  return amps;
}

EstimateSet estimate(const SampleWindow& w, const EstimatorConfig& cfg) {
  cfg.validate();
  const auto t0 = std::chrono::steady_clock::now();
  EstimateSet s;
  switch (cfg.method) {
    case Method::Prony: s = prony_estimate(w, cfg); break;
    case Method::Pisarenko: s = pisarenko_estimate(w, cfg); break;
    case Method::RootMusic: s = root_music_estimate(w, cfg); break;
    case Method::FftMusic: s = fft_music_estimate(w, cfg); break;
    case Method::Ev: s = ev_estimate(w, cfg); break;
    case Method::EspritTls: s = esprit_tls_estimate(w, cfg); break;
    case Method::MinNorm: s = min_norm_estimate(w, cfg); break;
  }
  const auto t1 = std::chrono::steady_clock::now();
  s.elapsed_s = std::chrono::duration<double>(t1 - t0).count();
  return s;
}

}  // namespace hrfe
