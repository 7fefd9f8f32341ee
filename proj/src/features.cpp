// SPDX-License-Identifier: Apache-2.0

#include "uwbhar/features.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "uwbhar/kernels.hpp"

namespace uwbhar::features {

namespace {

void require(bool ok, const char* msg) {
  if (!ok) throw std::invalid_argument(msg);
}

void check_window(const FrameMatrix& window) {
  require(window.num_frames == kWindowFrames && window.num_bins == kFastTimeBins,
          "features: window must be exactly 400 frames x 60 bins");
}

}  // namespace

void Spectrogram::validate() const {
  require(rows == kWindowFrames && cols == kFastTimeBins,
          "spectrogram: dimensions must be 400 x 60");
  require(data.size() == static_cast<std::size_t>(rows) * cols, "spectrogram: size mismatch");
  for (double v : data) require(std::isfinite(v), "spectrogram: non-finite entry");
}

Spectrogram time_spectrogram(const FrameMatrix& window) {
  check_window(window);
  Spectrogram s;
  s.kind = SpectrogramKind::TimeDomain;
  s.data.resize(window.data.size());
  kern::ops().cmag_f64(s.data.data(), reinterpret_cast<const double*>(window.data.data()),
                       window.data.size());
  return s;
}

Spectrogram doppler_spectrogram(const FrameMatrix& window) {
  check_window(window);
  const int K = kWindowFrames;
  const int L = kFastTimeBins;

  // Columns as separate re/im arrays so the DFT reduces to dot products.
  std::vector<double> re(static_cast<std::size_t>(L) * K), im(re.size());
  for (int k = 0; k < K; ++k)
    for (int l = 0; l < L; ++l) {
      const sim::cplx z = window.at(static_cast<std::size_t>(k), static_cast<std::size_t>(l));
      re[static_cast<std::size_t>(l) * K + k] = z.real();
      im[static_cast<std::size_t>(l) * K + k] = z.imag();
    }

  // Twiddle lookup: cos/sin(2 pi m / K) indexed by (q * k) mod K.
  std::vector<double> cos_tab(K), sin_tab(K);
  for (int m = 0; m < K; ++m) {
    const double w = 2.0 * std::numbers::pi * m / K;
    cos_tab[static_cast<std::size_t>(m)] = std::cos(w);
    sin_tab[static_cast<std::size_t>(m)] = std::sin(w);
  }

  Spectrogram s;
  s.kind = SpectrogramKind::DopplerDomain;
  s.data.resize(static_cast<std::size_t>(K) * L);

  std::vector<double> wc(K), ws(K);
  for (int q = 0; q < K; ++q) {
    std::size_t m = 0;
    for (int k = 0; k < K; ++k) {
      wc[static_cast<std::size_t>(k)] = cos_tab[m];
      ws[static_cast<std::size_t>(k)] = sin_tab[m];
      m += static_cast<std::size_t>(q);
      if (m >= static_cast<std::size_t>(K)) m -= static_cast<std::size_t>(K);
    }
    for (int l = 0; l < L; ++l) {
      const double* cr = re.data() + static_cast<std::size_t>(l) * K;
      const double* ci = im.data() + static_cast<std::size_t>(l) * K;
      // X_q = sum (re + j im)(cos - j sin)
      const double xr = kern::dot(cr, wc.data(), K) + kern::dot(ci, ws.data(), K);
      const double xi = kern::dot(ci, wc.data(), K) - kern::dot(cr, ws.data(), K);
      s.at(q, l) = std::log1p(std::hypot(xr, xi));
    }
  }
  return s;
}

Spectrogram normalize(const Spectrogram& s) {
  const std::size_t n = s.data.size();
  require(n > 0, "normalize: empty spectrogram");
  const double mean = kern::sum(s.data.data(), n) / static_cast<double>(n);
  double var = 0.0;
  for (double v : s.data) var += (v - mean) * (v - mean);
  var /= static_cast<double>(n);

  Spectrogram out = s;
  out.normalization = Normalization::ZScore;
  if (var <= 0.0) {
    std::fill(out.data.begin(), out.data.end(), 0.0);
    return out;
  }
  const double inv_std = 1.0 / std::sqrt(var);
  for (double& v : out.data) v = (v - mean) * inv_std;
  return out;
}

}  // namespace uwbhar::features
