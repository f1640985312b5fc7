// Hot inner loop of the Fourier-feature curator, kept in its own translation
// unit so it can be compiled with vector-math flags (see src/CMakeLists.txt)
// without affecting the floating-point semantics of the rest of the library.

#include <cmath>
#include <cstddef>

namespace lsq::rff::detail {

double sum_cos_features(const double* pts, std::size_t n, std::size_t dim, const double* omega,
                        double freq_scale, double beta) {
  double acc = 0.0;
  switch (dim) {
    case 1: {
      const double w0 = freq_scale * omega[0];
      for (std::size_t i = 0; i < n; ++i) acc += std::cos(w0 * pts[i] + beta);
      break;
    }
    case 2: {
      const double w0 = freq_scale * omega[0];
      const double w1 = freq_scale * omega[1];
      for (std::size_t i = 0; i < n; ++i) {
        acc += std::cos(w0 * pts[2 * i] + w1 * pts[2 * i + 1] + beta);
      }
      break;
    }
    case 3: {
      const double w0 = freq_scale * omega[0];
      const double w1 = freq_scale * omega[1];
      const double w2 = freq_scale * omega[2];
      for (std::size_t i = 0; i < n; ++i) {
        acc += std::cos(w0 * pts[3 * i] + w1 * pts[3 * i + 1] + w2 * pts[3 * i + 2] + beta);
      }
      break;
    }
    default: {
      for (std::size_t i = 0; i < n; ++i) {
        const double* p = pts + i * dim;
        double t = 0.0;
        for (std::size_t j = 0; j < dim; ++j) t += omega[j] * p[j];
        acc += std::cos(freq_scale * t + beta);
      }
      break;
    }
  }
  return acc;
}

}  // namespace lsq::rff::detail
