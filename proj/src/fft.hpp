#pragma once

#include <complex>
#include <vector>

namespace cch::detail {

/// Real-to-half-complex FFT of a fixed size, backed by FFTW. Plans are
/// created under a global lock; execution is reentrant.
template <class Real>
class RealTransform {
 public:
  explicit RealTransform(int n);
  ~RealTransform();
  RealTransform(const RealTransform&) = delete;
  RealTransform& operator=(const RealTransform&) = delete;

  int size() const { return n_; }

  /// out[k] = sum_j in[j] exp(-2 pi i j k / n), k = 0..n/2. Unnormalized.
  void forward(const Real* in, std::complex<Real>* out) const;

  /// out[j] = sum over signed k of c_k exp(2 pi i j k / n) from the half
  /// spectrum. The input is left untouched.
  void inverse(const std::complex<Real>* in, Real* out) const;

 private:
  int n_;
  void* forward_plan_ = nullptr;
  void* inverse_plan_ = nullptr;
};

template <class Real>
const RealTransform<Real>& real_transform(int n);

template <> RealTransform<double>::RealTransform(int n);
template <> RealTransform<double>::~RealTransform();
template <> void RealTransform<double>::forward(const double* in, std::complex<double>* out) const;
template <> void RealTransform<double>::inverse(const std::complex<double>* in, double* out) const;
template <> RealTransform<long double>::RealTransform(int n);
template <> RealTransform<long double>::~RealTransform();
template <> void RealTransform<long double>::forward(const long double* in, std::complex<long double>* out) const;
template <> void RealTransform<long double>::inverse(const std::complex<long double>* in, long double* out) const;

extern template const RealTransform<double>& real_transform<double>(int);
extern template const RealTransform<long double>& real_transform<long double>(int);

}  // namespace cch::detail
