#include "fft.hpp"

#include <fftw3.h>

#include <map>
#include <memory>
#include <mutex>

namespace cch::detail {

namespace {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

constexpr unsigned kPlanFlags = FFTW_ESTIMATE | FFTW_UNALIGNED;

template <class Real>
std::vector<std::complex<Real>>& scratch(int size) {
  thread_local std::vector<std::complex<Real>> buffer;
  if (static_cast<int>(buffer.size()) < size) buffer.resize(size);
  return buffer;
}

}  // namespace

template <>
RealTransform<double>::RealTransform(int n) : n_(n) {
  std::vector<double> in(n);
  std::vector<std::complex<double>> out(n / 2 + 1);
  std::lock_guard lock(planner_mutex());
  forward_plan_ = fftw_plan_dft_r2c_1d(n, in.data(), reinterpret_cast<fftw_complex*>(out.data()), kPlanFlags);
  inverse_plan_ = fftw_plan_dft_c2r_1d(n, reinterpret_cast<fftw_complex*>(out.data()), in.data(), kPlanFlags);
}

template <>
RealTransform<double>::~RealTransform() {
  std::lock_guard lock(planner_mutex());
  fftw_destroy_plan(static_cast<fftw_plan>(forward_plan_));
  fftw_destroy_plan(static_cast<fftw_plan>(inverse_plan_));
}

template <>
void RealTransform<double>::forward(const double* in, std::complex<double>* out) const {
  fftw_execute_dft_r2c(static_cast<fftw_plan>(forward_plan_), const_cast<double*>(in),
                       reinterpret_cast<fftw_complex*>(out));
}

template <>
void RealTransform<double>::inverse(const std::complex<double>* in, double* out) const {
  auto& buf = scratch<double>(n_ / 2 + 1);
  std::copy(in, in + n_ / 2 + 1, buf.begin());
  fftw_execute_dft_c2r(static_cast<fftw_plan>(inverse_plan_), reinterpret_cast<fftw_complex*>(buf.data()), out);
}

template <>
RealTransform<long double>::RealTransform(int n) : n_(n) {
  std::vector<long double> in(n);
  std::vector<std::complex<long double>> out(n / 2 + 1);
  std::lock_guard lock(planner_mutex());
  forward_plan_ = fftwl_plan_dft_r2c_1d(n, in.data(), reinterpret_cast<fftwl_complex*>(out.data()), kPlanFlags);
  inverse_plan_ = fftwl_plan_dft_c2r_1d(n, reinterpret_cast<fftwl_complex*>(out.data()), in.data(), kPlanFlags);
}

template <>
RealTransform<long double>::~RealTransform() {
  std::lock_guard lock(planner_mutex());
  fftwl_destroy_plan(static_cast<fftwl_plan>(forward_plan_));
  fftwl_destroy_plan(static_cast<fftwl_plan>(inverse_plan_));
}

template <>
void RealTransform<long double>::forward(const long double* in, std::complex<long double>* out) const {
  fftwl_execute_dft_r2c(static_cast<fftwl_plan>(forward_plan_), const_cast<long double*>(in),
                        reinterpret_cast<fftwl_complex*>(out));
}

template <>
void RealTransform<long double>::inverse(const std::complex<long double>* in, long double* out) const {
  auto& buf = scratch<long double>(n_ / 2 + 1);
  std::copy(in, in + n_ / 2 + 1, buf.begin());
  fftwl_execute_dft_c2r(static_cast<fftwl_plan>(inverse_plan_), reinterpret_cast<fftwl_complex*>(buf.data()),
                        out);
}

template <class Real>
const RealTransform<Real>& real_transform(int n) {
  static std::mutex cache_mutex;
  static std::map<int, std::unique_ptr<RealTransform<Real>>> cache;
  std::lock_guard lock(cache_mutex);
  auto& slot = cache[n];
  if (!slot) slot = std::make_unique<RealTransform<Real>>(n);
  return *slot;
}

template const RealTransform<double>& real_transform<double>(int);
template const RealTransform<long double>& real_transform<long double>(int);

}  // namespace cch::detail
