#include "sine_transform.hpp"

#include <fftw3.h>

#include <cassert>
#include <cmath>
#include <mutex>
#include <stdexcept>
#include <unordered_map>
#include <vector>

namespace sch::sine_transform {

namespace {

// Plan creation is not thread safe in FFTW; executing a plan on fresh
// arrays via fftw_execute_r2r is. Plans are created once per size with
// FFTW_UNALIGNED so they accept any caller buffer.
fftw_plan plan_for(int interior) {
  static std::mutex mutex;
  static std::unordered_map<int, fftw_plan> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(interior);
  if (it != cache.end()) return it->second;
  std::vector<double> scratch_in(interior), scratch_out(interior);
  fftw_plan plan = fftw_plan_r2r_1d(interior, scratch_in.data(), scratch_out.data(),
                                    FFTW_RODFT00, FFTW_ESTIMATE | FFTW_UNALIGNED);
  if (plan == nullptr) throw std::runtime_error("fftw plan creation failed");
  cache.emplace(interior, plan);
  return plan;
}

}  // namespace

void apply(int n, std::span<const double> in, std::span<double> out) {
  const int interior = n - 1;
  assert(static_cast<int>(in.size()) == interior &&
         static_cast<int>(out.size()) == interior);
  assert(in.data() != out.data());
  fftw_plan plan = plan_for(interior);
  // RODFT00 computes 2 * sum sin(jk pi/n); rescale to the orthonormal
  // convention so that apply(apply(v)) == v.
  fftw_execute_r2r(plan, const_cast<double*>(in.data()), out.data());
  const double scale = 1.0 / std::sqrt(2.0 * n);
  for (int i = 0; i < interior; ++i) out[i] *= scale;
}

}  // namespace sch::sine_transform
