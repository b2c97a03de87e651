#include "fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <utility>
#include <vector>

namespace pdhs::detail {
namespace {

// The FFTW planner is not thread-safe; execution with new-array execute is.
std::mutex g_plan_mutex;

fftw_plan get_plan(std::size_t n, int sign, bool in_place) {
  static std::map<std::tuple<std::size_t, int, bool>, fftw_plan> plans;
  std::lock_guard<std::mutex> lock(g_plan_mutex);
  auto key = std::make_tuple(n, sign, in_place);
  auto it = plans.find(key);
  if (it != plans.end()) return it->second;
  std::vector<fftw_complex> a(n), b(n);
  // FFTW_ESTIMATE keeps plans (and hence rounding) independent of timing.
  fftw_plan plan = fftw_plan_dft_1d(static_cast<int>(n), a.data(),
                                    in_place ? a.data() : b.data(), sign,
                                    FFTW_ESTIMATE | FFTW_UNALIGNED);
  plans.emplace(key, plan);
  return plan;
}

void run(const std::complex<double>* in, std::complex<double>* out,
         std::size_t n, int sign) {
  if (n == 0) return;
  const bool in_place = in == out;
  fftw_plan plan = get_plan(n, sign, in_place);
  auto* src = reinterpret_cast<fftw_complex*>(
      const_cast<std::complex<double>*>(in));
  fftw_execute_dft(plan, src, reinterpret_cast<fftw_complex*>(out));
}

}  // namespace

void fft_forward(const std::complex<double>* in, std::complex<double>* out,
                 std::size_t n) {
  run(in, out, n, FFTW_FORWARD);
}

void fft_backward(const std::complex<double>* in, std::complex<double>* out,
                  std::size_t n) {
  run(in, out, n, FFTW_BACKWARD);
}

}  // namespace pdhs::detail
