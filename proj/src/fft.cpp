#include "rotasym/fft.hpp"

#include <fftw3.h>

#include <cstdlib>
#include <map>
#include <mutex>
#include <tuple>
#include <vector>

#include "rotasym/errors.hpp"

namespace rotasym::fft {
namespace {

struct Plans {
  fftw_plan fwd = nullptr;
  fftw_plan bwd = nullptr;
};

std::mutex g_mutex;  // FFTW planner is not thread safe
int g_threads = 0;
bool g_threads_ready = false;
std::map<std::tuple<int, int, int, int, int>, Plans> g_plans;

int env_threads() {
  if (const char* s = std::getenv("ROTASYM_THREADS")) {
    int n = std::atoi(s);
    if (n > 0) return n;
  }
  return 1;
}

void init_threads_locked() {
  if (g_threads_ready) return;
  fftw_init_threads();
  if (g_threads == 0) g_threads = env_threads();
  g_threads_ready = true;
}

// Real-to-complex plans over the half cube (last axis n/2+1), made against
// scratch buffers and executed with the new-array interface.
const Plans& plans_for(int rank, int n1, int n2, int n3) {
  std::lock_guard<std::mutex> lock(g_mutex);
  init_threads_locked();
  auto key = std::make_tuple(rank, n1, n2, n3, g_threads);
  auto it = g_plans.find(key);
  if (it != g_plans.end()) return it->second;
  fftw_plan_with_nthreads(g_threads);
  const int last = rank == 3 ? n3 : n2;
  const std::size_t n = std::size_t(n1) * (rank == 3 ? n2 : 1) * last;
  const std::size_t nc = n / last * (last / 2 + 1);
  std::vector<double> r(n);
  std::vector<Complex> c(nc);
  auto* pc = reinterpret_cast<fftw_complex*>(c.data());
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  Plans p;
  if (rank == 3) {
    p.fwd = fftw_plan_dft_r2c_3d(n1, n2, n3, r.data(), pc, flags);
    p.bwd = fftw_plan_dft_c2r_3d(n1, n2, n3, pc, r.data(), flags);
  } else {
    p.fwd = fftw_plan_dft_r2c_2d(n1, n2, r.data(), pc, flags);
    p.bwd = fftw_plan_dft_c2r_2d(n1, n2, pc, r.data(), flags);
  }
  if (!p.fwd || !p.bwd) throw Error("FFTW plan creation failed");
  return g_plans.emplace(key, p).first->second;
}

thread_local std::vector<Complex> t_half;

// (m rows of length `last`) with m = n1 * n2 rows indexed (a, b).
void run_forward(const Plans& p, int n1, int n2, int last, std::span<const double> in, std::span<Complex> out) {
  const std::size_t n = std::size_t(n1) * n2 * last;
  if (in.size() != n || out.size() != n) throw InvalidInput("fft: buffer size does not match grid");
  const int h = last / 2 + 1;
  t_half.resize(std::size_t(n1) * n2 * h);
  fftw_execute_dft_r2c(p.fwd, const_cast<double*>(in.data()), reinterpret_cast<fftw_complex*>(t_half.data()));
  const double s = 1.0 / double(n);
  for (int a = 0; a < n1; ++a)
    for (int b = 0; b < n2; ++b) {
      const Complex* src = &t_half[(std::size_t(a) * n2 + b) * h];
      Complex* dst = &out[(std::size_t(a) * n2 + b) * last];
      for (int c = 0; c < h; ++c) dst[c] = src[c] * s;
      // conjugate-symmetric partner (−a, −b, −c)
      const Complex* mir = &t_half[(std::size_t((n1 - a) % n1) * n2 + (n2 - b) % n2) * h];
      for (int c = h; c < last; ++c) dst[c] = std::conj(mir[last - c]) * s;
    }
}

// Uses the c <= last/2 half of the input, i.e. returns the real part of the
// inverse transform when the input is conjugate-symmetric.
void run_backward(const Plans& p, int n1, int n2, int last, std::span<const Complex> in, std::span<double> out) {
  const std::size_t n = std::size_t(n1) * n2 * last;
  if (in.size() != n || out.size() != n) throw InvalidInput("fft: buffer size does not match grid");
  const int h = last / 2 + 1;
  t_half.resize(std::size_t(n1) * n2 * h);
  for (std::size_t row = 0; row < std::size_t(n1) * n2; ++row)
    for (int c = 0; c < h; ++c) t_half[row * h + c] = in[row * last + c];
  fftw_execute_dft_c2r(p.bwd, reinterpret_cast<fftw_complex*>(t_half.data()), out.data());
}

}  // namespace

void forward3(int n1, int n2, int n3, std::span<const double> in, std::span<Complex> out) {
  run_forward(plans_for(3, n1, n2, n3), n1, n2, n3, in, out);
}

void backward3(int n1, int n2, int n3, std::span<const Complex> in, std::span<double> out) {
  run_backward(plans_for(3, n1, n2, n3), n1, n2, n3, in, out);
}

void forward2(int n, std::span<const double> in, std::span<Complex> out) {
  run_forward(plans_for(2, n, n, 1), n, 1, n, in, out);
}

void backward2(int n, std::span<const Complex> in, std::span<double> out) {
  run_backward(plans_for(2, n, n, 1), n, 1, n, in, out);
}

void set_threads(int n) {
  std::lock_guard<std::mutex> lock(g_mutex);
  if (n < 1) throw InvalidInput("fft thread count must be >= 1");
  g_threads = n;
}

int threads() {
  std::lock_guard<std::mutex> lock(g_mutex);
  return g_threads == 0 ? env_threads() : g_threads;
}

}  // namespace rotasym::fft
