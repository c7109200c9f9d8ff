#include "isac/fft.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <tuple>

namespace isac::fft {
namespace {

struct PlanKey {
  int n;
  int howmany;
  int stride;
  int dist;
  int sign;
  bool in_place;
  auto operator<=>(const PlanKey&) const = default;
};

class PlanCache {
 public:
  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

  fftw_plan get(const PlanKey& key) {
    std::lock_guard lock(mutex_);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;

    // FFTW_ESTIMATE never touches the scratch arrays; they only fix the
    // in-place/out-of-place layout that the plan is valid for.
    const std::size_t span = static_cast<std::size_t>(key.n - 1) * key.stride +
                             static_cast<std::size_t>(key.howmany - 1) * key.dist + 1;
    auto* in = fftw_alloc_complex(span);
    auto* out = key.in_place ? in : fftw_alloc_complex(span);
    int n = key.n;
    fftw_plan plan = fftw_plan_many_dft(1, &n, key.howmany, in, nullptr, key.stride, key.dist, out,
                                        nullptr, key.stride, key.dist, key.sign,
                                        FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (!key.in_place) fftw_free(out);
    fftw_free(in);
    if (plan == nullptr) throw std::runtime_error("fftw plan creation failed");
    plans_.emplace(key, plan);
    return plan;
  }

 private:
  std::mutex mutex_;
  std::map<PlanKey, fftw_plan> plans_;
};

PlanCache& cache() {
  static PlanCache instance;
  return instance;
}

int sign_of(Direction dir) { return dir == Direction::forward ? FFTW_FORWARD : FFTW_BACKWARD; }

fftw_complex* as_fftw(cplx* p) { return reinterpret_cast<fftw_complex*>(p); }

void scale(std::span<cplx> data, std::size_t n) {
  const double s = 1.0 / std::sqrt(static_cast<double>(n));
  for (auto& v : data) v *= s;
}

}  // namespace

void transform(std::span<const cplx> in, std::span<cplx> out, Direction dir) {
  if (in.size() != out.size()) throw std::invalid_argument("fft: input/output size mismatch");
  if (in.empty()) return;
  const int n = static_cast<int>(in.size());
  if (in.data() == out.data()) {
    transform_inplace(out, dir);
    return;
  }
  fftw_plan plan = cache().get({n, 1, 1, n, sign_of(dir), false});
  // FFTW does not modify the input of an out-of-place complex DFT.
  fftw_execute_dft(plan, as_fftw(const_cast<cplx*>(in.data())), as_fftw(out.data()));
  scale(out, in.size());
}

void transform_inplace(std::span<cplx> data, Direction dir) {
  if (data.empty()) return;
  const int n = static_cast<int>(data.size());
  fftw_plan plan = cache().get({n, 1, 1, n, sign_of(dir), true});
  fftw_execute_dft(plan, as_fftw(data.data()), as_fftw(data.data()));
  scale(data, data.size());
}

CVec transform(std::span<const cplx> in, Direction dir) {
  CVec out(in.size());
  transform(in, out, dir);
  return out;
}

void transform_rows(CMatrix& m, Direction dir) {
  if (m.empty()) return;
  const int n = static_cast<int>(m.cols());
  const int rows = static_cast<int>(m.rows());
  fftw_plan plan = cache().get({n, rows, 1, n, sign_of(dir), true});
  fftw_execute_dft(plan, as_fftw(m.flat().data()), as_fftw(m.flat().data()));
  scale(m.flat(), m.cols());
}

void transform_cols(CMatrix& m, Direction dir) {
  if (m.empty()) return;
  const int n = static_cast<int>(m.rows());
  const int cols = static_cast<int>(m.cols());
  fftw_plan plan = cache().get({n, cols, cols, 1, sign_of(dir), true});
  fftw_execute_dft(plan, as_fftw(m.flat().data()), as_fftw(m.flat().data()));
  scale(m.flat(), m.rows());
}

}  // namespace isac::fft
