#include "flowcat/kernels.hpp"

#include <omp.h>

#include <cstdlib>
#include <string>

namespace flowcat {

int thread_count() {
  if (const char* env = std::getenv("FLOWCAT_THREADS")) {
    char* end = nullptr;
    const long n = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && n > 0) return static_cast<int>(n);
  }
  return omp_get_max_threads();
}

IntMatrix multiply_parallel(const IntMatrix& a, const IntMatrix& b) {
  if (a.cols() != b.rows()) throw Error("matrix product: shape mismatch");
  IntMatrix c(a.rows(), b.cols());
#pragma omp parallel for num_threads(thread_count()) schedule(static)
  for (int i = 0; i < a.rows(); ++i)
    for (int k = 0; k < a.cols(); ++k) {
      if (a(i, k) == 0) continue;
      for (int j = 0; j < b.cols(); ++j)
        if (b(k, j) != 0) c(i, j) += a(i, k) * b(k, j);
    }
  return c;
}

IntMatrix morse_differential_parallel(const SimplicialComplex& K, const Matching& V) {
  auto r = validate_matching(K, V);
  if (!r.ok) throw CheckFailure("invalid matching: " + r.reason);
  const auto crit = critical_cells(K, V);
  std::vector<int> pos(K.size(), -1);
  for (std::size_t i = 0; i < crit.size(); ++i) pos[crit[i]] = static_cast<int>(i);
  const int n = static_cast<int>(crit.size());
  IntMatrix d(n, n);
  // each column is written by one thread only
#pragma omp parallel for num_threads(thread_count()) schedule(dynamic)
  for (int j = 0; j < n; ++j) {
    const auto col = morse_flow_column(K, V, pos, crit[j]);
    for (int i = 0; i < static_cast<int>(col.size()); ++i) d(i, j) = col[i];
  }
  return d;
}

CornerReport is_corner_model_parallel(const CornerCategory& C) {
  const int n = C.object_count();
  std::vector<CornerReport> reports(n);
#pragma omp parallel for num_threads(thread_count()) schedule(dynamic)
  for (int p = 0; p < n; ++p) reports[p] = check_corner_object(C, p);
  CornerReport R;
  for (int p = 0; p < n; ++p) {
    ++R.objects_checked;
    if (!reports[p].ok) {
      reports[p].objects_checked = R.objects_checked;
      return reports[p];
    }
  }
  return R;
}

long conic_sample_parallel(int max_n, long count, std::uint64_t seed) {
  long failures = 0;
#pragma omp parallel for num_threads(thread_count()) schedule(dynamic, 16) reduction(+ : failures)
  for (long i = 0; i < count; ++i)
    if (!conic_sample_check(max_n, i, seed)) ++failures;
  return failures;
}

}  // namespace flowcat
