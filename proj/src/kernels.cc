// Copyright 2026 The Coltype Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "coltype/kernels.h"

#include <atomic>
#include <cassert>
#include <cstdlib>
#include <cstring>

namespace coltype {
namespace kernels {

namespace scalar {

double Dot(std::span<const double> a, std::span<const double> b) {
  assert(a.size() == b.size());
  double sum = 0.0;
  for (size_t i = 0; i < a.size(); ++i) sum += a[i] * b[i];
  return sum;
}

double SquaredNorm(std::span<const double> a) { return Dot(a, a); }

void Axpy(double alpha, std::span<const double> x, std::span<double> y) {
  assert(x.size() == y.size());
  for (size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

void Scale(double alpha, std::span<double> y) {
  for (double& v : y) v *= alpha;
}

}  // namespace scalar

namespace {

struct KernelTable {
  Isa isa;
  double (*dot)(std::span<const double>, std::span<const double>);
  double (*squared_norm)(std::span<const double>);
  void (*axpy)(double, std::span<const double>, std::span<double>);
  void (*scale)(double, std::span<double>);
};

constexpr KernelTable kScalarTable = {Isa::kScalar, &scalar::Dot,
                                      &scalar::SquaredNorm, &scalar::Axpy,
                                      &scalar::Scale};
#if defined(COLTYPE_HAVE_AVX2)
constexpr KernelTable kAvx2Table = {Isa::kAvx2, &avx2::Dot, &avx2::SquaredNorm,
                                    &avx2::Axpy, &avx2::Scale};
#endif

bool CpuHasAvx2() {
#if defined(COLTYPE_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const KernelTable* TableFor(Isa isa) {
#if defined(COLTYPE_HAVE_AVX2)
  if (isa == Isa::kAvx2 && CpuHasAvx2()) return &kAvx2Table;
#endif
  (void)isa;
  return &kScalarTable;
}

const KernelTable* DefaultTable() {
  const char* env = std::getenv("COLTYPE_ISA");
  if (env != nullptr && std::strcmp(env, "scalar") == 0) {
    return &kScalarTable;
  }
  return TableFor(Isa::kAvx2);
}

std::atomic<const KernelTable*>& Active() {
  static std::atomic<const KernelTable*> active{DefaultTable()};
  return active;
}

}  // namespace

std::string_view IsaName(Isa isa) {
  switch (isa) {
    case Isa::kScalar:
      return "scalar";
    case Isa::kAvx2:
      return "avx2";
  }
  return "scalar";
}

bool Avx2Available() { return CpuHasAvx2(); }

Isa ActiveIsa() { return Active().load(std::memory_order_acquire)->isa; }

void ForceIsa(std::optional<Isa> isa) {
  Active().store(isa.has_value() ? TableFor(*isa) : DefaultTable(),
                 std::memory_order_release);
}

double Dot(std::span<const double> a, std::span<const double> b) {
  return Active().load(std::memory_order_relaxed)->dot(a, b);
}

double SquaredNorm(std::span<const double> a) {
  return Active().load(std::memory_order_relaxed)->squared_norm(a);
}

void Axpy(double alpha, std::span<const double> x, std::span<double> y) {
  Active().load(std::memory_order_relaxed)->axpy(alpha, x, y);
}

void Scale(double alpha, std::span<double> y) {
  Active().load(std::memory_order_relaxed)->scale(alpha, y);
}

}  // namespace kernels
}  // namespace coltype
