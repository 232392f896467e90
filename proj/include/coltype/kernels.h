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

#ifndef COLTYPE_KERNELS_H_
#define COLTYPE_KERNELS_H_

#include <optional>
#include <span>
#include <string_view>

// Dense double-precision vector kernels used by the embedding similarity and
// the softmax classifier. Every kernel has a portable scalar reference and an
// AVX2+FMA variant; the variant is picked once at startup from CPUID and can
// be pinned with COLTYPE_ISA=scalar|avx2 or ForceIsa().
//
// The two variants agree to a few ulps (FMA and lane-wise partial sums change
// rounding), so bitwise reproducibility holds per ISA, not across ISAs.

namespace coltype {
namespace kernels {

enum class Isa { kScalar, kAvx2 };

std::string_view IsaName(Isa isa);

// True when the CPU and the build both support the AVX2 path.
bool Avx2Available();

// ISA currently used by the dispatching entry points below.
Isa ActiveIsa();

// Overrides the dispatch choice; std::nullopt restores the CPUID choice.
// Requests for an unavailable ISA fall back to scalar.
void ForceIsa(std::optional<Isa> isa);

// Dispatching entry points. Spans must have equal length.
double Dot(std::span<const double> a, std::span<const double> b);
double SquaredNorm(std::span<const double> a);
// y += alpha * x
void Axpy(double alpha, std::span<const double> x, std::span<double> y);
// y *= alpha
void Scale(double alpha, std::span<double> y);

namespace scalar {
double Dot(std::span<const double> a, std::span<const double> b);
double SquaredNorm(std::span<const double> a);
void Axpy(double alpha, std::span<const double> x, std::span<double> y);
void Scale(double alpha, std::span<double> y);
}  // namespace scalar

#if defined(COLTYPE_HAVE_AVX2)
namespace avx2 {
double Dot(std::span<const double> a, std::span<const double> b);
double SquaredNorm(std::span<const double> a);
void Axpy(double alpha, std::span<const double> x, std::span<double> y);
void Scale(double alpha, std::span<double> y);
}  // namespace avx2
#endif

}  // namespace kernels
}  // namespace coltype

#endif  // COLTYPE_KERNELS_H_
