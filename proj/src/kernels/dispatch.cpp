/*******************************************************************************
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 *******************************************************************************/

#include <atomic>
#include <cstdlib>
#include <cstring>

#include "pcmenc/kernels.hpp"

namespace pcmenc::kernels {

#if defined(PCMENC_HAVE_AVX2)
const KernelTable* avx2_kernels_impl() noexcept;
#endif

const KernelTable* avx2_kernels() noexcept {
#if defined(PCMENC_HAVE_AVX2)
  return avx2_kernels_impl();
#else
  return nullptr;
#endif
}

bool cpu_has_avx2() noexcept {
#if defined(PCMENC_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

namespace {

Backend initial_backend() noexcept {
  if (const char* env = std::getenv("PCMENC_KERNELS"); env && std::strcmp(env, "scalar") == 0)
    return Backend::Scalar;
  return avx2_kernels() && cpu_has_avx2() ? Backend::Avx2 : Backend::Scalar;
}

std::atomic<Backend>& current() noexcept {
  static std::atomic<Backend> b{initial_backend()};
  return b;
}

}  // namespace

const KernelTable& active() noexcept {
  return current().load(std::memory_order_relaxed) == Backend::Avx2 ? *avx2_kernels() : scalar_kernels();
}

Backend active_backend() noexcept { return current().load(std::memory_order_relaxed); }

bool set_backend(Backend b) noexcept {
  if (b == Backend::Avx2 && !(avx2_kernels() && cpu_has_avx2())) return false;
  current().store(b, std::memory_order_relaxed);
  return true;
}

std::string_view backend_name(Backend b) noexcept { return b == Backend::Avx2 ? "avx2" : "scalar"; }

}  // namespace pcmenc::kernels
