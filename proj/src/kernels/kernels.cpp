// ISA selection: defaults to the widest supported variant, can be pinned via
// MCMT_SIMD or set_isa().

#include <atomic>
#include <cstdlib>

#include "mcmt/kernels.hpp"

namespace mcmt::kernels {

namespace {

std::atomic<const Ops*> g_active{nullptr};

const Ops* pick_auto() {
#if defined(__x86_64__)
  if (avx2_supported()) return &avx2_ops();
#endif
  return &scalar_ops();
}

const Ops* pick(std::string_view name) {
  if (name == "scalar") return &scalar_ops();
#if defined(__x86_64__)
  if (name == "avx2" && avx2_supported()) return &avx2_ops();
#endif
  if (name == "auto") return pick_auto();
  return nullptr;
}

const Ops* init() {
  if (const char* env = std::getenv("MCMT_SIMD")) {
    if (const Ops* ops = pick(env)) return ops;
  }
  return pick_auto();
}

}  // namespace

const Ops& active() {
  const Ops* ops = g_active.load(std::memory_order_acquire);
  if (ops == nullptr) {
    ops = init();
    g_active.store(ops, std::memory_order_release);
  }
  return *ops;
}

bool set_isa(std::string_view name) {
  const Ops* ops = pick(name);
  if (ops == nullptr) return false;
  g_active.store(ops, std::memory_order_release);
  return true;
}

std::string_view active_name() { return active().name; }

}  // namespace mcmt::kernels
