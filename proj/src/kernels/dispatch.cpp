#include "phaserep/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <cstring>

namespace phaserep::kern {
namespace {

std::atomic<const KernelTable*> g_active{nullptr};

const KernelTable* pick_default() {
  if (const char* env = std::getenv("PHASEREP_KERNELS")) {
    if (std::strcmp(env, "scalar") == 0) return &scalar_table();
    if (std::strcmp(env, "avx2") == 0) {
      if (const KernelTable* t = avx2_table()) return t;
      // requested backend unavailable: fall through to auto pick
    }
  }
  if (const KernelTable* t = avx2_table()) return t;
  return &scalar_table();
}

}  // namespace

const KernelTable& active() {
  const KernelTable* t = g_active.load(std::memory_order_acquire);
  if (!t) {
    t = pick_default();
    const KernelTable* expected = nullptr;
    if (!g_active.compare_exchange_strong(expected, t, std::memory_order_acq_rel))
      t = expected;
  }
  return *t;
}

bool set_backend(Backend b) {
  const KernelTable* t = nullptr;
  switch (b) {
    case Backend::scalar: t = &scalar_table(); break;
    case Backend::avx2: t = avx2_table(); break;
  }
  if (!t) return false;
  g_active.store(t, std::memory_order_release);
  return true;
}

Backend active_backend() {
  return &active() == &scalar_table() ? Backend::scalar : Backend::avx2;
}

}  // namespace phaserep::kern
