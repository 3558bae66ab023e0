#include "kernels_internal.hpp"

#include <atomic>
#include <cstdlib>
#include <string>

namespace scatrec::simd {

namespace {

bool cpu_has_avx2_fma() {
#if defined(SCATREC_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

const KernelTable* pick_default() {
    const KernelTable* widest = &detail::scalar_table();
    if (const KernelTable* t = avx2_kernels()) widest = t;
    if (const char* env = std::getenv("SCATREC_SIMD")) {
        const std::string want(env);
        for (const KernelTable* t : available_kernels()) {
            if (want == t->name) return t;
        }
    }
    return widest;
}

std::atomic<const KernelTable*>& current() {
    static std::atomic<const KernelTable*> table{pick_default()};
    return table;
}

}  // namespace

const KernelTable& scalar_kernels() { return detail::scalar_table(); }

const KernelTable* avx2_kernels() {
#if defined(SCATREC_HAVE_AVX2)
    static const bool ok = cpu_has_avx2_fma();
    return ok ? &detail::avx2_table() : nullptr;
#else
    return nullptr;
#endif
}

std::vector<const KernelTable*> available_kernels() {
    std::vector<const KernelTable*> out{&scalar_kernels()};
    if (const KernelTable* t = avx2_kernels()) out.push_back(t);
    return out;
}

const KernelTable& active_kernels() { return *current().load(std::memory_order_acquire); }

bool select_kernels(std::string_view name) {
    for (const KernelTable* t : available_kernels()) {
        if (name == t->name) {
            current().store(t, std::memory_order_release);
            return true;
        }
    }
    return false;
}

}  // namespace scatrec::simd
