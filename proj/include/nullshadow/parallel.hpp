#pragma once

#include <cstddef>
#include <type_traits>

namespace nullshadow {

/// Worker count from NULLSHADOW_THREADS, else the hardware concurrency. Never 0.
unsigned thread_count_from_env();

namespace detail {
void run_chunks(std::size_t n, unsigned threads, void (*body)(void*, std::size_t, std::size_t, unsigned), void* ctx);
}

/// Calls body(begin, end, worker) on `threads` contiguous chunks of [0, n).
/// The first exception thrown by any worker is rethrown after all have joined.
template <typename Body>
void parallel_chunks(std::size_t n, unsigned threads, Body&& body) {
    auto trampoline = [](void* ctx, std::size_t begin, std::size_t end, unsigned worker) {
        (*static_cast<std::remove_reference_t<Body>*>(ctx))(begin, end, worker);
    };
    detail::run_chunks(n, threads, trampoline, &body);
}

}  // namespace nullshadow
