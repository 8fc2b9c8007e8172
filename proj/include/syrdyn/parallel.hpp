#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <string>
#include <thread>
#include <vector>

namespace syrdyn {

/// Worker count: SYRDYN_THREADS wins when set, then `requested`, then the
/// hardware concurrency. Never returns zero.
inline unsigned resolve_threads(unsigned requested = 0) {
  if (const char* env = std::getenv("SYRDYN_THREADS"); env != nullptr && *env != '\0') {
    try {
      unsigned long v = std::stoul(env);
      if (v > 0) return static_cast<unsigned>(std::min<unsigned long>(v, 256));
    } catch (const std::exception&) {
    }
  }
  if (requested > 0) return requested;
  return std::max(1U, std::thread::hardware_concurrency());
}

/// Splits [first, last] into contiguous blocks and runs `body(block_first,
/// block_last, block_index)` on up to `threads` workers (block_index <
/// threads). Results that callers collect per block index merge in a fixed
/// order. The first worker exception is rethrown after all workers join.
template <class Body>
std::size_t for_each_block(std::uint64_t first, std::uint64_t last, unsigned threads, Body&& body) {
  if (last < first) return 0;
  const std::uint64_t count = last - first + 1;
  const std::uint64_t blocks = std::min<std::uint64_t>(std::max(1U, threads), count);
  const std::uint64_t width = (count + blocks - 1) / blocks;
  auto run = [&](std::uint64_t b) {
    const std::uint64_t lo = first + b * width;
    const std::uint64_t hi = std::min(last, lo + width - 1);
    if (lo <= hi) body(lo, hi, static_cast<std::size_t>(b));
  };
  if (blocks == 1) {
    run(0);
    return 1;
  }
  std::vector<std::exception_ptr> errors(blocks);
  {
    std::vector<std::jthread> workers;
    workers.reserve(blocks);
    for (std::uint64_t b = 0; b < blocks; ++b) {
      workers.emplace_back([&, b] {
        try {
          run(b);
        } catch (...) {
          errors[b] = std::current_exception();
        }
      });
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return static_cast<std::size_t>(blocks);
}

}  // namespace syrdyn
