#include "l1lab/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace l1lab {
namespace {

std::atomic<unsigned> g_workers{std::max(1u, std::thread::hardware_concurrency())};

}  // namespace

void set_workers(unsigned w) { g_workers = std::max(1u, w); }

unsigned workers() { return g_workers.load(); }

std::size_t chunk_count(std::size_t count, std::size_t max_chunks) {
  return std::max<std::size_t>(1, std::min(count, max_chunks));
}

Chunk chunk_at(std::size_t count, std::size_t chunks, std::size_t index) {
  const std::size_t base = count / chunks;
  const std::size_t extra = count % chunks;
  const std::size_t begin = index * base + std::min(index, extra);
  const std::size_t len = base + (index < extra ? 1 : 0);
  return {index, begin, begin + len};
}

void for_each_chunk(std::size_t count, std::size_t chunks,
                    const std::function<void(const Chunk&)>& body) {
  const std::size_t threads = std::min<std::size_t>(workers(), chunks);
  if (threads <= 1) {
    for (std::size_t c = 0; c < chunks; ++c) body(chunk_at(count, chunks, c));
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (std::size_t t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t c = next++; c < chunks; c = next++) {
        try {
          body(chunk_at(count, chunks, c));
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

}  // namespace l1lab
