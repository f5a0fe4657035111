#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>

namespace l1lab {

// Worker cap used by every parallel loop. Results never depend on it: work is
// cut into a fixed number of chunks that depends only on the problem size, and
// callers merge per-chunk results in chunk order.
void set_workers(unsigned workers);
unsigned workers();

struct Chunk {
  std::size_t index;
  std::size_t begin;
  std::size_t end;
};

/// Splits [0, count) into min(count, max_chunks) contiguous chunks.
std::size_t chunk_count(std::size_t count, std::size_t max_chunks = 64);
Chunk chunk_at(std::size_t count, std::size_t chunks, std::size_t index);

/// Runs body(chunk) for every chunk, on up to workers() threads.
void for_each_chunk(std::size_t count, std::size_t chunks,
                    const std::function<void(const Chunk&)>& body);

/// SplitMix64 step; used to derive independent per-task RNG seeds.
std::uint64_t splitmix64(std::uint64_t x);

}  // namespace l1lab
