#pragma once

#include <algorithm>
#include <cstddef>
#include <thread>
#include <vector>

namespace precip::detail {

// Calls body(block, first, last) for every block of `block_size` items out of
// `items`, spreading blocks over `threads` workers. Blocks are statically
// assigned, so each block's work is the same whatever the thread count.
template <typename Body>
void for_each_block(std::size_t items, std::size_t block_size, unsigned threads, Body&& body) {
  const std::size_t blocks = (items + block_size - 1) / block_size;
  const auto run = [&](std::size_t worker, std::size_t stride) {
    for (std::size_t b = worker; b < blocks; b += stride) {
      body(b, b * block_size, std::min(items, (b + 1) * block_size));
    }
  };
  const std::size_t workers = std::max<std::size_t>(1, std::min<std::size_t>(threads, blocks));
  if (workers == 1) {
    run(0, 1);
    return;
  }
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(run, w, workers);
}

}  // namespace precip::detail
