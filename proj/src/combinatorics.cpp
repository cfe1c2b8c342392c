#include "qwn/combinatorics.hpp"

#include <algorithm>
#include <map>
#include <string>

namespace qwn {

namespace {

void require_range(int n, int cap, const char* what) {
  if (n < 0) throw Error(std::string(what) + ": negative size");
  if (n > cap) {
    throw Error(std::string(what) + ": size " + std::to_string(n) + " exceeds cap " +
                std::to_string(cap));
  }
}

std::vector<std::vector<int>> blocks_from_rgs(const std::vector<int>& rgs, int block_count) {
  std::vector<std::vector<int>> blocks(static_cast<std::size_t>(block_count));
  for (std::size_t i = 0; i < rgs.size(); ++i) {
    blocks[static_cast<std::size_t>(rgs[i])].push_back(static_cast<int>(i));
  }
  return blocks;
}

// Restricted growth strings a_0 = 0, a_i <= 1 + max(a_0..a_{i-1}), in
// lexicographic order.
template <typename F>
void walk_rgs(int n, F&& visit) {
  if (n == 0) {
    visit(std::vector<int>{}, 0);
    return;
  }
  std::vector<int> a(static_cast<std::size_t>(n), 0);
  std::vector<int> prefix_max(static_cast<std::size_t>(n), 0);  // max of a_0..a_i
  while (true) {
    visit(a, prefix_max.back() + 1);
    int i = n - 1;
    while (i > 0 && a[static_cast<std::size_t>(i)] > prefix_max[static_cast<std::size_t>(i - 1)]) --i;
    if (i == 0) return;
    ++a[static_cast<std::size_t>(i)];
    prefix_max[static_cast<std::size_t>(i)] =
        std::max(prefix_max[static_cast<std::size_t>(i - 1)], a[static_cast<std::size_t>(i)]);
    for (int j = i + 1; j < n; ++j) {
      a[static_cast<std::size_t>(j)] = 0;
      prefix_max[static_cast<std::size_t>(j)] = prefix_max[static_cast<std::size_t>(i)];
    }
  }
}

struct NoncrossingBuilder {
  int n;
  const std::function<void(const NoncrossingPartition&)>& visit;
  NoncrossingPartition current;
  // Indices into current.blocks of blocks that may still receive elements.
  std::vector<std::size_t> open;

  void step(int element) {
    if (element == n) {
      visit(current);
      return;
    }
    // Start a new block.
    current.blocks.push_back({element});
    open.push_back(current.blocks.size() - 1);
    step(element + 1);
    open.pop_back();
    current.blocks.pop_back();
    // Join an open block; every block opened after it closes for good.
    for (std::size_t depth = 0; depth < open.size(); ++depth) {
      const std::size_t target = open[depth];
      std::vector<std::size_t> saved(open.begin() + static_cast<std::ptrdiff_t>(depth) + 1, open.end());
      open.resize(depth + 1);
      current.blocks[target].push_back(element);
      step(element + 1);
      current.blocks[target].pop_back();
      open.insert(open.end(), saved.begin(), saved.end());
    }
  }
};

}  // namespace

void for_each_set_partition(int n, const std::function<void(const SetPartition&)>& visit) {
  require_range(n, kMaxSetPartitionSize, "set partitions");
  SetPartition p;
  walk_rgs(n, [&](const std::vector<int>& rgs, int count) {
    p.blocks = blocks_from_rgs(rgs, count);
    visit(p);
  });
}

void for_each_ordered_partition(int n, const std::function<void(const OrderedPartition&)>& visit) {
  require_range(n, kMaxOrderedPartitionSize, "ordered partitions");
  OrderedPartition p;
  walk_rgs(n, [&](const std::vector<int>& rgs, int count) {
    p.blocks = blocks_from_rgs(rgs, count);
    // Odometer over the permutations of every block.
    while (true) {
      visit(p);
      int b = count - 1;
      for (; b >= 0; --b) {
        auto& block = p.blocks[static_cast<std::size_t>(b)];
        if (std::next_permutation(block.begin(), block.end())) break;
      }
      if (b < 0) break;
    }
  });
}

void for_each_interval_composition(int k,
                                   const std::function<void(const IntervalComposition&)>& visit) {
  require_range(k, kMaxCompositionSize, "interval compositions");
  IntervalComposition c;
  if (k == 0) {
    c.cuts = {0};
    visit(c);
    return;
  }
  const std::uint32_t masks = 1u << static_cast<unsigned>(k - 1);
  for (std::uint32_t mask = 0; mask < masks; ++mask) {
    c.cuts.assign(1, 0);
    for (int i = 0; i < k - 1; ++i) {
      if (mask & (1u << static_cast<unsigned>(i))) c.cuts.push_back(i + 1);
    }
    c.cuts.push_back(k);
    visit(c);
  }
}

void for_each_noncrossing_partition(
    int n, const std::function<void(const NoncrossingPartition&)>& visit) {
  require_range(n, kMaxNoncrossingSize, "noncrossing partitions");
  NoncrossingBuilder builder{n, visit, {}, {}};
  builder.step(0);
}

std::vector<SetPartition> set_partitions(int n) {
  std::vector<SetPartition> out;
  for_each_set_partition(n, [&](const SetPartition& p) { out.push_back(p); });
  return out;
}

std::vector<OrderedPartition> ordered_partitions(int n) {
  std::vector<OrderedPartition> out;
  for_each_ordered_partition(n, [&](const OrderedPartition& p) { out.push_back(p); });
  return out;
}

std::vector<NoncrossingPartition> noncrossing_partitions(int n) {
  std::vector<NoncrossingPartition> out;
  for_each_noncrossing_partition(n, [&](const NoncrossingPartition& p) { out.push_back(p); });
  return out;
}

BigInt factorial(unsigned n) {
  BigInt f = 1;
  for (unsigned i = 2; i <= n; ++i) f *= i;
  return f;
}

BigInt binomial(unsigned n, unsigned k) {
  if (k > n) return 0;
  BigInt r = 1;
  for (unsigned i = 1; i <= k; ++i) {
    r *= n - k + i;
    r /= i;
  }
  return r;
}

BigInt catalan(unsigned l) { return binomial(2 * l, l) / (l + 1); }

BigInt bell(unsigned n) {
  // Bell triangle.
  std::vector<BigInt> row{1};
  for (unsigned i = 0; i < n; ++i) {
    std::vector<BigInt> next{row.back()};
    for (const auto& x : row) next.push_back(next.back() + x);
    row = std::move(next);
  }
  return row.front();
}

BigInt ordered_partition_count(unsigned n) {
  // a(n) = sum_k C(n-1, k-1) k! a(n-k): choose the block of element 0 and its order.
  std::vector<BigInt> a{1};
  for (unsigned m = 1; m <= n; ++m) {
    BigInt total = 0;
    for (unsigned k = 1; k <= m; ++k) total += binomial(m - 1, k - 1) * factorial(k) * a[m - k];
    a.push_back(total);
  }
  return a[n];
}

bool is_noncrossing(const std::vector<std::vector<int>>& blocks, int n) {
  std::vector<int> owner(static_cast<std::size_t>(n), -1);
  std::vector<int> last(blocks.size(), -1);
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    for (int e : blocks[b]) {
      if (e < 0 || e >= n || owner[static_cast<std::size_t>(e)] != -1) return false;
      owner[static_cast<std::size_t>(e)] = static_cast<int>(b);
      last[b] = std::max(last[b], e);
    }
  }
  // Scanning left to right, a block may only be revisited when it is on top
  // of the stack of blocks that still have elements ahead.
  std::vector<int> stack;
  for (int e = 0; e < n; ++e) {
    const int b = owner[static_cast<std::size_t>(e)];
    if (b < 0) return false;
    if (!stack.empty() && stack.back() == b) {
      // continuing the current block
    } else if (std::find(stack.begin(), stack.end(), b) != stack.end()) {
      return false;
    } else {
      stack.push_back(b);
    }
    if (last[static_cast<std::size_t>(b)] == e) stack.pop_back();
  }
  return stack.empty();
}

std::int64_t inversion_count(std::span<const int> perm) {
  std::vector<int> a(perm.begin(), perm.end());
  std::vector<int> buffer(a.size());
  std::int64_t count = 0;
  for (std::size_t width = 1; width < a.size(); width *= 2) {
    for (std::size_t lo = 0; lo < a.size(); lo += 2 * width) {
      const std::size_t mid = std::min(lo + width, a.size());
      const std::size_t hi = std::min(lo + 2 * width, a.size());
      std::size_t i = lo, j = mid, o = lo;
      while (i < mid && j < hi) {
        if (a[j] < a[i]) {
          count += static_cast<std::int64_t>(mid - i);
          buffer[o++] = a[j++];
        } else {
          buffer[o++] = a[i++];
        }
      }
      while (i < mid) buffer[o++] = a[i++];
      while (j < hi) buffer[o++] = a[j++];
    }
    std::swap(a, buffer);
  }
  return count;
}

cplx free_cumulant_from_moments(int n,
                                const std::function<cplx(const std::vector<int>&)>& moment) {
  require_range(n, kMaxNoncrossingSize, "free cumulants");
  if (n == 0) return 0.0;
  std::map<std::uint32_t, cplx> memo;
  std::function<cplx(std::uint32_t)> cumulant = [&](std::uint32_t subset) -> cplx {
    if (auto it = memo.find(subset); it != memo.end()) return it->second;
    std::vector<int> positions;
    for (int i = 0; i < n; ++i)
      if (subset & (1u << static_cast<unsigned>(i))) positions.push_back(i);
    const int size = static_cast<int>(positions.size());
    cplx value = moment(positions);
    for_each_noncrossing_partition(size, [&](const NoncrossingPartition& p) {
      if (p.blocks.size() == 1) return;
      cplx product = 1.0;
      for (const auto& block : p.blocks) {
        std::uint32_t sub = 0;
        for (int local : block) sub |= 1u << static_cast<unsigned>(positions[static_cast<std::size_t>(local)]);
        product *= cumulant(sub);
      }
      value -= product;
    });
    memo.emplace(subset, value);
    return value;
  };
  return cumulant((1u << static_cast<unsigned>(n)) - 1u);
}

}  // namespace qwn
