#include <algorithm>
#include <bit>
#include <chrono>
#include <map>

#include "slotnet/partition.hpp"

namespace slotnet {

namespace {

using Clock = std::chrono::steady_clock;
using Word = std::uint64_t;

struct FlowInfo {
  std::size_t spec;  // index into instance.flows
  std::size_t app;   // dense app index
  std::int64_t period;
  std::int64_t jitter;
  std::uint32_t count;
  bool increasing;  // orientation fixed by symmetry breaking
  std::size_t first_var;
};

struct Var {
  std::size_t flow;
  std::uint32_t index;
};

struct State {
  std::vector<Word> dom;
  std::vector<int> owner;
  std::vector<std::int64_t> value;
};

struct Aborted {};

class Search {
 public:
  Search(const ProblemInstance& inst, Clock::time_point deadline) : inst_(inst), deadline_(deadline) {
    n_ = inst.ring_size;
    len_ = static_cast<std::size_t>(inst.horizon / inst.slot);
    words_ = (len_ + 63) / 64;

    std::map<AppId, std::size_t> app_index;
    for (const auto& f : inst.flows) app_index.emplace(f.app, 0);
    for (auto& [id, idx] : app_index) {
      idx = apps_.size();
      apps_.push_back(id);
    }

    // Flows with the largest share of the ring first.
    std::vector<std::size_t> order(inst.flows.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      const auto& fa = inst.flows[a];
      const auto& fb = inst.flows[b];
      if (fa.period != fb.period) return fa.period < fb.period;
      if (fa.app != fb.app) return fa.app < fb.app;
      return fa.flow < fb.flow;
    });
    for (std::size_t i : order) {
      const auto& f = inst.flows[i];
      FlowInfo info;
      info.spec = i;
      info.app = app_index.at(f.app);
      info.period = f.period / inst.slot;
      info.jitter = f.max_jitter / inst.slot;
      info.count = static_cast<std::uint32_t>(inst.horizon / f.period);
      info.increasing = 2 * info.jitter < info.period;
      info.first_var = vars_.size();
      for (std::uint32_t l = 0; l < info.count; ++l) vars_.push_back({flows_.size(), l});
      flows_.push_back(info);
    }
    app_vars_.resize(apps_.size());
    for (std::size_t v = 0; v < vars_.size(); ++v) app_vars_[flows_[vars_[v].flow].app].push_back(v);

    residue_.assign(static_cast<std::size_t>(n_) * words_, 0);
    for (std::size_t t = 0; t < len_; ++t) residue_[(t % n_) * words_ + t / 64] |= Word{1} << (t % 64);
  }

  SolveResult run() {
    SolveResult result;
    State root;
    root.dom.assign(vars_.size() * words_, 0);
    root.owner.assign(n_, -1);
    root.value.assign(vars_.size(), -1);
    for (std::size_t v = 0; v < vars_.size(); ++v) {
      const FlowInfo& f = flows_[vars_[v].flow];
      std::int64_t lo = 0;
      std::int64_t hi = static_cast<std::int64_t>(len_) - 1;
      if (f.increasing) {
        const std::int64_t l = vars_[v].index;
        lo = std::max<std::int64_t>(lo, l * f.period - f.jitter);
        hi = std::min<std::int64_t>(hi, hi - (static_cast<std::int64_t>(f.count) - 1 - l) * f.period + f.jitter);
      }
      set_range(dom(root, v), lo, hi);
      if (empty(dom(root, v))) {
        result.status = SolveStatus::Infeasible;
        return result;
      }
    }
    try {
      if (dfs(root)) {
        result.status = SolveStatus::Feasible;
        result.solution = build(*found_);
      } else {
        result.status = SolveStatus::Infeasible;
      }
    } catch (const Aborted&) {
      result.status = SolveStatus::Timeout;
    }
    result.nodes = nodes_;
    return result;
  }

 private:
  Word* dom(State& s, std::size_t v) const { return s.dom.data() + v * words_; }

  bool empty(const Word* d) const {
    for (std::size_t w = 0; w < words_; ++w)
      if (d[w]) return false;
    return true;
  }

  std::size_t count(const Word* d) const {
    std::size_t c = 0;
    for (std::size_t w = 0; w < words_; ++w) c += static_cast<std::size_t>(std::popcount(d[w]));
    return c;
  }

  // d = bits in [lo, hi] (clipped to the horizon).
  void set_range(Word* d, std::int64_t lo, std::int64_t hi) const {
    std::fill(d, d + words_, 0);
    add_range(d, lo, hi);
  }

  void add_range(Word* d, std::int64_t lo, std::int64_t hi) const {
    lo = std::max<std::int64_t>(lo, 0);
    hi = std::min<std::int64_t>(hi, static_cast<std::int64_t>(len_) - 1);
    for (std::int64_t t = lo; t <= hi; ++t) d[t / 64] |= Word{1} << (t % 64);
  }

  // Restrict instance m of flow f given that instance l sits at x.
  bool restrict_sibling(State& s, const FlowInfo& f, std::uint32_t l, std::uint32_t m, std::int64_t x) {
    std::vector<Word>& mask = scratch_;
    mask.assign(words_, 0);
    const std::int64_t diff = static_cast<std::int64_t>(m) - static_cast<std::int64_t>(l);
    if (f.increasing) {
      add_range(mask.data(), x + diff * f.period - f.jitter, x + diff * f.period + f.jitter);
    } else {
      const std::int64_t d = diff < 0 ? -diff : diff;
      const std::int64_t near = std::max<std::int64_t>(0, d * f.period - f.jitter);
      const std::int64_t far = d * f.period + f.jitter;
      add_range(mask.data(), x + near, x + far);
      add_range(mask.data(), x - far, x - near);
    }
    Word* dm = dom(s, f.first_var + m);
    bool any = false;
    for (std::size_t w = 0; w < words_; ++w) {
      dm[w] &= mask[w];
      any |= dm[w] != 0;
    }
    return any;
  }

  bool assign(State& s, std::size_t v, std::int64_t x) {
    s.value[v] = x;
    Word* dv = dom(s, v);
    std::fill(dv, dv + words_, 0);
    dv[x / 64] = Word{1} << (x % 64);

    const FlowInfo& f = flows_[vars_[v].flow];
    const std::uint32_t l = vars_[v].index;
    for (std::uint32_t m = 0; m < f.count; ++m) {
      if (m == l || s.value[f.first_var + m] >= 0) continue;
      if (!restrict_sibling(s, f, l, m, x)) return false;
    }

    const Word bit = Word{1} << (x % 64);
    for (std::size_t u : app_vars_[f.app]) {
      if (u == v || s.value[u] >= 0) continue;
      Word* du = dom(s, u);
      du[x / 64] &= ~bit;
      if (empty(du)) return false;
    }

    const std::size_t slot = static_cast<std::size_t>(x) % n_;
    if (s.owner[slot] < 0) {
      s.owner[slot] = static_cast<int>(f.app);
      const Word* r = residue_.data() + slot * words_;
      for (std::size_t a = 0; a < apps_.size(); ++a) {
        if (a == f.app) continue;
        for (std::size_t u : app_vars_[a]) {
          if (s.value[u] >= 0) continue;
          Word* du = dom(s, u);
          bool any = false;
          for (std::size_t w = 0; w < words_; ++w) {
            du[w] &= ~r[w];
            any |= du[w] != 0;
          }
          if (!any) return false;
        }
      }
    }
    return true;
  }

  bool dfs(State& s) {
    if ((++nodes_ & 0xff) == 0 && Clock::now() > deadline_) throw Aborted{};

    std::size_t best = vars_.size();
    std::size_t best_size = 0;
    for (std::size_t v = 0; v < vars_.size(); ++v) {
      if (s.value[v] >= 0) continue;
      const std::size_t c = count(dom(s, v));
      if (best == vars_.size() || c < best_size) {
        best = v;
        best_size = c;
        if (c == 1) break;
      }
    }
    if (best == vars_.size()) {
      found_ = s;
      return true;
    }

    const std::vector<Word> values(dom(s, best), dom(s, best) + words_);
    for (std::size_t w = 0; w < words_; ++w) {
      Word bits = values[w];
      while (bits) {
        const int b = std::countr_zero(bits);
        bits &= bits - 1;
        State child = s;
        if (assign(child, best, static_cast<std::int64_t>(w * 64 + static_cast<std::size_t>(b))) && dfs(child))
          return true;
      }
    }
    return false;
  }

  Solution build(const State& s) const {
    Solution sol;
    for (std::size_t slot = 0; slot < n_; ++slot)
      if (s.owner[slot] >= 0) sol.partitions[apps_[static_cast<std::size_t>(s.owner[slot])]].insert(
          static_cast<std::uint32_t>(slot));
    for (std::size_t v = 0; v < vars_.size(); ++v) {
      const FlowSpec& spec = inst_.flows[flows_[vars_[v].flow].spec];
      sol.schedule[{spec.app, spec.flow, vars_[v].index}] = s.value[v] * inst_.slot;
    }
    return sol;
  }

  const ProblemInstance& inst_;
  Clock::time_point deadline_;
  std::uint32_t n_ = 0;
  std::size_t len_ = 0;
  std::size_t words_ = 0;
  std::vector<AppId> apps_;
  std::vector<FlowInfo> flows_;
  std::vector<Var> vars_;
  std::vector<std::vector<std::size_t>> app_vars_;
  std::vector<Word> residue_;
  std::vector<Word> scratch_;
  std::optional<State> found_;
  std::uint64_t nodes_ = 0;
};

}  // namespace

SolveResult solve(const ProblemInstance& instance, std::chrono::milliseconds timeout) {
  instance.validate();
  const auto start = Clock::now();
  Search search(instance, start + timeout);
  SolveResult result = search.run();
  result.elapsed = std::chrono::duration_cast<std::chrono::nanoseconds>(Clock::now() - start);
  return result;
}

}  // namespace slotnet
