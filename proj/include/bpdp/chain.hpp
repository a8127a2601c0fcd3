#pragma once

#include <algorithm>
#include <barrier>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "bpdp/frame.hpp"
#include "bpdp/numerics.hpp"
#include "bpdp/special_functions.hpp"
#include "bpdp/transitions.hpp"

namespace bpdp {

enum class Convention { hit_exactly, hit_at_least };

inline std::string_view name(Convention c) { return c == Convention::hit_exactly ? "exact" : "at-least"; }

inline Convention parse_convention(std::string_view s) {
  if (s == "exact") return Convention::hit_exactly;
  if (s == "at-least") return Convention::hit_at_least;
  throw std::invalid_argument("unknown convention: " + std::string(s));
}

// ceil(2 log(1/p) / p)
inline long default_threshold(double p) { return static_cast<long>(std::ceil(2.0 * std::log(1.0 / p) / p)); }

struct ChainParams {
  ModelParams model;
  long threshold;
  Convention convention = Convention::hit_exactly;
  Model rules = Model::frobose;

  static ChainParams for_p(double p, Convention c = Convention::hit_exactly) {
    return {ModelParams::from_p(p), default_threshold(p), c, Model::frobose};
  }
};

struct ProjectedChainState {
  int w;
  int h;
  FrameState s;

  int phi() const { return w + h; }
  friend bool operator==(const ProjectedChainState&, const ProjectedChainState&) = default;
};

struct PiOptions {
  unsigned threads = 1;
  std::optional<double> prune_below;  // drop states with smaller log-probability
  std::uint64_t memory_cap_bytes = std::uint64_t(8) << 30;
};

struct PiResult {
  LogProb log_hit_prob;
  double log_pi;
};

struct ResourceCapError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace detail {

// A rule seen from its target, with the source located by offsets.
struct IncomingRule {
  const TransitionRule* rule;
  int src;
  int dphi;
  int dw;
};

// Incoming rules per target state, in canonical source order:
// source phi ascending, source width ascending, source rank ascending.
inline std::vector<std::vector<IncomingRule>> incoming_rules(Model m) {
  std::vector<std::vector<IncomingRule>> in(frame_state_count);
  for (const auto& r : transition_table(m)) {
    if (r.absorbing()) continue;
    in[index(r.dst)].push_back({&r, index(r.src), r.dphi(), r.dw()});
  }
  for (auto& v : in)
    std::stable_sort(v.begin(), v.end(), [](const IncomingRule& x, const IncomingRule& y) {
      if (x.dphi != y.dphi) return x.dphi > y.dphi;
      if (x.dw != y.dw) return x.dw > y.dw;
      return x.src < y.src;
    });
  return in;
}

// Cost evaluation with f(q*n) tabulated for the integer arguments the DP needs.
class CostTable {
 public:
  CostTable(const ModelParams& mp, long max_arg) : mp_(mp), log_inv_p_(-std::log(mp.p)) {
    log_4_3p_ = std::log(4.0 - 3.0 * mp.p);
    fq_.resize(static_cast<std::size_t>(max_arg) + 1);
    fq_[0] = std::numeric_limits<double>::infinity();
    for (long n = 1; n <= max_arg; ++n) fq_[n] = f(mp.q * double(n));
  }

  double operator()(const Cost& c, int a, int b) const {
    double v = mp_.q * (double(c.lin_a) * a + double(c.lin_b) * b + double(c.lin_1));
    if (c.log_inv_p != 0) v += c.log_inv_p * log_inv_p_;
    for (int i = 0; i < c.n_f; ++i) v += fq_[c.fargs[i].eval(a, b)];
    if (c.minus_log_4_3p) v -= log_4_3p_;
    return v;
  }

 private:
  ModelParams mp_;
  double log_inv_p_;
  double log_4_3p_;
  std::vector<double> fq_;
};

}  // namespace detail

// Largest semi-perimeter increment of a non-absorbing rule: 4 for Frobose, 5 for two-neighbour.
inline int max_phi_step(Model m) {
  int step = 0;
  for (const auto& r : transition_table(m))
    if (!r.absorbing()) step = std::max(step, r.dphi());
  return step;
}

// Levels kept alive by the DP: the current one and every level a rule can jump from.
inline int dp_window(Model m) { return max_phi_step(m) + 1; }

inline std::uint64_t estimate_pi_memory(long threshold, Model m = Model::frobose) {
  const std::uint64_t win = static_cast<std::uint64_t>(dp_window(m));
  const std::uint64_t row = static_cast<std::uint64_t>(threshold) + win;
  return row * frame_state_count * sizeof(double) * win + static_cast<std::uint64_t>(threshold + 16) * sizeof(double);
}

// Probability that the projected chain started at (1,1,0) reaches the threshold
// semi-perimeter before absorption; log Pi = -log(prob)/2.
inline PiResult compute_pi(const ChainParams& params, const PiOptions& opt = {}) {
  const long L = params.threshold;
  if (L < 2) throw std::invalid_argument("threshold must be at least 2");
  if (L == 2) return {0.0, 0.0};
  if (L > std::numeric_limits<int>::max() / 4) throw std::invalid_argument("threshold too large");
  const std::uint64_t need = estimate_pi_memory(L, params.rules);
  if (need > opt.memory_cap_bytes)
    throw ResourceCapError("estimated memory " + std::to_string(need) + " bytes exceeds cap " +
                           std::to_string(opt.memory_cap_bytes));

  const auto incoming = detail::incoming_rules(params.rules);
  const detail::CostTable cost(params.model, 2 * L + 16);
  constexpr int ns = frame_state_count;
  const int window = dp_window(params.rules);
  const std::size_t row = static_cast<std::size_t>(L + window) * ns;
  std::vector<std::vector<LogProb>> ring(window, std::vector<LogProb>(row, log_zero));
  auto level = [&](long phi) -> std::vector<LogProb>& { return ring[phi % window]; };

  const long last_level = params.convention == Convention::hit_exactly ? L : L + window - 2;
  const double prune = opt.prune_below.value_or(-std::numeric_limits<double>::infinity());

  // Fill targets of width [w_lo, w_hi) at level phi.
  auto compute_range = [&](long phi, int w_lo, int w_hi) {
    auto& cur = level(phi);
    const bool beyond = phi >= L;
    for (int w = w_lo; w < w_hi; ++w) {
      for (int s = 0; s < ns; ++s) {
        LogProb acc = log_zero;
        for (const auto& in : incoming[s]) {
          const long sphi = phi - in.dphi;
          if (sphi < 2 || sphi >= L) continue;
          if (in.dphi == 0 && beyond) continue;
          const int sw = w - in.dw;
          const int sh = static_cast<int>(sphi) - sw;
          if (sw < 1 || sh < 1) continue;
          const LogProb src = level(sphi)[static_cast<std::size_t>(sw) * ns + in.src];
          if (src == log_zero) continue;
          acc = log_add(acc, src - cost(in.rule->cost, sw, sh));
        }
        if (acc < prune) acc = log_zero;
        cur[static_cast<std::size_t>(w) * ns + s] = acc;
      }
    }
  };

  LogProb hit = log_zero;
  auto finish_level = [&](long phi) {
    if (phi < L) return;
    const auto& cur = level(phi);
    for (int w = 1; w < phi; ++w)
      for (int s = 0; s < ns; ++s) hit = log_add(hit, cur[static_cast<std::size_t>(w) * ns + s]);
  };

  level(2)[1 * ns + index(FrameState::s0)] = 0.0;
  // Same-level creation flows out of the start state.
  auto seed_level = [&]() {
    auto& cur = level(2);
    for (int s = 1; s < ns; ++s) {
      LogProb acc = log_zero;
      for (const auto& in : incoming[s]) {
        if (in.dphi != 0) continue;
        const LogProb src = cur[1 * ns + in.src];
        if (src == log_zero) continue;
        acc = log_add(acc, src - cost(in.rule->cost, 1, 1));
      }
      cur[1 * ns + s] = acc;
    }
  };
  seed_level();

  auto clear_level = [&](long phi) { std::fill(level(phi).begin(), level(phi).end(), log_zero); };

  const unsigned nthreads = std::max(1u, opt.threads);
  if (nthreads == 1) {
    for (long phi = 3; phi <= last_level; ++phi) {
      clear_level(phi);
      compute_range(phi, 1, static_cast<int>(phi));
      finish_level(phi);
    }
  } else {
    long phi = 3;
    auto on_level_done = [&]() noexcept {
      finish_level(phi);
      ++phi;
      if (phi <= last_level) clear_level(phi);
    };
    std::barrier sync(static_cast<std::ptrdiff_t>(nthreads), on_level_done);
    clear_level(phi);
    auto worker = [&](unsigned t) {
      while (true) {
        const long cur = phi;
        if (cur > last_level) break;
        const long n = cur - 1;
        const int lo = 1 + static_cast<int>(n * t / nthreads);
        const int hi = 1 + static_cast<int>(n * (t + 1) / nthreads);
        compute_range(cur, lo, hi);
        sync.arrive_and_wait();
      }
    };
    std::vector<std::jthread> pool;
    for (unsigned t = 1; t < nthreads; ++t) pool.emplace_back(worker, t);
    worker(0);
  }

  return {hit, hit == log_zero ? std::numeric_limits<double>::infinity() : -0.5 * hit};
}

namespace detail {

inline void brute_force_walk(const ChainParams& params, int w, int h, FrameState s, double prob, double& total) {
  if (s == FrameState::s4) return;
  for (const auto& r : transition_table(params.rules)) {
    if (r.src != s || r.absorbing()) continue;
    const double pr = prob * std::exp(-evaluate_cost(r.cost, w, h, params.model));
    const int nw = w + r.dw();
    const int nh = h + r.dh();
    const long nphi = nw + nh;
    if (nphi >= params.threshold) {
      if (params.convention == Convention::hit_at_least || nphi == params.threshold) total += pr;
    } else {
      brute_force_walk(params, nw, nh, r.dst, pr, total);
    }
  }
}

}  // namespace detail

inline constexpr long brute_force_max_threshold = 12;

// Exhaustive enumeration of all trajectories; exponential time.
inline LogProb brute_force_hit_prob(const ChainParams& params) {
  if (params.threshold < 2) throw std::invalid_argument("threshold must be at least 2");
  if (params.threshold > brute_force_max_threshold)
    throw std::invalid_argument("threshold too large for brute-force enumeration");
  if (params.threshold == 2) return 0.0;
  double total = 0.0;
  detail::brute_force_walk(params, 1, 1, FrameState::s0, 1.0, total);
  return total > 0.0 ? std::log(total) : log_zero;
}

// Trajectory of the projected chain from (1,1,0), stopped on absorption, on
// reaching the threshold, or (for sub-stochastic rules) on being killed.
inline std::vector<ProjectedChainState> sample_trajectory(const ChainParams& params, std::mt19937_64& rng) {
  std::vector<ProjectedChainState> path{{1, 1, FrameState::s0}};
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const auto& table = transition_table(params.rules);
  while (true) {
    const auto cur = path.back();
    if (cur.s == FrameState::s4 || cur.phi() >= params.threshold) break;
    double x = unif(rng);
    const TransitionRule* chosen = nullptr;
    for (const auto& r : table) {
      if (r.src != cur.s) continue;
      x -= std::exp(transition_log_prob(r, cur.w, cur.h, params.model));
      if (x < 0.0) {
        chosen = &r;
        break;
      }
    }
    if (chosen == nullptr) break;
    path.push_back({cur.w + chosen->dw(), cur.h + chosen->dh(), chosen->dst});
  }
  return path;
}

inline std::vector<ProjectedChainState> sample_trajectory(const ChainParams& params, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return sample_trajectory(params, rng);
}

}  // namespace bpdp
