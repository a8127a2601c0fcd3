#pragma once

#include <cmath>
#include <vector>

#include "bpdp/frame.hpp"
#include "bpdp/numerics.hpp"
#include "bpdp/special_functions.hpp"

namespace bpdp {

// Argument q * (ca*a + cb*b + c0) of an f-term in a cost formula.
struct FArg {
  int ca = 0;
  int cb = 0;
  int c0 = 0;

  int eval(int a, int b) const { return ca * a + cb * b + c0; }
};

// -log of a transition probability as a function of the source dimensions (a, b):
//   q*(lin_a*a + lin_b*b + lin_1) + log_inv_p*log(1/p) + sum f(q*arg) - [log(4-3p)]
struct Cost {
  int lin_a = 0;
  int lin_b = 0;
  int lin_1 = 0;
  int log_inv_p = 0;
  int n_f = 0;
  FArg fargs[2] = {};
  bool minus_log_4_3p = false;
};

struct TransitionRule {
  FrameState src;
  FrameState dst;
  int alpha;  // left extension
  int beta;   // bottom extension
  int gamma;  // right extension
  int delta;  // top extension
  Cost cost;

  int dw() const { return alpha + gamma; }
  int dh() const { return beta + delta; }
  int dphi() const { return alpha + beta + gamma + delta; }
  // The zero-cost loop on the absorbing state.
  bool absorbing() const { return src == dst && dphi() == 0; }
};

enum class Model { frobose, two_neighbour };

inline double evaluate_cost(const Cost& c, int a, int b, const ModelParams& mp) {
  double v = mp.q * (double(c.lin_a) * a + double(c.lin_b) * b + double(c.lin_1));
  if (c.log_inv_p != 0) v += c.log_inv_p * -std::log(mp.p);
  for (int i = 0; i < c.n_f; ++i) v += f(mp.q * c.fargs[i].eval(a, b));
  if (c.minus_log_4_3p) v -= std::log(4.0 - 3.0 * mp.p);
  return v;
}

inline LogProb transition_log_prob(const TransitionRule& r, int w, int h, const ModelParams& mp) {
  return -evaluate_cost(r.cost, w, h, mp);
}

namespace detail {

struct CostBuilder {
  Cost c;
  CostBuilder& qa(int k = 1) { c.lin_a += k; return *this; }
  CostBuilder& qb(int k = 1) { c.lin_b += k; return *this; }
  CostBuilder& q(int k = 1) { c.lin_1 += k; return *this; }
  CostBuilder& log_inv_p(int k = 1) { c.log_inv_p += k; return *this; }
  CostBuilder& f(int ca, int cb, int c0 = 0) { c.fargs[c.n_f++] = {ca, cb, c0}; return *this; }
  CostBuilder& fa() { return f(1, 0); }
  CostBuilder& fb() { return f(0, 1); }
  CostBuilder& minus_log_4_3p() { c.minus_log_4_3p = true; return *this; }
  operator Cost() const { return c; }
};

inline CostBuilder cost() { return {}; }

inline std::vector<TransitionRule> build_frobose_table() {
  using S = FrameState;
  return {
      // buffer creations
      {S::s0, S::s1, 0, 0, 0, 0, cost().qb()},
      {S::s1, S::s2, 0, 0, 0, 0, cost().qa()},
      {S::s2, S::s3, 0, 0, 0, 0, cost().qb()},
      {S::s3, S::s4, 0, 0, 0, 0, cost().qa()},
      {S::s2p, S::s3, 0, 0, 0, 0, cost().qb()},
      {S::s1p, S::s2p, 0, 0, 0, 0, cost().qa()},
      {S::s1pp, S::s2, 0, 0, 0, 0, cost().qb()},
      // loops
      {S::s0, S::s0, 0, 0, 1, 0, cost().fb()},
      {S::s1, S::s1, 0, 0, 0, 1, cost().fa().q()},
      {S::s2, S::s2, 1, 0, 0, 0, cost().fb().q()},
      {S::s3, S::s3, 0, 1, 0, 0, cost().fa().q(2)},
      {S::s2p, S::s2p, 0, 0, 1, 0, cost().fb().q()},
      {S::s1p, S::s1p, 0, 0, 0, 1, cost().fa().q()},
      {S::s1pp, S::s1pp, 0, 0, 1, 0, cost().fb().q()},
      {S::s4, S::s4, 0, 0, 0, 0, cost()},
      // single buffer deletions
      {S::s1, S::s0, 0, 0, 1, 1, cost().log_inv_p().fa()},
      {S::s2, S::s1, 1, 0, 0, 1, cost().log_inv_p().fb().q()},
      {S::s3, S::s2, 1, 1, 0, 0, cost().log_inv_p().fa().q(2)},
      {S::s3, S::s2p, 0, 1, 1, 0, cost().log_inv_p().fa().q(2)},
      {S::s2p, S::s1p, 0, 0, 1, 1, cost().log_inv_p().fb().q()},
      {S::s1p, S::s0, 1, 0, 0, 1, cost().log_inv_p().fa()},
      {S::s1pp, S::s0, 0, 0, 1, 1, cost().log_inv_p().fb()},
      // double buffer deletions
      {S::s2, S::s0, 1, 0, 1, 1, cost().log_inv_p(2).fb()},
      {S::s2p, S::s0, 1, 0, 1, 1, cost().log_inv_p(2).fb()},
      {S::s3, S::s1, 1, 1, 0, 1, cost().log_inv_p(2).fa().q(2)},
      {S::s3, S::s1p, 0, 1, 1, 1, cost().log_inv_p(2).fa().q(2)},
      {S::s3, S::s1pp, 1, 1, 1, 0, cost().log_inv_p(2).fa().q(2)},
      // triple buffer deletion
      {S::s3, S::s0, 1, 1, 1, 1, cost().log_inv_p(3).fa().minus_log_4_3p()},
  };
}

// The rows of the two-neighbour chain that contribute to the second-order term.
inline std::vector<TransitionRule> build_two_neighbour_table() {
  using S = FrameState;
  std::vector<TransitionRule> t = {
      // buffer creations
      {S::s0, S::s1, 0, 0, 0, 0, cost().qb(2)},
      {S::s1, S::s2, 0, 0, 0, 0, cost().qa(2).q()},
      {S::s2, S::s3, 0, 0, 0, 0, cost().qb(2).q()},
      {S::s3, S::s4, 0, 0, 0, 0, cost().qa(2).q(2)},
      {S::s2p, S::s3, 0, 0, 0, 0, cost().qb(2).q()},
      {S::s1p, S::s2p, 0, 0, 0, 0, cost().qa(2).q()},
      // loops
      {S::s0, S::s0, 0, 0, 1, 0, cost().fb()},
      {S::s0, S::s0, 0, 0, 2, 0, cost().fb().qb()},
      {S::s1, S::s1, 0, 0, 0, 1, cost().fa().q(2)},
      {S::s1, S::s1, 0, 0, 0, 2, cost().fa().q(4).qa()},
      {S::s2, S::s2, 1, 0, 0, 0, cost().fb().q(2)},
      {S::s2, S::s2, 2, 0, 0, 0, cost().fb().q(4).qb()},
      {S::s3, S::s3, 0, 1, 0, 0, cost().fa().q(4)},
      {S::s3, S::s3, 0, 2, 0, 0, cost().fa().q(8).qa()},
      {S::s2p, S::s2p, 0, 0, 1, 0, cost().fb().q(2)},
      {S::s2p, S::s2p, 0, 0, 2, 0, cost().fb().q(4).qb()},
      {S::s1p, S::s1p, 0, 0, 0, 1, cost().fa().q(4)},
      {S::s1p, S::s1p, 0, 0, 0, 2, cost().fa().q(8).qa()},
      {S::s4, S::s4, 0, 0, 0, 0, cost()},
  };
  // Deletion rows come in families of four sharing one cost pattern.
  struct Family {
    FrameState src, dst;
    int offs[4][4];
  };
  const Family one_to_zero[] = {
      {S::s1, S::s0, {{0, 0, 2, 1}, {0, 0, 3, 1}, {0, 0, 2, 2}, {0, 0, 3, 2}}},
      {S::s1p, S::s0, {{2, 0, 0, 1}, {3, 0, 0, 1}, {2, 0, 0, 2}, {3, 0, 0, 2}}},
  };
  for (const auto& fam : one_to_zero) {
    const Cost cs[4] = {cost().log_inv_p().f(1, 0, 1),
                        cost().log_inv_p().f(0, 1, 1).q(),
                        cost().f(0, 0, 2).fa().qa().q(),
                        cost().log_inv_p().fa().f(0, 1, 2).qa().q(3)};
    for (int i = 0; i < 4; ++i)
      t.push_back({fam.src, fam.dst, fam.offs[i][0], fam.offs[i][1], fam.offs[i][2], fam.offs[i][3], cs[i]});
  }
  const Family two_to_one[] = {
      {S::s2, S::s1, {{1, 0, 0, 2}, {1, 0, 0, 3}, {2, 0, 0, 2}, {2, 0, 0, 3}}},
      {S::s2p, S::s1p, {{0, 0, 1, 2}, {0, 0, 1, 3}, {0, 0, 2, 2}, {0, 0, 2, 3}}},
  };
  for (const auto& fam : two_to_one) {
    const Cost cs[4] = {cost().log_inv_p().f(0, 1, 1).q(3),
                        cost().log_inv_p().f(1, 0, 1).q(6),
                        cost().f(0, 0, 2).fb().qb().q(4),
                        cost().log_inv_p().fb().f(1, 0, 2).qb().q(8)};
    for (int i = 0; i < 4; ++i)
      t.push_back({fam.src, fam.dst, fam.offs[i][0], fam.offs[i][1], fam.offs[i][2], fam.offs[i][3], cs[i]});
  }
  const Family three_to_two[] = {
      {S::s3, S::s2p, {{0, 1, 2, 0}, {0, 1, 3, 0}, {0, 2, 2, 0}, {0, 2, 3, 0}}},
      {S::s3, S::s2, {{2, 1, 0, 0}, {3, 1, 0, 0}, {2, 2, 0, 0}, {3, 2, 0, 0}}},
  };
  for (const auto& fam : three_to_two) {
    const Cost cs[4] = {cost().log_inv_p().f(1, 0, 1).q(5),
                        cost().log_inv_p().f(0, 1, 1).q(8),
                        cost().f(0, 0, 2).fa().qa().q(8),
                        cost().log_inv_p().fa().f(0, 1, 2).qa().q(12)};
    for (int i = 0; i < 4; ++i)
      t.push_back({fam.src, fam.dst, fam.offs[i][0], fam.offs[i][1], fam.offs[i][2], fam.offs[i][3], cs[i]});
  }
  return t;
}

}  // namespace detail

inline const std::vector<TransitionRule>& frobose_table() {
  static const std::vector<TransitionRule> table = detail::build_frobose_table();
  return table;
}

inline const std::vector<TransitionRule>& two_neighbour_table() {
  static const std::vector<TransitionRule> table = detail::build_two_neighbour_table();
  return table;
}

inline const std::vector<TransitionRule>& transition_table(Model m) {
  return m == Model::frobose ? frobose_table() : two_neighbour_table();
}

inline std::vector<TransitionRule> transitions_from(Model m, FrameState s) {
  std::vector<TransitionRule> out;
  for (const auto& r : transition_table(m))
    if (r.src == s) out.push_back(r);
  return out;
}

inline std::vector<TransitionRule> frobose_transitions(FrameState s) {
  return transitions_from(Model::frobose, s);
}

inline std::vector<TransitionRule> two_neighbour_transitions(FrameState s) {
  return transitions_from(Model::two_neighbour, s);
}

// Linear-domain total probability of the rules leaving s at dimensions (w, h).
inline double outgoing_mass(Model m, FrameState s, int w, int h, const ModelParams& mp) {
  double sum = 0.0;
  for (const auto& r : transition_table(m))
    if (r.src == s) sum += std::exp(transition_log_prob(r, w, h, mp));
  return sum;
}

}  // namespace bpdp
