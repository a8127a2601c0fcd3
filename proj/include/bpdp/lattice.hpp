#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <tuple>
#include <vector>

#include "bpdp/frame.hpp"
#include "bpdp/geometry.hpp"
#include "bpdp/transitions.hpp"

namespace bpdp {

// Infected sites inside a bounding box; everything outside is healthy.
class Configuration {
 public:
  Configuration() : Configuration(Rectangle{0, 0, 1, 1}) {}
  explicit Configuration(Rectangle box) : box_(box), cells_(static_cast<std::size_t>(box.area()), 0) {
    if (!box.valid()) throw std::invalid_argument("malformed bounding box");
  }

  static Configuration from_sites(Rectangle box, const std::vector<Site>& sites) {
    Configuration c(box);
    for (Site s : sites) c.set(s);
    return c;
  }

  template <class Rng>
  static Configuration random(Rectangle box, double p, Rng& rng) {
    Configuration c(box);
    std::bernoulli_distribution coin(p);
    for (auto& v : c.cells_) v = coin(rng) ? 1 : 0;
    return c;
  }

  const Rectangle& box() const { return box_; }

  bool infected(Site s) const { return box_.contains(s) && cells_[offset(s)] != 0; }
  bool infected(int x, int y) const { return infected(Site{x, y}); }

  void set(Site s, bool value = true) {
    if (!box_.contains(s)) throw std::out_of_range("site outside bounding box");
    cells_[offset(s)] = value ? 1 : 0;
  }

  long count() const { return static_cast<long>(std::count(cells_.begin(), cells_.end(), 1)); }

  long count_in(const Rectangle& r) const {
    long n = 0;
    for (int y = r.b; y < r.d; ++y)
      for (int x = r.a; x < r.c; ++x) n += infected(x, y) ? 1 : 0;
    return n;
  }

  bool any_in(const Rectangle& r) const {
    for (int y = r.b; y < r.d; ++y)
      for (int x = r.a; x < r.c; ++x)
        if (infected(x, y)) return true;
    return false;
  }

  std::vector<Site> sites() const {
    std::vector<Site> out;
    for (int y = box_.b; y < box_.d; ++y)
      for (int x = box_.a; x < box_.c; ++x)
        if (infected(x, y)) out.push_back({x, y});
    return out;
  }

  // The sites of this configuration inside r, on the bounding box r.
  Configuration restricted(const Rectangle& r) const {
    Configuration c(r);
    for (int y = r.b; y < r.d; ++y)
      for (int x = r.a; x < r.c; ++x)
        if (infected(x, y)) c.set({x, y});
    return c;
  }

  bool equals_rectangle(const Rectangle& r) const {
    for (int y = box_.b; y < box_.d; ++y)
      for (int x = box_.a; x < box_.c; ++x)
        if (infected(x, y) != r.contains(Site{x, y})) return false;
    return box_.contains(r);
  }

  friend bool operator==(const Configuration& l, const Configuration& r) {
    return l.box_ == r.box_ && l.cells_ == r.cells_;
  }

 private:
  std::size_t offset(Site s) const {
    return static_cast<std::size_t>(s.y - box_.b) * static_cast<std::size_t>(box_.width()) +
           static_cast<std::size_t>(s.x - box_.a);
  }

  Rectangle box_;
  std::vector<std::uint8_t> cells_;
};

namespace detail {

inline constexpr int nbr_dx[4] = {1, -1, 0, 0};
inline constexpr int nbr_dy[4] = {0, 0, 1, -1};

inline int infected_neighbours(const Configuration& a, int x, int y) {
  int n = 0;
  for (int k = 0; k < 4; ++k) n += a.infected(x + nbr_dx[k], y + nbr_dy[k]) ? 1 : 0;
  return n;
}

// y is the only healthy corner of some unit square.
inline bool frobose_rule(const Configuration& a, int x, int y) {
  for (int dx : {-1, 1})
    for (int dy : {-1, 1})
      if (a.infected(x + dx, y) && a.infected(x, y + dy) && a.infected(x + dx, y + dy)) return true;
  return false;
}

inline bool update_rule(Model m, const Configuration& a, int x, int y) {
  return m == Model::two_neighbour ? infected_neighbours(a, x, y) >= 2 : frobose_rule(a, x, y);
}

}  // namespace detail

// Synchronous dynamics inside the box; times[i] is the step at which site i
// (row-major in the box) becomes infected, or -1 if never.
inline std::vector<int> infection_times(Model m, const Configuration& initial) {
  const Rectangle& box = initial.box();
  std::vector<int> times(static_cast<std::size_t>(box.area()), -1);
  Configuration cur = initial;
  std::size_t i = 0;
  for (int y = box.b; y < box.d; ++y)
    for (int x = box.a; x < box.c; ++x, ++i)
      if (cur.infected(x, y)) times[i] = 0;
  for (int t = 1;; ++t) {
    std::vector<Site> fresh;
    for (int y = box.b; y < box.d; ++y)
      for (int x = box.a; x < box.c; ++x)
        if (!cur.infected(x, y) && detail::update_rule(m, cur, x, y)) fresh.push_back({x, y});
    if (fresh.empty()) break;
    for (Site s : fresh) {
      cur.set(s);
      times[static_cast<std::size_t>(s.y - box.b) * box.width() + (s.x - box.a)] = t;
    }
  }
  return times;
}

// Step at which `site` becomes infected; nullopt if it never is.
inline std::optional<int> infection_time(Model m, const Configuration& initial, Site site) {
  const Rectangle& box = initial.box();
  if (!box.contains(site)) return std::nullopt;
  const int t = infection_times(m, initial)[static_cast<std::size_t>(site.y - box.b) * box.width() + (site.x - box.a)];
  if (t < 0) return std::nullopt;
  return t;
}

// Least fixpoint of the update rule by direct iteration.
inline Configuration closure(Model m, const Configuration& initial) {
  Configuration cur = initial;
  const Rectangle& box = initial.box();
  bool changed = true;
  while (changed) {
    changed = false;
    std::vector<Site> fresh;
    for (int y = box.b; y < box.d; ++y)
      for (int x = box.a; x < box.c; ++x)
        if (!cur.infected(x, y) && detail::update_rule(m, cur, x, y)) fresh.push_back({x, y});
    for (Site s : fresh) cur.set(s);
    changed = !fresh.empty();
  }
  return cur;
}

inline Configuration closure_two_neighbour(const Configuration& a) { return closure(Model::two_neighbour, a); }
inline Configuration closure_frobose(const Configuration& a) { return closure(Model::frobose, a); }

// Repeatedly merge rectangles at graph distance <= 2 (two-neighbour) or <= 1
// (Frobose) into their bounding rectangle.
inline std::vector<Rectangle> rectangles_process(Model m, const Configuration& a) {
  const int reach = m == Model::two_neighbour ? 2 : 1;
  std::vector<Rectangle> rects;
  for (Site s : a.sites()) rects.push_back({s.x, s.y, s.x + 1, s.y + 1});
  bool merged = true;
  while (merged) {
    merged = false;
    for (std::size_t i = 0; i < rects.size() && !merged; ++i)
      for (std::size_t j = i + 1; j < rects.size(); ++j)
        if (distance(rects[i], rects[j]) <= reach) {
          rects[i] = bounding(rects[i], rects[j]);
          rects.erase(rects.begin() + static_cast<std::ptrdiff_t>(j));
          merged = true;
          break;
        }
  }
  std::sort(rects.begin(), rects.end(), [](const Rectangle& x, const Rectangle& y) {
    return std::tie(x.a, x.b, x.c, x.d) < std::tie(y.a, y.b, y.c, y.d);
  });
  return rects;
}

inline Configuration closure_by_rectangles(Model m, const Configuration& a) {
  Configuration out(a.box());
  for (const Rectangle& r : rectangles_process(m, a))
    for (Site s : r.sites()) out.set(s);
  return out;
}

// Germ set of the local dynamics started from germ x, following the synchronous
// definitions for A^x_t and X^x_t.
inline Configuration local_closure(Model m, const Configuration& initial, Site germ) {
  if (!initial.infected(germ)) throw std::invalid_argument("germ must be an infected site");
  const Rectangle& box = initial.box();
  Configuration infected = initial;
  Configuration germs(box);
  germs.set(germ);
  auto has_germ_neighbour = [&](int x, int y) {
    for (int k = 0; k < 4; ++k)
      if (germs.infected(x + detail::nbr_dx[k], y + detail::nbr_dy[k])) return true;
    return false;
  };
  auto local_rule = [&](int x, int y) {
    if (m == Model::two_neighbour) return detail::infected_neighbours(infected, x, y) >= 2 && has_germ_neighbour(x, y);
    for (int dx : {-1, 1})
      for (int dy : {-1, 1}) {
        const bool side_h = infected.infected(x + dx, y);
        const bool side_v = infected.infected(x, y + dy);
        const bool germ_side = germs.infected(x + dx, y) || germs.infected(x, y + dy);
        if (side_h && side_v && germ_side && infected.infected(x + dx, y + dy)) return true;
      }
    return false;
  };
  while (true) {
    std::vector<Site> new_infected;
    for (int y = box.b; y < box.d; ++y)
      for (int x = box.a; x < box.c; ++x)
        if (!infected.infected(x, y) && local_rule(x, y)) new_infected.push_back({x, y});
    for (Site s : new_infected) infected.set(s);
    std::vector<Site> new_germs;
    for (int y = box.b; y < box.d; ++y)
      for (int x = box.a; x < box.c; ++x)
        if (infected.infected(x, y) && !germs.infected(x, y) && has_germ_neighbour(x, y)) new_germs.push_back({x, y});
    for (Site s : new_germs) germs.set(s);
    if (new_infected.empty() && new_germs.empty()) break;
  }
  return germs;
}

inline Configuration local_closure_frobose(const Configuration& a, Site germ) {
  return local_closure(Model::frobose, a, germ);
}
inline Configuration local_closure_two_neighbour(const Configuration& a, Site germ) {
  return local_closure(Model::two_neighbour, a, germ);
}

// Local Frobose growth of a filled seed rectangle: absorb, one at a time, any
// infected site edge-adjacent to a side, while staying inside `region`.
// `revealed` cells (if any) are treated as healthy.
template <class Healthy>
Rectangle grow_rectangle(const Configuration& a, Rectangle seed, const Rectangle& region, Healthy&& masked) {
  auto live = [&](int x, int y) { return region.contains(Site{x, y}) && a.infected(x, y) && !masked(Site{x, y}); };
  Rectangle r = seed;
  bool grew = true;
  while (grew) {
    grew = false;
    for (int y = r.b; y < r.d && !grew; ++y) {
      if (live(r.c, y)) { r.c += 1; grew = true; }
      else if (live(r.a - 1, y)) { r.a -= 1; grew = true; }
    }
    for (int x = r.a; x < r.c && !grew; ++x) {
      if (live(x, r.d)) { r.d += 1; grew = true; }
      else if (live(x, r.b - 1)) { r.b -= 1; grew = true; }
    }
  }
  return r;
}

inline Rectangle grow_rectangle(const Configuration& a, Rectangle seed, const Rectangle& region) {
  return grow_rectangle(a, seed, region, [](Site) { return false; });
}

// ---------------------------------------------------------------------------
// Events

enum class EventKind {
  internally_filled,
  internally_filled_f,
  local_internally_filled,
  local_internally_filled_f,
  crossing,
  crossing_f,
  occupied,
  no_horizontal_gap,
  no_vertical_gap,
  traversable_east,
  traversable_north,
  traversable_west,
  traversable_south,
};

struct EventInfo {
  EventKind kind;
  std::string_view id;
};

inline constexpr EventInfo event_catalogue[] = {
    {EventKind::internally_filled, "I"},        {EventKind::internally_filled_f, "IF"},
    {EventKind::local_internally_filled, "Iloc"}, {EventKind::local_internally_filled_f, "IFloc"},
    {EventKind::crossing, "C"},                 {EventKind::crossing_f, "CF"},
    {EventKind::occupied, "O"},                 {EventKind::no_horizontal_gap, "Grow"},
    {EventKind::no_vertical_gap, "Gcol"},       {EventKind::traversable_east, "Teast"},
    {EventKind::traversable_north, "Tnorth"},   {EventKind::traversable_west, "Twest"},
    {EventKind::traversable_south, "Tsouth"},
};

inline std::string_view event_id(EventKind k) {
  for (const auto& e : event_catalogue)
    if (e.kind == k) return e.id;
  return "?";
}

inline EventKind parse_event(std::string_view id) {
  for (const auto& e : event_catalogue)
    if (e.id == id) return e.kind;
  throw std::invalid_argument("unknown event: " + std::string(id));
}

struct EventSpec {
  EventKind kind;
  Rectangle rect;              // R for rectangle events
  Rectangle inner{};           // S for crossings
  std::vector<Site> sites{};   // X for occupation
};

inline bool internally_filled(Model m, const Rectangle& r, const Configuration& a) {
  return closure(m, a.restricted(r)).equals_rectangle(r);
}

inline bool locally_internally_filled(Model m, const Rectangle& r, const Configuration& a) {
  const Configuration inside = a.restricted(r);
  for (Site x : inside.sites())
    if (local_closure(m, inside, x).equals_rectangle(r)) return true;
  return false;
}

inline bool crossing(Model m, const Rectangle& s, const Rectangle& r, const Configuration& a) {
  if (!r.contains(s)) throw std::invalid_argument("crossing requires nested rectangles");
  Configuration inside = a.restricted(r);
  for (Site x : s.sites()) inside.set(x);
  for (Site x : s.sites())
    if (local_closure(m, inside, x).equals_rectangle(r)) return true;
  return false;
}

inline bool occupied(const std::vector<Site>& xs, const Configuration& a) {
  for (Site x : xs)
    if (a.infected(x)) return true;
  return false;
}

inline bool no_horizontal_gap(const Rectangle& r, const Configuration& a) {
  for (int y = r.b; y < r.d; ++y)
    if (!a.any_in({r.a, y, r.c, y + 1})) return false;
  return true;
}

inline bool no_vertical_gap(const Rectangle& r, const Configuration& a) {
  for (int x = r.a; x < r.c; ++x)
    if (!a.any_in({x, r.b, x + 1, r.d})) return false;
  return true;
}

enum class Direction { east, north, west, south };

// An infection on every two consecutive lines and on the far line.
inline bool traversable(Direction dir, const Rectangle& r, const Configuration& a) {
  const bool columns = dir == Direction::east || dir == Direction::west;
  const int lo = columns ? r.a : r.b;
  const int hi = columns ? r.c : r.d;
  auto line = [&](int i, int j) {  // lines i..j-1
    return columns ? Rectangle{i, r.b, j, r.d} : Rectangle{r.a, i, r.c, j};
  };
  const bool forward = dir == Direction::east || dir == Direction::north;
  const int far = forward ? hi - 1 : lo;
  if (!a.any_in(line(far, far + 1))) return false;
  for (int i = lo; i + 1 < hi; ++i)
    if (!a.any_in(line(i, i + 2))) return false;
  return true;
}

inline bool event_holds(const EventSpec& e, const Configuration& a) {
  if (e.kind != EventKind::occupied && !e.rect.valid()) throw std::invalid_argument("malformed rectangle");
  switch (e.kind) {
    case EventKind::internally_filled: return internally_filled(Model::two_neighbour, e.rect, a);
    case EventKind::internally_filled_f: return internally_filled(Model::frobose, e.rect, a);
    case EventKind::local_internally_filled: return locally_internally_filled(Model::two_neighbour, e.rect, a);
    case EventKind::local_internally_filled_f: return locally_internally_filled(Model::frobose, e.rect, a);
    case EventKind::crossing: return crossing(Model::two_neighbour, e.inner, e.rect, a);
    case EventKind::crossing_f: return crossing(Model::frobose, e.inner, e.rect, a);
    case EventKind::occupied: return occupied(e.sites, a);
    case EventKind::no_horizontal_gap: return no_horizontal_gap(e.rect, a);
    case EventKind::no_vertical_gap: return no_vertical_gap(e.rect, a);
    case EventKind::traversable_east: return traversable(Direction::east, e.rect, a);
    case EventKind::traversable_north: return traversable(Direction::north, e.rect, a);
    case EventKind::traversable_west: return traversable(Direction::west, e.rect, a);
    case EventKind::traversable_south: return traversable(Direction::south, e.rect, a);
  }
  return false;
}

// The sites whose state can affect the event.
inline std::vector<Site> event_support(const EventSpec& e) {
  if (e.kind == EventKind::occupied) {
    std::vector<Site> xs = e.sites;
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    return xs;
  }
  std::vector<Site> out;
  for (Site s : e.rect.sites())
    if (!((e.kind == EventKind::crossing || e.kind == EventKind::crossing_f) && e.inner.contains(s))) out.push_back(s);
  return out;
}

inline Rectangle bounding_box(const std::vector<Site>& xs) {
  if (xs.empty()) return {0, 0, 1, 1};
  Rectangle r{xs[0].x, xs[0].y, xs[0].x + 1, xs[0].y + 1};
  for (Site s : xs) r = bounding(r, {s.x, s.y, s.x + 1, s.y + 1});
  return r;
}

inline constexpr int exact_enumeration_max_sites = 22;

// Sum of p^k (1-p)^(m-k) over all configurations of the support on which the event holds.
inline double exact_event_prob(const EventSpec& e, double p) {
  const std::vector<Site> support = event_support(e);
  const int m = static_cast<int>(support.size());
  if (m > exact_enumeration_max_sites) throw std::invalid_argument("region too large for exact enumeration");
  Rectangle box = bounding_box(support);
  if (e.kind != EventKind::occupied) box = bounding(box, e.rect);
  std::vector<double> weight(static_cast<std::size_t>(m) + 1);
  for (int k = 0; k <= m; ++k) weight[k] = std::pow(p, k) * std::pow(1.0 - p, m - k);
  double total = 0.0;
  for (std::uint32_t mask = 0; mask < (std::uint32_t(1) << m); ++mask) {
    Configuration a(box);
    for (int i = 0; i < m; ++i)
      if (mask >> i & 1u) a.set(support[i]);
    if (event_holds(e, a)) total += weight[std::popcount(mask)];
  }
  return total;
}

struct McEstimate {
  double p_hat;
  double std_err;
  long n;
  long successes;
};

inline constexpr long mc_chunk = 4096;

// Replica chunk j draws from a generator seeded by (seed, j); counts are folded
// in chunk order so the result does not depend on the thread count.
inline McEstimate mc_estimate(const EventSpec& e, double p, long n, std::uint64_t seed, unsigned threads = 1) {
  if (n < 1) throw std::invalid_argument("n must be at least 1");
  std::vector<Site> support = event_support(e);
  Rectangle box = bounding_box(support);
  if (e.kind != EventKind::occupied) box = bounding(box, e.rect);
  const long chunks = (n + mc_chunk - 1) / mc_chunk;
  std::vector<long> hits(static_cast<std::size_t>(chunks), 0);
  auto run_chunk = [&](long j) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(j), static_cast<std::uint32_t>(j >> 32)};
    std::mt19937_64 rng(seq);
    const long count = std::min(mc_chunk, n - j * mc_chunk);
    long h = 0;
    for (long i = 0; i < count; ++i) h += event_holds(e, Configuration::random(box, p, rng)) ? 1 : 0;
    hits[static_cast<std::size_t>(j)] = h;
  };
  const unsigned nt = std::max(1u, threads);
  if (nt == 1) {
    for (long j = 0; j < chunks; ++j) run_chunk(j);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < nt; ++t)
      pool.emplace_back([&, t] {
        for (long j = t; j < chunks; j += nt) run_chunk(j);
      });
  }
  long total = 0;
  for (long h : hits) total += h;
  const double ph = double(total) / double(n);
  return {ph, std::sqrt(ph * (1.0 - ph) / double(n)), n, total};
}

// ---------------------------------------------------------------------------
// Framed rectangles and exploration

struct FramedRectangle {
  Rectangle rect;
  FrameState s;
  friend bool operator==(const FramedRectangle&, const FramedRectangle&) = default;
};

inline Rectangle buffer_right(const Rectangle& r, int t = 1) { return {r.c, r.b, r.c + t, r.d}; }
inline Rectangle buffer_up(const Rectangle& r, int t = 1) { return {r.a, r.d, r.c, r.d + t}; }
inline Rectangle buffer_left(const Rectangle& r, int t = 1) { return {r.a - t, r.b, r.a, r.d}; }
inline Rectangle buffer_down(const Rectangle& r, int t = 1) { return {r.a, r.b - t, r.c, r.b}; }

// The frame of a framed rectangle: thickness-1 buffers for Frobose,
// thickness-2 buffers with corner sites for two-neighbour.
inline std::vector<Site> frame_cells(const FramedRectangle& fr, Model m = Model::frobose) {
  using S = FrameState;
  const Rectangle& r = fr.rect;
  const int t = m == Model::frobose ? 1 : 2;
  bool right = false, up = false, left = false, down = false;
  switch (fr.s) {
    case S::s0: break;
    case S::s1: right = true; break;
    case S::s2: right = up = true; break;
    case S::s3: right = up = left = true; break;
    case S::s2p: up = left = true; break;
    case S::s1p: left = true; break;
    case S::s1pp: up = true; break;
    case S::s2pp: right = left = true; break;
    case S::s4: right = up = left = down = true; break;
  }
  std::vector<Site> out;
  auto add = [&](const Rectangle& b) {
    for (Site s : b.sites()) out.push_back(s);
  };
  if (right) add(buffer_right(r, t));
  if (up) add(buffer_up(r, t));
  if (left) add(buffer_left(r, t));
  if (down) add(buffer_down(r, t));
  if (m == Model::two_neighbour) {
    if (right && up) out.push_back({r.c, r.d});
    if (up && left) out.push_back({r.a - 1, r.d});
    if (down) {
      out.push_back({r.a - 1, r.b - 1});
      out.push_back({r.c, r.b - 1});
    }
  }
  return out;
}

inline FramedRectangle apply(const TransitionRule& rule, const FramedRectangle& fr) {
  return {fr.rect.extended(rule.alpha, rule.beta, rule.gamma, rule.delta), rule.dst};
}

// Probability that the Frobose framed-rectangle chain started at `start` is
// absorbed (frame state 4) exactly on `target`, by recursion over the
// positioned framed rectangles inside the target.
inline double chain_absorption_prob(const FramedRectangle& start, const Rectangle& target, const ModelParams& mp) {
  if (!target.contains(start.rect)) return 0.0;
  std::map<std::tuple<int, int, int, int, int>, double> memo;
  auto rec = [&](auto&& self, const FramedRectangle& fr) -> double {
    if (fr.s == FrameState::s4) return fr.rect == target ? 1.0 : 0.0;
    const auto key = std::make_tuple(fr.rect.a, fr.rect.b, fr.rect.c, fr.rect.d, index(fr.s));
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    double total = 0.0;
    for (const auto& r : frobose_table()) {
      if (r.src != fr.s || r.absorbing()) continue;
      const FramedRectangle next = apply(r, fr);
      if (!target.contains(next.rect)) continue;
      total += std::exp(transition_log_prob(r, fr.rect.width(), fr.rect.height(), mp)) * self(self, next);
    }
    memo.emplace(key, total);
    return total;
  };
  return rec(rec, start);
}

// Whether the Frobose transition event T(F, F') occurs: the unexplored
// infections (A minus F_frame minus F_rect) cross F_rect to F'_rect and leave
// the frame of F' empty.
inline bool transition_holds(const Configuration& a, const FramedRectangle& from, const TransitionRule& rule) {
  const FramedRectangle to = apply(rule, from);
  const std::vector<Site> revealed = frame_cells(from);
  auto masked = [&](Site s) {
    return from.rect.contains(s) || std::find(revealed.begin(), revealed.end(), s) != revealed.end();
  };
  for (Site s : frame_cells(to))
    if (a.infected(s) && !masked(s)) return false;
  return grow_rectangle(a, from.rect, to.rect, masked) == to.rect;
}

// Every Frobose candidate out of `from` whose transition event occurs, in table order.
inline std::vector<const TransitionRule*> holding_transitions(const Configuration& a, const FramedRectangle& from) {
  std::vector<const TransitionRule*> out;
  for (const auto& r : frobose_table())
    if (r.src == from.s && !r.absorbing() && transition_holds(a, from, r)) out.push_back(&r);
  return out;
}

struct ExplorationError : std::logic_error {
  using std::logic_error::logic_error;
};

// Deterministic exploration from a seed rectangle in frame state 0. Stops at
// frame state 4, when the next framed rectangle would leave the box, or once
// the semi-perimeter reaches stop_phi.
inline std::vector<FramedRectangle> explore(const Configuration& a, const Rectangle& seed,
                                            int stop_phi = std::numeric_limits<int>::max()) {
  if (!a.box().contains(seed)) throw std::invalid_argument("seed rectangle outside the box");
  std::vector<FramedRectangle> path{{seed, FrameState::s0}};
  while (true) {
    const FramedRectangle cur = path.back();
    if (cur.s == FrameState::s4 || cur.rect.phi() >= stop_phi) break;
    bool inside = true;
    for (const auto& r : frobose_table())
      if (r.src == cur.s && !r.absorbing() && !a.box().contains(apply(r, cur).rect.extended(1, 1, 1, 1)))
        inside = false;
    if (!inside) break;
    const TransitionRule* next = nullptr;
    for (const auto& r : frobose_table()) {
      if (r.src != cur.s || r.absorbing()) continue;
      if (transition_holds(a, cur, r)) {
        next = &r;
        break;
      }
    }
    if (next == nullptr) throw ExplorationError("no transition event holds at " + to_string(cur.rect));
    path.push_back(apply(*next, cur));
  }
  return path;
}

}  // namespace bpdp
