#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "bpdp/chain.hpp"
#include "bpdp/fitting.hpp"
#include "bpdp/lattice.hpp"
#include "bpdp/matrix.hpp"
#include "bpdp/special_functions.hpp"
#include "bpdp/verify.hpp"
#include "bpdp/version.hpp"

using json = nlohmann::ordered_json;
using namespace bpdp;

namespace {

enum Exit { ok = 0, usage = 1, verification = 2, resource = 3 };

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

using Clock = std::chrono::steady_clock;

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json record(const std::string& command, json parameters, json outputs, Clock::time_point start,
            std::optional<std::uint64_t> seed = std::nullopt) {
  json r;
  r["command"] = command;
  r["parameters"] = std::move(parameters);
  r["outputs"] = std::move(outputs);
  r["wall_time_seconds"] = std::chrono::duration<double>(Clock::now() - start).count();
  r["seed"] = seed ? json(*seed) : json(nullptr);
  r["tool_version"] = tool_version;
  return r;
}

void emit(const json& j) { std::cout << j.dump(2) << '\n'; }

double parse_double(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) throw UsageError("not a number: '" + std::string(s) + "'");
  return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  return out;
}

// "a..b" as a pair of numbers.
std::pair<double, double> parse_range(const std::string& s) {
  const auto pos = s.find("..");
  if (pos == std::string::npos) throw UsageError("range must look like a..b: " + s);
  return {parse_double(s.substr(0, pos)), parse_double(s.substr(pos + 2))};
}

PiDataset read_dataset(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open " + path);
  std::string line;
  std::vector<PiRow> rows;
  bool header = true;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    if (header) {
      header = false;
      if (line.find("log2_inv_p") != std::string::npos) continue;
    }
    const auto cells = split(line, ',');
    if (cells.size() < 2) throw UsageError("malformed CSV row: " + line);
    rows.push_back({static_cast<int>(parse_double(cells[0])), parse_double(cells[1])});
  }
  return PiDataset(std::move(rows));
}

json report_json(const Report& r) {
  json arr = json::array();
  for (const auto& c : r) arr.push_back({{"property", c.name}, {"passed", c.passed}, {"detail", c.detail}});
  return arr;
}

// ---------------------------------------------------------------------------

struct PiArgs {
  std::optional<double> p;
  std::optional<int> log2_inv_p;
  std::optional<long> threshold;
  std::string convention = "exact";
  unsigned threads = 1;
  std::optional<double> prune;
  double memory_cap_gib = 8.0;
  std::string csv;
};

PiOptions pi_options(const PiArgs& a) {
  PiOptions opt;
  opt.threads = a.threads;
  opt.prune_below = a.prune;
  opt.memory_cap_bytes = static_cast<std::uint64_t>(a.memory_cap_gib * double(std::uint64_t(1) << 30));
  return opt;
}

int cmd_pi(const PiArgs& a) {
  const auto start = Clock::now();
  if (a.p.has_value() == a.log2_inv_p.has_value()) throw UsageError("give exactly one of --p and --log2-inv-p");
  const double p = a.p ? *a.p : std::ldexp(1.0, -*a.log2_inv_p);
  if (!(p > 0.0 && p < 1.0)) throw UsageError("p must lie in (0,1)");
  ChainParams params = ChainParams::for_p(p, parse_convention(a.convention));
  if (a.threshold) params.threshold = *a.threshold;
  if (params.threshold < 2) throw UsageError("threshold must be at least 2");
  const PiResult r = compute_pi(params, pi_options(a));
  json parameters = {{"p", p}, {"L", params.threshold}, {"convention", name(params.convention)},
                     {"threads", a.threads}};
  if (a.log2_inv_p) parameters["log2_inv_p"] = *a.log2_inv_p;
  if (a.prune) parameters["prune_threshold"] = *a.prune;
  json outputs = {{"p", p},
                  {"q", params.model.q},
                  {"L", params.threshold},
                  {"convention", name(params.convention)},
                  {"log_hit_prob", r.log_hit_prob},
                  {"log_pi", r.log_pi}};
  const json rec = record("pi", parameters, outputs, start);
  if (!a.csv.empty()) {
    const bool fresh = !std::ifstream(a.csv).good();
    std::ofstream out(a.csv, std::ios::app);
    if (!out) throw UsageError("cannot write " + a.csv);
    if (fresh) out << "p,q,L,convention,log_hit_prob,log_pi,wall_time_seconds\n";
    out << num(p) << ',' << num(params.model.q) << ',' << params.threshold << ',' << name(params.convention) << ','
        << num(r.log_hit_prob) << ',' << num(r.log_pi) << ',' << num(rec["wall_time_seconds"].get<double>()) << '\n';
  }
  emit(rec);
  return ok;
}

struct ScanArgs {
  std::string range;
  std::string convention = "exact";
  unsigned threads = 1;
  double memory_cap_gib = 8.0;
  std::string output;
  bool resume = false;
};

int cmd_scan(const ScanArgs& a) {
  const auto [lo_d, hi_d] = parse_range(a.range);
  const int lo = static_cast<int>(lo_d), hi = static_cast<int>(hi_d);
  if (lo != lo_d || hi != hi_d || lo < 1) throw UsageError("range bounds must be positive integers");
  const Convention conv = parse_convention(a.convention);

  int first = lo;
  bool need_header = true;
  if (a.resume) {
    if (a.output.empty()) throw UsageError("--resume needs --output");
    std::ifstream in(a.output);
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      if (line.rfind("log2_inv_p", 0) == 0) {
        need_header = false;
        continue;
      }
      const auto cells = split(line, ',');
      if (cells.size() >= 2) first = std::max(first, static_cast<int>(parse_double(cells[0])) + 1);
    }
  }

  std::ofstream file;
  if (!a.output.empty()) {
    file.open(a.output, a.resume ? std::ios::app : std::ios::trunc);
    if (!file) throw UsageError("cannot write " + a.output);
  }
  std::ostream& out = a.output.empty() ? std::cout : file;
  if (need_header) out << "log2_inv_p,log_pi\n" << std::flush;

  PiOptions opt;
  opt.threads = a.threads;
  opt.memory_cap_bytes = static_cast<std::uint64_t>(a.memory_cap_gib * double(std::uint64_t(1) << 30));
  int status = ok;
  for (int k = first; k <= hi; ++k) {
    try {
      const PiResult r = compute_pi(ChainParams::for_p(std::ldexp(1.0, -k), conv), opt);
      out << k << ',' << num(r.log_pi) << '\n' << std::flush;
    } catch (const ResourceCapError& e) {
      std::cerr << "log2_inv_p=" << k << ": " << e.what() << '\n';
      status = resource;
    } catch (const std::exception& e) {
      std::cerr << "log2_inv_p=" << k << ": " << e.what() << '\n';
      status = verification;
    }
  }
  return status;
}

int cmd_verify(const std::string& suite, std::uint64_t seed) {
  const auto start = Clock::now();
  const std::vector<std::string> known = {"stochasticity", "oracle", "lattice", "matrix", "variational", "traversal",
                                          "constants", "all"};
  if (std::find(known.begin(), known.end(), suite) == known.end()) throw UsageError("unknown suite: " + suite);
  Report r;
  auto add = [&](const Report& part) { r.insert(r.end(), part.begin(), part.end()); };
  const bool all = suite == "all";
  if (all || suite == "stochasticity") add(check_stochasticity(seed));
  if (all || suite == "oracle") add(check_oracle());
  if (all || suite == "constants") add(check_constants());
  if (all || suite == "traversal") add(check_traversal(seed));
  if (all || suite == "matrix") add(check_matrix(seed));
  if (all || suite == "variational") add(check_variational(seed));
  if (all || suite == "lattice") add(check_lattice({.seed = seed}));
  const bool passed = all_passed(r);
  emit(record("verify", {{"suite", suite}}, {{"passed", passed}, {"properties", report_json(r)}}, start, seed));
  return passed ? ok : verification;
}

int cmd_constants() {
  const auto start = Clock::now();
  const Constants c = constants();
  emit(record("constants", json::object(),
              {{"lambda1_f", c.lambda1_f},
               {"lambda1", c.lambda1},
               {"lambda2_f", c.lambda2_f},
               {"lambda2_2n", c.lambda2_2n},
               {"integral_f", integral_f()},
               {"integral_g", integral_g()},
               {"integral_h", integral_h()}},
              start));
  return ok;
}

struct FunctionsArgs {
  std::string figure = "kernels";
  std::string grid = "1e-6..60";
  int points = 200;
  std::string dataset;
};

int cmd_functions(const FunctionsArgs& a) {
  if (a.figure == "kernels") {
    const auto [lo, hi] = parse_range(a.grid);
    if (!(lo > 0.0 && hi > lo) || a.points < 2) throw UsageError("grid must be lo..hi with 0 < lo < hi");
    std::cout << "z,f,g,h,h2,h_mod,alpha\n";
    for (int i = 0; i < a.points; ++i) {
      const double z = i == a.points - 1 ? hi : lo * std::pow(hi / lo, double(i) / (a.points - 1));
      std::cout << num(z) << ',' << num(f(z)) << ',' << num(g(z)) << ',' << num(h(z)) << ',' << num(h2(z)) << ','
                << num(h_mod(z)) << ',' << num(alpha(z)) << '\n';
    }
    return ok;
  }
  const PiDataset d = a.dataset.empty() ? reference_table() : read_dataset(a.dataset);
  Points pts;
  std::string header;
  if (a.figure == "scale") {
    header = "log_inv_p,p_log_pi";
    for (const auto& r : d.rows()) pts.emplace_back(r.log_inv_p(), r.p() * r.log_pi);
  } else if (a.figure == "leading") {
    header = "log_inv_p,log_log_pi";
    pts = leading_order_points(d);
  } else if (a.figure == "inverse") {
    header = "inv_p,log_pi";
    pts = inverse_p_points(d);
  } else if (a.figure == "second") {
    header = "log_inv_p,log_residual";
    pts = second_order_log_points(d);
  } else if (a.figure == "second-sqrt") {
    header = "inv_sqrt_p,residual";
    pts = second_order_sqrt_points(d);
  } else if (a.figure == "third") {
    header = "log_inv_p,log_residual";
    pts = third_order_points(d);
  } else {
    throw UsageError("unknown figure: " + a.figure);
  }
  std::cout << header << '\n';
  for (const auto& [x, y] : pts) std::cout << num(x) << ',' << num(y) << '\n';
  return ok;
}

json points_json(const Points& pts) {
  json arr = json::array();
  for (const auto& [x, y] : pts) arr.push_back({x, y});
  return arr;
}

int cmd_fit(const std::string& input) {
  const auto start = Clock::now();
  const PiDataset d = input.empty() ? reference_table() : read_dataset(input);
  const auto a = fit_leading_order(d);
  const auto b = fit_inverse_p(d);
  const auto c = fit_second_order(d);
  const auto four = fit_four_param(d);
  json outputs = {
      {"leading_order", {{"exponent", a.exponent}, {"prefactor", a.prefactor}}},
      {"inverse_p", {{"slope", b.slope}, {"intercept", b.intercept}}},
      {"second_order", {{"beta", c.beta}, {"lambda2", c.lambda2}}},
      {"second_order_fixed_beta", {{"lambda2", fit_second_order_fixed_beta(d)}}},
      {"third_order", {{"exponent", fit_third_order(d)}}},
      {"four_param",
       {{"alpha", four.alpha},
        {"lambda1", four.lambda1},
        {"beta", four.beta},
        {"lambda2", four.lambda2},
        {"max_rel_residual", four.max_rel_residual},
        {"converged", four.converged}}},
      {"coordinates",
       {{"leading", points_json(leading_order_points(d))},
        {"inverse_p", points_json(inverse_p_points(d))},
        {"second_order", points_json(second_order_log_points(d))},
        {"second_order_sqrt", points_json(second_order_sqrt_points(d))},
        {"third_order", points_json(third_order_points(d))}}},
  };
  emit(record("fit", {{"input", input.empty() ? "built-in reference table" : input}, {"k_last", default_k_last}},
              outputs, start));
  if (!four.converged)
    std::cerr << "warning: four-parameter fit did not converge, max relative residual " << num(four.max_rel_residual)
              << '\n';
  return ok;
}

struct SimulateArgs {
  std::string event;
  std::string rect;
  std::string inner;
  std::string sites;
  double p = 0.5;
  long n = 100000;
  std::uint64_t seed = 1;
  unsigned threads = 1;
};

Rectangle parse_rect(const std::string& s) {
  const auto cells = split(s, ',');
  if (cells.size() == 2) return Rectangle::checked(0, 0, int(parse_double(cells[0])), int(parse_double(cells[1])));
  if (cells.size() == 4)
    return Rectangle::checked(int(parse_double(cells[0])), int(parse_double(cells[1])), int(parse_double(cells[2])),
                              int(parse_double(cells[3])));
  throw UsageError("rectangle must be w,h or a,b,c,d: " + s);
}

std::optional<double> closed_form(const EventSpec& e, double p) {
  const auto mp = ModelParams::from_p(p);
  const int w = e.rect.width(), h = e.rect.height();
  switch (e.kind) {
    case EventKind::occupied: return 1.0 - std::pow(1.0 - p, double(event_support(e).size()));
    case EventKind::no_vertical_gap: return std::exp(-w * f(h * mp.q));
    case EventKind::no_horizontal_gap: return std::exp(-h * f(w * mp.q));
    case EventKind::traversable_east:
    case EventKind::traversable_west: return traversal_probability(w, detail::one_minus_exp_neg(h * mp.q));
    case EventKind::traversable_north:
    case EventKind::traversable_south: return traversal_probability(h, detail::one_minus_exp_neg(w * mp.q));
    default: break;
  }
  if (event_support(e).size() <= static_cast<std::size_t>(exact_enumeration_max_sites)) return exact_event_prob(e, p);
  return std::nullopt;
}

int cmd_simulate(const SimulateArgs& a) {
  const auto start = Clock::now();
  if (!(a.p > 0.0 && a.p < 1.0)) throw UsageError("p must lie in (0,1)");
  EventSpec e{parse_event(a.event), {0, 0, 1, 1}};
  json region;
  if (e.kind == EventKind::occupied) {
    if (a.sites.empty()) throw UsageError("event O needs --sites x:y;x:y;...");
    for (const auto& item : split(a.sites, ';')) {
      const auto xy = split(item, ':');
      if (xy.size() != 2) throw UsageError("site must be x:y: " + item);
      e.sites.push_back({int(parse_double(xy[0])), int(parse_double(xy[1]))});
    }
    region = a.sites;
  } else {
    if (a.rect.empty()) throw UsageError("rectangle events need --rect");
    e.rect = parse_rect(a.rect);
    region = to_string(e.rect);
    if (e.kind == EventKind::crossing || e.kind == EventKind::crossing_f) {
      if (a.inner.empty()) throw UsageError("crossing events need --inner");
      e.inner = parse_rect(a.inner);
      if (!e.rect.contains(e.inner)) throw UsageError("inner rectangle must lie in the outer one");
      region = to_string(e.inner) + " in " + to_string(e.rect);
    }
  }
  const McEstimate est = mc_estimate(e, a.p, a.n, a.seed, a.threads);
  const auto expected = closed_form(e, a.p);
  json outputs = {{"event", event_id(e.kind)},
                  {"region", region},
                  {"p", a.p},
                  {"n", a.n},
                  {"seed", a.seed},
                  {"rng", "mt19937_64 seeded by seed_seq(seed, chunk)"},
                  {"p_hat", est.p_hat},
                  {"std_err", est.std_err},
                  {"expected", expected ? json(*expected) : json(nullptr)}};
  emit(record("simulate", {{"event", a.event}, {"p", a.p}, {"n", a.n}, {"threads", a.threads}}, outputs, start, a.seed));
  return ok;
}

int cmd_matrix(double P, std::uint64_t seed) {
  const auto start = Clock::now();
  if (!(P > 0.0 && P < 0.25)) throw UsageError("P must lie in (0, 1/4)");
  const Report r = check_matrix(seed);
  const auto ev = perturbed_scaled_eigenvalues(P);
  json entries = json::array();
  for (int K = 0; K <= 25; ++K)
    entries.push_back({{"K", K}, {"power", matrix_power_entry(K)}, {"closed_form", closed_form_entry(K)}});
  const bool passed = all_passed(r);
  emit(record("matrix", {{"P", P}},
              {{"passed", passed},
               {"properties", report_json(r)},
               {"scaled_eigenvalues", ev},
               {"spectral_radius", spectral_radius(perturbed_matrix(P))},
               {"power_entries", entries}},
              start, seed));
  return passed ? ok : verification;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact computation and verification tools for local Frobose bootstrap percolation"};
  app.require_subcommand(1);
  app.set_version_flag("--version", tool_version);

  PiArgs pi;
  auto* pi_cmd = app.add_subcommand("pi", "Compute log Pi(p) by dynamic programming");
  auto* p_opt = pi_cmd->add_option("--p", pi.p, "Infection probability");
  auto* k_opt = pi_cmd->add_option("--log2-inv-p", pi.log2_inv_p, "Use p = 2^-k");
  p_opt->excludes(k_opt);
  pi_cmd->add_option("--threshold", pi.threshold, "Target semi-perimeter [default ceil(2 log(1/p)/p)]");
  pi_cmd->add_option("--convention", pi.convention, "exact | at-least")->envname("BPDP_CONVENTION")->capture_default_str();
  pi_cmd->add_option("--threads", pi.threads)->envname("BPDP_THREADS")->capture_default_str();
  pi_cmd->add_option("--prune-threshold", pi.prune, "Drop states with log-probability below this");
  pi_cmd->add_option("--memory-cap-gib", pi.memory_cap_gib)->envname("BPDP_MEMORY_CAP_GIB")->capture_default_str();
  pi_cmd->add_option("--csv", pi.csv, "Append a CSV row to this file");

  ScanArgs scan;
  auto* scan_cmd = app.add_subcommand("scan", "Tabulate log Pi(2^-k) over a range of k");
  scan_cmd->add_option("--log2-inv-p-range", scan.range, "a..b")->required();
  scan_cmd->add_option("--convention", scan.convention)->envname("BPDP_CONVENTION")->capture_default_str();
  scan_cmd->add_option("--threads", scan.threads)->envname("BPDP_THREADS")->capture_default_str();
  scan_cmd->add_option("--memory-cap-gib", scan.memory_cap_gib)->envname("BPDP_MEMORY_CAP_GIB")->capture_default_str();
  scan_cmd->add_option("--output", scan.output, "CSV file [default stdout]");
  scan_cmd->add_flag("--resume", scan.resume, "Continue after the last row already in --output");

  std::string suite = "all";
  std::uint64_t verify_seed = 1;
  auto* verify_cmd = app.add_subcommand("verify", "Run property suites");
  verify_cmd->add_option("--suite", suite,
                         "stochasticity | oracle | lattice | matrix | variational | traversal | constants | all")
      ->capture_default_str();
  verify_cmd->add_option("--seed", verify_seed)->envname("BPDP_SEED")->capture_default_str();

  auto* constants_cmd = app.add_subcommand("constants", "Print the asymptotic constants");

  FunctionsArgs fn;
  auto* functions_cmd = app.add_subcommand("functions", "Emit plot data as CSV");
  functions_cmd->add_option("--figure", fn.figure, "kernels | scale | leading | inverse | second | second-sqrt | third")
      ->capture_default_str();
  functions_cmd->add_option("--grid", fn.grid, "lo..hi for kernels")->capture_default_str();
  functions_cmd->add_option("--points", fn.points)->capture_default_str();
  functions_cmd->add_option("--dataset", fn.dataset, "CSV of (log2_inv_p, log_pi) [default built-in table]");

  std::string fit_input;
  auto* fit_cmd = app.add_subcommand("fit", "Fit the asymptotic expansion to (log2_inv_p, log_pi) data");
  fit_cmd->add_option("--input", fit_input, "CSV file [default built-in table]");

  SimulateArgs sim;
  auto* sim_cmd = app.add_subcommand("simulate", "Monte Carlo estimate of a rectangle event");
  sim_cmd->add_option("--event", sim.event, "I | IF | Iloc | IFloc | C | CF | O | Grow | Gcol | Teast | ...")->required();
  sim_cmd->add_option("--rect", sim.rect, "w,h or a,b,c,d");
  sim_cmd->add_option("--inner", sim.inner, "inner rectangle for crossings");
  sim_cmd->add_option("--sites", sim.sites, "x:y;x:y;... for O");
  sim_cmd->add_option("--p", sim.p)->capture_default_str();
  sim_cmd->add_option("--n", sim.n)->capture_default_str();
  sim_cmd->add_option("--seed", sim.seed)->envname("BPDP_SEED")->capture_default_str();
  sim_cmd->add_option("--threads", sim.threads)->envname("BPDP_THREADS")->capture_default_str();

  double matrix_p = 0.01;
  std::uint64_t matrix_seed = 1;
  auto* matrix_cmd = app.add_subcommand("matrix", "Cycle matrix checks");
  matrix_cmd->add_option("--P", matrix_p)->capture_default_str();
  matrix_cmd->add_option("--seed", matrix_seed)->envname("BPDP_SEED")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? ok : usage;
  }

  try {
    if (pi_cmd->parsed()) return cmd_pi(pi);
    if (scan_cmd->parsed()) return cmd_scan(scan);
    if (verify_cmd->parsed()) return cmd_verify(suite, verify_seed);
    if (constants_cmd->parsed()) return cmd_constants();
    if (functions_cmd->parsed()) return cmd_functions(fn);
    if (fit_cmd->parsed()) return cmd_fit(fit_input);
    if (sim_cmd->parsed()) return cmd_simulate(sim);
    if (matrix_cmd->parsed()) return cmd_matrix(matrix_p, matrix_seed);
  } catch (const ResourceCapError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return resource;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return usage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return usage;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return usage;
  }
  return usage;
}
