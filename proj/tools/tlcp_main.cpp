// Command-line front end for the two-level contact process laboratory.
//
// Subcommands: simulate, dual-check, block-estimate, op-compare,
// oracle-check, converge, scan. Every output file starts with a header
// carrying the tool version, the full configuration and the seed, so any
// run can be reproduced byte for byte. Seeds are mandatory; `--seed auto`
// opts into system entropy and prints the chosen seed on stderr.

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <sstream>

#include "tlcp/blocks.hpp"
#include "tlcp/dual.hpp"
#include "tlcp/events.hpp"
#include "tlcp/experiments.hpp"
#include "tlcp/io.hpp"
#include "tlcp/lattice.hpp"
#include "tlcp/opercolation.hpp"
#include "tlcp/oracle.hpp"
#include "tlcp/rng.hpp"
#include "tlcp/simulate.hpp"

using json = nlohmann::json;
using namespace tlcp;

namespace {

std::uint64_t parse_seed(const std::string& s) {
  if (s == "auto") {
    std::random_device rd;
    std::uint64_t seed = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
    std::cerr << "seed=" << seed << "\n";
    return seed;
  }
  return std::stoull(s);
}

// "x1,...,xd;x1,...,xd;..." -> coordinate list
std::vector<Coords> parse_sites(const std::string& text, int dim) {
  std::vector<Coords> out;
  std::istringstream is(text);
  std::string site;
  while (std::getline(is, site, ';')) {
    if (site.empty()) continue;
    Coords c{};
    std::istringstream ss(site);
    std::string tok;
    int a = 0;
    while (std::getline(ss, tok, ',')) {
      if (a >= dim) throw CLI::ValidationError("site has too many coordinates");
      c[a++] = std::stoi(tok);
    }
    if (a != dim) throw CLI::ValidationError("site has too few coordinates");
    out.push_back(c);
  }
  return out;
}

std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> out;
  std::istringstream is(text);
  std::string tok;
  while (std::getline(is, tok, ',')) out.push_back(std::stod(tok));
  return out;
}

// Output sink: a file when a path is given, stdout otherwise.
class Sink {
 public:
  explicit Sink(const std::string& path) {
    if (!path.empty() && path != "-") {
      file_.open(path, std::ios::binary);
      if (!file_) throw std::runtime_error("cannot open output: " + path);
    }
  }
  std::ostream& os() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

json estimate_json(const EstimateWithCI& e) {
  return json{{"point", e.point},
              {"ci_low", e.ci_low},
              {"ci_high", e.ci_high},
              {"reps", e.reps},
              {"level", e.level}};
}

void emit_json(Sink& sink, const std::map<std::string, std::string>& cfg,
               json body) {
  json meta{{"version", io::kToolVersion}};
  for (const auto& [k, v] : cfg) meta[k] = v;
  body["meta"] = meta;
  sink.os() << body.dump(2) << "\n";
}

struct Common {
  std::string seed_text;
  std::uint64_t seed = 1;
  int threads = 1;
  std::string out;
  std::string config_path;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--config", config_path,
                    "flat key=value file; flags override it");
    cmd->add_option("--seed", seed_text,
                    "64-bit seed, or 'auto' for system entropy")
        ->required();
    cmd->add_option("--threads", threads,
                    "replicate-level parallelism (results do not depend on "
                    "it; 0 = all cores)");
    cmd->add_option("--out", out, "output path (default: stdout)");
  }
  void finish() { seed = parse_seed(seed_text); }
  // threads is deliberately not echoed: results do not depend on it and
  // outputs must stay byte-identical across thread counts
  void echo(std::map<std::string, std::string>& cfg) const {
    cfg["seed"] = std::to_string(seed);
  }
};

std::string fmt(double v) { return io::fmt_g17(v); }

// Flat key=value config support: keys mirror long flags; flags given on the
// command line take precedence. Applied by injecting the missing flags
// before the real parse.
void inject_config(std::vector<std::string>& args) {
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      path = args[i + 1];
      break;
    }
    if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
      break;
    }
  }
  if (path.empty()) return;
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read config file: " + path);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config line without '=': " + line);
    std::string flag = "--" + line.substr(0, eq);
    bool present = false;
    for (const auto& a : args)
      present |= a == flag || a.rfind(flag + "=", 0) == 0;
    if (!present) {
      args.push_back(flag);
      args.push_back(line.substr(eq + 1));
    }
  }
}

// ---------------------------------------------------------------- simulate
struct SimulateArgs {
  Common common;
  int dim = 1, radius = 10;
  int trunc = 0;  // 0 = none
  double lambda = 3, mu = 2, delta = 1;
  double t_min = 0, t_max = 10;
  std::string init = "all3";
  int cube_n = 1;
  double burn_in = 10;
  std::string mode = "forward";
  double anchor = 0, s_max = 0;
  std::string dual_set;
  std::string summary_out;
  std::string dump_log;
};

int run_simulate(SimulateArgs& a) {
  a.common.finish();
  std::optional<int> trunc;
  if (a.trunc > 0) trunc = a.trunc;
  Window win = Window::symmetric(a.dim, a.radius, trunc);
  Rates rates{a.lambda, a.mu, a.delta};

  std::map<std::string, std::string> cfg{
      {"subcommand", "simulate"},
      {"dim", std::to_string(a.dim)},
      {"radius", std::to_string(a.radius)},
      {"trunc", a.trunc > 0 ? std::to_string(a.trunc) : "none"},
      {"lambda", fmt(a.lambda)},
      {"mu", fmt(a.mu)},
      {"delta", fmt(a.delta)},
      {"t_min", fmt(a.t_min)},
      {"t_max", fmt(a.t_max)},
      {"init", a.init},
      {"mode", a.mode},
      {"cube_n", std::to_string(a.cube_n)},
      {"burn_in", fmt(a.burn_in)},
      {"anchor", fmt(a.anchor)},
      {"s_max", fmt(a.s_max)},
      {"dual_set", a.dual_set},
  };
  a.common.echo(cfg);

  EventLog log = EventLog::generate(win, std::min(a.t_min, -a.burn_in - 1e-9),
                                    a.t_max + 1e-9, rates, a.common.seed);

  Configuration start(win);
  if (a.init == "all1") {
    start = Configuration(win, SiteState::Animal);
  } else if (a.init == "all3") {
    start = Configuration(win, SiteState::Both);
  } else if (a.init == "cube") {
    for (SiteIndex i = 0; i < win.n_sites(); ++i)
      if (win.inf_norm(i) <= a.cube_n) start.set_state(i, SiteState::Both);
  } else if (a.init == "burnin-cube") {
    start = run_animals_only(log, Configuration(win, SiteState::Animal),
                             -a.burn_in, a.t_min)
                .final_config();
    for (SiteIndex i = 0; i < win.n_sites(); ++i)
      if (win.inf_norm(i) <= a.cube_n)
        start.set_state(i, has_animal(start.state(i)) ? SiteState::Both
                                                      : SiteState::Fleas);
  } else {
    throw CLI::ValidationError("unknown --init");
  }

  if (!a.dump_log.empty()) {
    Sink dsink(a.dump_log);
    io::write_header(dsink.os(), cfg);
    log.dump_csv(dsink.os());
  }

  Sink sink(a.common.out);
  io::write_header(sink.os(), cfg);
  sink.os() << "direction,time,site,old_state,new_state\n";

  json summary;
  if (a.mode == "forward" || a.mode == "animals") {
    Trajectory traj = a.mode == "animals"
                          ? run_animals_only(log, start, a.t_min, a.t_max)
                          : run_forward(log, start, a.t_min, a.t_max);
    for (const auto& e : traj.events())
      sink.os() << "forward," << fmt(e.time) << ","
                << coords_to_string(win.coords_of(e.site), win.dim(), ' ')
                << "," << int(e.old_state) << "," << int(e.new_state) << "\n";
    summary["t1_animal_extinction"] =
        traj.extinction_time_animals() ? json(*traj.extinction_time_animals())
                                       : json("not observed");
    summary["t2_flea_extinction"] = traj.extinction_time_fleas()
                                        ? json(*traj.extinction_time_fleas())
                                        : json("not observed");
    summary["final_animals"] = traj.final_config().animal_count();
    summary["final_fleas"] = traj.final_config().flea_count();
  } else if (a.mode == "dual-animal" || a.mode == "dual-flea") {
    SiteSet d = sites_in_window(win, parse_sites(a.dual_set, a.dim));
    DualTrajectory dual = [&] {
      if (a.mode == "dual-animal")
        return run_animal_dual(log, d, a.anchor, a.s_max);
      Trajectory animals =
          run_animals_only(log, Configuration(win, SiteState::Animal),
                           a.anchor - a.s_max, a.anchor);
      return run_flea_dual(log, d, a.anchor, a.s_max, AnimalHistory(animals));
    }();
    for (const auto& e : dual.events())
      sink.os() << "dual," << fmt(a.anchor - e.s) << ","
                << coords_to_string(win.coords_of(e.site), win.dim(), ' ')
                << "," << (e.added ? 0 : 1) << "," << (e.added ? 1 : 0)
                << "\n";
    summary["final_dual_size"] = dual.final_set().size();
    summary["extinct_at_s"] = dual.extinction_s() ? json(*dual.extinction_s())
                                                  : json("not observed");
  } else {
    throw CLI::ValidationError("unknown --mode");
  }

  if (!a.summary_out.empty()) {
    Sink ssink(a.summary_out);
    emit_json(ssink, cfg, json{{"summary", summary}});
  } else if (!a.common.out.empty()) {
    json body{{"summary", summary}};
    json meta{{"version", io::kToolVersion}};
    for (const auto& [k, v] : cfg) meta[k] = v;
    body["meta"] = meta;
    std::cout << body.dump(2) << "\n";
  }
  return 0;
}

// --------------------------------------------------------------- dual-check
struct DualCheckArgs {
  Common common;
  int dim = 1, radius = 10;
  double lambda = 3, mu = 2, delta = 1;
  std::string b = "0", c = "0", d = "0";
  double t = 5, burn_in = 8;
  long reps = 10000;
  double level = 0.95;
};

int run_dual_check(DualCheckArgs& a) {
  a.common.finish();
  DualityCheckParams p;
  p.window = Window::symmetric(a.dim, a.radius);
  p.rates = {a.lambda, a.mu, a.delta};
  p.set_b = parse_sites(a.b, a.dim);
  p.set_c = parse_sites(a.c, a.dim);
  p.set_d = parse_sites(a.d, a.dim);
  p.t = a.t;
  p.burn_in = a.burn_in;
  p.reps = a.reps;
  p.seed = a.common.seed;
  p.threads = a.common.threads;
  p.level = a.level;
  DualityCheckResult res = check_duality_distributional(p);

  std::map<std::string, std::string> cfg{
      {"subcommand", "dual-check"},       {"dim", std::to_string(a.dim)},
      {"radius", std::to_string(a.radius)}, {"lambda", fmt(a.lambda)},
      {"mu", fmt(a.mu)},                  {"delta", fmt(a.delta)},
      {"B", a.b},                         {"C", a.c},
      {"D", a.d},                         {"t", fmt(a.t)},
      {"burn_in", fmt(a.burn_in)},        {"reps", std::to_string(a.reps)},
      {"level", fmt(a.level)},
  };
  a.common.echo(cfg);
  Sink sink(a.common.out);
  emit_json(sink, cfg,
            json{{"lhs", estimate_json(res.lhs)},
                 {"rhs", estimate_json(res.rhs)},
                 {"ci_overlap", res.ci_overlap}});
  return 0;
}

// ----------------------------------------------------------- block-estimate
struct BlockArgs {
  Common common;
  int dim = 1, n = 1, L = 2;
  double T = 4;
  double lambda = 3, mu = 3, delta = 1;
  double burn_in = 8;
  int pad = 3;
  double epsilon = 0.1;
  long reps = 1000;
  double level = 0.95;
  double eps1 = -1;  // optional oriented-percolation threshold
  bool dual = false;
};

int run_block(BlockArgs& a) {
  a.common.finish();
  BlockSpec spec;
  spec.dim = a.dim;
  spec.n = a.n;
  spec.L = a.L;
  spec.T = a.T;
  spec.rates = {a.lambda, a.mu, a.delta};
  spec.burn_in = a.burn_in;
  spec.window_pad = a.pad;
  spec.epsilon = a.epsilon;

  std::map<std::string, std::string> cfg{
      {"subcommand", a.dual ? "block-estimate --dual" : "block-estimate"},
      {"dim", std::to_string(a.dim)},   {"n", std::to_string(a.n)},
      {"L", std::to_string(a.L)},       {"T", fmt(a.T)},
      {"lambda", fmt(a.lambda)},        {"mu", fmt(a.mu)},
      {"delta", fmt(a.delta)},          {"burn_in", fmt(a.burn_in)},
      {"pad", std::to_string(a.pad)},   {"epsilon", fmt(a.epsilon)},
      {"reps", std::to_string(a.reps)}, {"level", fmt(a.level)},
  };
  a.common.echo(cfg);
  Sink sink(a.common.out);

  if (a.dual) {
    DualBlockEstimate est = dual_block_estimate(spec, a.reps, a.common.seed,
                                                a.common.threads, a.level);
    emit_json(sink, cfg,
              json{{"event_A", estimate_json(est.event_a)},
                   {"event_B", estimate_json(est.event_b)}});
    return 0;
  }

  BlockEstimate est = estimate_block_events(spec, a.reps, a.common.seed,
                                            a.common.threads, a.level);
  json body{
      {"event_A", estimate_json(est.event_a)},
      {"event_B", estimate_json(est.event_b)},
      {"animal_event_A", estimate_json(est.animal_event_a)},
      {"N_stats",
       json{{"N", json{{"mean", est.n_mean},
                       {"q50", est.n_q50},
                       {"q90", est.n_q90},
                       {"max", est.n_max}}},
            {"N_plus", json{{"mean", est.nplus_mean},
                            {"q50", est.nplus_q50},
                            {"q90", est.nplus_q90},
                            {"max", est.nplus_max}}}}},
      {"diagnostics", json{{"jumps_quantile", est.jumps_q},
                           {"window_quantile", est.window_q},
                           {"joint_fraction", est.joint_fraction},
                           {"diagnosed", est.diagnosed},
                           {"epsilon", spec.epsilon}}},
  };
  if (a.eps1 >= 0) {
    body["dominate"] =
        json{{"eps1", a.eps1},
             {"block_p_lower", est.event_a.ci_low},
             {"pass", dominate_check(est.event_a.ci_low, a.eps1)}};
  }
  emit_json(sink, cfg, std::move(body));
  return 0;
}

// ----------------------------------------------------------------- op-compare
struct OpArgs {
  Common common;
  double p = 0.8;
  int rows = 100;
  long reps = 100;
  int log_every = 1;
  std::string summary_out;
};

int run_op(OpArgs& a) {
  a.common.finish();
  std::map<std::string, std::string> cfg{
      {"subcommand", "op-compare"},     {"p", fmt(a.p)},
      {"rows", std::to_string(a.rows)}, {"reps", std::to_string(a.reps)},
      {"log_every", std::to_string(a.log_every)},
  };
  a.common.echo(cfg);
  Sink sink(a.common.out);
  io::write_header(sink.os(), cfg);
  sink.os() << "seed,died_at,row,l,r,density\n";
  long survived = 0;
  for (long i = 0; i < a.reps; ++i) {
    std::uint64_t s = rng::replicate_seed(a.common.seed, i);
    OPGrid g = percolate(a.p, a.rows, s);
    survived += g.died_at() == -1;
    int last = g.died_at() == -1 ? a.rows : g.died_at() - 1;
    for (int n = 0; n <= last; n += a.log_every)
      sink.os() << i << "," << g.died_at() << "," << n << "," << g.l(n) << ","
                << g.r(n) << "," << fmt(g.density_between_edges(n)) << "\n";
  }
  if (!a.summary_out.empty()) {
    Sink ssink(a.summary_out);
    emit_json(ssink, cfg,
              json{{"survival_fraction",
                    static_cast<double>(survived) / a.reps}});
  }
  return 0;
}

// -------------------------------------------------------------- oracle-check
struct OracleArgs {
  Common common;
  int k = 1;
  double lambda = 0, mu = 0, delta = 1;
  double t = 1;
  long reps = 100000;
};

int run_oracle(OracleArgs& a) {
  a.common.finish();
  Window win = Window::line(a.k);
  Rates rates{a.lambda, a.mu, a.delta};
  GeneratorMatrix q = build_generator(win, rates, a.common.threads);
  Configuration init(win, SiteState::Both);
  auto exact = transient_distribution(q, encode_configuration(init), a.t);
  auto emp = empirical_distribution(win, rates, init, a.t, a.reps,
                                    a.common.seed, a.common.threads);
  double tv = stats::tv_distance(exact, emp);

  std::map<std::string, std::string> cfg{
      {"subcommand", "oracle-check"},   {"k", std::to_string(a.k)},
      {"lambda", fmt(a.lambda)},        {"mu", fmt(a.mu)},
      {"delta", fmt(a.delta)},          {"t", fmt(a.t)},
      {"reps", std::to_string(a.reps)},
  };
  a.common.echo(cfg);
  Sink sink(a.common.out);
  emit_json(sink, cfg,
            json{{"state_encoding", "base-4 over sites in index order"},
                 {"exact", exact},
                 {"empirical", emp},
                 {"tv_distance", tv}});
  return 0;
}

// ------------------------------------------------------------------ converge
struct ConvergeArgs {
  Common common;
  int dim = 1;
  double lambda = 3, mu = 3, delta = 1;
  std::string b = "0", d = "0";
  std::string t_grid = "4,8,16";
  double burn_in = 10, pad_speed = 4;
  int radius = 0;  // 0 = automatic
  long reps = 10000;
  double level = 0.95;
  std::string out_csv;
};

int run_converge(ConvergeArgs& a) {
  a.common.finish();
  ConvergenceParams p;
  p.dim = a.dim;
  p.rates = {a.lambda, a.mu, a.delta};
  p.set_b = parse_sites(a.b, a.dim);
  p.set_d = parse_sites(a.d, a.dim);
  p.t_grid = parse_grid(a.t_grid);
  p.burn_in = a.burn_in;
  p.pad_speed = a.pad_speed;
  if (a.radius > 0) p.window_radius = a.radius;
  p.reps = a.reps;
  p.seed = a.common.seed;
  p.threads = a.common.threads;
  p.level = a.level;
  ConvergenceReport rep = convergence_test(p);

  std::map<std::string, std::string> cfg{
      {"subcommand", "converge"},  {"dim", std::to_string(a.dim)},
      {"lambda", fmt(a.lambda)},   {"mu", fmt(a.mu)},
      {"delta", fmt(a.delta)},     {"B", a.b},
      {"D", a.d},                  {"t_grid", a.t_grid},
      {"burn_in", fmt(a.burn_in)}, {"pad_speed", fmt(a.pad_speed)},
      {"radius", a.radius > 0 ? std::to_string(a.radius) : "auto"},
      {"reps", std::to_string(a.reps)}, {"level", fmt(a.level)},
  };
  a.common.echo(cfg);

  json points = json::array();
  for (const auto& pt : rep.points) {
    points.push_back(json{
        {"t", pt.t},
        {"window_radius", pt.window_radius},
        {"lhs", estimate_json(pt.lhs)},
        {"survive_half", estimate_json(pt.survive_half)},
        {"hit_from_full", estimate_json(pt.hit_from_full)},
        {"rhs", pt.rhs},
        {"rhs_se", pt.rhs_se},
        {"residual", pt.residual},
        {"residual_half_width", pt.residual_half_width},
        {"nonintersection", estimate_json(pt.nonintersection)},
    });
  }
  Sink sink(a.common.out);
  emit_json(sink, cfg, json{{"points", points}});

  if (!a.out_csv.empty()) {
    Sink csv(a.out_csv);
    io::write_header(csv.os(), cfg);
    csv.os() << "t,lhs,lhs_lo,lhs_hi,rhs,rhs_se,residual,residual_half_width,"
                "nonintersection,nonintersection_lo,nonintersection_hi\n";
    for (const auto& pt : rep.points)
      csv.os() << fmt(pt.t) << "," << fmt(pt.lhs.point) << ","
               << fmt(pt.lhs.ci_low) << "," << fmt(pt.lhs.ci_high) << ","
               << fmt(pt.rhs) << "," << fmt(pt.rhs_se) << ","
               << fmt(pt.residual) << "," << fmt(pt.residual_half_width)
               << "," << fmt(pt.nonintersection.point) << ","
               << fmt(pt.nonintersection.ci_low) << ","
               << fmt(pt.nonintersection.ci_high) << "\n";
  }
  return 0;
}

// ---------------------------------------------------------------------- scan
struct ScanArgs {
  Common common;
  int dim = 1, radius = 50, cube_n = 1;
  double lambda = 3, delta = 1;
  std::string mu_grid = "0,0.5,1,2,4";
  double horizon = 50, burn_in = 10;
  long reps = 400;
  double level = 0.95;
  std::string summary_out;
};

int run_scan(ScanArgs& a) {
  a.common.finish();
  ScanParams p;
  p.dim = a.dim;
  p.window_radius = a.radius;
  p.cube_n = a.cube_n;
  p.lambda = a.lambda;
  p.delta = a.delta;
  p.mu_grid = parse_grid(a.mu_grid);
  p.horizon = a.horizon;
  p.burn_in = a.burn_in;
  p.reps = a.reps;
  p.seed = a.common.seed;
  p.threads = a.common.threads;
  p.level = a.level;
  ScanResult res = survival_scan(p);

  std::map<std::string, std::string> cfg{
      {"subcommand", "scan"},
      {"dim", std::to_string(a.dim)},
      {"radius", std::to_string(a.radius)},
      {"cube_n", std::to_string(a.cube_n)},
      {"lambda", fmt(a.lambda)},
      {"delta", fmt(a.delta)},
      {"mu_grid", a.mu_grid},
      {"horizon", fmt(a.horizon)},
      {"burn_in", fmt(a.burn_in)},
      {"reps", std::to_string(a.reps)},
      {"level", fmt(a.level)},
  };
  a.common.echo(cfg);
  Sink sink(a.common.out);
  io::write_header(sink.os(), cfg);
  sink.os() << "mu,survival,ci_low,ci_high\n";
  for (std::size_t k = 0; k < res.mu_grid.size(); ++k)
    sink.os() << fmt(res.mu_grid[k]) << "," << fmt(res.survival[k].point)
              << "," << fmt(res.survival[k].ci_low) << ","
              << fmt(res.survival[k].ci_high) << "\n";

  if (!a.summary_out.empty()) {
    Sink ssink(a.summary_out);
    emit_json(ssink, cfg,
              json{{"monotone_per_seed", res.monotone_per_seed},
                   {"mu_star",
                    res.mu_star ? json(*res.mu_star) : json(nullptr)}});
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-level contact process simulation laboratory"};
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* csim = app.add_subcommand("simulate", "run one trajectory");
  sim.common.add_to(csim);
  csim->add_option("--dim", sim.dim);
  csim->add_option("--radius", sim.radius);
  csim->add_option("--trunc", sim.trunc, "birth-truncation radius (0 = none)");
  csim->add_option("--lambda", sim.lambda);
  csim->add_option("--mu", sim.mu);
  csim->add_option("--delta", sim.delta);
  csim->add_option("--t-min", sim.t_min);
  csim->add_option("--t-max", sim.t_max);
  csim->add_option("--init", sim.init, "all1|all3|cube|burnin-cube");
  csim->add_option("--cube-n", sim.cube_n);
  csim->add_option("--burn-in", sim.burn_in);
  csim->add_option("--mode", sim.mode,
                   "forward|animals|dual-animal|dual-flea (dual modes build "
                   "the animal history from all-1 at anchor - s_max)");
  csim->add_option("--anchor", sim.anchor);
  csim->add_option("--s-max", sim.s_max);
  csim->add_option("--dual-set", sim.dual_set, "initial dual set");
  csim->add_option("--summary-out", sim.summary_out);
  csim->add_option("--dump-log", sim.dump_log,
                   "also write the raw mark log as CSV");

  DualCheckArgs dc;
  auto* cdc = app.add_subcommand("dual-check", "distributional duality check");
  dc.common.add_to(cdc);
  cdc->add_option("--dim", dc.dim);
  cdc->add_option("--radius", dc.radius);
  cdc->add_option("--lambda", dc.lambda);
  cdc->add_option("--mu", dc.mu);
  cdc->add_option("--delta", dc.delta);
  cdc->add_option("--B", dc.b, "forward flea start, e.g. \"0;1\"");
  cdc->add_option("--C", dc.c, "animal target set");
  cdc->add_option("--D", dc.d, "flea target set / dual start");
  cdc->add_option("--t", dc.t);
  cdc->add_option("--burn-in", dc.burn_in);
  cdc->add_option("--reps", dc.reps);
  cdc->add_option("--level", dc.level);

  BlockArgs bl;
  auto* cbl =
      app.add_subcommand("block-estimate", "block-construction event estimates");
  bl.common.add_to(cbl);
  cbl->add_option("--dim", bl.dim);
  cbl->add_option("--n", bl.n, "seed-cube radius");
  cbl->add_option("--L", bl.L, "translation range");
  cbl->add_option("--T", bl.T, "horizon (events read on [1, T+1])");
  cbl->add_option("--lambda", bl.lambda);
  cbl->add_option("--mu", bl.mu);
  cbl->add_option("--delta", bl.delta);
  cbl->add_option("--burn-in", bl.burn_in);
  cbl->add_option("--pad", bl.pad);
  cbl->add_option("--epsilon", bl.epsilon);
  cbl->add_option("--reps", bl.reps);
  cbl->add_option("--level", bl.level);
  cbl->add_option("--eps1", bl.eps1,
                  "report the dominance check at threshold 1-eps1");
  cbl->add_flag("--dual", bl.dual, "estimate the dual block events");

  OpArgs op;
  auto* cop =
      app.add_subcommand("op-compare", "oriented percolation edge processes");
  op.common.add_to(cop);
  cop->add_option("--p", op.p)->required();
  cop->add_option("--rows", op.rows);
  cop->add_option("--reps", op.reps);
  cop->add_option("--log-every", op.log_every);
  cop->add_option("--summary-out", op.summary_out);

  OracleArgs orc;
  auto* corc = app.add_subcommand("oracle-check", "exact CTMC vs simulator");
  orc.common.add_to(corc);
  corc->add_option("--k", orc.k, "window size in sites (1..8)");
  corc->add_option("--lambda", orc.lambda);
  corc->add_option("--mu", orc.mu);
  corc->add_option("--delta", orc.delta);
  corc->add_option("--t", orc.t);
  corc->add_option("--reps", orc.reps);

  ConvergeArgs cv;
  auto* ccv =
      app.add_subcommand("converge", "complete-convergence factorization");
  cv.common.add_to(ccv);
  ccv->add_option("--dim", cv.dim);
  ccv->add_option("--lambda", cv.lambda);
  ccv->add_option("--mu", cv.mu);
  ccv->add_option("--delta", cv.delta);
  ccv->add_option("--B", cv.b);
  ccv->add_option("--D", cv.d);
  ccv->add_option("--t-grid", cv.t_grid);
  ccv->add_option("--burn-in", cv.burn_in);
  ccv->add_option("--pad-speed", cv.pad_speed);
  ccv->add_option("--radius", cv.radius, "window radius (0 = automatic)");
  ccv->add_option("--reps", cv.reps);
  ccv->add_option("--level", cv.level);
  ccv->add_option("--out-csv", cv.out_csv);

  ScanArgs sc;
  auto* csc = app.add_subcommand("scan", "mu survival scan");
  sc.common.add_to(csc);
  csc->add_option("--dim", sc.dim);
  csc->add_option("--radius", sc.radius);
  csc->add_option("--cube-n", sc.cube_n);
  csc->add_option("--lambda", sc.lambda);
  csc->add_option("--delta", sc.delta);
  csc->add_option("--mu-grid", sc.mu_grid);
  csc->add_option("--horizon", sc.horizon);
  csc->add_option("--burn-in", sc.burn_in);
  csc->add_option("--reps", sc.reps);
  csc->add_option("--level", sc.level);
  csc->add_option("--summary-out", sc.summary_out);

  std::vector<std::string> args(argv + 1, argv + argc);
  try {
    inject_config(args);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  std::reverse(args.begin(), args.end());
  try {
    app.parse(std::move(args));
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (csim->parsed()) return run_simulate(sim);
    if (cdc->parsed()) return run_dual_check(dc);
    if (cbl->parsed()) return run_block(bl);
    if (cop->parsed()) return run_op(op);
    if (corc->parsed()) return run_oracle(orc);
    if (ccv->parsed()) return run_converge(cv);
    if (csc->parsed()) return run_scan(sc);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
