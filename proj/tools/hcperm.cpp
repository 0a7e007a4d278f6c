// hcperm: exact permanents, Hamiltonian-cycle counts and shortest ATSP tours.
//
// Exit codes: 0 success, 1 input error, 2 internal invariant violation.

#include <chrono>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "hcperm/hcperm.hpp"
#include "selftest.hpp"

namespace hcperm::cli {
namespace {

using json = nlohmann::json;

enum class Algo { automatic, brute, classic, dp, tabulated };
enum class Format { automatic, matrix, multigraph };

struct RunConfig {
  std::string input;
  Algo algo = Algo::automatic;
  Format format = Format::automatic;
  std::optional<std::size_t> k;
  unsigned threads = 1;
  bool json = false;
  bool verify = false;
  std::size_t oracle_cap = kDefaultOracleCap;
  std::string dump_terms;
  std::uint64_t max_weight = 0;
};

std::string read_input(const std::string& path) {
  if (path == "-") return {std::istreambuf_iterator<char>(std::cin), {}};
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open input file '" + path + "'");
  return {std::istreambuf_iterator<char>(in), {}};
}

/// A multigraph header has two integers, a matrix header one.
Format detect_format(const std::string& text) {
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream words(line);
    std::size_t count = 0;
    for (std::string w; words >> w;) ++count;
    return count == 2 ? Format::multigraph : Format::matrix;
  }
  return Format::matrix;
}

Instance<BigInt> load_instance(const RunConfig& cfg) {
  const std::string text = read_input(cfg.input);
  const Format f = cfg.format == Format::automatic ? detect_format(text) : cfg.format;
  return f == Format::multigraph ? ingest_multigraph(text) : ingest_matrix(text);
}

Algo resolve(Algo algo, std::size_t n) {
  if (algo != Algo::automatic) return algo;
  if (n <= 8) return Algo::brute;
  if (n <= 20) return Algo::classic;
  return Algo::tabulated;
}

const char* algo_name(Algo a) {
  switch (a) {
    case Algo::automatic: return "auto";
    case Algo::brute: return "brute";
    case Algo::classic: return "classic";
    case Algo::dp: return "dp";
    case Algo::tabulated: return "tabulated";
  }
  return "?";
}

// Timings are kept out of this object so repeated runs print identical bytes.
json stats_json(const RunStats& stats) {
  json per_prime = json::array();
  for (const auto& ps : stats.per_prime) {
    per_prime.push_back({{"p", ps.prime},
                         {"terms", ps.terms_seen},
                         {"distinct", ps.distinct_keys},
                         {"evaluated", ps.evaluated_keys}});
  }
  return {{"n", stats.n},
          {"M", to_decimal(stats.max_abs_weight)},
          {"primes", stats.primes},
          {"k", stats.k},
          {"per_prime", per_prime}};
}

json timing_json(const RunStats& stats) {
  return {{"reduce", stats.reduce_seconds},
          {"evaluate", stats.evaluate_seconds},
          {"reconstruct", stats.reconstruct_seconds}};
}

int run_count(const RunConfig& cfg, CountingProblem problem) {
  const auto inst = load_instance(cfg);
  const std::size_t n = inst.size();
  const Algo algo = resolve(cfg.algo, n);
  const bool per = problem == CountingProblem::permanent;
  BigInt value;
  json out = {{"problem", to_string(problem)}, {"n", n}, {"algo", algo_name(algo)}};
  switch (algo) {
    case Algo::brute:
      value = per ? per_brute(inst, cfg.oracle_cap) : hc_brute(inst, cfg.oracle_cap);
      break;
    case Algo::classic:
      value = per ? per_ryser(inst) : hc_ie(inst);
      break;
    case Algo::dp:
      if (per) throw InputError("--algo dp applies to hc only");
      value = hc_dp(inst);
      break;
    case Algo::tabulated: {
      TabulationOptions opt;
      opt.k = cfg.k;
      opt.threads = cfg.threads;
      opt.verify_residues = cfg.verify;
      std::ofstream dump;
      if (!cfg.dump_terms.empty()) {
        dump.open(cfg.dump_terms);
        if (!dump) throw InputError("cannot write '" + cfg.dump_terms + "'");
        opt.trace = [&dump](std::uint64_t p, const ReducedTerm& t) {
          dump << t.subset << ' ' << t.node << ' ' << t.coeff.v << ' ' << canonical_key(t.small, p).to_string() << '\n';
        };
      }
      auto result = per ? per_tabulated(inst, opt) : hc_tabulated(inst, opt);
      value = result.value;
      out.update(stats_json(result.stats));
      break;
    }
    case Algo::automatic:
      break;
  }
  if (cfg.json) {
    out["value"] = to_decimal(value);
    std::cout << out.dump() << '\n';
  } else {
    std::cout << to_decimal(value) << '\n';
  }
  return 0;
}

int run_atsp(const RunConfig& cfg) {
  const auto inst = ingest_atsp(read_input(cfg.input));
  const Algo algo = cfg.algo == Algo::automatic ? Algo::classic : cfg.algo;
  std::optional<std::uint64_t> best;
  json out = {{"problem", "atsp"}, {"n", inst.n}, {"algo", algo_name(algo)}, {"max_weight", cfg.max_weight}};
  if (algo == Algo::brute) {
    validate_atsp(inst, cfg.max_weight);
    best = tsp_brute(inst, cfg.oracle_cap);
  } else if (algo == Algo::classic) {
    const auto tours = atsp_tour_polynomial(inst, cfg.max_weight);
    if (!tours.is_zero()) {
      best = tours.lowest_degree();
      out["tours_at_optimum"] = to_decimal(tours[*best]);
    }
  } else {
    throw InputError(std::string("--algo ") + algo_name(algo) + " is not available for atsp");
  }
  if (cfg.json) {
    out["value"] = best ? json(std::to_string(*best)) : json(nullptr);
    std::cout << out.dump() << '\n';
  } else {
    std::cout << (best ? std::to_string(*best) : std::string("none")) << '\n';
  }
  return 0;
}

struct GenConfig {
  std::string kind = "matrix";
  std::size_t n = 6;
  long lo = -10;
  long hi = 10;
  double density = 0.5;
  std::uint64_t max_mult = 1;
  std::uint64_t max_weight = 10;
  double absent = 0.3;
  std::uint64_t seed = 1;
  std::string output = "-";
};

int run_gen(const GenConfig& g) {
  Rng rng(g.seed);
  std::string header = "# hcperm gen kind=" + g.kind + " n=" + std::to_string(g.n) + " seed=" + std::to_string(g.seed);
  std::string body;
  if (g.kind == "matrix") {
    if (g.lo > g.hi) throw InputError("--lo must not exceed --hi");
    header += " lo=" + std::to_string(g.lo) + " hi=" + std::to_string(g.hi);
    body = serialize_matrix(random_matrix(g.n, g.lo, g.hi, rng));
  } else if (g.kind == "multigraph") {
    header += " density=" + std::to_string(g.density) + " max-mult=" + std::to_string(g.max_mult);
    body = serialize_multigraph(g.n, random_multigraph(g.n, g.density, g.max_mult, rng));
  } else if (g.kind == "atsp") {
    header += " max-weight=" + std::to_string(g.max_weight) + " absent=" + std::to_string(g.absent);
    body = serialize_atsp(random_atsp(g.n, g.max_weight, g.absent, rng));
  } else {
    throw InputError("unknown --kind '" + g.kind + "'");
  }
  const std::string text = header + "\n" + body;
  if (g.output == "-") {
    std::cout << text;
  } else {
    std::ofstream out(g.output);
    if (!out) throw InputError("cannot write '" + g.output + "'");
    out << text;
  }
  return 0;
}

struct BenchConfig {
  std::size_t min_n = 8;
  std::size_t max_n = 14;
  std::string problem = "hc";
  std::optional<std::size_t> k;
  unsigned threads = 1;
  double density = 0.5;
  std::uint64_t seed = 1;
  bool json = false;
};

int run_bench(const BenchConfig& b) {
  const auto problem = b.problem == "per" ? CountingProblem::permanent : CountingProblem::hamiltonian_cycles;
  if (b.problem != "per" && b.problem != "hc") throw InputError("--problem must be per or hc");
  if (b.min_n < 2 || b.min_n > b.max_n) throw InputError("need 2 <= --min-n <= --max-n");
  Rng rng(b.seed);
  std::bernoulli_distribution arc(b.density);
  json rows = json::array();
  if (!b.json) {
    std::cout << "problem n  k  primes  terms/prime  distinct/prime  classic_s  tabulated_s  agree\n";
  }
  for (std::size_t n = b.min_n; n <= b.max_n; ++n) {
    Instance<BigInt> inst(n, BigInt(0));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) inst(i, j) = arc(rng) ? 1 : 0;
    }
    auto start = std::chrono::steady_clock::now();
    const BigInt classic = problem == CountingProblem::permanent ? per_ryser(inst) : hc_ie(inst);
    const double classic_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    TabulationOptions opt;
    opt.k = b.k;
    opt.threads = b.threads;
    start = std::chrono::steady_clock::now();
    const auto tab = problem == CountingProblem::permanent ? per_tabulated(inst, opt) : hc_tabulated(inst, opt);
    const double tab_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const auto& ps = tab.stats.per_prime.front();
    const bool agree = classic == tab.value;
    if (b.json) {
      json row = stats_json(tab.stats);
      row["problem"] = b.problem;
      row["seconds"] = timing_json(tab.stats);
      row["classic_seconds"] = classic_s;
      row["tabulated_seconds"] = tab_s;
      row["agree"] = agree;
      row["value"] = to_decimal(tab.value);
      rows.push_back(row);
    } else {
      std::cout << b.problem << "      " << n << "  " << tab.stats.k << "  " << tab.stats.primes.size() << "  "
                << ps.terms_seen << "  " << ps.distinct_keys << "  " << classic_s << "  " << tab_s << "  "
                << (agree ? "yes" : "NO") << '\n';
    }
    if (!agree) throw InternalError("bench: tabulated and classic results differ at n=" + std::to_string(n));
  }
  if (b.json) std::cout << rows.dump(2) << '\n';
  return 0;
}

void add_count_options(CLI::App* sub, RunConfig& cfg) {
  static const std::map<std::string, Algo> algos = {{"auto", Algo::automatic},
                                                    {"brute", Algo::brute},
                                                    {"classic", Algo::classic},
                                                    {"dp", Algo::dp},
                                                    {"tabulated", Algo::tabulated}};
  static const std::map<std::string, Format> formats = {
      {"auto", Format::automatic}, {"matrix", Format::matrix}, {"multigraph", Format::multigraph}};
  sub->add_option("-i,--input", cfg.input, "Instance file ('-' for stdin)")->required();
  sub->add_option("--algo", cfg.algo, "auto | brute | classic | dp (hc only) | tabulated")
      ->transform(CLI::CheckedTransformer(algos, CLI::ignore_case));
  sub->add_option("--format", cfg.format, "auto | matrix | multigraph")
      ->transform(CLI::CheckedTransformer(formats, CLI::ignore_case));
  sub->add_option("--k", cfg.k, "Kernel size for the tabulated algorithm");
  sub->add_option("--threads", cfg.threads, "Worker threads for the tabulated algorithm")->check(CLI::Range(1, 256));
  sub->add_flag("--json", cfg.json, "Print a JSON object including run statistics");
  sub->add_flag("--verify", cfg.verify, "Recheck each residue with a direct classic count");
  sub->add_option("--cap", cfg.oracle_cap, "Largest n accepted by the brute-force oracle");
  sub->add_option("--dump-terms", cfg.dump_terms, "Write every reduction term to this file (tabulated only)");
}

int main_impl(int argc, char** argv) {
  CLI::App app{"Exact permanents, Hamiltonian-cycle counts and shortest ATSP tours"};
  app.require_subcommand(1);

  RunConfig per_cfg, hc_cfg, atsp_cfg;
  auto* per = app.add_subcommand("per", "Permanent of an integer matrix");
  add_count_options(per, per_cfg);
  auto* hc = app.add_subcommand("hc", "Weighted Hamiltonian-cycle count of a digraph");
  add_count_options(hc, hc_cfg);

  auto* atsp = app.add_subcommand("atsp", "Shortest asymmetric TSP tour ('-' marks an absent arc)");
  atsp->add_option("-i,--input", atsp_cfg.input, "ATSP matrix file")->required();
  atsp->add_option("--max-weight", atsp_cfg.max_weight, "Largest allowed arc weight M")->required();
  atsp->add_option("--algo", atsp_cfg.algo, "auto | brute | classic")
      ->transform(CLI::CheckedTransformer(
          std::map<std::string, Algo>{{"auto", Algo::automatic}, {"brute", Algo::brute}, {"classic", Algo::classic}},
          CLI::ignore_case));
  atsp->add_flag("--json", atsp_cfg.json, "Print a JSON object");
  atsp->add_option("--cap", atsp_cfg.oracle_cap, "Largest n accepted by the brute-force oracle");

  GenConfig gen_cfg;
  auto* gen = app.add_subcommand("gen", "Emit a seeded random instance");
  gen->add_option("--kind", gen_cfg.kind, "matrix | multigraph | atsp")->check(CLI::IsMember({"matrix", "multigraph", "atsp"}));
  gen->add_option("-n,--n", gen_cfg.n, "Vertex count")->check(CLI::Range(1, 64));
  gen->add_option("--lo", gen_cfg.lo, "Smallest matrix entry");
  gen->add_option("--hi", gen_cfg.hi, "Largest matrix entry");
  gen->add_option("--density", gen_cfg.density, "Arc probability for multigraphs")->check(CLI::Range(0.0, 1.0));
  gen->add_option("--max-mult", gen_cfg.max_mult, "Largest arc multiplicity for multigraphs");
  gen->add_option("--max-weight", gen_cfg.max_weight, "Largest ATSP arc weight");
  gen->add_option("--absent", gen_cfg.absent, "Probability that an ATSP arc is absent")->check(CLI::Range(0.0, 1.0));
  gen->add_option("--seed", gen_cfg.seed, "Random seed");
  gen->add_option("-o,--output", gen_cfg.output, "Output file ('-' for stdout)");

  SelftestConfig self_cfg;
  auto* selftest = app.add_subcommand("selftest", "Run the cross-implementation property checks");
  selftest->add_option("--max-n", self_cfg.max_n, "Largest instance size")->check(CLI::Range(2, 10));
  selftest->add_option("--seed", self_cfg.seed, "Random seed");
  selftest->add_option("--threads", self_cfg.threads, "Workers for the determinism check")->check(CLI::Range(1, 256));

  BenchConfig bench_cfg;
  auto* bench = app.add_subcommand("bench", "Sweep n and report tabulation statistics");
  bench->add_option("--min-n", bench_cfg.min_n, "Smallest n");
  bench->add_option("--max-n", bench_cfg.max_n, "Largest n");
  bench->add_option("--problem", bench_cfg.problem, "per | hc");
  bench->add_option("--k", bench_cfg.k, "Kernel size override");
  bench->add_option("--threads", bench_cfg.threads, "Worker threads")->check(CLI::Range(1, 256));
  bench->add_option("--density", bench_cfg.density, "Probability of a 1 entry")->check(CLI::Range(0.0, 1.0));
  bench->add_option("--seed", bench_cfg.seed, "Random seed");
  bench->add_flag("--json", bench_cfg.json, "Print JSON rows");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  if (*per) return run_count(per_cfg, CountingProblem::permanent);
  if (*hc) return run_count(hc_cfg, CountingProblem::hamiltonian_cycles);
  if (*atsp) return run_atsp(atsp_cfg);
  if (*gen) return run_gen(gen_cfg);
  if (*selftest) return Selftest(self_cfg).run(std::cout) == 0 ? 0 : 2;
  if (*bench) return run_bench(bench_cfg);
  return 1;
}

}  // namespace
}  // namespace hcperm::cli

int main(int argc, char** argv) {
  try {
    return hcperm::cli::main_impl(argc, argv);
  } catch (const hcperm::InternalError& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 2;
  } catch (const hcperm::InputError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return 1;
  } catch (const hcperm::LimitError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
