#include "multippl/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "multippl/errors.hpp"
#include "multippl/oracle.hpp"
#include "multippl/parser.hpp"
#include "multippl/rng.hpp"

namespace multippl::cli {
namespace {

using json = nlohmann::ordered_json;

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::vector<double> read_truth(const std::string& path) {
  const json doc = json::parse(read_file(path));
  const json& truth = doc.is_array() ? doc : doc.at("truth");
  return truth.get<std::vector<double>>();
}

double l1_distance(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size())
    throw EvalError(EvalErrorKind::QueryUnsupported, "oracle has " + std::to_string(b.size()) +
                                                         " components but the estimate has " +
                                                         std::to_string(a.size()));
  double total = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) total += std::fabs(a[i] - b[i]);
  return total;
}

std::string join(const std::vector<double>& xs) {
  std::ostringstream out;
  out.precision(17);
  for (std::size_t i = 0; i < xs.size(); ++i) out << (i ? ";" : "") << xs[i];
  return out.str();
}

std::uint64_t default_seed() {
  if (const char* env = std::getenv("MULTIPPL_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw std::runtime_error(std::string("MULTIPPL_SEED is not an unsigned integer: '") + env + "'");
    }
  }
  return 0;
}

}  // namespace

std::string RunReport::to_json() const {
  json j;
  j["program"] = program;
  j["mode"] = mode;
  j["query"] = query;
  if (mode != "exact") {
    j["n"] = n;
    j["seed"] = seed;
  }
  if (mode == "compare") j["trials"] = trials;
  j["estimate"] = estimate ? json(*estimate) : json(nullptr);
  if (mode == "sample") {
    j["std_error"] = std_error;
    j["unweighted"] = unweighted;
    j["sum_weights"] = sum_weights;
    j["ess"] = ess;
  }
  if (mode == "exact") {
    j["z"] = z.value_or(0.0);
    json post = json::array();
    for (const auto& [value, p] : posterior) post.push_back({{"value", value}, {"prob", p}});
    j["posterior"] = post;
  }
  if (mode == "compare") {
    j["truth"] = truth;
    j["l1"] = l1.value_or(0.0);
    j["l1_std_error"] = l1_std_error.value_or(0.0);
  }
  j["seconds"] = seconds;
  return j.dump(2);
}

std::string RunReport::to_csv_row() const {
  std::ostringstream out;
  out.precision(17);
  out << program << ',' << mode << ',' << query << ',' << n << ',' << seed << ',' << trials << ','
      << (estimate ? join(*estimate) : "") << ',' << sum_weights << ',' << ess << ',';
  if (l1) out << *l1;
  out << ',';
  if (l1_std_error) out << *l1_std_error;
  out << ',';
  if (z) out << *z;
  out << ',' << seconds;
  return out.str();
}

Query parse_query(const std::string& text) {
  if (text == "expectation") return Query::expectation();
  const std::string prefix = "marginal=";
  if (text.rfind(prefix, 0) == 0) {
    const std::string rest = text.substr(prefix.size());
    std::size_t used = 0;
    int k = -1;
    try {
      k = std::stoi(rest, &used);
    } catch (const std::exception&) {
    }
    if (used == rest.size() && k >= 0) return Query::marginal(k);
  }
  throw std::invalid_argument("unknown query '" + text + "' (expected 'expectation' or 'marginal=K')");
}

TypedProgram load_program(const std::string& path) { return check(parse(read_file(path))); }

RunReport cmd_run(const RunArgs& args) {
  const Stopwatch clock;
  const TypedProgram p = load_program(args.path);
  EstimateOptions opts;
  opts.seed = args.seed;
  opts.fuel = args.fuel;
  opts.jobs = args.jobs;
  const Estimate est = estimate(p, args.samples, parse_query(args.query), opts);

  RunReport r;
  r.program = args.path;
  r.mode = "sample";
  r.query = args.query;
  r.n = args.samples;
  r.seed = args.seed;
  if (est.defined()) r.estimate = est.mean;
  r.std_error = est.std_error;
  r.unweighted = est.unweighted;
  r.sum_weights = est.sum_weights;
  r.ess = est.ess;
  r.seconds = clock.seconds();
  return r;
}

RunReport cmd_exact(const CommonArgs& args) {
  const Stopwatch clock;
  const TypedProgram p = load_program(args.path);
  const Query q = parse_query(args.query);
  const Posterior post = enumerate(p);

  RunReport r;
  r.program = args.path;
  r.mode = "exact";
  r.query = args.query;
  if (post.z > 0.0) r.estimate = post.expectation(q);
  r.z = post.z;
  for (const auto& [value, prob] : post.probs) r.posterior.emplace_back(to_string(value), prob);
  r.seconds = clock.seconds();
  return r;
}

RunReport cmd_compare(const CompareArgs& args) {
  const Stopwatch clock;
  const TypedProgram p = load_program(args.path);
  const Query q = parse_query(args.query);
  const std::vector<double> truth = args.oracle_path.empty() ? enumerate(p).expectation(q) : read_truth(args.oracle_path);

  std::vector<double> l1s;
  for (std::size_t t = 0; t < args.trials; ++t) {
    EstimateOptions opts;
    opts.seed = derive_seed(args.seed, t);
    opts.fuel = args.fuel;
    opts.jobs = args.jobs;
    const Estimate est = estimate(p, args.samples, q, opts);
    const std::vector<double> guess = est.defined() ? est.mean : std::vector<double>(truth.size(), 0.0);
    l1s.push_back(l1_distance(guess, truth));
  }
  double mean = 0.0;
  for (double x : l1s) mean += x;
  mean /= static_cast<double>(std::max<std::size_t>(1, l1s.size()));
  double var = 0.0;
  for (double x : l1s) var += (x - mean) * (x - mean);
  const double se = l1s.size() > 1 ? std::sqrt(var / static_cast<double>(l1s.size() - 1)) /
                                         std::sqrt(static_cast<double>(l1s.size()))
                                   : 0.0;

  RunReport r;
  r.program = args.path;
  r.mode = "compare";
  r.query = args.query;
  r.n = args.samples;
  r.seed = args.seed;
  r.trials = args.trials;
  r.truth = truth;
  r.l1 = mean;
  r.l1_std_error = se;
  r.seconds = clock.seconds();
  return r;
}

Outcome main(const std::vector<std::string>& args) {
  Outcome outcome;
  std::ostringstream out, err;

  CLI::App app{"Run, solve exactly, or benchmark multippl programs"};
  app.name("multippl");
  app.require_subcommand(1);

  std::uint64_t seed_default = 0;
  try {
    seed_default = default_seed();
  } catch (const std::exception& e) {
    outcome.code = 1;
    outcome.err = std::string("error: ") + e.what() + "\n";
    return outcome;
  }

  RunArgs run_args;
  CommonArgs exact_args;
  CompareArgs compare_args;
  run_args.seed = compare_args.seed = seed_default;
  std::string format = "json";

  auto add_common = [&](CLI::App* sub, CommonArgs& a) {
    sub->add_option("file", a.path, "Program file (.mppl)")->required();
    sub->add_option("--query", a.query, "expectation | marginal=K")->capture_default_str();
    sub->add_option("--format", format, "json | csv")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
  };
  auto add_sampling = [&](CLI::App* sub, CommonArgs& a, std::size_t& samples) {
    sub->add_option("--samples,-n", samples, "Runs per estimate")->capture_default_str()->check(CLI::PositiveNumber);
    sub->add_option("--seed", a.seed, "Base seed (default: $MULTIPPL_SEED or 0)")->capture_default_str();
    sub->add_option("--fuel", a.fuel, "Loop iteration budget per run")->capture_default_str();
    sub->add_option("--jobs,-j", a.jobs, "Worker threads")->capture_default_str()->check(CLI::PositiveNumber);
  };

  CLI::App* run = app.add_subcommand("run", "Estimate a query by importance sampling");
  add_common(run, run_args);
  add_sampling(run, run_args, run_args.samples);

  CLI::App* exact = app.add_subcommand("exact", "Exact posterior by enumeration");
  add_common(exact, exact_args);

  CLI::App* compare = app.add_subcommand("compare", "Mean L1 error of repeated estimates against an oracle");
  add_common(compare, compare_args);
  add_sampling(compare, compare_args, compare_args.samples);
  compare->add_option("--trials,-t", compare_args.trials, "Independent trials")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  compare->add_option("--oracle", compare_args.oracle_path, "JSON file holding the true query value")
      ->check(CLI::ExistingFile);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    outcome.code = app.exit(e, out, err) == 0 ? 0 : 1;
    outcome.out = out.str();
    outcome.err = err.str();
    return outcome;
  }

  const std::string& path = run->parsed() ? run_args.path : exact->parsed() ? exact_args.path : compare_args.path;
  try {
    RunReport report;
    if (run->parsed()) {
      report = cmd_run(run_args);
    } else if (exact->parsed()) {
      report = cmd_exact(exact_args);
    } else {
      report = cmd_compare(compare_args);
    }
    out << (format == "csv" ? report.to_csv_row() : report.to_json()) << "\n";
  } catch (const ParseError& e) {
    outcome.code = 1;
    err << e.diagnostic().render(path) << "\n";
  } catch (const TypeError& e) {
    outcome.code = 1;
    err << e.diagnostic().render(path) << "\n";
  } catch (const EvalError& e) {
    outcome.code = 2;
    err << path << ": error[" << code_of(e.kind()) << "]: " << e.message() << "\n";
  } catch (const std::invalid_argument& e) {
    outcome.code = 1;
    err << "error: " << e.what() << "\n";
  } catch (const std::exception& e) {
    outcome.code = 1;
    err << path << ": error: " << e.what() << "\n";
  }
  outcome.out = out.str();
  outcome.err = err.str();
  return outcome;
}

}  // namespace multippl::cli
