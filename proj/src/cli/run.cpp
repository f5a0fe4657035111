#include "l1lab/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "l1lab/errors.hpp"
#include "l1lab/json_io.hpp"
#include "l1lab/parallel.hpp"

namespace l1lab::cli {
namespace {

struct Raw {
  std::vector<std::string> bch, rademacher, random, search;
  std::string family_file;
  std::string format = "json";
  std::string n_list;
  std::optional<double> p;
};

struct Parser {
  CLI::App app{"l1lab: finite laboratory for L_1 operator norms, Lambda(q) character systems and hull distances",
               "l1lab"};
  RunConfig config;
  Raw raw;
  CLI::App* construct = nullptr;
  CLI::App* lambda = nullptr;
  CLI::App* lemma = nullptr;
  CLI::App* verify = nullptr;
  CLI::App* lemma_optimality = nullptr;
  CLI::App* optimality = nullptr;
  CLI::App* separate = nullptr;

  Parser() {
    app.set_config("--config", "", "key = value file; command-line flags take precedence");
    app.require_subcommand(1);
    app.fallthrough();
    app.add_option("--seed", config.seed, "64-bit seed")->envname("L1LAB_SEED");
    app.add_option("--workers", config.workers, "worker threads (0: all cores)");
    app.add_option("--format", raw.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    app.add_option("--out", config.output_path, "report path (stdout if omitted)");
    app.add_option("--exact-threshold", config.exact_threshold, "largest N for exact sign enumeration");
    app.add_option("--max-bits", config.max_bits, "joint cube cap")->check(CLI::Range(1, 24));
    app.add_option("--restarts", config.restarts, "heuristic sign-search restarts")->check(CLI::PositiveNumber);

    construct = app.add_subcommand("construct", "build a character family");
    add_family_flags(construct);
    construct->add_option("--verify", config.verify_order, "check independence of this order");

    lambda = app.add_subcommand("lambda", "Lambda(q) bounds of a family");
    add_family_flags(lambda);
    lambda->add_option("--family", raw.family_file, "family JSON file");
    lambda->add_option("--q", config.q, "moment exponent")->check(CLI::Range(1.0, 1e6));
    lambda->add_option("--samples", config.samples, "random probes");

    lemma = app.add_subcommand("lemma", "operator-norm lower bound");
    lemma->require_subcommand(1);
    verify = lemma->add_subcommand("verify", "certificate for an operator and vectors");
    verify->add_option("--input", config.inputs, "operator and family/vector JSON files")->required();
    verify->add_option("--q", config.q, "moment exponent")->check(CLI::Range(1.0, 1e6));
    verify->add_option("--p", raw.p, "target exponent (default: from dimensions)");
    lemma_optimality = lemma->add_subcommand("optimality", "extremal construction");
    add_optimality_flags(lemma_optimality);
    optimality = app.add_subcommand("optimality", "same as `lemma optimality`");
    add_optimality_flags(optimality);

    separate = app.add_subcommand("separate", "coverage sweep over block sizes");
    separate->add_option("--p", raw.p, "target exponent (even)")->required();
    separate->add_option("--q", config.q, "block exponent (even, > p)")->required();
    separate->add_option("--n", raw.n_list, "comma-separated block sizes")->required();
    separate->add_option("--epsilon", config.epsilon, "coverage tolerance");
    separate->add_option("--strategy", config.strategy, "orthogonal_map or random");
  }

  void add_family_flags(CLI::App* sub) {
    sub->add_option("--bch", raw.bch, "m=<field degree> k=<half order>")->expected(0, 2);
    sub->add_option("--rademacher", raw.rademacher, "n=<bits>")->expected(0, 1);
    sub->add_option("--random", raw.random, "n=<bits> count=<N>")->expected(0, 2);
    sub->add_option("--search", raw.search, "n=<bits> count=<N> t=<order>")->expected(0, 3);
  }

  void add_optimality_flags(CLI::App* sub) {
    sub->add_option("--q", config.q, "even q >= 2")->required();
    sub->add_option("--N", config.N, "number of vectors")->required();
    sub->add_option("--p", raw.p, "target exponent")->required();
  }
};

std::map<std::string, long long> key_values(const std::vector<std::string>& tokens, const std::string& flag) {
  std::map<std::string, long long> out;
  for (const auto& token : tokens) {
    const auto eq = token.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 == token.size()) {
      throw DomainError(flag + ": expected key=value, got '" + token + "'");
    }
    try {
      std::size_t used = 0;
      const long long value = std::stoll(token.substr(eq + 1), &used);
      if (used != token.size() - eq - 1) throw std::invalid_argument(token);
      out[token.substr(0, eq)] = value;
    } catch (const std::logic_error&) {
      throw DomainError(flag + ": value of '" + token + "' is not an integer");
    }
  }
  return out;
}

long long need(const std::map<std::string, long long>& kv, const std::string& key, const std::string& flag) {
  const auto it = kv.find(key);
  if (it == kv.end()) throw DomainError(flag + " needs " + key + "=");
  return it->second;
}

FamilySpec family_spec(const Parser& parser, CLI::App* sub) {
  FamilySpec spec;
  int chosen = 0;
  if (sub->count("--bch")) {
    const auto kv = key_values(parser.raw.bch, "--bch");
    spec.kind = "bch";
    spec.m = static_cast<int>(need(kv, "m", "--bch"));
    spec.k = static_cast<int>(need(kv, "k", "--bch"));
    ++chosen;
  }
  if (sub->count("--rademacher")) {
    const auto kv = key_values(parser.raw.rademacher, "--rademacher");
    spec.kind = "rademacher";
    spec.n = static_cast<int>(need(kv, "n", "--rademacher"));
    ++chosen;
  }
  if (sub->count("--random")) {
    const auto kv = key_values(parser.raw.random, "--random");
    spec.kind = "random";
    spec.n = static_cast<int>(need(kv, "n", "--random"));
    spec.count = static_cast<std::size_t>(need(kv, "count", "--random"));
    ++chosen;
  }
  if (sub->count("--search")) {
    const auto kv = key_values(parser.raw.search, "--search");
    spec.kind = "search";
    spec.n = static_cast<int>(need(kv, "n", "--search"));
    spec.count = static_cast<std::size_t>(need(kv, "count", "--search"));
    spec.t = static_cast<int>(need(kv, "t", "--search"));
    ++chosen;
  }
  if (!parser.raw.family_file.empty()) {
    spec.kind = "file";
    spec.path = parser.raw.family_file;
    ++chosen;
  }
  if (chosen != 1) throw DomainError("choose exactly one family source (--bch, --rademacher, --random, --search, --family)");
  if (spec.m < 0 || spec.k < 0 || spec.n < 0 || spec.t < 0) throw DomainError("family parameters must be nonnegative");
  return spec;
}

std::vector<int> parse_n_list(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      const int n = std::stoi(item, &used);
      if (used != item.size() || n < 1) throw std::invalid_argument(item);
      out.push_back(n);
    } catch (const std::logic_error&) {
      throw DomainError("--n: '" + item + "' is not a positive integer");
    }
  }
  return out;
}

RunConfig finish(Parser& parser) {
  RunConfig config = parser.config;
  config.format = parser.raw.format == "csv" ? Format::csv : Format::json;
  config.p = parser.raw.p;
  if (*parser.construct) {
    config.command = Command::construct;
    config.family = family_spec(parser, parser.construct);
    if (config.family.kind == "file") throw DomainError("construct needs a generator flag");
  } else if (*parser.lambda) {
    config.command = Command::lambda;
    config.family = family_spec(parser, parser.lambda);
  } else if (*parser.lemma && *parser.verify) {
    config.command = Command::lemma_verify;
  } else if ((*parser.lemma && *parser.lemma_optimality) || *parser.optimality) {
    config.command = Command::optimality;
  } else if (*parser.separate) {
    config.command = Command::separate;
    config.n_list = parse_n_list(parser.raw.n_list);
    CoverageStrategy::parse(config.strategy);
  }

  // module preconditions checked before any computation
  const auto& f = config.family;
  if (config.command == Command::construct || config.command == Command::lambda) {
    if (f.kind == "bch" && f.k * f.m > config.max_bits) throw CapacityError("bch family needs k*m <= --max-bits");
    if (f.kind != "bch" && f.kind != "file" && f.n > config.max_bits) throw CapacityError("n exceeds --max-bits");
  }
  if (config.command == Command::separate) {
    if (!config.p) throw DomainError("separate needs --p");
    for (int n : config.n_list) {
      if (n > config.max_bits) throw CapacityError("--n entry exceeds --max-bits");
    }
  }
  if (config.command == Command::optimality && config.q != std::floor(config.q)) throw DomainError("--q must be an integer");
  return config;
}

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open " + path);
  try {
    json j = json::parse(in);
    if (j.is_object() && j.contains("schema") && j.contains("report")) return open_envelope(j);
    return j;
  } catch (const json::parse_error& e) {
    throw DomainError(path + ": " + e.what());
  }
}

CharacterFamily build_family(const FamilySpec& f, std::uint64_t seed) {
  if (f.kind == "bch") return bch_family(FieldSpec::standard(f.m), f.k);
  if (f.kind == "rademacher") return rademacher_family(f.n);
  if (f.kind == "random") return random_family(f.n, f.count, seed);
  if (f.kind == "search") return search_family(f.n, f.count, f.t);
  CharacterFamily family = read_json(f.path).get<CharacterFamily>();
  validate_family(family);
  return family;
}

SignSearchOptions sign_options(const RunConfig& config) {
  SignSearchOptions sign;
  sign.seed = config.seed;
  sign.restarts = config.restarts;
  sign.exact_threshold = config.exact_threshold;
  return sign;
}

struct Emission {
  json payload;
  std::string command;
  std::ostringstream csv;
  int status = kExitOk;
};

void emit(const RunConfig& config, Emission& e, std::ostream& out) {
  std::string text;
  if (config.format == Format::json) {
    text = envelope(e.command, e.payload).dump(2) + "\n";
  } else {
    text = e.csv.str();
  }
  if (config.output_path.empty()) {
    out << text;
    return;
  }
  std::ofstream file(config.output_path, std::ios::binary);
  if (!file) throw DomainError("cannot write " + config.output_path);
  file << text;
}

}  // namespace

RunConfig parse(int argc, const char* const* argv) {
  Parser parser;
  try {
    parser.app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    throw DomainError(e.what());
  }
  return finish(parser);
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  set_workers(config.workers);
  Emission e;
  switch (config.command) {
    case Command::construct: {
      const CharacterFamily family = build_family(config.family, config.seed);
      if (family.n > config.max_bits) throw CapacityError("family exceeds --max-bits");
      e.command = "construct";
      e.payload = family;
      write_csv(e.csv, family);
      if (config.verify_order) {
        const IndependenceResult check = verify_independence(family, *config.verify_order);
        if (!check.pass) {
          e.status = kExitCounterexample;
          err << "l1lab: independence of order " << *config.verify_order << " fails; witness";
          for (auto m : check.witness) err << ' ' << m;
          err << '\n';
        }
      }
      break;
    }
    case Command::lambda: {
      const CharacterFamily family = build_family(config.family, config.seed);
      if (family.n > config.max_bits) throw CapacityError("family exceeds --max-bits");
      const LambdaReport report = lambda_constant(family, config.q, config.samples, config.seed);
      e.command = "lambda";
      e.payload = report;
      write_csv(e.csv, report);
      break;
    }
    case Command::lemma_verify: {
      std::optional<L1Operator> op;
      std::vector<HypercubeFunction> vectors;
      for (const auto& path : config.inputs) {
        const json j = read_json(path);
        if (j.is_object() && j.contains("matrix")) {
          if (op) throw DomainError(path + ": a second operator");
          op = operator_from_json(j);
        } else if (j.is_object() && j.contains("masks")) {
          const auto family = j.get<CharacterFamily>();
          validate_family(family);
          for (auto mask : family.masks) vectors.push_back(character(family.n, {mask}));
        } else if (j.is_object() && j.contains("values")) {
          vectors.push_back(j.get<HypercubeFunction>());
        } else if (j.is_array()) {
          for (const auto& item : j) vectors.push_back(item.get<HypercubeFunction>());
        } else {
          throw DomainError(path + ": expected an operator, a family or functions");
        }
      }
      if (!op) throw DomainError("lemma verify needs an operator file (key \"matrix\")");
      if (vectors.empty()) throw DomainError("lemma verify needs vectors (a family or functions)");
      for (const auto& v : vectors) {
        if (v.bits() > config.max_bits) throw CapacityError("vectors exceed --max-bits");
      }
      LemmaOptions options;
      options.sign = sign_options(config);
      options.supplied_p = config.p;
      const LemmaCertificate cert = verify_lemma(*op, vectors, config.q, options);
      e.command = "lemma verify";
      e.payload = cert;
      write_csv(e.csv, cert);
      if (!cert.consistent()) e.status = kExitCounterexample;
      break;
    }
    case Command::optimality: {
      if (!config.p) throw DomainError("optimality needs --p");
      const OptimalityReport report =
          optimality_instance(static_cast<int>(config.q), config.N, *config.p, sign_options(config));
      e.command = "lemma optimality";
      e.payload = report;
      write_csv(e.csv, report);
      if (!report.lemma_holds) e.status = kExitCounterexample;
      break;
    }
    case Command::separate: {
      const double pd = *config.p;
      if (pd != std::floor(pd) || config.q != std::floor(config.q)) throw DomainError("--p and --q must be integers");
      CoverageStrategy strategy = CoverageStrategy::parse(config.strategy);
      if (strategy.kind == CoverageStrategy::Kind::random && config.strategy == "random") strategy.seed = config.seed;
      CoverageOptions options;
      options.sign = sign_options(config);
      const SeparationReport report = coverage_experiment(static_cast<int>(pd), static_cast<int>(config.q),
                                                          config.n_list, config.epsilon, strategy, options);
      e.command = "separate";
      e.payload = report;
      write_csv(e.csv, report);
      for (const auto& inst : report.instances) {
        const bool ok = inst.survivors.markov_holds && inst.survivor_bound_holds && inst.norm_dominates_bound &&
                        (!inst.covered || inst.survivors.reuse_holds);
        if (!ok) e.status = kExitCounterexample;
      }
      break;
    }
  }
  emit(config, e, out);
  return e.status;
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Parser parser;
  try {
    parser.app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << parser.app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << parser.app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "l1lab: error: " << e.what() << '\n';
    return kExitConfig;
  }
  try {
    const RunConfig config = finish(parser);
    return run(config, out, err);
  } catch (const CapacityError& e) {
    err << "l1lab: capacity: " << e.what() << '\n';
  } catch (const DomainError& e) {
    err << "l1lab: error: " << e.what() << '\n';
  } catch (const ConstructionError& e) {
    err << "l1lab: construction: " << e.what() << '\n';
  } catch (const std::exception& e) {
    err << "l1lab: error: " << e.what() << '\n';
  }
  return kExitConfig;
}

}  // namespace l1lab::cli
