#include "l1lab/json_io.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <ostream>

#include "l1lab/errors.hpp"

namespace l1lab {
namespace {

json real(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

double get_real(const json& j) {
  if (j.is_string()) {
    const auto& s = j.get_ref<const std::string&>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    throw DomainError("expected a number, got \"" + s + "\"");
  }
  return j.get<double>();
}

json reals(std::span<const double> v) {
  json a = json::array();
  for (double x : v) a.push_back(real(x));
  return a;
}

std::vector<double> get_reals(const json& j) {
  std::vector<double> out;
  out.reserve(j.size());
  for (const auto& x : j) out.push_back(get_real(x));
  return out;
}

std::string fmt(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

const char* verdict_name(Verdict v) { return v == Verdict::holds ? "holds" : "degenerate"; }

Verdict parse_verdict(const std::string& s) {
  if (s == "holds") return Verdict::holds;
  if (s == "degenerate") return Verdict::degenerate;
  throw DomainError("unknown verdict " + s);
}

void csv_header(std::ostream& out) { out << "# schema=" << kSchemaVersion << '\n'; }

}  // namespace

void to_json(json& j, const Provenance& v) { j = v.to_string(); }
void from_json(const json& j, Provenance& v) { v = Provenance::parse(j.get<std::string>()); }

void to_json(json& j, const CharacterFamily& v) {
  j = json{{"n", v.n}, {"provenance", v.provenance}, {"masks", v.masks}};
  j["claimed_independence"] = v.claimed_independence ? json(*v.claimed_independence) : json(nullptr);
}
void from_json(const json& j, CharacterFamily& v) {
  v.n = j.at("n").get<int>();
  v.masks = j.at("masks").get<std::vector<std::uint32_t>>();
  v.provenance = j.contains("provenance") ? j.at("provenance").get<Provenance>() : Provenance{};
  v.claimed_independence.reset();
  if (j.contains("claimed_independence") && !j.at("claimed_independence").is_null()) {
    v.claimed_independence = j.at("claimed_independence").get<int>();
  }
}

void to_json(json& j, const IndependenceResult& v) { j = json{{"pass", v.pass}, {"witness", v.witness}}; }
void from_json(const json& j, IndependenceResult& v) {
  v.pass = j.at("pass").get<bool>();
  v.witness = j.at("witness").get<std::vector<std::uint32_t>>();
}

void to_json(json& j, const HypercubeFunction& v) { j = json{{"n", v.bits()}, {"values", reals(v.values())}}; }
void from_json(const json& j, HypercubeFunction& v) {
  v = HypercubeFunction(j.at("n").get<int>(), get_reals(j.at("values")));
}

void to_json(json& j, const LambdaReport& v) {
  j = json{{"q", real(v.q)}, {"lower", real(v.lower)}, {"upper", v.upper ? real(*v.upper) : json(nullptr)},
           {"samples", v.samples}, {"seed", v.seed}};
}
void from_json(const json& j, LambdaReport& v) {
  v.q = get_real(j.at("q"));
  v.lower = get_real(j.at("lower"));
  v.upper.reset();
  if (!j.at("upper").is_null()) v.upper = get_real(j.at("upper"));
  v.samples = j.at("samples").get<std::size_t>();
  v.seed = j.at("seed").get<std::uint64_t>();
}

void to_json(json& j, const SignSearchResult& v) {
  j = json{{"value", real(v.value)}, {"signs", v.signs}, {"exact", v.exact}, {"evaluations", v.evaluations}};
}
void from_json(const json& j, SignSearchResult& v) {
  v.value = get_real(j.at("value"));
  v.signs = j.at("signs").get<std::vector<int>>();
  v.exact = j.at("exact").get<bool>();
  v.evaluations = j.at("evaluations").get<std::uint64_t>();
}

void to_json(json& j, const LemmaCertificate& v) {
  j = json{{"N", v.N},
           {"p", real(v.p)},
           {"q", real(v.q)},
           {"C", real(v.C)},
           {"epsilon", real(v.epsilon)},
           {"bound", real(v.bound)},
           {"measured_norm", real(v.measured_norm)},
           {"chain", reals(v.chain)},
           {"verdict", verdict_name(v.verdict)},
           {"chain_monotone", v.chain_monotone},
           {"bound_satisfied", v.bound_satisfied},
           {"exact_sign_search", v.exact_sign_search}};
}
void from_json(const json& j, LemmaCertificate& v) {
  v.N = j.at("N").get<std::size_t>();
  v.p = get_real(j.at("p"));
  v.q = get_real(j.at("q"));
  v.C = get_real(j.at("C"));
  v.epsilon = get_real(j.at("epsilon"));
  v.bound = get_real(j.at("bound"));
  v.measured_norm = get_real(j.at("measured_norm"));
  const auto chain = get_reals(j.at("chain"));
  if (chain.size() != v.chain.size()) throw DomainError("chain must have 7 entries");
  std::copy(chain.begin(), chain.end(), v.chain.begin());
  v.verdict = parse_verdict(j.at("verdict").get<std::string>());
  v.chain_monotone = j.at("chain_monotone").get<bool>();
  v.bound_satisfied = j.at("bound_satisfied").get<bool>();
  v.exact_sign_search = j.at("exact_sign_search").get<bool>();
}

void to_json(json& j, const OptimalityReport& v) {
  j = json{{"q", v.q},
           {"p", real(v.p)},
           {"N", v.N},
           {"points", v.points},
           {"characters", v.characters},
           {"fiber", v.fiber},
           {"family", v.family},
           {"family_sign_max", real(v.family_sign_max)},
           {"measured_C", real(v.measured_C)},
           {"bound", real(v.bound)},
           {"measured_norm", real(v.measured_norm)},
           {"ratio", real(v.ratio)},
           {"b_q", real(v.b_q)},
           {"ratio_within_b_q", v.ratio_within_b_q},
           {"lemma_holds", v.lemma_holds}};
}
void from_json(const json& j, OptimalityReport& v) {
  v.q = j.at("q").get<int>();
  v.p = get_real(j.at("p"));
  v.N = j.at("N").get<std::size_t>();
  v.points = j.at("points").get<std::size_t>();
  v.characters = j.at("characters").get<std::size_t>();
  v.fiber = j.at("fiber").get<std::size_t>();
  v.family = j.at("family").get<CharacterFamily>();
  v.family_sign_max = get_real(j.at("family_sign_max"));
  v.measured_C = get_real(j.at("measured_C"));
  v.bound = get_real(j.at("bound"));
  v.measured_norm = get_real(j.at("measured_norm"));
  v.ratio = get_real(j.at("ratio"));
  v.b_q = get_real(j.at("b_q"));
  v.ratio_within_b_q = j.at("ratio_within_b_q").get<bool>();
  v.lemma_holds = j.at("lemma_holds").get<bool>();
}

void to_json(json& j, const SurvivorAnalysis& v) {
  j = json{{"norm_T", real(v.norm_T)},
           {"f_norm", real(v.f_norm)},
           {"complement_measure", real(v.complement_measure)},
           {"markov_holds", v.markov_holds},
           {"survivors", v.survivors},
           {"pairing_counts", v.pairing_counts},
           {"reuse_bound", real(v.reuse_bound)},
           {"reuse_holds", v.reuse_holds}};
}
void from_json(const json& j, SurvivorAnalysis& v) {
  v.norm_T = get_real(j.at("norm_T"));
  v.f_norm = get_real(j.at("f_norm"));
  v.complement_measure = get_real(j.at("complement_measure"));
  v.markov_holds = j.at("markov_holds").get<bool>();
  v.survivors = j.at("survivors").get<std::size_t>();
  v.pairing_counts = j.at("pairing_counts").get<std::vector<std::size_t>>();
  v.reuse_bound = get_real(j.at("reuse_bound"));
  v.reuse_holds = j.at("reuse_holds").get<bool>();
}

void to_json(json& j, const CoverageStrategy& v) { j = v.to_string(); }
void from_json(const json& j, CoverageStrategy& v) { v = CoverageStrategy::parse(j.get<std::string>()); }

void to_json(json& j, const CoverageInstance& v) {
  j = json{{"n", v.n},
           {"N_target", v.N_target},
           {"targets", v.targets},
           {"blocks", v.blocks},
           {"vq_size", v.vq_size},
           {"distances", reals(v.distances)},
           {"distance_gaps", reals(v.distance_gaps)},
           {"dist_set", real(v.dist_set)},
           {"covered", v.covered},
           {"measured_norm", real(v.measured_norm)},
           {"norm_exact", v.norm_exact},
           {"lemma_C", real(v.lemma_C)},
           {"lemma_p", real(v.lemma_p)},
           {"lemma_bound", real(v.lemma_bound)},
           {"norm_dominates_bound", v.norm_dominates_bound},
           {"survivors", v.survivors},
           {"survivor_bound", real(v.survivor_bound)},
           {"survivor_bound_holds", v.survivor_bound_holds}};
}
void from_json(const json& j, CoverageInstance& v) {
  v.n = j.at("n").get<int>();
  v.N_target = j.at("N_target").get<std::size_t>();
  v.targets = j.at("targets").get<std::size_t>();
  v.blocks = j.at("blocks").get<std::size_t>();
  v.vq_size = j.at("vq_size").get<std::size_t>();
  v.distances = get_reals(j.at("distances"));
  v.distance_gaps = get_reals(j.at("distance_gaps"));
  v.dist_set = get_real(j.at("dist_set"));
  v.covered = j.at("covered").get<bool>();
  v.measured_norm = get_real(j.at("measured_norm"));
  v.norm_exact = j.at("norm_exact").get<bool>();
  v.lemma_C = get_real(j.at("lemma_C"));
  v.lemma_p = get_real(j.at("lemma_p"));
  v.lemma_bound = get_real(j.at("lemma_bound"));
  v.norm_dominates_bound = j.at("norm_dominates_bound").get<bool>();
  v.survivors = j.at("survivors").get<SurvivorAnalysis>();
  v.survivor_bound = get_real(j.at("survivor_bound"));
  v.survivor_bound_holds = j.at("survivor_bound_holds").get<bool>();
}

void to_json(json& j, const ExponentFit& v) {
  j = json{{"slope", real(v.slope)}, {"intercept", real(v.intercept)}, {"residual", real(v.residual)}};
}
void from_json(const json& j, ExponentFit& v) {
  v.slope = get_real(j.at("slope"));
  v.intercept = get_real(j.at("intercept"));
  v.residual = get_real(j.at("residual"));
}

void to_json(json& j, const SeparationReport& v) {
  j = json{{"p", v.p},
           {"q", v.q},
           {"epsilon", real(v.epsilon)},
           {"strategy", v.strategy},
           {"instances", v.instances},
           {"exponent_fit", v.exponent_fit ? json(*v.exponent_fit) : json(nullptr)}};
}
void from_json(const json& j, SeparationReport& v) {
  v.p = j.at("p").get<int>();
  v.q = j.at("q").get<int>();
  v.epsilon = get_real(j.at("epsilon"));
  v.strategy = j.at("strategy").get<CoverageStrategy>();
  v.instances = j.at("instances").get<std::vector<CoverageInstance>>();
  v.exponent_fit.reset();
  if (!j.at("exponent_fit").is_null()) v.exponent_fit = j.at("exponent_fit").get<ExponentFit>();
}

json measure_to_json(const AtomicMeasureSpace& space) {
  if (const auto bits = space.cube_bits()) return json{{"kind", "hypercube"}, {"n", *bits}};
  if (space.kind() == AtomicMeasureSpace::Kind::counting) return json{{"kind", "counting"}, {"atoms", space.atoms()}};
  return json{{"kind", "probability"}, {"weights", reals(space.weights())}};
}

AtomicMeasureSpace measure_from_json(const json& j) {
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "hypercube") return AtomicMeasureSpace::hypercube(j.at("n").get<int>());
  if (kind == "counting") return AtomicMeasureSpace::counting(j.at("atoms").get<std::size_t>());
  if (kind == "uniform") return AtomicMeasureSpace::uniform(j.at("atoms").get<std::size_t>());
  if (kind == "probability") return AtomicMeasureSpace::probability(get_reals(j.at("weights")));
  throw DomainError("unknown measure space kind " + kind);
}

json operator_to_json(const L1Operator& op) {
  json rows = json::array();
  for (std::size_t r = 0; r < op.rows(); ++r) rows.push_back(reals(op.matrix().subspan(r * op.cols(), op.cols())));
  return json{{"source", measure_to_json(op.source())}, {"target", measure_to_json(op.target())}, {"matrix", rows}};
}

L1Operator operator_from_json(const json& j) {
  const json& rows = j.at("matrix");
  if (!rows.is_array() || rows.empty()) throw DomainError("matrix must be a nonempty array of rows");
  const std::size_t cols = rows.front().size();
  std::vector<double> m;
  m.reserve(rows.size() * cols);
  for (const auto& row : rows) {
    if (row.size() != cols) throw DomainError("matrix rows differ in length");
    for (const auto& x : row) m.push_back(get_real(x));
  }
  auto cube_of = [](std::size_t atoms) {
    if (atoms == 0 || (atoms & (atoms - 1)) != 0) throw DomainError("matrix side is not a power of two");
    int bits = 0;
    while ((std::size_t{1} << bits) < atoms) ++bits;
    return AtomicMeasureSpace::hypercube(bits);
  };
  AtomicMeasureSpace source = j.contains("source") ? measure_from_json(j.at("source")) : cube_of(cols);
  AtomicMeasureSpace target = j.contains("target") ? measure_from_json(j.at("target")) : cube_of(rows.size());
  return L1Operator(std::move(source), std::move(target), std::move(m));
}

json envelope(const std::string& command, json payload) {
  return json{{"schema", kSchemaVersion}, {"command", command}, {"report", std::move(payload)}};
}

const json& open_envelope(const json& j) {
  if (!j.contains("schema") || j.at("schema") != kSchemaVersion) {
    throw DomainError(std::string("report schema is not ") + kSchemaVersion);
  }
  return j.at("report");
}

void write_csv(std::ostream& out, const CharacterFamily& v) {
  csv_header(out);
  out << "index,mask,n,provenance\n";
  for (std::size_t i = 0; i < v.masks.size(); ++i) {
    out << i << ',' << v.masks[i] << ',' << v.n << ",\"" << v.provenance.to_string() << "\"\n";
  }
}

void write_csv(std::ostream& out, const LambdaReport& v) {
  csv_header(out);
  out << "q,lower,upper,samples,seed\n";
  out << fmt(v.q) << ',' << fmt(v.lower) << ',' << (v.upper ? fmt(*v.upper) : "") << ',' << v.samples << ','
      << v.seed << '\n';
}

void write_csv(std::ostream& out, const LemmaCertificate& v) {
  csv_header(out);
  out << "N,p,q,C,epsilon,bound,measured_norm,chain0,chain1,chain2,chain3,chain4,chain5,chain6,verdict,"
         "chain_monotone,bound_satisfied,exact_sign_search\n";
  out << v.N << ',' << fmt(v.p) << ',' << fmt(v.q) << ',' << fmt(v.C) << ',' << fmt(v.epsilon) << ','
      << fmt(v.bound) << ',' << fmt(v.measured_norm);
  for (double c : v.chain) out << ',' << fmt(c);
  out << ',' << verdict_name(v.verdict) << ',' << v.chain_monotone << ',' << v.bound_satisfied << ','
      << v.exact_sign_search << '\n';
}

void write_csv(std::ostream& out, const OptimalityReport& v) {
  csv_header(out);
  out << "q,p,N,points,characters,fiber,family,family_sign_max,measured_C,bound,measured_norm,ratio,b_q,"
         "ratio_within_b_q,lemma_holds\n";
  out << v.q << ',' << fmt(v.p) << ',' << v.N << ',' << v.points << ',' << v.characters << ',' << v.fiber << ','
      << "\"" << v.family.provenance.to_string() << "\"," << fmt(v.family_sign_max) << ',' << fmt(v.measured_C) << ','
      << fmt(v.bound) << ',' << fmt(v.measured_norm) << ',' << fmt(v.ratio) << ',' << fmt(v.b_q) << ','
      << v.ratio_within_b_q << ',' << v.lemma_holds << '\n';
}

void write_csv(std::ostream& out, const SeparationReport& v) {
  csv_header(out);
  out << "p,q,epsilon,strategy,n,N_target,target_index,distance,distance_gap,dist_set,covered,measured_norm,"
         "norm_exact,lemma_bound,survivors,survivor_bound,complement_measure,markov_holds,reuse_bound,"
         "reuse_holds,pairing_count\n";
  for (const auto& inst : v.instances) {
    for (std::size_t i = 0; i < inst.distances.size(); ++i) {
      const std::size_t pairing = i < inst.survivors.pairing_counts.size() ? inst.survivors.pairing_counts[i] : 0;
      out << v.p << ',' << v.q << ',' << fmt(v.epsilon) << ',' << v.strategy.to_string() << ',' << inst.n << ','
          << inst.N_target << ',' << i << ',' << fmt(inst.distances[i]) << ',' << fmt(inst.distance_gaps[i]) << ','
          << fmt(inst.dist_set) << ',' << inst.covered << ',' << fmt(inst.measured_norm) << ',' << inst.norm_exact
          << ',' << fmt(inst.lemma_bound) << ',' << inst.survivors.survivors << ',' << fmt(inst.survivor_bound)
          << ',' << fmt(inst.survivors.complement_measure) << ',' << inst.survivors.markov_holds << ','
          << fmt(inst.survivors.reuse_bound) << ',' << inst.survivors.reuse_holds << ',' << pairing << '\n';
    }
  }
}

}  // namespace l1lab
