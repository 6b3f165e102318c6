#include "cli.hpp"

#include "json_writer.hpp"

#include "equidist/certifier.hpp"
#include "equidist/diophantine.hpp"
#include "equidist/discrepancy.hpp"
#include "equidist/lemmalab.hpp"
#include "equidist/parallel.hpp"
#include "equidist/seqlab.hpp"
#include "equidist/weyl.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>

namespace equidist::cli {

namespace {

/// Raised for argument values that parse but do not validate.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::optional<unsigned> threads;
  std::uint64_t seed = 42;
  std::string output = "json";
  std::string out_path;

  std::string seq;
  std::string from = "1";
  std::string to;
  bool frac = false;

  std::string n;
  std::string method = "fast";
  std::size_t spot_check = 2000;

  std::int64_t h_max = 1;
  std::vector<std::int64_t> n_grid;

  std::string theta;
  std::string q_cap = "1000000";
  std::optional<double> epsilon;

  std::string start;
  std::string end;
  double constant_C = 10;
  bool stream = false;
  bool scan_only = false;
  std::string horizon;
  std::string max_points;
  std::size_t memory_points = std::size_t{1} << 24;

  std::string suite = "all";
  std::size_t trials = 10'000;
};

SequenceSpec parse_spec(const std::string& text) {
  try {
    return SequenceSpec::parse(text);
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string("--seq: ") + e.what());
  }
}

Index parse_index_arg(const std::string& name, const std::string& text) {
  try {
    return parse_index(text);
  } catch (const std::exception&) {
    throw UsageError(name + ": expected an integer, got '" + text + "'");
  }
}

void write_witness(JsonWriter& j, const std::optional<Witness>& w) {
  j.key("witness");
  if (!w) {
    j.null();
    return;
  }
  j.begin_object()
      .field("a", w->a)
      .field("b", w->b)
      .field("include_a", w->include_a)
      .field("include_b", w->include_b)
      .end_object();
}

void write_convergent(JsonWriter& j, const Convergent& c) {
  j.begin_object().field("p", c.p).field("q", c.q).key("q_next");
  if (c.q_next) {
    j.value(*c.q_next);
  } else {
    j.value(c.beyond_trust ? "beyond_trust" : "infinity");
  }
  j.field("err_bound", c.err_bound).field("abs_error", c.abs_error).field("terminal", c.terminal());
  j.field("beyond_trust", c.beyond_trust).end_object();
}

void write_check(JsonWriter& j, const LemmaCheck& c) {
  j.begin_object()
      .field("lemma_id", to_string(c.lemma_id))
      .field("lhs", c.lhs)
      .field("rhs", c.rhs)
      .field("margin", c.margin)
      .field("pass", c.pass)
      .field("instance_digest", c.instance_digest)
      .end_object();
}

void write_segment_fields(JsonWriter& j, const SegmentCertificate& s) {
  j.field("n", s.n).field("m", s.m).field("covered", s.covered).field("case", to_string(s.kind));
  j.field("p", s.p).field("q", s.q).key("q_next");
  if (s.q_next) {
    j.value(*s.q_next);
  } else {
    j.value("infinity");
  }
  j.field("alpha", s.alpha).key("h0");
  if (!s.h0) {
    j.null();
  } else if (s.h0->infinite()) {
    j.value("infinity");
  } else {
    j.value(*s.h0->h);
  }
  j.field("delta", s.delta).field("measured_D", s.measured_D).field("bound_ratio", s.bound_ratio);
  write_witness(j, s.witness);
  j.field("class_max_D", s.class_max_D).field("prefix_slack", s.prefix_slack);
  j.field("threshold_ratio", s.threshold_ratio).field("negated", s.negated);
  if (!s.fallback_reason.empty()) j.field("fallback_reason", s.fallback_reason);
  j.key("checks")
      .begin_object()
      .field("residue_system", s.checks.residue_system)
      .field("max_drift", s.checks.max_drift)
      .field("drift", s.checks.drift)
      .field("alpha", s.checks.alpha)
      .field("h_monotone", s.checks.h_monotone)
      .field("p1", s.checks.p1)
      .field("coverage", s.checks.coverage)
      .field("interleave", s.checks.interleave)
      .end_object();
}

void write_run_summary(JsonWriter& j, const CertificateRun& run) {
  std::map<std::string, std::size_t> cases;
  double worst = 0;
  for (const auto& s : run.segments) {
    ++cases[to_string(s.kind)];
    worst = std::max(worst, s.bound_ratio);
  }
  j.field("segment_count", static_cast<std::uint64_t>(run.segments.size()));
  j.key("case_counts").begin_object();
  for (const auto& [name, count] : cases) j.field(name, static_cast<std::uint64_t>(count));
  j.end_object();
  j.field("max_bound_ratio", worst);
  j.field("aggregate_D", run.aggregate_D).field("eps_aggregate", run.eps_aggregate);
  j.key("aggregation");
  if (run.aggregation) {
    write_check(j, *run.aggregation);
  } else if (!run.aggregation_rejected.empty()) {
    j.begin_object().field("rejected", run.aggregation_rejected).end_object();
  } else {
    j.null();
  }
}

class Command {
 public:
  Command(const RunConfig& cfg, std::ostream& out, std::ostream& err) : cfg_(cfg), out_(out), err_(err) {}

  int generate() {
    const auto seq = make_sequence(parse_spec(cfg_.seq));
    const Index from = parse_index_arg("--from", cfg_.from);
    const Index to = parse_index_arg("--to", cfg_.to);
    if (from < 1 || from > to) throw UsageError("--from/--to: need 1 <= from <= to");
    std::vector<double> values;
    if (cfg_.frac) {
      values = generate_fractional(*seq, from, to).values();
    } else {
      values = equidist::generate(*seq, from, to).values();
    }
    if (csv()) {
      out_ << "n," << (cfg_.frac ? "frac" : "value") << '\n';
      for (std::size_t i = 0; i < values.size(); ++i) {
        out_ << to_string(from + static_cast<Index>(i)) << ',' << fmt(values[i]) << '\n';
      }
      return kExitOk;
    }
    JsonWriter j(out_);
    j.begin_object().field("seq", seq->name()).field("from", from).field("to", to);
    j.key(cfg_.frac ? "fractional_parts" : "values").begin_array();
    for (double v : values) j.value(v);
    j.end_array().end_object();
    return kExitOk;
  }

  int discrepancy() {
    const auto seq = make_sequence(parse_spec(cfg_.seq));
    const Index from = parse_index_arg("--from", cfg_.from);
    const Index count = parse_index_arg("--n", cfg_.n);
    if (from < 1 || count < 1) throw UsageError("--from and --n must be positive");
    const auto n = static_cast<std::size_t>(count);

    DiscrepancyReport report;
    std::optional<double> star;
    if (cfg_.method == "streamed") {
      StreamOptions so;
      so.memory_points = cfg_.memory_points;
      report = extreme_discrepancy_streamed(sequence_points(*seq, from, 1, n), so);
    } else {
      const UnitSequence u = generate_fractional(*seq, from, from + count - 1);
      if (cfg_.method == "oracle") {
        report = extreme_discrepancy_oracle(u);
      } else {
        report = extreme_discrepancy(u);
      }
      star = star_discrepancy(u);
    }

    // Oracle agreement on a prefix that the quadratic oracle can afford.
    struct Spot {
      std::size_t points;
      double fast;
      double oracle;
    };
    std::optional<Spot> spot;
    if (cfg_.spot_check > 0) {
      const std::size_t k = std::min({n, cfg_.spot_check, kOracleGuard});
      const UnitSequence u = generate_fractional(*seq, from, from + static_cast<Index>(k) - 1);
      spot = Spot{k, extreme_discrepancy(u).value, extreme_discrepancy_oracle(u).value};
    }
    const bool agree = !spot || std::fabs(spot->fast - spot->oracle) <= 1e-12;

    if (csv()) {
      out_ << "seq,from,N,method,value,witness_a,witness_b\n";
      out_ << seq->name() << ',' << to_string(from) << ',' << n << ',' << to_string(report.method) << ','
           << fmt(report.value) << ',' << fmt(report.witness ? report.witness->a : 0) << ','
           << fmt(report.witness ? report.witness->b : 0) << '\n';
    } else {
      JsonWriter j(out_);
      j.begin_object().field("seq", seq->name()).field("from", from).field("N", count);
      j.field("method", to_string(report.method)).field("value", report.value);
      write_witness(j, report.witness);
      j.field("star", star);
      j.key("spot_check");
      if (spot) {
        j.begin_object()
            .field("points", static_cast<std::uint64_t>(spot->points))
            .field("fast", spot->fast)
            .field("oracle", spot->oracle)
            .field("agree", agree)
            .end_object();
      } else {
        j.null();
      }
      j.end_object();
    }
    if (!agree) {
      err_ << "error: fast and oracle discrepancy disagree on the spot check\n";
      return kExitFailure;
    }
    return kExitOk;
  }

  int weyl() {
    const auto spec = parse_spec(cfg_.seq);
    if (cfg_.h_max < 1) throw UsageError("--hmax must be >= 1");
    for (std::size_t i = 0; i < cfg_.n_grid.size(); ++i) {
      if (cfg_.n_grid[i] < 1 || (i && cfg_.n_grid[i] <= cfg_.n_grid[i - 1])) {
        throw UsageError("--n-grid must be positive and strictly increasing");
      }
    }
    const auto rows = weyl_profile(spec, cfg_.h_max, cfg_.n_grid, threads());
    if (csv()) {
      write_weyl_csv(out_, rows);
      return kExitOk;
    }
    JsonWriter j(out_);
    j.begin_object().field("seq", spec.to_string()).key("rows").begin_array();
    for (const auto& r : rows) {
      j.begin_object()
          .field("h", r.h)
          .field("N", r.N)
          .field("re", r.sum.real())
          .field("im", r.sum.imag())
          .field("magnitude", r.magnitude)
          .end_object();
    }
    j.end_array().end_object();
    return kExitOk;
  }

  int convergents_cmd() {
    RealExpr theta;
    try {
      theta = RealExpr::parse(cfg_.theta);
    } catch (const std::invalid_argument& e) {
      throw UsageError(std::string("--theta: ") + e.what());
    }
    if (cfg_.epsilon) {
      if (!(*cfg_.epsilon > 0 && *cfg_.epsilon < 1)) throw UsageError("--eps must lie in (0, 1)");
      const Convergent c = select_convergent(theta, *cfg_.epsilon);
      if (csv()) {
        out_ << "p,q,q_next,err_bound\n" << to_string(c.p) << ',' << to_string(c.q) << ','
             << (c.q_next ? to_string(*c.q_next) : std::string("infinity")) << ',' << fmt(c.err_bound) << '\n';
        return kExitOk;
      }
      JsonWriter j(out_);
      j.begin_object().field("theta", theta.text()).field("epsilon", *cfg_.epsilon);
      j.field("ceiling", denominator_ceiling(*cfg_.epsilon)).key("convergent");
      write_convergent(j, c);
      j.end_object();
      return kExitOk;
    }
    const Index cap = parse_index_arg("--qcap", cfg_.q_cap);
    if (cap < 1) throw UsageError("--qcap must be >= 1");
    const auto list = convergents(theta, cap);
    if (csv()) {
      out_ << "p,q,q_next,err_bound\n";
      for (const auto& c : list) {
        out_ << to_string(c.p) << ',' << to_string(c.q) << ','
             << (c.q_next ? to_string(*c.q_next) : std::string("infinity")) << ',' << fmt(c.err_bound) << '\n';
      }
      return kExitOk;
    }
    JsonWriter j(out_);
    j.begin_array();
    for (const auto& c : list) write_convergent(j, c);
    j.end_array();
    return kExitOk;
  }

  int certify() {
    const auto spec = parse_spec(cfg_.seq);
    if (!cfg_.epsilon) throw UsageError("--eps is required");
    const double eps = *cfg_.epsilon;
    if (!(eps > 0 && eps < 0.1)) throw UsageError("--eps must lie in (0, 1/10)");
    const auto seq = make_sequence(spec);

    if (cfg_.scan_only) {
      const Index horizon = parse_index_arg("--horizon", cfg_.horizon.empty() ? cfg_.end : cfg_.horizon);
      const auto report = hypothesis_scan(*seq, eps, horizon);
      JsonWriter j(out_);
      j.begin_object().field("seq", seq->name()).field("epsilon", report.epsilon).field("n_epsilon", report.n_epsilon);
      j.field("horizon", report.horizon).field("negated", report.negated);
      j.field("samples", static_cast<std::uint64_t>(report.samples));
      j.field("violation_count", static_cast<std::uint64_t>(report.violation_count));
      j.key("violations").begin_array();
      for (const auto& v : report.violations) j.begin_object().field("n", v.n).field("reason", v.reason).end_object();
      j.end_array().end_object();
      return report.n_epsilon ? kExitOk : kExitFailure;
    }

    const Index start = parse_index_arg("--start", cfg_.start);
    const Index end = parse_index_arg("--end", cfg_.end);
    if (end < start) throw UsageError("--end must be >= --start");
    CertifyOptions options;
    options.constant_C = cfg_.constant_C;
    options.threads = threads();
    options.stream.memory_points = cfg_.memory_points;
    if (!cfg_.max_points.empty()) options.max_segment_points = parse_index_arg("--max-points", cfg_.max_points);

    SegmentCallback on_segment;
    if (cfg_.stream) {
      on_segment = [&](const SegmentCertificate& s) {
        JsonWriter j(out_, false);
        j.begin_object().field("type", "segment");
        write_segment_fields(j, s);
        j.end_object();
        j.newline();
        out_.flush();
      };
    }
    const CertificateRun run = certify_range(*seq, eps, start, end, options, on_segment);

    if (cfg_.stream) {
      JsonWriter j(out_, false);
      j.begin_object().field("type", "summary").field("epsilon", run.epsilon).field("n_epsilon", run.n_epsilon);
      j.field("constant_C", run.constant_C).field("n_start", run.n_start).field("n_end", run.n_end);
      write_run_summary(j, run);
      j.end_object();
      j.newline();
    } else if (csv()) {
      out_ << "n,m,covered,case,p,q,q_next,alpha,h0,delta,measured_D,bound_ratio,witness_a,witness_b\n";
      for (const auto& s : run.segments) {
        out_ << to_string(s.n) << ',' << to_string(s.m) << ',' << to_string(s.covered) << ',' << to_string(s.kind)
             << ',' << to_string(s.p) << ',' << to_string(s.q) << ','
             << (s.q_next ? to_string(*s.q_next) : std::string("infinity")) << ',' << fmt(s.alpha) << ',';
        if (s.h0) out_ << (s.h0->infinite() ? std::string("infinity") : to_string(*s.h0->h));
        out_ << ',' << (s.delta ? fmt(*s.delta) : std::string()) << ',' << fmt(s.measured_D) << ','
             << fmt(s.bound_ratio) << ',' << fmt(s.witness ? s.witness->a : 0) << ','
             << fmt(s.witness ? s.witness->b : 0) << '\n';
      }
    } else {
      JsonWriter j(out_);
      j.begin_object().field("epsilon", run.epsilon).field("n_epsilon", run.n_epsilon);
      j.field("constant_C", run.constant_C).field("n_start", run.n_start).field("n_end", run.n_end);
      j.key("segments").begin_array();
      for (const auto& s : run.segments) {
        j.begin_object();
        write_segment_fields(j, s);
        j.end_object();
      }
      j.end_array();
      write_run_summary(j, run);
      j.end_object();
    }
    if (run.aggregation && !run.aggregation->pass) {
      err_ << "error: block aggregation bound failed\n";
      return kExitFailure;
    }
    return kExitOk;
  }

  int lemmas() {
    std::vector<LemmaId> ids;
    if (cfg_.suite == "all") {
      ids = suite_lemmas();
    } else {
      std::stringstream ss(cfg_.suite);
      std::string item;
      while (std::getline(ss, item, ',')) {
        const auto id = parse_lemma_id(item);
        if (!id || *id == LemmaId::L4) throw UsageError("--suite: unknown lemma suite '" + item + "'");
        ids.push_back(*id);
      }
    }
    SuiteOptions options;
    options.seed = cfg_.seed;
    options.accepted_target = cfg_.trials;
    options.max_trials = std::max<std::size_t>(cfg_.trials * 20, 1000);
    options.constant = cfg_.constant_C;
    options.threads = threads();

    std::vector<SuiteReport> reports;
    for (LemmaId id : ids) reports.push_back(run_suite(id, options));

    bool ok = true;
    if (csv()) {
      out_ << "lemma_id,trials,accepted,rejected,failed,worst_margin,max_ratio,seed\n";
    }
    JsonWriter j(out_);
    if (!csv()) j.begin_array();
    for (const auto& r : reports) {
      ok = ok && r.failed == 0 && r.accepted >= cfg_.trials;
      if (csv()) {
        out_ << to_string(r.lemma_id) << ',' << r.trials << ',' << r.accepted << ',' << r.rejected << ','
             << r.failed << ',' << fmt(r.worst_margin) << ',' << (r.max_ratio ? fmt(*r.max_ratio) : std::string())
             << ',' << r.seed << '\n';
        continue;
      }
      j.begin_object()
          .field("lemma_id", to_string(r.lemma_id))
          .field("trials", static_cast<std::uint64_t>(r.trials))
          .field("accepted", static_cast<std::uint64_t>(r.accepted))
          .field("rejected", static_cast<std::uint64_t>(r.rejected))
          .field("failed", static_cast<std::uint64_t>(r.failed))
          .field("worst_margin", r.worst_margin);
      if (r.max_ratio) j.field("max_ratio", *r.max_ratio);
      j.field("seed", r.seed);
      if (!r.first_failure.empty()) j.field("first_failure", r.first_failure);
      j.end_object();
    }
    if (!csv()) j.end_array();
    if (!ok) {
      err_ << "error: lemma suite reported failures or too few accepted instances\n";
      return kExitFailure;
    }
    return kExitOk;
  }

 private:
  bool csv() const { return cfg_.output == "csv"; }
  unsigned threads() const { return resolve_threads(cfg_.threads); }

  static std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
  }

  const RunConfig& cfg_;
  std::ostream& out_;
  std::ostream& err_;
};

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Discrepancy, Weyl sums, convergents and segment certificates for sequences modulo one", "equidist"};
  app.require_subcommand(1, 1);
  app.fallthrough();
  app.add_option("--threads", cfg.threads, "Worker threads (default: $EQUIDIST_THREADS, else 1)")
      ->check(CLI::PositiveNumber);
  app.add_option("--seed", cfg.seed, "Seed for all randomness");
  app.add_option("--output", cfg.output, "Output format")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--out", cfg.out_path, "Write results to this file instead of stdout");

  auto* gen = app.add_subcommand("generate", "Evaluate a sequence over an index range");
  gen->add_option("--seq", cfg.seq, "Sequence spec (pow:a=1.5, nlog, log, linear:theta=.., quad:.., file:..)")->required();
  gen->add_option("--from", cfg.from, "First index");
  gen->add_option("--to", cfg.to, "Last index")->required();
  gen->add_flag("--frac", cfg.frac, "Emit fractional parts");

  auto* disc = app.add_subcommand("discrepancy", "Extreme discrepancy of x_from..x_{from+N-1} modulo one");
  disc->add_option("--seq", cfg.seq, "Sequence spec")->required();
  disc->add_option("--n", cfg.n, "Number of points N")->required();
  disc->add_option("--from", cfg.from, "First index");
  disc->add_option("--method", cfg.method, "fast | oracle | streamed")
      ->check(CLI::IsMember({"fast", "oracle", "streamed"}));
  disc->add_option("--spot-check", cfg.spot_check, "Oracle comparison on this many leading points (0 disables)");
  disc->add_option("--memory-points", cfg.memory_points, "Points held in memory by the streamed method")
      ->check(CLI::PositiveNumber);

  auto* wey = app.add_subcommand("weyl", "Weyl sums S_N(h) over a grid of N");
  wey->add_option("--seq", cfg.seq, "Sequence spec")->required();
  wey->add_option("--hmax", cfg.h_max, "Largest |h|");
  wey->add_option("--n-grid", cfg.n_grid, "Increasing list of N")->delimiter(',')->required();

  auto* conv = app.add_subcommand("convergents", "Continued-fraction convergents of theta");
  conv->add_option("--theta", cfg.theta, "Decimal, p/q, sqrtK, golden, pi or e")->required();
  conv->add_option("--qcap", cfg.q_cap, "Largest denominator");
  conv->add_option("--eps", cfg.epsilon, "Select the convergent with q <= eps^-4 < q'");

  auto* cert = app.add_subcommand("certify", "Segment certificates over [start, end)");
  cert->add_option("--seq", cfg.seq, "Sequence spec")->required();
  cert->add_option("--eps", cfg.epsilon, "Epsilon in (0, 1/10)")->required();
  cert->add_option("--start", cfg.start, "First n of the chain");
  cert->add_option("--end", cfg.end, "Stop once the chain reaches this n");
  cert->add_option("--C", cfg.constant_C, "Acceptance multiplier for measured_D / eps");
  cert->add_flag("--stream", cfg.stream, "Emit one JSON line per segment, then a summary line");
  cert->add_flag("--scan-only", cfg.scan_only, "Only run the hypothesis scan up to --horizon (or --end)");
  cert->add_option("--horizon", cfg.horizon, "Scan horizon for --scan-only");
  cert->add_option("--max-points", cfg.max_points, "Refuse segments larger than this");
  cert->add_option("--memory-points", cfg.memory_points, "Points held in memory per discrepancy pass")
      ->check(CLI::PositiveNumber);

  auto* lem = app.add_subcommand("lemmas", "Randomized lemma suites");
  lem->add_option("--suite", cfg.suite, "all, or a comma list of L3,L5,L5_remark,L6,L7,L1,L2,L8,Chebyshev");
  lem->add_option("--trials", cfg.trials, "Accepted instances per suite")->check(CLI::PositiveNumber);
  lem->add_option("--C", cfg.constant_C, "Ratio ceiling for the L1 suite");

  std::vector<std::string> owned{"equidist"};
  owned.insert(owned.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : owned) argv.push_back(s.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }
  if (cert->parsed() && !cfg.scan_only && (cfg.start.empty() || cfg.end.empty())) {
    err << "error: certify needs --start and --end\n";
    return kExitUsage;
  }
  if (cert->parsed() && cfg.scan_only && cfg.horizon.empty() && cfg.end.empty()) {
    err << "error: --scan-only needs --horizon or --end\n";
    return kExitUsage;
  }
  if (cert->parsed() && cfg.stream && cfg.output == "csv") {
    err << "error: --stream emits JSON Lines and cannot be combined with --output csv\n";
    return kExitUsage;
  }

  std::ofstream file;
  std::ostream* sink = &out;
  if (!cfg.out_path.empty()) {
    file.open(cfg.out_path);
    if (!file) {
      err << "error: cannot open '" << cfg.out_path << "' for writing\n";
      return kExitUsage;
    }
    sink = &file;
  }

  Command cmd(cfg, *sink, err);
  try {
    if (gen->parsed()) return cmd.generate();
    if (disc->parsed()) return cmd.discrepancy();
    if (wey->parsed()) return cmd.weyl();
    if (conv->parsed()) return cmd.convergents_cmd();
    if (cert->parsed()) return cmd.certify();
    if (lem->parsed()) return cmd.lemmas();
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const CertificationError& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace equidist::cli
