#include "roughmetrics/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "roughmetrics/constructions.hpp"
#include "roughmetrics/embeddings.hpp"
#include "roughmetrics/error.hpp"
#include "roughmetrics/io.hpp"
#include "roughmetrics/ordered_set.hpp"
#include "roughmetrics/sra.hpp"
#include "roughmetrics/subset_search.hpp"
#include "roughmetrics/witness.hpp"

namespace roughmetrics::cli {

namespace {

struct Common {
  std::string input;
  std::string out_path;
  std::string format = "json";
  double tolerance = 1e-9;
};

struct Params {
  std::optional<double> alpha;
  std::optional<double> theta;
  std::optional<double> lambda;
  std::optional<double> delta;
  std::optional<int> k;
  std::optional<int> m;
  std::optional<double> turning;
  std::optional<double> ramsey_c;
  std::uint64_t budget = 100'000'000;
  int max_m = 24;
  bool alpha_required = false;
  bool lp = false;
  bool table = false;
  std::string trace_path;
  std::string family;
  std::vector<std::string> params;
  std::string params_json;
  std::vector<double> radii;
  std::vector<Index> angles;
  Index base = 0;
  bool tree = false;
  std::vector<double> t;
  std::string rule = "geometric";
  int count = 0;
  int M = 1;
  int samples = 0;
};

/// Output sink honouring --out.
class Sink {
public:
  Sink(const Common& c, std::ostream& out) : out_(out) {
    if (!c.out_path.empty()) {
      file_.open(c.out_path);
      if (!file_)
        throw ParseError("cannot write " + c.out_path);
    }
  }
  std::ostream& stream() { return file_.is_open() ? static_cast<std::ostream&>(file_) : out_; }
  void json_report(const json& j) { stream() << dump(j) << '\n'; }

private:
  std::ostream& out_;
  std::ofstream file_;
};

json triple_json(const Triple& t) {
  if (t.i < 0)
    return nullptr;
  return json::array({t.i, t.j, t.k});
}

json flagged_json(const FlaggedValue& v) { return json{{"value", v.value}, {"limit", v.limit}}; }

int thread_count() {
  int n = static_cast<int>(std::max(1U, std::thread::hardware_concurrency()));
  if (const char* env = std::getenv("ROUGHMETRICS_THREADS")) {
    try {
      n = std::min(n, std::max(1, std::stoi(env)));
    } catch (const std::exception&) {
      throw ParseError("ROUGHMETRICS_THREADS must be an integer");
    }
  }
  return n;
}

FiniteMetricSpace load_checked(const Common& c) {
  FiniteMetricSpace s = load_space(c.input);
  require_metric(s, c.tolerance);
  return s;
}

OrderedSet load_checked_order(const Common& c) {
  OrderedSet s = load_ordered_set(c.input);
  require_metric(s.space(), c.tolerance);
  return s;
}

template <typename T>
T need(const std::optional<T>& v, const char* flag) {
  if (!v)
    throw ParseError(std::string("missing required option ") + flag);
  return *v;
}

json labels_of(const FiniteMetricSpace& s, const std::vector<Index>& idx) {
  json j = json::array();
  for (Index i : idx)
    j.push_back(s.labels()[static_cast<std::size_t>(i)]);
  return j;
}

int do_validate(const Common& c, std::ostream& out) {
  const FiniteMetricSpace s = load_space(c.input);
  const ValidationReport r = validate(s, c.tolerance);
  json j{{"name", s.name()}, {"size", s.size()}, {"passed", r.passed}};
  json v = json::array();
  for (const auto& x : r.violations)
    v.push_back({{"kind", to_string(x.kind)},
                 {"i", x.where.i},
                 {"j", x.where.j},
                 {"k", x.where.k},
                 {"residual", x.residual}});
  j["violations"] = std::move(v);
  Sink(c, out).json_report(j);
  return r.passed ? ok : metric_violation;
}

int do_analyze(const Common& c, const Params& p, std::ostream& out) {
  const FiniteMetricSpace s = load_checked(c);
  const bool csv = c.format == "csv";
  const bool any = p.alpha_required || p.lp || p.alpha || p.delta || p.table;
  Sink sink(c, out);
  if (csv) {
    write_triple_table_csv(sink.stream(), sra_required_alpha(s, true));
    return ok;
  }
  json j{{"name", s.name()}, {"size", s.size()}};
  if (p.alpha_required || p.table || !any) {
    const SraReport r = sra_required_alpha(s, p.table);
    j["required_alpha"] = r.required_alpha;
    j["argmax"] = triple_json(r.argmax);
    if (p.table) {
      json rows = json::array();
      for (const auto& row : r.table)
        rows.push_back({row.t.i, row.t.j, row.t.k, row.required_alpha});
      j["table"] = std::move(rows);
    }
  }
  if (!any)
    j["ultrametric"] = is_ultrametric(s);
  if (p.lp || !any) {
    const LpReport lp = max_lp_exponent(s);
    j["lp_exponent"] = lp.exponent;
    j["lp_argmin"] = triple_json(lp.argmin);
  }
  if (p.alpha) {
    const SraCheck chk = sra_check(s, *p.alpha);
    j["sra_check"] = {{"alpha", *p.alpha},
                      {"passed", chk.passed},
                      {"violation", chk.violation ? triple_json(*chk.violation) : json(nullptr)},
                      {"violation_alpha", chk.violation_alpha}};
  }
  if (p.delta) {
    const UncReport u = unc_check(s, *p.delta);
    json bad = json::array();
    for (const auto& pair : u.pairs)
      if (!pair.feasible)
        bad.push_back({pair.i, pair.j});
    j["unc"] = {{"delta", *p.delta}, {"passed", u.passed}, {"failing_pairs", std::move(bad)}};
  }
  sink.json_report(j);
  return ok;
}

int do_order_check(const Common& c, const Params& p, std::ostream& out) {
  const OrderedSet s = load_checked_order(c);
  json j{{"size", s.size()},
         {"lambda_contracting", lambda_required_contracting(s)},
         {"lambda_expanding", lambda_required_expanding(s)},
         {"medial_theta", medial_theta_required(s)},
         {"length", discrete_length(s)},
         {"diameter", discrete_diameter(s)}};
  if (s.size() >= 2)
    j["bounded_turning"] = bounded_turning_constant(s);
  if (p.lambda) {
    const ElementaryCheck e = elementary_combination_check(s, *p.lambda);
    j["elementary"] = {{"lambda", *p.lambda},
                       {"preconditions_met", e.preconditions_met},
                       {"contracting", e.contracting},
                       {"expanding", e.expanding},
                       {"medial", e.medial},
                       {"sra_holds", e.sra_holds}};
  }
  if (p.theta || p.m) {
    const WitnessTrace tr = pt_iteration(s, need(p.theta, "--theta"), need(p.m, "--m"));
    json it{{"outcome", to_string(tr.outcome)}, {"steps", tr.steps.size()}};
    if (!tr.steps.empty())
      it["final"] = tr.steps.back().positions;
    if (p.lambda) {
      bool all = true;
      for (const auto& sc : lemma_step_check(tr, s, *p.lambda))
        all = all && sc.holds;
      it["lemma_holds"] = all;
    }
    j["iteration"] = std::move(it);
    if (!p.trace_path.empty()) {
      std::ofstream f(p.trace_path);
      if (!f)
        throw ParseError("cannot write " + p.trace_path);
      f << trace_to_json_lines(tr);
    }
  }
  Sink(c, out).json_report(j);
  return ok;
}

json parse_param_value(const std::string& v) {
  try {
    return json::parse(v);
  } catch (const json::parse_error&) {
    return v;
  }
}

int do_construct(const Common& c, const Params& p, std::ostream& out) {
  ConstructionSpec spec{p.family, json::object()};
  if (!p.params_json.empty()) {
    try {
      spec.params = json::parse(p.params_json);
    } catch (const json::parse_error& e) {
      throw ParseError(std::string("--params: ") + e.what());
    }
  }
  for (const auto& kv : p.params) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos)
      throw ParseError("--param expects key=value, got '" + kv + "'");
    spec.params[kv.substr(0, eq)] = parse_param_value(kv.substr(eq + 1));
  }
  const FiniteMetricSpace s = build(spec);
  Sink(c, out).json_report(space_to_json(s));
  return ok;
}

int do_search(const Common& c, const Params& p, std::ostream& out) {
  const FiniteMetricSpace s = load_checked(c);
  SearchOptions o;
  o.node_budget = p.budget;
  o.threads = thread_count();
  const SearchResult r = max_sra_subset(s, need(p.alpha, "--alpha"), o);
  json j{{"alpha", *p.alpha},
         {"cardinality", r.cardinality},
         {"subset", r.subset},
         {"labels", labels_of(s, r.subset)},
         {"nodes_explored", r.nodes_explored},
         {"proved_optimal", r.proved_optimal}};
  Sink(c, out).json_report(j);
  return r.proved_optimal ? ok : budget_exhausted;
}

int do_extract(const Common& c, const Params& p, std::ostream& out) {
  const OrderedSet s = load_checked_order(c);
  ExtractionOptions o;
  o.clique_budget = p.budget;
  o.max_m = p.max_m;
  if (p.ramsey_c)
    o.ramsey_c = *p.ramsey_c;
  const ExtractionResult r = extract_sra_subset(s, need(p.alpha, "--alpha"), need(p.k, "--k"), o);
  json j{{"alpha", *p.alpha},
         {"k", *p.k},
         {"status", to_string(r.status)},
         {"stage", r.stage},
         {"message", r.message},
         {"theta", r.theta},
         {"p", r.p},
         {"m", r.m},
         {"lambda0", r.lambda0},
         {"lambda_expanding", r.lambda_expanding},
         {"reversed", r.reversed},
         {"medial_subset", r.medial_subset},
         {"subset", r.subset},
         {"labels", labels_of(s.space(), r.subset)},
         {"certified", r.certified}};
  if (r.prop2)
    j["prop2"] = {{"premises_met", r.prop2->premises_met},
                  {"turning", r.prop2->turning},
                  {"medial", r.prop2->medial},
                  {"p", r.prop2->p},
                  {"index", r.prop2->index ? json(*r.prop2->index) : json(nullptr)},
                  {"report", r.prop2->report},
                  {"falsification_artifact", r.falsification_artifact}};
  Sink(c, out).json_report(j);
  switch (r.status) {
  case ExtractionStatus::precondition_failed:
    return precondition_error;
  case ExtractionStatus::medial_stage_exhausted:
  case ExtractionStatus::clique_stage_exhausted:
    return budget_exhausted;
  default:
    return ok;
  }
}

json embedding_json(const EmbeddingResult& e) {
  json coords = json::array();
  for (Index i = 0; i < e.coords.rows(); ++i) {
    json row = json::array();
    for (Index a = 0; a < e.coords.cols(); ++a)
      row.push_back(e.coords(i, a));
    coords.push_back(std::move(row));
  }
  return {{"norm", to_string(e.norm)},
          {"dimension", e.coords.cols()},
          {"coords", std::move(coords)},
          {"expansion", e.distortion.expansion},
          {"contraction", e.distortion.contraction},
          {"lipschitz", e.distortion.lipschitz},
          {"rescaled", e.distortion.rescaled},
          {"exact", e.exact}};
}

int do_embed(const Common& c, const Params& p, std::ostream& out) {
  Sink sink(c, out);
  if (p.tree) {
    std::vector<double> t = p.t;
    if (t.empty()) {
      if (p.count < 1)
        throw ParseError("--tree needs --t or --count");
      for (int k = 1; k <= p.count; ++k)
        t.push_back(p.rule == "harmonic" ? 1.0 / k : std::ldexp(1.0, 1 - k));
    }
    const MetricTreeSample tree = metric_tree(t, p.samples);
    const EmbeddingResult e = tree_embed_F(t, p.M, tree.points);
    if (c.format == "csv")
      write_coords_csv(sink.stream(), e);
    else
      sink.json_report(embedding_json(e));
    return ok;
  }
  const FiniteMetricSpace s = load_checked(c);
  const SchoenbergOutcome r = schoenberg_embed(s, p.base);
  if (c.format == "csv") {
    if (!r.embeddable)
      throw PreconditionError("not Euclidean-embeddable");
    write_coords_csv(sink.stream(), r.embedding);
    return ok;
  }
  json j{{"embeddable", r.embeddable}, {"min_eigenvalue", r.min_eigenvalue}};
  if (r.embeddable)
    j["embedding"] = embedding_json(r.embedding);
  else
    j["failure"] = "not Euclidean-embeddable";
  sink.json_report(j);
  return ok;
}

int do_constants(const Common& c, const Params& p, std::ostream& out) {
  const double theta = need(p.theta, "--theta");
  json j;
  if (p.m && !p.alpha) {
    const IterationConstants ic = iteration_constants(theta, *p.m);
    j = {{"theta", theta}, {"m", *p.m}, {"rho", ic.rho}, {"c1", ic.c1}, {"lambda1", ic.lambda1},
         {"big_c", ic.big_c}};
  } else if (p.m) {
    const ConstantsBundle b = constants(theta, *p.m, *p.alpha, p.k.value_or(0), p.ramsey_c.value_or(1.0));
    j = {{"theta", theta},        {"m", *p.m},         {"alpha", *p.alpha},
         {"rho", b.rho},          {"c1", b.c1},        {"lambda1", b.lambda1},
         {"big_c", b.big_c},      {"m_star", b.m_star}, {"p", b.p},
         {"ramsey_bound", flagged_json(b.ramsey_bound)}, {"lambda0", b.lambda0}};
  } else {
    j = {{"theta", theta}};
  }
  if (p.turning)
    j["index_bound_p"] = index_bound_p(theta, *p.turning, need(p.alpha, "--alpha"));
  Sink(c, out).json_report(j);
  return ok;
}

int do_probe(const Common& c, const Params& p, std::ostream& out) {
  const FiniteMetricSpace s = load_checked(c);
  json j{{"name", s.name()}, {"size", s.size()}};
  if (!p.radii.empty()) {
    json rows = json::array();
    for (const auto& r : doubling_probe(s, p.radii))
      rows.push_back({{"radius", r.radius}, {"count", r.count}, {"center", r.center}});
    j["doubling"] = std::move(rows);
  }
  if (!p.angles.empty()) {
    if (p.angles.size() != 3)
      throw ParseError("--angles expects three indices");
    for (Index i : p.angles)
      if (i < 0 || i >= s.size())
        throw DomainError("angle index out of range");
    const ComparisonAngles a = comparison_angles(s, p.angles[0], p.angles[1], p.angles[2]);
    j["angles"] = {{"at", a.at}, {"degenerate", a.degenerate}};
  }
  Sink(c, out).json_report(j);
  return ok;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Rough metric analysis: SRA conditions, ordered sets, constructions, embeddings"};
  app.require_subcommand(1);
  Common c;
  Params p;

  auto add_common = [&](CLI::App* sub, bool with_input) {
    if (with_input)
      sub->add_option("input", c.input, "space or ordered-set JSON file")->required();
    sub->add_option("--out", c.out_path, "write the report here instead of stdout");
    sub->add_option("--format", c.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--tolerance", c.tolerance, "metric validation tolerance");
  };

  auto* validate_cmd = app.add_subcommand("validate", "check the metric axioms");
  add_common(validate_cmd, true);

  auto* analyze = app.add_subcommand("analyze", "SRA, L^p and UNC analysis of a space");
  add_common(analyze, true);
  analyze->add_flag("--alpha-required", p.alpha_required, "smallest alpha with SRA(alpha)");
  analyze->add_option("--alpha", p.alpha, "decide SRA(alpha)");
  analyze->add_flag("--lp", p.lp, "largest L^p exponent");
  analyze->add_option("--unc", p.delta, "decide delta-UNC");
  analyze->add_flag("--table", p.table, "per-triple required alpha");

  auto* order = app.add_subcommand("order-check", "rough self-contracting and medial constants");
  add_common(order, true);
  order->add_option("--lambda", p.lambda);
  order->add_option("--theta", p.theta);
  order->add_option("--m", p.m);
  order->add_option("--trace", p.trace_path, "JSON lines trace of the P^t iteration");

  auto* construct = app.add_subcommand("construct", "build a named family");
  add_common(construct, false);
  construct->add_option("--family", p.family)->required()->check(CLI::IsMember(family_names()));
  construct->add_option("--param", p.params, "key=value, value parsed as JSON when possible");
  construct->add_option("--params", p.params_json, "all parameters as one JSON object");

  auto* search = app.add_subcommand("search", "largest SRA(alpha) subset");
  add_common(search, true);
  search->add_option("--alpha", p.alpha)->required();
  search->add_option("--budget", p.budget, "node budget");

  auto* extract = app.add_subcommand("extract", "SRA(alpha) subset of a rough self-contracting set");
  add_common(extract, true);
  extract->add_option("--alpha", p.alpha)->required();
  extract->add_option("--k", p.k)->required();
  extract->add_option("--budget", p.budget, "clique search node budget");
  extract->add_option("--max-m", p.max_m, "largest medial subset tried");
  extract->add_option("--ramsey-c", p.ramsey_c);

  auto* embed = app.add_subcommand("embed", "Euclidean embedding of a space, or the l1 tree map");
  add_common(embed, false);
  embed->add_option("input", c.input, "space JSON file");
  embed->add_option("--base", p.base, "base point of the Gram matrix");
  embed->add_flag("--tree", p.tree, "embed a sampled metric tree instead");
  embed->add_option("--t", p.t, "tree sequence")->delimiter(',');
  embed->add_option("--rule", p.rule)->check(CLI::IsMember({"geometric", "harmonic"}));
  embed->add_option("--count", p.count);
  embed->add_option("--M", p.M);
  embed->add_option("--samples", p.samples, "samples per segment");

  auto* consts = app.add_subcommand("constants", "constants of the extraction argument");
  add_common(consts, false);
  consts->add_option("--theta", p.theta)->required();
  consts->add_option("--m", p.m);
  consts->add_option("--alpha", p.alpha);
  consts->add_option("--k", p.k);
  consts->add_option("--turning", p.turning, "bounded turning constant for the index bound p");
  consts->add_option("--ramsey-c", p.ramsey_c);

  auto* probe = app.add_subcommand("probe", "doubling probe and comparison angles");
  add_common(probe, true);
  probe->add_option("--radii", p.radii)->delimiter(',');
  probe->add_option("--angles", p.angles)->delimiter(',');

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? ok : parse_error;
  }

  try {
    if (validate_cmd->parsed())
      return do_validate(c, out);
    if (analyze->parsed())
      return do_analyze(c, p, out);
    if (order->parsed())
      return do_order_check(c, p, out);
    if (construct->parsed())
      return do_construct(c, p, out);
    if (search->parsed())
      return do_search(c, p, out);
    if (extract->parsed())
      return do_extract(c, p, out);
    if (embed->parsed()) {
      if (!p.tree && c.input.empty())
        throw ParseError("embed needs an input file or --tree");
      return do_embed(c, p, out);
    }
    if (consts->parsed())
      return do_constants(c, p, out);
    if (probe->parsed())
      return do_probe(c, p, out);
  } catch (const MetricViolation& e) {
    err << "metric violation: " << e.what() << '\n';
    return metric_violation;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << '\n';
    return parse_error;
  } catch (const StructuralError& e) {
    err << "invalid input: " << e.what() << '\n';
    return parse_error;
  } catch (const DomainError& e) {
    err << "domain error: " << e.what() << '\n';
    return domain_error;
  } catch (const PreconditionError& e) {
    err << "precondition failed: " << e.what() << '\n';
    return precondition_error;
  } catch (const json::exception& e) {
    err << "parse error: " << e.what() << '\n';
    return parse_error;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return internal_error;
  }
  return internal_error;
}

} // namespace roughmetrics::cli
