#include "roughmetrics/witness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "roughmetrics/error.hpp"

namespace roughmetrics {

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

double premise_rhs(double theta, double M) { return (1.0 - 1.0 / M) * (1.0 + theta) / (1.0 - theta); }

} // namespace

IterationConstants iteration_constants(double theta, int m) {
  if (!(theta > 0.0 && theta < 1.0))
    throw DomainError("theta must lie in (0, 1)");
  if (m < 2)
    throw DomainError("m must be at least 2");
  IterationConstants c;
  c.theta = theta;
  c.m = m;
  c.rho = 3.0 * m * (m + 1) / theta;
  double power = 1.0;
  for (int a = 0; a <= m - 2; ++a) {
    c.c1 += power;
    power *= c.rho;
  }
  c.lambda1 = 1.0 / (2.0 * m * c.c1);
  c.big_c = 12.0 * (m * (m - 1) / 2.0 * std::pow(c.rho, m - 2) + m);
  return c;
}

double m_star(double alpha) {
  if (!(alpha > 0.0 && alpha < 2.0))
    throw DomainError("alpha must lie in (0, 2)");
  return (1.0 + alpha) / (1.0 - alpha / 2.0);
}

int index_bound_p(double theta, double M, double alpha) {
  if (!(theta >= 0.0 && theta < 1.0))
    throw DomainError("theta must lie in [0, 1)");
  if (!(M >= 1.0))
    throw DomainError("bounded turning constant must be at least 1");
  if (!(alpha > 0.0 && alpha < 1.0))
    throw DomainError("alpha must lie in (0, 1)");
  const double rhs = premise_rhs(theta, M);
  if (!(alpha > rhs))
    throw DomainError("premise alpha > (1 - 1/M)(1 + theta)/(1 - theta) fails: " + fmt(alpha) +
                      " <= " + fmt(rhs));
  const double x = rhs / alpha;
  const double bound = 2.0 - std::log1p(-x) / std::log(2.0 / (1.0 - theta));
  return static_cast<int>(std::floor(bound)) + 1;
}

double theta_from_alpha(double alpha) {
  if (!(alpha > 0.5 && alpha < 1.0))
    throw DomainError("alpha must lie in (1/2, 1)");
  const double r = alpha / (1.0 - 1.0 / m_star(alpha));
  return 0.5 * (r - 1.0) / (r + 1.0);
}

FlaggedValue ramsey_upper_bound(int p, int k, double c) {
  if (p < 3 || k < 3)
    throw DomainError("Ramsey bound needs p >= 3 and K >= 3");
  if (!(c > 0.0))
    throw DomainError("Ramsey constant must be positive");
  const double e = c * std::pow(static_cast<double>(k), p - 2) * std::log(static_cast<double>(k));
  const double v = std::exp(e);
  if (!std::isfinite(v))
    return {std::numeric_limits<double>::infinity(), true};
  return {v, false};
}

ConstantsBundle constants(double theta, int m, double alpha, int k, double ramsey_c) {
  if (m < 3)
    throw DomainError("m must be at least 3");
  if (!(alpha > 0.5 && alpha < 1.0))
    throw DomainError("alpha must lie in (1/2, 1)");
  const IterationConstants ic = iteration_constants(theta, m);
  ConstantsBundle b;
  b.theta = theta;
  b.m = m;
  b.rho = ic.rho;
  b.c1 = ic.c1;
  b.lambda1 = ic.lambda1;
  b.big_c = ic.big_c;
  b.m_star = m_star(alpha);
  b.p = index_bound_p(theta, b.m_star, alpha);
  b.ramsey_bound = ramsey_upper_bound(b.p, k > 0 ? k : m, ramsey_c);
  b.lambda0 = std::min((2.0 * alpha - 1.0) / 3.0 - 1e-12, b.lambda1);
  return b;
}

double weighted_sum(const OrderedSet& s, const std::vector<Index>& positions, double rho) {
  const Index m = static_cast<Index>(positions.size());
  for (Index a = 0; a < m; ++a)
    if (positions[a] < 0 || positions[a] >= s.size() || (a > 0 && positions[a] <= positions[a - 1]))
      throw DomainError("positions must be strictly increasing and in range");
  double total = 0.0;
  // a is 0-based here, so the weight rho^(m-1-a) of the 1-based index is rho^(m-2-a)
  for (Index a = 0; a + 1 < m; ++a) {
    double row = 0.0;
    for (Index b = a + 1; b < m; ++b)
      row += s(positions[a], positions[b]);
    total += std::pow(rho, static_cast<double>(m - 2 - a)) * row;
  }
  return total;
}

const char* to_string(TraceOutcome o) {
  return o == TraceOutcome::medial_subset ? "medial_subset" : "terminated";
}

WitnessTrace pt_iteration(const OrderedSet& s, double theta, int m) {
  WitnessTrace tr;
  tr.constants = iteration_constants(theta, m);
  tr.n = s.size();
  if (s.size() < m)
    throw DomainError("ordered set has fewer than m points");
  const Eigen::MatrixXd& d = s.matrix();
  std::vector<Index> P(static_cast<std::size_t>(m));
  for (int a = 0; a < m; ++a)
    P[static_cast<std::size_t>(a)] = a;
  for (;;) {
    TraceStep step;
    step.positions = P;
    step.weighted = weighted_sum(s, P, tr.constants.rho);
    double worst = 0.0;
    for (std::size_t a = 0; a < P.size(); ++a)
      for (std::size_t b = a + 1; b < P.size(); ++b)
        for (std::size_t c = b + 1; c < P.size(); ++c) {
          const Index i = P[a], j = P[b], k = P[c];
          const double res = d(i, k) - d(i, j) - theta * d(j, k);
          if (res > sra_tolerance * d(j, k) && (!step.violation || res > worst)) {
            worst = res;
            step.violation = Triple{i, j, k};
          }
        }
    if (!step.violation) {
      tr.steps.push_back(std::move(step));
      tr.outcome = TraceOutcome::medial_subset;
      return tr;
    }
    step.residual = worst;
    const Index j = step.violation->j, k = step.violation->k;
    step.d_t = std::count_if(P.begin(), P.end(), [&](Index q) { return q >= j && q <= k - 1; });
    const Index last = P.back();
    tr.steps.push_back(step);
    if (last + 1 + step.d_t > tr.n) {
      tr.outcome = TraceOutcome::terminated;
      return tr;
    }
    std::vector<Index> next;
    for (Index q : P)
      if (q < j || q > k - 1)
        next.push_back(q);
    for (Index q = last + 1; q <= last + step.d_t; ++q)
      next.push_back(q);
    P = std::move(next);
  }
}

std::string trace_to_json_lines(const WitnessTrace& trace) {
  std::string out;
  for (std::size_t t = 0; t < trace.steps.size(); ++t) {
    const TraceStep& s = trace.steps[t];
    nlohmann::json j;
    j["t"] = t + 1;
    j["P"] = s.positions;
    if (s.violation)
      j["violation"] = {s.violation->i, s.violation->j, s.violation->k};
    else
      j["violation"] = nullptr;
    j["residual"] = s.residual;
    j["d_t"] = s.d_t;
    j["S"] = s.weighted;
    if (t + 1 == trace.steps.size())
      j["outcome"] = to_string(trace.outcome);
    out += j.dump();
    out += '\n';
  }
  return out;
}

std::vector<StepCheck> lemma_step_check(const WitnessTrace& trace, const OrderedSet& s,
                                        double lambda, double tol) {
  if (trace.n != s.size())
    throw DomainError("trace does not belong to this ordered set");
  const double req = lambda_required_expanding(s);
  if (req > lambda + sra_tolerance)
    throw PreconditionError("set is not rough " + fmt(lambda) + "-self-expanding (needs " + fmt(req) + ")");
  const double lam = std::max(lambda, 0.0);
  const IterationConstants& c = trace.constants;
  std::vector<StepCheck> out;
  for (std::size_t t = 0; t + 1 < trace.steps.size(); ++t) {
    const auto& P = trace.steps[t].positions;
    const auto& Q = trace.steps[t + 1].positions;
    StepCheck sc;
    sc.t = static_cast<int>(t) + 1;
    sc.lhs = weighted_sum(s, P, c.rho);
    double walked = 0.0;
    for (Index u = P.back(); u < Q.back(); ++u)
      walked += s(u, u + 1);
    double moved = 0.0;
    for (std::size_t b = 0; b < P.size(); ++b)
      moved += s(P[b], Q[b]);
    sc.rhs = weighted_sum(s, Q, c.rho) - walked + c.c1 * lam * moved;
    sc.holds = sc.lhs <= sc.rhs + tol * std::max(1.0, std::abs(sc.lhs));
    out.push_back(sc);
  }
  return out;
}

double TripleColoring::red_fraction() const {
  std::size_t red = 0, total = 0;
  for (Index i = 0; i < n_; ++i)
    for (Index j = i + 1; j < n_; ++j)
      for (Index k = j + 1; k < n_; ++k) {
        ++total;
        red += this->red(i, j, k) ? 1 : 0;
      }
  return total ? static_cast<double>(red) / static_cast<double>(total) : 0.0;
}

TripleColoring color_triples(const OrderedSet& s, double alpha) {
  const Index n = s.size();
  TripleColoring col(n);
  for (Index i = 0; i < n; ++i)
    for (Index j = i + 1; j < n; ++j)
      for (Index k = j + 1; k < n; ++k)
        col.set_red(i, j, k, s(j, k) <= s(i, k) + alpha * s(i, j));
  return col;
}

const char* to_string(CliqueKind k) {
  switch (k) {
  case CliqueKind::red:
    return "red";
  case CliqueKind::blue:
    return "blue";
  case CliqueKind::neither:
    return "neither";
  }
  return "?";
}

namespace {

class CliqueFinder {
public:
  CliqueFinder(const TripleColoring& col, bool want_red, Index size, std::uint64_t& nodes,
               std::uint64_t budget)
      : col_(col), want_red_(want_red), size_(size), nodes_(nodes), budget_(budget) {}

  bool run() {
    std::vector<Index> cands;
    for (Index c = 0; c < col_.size(); ++c)
      cands.push_back(c);
    return visit(cands);
  }

  bool exhausted() const { return exhausted_; }
  const std::vector<Index>& found() const { return cur_; }

private:
  bool visit(const std::vector<Index>& cands) {
    if (static_cast<Index>(cur_.size()) == size_)
      return true;
    if (nodes_++ >= budget_) {
      exhausted_ = true;
      return false;
    }
    for (std::size_t t = 0; t < cands.size(); ++t) {
      if (static_cast<Index>(cur_.size() + cands.size() - t) < size_)
        return false;
      const Index v = cands[t];
      std::vector<Index> next;
      for (std::size_t u = t + 1; u < cands.size(); ++u) {
        const Index c = cands[u];
        bool ok = true;
        for (Index a : cur_)
          if (col_.red(a, v, c) != want_red_) {
            ok = false;
            break;
          }
        if (ok)
          next.push_back(c);
      }
      cur_.push_back(v);
      if (visit(next))
        return true;
      cur_.pop_back();
      if (exhausted_)
        return false;
    }
    return false;
  }

  const TripleColoring& col_;
  bool want_red_;
  Index size_;
  std::uint64_t& nodes_;
  std::uint64_t budget_;
  bool exhausted_ = false;
  std::vector<Index> cur_;
};

} // namespace

CliqueResult mono_clique_search(const TripleColoring& coloring, int k, int p, std::uint64_t budget) {
  if (k < 1 || p < 1)
    throw DomainError("clique sizes must be positive");
  CliqueResult r;
  CliqueFinder red(coloring, true, k, r.nodes_explored, budget);
  if (red.run()) {
    r.kind = CliqueKind::red;
    r.subset = red.found();
    return r;
  }
  if (red.exhausted()) {
    r.budget_exhausted = true;
    return r;
  }
  CliqueFinder blue(coloring, false, p, r.nodes_explored, budget);
  if (blue.run()) {
    r.kind = CliqueKind::blue;
    r.subset = blue.found();
    return r;
  }
  r.budget_exhausted = blue.exhausted();
  return r;
}

Prop2Result prop2_check(const OrderedSet& z, double theta, double M, double alpha) {
  if (!(theta >= 0.0 && theta < 1.0))
    throw DomainError("theta must lie in [0, 1)");
  if (!(M >= 1.0))
    throw DomainError("bounded turning constant must be at least 1");
  if (!(alpha > 0.0 && alpha < 1.0))
    throw DomainError("alpha must lie in (0, 1)");
  Prop2Result r;
  const Index n = z.size();
  std::ostringstream report;
  r.premise_inequality = alpha > premise_rhs(theta, M);
  if (!r.premise_inequality) {
    report << "premise fails: alpha " << fmt(alpha) << " <= " << fmt(premise_rhs(theta, M)) << "; ";
  } else {
    r.p = index_bound_p(theta, M, alpha);
    r.size_ok = n >= r.p;
    if (!r.size_ok)
      report << "size " << n << " below p = " << r.p << "; ";
  }
  r.turning = n >= 2 ? bounded_turning_constant(z) : 1.0;
  r.medial = medial_theta_required(z);
  const bool turning_ok = r.turning <= M * (1.0 + sra_tolerance);
  const bool medial_ok = r.medial <= theta + sra_tolerance;
  if (!turning_ok)
    report << "bounded turning " << fmt(r.turning) << " exceeds M; ";
  if (!medial_ok)
    report << "medial constant " << fmt(r.medial) << " exceeds theta; ";
  r.premises_met = r.premise_inequality && turning_ok && medial_ok;
  if (n >= 3) {
    const Index last = n - 1;
    for (Index i = 0; i + 2 < n; ++i)
      if (z(i + 1, last) < z(i, last) + alpha * z(i, i + 1)) {
        r.index = i;
        break;
      }
  }
  if (r.premises_met && r.size_ok && !r.index)
    report << "no index found although all hypotheses hold; ";
  r.report = report.str();
  return r;
}

const char* to_string(ExtractionStatus s) {
  switch (s) {
  case ExtractionStatus::certified:
    return "certified";
  case ExtractionStatus::blue_contradiction:
    return "blue_contradiction";
  case ExtractionStatus::precondition_failed:
    return "precondition_failed";
  case ExtractionStatus::medial_stage_exhausted:
    return "medial_stage_exhausted";
  case ExtractionStatus::clique_stage_exhausted:
    return "clique_stage_exhausted";
  case ExtractionStatus::certification_failed:
    return "certification_failed";
  }
  return "?";
}

ExtractionResult extract_sra_subset(const OrderedSet& s, double alpha, int k,
                                    const ExtractionOptions& options) {
  if (!(alpha > 0.5 && alpha < 1.0))
    throw DomainError("alpha must lie in (1/2, 1)");
  if (k < 1)
    throw DomainError("K must be positive");
  ExtractionResult r;
  const Index n = s.size();
  if (k <= 2) {
    for (Index t = 0; t < std::min<Index>(k, n); ++t)
      r.subset.push_back(s.order()[static_cast<std::size_t>(t)]);
    r.status = ExtractionStatus::certified;
    r.stage = "trivial";
    r.certified = true;
    return r;
  }
  r.theta = theta_from_alpha(alpha);
  const double mstar = m_star(alpha);
  r.p = index_bound_p(r.theta, mstar, alpha);
  const int m0 = std::max(k, r.p);
  r.lambda0 = constants(r.theta, m0, alpha, k, options.ramsey_c).lambda0;

  // orientation
  OrderedSet work = s;
  r.lambda_expanding = lambda_required_expanding(s);
  if (r.lambda_expanding > r.lambda0) {
    const double contracting = lambda_required_contracting(s);
    if (contracting <= r.lambda0) {
      work = s.reversed();
      r.reversed = true;
      r.lambda_expanding = contracting;
    } else {
      r.status = ExtractionStatus::precondition_failed;
      r.stage = "orientation";
      r.message = "neither orientation is rough lambda0-self-expanding: expanding " +
                  fmt(r.lambda_expanding) + ", contracting " + fmt(contracting) +
                  ", lambda0 " + fmt(r.lambda0);
      return r;
    }
  }

  // medial subset, escalating m while the iteration keeps succeeding
  std::vector<Index> medial;
  WitnessTrace first;
  const int cap = static_cast<int>(std::min<Index>(n, options.max_m));
  for (int m = m0; m <= cap; ++m) {
    WitnessTrace tr = pt_iteration(work, r.theta, m);
    if (m == m0)
      first = tr;
    if (tr.outcome != TraceOutcome::medial_subset)
      break;
    medial = tr.steps.back().positions;
  }
  if (medial.empty()) {
    r.status = ExtractionStatus::medial_stage_exhausted;
    r.stage = "medial";
    std::ostringstream os;
    if (n < m0) {
      os << "only " << n << " points, need m = " << m0;
    } else {
      const double L = discrete_length(work), D = discrete_diameter(work);
      os << "P^t iteration terminated after " << first.steps.size() << " steps at m = " << m0
         << "; L = " << fmt(L) << ", C*D = " << fmt(first.constants.big_c * D);
    }
    r.message = os.str();
    return r;
  }
  r.m = static_cast<int>(medial.size());
  for (Index q : medial)
    r.medial_subset.push_back(work.order()[static_cast<std::size_t>(q)]);

  // colouring and clique search on the medial subset
  const OrderedSet F = work.restrict(medial);
  const CliqueResult cl = mono_clique_search(color_triples(F, alpha), k, r.p, options.clique_budget);
  if (cl.kind == CliqueKind::neither) {
    r.status = ExtractionStatus::clique_stage_exhausted;
    r.stage = "clique";
    r.message = cl.budget_exhausted ? "clique search budget exhausted"
                                    : "no red K-clique and no blue p-clique in the medial subset";
    return r;
  }
  std::vector<Index> chosen;
  for (Index q : cl.subset)
    chosen.push_back(F.order()[static_cast<std::size_t>(q)]);
  if (cl.kind == CliqueKind::blue) {
    std::vector<Index> pos = cl.subset;
    r.prop2 = prop2_check(F.restrict(pos), r.theta, mstar, alpha);
    r.falsification_artifact = r.prop2->premises_met && r.prop2->size_ok && !r.prop2->index;
    r.subset = chosen;
    r.status = ExtractionStatus::blue_contradiction;
    r.stage = "clique";
    r.message = "blue p-clique found";
    return r;
  }
  // report in the order of the input
  if (r.reversed)
    std::reverse(chosen.begin(), chosen.end());
  r.subset = chosen;
  r.certified = sra_check(s.space().subspace(r.subset), alpha).passed;
  r.stage = "certification";
  r.status = r.certified ? ExtractionStatus::certified : ExtractionStatus::certification_failed;
  if (!r.certified)
    r.message = "red clique failed exact SRA certification";
  return r;
}

} // namespace roughmetrics
