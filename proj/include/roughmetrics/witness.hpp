#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "roughmetrics/ordered_set.hpp"
#include "roughmetrics/sra.hpp"

namespace roughmetrics {

/// Constants of the medial-subset iteration, which depend on (theta, m) only.
struct IterationConstants {
  double theta = 0.0;
  int m = 0;
  double rho = 0.0;
  double c1 = 0.0;
  double lambda1 = 0.0;
  double big_c = 0.0;
};

/// theta in (0, 1), m >= 2.
IterationConstants iteration_constants(double theta, int m);

struct ConstantsBundle {
  double theta = 0.0;
  int m = 0;
  double rho = 0.0;
  double c1 = 0.0;
  double lambda1 = 0.0;
  double big_c = 0.0;
  double m_star = 0.0;
  int p = 0;
  FlaggedValue ramsey_bound; // limit flag marks overflow
  double lambda0 = 0.0;
};

/// Full bundle. theta in (0,1), m >= 3, alpha in (1/2, 1) and
/// alpha > (1 - 1/M*)(1 + theta)/(1 - theta). The Ramsey entry uses
/// k (defaults to m) and the constant c.
ConstantsBundle constants(double theta, int m, double alpha, int k = 0, double ramsey_c = 1.0);

/// (1 + alpha) / (1 - alpha/2).
double m_star(double alpha);

/// Size p beyond which the index of prop2_check must exist.
/// Requires alpha > (1 - 1/M)(1 + theta)/(1 - theta).
int index_bound_p(double theta, double M, double alpha);

/// Midpoint of the admissible theta interval for alpha in (1/2, 1).
double theta_from_alpha(double alpha);

/// exp(c K^(p-2) log K), infinite (flagged) on overflow.
FlaggedValue ramsey_upper_bound(int p, int k, double c = 1.0);

/// sum_{a<b} rho^(m-1-a) d(x_{p_a}, x_{p_b}) with 1-based a; P holds positions.
double weighted_sum(const OrderedSet& s, const std::vector<Index>& positions, double rho);

struct TraceStep {
  std::vector<Index> positions;    // P^t, ascending
  std::optional<Triple> violation; // (i, j, k) positions, absent at a medial step
  double residual = 0.0;
  Index d_t = 0;
  double weighted = 0.0;
};

enum class TraceOutcome { medial_subset, terminated };

const char* to_string(TraceOutcome o);

struct WitnessTrace {
  IterationConstants constants;
  std::vector<TraceStep> steps;
  TraceOutcome outcome = TraceOutcome::terminated;
  Index n = 0;
};

/// Runs the P^t iteration for the medial condition at level theta.
WitnessTrace pt_iteration(const OrderedSet& s, double theta, int m);

/// One JSON object per line, one line per step.
std::string trace_to_json_lines(const WitnessTrace& trace);

struct StepCheck {
  int t = 0; // 1-based step index
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = false;
};

/// Evaluates the step inequality between consecutive P^t. Negative lambda is
/// replaced by 0. Throws PreconditionError unless s is rough
/// lambda-self-expanding.
std::vector<StepCheck> lemma_step_check(const WitnessTrace& trace, const OrderedSet& s,
                                        double lambda, double tol = 1e-9);

/// Red/blue colouring of ordered position triples i < j < k.
class TripleColoring {
public:
  TripleColoring() = default;
  explicit TripleColoring(Index n) : n_(n), red_(static_cast<std::size_t>(n * n * n), 0) {}

  Index size() const { return n_; }
  bool red(Index i, Index j, Index k) const { return red_[static_cast<std::size_t>((i * n_ + j) * n_ + k)] != 0; }
  void set_red(Index i, Index j, Index k, bool v) {
    red_[static_cast<std::size_t>((i * n_ + j) * n_ + k)] = v ? 1 : 0;
  }
  double red_fraction() const;

private:
  Index n_ = 0;
  std::vector<unsigned char> red_;
};

/// Red iff d(x_j, x_k) <= d(x_i, x_k) + alpha d(x_i, x_j); equality is red.
TripleColoring color_triples(const OrderedSet& s, double alpha);

enum class CliqueKind { red, blue, neither };

const char* to_string(CliqueKind k);

struct CliqueResult {
  CliqueKind kind = CliqueKind::neither;
  std::vector<Index> subset;
  std::uint64_t nodes_explored = 0;
  bool budget_exhausted = false;
};

/// Red K-clique if one exists, otherwise blue p-clique; lexicographically first.
CliqueResult mono_clique_search(const TripleColoring& coloring, int k, int p,
                                std::uint64_t budget = 50'000'000);

struct Prop2Result {
  bool premises_met = false;
  double turning = 0.0;
  double medial = 0.0;
  bool premise_inequality = false;
  int p = 0;
  bool size_ok = false;          // |Z| >= p
  std::optional<Index> index;    // i with d(z_{i+1},z_last) < d(z_i,z_last) + alpha d(z_i,z_{i+1})
  std::string report;
};

/// Looks for the index guaranteed by the decay argument on M-bounded turning,
/// medial-theta sets. Hypotheses are reported, not thrown.
Prop2Result prop2_check(const OrderedSet& z, double theta, double M, double alpha);

enum class ExtractionStatus {
  certified,          // red clique, SRA(alpha) verified
  blue_contradiction, // blue p-clique found; see prop2 fields
  precondition_failed,
  medial_stage_exhausted,
  clique_stage_exhausted,
  certification_failed, // red clique that fails SRA(alpha)
};

const char* to_string(ExtractionStatus s);

struct ExtractionOptions {
  std::uint64_t clique_budget = 50'000'000;
  int max_m = 24;
  double ramsey_c = 1.0;
};

struct ExtractionResult {
  ExtractionStatus status = ExtractionStatus::precondition_failed;
  std::string stage;   // stage that produced the status
  std::string message;
  double theta = 0.0;
  int p = 0;
  int m = 0;           // size of the medial subset used
  double lambda0 = 0.0;
  double lambda_expanding = 0.0;
  bool reversed = false;
  std::vector<Index> medial_subset; // point indices of the underlying space
  std::vector<Index> subset;        // point indices, in the order of the input
  bool certified = false;
  std::optional<Prop2Result> prop2;
  bool falsification_artifact = false;
};

/// Pipeline: theta(alpha), constants, P^t iteration, colouring, clique search,
/// exact SRA(alpha) certification of the red outcome.
ExtractionResult extract_sra_subset(const OrderedSet& s, double alpha, int k,
                                    const ExtractionOptions& options = {});

} // namespace roughmetrics
