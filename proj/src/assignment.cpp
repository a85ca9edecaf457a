#include "rfs/assignment.hpp"

#include <queue>
#include <unordered_set>

namespace rfs {

namespace {

// Shortest-augmenting-path LAP core (Jonker-Volgenant style) over a dense
// rectangular matrix with +inf as forbidden. Costs must be nonnegative; the
// caller row-shifts the matrix to guarantee that.
struct LapContext {
  const MatXd& c;  // m x ncols, shifted, >= 0
  Index m, ncols;

  explicit LapContext(const MatXd& costs)
      : c(costs), m(costs.rows()), ncols(costs.cols()) {}
};

struct Matching {
  std::vector<int> row_to_col;
  std::vector<int> col_to_row;
  std::vector<double> u, v;  // dual potentials

  void init(Index m, Index n) {
    row_to_col.assign(m, -1);
    col_to_row.assign(n, -1);
    u.assign(m, 0.0);
    v.assign(n, 0.0);
  }
};

// Edge filter for Murty subproblems: per-node forbidden pairs and blocked
// (fixed) columns.
struct Constraints {
  std::unordered_set<long long> forbidden;  // row * ncols + col
  std::vector<char> col_blocked;

  bool allows(Index ncols, int row, int col) const {
    return !col_blocked[col] &&
           !forbidden.contains(static_cast<long long>(row) * ncols + col);
  }
};

// Augment one free row; returns false when no augmenting path exists.
// Maintains dual feasibility and complementary slackness.
bool augment_row(const LapContext& ctx, Matching& match,
                 const Constraints& cons, int free_row) {
  const Index n = ctx.ncols;
  std::vector<double> dist(n, kInf);
  std::vector<int> pred(n, -1);
  std::vector<char> done(n, 0);

  for (Index j = 0; j < n; ++j) {
    if (!cons.allows(n, free_row, static_cast<int>(j))) continue;
    const double cij = ctx.c(free_row, j);
    if (!std::isfinite(cij)) continue;
    dist[j] = cij - match.u[free_row] - match.v[j];
    pred[j] = free_row;
  }

  int end_col = -1;
  double end_dist = kInf;
  std::vector<int> finalized;
  finalized.reserve(16);
  while (true) {
    int jmin = -1;
    double dmin = kInf;
    for (Index j = 0; j < n; ++j) {
      if (!done[j] && dist[j] < dmin) {
        dmin = dist[j];
        jmin = static_cast<int>(j);
      }
    }
    if (jmin < 0) return false;  // no reachable column
    done[jmin] = 1;
    finalized.push_back(jmin);
    if (match.col_to_row[jmin] < 0) {
      end_col = jmin;
      end_dist = dmin;
      break;
    }
    const int i = match.col_to_row[jmin];
    for (Index j = 0; j < n; ++j) {
      if (done[j] || !cons.allows(n, i, static_cast<int>(j))) continue;
      const double cij = ctx.c(i, j);
      if (!std::isfinite(cij)) continue;
      const double nd = dmin + cij - match.u[i] - match.v[j];
      if (nd < dist[j]) {
        dist[j] = nd;
        pred[j] = i;
      }
    }
  }

  // Dual update over finalized columns, then flip the matching along preds.
  for (int j : finalized) {
    if (j == end_col) continue;
    match.v[j] += dist[j] - end_dist;
    match.u[match.col_to_row[j]] += end_dist - dist[j];
  }
  match.u[free_row] += end_dist;

  int j = end_col;
  while (true) {
    const int i = pred[j];
    match.col_to_row[j] = i;
    const int jprev = match.row_to_col[i];
    match.row_to_col[i] = j;
    if (i == free_row) break;
    j = jprev;
  }
  return true;
}

struct MurtyNode {
  int prefix_len = 0;  // rows 0..prefix_len-1 fixed to their solution columns
  std::vector<std::pair<int, int>> forbidden;
  Matching match;
  double shifted_cost = 0.0;
  long seq = 0;
};

struct NodeOrder {
  bool operator()(const MurtyNode& a, const MurtyNode& b) const {
    if (a.shifted_cost != b.shifted_cost) return a.shifted_cost > b.shifted_cost;
    return a.seq > b.seq;
  }
};

double solution_cost(const LapContext& ctx, const std::vector<int>& row_to_col) {
  double s = 0.0;
  for (Index i = 0; i < ctx.m; ++i) s += ctx.c(i, row_to_col[i]);
  return s;
}

Constraints make_constraints(const LapContext& ctx, const MurtyNode& node) {
  Constraints cons;
  cons.col_blocked.assign(ctx.ncols, 0);
  for (int i = 0; i < node.prefix_len; ++i)
    cons.col_blocked[node.match.row_to_col[i]] = 1;
  for (const auto& [r, c] : node.forbidden)
    cons.forbidden.insert(static_cast<long long>(r) * ctx.ncols + c);
  return cons;
}

}  // namespace

AssocCostMatrix assemble_cost_matrix(const MatXd& det_logw,
                                     const VecXd& mis_logw,
                                     const VecXd& new_col_logw) {
  const Index m = det_logw.rows();
  const Index n = det_logw.cols();
  if (mis_logw.size() != n || new_col_logw.size() != m) {
    throw std::invalid_argument("assemble_cost_matrix: dimension mismatch");
  }
  AssocCostMatrix out;
  out.costs = MatXd::Constant(m, n + m, kInf);
  out.gate_mask.setConstant(m, n, false);
  for (Index j = 0; j < n; ++j) {
    const double mis = floored_log(mis_logw(j));
    for (Index i = 0; i < m; ++i) {
      if (!std::isfinite(det_logw(i, j))) continue;
      out.costs(i, j) = -(det_logw(i, j) - mis);
      out.gate_mask(i, j) = true;
    }
  }
  for (Index i = 0; i < m; ++i)
    out.costs(i, n + i) = -floored_log(new_col_logw(i));
  return out;
}

AssocCostMatrix build_cost_matrix(std::span<const BernoulliTrackd> tracks,
                                  std::span<const VecXd> measurements,
                                  const PoissonIntensityd& ppp,
                                  const MeasurementModeld& model,
                                  double gamma) {
  const Index m = static_cast<Index>(measurements.size());
  const Index n = static_cast<Index>(tracks.size());
  MatXd det_logw = MatXd::Constant(m, n, kNegInf);
  VecXd mis_logw(n);
  VecXd new_col_logw(m);
  for (Index j = 0; j < n; ++j) {
    mis_logw(j) = update_bernoulli_misdetection(tracks[j], model).log_assoc_weight;
    for (Index i = 0; i < m; ++i) {
      if (!gate(tracks[j].density, measurements[i], model, gamma)) continue;
      det_logw(i, j) =
          update_bernoulli_detection(tracks[j], measurements[i], model)
              .log_assoc_weight;
    }
  }
  for (Index i = 0; i < m; ++i) {
    new_col_logw(i) =
        init_bernoulli_from_measurement(ppp, measurements[i], model, gamma)
            .log_assoc_weight;
  }
  return assemble_cost_matrix(det_logw, mis_logw, new_col_logw);
}

std::vector<Assignment> murty_kbest(const AssocCostMatrix& c, int k) {
  if (k < 1) throw std::invalid_argument("murty_kbest: k must be >= 1");
  const Index m = c.num_measurements();
  const Index ntracks = c.num_track_columns();
  const Index ncols = c.costs.cols();

  std::vector<Assignment> out;
  if (m == 0) {
    out.push_back({{}, static_cast<int>(ntracks), 0.0});
    return out;
  }

  // Row-shift so all finite costs are nonnegative: every feasible assignment
  // covers every row once, so ordering is unaffected.
  MatXd shifted = c.costs;
  double shift_total = 0.0;
  for (Index i = 0; i < m; ++i) {
    double lo = kInf;
    for (Index j = 0; j < ncols; ++j) lo = std::min(lo, shifted(i, j));
    if (!std::isfinite(lo)) {
      throw std::runtime_error("murty_kbest: row " + std::to_string(i) +
                               " has no admissible column");
    }
    shifted.row(i).array() -= lo;
    shift_total += lo;
  }
  LapContext ctx(shifted);

  long seq = 0;
  std::priority_queue<MurtyNode, std::vector<MurtyNode>, NodeOrder> queue;

  MurtyNode root;
  root.match.init(m, ncols);
  {
    Constraints cons;
    cons.col_blocked.assign(ncols, 0);
    for (Index i = 0; i < m; ++i) {
      if (!augment_row(ctx, root.match, cons, static_cast<int>(i))) {
        throw std::runtime_error("murty_kbest: no feasible assignment (row " +
                                 std::to_string(i) + ")");
      }
    }
  }
  root.shifted_cost = solution_cost(ctx, root.match.row_to_col);
  root.seq = seq++;
  queue.push(std::move(root));

  while (!queue.empty() && static_cast<int>(out.size()) < k) {
    MurtyNode node = queue.top();
    queue.pop();

    Assignment a;
    a.mapping = node.match.row_to_col;
    a.num_track_columns = static_cast<int>(ntracks);
    a.total_cost = node.shifted_cost + shift_total;
    out.push_back(std::move(a));
    if (static_cast<int>(out.size()) == k) break;

    // Partition the remaining solutions of this node.
    for (Index rb = node.prefix_len; rb < m; ++rb) {
      MurtyNode child;
      child.prefix_len = static_cast<int>(rb);
      child.forbidden = node.forbidden;
      child.forbidden.emplace_back(static_cast<int>(rb),
                                   node.match.row_to_col[rb]);
      child.match = node.match;
      const int freed_col = child.match.row_to_col[rb];
      child.match.row_to_col[rb] = -1;
      child.match.col_to_row[freed_col] = -1;

      Constraints cons = make_constraints(ctx, child);
      if (!augment_row(ctx, child.match, cons, static_cast<int>(rb))) continue;
      child.shifted_cost = solution_cost(ctx, child.match.row_to_col);
      child.seq = seq++;
      queue.push(std::move(child));
    }
  }
  return out;
}

int kbest_budget(double hypothesis_log_weight, int total_budget) {
  const double w = std::exp(hypothesis_log_weight);
  const int k = static_cast<int>(std::ceil(total_budget * w));
  return std::max(1, k);
}

std::vector<int> solve_assignment(const MatXd& costs) {
  const Index m = costs.rows();
  const Index ncols = costs.cols();
  if (m > ncols) throw std::invalid_argument("solve_assignment: rows > cols");
  if (m == 0) return {};

  MatXd shifted = costs;
  for (Index i = 0; i < m; ++i) {
    double lo = kInf;
    for (Index j = 0; j < ncols; ++j) lo = std::min(lo, shifted(i, j));
    if (!std::isfinite(lo)) {
      throw std::runtime_error("solve_assignment: row " + std::to_string(i) +
                               " has no admissible column");
    }
    shifted.row(i).array() -= lo;
  }

  LapContext ctx(shifted);
  Matching match;
  match.init(m, ncols);
  Constraints cons;
  cons.col_blocked.assign(ncols, 0);
  for (Index i = 0; i < m; ++i) {
    if (!augment_row(ctx, match, cons, static_cast<int>(i))) {
      throw std::runtime_error("solve_assignment: no feasible assignment (row " +
                               std::to_string(i) + ")");
    }
  }
  return match.row_to_col;
}

}  // namespace rfs
