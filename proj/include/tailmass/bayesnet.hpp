#pragma once

// Discrete Bayesian networks over finite-cardinality variables: validation,
// joint probabilities, exhaustive enumeration, random generation, logic
// (forward) sampling, and exact/truncated marginals.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "tailmass/errors.hpp"
#include "tailmass/prng.hpp"
#include "tailmass/sample.hpp"

namespace tailmass {

struct Variable {
  std::string name;
  int cardinality = 2;
};

// One joint state: states[v] is the state index of variable v.
using Instantiation = std::vector<int>;

// Conditional-probability-table entry regimes for random networks.
//   UnitUniform: row entries drawn uniformly from [0, 1).
//   Extreme:     row entries drawn uniformly from [0, 0.1) u [0.9, 1),
//                yielding near-deterministic or near-uniform rows after
//                normalization.
enum class CptRegime { UnitUniform, Extreme };

struct BayesNet {
  std::vector<Variable> variables;
  // parents[v]: strictly ascending list of parent indices of variable v.
  std::vector<std::vector<int>> parents;
  // cpts[v][row][state]: P(v = state | parent row). Rows are indexed with the
  // first listed parent most significant and the last varying fastest.
  std::vector<std::vector<std::vector<double>>> cpts;

  int num_variables() const { return static_cast<int>(variables.size()); }

  std::size_t cpt_row_count(int v) const {
    std::size_t rows = 1;
    for (int p : parents[v]) rows *= static_cast<std::size_t>(variables[p].cardinality);
    return rows;
  }

  std::size_t parent_row_index(int v, const Instantiation& inst) const {
    std::size_t row = 0;
    for (int p : parents[v])
      row = row * static_cast<std::size_t>(variables[p].cardinality) +
            static_cast<std::size_t>(inst[p]);
    return row;
  }
};

struct ValidationIssue {
  int variable = -1;  // -1: structural issue not tied to one variable
  std::string message;
};

struct ValidationReport {
  std::vector<ValidationIssue> issues;
  bool ok() const { return issues.empty(); }
};

// Topological order with ascending-index tie breaking; empty if cyclic.
inline std::vector<int> topological_order(const BayesNet& net) {
  const int n = net.num_variables();
  std::vector<int> indegree(n, 0);
  for (int v = 0; v < n; ++v)
    indegree[v] = static_cast<int>(net.parents[v].size());
  std::vector<std::vector<int>> children(n);
  for (int v = 0; v < n; ++v)
    for (int p : net.parents[v]) {
      if (p < 0 || p >= n) return {};
      children[p].push_back(v);
    }
  std::vector<int> order;
  std::vector<bool> placed(n, false);
  order.reserve(n);
  for (int step = 0; step < n; ++step) {
    int pick = -1;
    for (int v = 0; v < n; ++v)
      if (!placed[v] && indegree[v] == 0) {
        pick = v;
        break;
      }
    if (pick < 0) return {};  // cycle
    placed[pick] = true;
    order.push_back(pick);
    for (int c : children[pick]) --indegree[c];
  }
  return order;
}

inline ValidationReport validate(const BayesNet& net) {
  ValidationReport report;
  const int n = net.num_variables();
  auto issue = [&report](int v, std::string msg) {
    report.issues.push_back({v, std::move(msg)});
  };
  if (net.parents.size() != static_cast<std::size_t>(n) ||
      net.cpts.size() != static_cast<std::size_t>(n)) {
    issue(-1, "parents/cpts size does not match variable count");
    return report;
  }
  for (int v = 0; v < n; ++v) {
    if (net.variables[v].cardinality < 2) issue(v, "cardinality must be >= 2");
    int prev = -1;
    bool parents_ok = true;
    for (int p : net.parents[v]) {
      if (p < 0 || p >= n) {
        issue(v, "parent index out of range");
        parents_ok = false;
        break;
      }
      if (p == v) {
        issue(v, "variable listed as its own parent");
        parents_ok = false;
        break;
      }
      if (p <= prev) {
        issue(v, "parent list must be strictly ascending");
        parents_ok = false;
        break;
      }
      prev = p;
    }
    if (!parents_ok) continue;
    const std::size_t rows = net.cpt_row_count(v);
    const auto& cpt = net.cpts[v];
    if (cpt.size() != rows) {
      issue(v, "cpt row count does not match parent cardinalities");
      continue;
    }
    const std::size_t card = static_cast<std::size_t>(net.variables[v].cardinality);
    for (std::size_t r = 0; r < cpt.size(); ++r) {
      if (cpt[r].size() != card) {
        issue(v, "cpt row " + std::to_string(r) + " has wrong width");
        continue;
      }
      double sum = 0.0;
      bool entries_ok = true;
      for (double e : cpt[r]) {
        if (!std::isfinite(e) || e < 0.0 || e > 1.0) {
          issue(v, "cpt row " + std::to_string(r) + " entry outside [0, 1]");
          entries_ok = false;
          break;
        }
        sum += e;
      }
      if (entries_ok && std::abs(sum - 1.0) > 1e-9)
        issue(v, "cpt row " + std::to_string(r) + " does not sum to 1");
    }
  }
  if (report.ok() && topological_order(net).empty() && n > 0)
    issue(-1, "parent graph contains a cycle");
  return report;
}

// P(inst) = product over variables of the matching CPT entry.
// Pre: net valid, inst complete with in-range states.
inline double joint_probability(const BayesNet& net, const Instantiation& inst) {
  if (inst.size() != net.variables.size())
    throw std::invalid_argument("joint_probability: instantiation size mismatch");
  double p = 1.0;
  for (int v = 0; v < net.num_variables(); ++v) {
    const int s = inst[v];
    if (s < 0 || s >= net.variables[v].cardinality)
      throw std::invalid_argument("joint_probability: state out of range");
    p *= net.cpts[v][net.parent_row_index(v, inst)][static_cast<std::size_t>(s)];
  }
  return p;
}

inline constexpr std::uint64_t kDefaultEnumerationCap = std::uint64_t{1} << 24;

// Number of joint instantiations, saturating at max uint64.
inline std::uint64_t instantiation_count(const BayesNet& net) {
  std::uint64_t total = 1;
  for (const auto& var : net.variables) {
    const auto card = static_cast<std::uint64_t>(var.cardinality);
    if (total > std::numeric_limits<std::uint64_t>::max() / card)
      return std::numeric_limits<std::uint64_t>::max();
    total *= card;
  }
  return total;
}

// Streams every instantiation in lexicographic state order (variable 0 most
// significant) together with its joint probability.
// Throws CapExceededError when the instantiation count exceeds `cap`.
class InstantiationEnumerator {
 public:
  explicit InstantiationEnumerator(const BayesNet& net,
                                   std::uint64_t cap = kDefaultEnumerationCap)
      : net_(&net), total_(instantiation_count(net)) {
    if (total_ > cap) throw CapExceededError(total_, cap);
    current_.assign(net.variables.size(), 0);
  }

  std::uint64_t total() const { return total_; }

  // Advances to the next instantiation. Returns false when exhausted.
  bool next(Instantiation& inst, double& probability) {
    if (emitted_ == total_) return false;
    inst = current_;
    probability = joint_probability(*net_, current_);
    ++emitted_;
    for (int v = net_->num_variables() - 1; v >= 0; --v) {
      if (++current_[v] < net_->variables[v].cardinality) break;
      current_[v] = 0;
    }
    return true;
  }

 private:
  const BayesNet* net_;
  std::uint64_t total_;
  std::uint64_t emitted_ = 0;
  Instantiation current_;
};

template <typename Fn>
void for_each_instantiation(const BayesNet& net, Fn&& fn,
                            std::uint64_t cap = kDefaultEnumerationCap) {
  InstantiationEnumerator en(net, cap);
  Instantiation inst;
  double p = 0.0;
  while (en.next(inst, p)) fn(inst, p);
}

// Random DAG over `n_vars` variables of equal cardinality. Parents of
// variable i are drawn from {0..i-1}: first a parent count uniform in
// 0..min(i, max_parents), then a uniform subset of that size. CPT rows are
// drawn under `regime` and normalized; rows with sum < 1e-9 are redrawn.
// Deterministic in (arguments, seed).
inline BayesNet random_network(int n_vars, int cardinality, int max_parents,
                               CptRegime regime, std::uint64_t seed) {
  if (n_vars < 1) throw std::invalid_argument("random_network: n_vars must be >= 1");
  if (cardinality < 2)
    throw std::invalid_argument("random_network: cardinality must be >= 2");
  if (max_parents < 0)
    throw std::invalid_argument("random_network: max_parents must be >= 0");
  Rng rng(seed);
  BayesNet net;
  net.variables.resize(static_cast<std::size_t>(n_vars));
  net.parents.resize(static_cast<std::size_t>(n_vars));
  net.cpts.resize(static_cast<std::size_t>(n_vars));
  const auto card = static_cast<std::size_t>(cardinality);
  for (int i = 0; i < n_vars; ++i) {
    net.variables[i] = {"x" + std::to_string(i), cardinality};
    const int limit = std::min(i, max_parents);
    const int k = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(limit) + 1));
    std::vector<int> pool(static_cast<std::size_t>(i));
    std::iota(pool.begin(), pool.end(), 0);
    for (int t = 0; t < k; ++t) {
      const auto r = t + static_cast<int>(rng.next_below(static_cast<std::uint64_t>(i - t)));
      std::swap(pool[t], pool[r]);
    }
    pool.resize(static_cast<std::size_t>(k));
    std::sort(pool.begin(), pool.end());
    net.parents[i] = std::move(pool);
    const std::size_t rows = net.cpt_row_count(i);
    auto& cpt = net.cpts[i];
    cpt.assign(rows, std::vector<double>(card, 0.0));
    for (auto& row : cpt) {
      double sum = 0.0;
      do {
        sum = 0.0;
        for (auto& e : row) {
          double v = rng.next_double();
          if (regime == CptRegime::Extreme)
            v = v < 0.5 ? v * 0.2 : 0.9 + (v - 0.5) * 0.2;
          e = v;
          sum += v;
        }
      } while (sum < 1e-9);
      for (auto& e : row) e /= sum;
    }
  }
  return net;
}

// Forward sampling: draws n complete instantiations in topological order and
// returns their joint probabilities as a discrete-mode sample.
// Deterministic in (net, n, seed).
inline ProbSample logic_sample(const BayesNet& net, int n, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("logic_sample: n must be >= 1");
  const std::vector<int> order = topological_order(net);
  if (order.empty() && net.num_variables() > 0)
    throw std::invalid_argument("logic_sample: network is cyclic");
  Rng rng(seed);
  std::vector<double> probs;
  probs.reserve(static_cast<std::size_t>(n));
  Instantiation inst(net.variables.size(), 0);
  for (int c = 0; c < n; ++c) {
    double p = 1.0;
    for (int v : order) {
      const auto& row = net.cpts[v][net.parent_row_index(v, inst)];
      const double u = rng.next_double();
      double acc = 0.0;
      int state = net.variables[v].cardinality - 1;  // remainder catches rounding
      for (int s = 0; s < net.variables[v].cardinality; ++s) {
        acc += row[static_cast<std::size_t>(s)];
        if (u < acc) {
          state = s;
          break;
        }
      }
      inst[v] = state;
      p *= row[static_cast<std::size_t>(state)];
    }
    probs.push_back(p);
  }
  return ProbSample(std::move(probs), WeightMode::Discrete);
}

// Exact marginals by full enumeration: result[v][s] = P(v = s).
inline std::vector<std::vector<double>> exact_marginals(
    const BayesNet& net, std::uint64_t cap = kDefaultEnumerationCap) {
  std::vector<std::vector<double>> marg(net.variables.size());
  for (int v = 0; v < net.num_variables(); ++v)
    marg[v].assign(static_cast<std::size_t>(net.variables[v].cardinality), 0.0);
  for_each_instantiation(
      net,
      [&marg, &net](const Instantiation& inst, double p) {
        for (int v = 0; v < net.num_variables(); ++v)
          marg[v][static_cast<std::size_t>(inst[v])] += p;
      },
      cap);
  return marg;
}

struct TruncatedMarginals {
  // Unnormalized: sums over only the instantiations with joint p >= p0.
  std::vector<std::vector<double>> marginals;
  double mass_kept = 0.0;
};

// Marginals of the truncated distribution that ignores every instantiation
// with joint probability < p0. The distance of any marginal entry from its
// exact counterpart is at most 1 - mass_kept.
inline TruncatedMarginals truncated_marginals(
    const BayesNet& net, double p0, std::uint64_t cap = kDefaultEnumerationCap) {
  if (!(p0 >= 0.0))
    throw std::invalid_argument("truncated_marginals: p0 must be >= 0");
  TruncatedMarginals out;
  out.marginals.resize(net.variables.size());
  for (int v = 0; v < net.num_variables(); ++v)
    out.marginals[v].assign(static_cast<std::size_t>(net.variables[v].cardinality), 0.0);
  for_each_instantiation(
      net,
      [&out, &net, p0](const Instantiation& inst, double p) {
        if (p < p0) return;
        out.mass_kept += p;
        for (int v = 0; v < net.num_variables(); ++v)
          out.marginals[v][static_cast<std::size_t>(inst[v])] += p;
      },
      cap);
  return out;
}

}  // namespace tailmass
