#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "bslimit/canonical.hpp"
#include "bslimit/coloring.hpp"
#include "bslimit/error.hpp"
#include "bslimit/graph.hpp"
#include "bslimit/rational.hpp"

namespace bslimit {

/// Empirical distribution of r-ball classes of one graph: the counts
/// |T(G, A)| (or tau(G, A) for colored types) and exact frequencies.
struct TypeDistribution {
  int radius = 0;
  int vertex_count = 0;
  int degree_bound = 1;
  bool colored = false;
  std::map<std::string, std::int64_t> counts;  // canonical code -> count

  std::int64_t count(const std::string& code) const {
    auto it = counts.find(code);
    return it == counts.end() ? 0 : it->second;
  }

  Rational frequency(const std::string& code) const { return Rational(count(code), vertex_count); }

  std::int64_t total() const {
    std::int64_t s = 0;
    for (const auto& [c, k] : counts) s += k;
    return s;
  }

  friend bool operator==(const TypeDistribution&, const TypeDistribution&) = default;
};

/// Colored types of every vertex for radii 0..depth: `types[r][v]`.
/// One colored ball of the largest radius is extracted per vertex and the
/// smaller radii are cut out of it.
inline std::vector<std::vector<ColoredType>> vertex_types(const Graph& g, const ColoringBundle& b, int depth) {
  if (b.depth < depth) throw ValidationError("coloring bundle depth " + std::to_string(b.depth) + " < " +
                                             std::to_string(depth));
  std::vector<std::vector<ColoredType>> types(depth + 1, std::vector<ColoredType>(g.vertex_count()));
  for (Vertex v = 0; v < g.vertex_count(); ++v) {
    ColoredBall full = colored_ball(g, b, v, depth);
    types[depth][v] = canonical_code(full);
    for (int r = 0; r < depth; ++r)
      types[r][v] = canonical_code(colored_sub_ball(full, RootedBall::root(), r, r));
  }
  return types;
}

/// Distribution of r-ball classes; colored when a bundle is supplied.
inline TypeDistribution distribution(const Graph& g, int r, const ColoringBundle* bundle = nullptr) {
  if (r < 0) throw ValidationError("distribution: negative radius");
  if (bundle && bundle->depth < r)
    throw ValidationError("coloring bundle depth " + std::to_string(bundle->depth) + " < radius " +
                          std::to_string(r));
  TypeDistribution dist;
  dist.radius = r;
  dist.vertex_count = g.vertex_count();
  dist.degree_bound = g.degree_bound();
  dist.colored = bundle != nullptr;
  // Tree balls dominate sparse graphs and are the expensive case for the
  // search; their certificate is a complete invariant, so codes are reused.
  std::unordered_map<std::string, std::string> tree_codes;
  for (Vertex v = 0; v < g.vertex_count(); ++v) {
    if (bundle) {
      ++dist.counts[colored_type(g, *bundle, v, r).code];
      continue;
    }
    RootedBall ball = extract_ball(g, v, r);
    auto cert = tree_certificate(ball);
    if (!cert) {
      ++dist.counts[canonical_code(ball).code];
      continue;
    }
    auto it = tree_codes.find(*cert);
    if (it == tree_codes.end()) it = tree_codes.emplace(std::move(*cert), canonical_code(ball).code).first;
    ++dist.counts[it->second];
  }
  return dist;
}

/// Total variation distance (1/2) sum |p - q| over the union of supports.
inline Rational tv_distance(const TypeDistribution& p, const TypeDistribution& q) {
  if (p.radius != q.radius || p.colored != q.colored || p.degree_bound != q.degree_bound)
    throw ValidationError("tv_distance: distributions differ in radius, colored flag or degree bound");
  if (p.vertex_count == 0 || q.vertex_count == 0) throw ValidationError("tv_distance: empty distribution");
  Rational sum = 0;
  auto pi = p.counts.begin();
  auto qi = q.counts.begin();
  while (pi != p.counts.end() || qi != q.counts.end()) {
    Rational a = 0, b = 0;
    if (qi == q.counts.end() || (pi != p.counts.end() && pi->first < qi->first)) {
      a = Rational(pi->second, p.vertex_count);
      ++pi;
    } else if (pi == p.counts.end() || qi->first < pi->first) {
      b = Rational(qi->second, q.vertex_count);
      ++qi;
    } else {
      a = Rational(pi->second, p.vertex_count);
      b = Rational(qi->second, q.vertex_count);
      ++pi;
      ++qi;
    }
    sum += a > b ? a - b : b - a;
  }
  return sum / 2;
}

/// Pushes a colored distribution forward along underlying_class.
inline TypeDistribution aggregate_by_underlying(const TypeDistribution& colored) {
  if (!colored.colored) throw ValidationError("aggregate_by_underlying: distribution is not colored");
  TypeDistribution out{colored.radius, colored.vertex_count, colored.degree_bound, false, {}};
  for (const auto& [code, k] : colored.counts)
    out.counts[underlying_class(ColoredType{code, colored.radius, colored.degree_bound}).code] += k;
  return out;
}

/// Pushes a radius-r colored distribution forward along restrict_type.
inline TypeDistribution aggregate_by_restriction(const TypeDistribution& colored) {
  if (!colored.colored || colored.radius < 1)
    throw ValidationError("aggregate_by_restriction: needs a colored distribution of radius >= 1");
  TypeDistribution out{colored.radius - 1, colored.vertex_count, colored.degree_bound, true, {}};
  for (const auto& [code, k] : colored.counts)
    out.counts[restrict_type(ColoredType{code, colored.radius, colored.degree_bound}).code] += k;
  return out;
}

/// Per-radius convergence diagnostics across a graph sequence.
struct RadiusVerdict {
  int radius = 0;
  bool colored = false;
  std::vector<Rational> tv;  // TV between consecutive graphs
  bool converged = false;
};

struct SequenceReport {
  int depth = 0;
  Rational epsilon;
  std::vector<std::vector<TypeDistribution>> distributions;          // [graph][r-1]
  std::vector<std::vector<TypeDistribution>> colored_distributions;  // empty unless bundles given
  std::vector<RadiusVerdict> verdicts;                               // uncolored, then colored
};

/// Decision rule over k graphs with TV distances t_1..t_{k-1}: the last
/// distance must be <= eps, and inside the tail window of the last ceil(k/2)
/// distances every entry is <= eps or no smaller than its successor.
inline bool converged_by_rule(const std::vector<Rational>& tv, const Rational& eps, std::size_t sequence_length) {
  if (tv.empty()) return false;
  const std::size_t m = tv.size();
  const std::size_t window = std::min(m, (sequence_length + 1) / 2);
  if (tv.back() > eps) return false;
  for (std::size_t j = m - window; j < m; ++j)
    if (tv[j] > eps && !(j + 1 < m && tv[j] >= tv[j + 1])) return false;
  return true;
}

inline SequenceReport analyze_sequence(const std::vector<Graph>& graphs, int depth, const Rational& epsilon,
                                       const std::vector<ColoringBundle>* bundles = nullptr) {
  if (graphs.size() < 2) throw ValidationError("analyze_sequence: need at least two graphs");
  if (depth < 1) throw ValidationError("analyze_sequence: depth must be >= 1");
  if (epsilon <= 0) throw ValidationError("analyze_sequence: epsilon must be positive");
  for (const auto& g : graphs)
    if (g.degree_bound() != graphs.front().degree_bound())
      throw ValidationError("analyze_sequence: graphs have different degree bounds (" +
                            std::to_string(graphs.front().degree_bound()) + " vs " +
                            std::to_string(g.degree_bound()) + ")");
  if (bundles && bundles->size() != graphs.size())
    throw ValidationError("analyze_sequence: one coloring bundle per graph required");

  SequenceReport rep;
  rep.depth = depth;
  rep.epsilon = epsilon;
  for (std::size_t i = 0; i < graphs.size(); ++i) {
    std::vector<TypeDistribution> row, crow;
    for (int r = 1; r <= depth; ++r) {
      row.push_back(distribution(graphs[i], r));
      if (bundles) crow.push_back(distribution(graphs[i], r, &(*bundles)[i]));
    }
    rep.distributions.push_back(std::move(row));
    if (bundles) rep.colored_distributions.push_back(std::move(crow));
  }
  auto verdicts_for = [&](const std::vector<std::vector<TypeDistribution>>& dists, bool colored) {
    for (int r = 1; r <= depth; ++r) {
      RadiusVerdict v{r, colored, {}, false};
      for (std::size_t i = 1; i < dists.size(); ++i) v.tv.push_back(tv_distance(dists[i - 1][r - 1], dists[i][r - 1]));
      v.converged = converged_by_rule(v.tv, epsilon, graphs.size());
      rep.verdicts.push_back(std::move(v));
    }
  };
  verdicts_for(rep.distributions, false);
  if (bundles) verdicts_for(rep.colored_distributions, true);
  return rep;
}

}  // namespace bslimit
