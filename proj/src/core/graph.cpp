#include "core/graph.hpp"

#include "core/rational.hpp"

#include <algorithm>
#include <cstdlib>
#include <deque>
#include <fstream>
#include <set>
#include <sstream>

namespace ctqw {

int max_vertex_cap() {
  if (const char* env = std::getenv("CTQW_MAX_N")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end && *end == '\0' && v > 0) return static_cast<int>(v);
  }
  return 2000;
}

namespace {

void check_cap(std::int64_t n, const std::string& what) {
  if (n > max_vertex_cap())
    throw std::invalid_argument(what + ": " + std::to_string(n) + " vertices exceeds the cap of " +
                                std::to_string(max_vertex_cap()) + " (set CTQW_MAX_N to override)");
}

bool connected(const Matrix& a) {
  const int n = static_cast<int>(a.rows());
  if (n == 0) return false;
  std::vector<char> seen(n, 0);
  std::deque<int> queue{0};
  seen[0] = 1;
  int count = 1;
  while (!queue.empty()) {
    int v = queue.front();
    queue.pop_front();
    for (int u = 0; u < n; ++u) {
      if (a(v, u) != 0.0 && !seen[u]) {
        seen[u] = 1;
        ++count;
        queue.push_back(u);
      }
    }
  }
  return count == n;
}

// k-subsets of {1..n} in colexicographic order: the rank of {c1<...<ck}
// is sum_i C(c_i - 1, i).
std::vector<std::vector<int>> colex_subsets(int n, int k) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur(k);
  for (int i = 0; i < k; ++i) cur[i] = i + 1;
  while (true) {
    out.push_back(cur);
    int i = 0;
    while (i < k && ((i + 1 < k && cur[i] + 1 == cur[i + 1]) || (i + 1 == k && cur[i] == n))) ++i;
    if (i == k) break;
    ++cur[i];
    for (int j = 0; j < i; ++j) cur[j] = j + 1;
  }
  return out;
}

}  // namespace

Graph::Graph(Matrix a, GraphFamily fam, std::vector<int> params)
    : adjacency_(std::move(a)), family_(fam), params_(std::move(params)) {
  const int n = static_cast<int>(adjacency_.rows());
  if (n <= 0 || adjacency_.cols() != n) throw std::invalid_argument("adjacency must be square and nonempty");
  check_cap(n, "graph");
  for (int i = 0; i < n; ++i) {
    if (adjacency_(i, i) != 0.0) throw std::invalid_argument("self-loop at vertex " + std::to_string(i));
    for (int j = i + 1; j < n; ++j) {
      const double x = adjacency_(i, j);
      if (x != 0.0 && x != 1.0) throw std::invalid_argument("adjacency entries must be 0 or 1");
      if (x != adjacency_(j, i)) throw std::invalid_argument("adjacency must be symmetric");
    }
  }
  if (!connected(adjacency_)) throw std::invalid_argument("graph is disconnected");
}

Graph Graph::johnson(int n, int k) {
  if (k < 1 || k >= n) throw std::invalid_argument("johnson requires 1 <= k < n");
  const BigInt nv = big_binomial(n, k);
  check_cap(nv.convert_to<std::int64_t>(), "johnson(" + std::to_string(n) + "," + std::to_string(k) + ")");
  auto subsets = colex_subsets(n, k);
  const int nn = static_cast<int>(subsets.size());
  Matrix a = Matrix::Zero(nn, nn);
  for (int i = 0; i < nn; ++i) {
    for (int j = i + 1; j < nn; ++j) {
      int common = 0;
      std::size_t p = 0, q = 0;
      while (p < subsets[i].size() && q < subsets[j].size()) {
        if (subsets[i][p] == subsets[j][q]) {
          ++common;
          ++p;
          ++q;
        } else if (subsets[i][p] < subsets[j][q]) {
          ++p;
        } else {
          ++q;
        }
      }
      if (common == k - 1) a(i, j) = a(j, i) = 1.0;
    }
  }
  Graph g(std::move(a), GraphFamily::johnson, {n, k});
  g.subsets_ = std::move(subsets);
  return g;
}

Graph Graph::complete(int n) {
  if (n < 2) throw std::invalid_argument("complete requires n >= 2");
  check_cap(n, "complete");
  Matrix a = Matrix::Ones(n, n) - Matrix::Identity(n, n);
  return Graph(std::move(a), GraphFamily::complete, {n});
}

Graph Graph::complete_bipartite(int pa, int pb) {
  if (pa < 1 || pb < 1) throw std::invalid_argument("complete_bipartite requires positive part sizes");
  check_cap(static_cast<std::int64_t>(pa) + pb, "complete_bipartite");
  const int n = pa + pb;
  Matrix a = Matrix::Zero(n, n);
  for (int i = 0; i < pa; ++i)
    for (int j = pa; j < n; ++j) a(i, j) = a(j, i) = 1.0;
  return Graph(std::move(a), GraphFamily::complete_bipartite, {pa, pb});
}

Graph Graph::hypercube(int d) {
  if (d < 1 || d > 30) throw std::invalid_argument("hypercube requires 1 <= d <= 30");
  const std::int64_t n = std::int64_t{1} << d;
  check_cap(n, "hypercube");
  Matrix a = Matrix::Zero(n, n);
  for (int v = 0; v < n; ++v)
    for (int b = 0; b < d; ++b) a(v, v ^ (1 << b)) = 1.0;
  return Graph(std::move(a), GraphFamily::hypercube, {d});
}

Graph Graph::from_adjacency(Matrix adjacency) {
  return Graph(std::move(adjacency), GraphFamily::custom, {});
}

Graph Graph::from_edge_list(std::istream& in) {
  std::vector<std::pair<int, int>> edges;
  int max_index = -1;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::size_t first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream ls(line);
    long u, v;
    if (!(ls >> u >> v)) throw ParseError("edge list line " + std::to_string(lineno) + ": expected two vertex indices");
    std::string rest;
    if (ls >> rest) throw ParseError("edge list line " + std::to_string(lineno) + ": trailing tokens");
    if (u < 0 || v < 0 || u > max_vertex_cap() || v > max_vertex_cap())
      throw ParseError("edge list line " + std::to_string(lineno) + ": vertex index out of range");
    if (u == v) throw ParseError("edge list line " + std::to_string(lineno) + ": self-loop on vertex " + std::to_string(u));
    edges.emplace_back(static_cast<int>(u), static_cast<int>(v));
    max_index = std::max(max_index, static_cast<int>(std::max(u, v)));
  }
  if (edges.empty()) throw ParseError("edge list is empty");
  const int n = max_index + 1;
  check_cap(n, "edge list");
  Matrix a = Matrix::Zero(n, n);
  for (auto [u, v] : edges) a(u, v) = a(v, u) = 1.0;
  return Graph(std::move(a), GraphFamily::custom, {});
}

Graph Graph::from_edge_list_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open edge list file: " + path);
  return from_edge_list(in);
}

std::string Graph::description() const {
  switch (family_) {
    case GraphFamily::johnson:
      return "johnson(n=" + std::to_string(params_[0]) + ",k=" + std::to_string(params_[1]) + ")";
    case GraphFamily::complete:
      return "complete(n=" + std::to_string(params_[0]) + ")";
    case GraphFamily::complete_bipartite:
      return "complete-bipartite(a=" + std::to_string(params_[0]) + ",b=" + std::to_string(params_[1]) + ")";
    case GraphFamily::hypercube:
      return "hypercube(d=" + std::to_string(params_[0]) + ")";
    case GraphFamily::custom:
      return "custom(N=" + std::to_string(num_vertices()) + ")";
  }
  return "unknown";
}

int Graph::degree(int v) const {
  return static_cast<int>(adjacency_.row(v).sum());
}

int Graph::max_degree() const {
  int d = 0;
  for (int v = 0; v < num_vertices(); ++v) d = std::max(d, degree(v));
  return d;
}

bool Graph::is_regular() const {
  const int d = degree(0);
  for (int v = 1; v < num_vertices(); ++v)
    if (degree(v) != d) return false;
  return true;
}

int Graph::distance(int v1, int v2) const {
  const int n = num_vertices();
  if (v1 < 0 || v1 >= n || v2 < 0 || v2 >= n) throw std::invalid_argument("vertex index out of range");
  if (v1 == v2) return 0;
  std::vector<int> dist(n, -1);
  std::deque<int> queue{v1};
  dist[v1] = 0;
  while (!queue.empty()) {
    int v = queue.front();
    queue.pop_front();
    for (int u = 0; u < n; ++u) {
      if (adjacency_(v, u) != 0.0 && dist[u] < 0) {
        dist[u] = dist[v] + 1;
        if (u == v2) return dist[u];
        queue.push_back(u);
      }
    }
  }
  throw NumericalError("no path between vertices");  // unreachable: graph connected
}

const std::vector<int>& Graph::subset_of(int v) const {
  if (family_ != GraphFamily::johnson) throw std::invalid_argument("subset_of: not a johnson graph");
  if (v < 0 || v >= num_vertices()) throw std::invalid_argument("vertex index out of range");
  return subsets_[v];
}

int Graph::subset_index(std::vector<int> subset) const {
  if (family_ != GraphFamily::johnson) throw std::invalid_argument("subset_index: not a johnson graph");
  std::sort(subset.begin(), subset.end());
  const int k = params_[1];
  if (static_cast<int>(subset.size()) != k) throw std::invalid_argument("subset has wrong size");
  std::int64_t rank = 0;
  for (int i = 0; i < k; ++i) {
    if (subset[i] < 1 || subset[i] > params_[0]) throw std::invalid_argument("subset element out of range");
    if (i > 0 && subset[i] == subset[i - 1]) throw std::invalid_argument("subset elements must be distinct");
    rank += binomial_i64(subset[i] - 1, i + 1);
  }
  return static_cast<int>(rank);
}

JohnsonClosedSpectrum johnson_closed_spectrum(int n, int k) {
  if (k < 1 || k >= n) throw std::invalid_argument("johnson requires 1 <= k < n");
  JohnsonClosedSpectrum s;
  const BigInt total = big_binomial(n, k);
  s.num_vertices = total.convert_to<std::int64_t>();
  // J(n,k) has diameter min(k, n-k) and one distinct eigenvalue per distance
  const int bands = std::min(k, n - k);
  for (int l = 0; l <= bands; ++l) {
    s.phis.push_back(static_cast<double>(k - l) * (n - k - l) - l);
    const BigInt mult = big_binomial(n, l) - big_binomial(n, l - 1);
    s.multiplicities.push_back(mult.convert_to<std::int64_t>());
    s.projector_diagonal.push_back(to_double(BigRational(mult, total)));
  }
  return s;
}

}  // namespace ctqw
