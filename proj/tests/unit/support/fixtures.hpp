#ifndef FLOWCAT_TEST_FIXTURES_HPP
#define FLOWCAT_TEST_FIXTURES_HPP

#include "flowcat/flow_data.hpp"
#include "flowcat/morse.hpp"

#include <fstream>

namespace flowcat::testing {

inline Component comp(std::string id, std::string s, std::string t, int td, long long count = 0) {
  Component c;
  c.id = std::move(id);
  c.source = std::move(s);
  c.target = std::move(t);
  c.total_dim = td;
  c.count = count;
  return c;
}

inline void add_break(Component& c, int vertex, const std::string& q, std::vector<std::string> parts, int sign = 1) {
  for (auto& f : c.facets)
    if (f.kind == FacetKind::Break && f.vertex == vertex && f.object == q) {
      f.entries.push_back({std::move(parts), sign, 0});
      return;
    }
  c.facets.push_back({FacetKind::Break, vertex, q, {{std::move(parts), sign, 0}}});
}

// p(2) → q1, q2 (1) → r(0) with a square: d² = 0 with a 1-dimensional
// component of (p, r) bounded by both broken paths.
inline FlowCategory square_category() {
  FlowCategory F = make_category({{"p", {2, 0}, 2}, {"q1", {1, 0}, 1}, {"q2", {1, 0}, 1}, {"r", {0, 0}, 0}});
  auto& cs = F.cells[1];
  cs.push_back(comp("pq1", "p", "q1", 0, 1));
  cs.push_back(comp("pq2", "p", "q2", 0, 1));
  cs.push_back(comp("q1r", "q1", "r", 0, 1));
  cs.push_back(comp("q2r", "q2", "r", 0, -1));
  Component m = comp("pr", "p", "r", 1);
  add_break(m, 0, "q1", {"pq1", "q1r"});
  add_break(m, 0, "q2", {"pq2", "q2r"});
  cs.push_back(m);
  canonicalize(F);
  return F;
}

// a(1) → b, c (0): an interval.
inline FlowCategory interval_category() {
  FlowCategory F = make_category({{"a", {1, 0}, 1}, {"b", {0, 0}, 0}, {"c", {0, 0}, 0}});
  F.cells[1].push_back(comp("ab", "a", "b", 0, 1));
  F.cells[1].push_back(comp("ac", "a", "c", 0, -1));
  canonicalize(F);
  return F;
}

inline nlohmann::json load_data(const std::string& rel) {
  std::ifstream in(std::string(FLOWCAT_TEST_DATA) + "/" + rel);
  if (!in) throw Error("missing test data " + rel);
  return nlohmann::json::parse(in);
}

inline SimplicialComplex load_complex(const std::string& name) {
  return parse_complex(load_data("complexes/" + name + ".json"));
}

inline const std::vector<std::string>& complex_corpus() {
  static const std::vector<std::string> names{"point", "s1", "s2", "torus", "rp2", "klein", "solid_tetra"};
  return names;
}

}  // namespace flowcat::testing

#endif
