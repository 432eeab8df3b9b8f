#ifndef FLOWCAT_CORNER_MODEL_HPP
#define FLOWCAT_CORNER_MODEL_HPP

#include "flowcat/error.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace flowcat {

struct CornerArrow {
  std::string id;
  int source = -1;
  int target = -1;
  bool identity = false;
};

// Finite category with a codimension functor. Identities are created with
// each object; composites of non-identity arrows come from an explicit table.
class CornerCategory {
 public:
  int add_object(const std::string& id, int codim);
  int add_arrow(const std::string& id, int source, int target);
  // Records g∘f for f: a→b, g: b→c.
  void set_composite(int f, int g, int gf);

  int object_count() const { return static_cast<int>(objects_.size()); }
  const std::string& object_id(int obj) const { return objects_.at(obj).id; }
  int codim(int obj) const { return objects_.at(obj).codim; }
  std::optional<int> find_object(const std::string& id) const;

  int arrow_count() const { return static_cast<int>(arrows_.size()); }
  const CornerArrow& arrow(int a) const { return arrows_.at(a); }
  std::optional<int> find_arrow(const std::string& id) const;
  int identity(int obj) const { return objects_.at(obj).identity; }

  // g∘f, or nullopt if the pair is not composable or the table has no entry.
  std::optional<int> compose(int f, int g) const;
  const std::vector<int>& arrows_into(int obj) const { return objects_.at(obj).in; }
  const std::vector<int>& arrows_out_of(int obj) const { return objects_.at(obj).out; }
  const std::vector<int>& arrows_between(int a, int b) const;

  std::size_t composition_entries() const { return table_.size(); }
  std::vector<std::tuple<int, int, int>> composition_table() const;

 private:
  struct Obj {
    std::string id;
    int codim = 0;
    int identity = -1;
    std::vector<int> in, out;
  };
  static std::uint64_t key(int a, int b) {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) |
           static_cast<std::uint32_t>(b);
  }
  int push_arrow(const std::string& id, int source, int target, bool identity);

  std::vector<Obj> objects_;
  std::vector<CornerArrow> arrows_;
  std::unordered_map<std::string, int> object_index_, arrow_index_;
  std::unordered_map<std::uint64_t, std::vector<int>> between_;
  std::unordered_map<std::uint64_t, int> table_;
  static const std::vector<int> kEmpty;
};

// Objects of P^p are arrows into p; the k-th object corresponds to
// `object_arrow[k]` of the ambient category.
struct Overcategory {
  CornerCategory category;
  std::vector<int> object_arrow;
};

Overcategory overcategory(const CornerCategory& C, int p);
Overcategory overcategory(const CornerCategory& C, const std::string& p);

// Elements are codim-1 arrows into the object (ambient arrow indices).
struct NormalSet {
  std::vector<int> elements;
  std::size_t size() const { return elements.size(); }
};

struct CornerReport {
  bool ok = true;
  std::string first_violation;
  int offending_object = -1;
  int objects_checked = 0;
};

CornerReport is_corner_model(const CornerCategory& C);
// Check for one object only; used by the parallel kernel.
CornerReport check_corner_object(const CornerCategory& C, int p);

NormalSet q_set(const CornerCategory& C, int p);

// Q(q) = Q(p) ⊔ Q_{∂^p}(α) for α: p → q. Boundary elements are the
// factorizations p → b → q with codim b = codim p + 1, stored as (p→b, b→q).
struct ArrowDecomposition {
  NormalSet source_part;
  std::vector<std::pair<int, int>> boundary_part;
  std::vector<int> source_image;    // element of Q(q) for each source_part entry
  std::vector<int> boundary_image;  // element of Q(q) for each boundary_part entry
};

ArrowDecomposition decompose_arrow(const CornerCategory& C, int alpha);

// Associativity of the composition table and codim functoriality.
Report validate_category(const CornerCategory& C);

// Face poset of Δⁿ with codim(k-face) = n − k; arrow σ → τ iff τ ⊆ σ.
CornerCategory simplex_face_category(int n);

nlohmann::json corner_to_json(const CornerCategory& C);
CornerCategory corner_from_json(const nlohmann::json& j);
std::string corner_to_dot(const CornerCategory& C);

}  // namespace flowcat

#endif
