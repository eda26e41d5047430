#pragma once

#include <array>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "crg/matrix.hpp"

namespace crg {

struct GroupSpec {
  enum class Kind { Imprimitive, Exceptional, Explicit };
  Kind kind = Kind::Imprimitive;
  uint32_t m = 1, p = 1, r = 1;  // G(m,p,r), p | m
  int st = 0;                    // Shephard-Todd number
  std::vector<CycMatrix> generators;
  std::string label;

  static GroupSpec imprimitive(uint32_t m, uint32_t p, uint32_t r);
  static GroupSpec exceptional(int st);
  static GroupSpec explicit_group(std::vector<CycMatrix> gens, std::string label);
  // accepts "G(m,p,r)" and "ST<n>"
  static GroupSpec parse(const std::string& text);
  std::string format() const;
};

// Monomial matrix in exponent form: column j carries zeta_m^phase[j] into row
// perm[j]. All group operations on these are small-integer arithmetic.
struct Monomial {
  static constexpr uint32_t kMaxRank = 8;
  uint8_t r = 0;
  std::array<uint8_t, kMaxRank> perm{};
  std::array<uint16_t, kMaxRank> phase{};

  static Monomial identity(uint32_t rank);
  Monomial compose(const Monomial& rhs, uint32_t m) const;  // this * rhs
  Monomial inverse(uint32_t m) const;
  bool is_identity() const;
  bool operator==(const Monomial& o) const;
  bool operator<(const Monomial& o) const;
};

struct MonomialHash {
  std::size_t operator()(const Monomial& g) const;
};

class ReflectionGroup;
using GroupPtr = std::shared_ptr<const ReflectionGroup>;

class ReflectionGroup {
 public:
  static constexpr uint64_t kDefaultCap = 10000;

  static GroupPtr build(const GroupSpec& spec, uint64_t cap = kDefaultCap);
  // subgroup on a subset of parent's elements (must be closed); shares the
  // parent's ambient conductor
  static GroupPtr subgroup(const ReflectionGroup& parent, std::vector<uint32_t> indices,
                           std::string label);

  const GroupSpec& spec() const { return spec_; }
  uint32_t rank() const { return rank_; }
  uint64_t order() const { return size_; }
  uint32_t conductor() const { return ambient_; }
  uint64_t exponent() const { return exponent_; }
  bool is_monomial() const { return monomial_backend_; }
  // phase modulus of the monomial backend (divides the ambient conductor)
  uint32_t phase_modulus() const { return conductor_m_; }
  uint32_t identity_index() const { return identity_; }

  CycMatrix matrix(uint32_t i) const;
  const Monomial& monomial(uint32_t i) const { return mono_[i]; }

  uint32_t mul(uint32_t i, uint32_t j) const;
  uint32_t inv(uint32_t i) const { return inverse_[i]; }
  uint32_t conjugate(uint32_t g, uint32_t x) const;  // g x g^-1
  std::optional<uint32_t> find(const CycMatrix& m) const;
  std::optional<uint32_t> find_monomial(const Monomial& m) const;

  int fix_dim(uint32_t i) const { return fix_[i]; }
  uint64_t element_order(uint32_t i) const { return order_[i]; }
  UPoly char_poly(uint32_t i) const;  // det(1 - x g) at ambient conductor
  // eigenvalue multiset as (exponent of zeta_ambient, multiplicity)
  const std::vector<std::pair<uint32_t, int>>& eigen_exponents(uint32_t i) const;

  const std::vector<uint32_t>& generator_indices() const { return gens_; }
  const std::vector<uint32_t>& reflections() const { return reflections_; }
  // conjugacy classes of reflections, canonically ordered
  const std::vector<std::vector<uint32_t>>& reflection_classes() const;

  struct HyperplaneOrbit {
    uint32_t hyperplane_count = 0;
    std::vector<uint32_t> reflections;  // all reflections fixing a hyperplane in the orbit
  };
  const std::vector<HyperplaneOrbit>& hyperplane_orbits() const;

  // closure of a seed set inside this group, as sorted element indices
  std::vector<uint32_t> close_subgroup(std::vector<uint32_t> seed) const;
  // conjugation-closure check
  bool is_normal_subset(const std::vector<uint32_t>& sorted_indices) const;

  // entrywise Galois twist; element i of the result is sigma_k(element i)
  GroupPtr twist(long k) const;
  // true when sigma_k maps the element set onto itself for every unit k
  bool galois_stable() const;

  bool same_element_set(const ReflectionGroup& o) const;

  // degrees cache owned here, computed by invariant-theory
  std::optional<std::vector<int>> cached_degrees() const;
  void cache_degrees(std::vector<int> d) const;

  // expected data for exceptional groups, asserted at load
  struct Expected {
    uint64_t order = 0;
    std::vector<int> degrees;
    uint32_t reflections = 0;
  };
  const std::optional<Expected>& expected() const { return expected_; }

 private:
  ReflectionGroup() = default;
  void finalize();  // sort canonically, index, fix dims, orders, reflections
  void build_monomial_list(uint64_t cap);
  void closure_from_generators(const std::vector<CycMatrix>& gens, uint64_t cap);

  GroupSpec spec_;
  uint32_t rank_ = 0;
  uint32_t conductor_m_ = 1;  // phase modulus of the monomial backend
  uint32_t ambient_ = 1;
  uint64_t exponent_ = 1;
  uint64_t size_ = 0;
  bool monomial_backend_ = false;
  uint32_t identity_ = 0;

  std::vector<Monomial> mono_;
  std::vector<CycMatrix> mats_;
  std::unordered_map<Monomial, uint32_t, MonomialHash> mono_index_;
  std::unordered_map<CycMatrix, uint32_t, CycMatrixHash> mat_index_;

  std::vector<uint32_t> gens_;
  std::vector<uint32_t> inverse_;
  std::vector<int> fix_;
  std::vector<uint64_t> order_;
  std::vector<uint32_t> reflections_;
  std::optional<Expected> expected_;

  struct LazyCaches;
  std::unique_ptr<LazyCaches> lazy_;
};

// The ten supported exceptional groups, from embedded JSON data files.
const std::vector<int>& supported_st_numbers();

}  // namespace crg
