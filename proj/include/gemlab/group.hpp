#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "gemlab/random.hpp"

namespace gemlab {

enum class GroupKind { zmod, xor_bits, sym, dihedral, prod };

/// An element of some finite group, held as its canonical byte encoding.
///
/// Only meaningful relative to the GroupHandle that produced it. Two elements
/// of the same group are equal iff their payloads are byte-equal.
struct Element {
  std::string bytes;

  friend bool operator==(const Element&, const Element&) = default;
  friend auto operator<=>(const Element&, const Element&) = default;
};

struct ElementHash {
  std::size_t operator()(const Element& e) const noexcept {
    return std::hash<std::string>{}(e.bytes);
  }
};

using ElementSet = std::unordered_set<Element, ElementHash>;
template <class V>
using ElementMap = std::unordered_map<Element, V, ElementHash>;

/// Groups larger than this cannot be enumerated; use lazy sampling instead.
inline constexpr std::uint64_t kEnumerationCap = std::uint64_t{1} << 20;

/// Immutable description of a finite group from the family
/// zmod:n, xor:n, sym:m, dihedral:m and prod:(A,B).
///
/// Handles are cheap to copy and safe to share between threads; every
/// operation is pure.
///
/// Canonical encodings:
///   zmod:n      fixed-width big-endian residue (minimal width for n-1)
///   xor:n       raw bits, big-endian, ceil(n/8) bytes, unused high bits zero
///   sym:m       image tuple, one byte per point (points are 0-based)
///   dihedral:m  big-endian rotation index followed by one reflection byte
///   prod:(A,B)  u16 length prefix + A payload, u16 length prefix + B payload
///
/// Permutations compose right to left: (a*b)(i) = a(b(i)).
/// Dihedral elements are r^rot s^refl with s r = r^-1 s.
class GroupHandle {
 public:
  static GroupHandle zmod(std::uint64_t n);
  static GroupHandle xor_bits(unsigned bits);
  static GroupHandle sym(unsigned points);
  static GroupHandle dihedral(std::uint64_t m);
  static GroupHandle product(const GroupHandle& left, const GroupHandle& right);

  GroupKind kind() const;
  /// Kind-specific size parameter (n, bits, points, m); 0 for prod.
  std::uint64_t parameter() const;
  std::uint64_t order() const;
  /// Canonical spec text, e.g. "prod:(zmod:5,sym:3)".
  std::string spec() const;
  bool is_abelian() const;
  /// Byte length of every valid payload.
  std::size_t encoded_width() const;
  const GroupHandle& left_factor() const;
  const GroupHandle& right_factor() const;

  Element identity() const;
  Element op(const Element& a, const Element& b) const;
  Element inv(const Element& a) const;
  bool contains(const Element& a) const;

  /// Uniform element; exact (no modulo bias).
  Element sample(Rng& rng) const;

  /// All elements in canonical order (ascending payload bytes).
  std::vector<Element> enumerate(std::uint64_t cap = kEnumerationCap) const;
  /// The element at position `index` of the canonical order.
  Element element_at(std::uint64_t index) const;
  std::uint64_t index_of(const Element& a) const;

  std::string encode(const Element& a) const;
  /// Inverse of encode; rejects anything that is not a canonical payload.
  Element decode(std::string_view bytes) const;

  /// Human-readable form: residues, hex bit strings, cycle notation, r^i s^j.
  std::string format(const Element& a) const;

  // Kind-specific constructors and accessors.
  Element from_integer(std::uint64_t value) const;  // zmod, xor
  std::uint64_t to_integer(const Element& a) const;   // zmod, xor
  Element from_images(std::span<const unsigned> images) const;  // sym, 0-based
  Element from_rotation(std::uint64_t rotation, bool reflection) const;  // dihedral
  Element join(const Element& left, const Element& right) const;          // prod
  std::pair<Element, Element> split(const Element& a) const;               // prod

  /// Structural equality (same canonical spec).
  friend bool operator==(const GroupHandle& a, const GroupHandle& b);

  struct Node;

 private:
  explicit GroupHandle(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  const Node& node() const { return *node_; }
  void require(const Element& a, const char* what) const;

  std::shared_ptr<const Node> node_;
};

/// Parses `zmod:<n>`, `xor:<n>`, `sym:<m>`, `dihedral:<m>` or
/// `prod:(<spec>,<spec>)` with decimal parameters >= 2.
GroupHandle parse_group_spec(std::string_view spec);

}  // namespace gemlab
