#include "gemlab/group.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <numeric>
#include <sstream>

#include "gemlab/errors.hpp"

namespace gemlab {

namespace {

constexpr unsigned kMaxSymPoints = 255;

std::size_t byte_width(std::uint64_t max_value) {
  std::size_t w = 1;
  while (w < 8 && (max_value >> (8 * w)) != 0) ++w;
  return w;
}

std::uint64_t read_be(std::string_view s) {
  std::uint64_t v = 0;
  for (unsigned char c : s) v = (v << 8) | c;
  return v;
}

void write_be(std::string& out, std::uint64_t v, std::size_t width) {
  for (std::size_t i = width; i-- > 0;) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b, std::string_view what) {
  std::uint64_t r = 0;
  if (__builtin_mul_overflow(a, b, &r)) {
    throw CapacityError("order of " + std::string(what) + " does not fit in 64 bits");
  }
  return r;
}

}  // namespace

struct GroupHandle::Node {
  GroupKind kind{};
  std::uint64_t param = 0;
  std::uint64_t order = 0;
  std::size_t width = 0;
  std::size_t rot_width = 0;  // dihedral only
  std::string spec;
  bool abelian = false;
  std::vector<GroupHandle> factors;  // prod only

  std::string_view left_part(std::string_view p) const {
    return p.substr(2, factors[0].encoded_width());
  }
  std::string_view right_part(std::string_view p) const {
    return p.substr(4 + factors[0].encoded_width());
  }

  bool valid(std::string_view p) const {
    if (p.size() != width) return false;
    switch (kind) {
      case GroupKind::zmod:
        return read_be(p) < param;
      case GroupKind::xor_bits:
        return param >= 64 || read_be(p) < (std::uint64_t{1} << param);
      case GroupKind::sym: {
        std::vector<bool> seen(param, false);
        for (unsigned char c : p) {
          if (c >= param || seen[c]) return false;
          seen[c] = true;
        }
        return true;
      }
      case GroupKind::dihedral: {
        const auto refl = static_cast<unsigned char>(p.back());
        return read_be(p.substr(0, rot_width)) < param && refl <= 1;
      }
      case GroupKind::prod: {
        const auto wa = factors[0].encoded_width();
        const auto wb = factors[1].encoded_width();
        if (read_be(p.substr(0, 2)) != wa || read_be(p.substr(2 + wa, 2)) != wb) return false;
        return factors[0].node().valid(left_part(p)) && factors[1].node().valid(right_part(p));
      }
    }
    return false;
  }

  std::string make_pair(std::string_view a, std::string_view b) const {
    std::string out;
    out.reserve(width);
    write_be(out, a.size(), 2);
    out.append(a);
    write_be(out, b.size(), 2);
    out.append(b);
    return out;
  }

  std::string dihedral_elem(std::uint64_t rot, bool refl) const {
    std::string out;
    out.reserve(width);
    write_be(out, rot, rot_width);
    out.push_back(refl ? 1 : 0);
    return out;
  }

  std::string identity() const {
    switch (kind) {
      case GroupKind::zmod:
      case GroupKind::xor_bits:
        return std::string(width, '\0');
      case GroupKind::sym: {
        std::string out(width, '\0');
        for (std::size_t i = 0; i < width; ++i) out[i] = static_cast<char>(i);
        return out;
      }
      case GroupKind::dihedral:
        return std::string(width, '\0');
      case GroupKind::prod:
        return make_pair(factors[0].node().identity(), factors[1].node().identity());
    }
    return {};
  }

  std::string op(std::string_view a, std::string_view b) const {
    std::string out;
    switch (kind) {
      case GroupKind::zmod: {
        const std::uint64_t x = read_be(a);
        const std::uint64_t y = read_be(b);
        // x + y mod n without overflow.
        const std::uint64_t r = (x >= param - y) ? x - (param - y) : x + y;
        write_be(out, r, width);
        return out;
      }
      case GroupKind::xor_bits:
        out.resize(width);
        for (std::size_t i = 0; i < width; ++i) out[i] = static_cast<char>(a[i] ^ b[i]);
        return out;
      case GroupKind::sym:
        out.resize(width);
        for (std::size_t i = 0; i < width; ++i) {
          out[i] = a[static_cast<unsigned char>(b[i])];
        }
        return out;
      case GroupKind::dihedral: {
        const std::uint64_t ra = read_be(a.substr(0, rot_width));
        const std::uint64_t rb = read_be(b.substr(0, rot_width));
        const bool sa = a.back() != 0;
        const bool sb = b.back() != 0;
        // r^ra s^sa r^rb s^sb = r^(ra +- rb) s^(sa xor sb)
        const std::uint64_t rb_eff = sa ? (rb == 0 ? 0 : param - rb) : rb;
        const std::uint64_t r = (ra >= param - rb_eff) ? ra - (param - rb_eff) : ra + rb_eff;
        return dihedral_elem(r, sa != sb);
      }
      case GroupKind::prod:
        return make_pair(factors[0].node().op(left_part(a), left_part(b)),
                         factors[1].node().op(right_part(a), right_part(b)));
    }
    return out;
  }

  std::string inv(std::string_view a) const {
    std::string out;
    switch (kind) {
      case GroupKind::zmod: {
        const std::uint64_t x = read_be(a);
        write_be(out, x == 0 ? 0 : param - x, width);
        return out;
      }
      case GroupKind::xor_bits:
        return std::string(a);
      case GroupKind::sym:
        out.resize(width);
        for (std::size_t i = 0; i < width; ++i) {
          out[static_cast<unsigned char>(a[i])] = static_cast<char>(i);
        }
        return out;
      case GroupKind::dihedral: {
        const std::uint64_t r = read_be(a.substr(0, rot_width));
        if (a.back() != 0) return std::string(a);  // reflections are involutions
        return dihedral_elem(r == 0 ? 0 : param - r, false);
      }
      case GroupKind::prod:
        return make_pair(factors[0].node().inv(left_part(a)), factors[1].node().inv(right_part(a)));
    }
    return out;
  }

  std::string sample(Rng& rng) const {
    std::string out;
    switch (kind) {
      case GroupKind::zmod:
        write_be(out, rng.below(param), width);
        return out;
      case GroupKind::xor_bits: {
        const std::uint64_t mask =
            param >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << param) - 1;
        write_be(out, rng.next() & mask, width);
        return out;
      }
      case GroupKind::sym: {
        out = identity();
        // Fisher-Yates over unbiased bounded draws.
        for (std::size_t i = width; i > 1; --i) {
          const auto j = static_cast<std::size_t>(rng.below(i));
          std::swap(out[i - 1], out[j]);
        }
        return out;
      }
      case GroupKind::dihedral: {
        const std::uint64_t r = rng.below(param);
        return dihedral_elem(r, rng.coin());
      }
      case GroupKind::prod: {
        auto a = factors[0].node().sample(rng);
        auto b = factors[1].node().sample(rng);
        return make_pair(a, b);
      }
    }
    return out;
  }

  std::string element_at(std::uint64_t index) const {
    std::string out;
    switch (kind) {
      case GroupKind::zmod:
      case GroupKind::xor_bits:
        write_be(out, index, width);
        return out;
      case GroupKind::sym: {
        // Lexicographic unranking via the factorial number system.
        std::vector<unsigned char> pool(width);
        std::iota(pool.begin(), pool.end(), 0);
        std::vector<std::uint64_t> fact(width, 1);
        for (std::size_t i = 1; i < width; ++i) fact[i] = fact[i - 1] * i;
        for (std::size_t i = 0; i < width; ++i) {
          const std::uint64_t f = fact[width - 1 - i];
          const std::uint64_t digit = index / f;
          index %= f;
          out.push_back(static_cast<char>(pool[digit]));
          pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(digit));
        }
        return out;
      }
      case GroupKind::dihedral:
        return dihedral_elem(index / 2, (index % 2) != 0);
      case GroupKind::prod: {
        const std::uint64_t nb = factors[1].order();
        return make_pair(factors[0].node().element_at(index / nb),
                         factors[1].node().element_at(index % nb));
      }
    }
    return out;
  }

  std::uint64_t index_of(std::string_view p) const {
    switch (kind) {
      case GroupKind::zmod:
      case GroupKind::xor_bits:
        return read_be(p);
      case GroupKind::sym: {
        std::uint64_t rank = 0;
        for (std::size_t i = 0; i < width; ++i) {
          std::uint64_t smaller = 0;
          for (std::size_t j = i + 1; j < width; ++j) {
            if (static_cast<unsigned char>(p[j]) < static_cast<unsigned char>(p[i])) ++smaller;
          }
          rank = rank * (width - i) + smaller;
        }
        return rank;
      }
      case GroupKind::dihedral:
        return read_be(p.substr(0, rot_width)) * 2 + (p.back() != 0 ? 1 : 0);
      case GroupKind::prod:
        return factors[0].node().index_of(left_part(p)) * factors[1].order() +
               factors[1].node().index_of(right_part(p));
    }
    return 0;
  }

  std::string format(std::string_view p) const {
    std::ostringstream os;
    switch (kind) {
      case GroupKind::zmod:
        os << read_be(p);
        break;
      case GroupKind::xor_bits: {
        static constexpr char kHex[] = "0123456789abcdef";
        os << "0x";
        for (unsigned char c : p) os << kHex[c >> 4] << kHex[c & 0xf];
        break;
      }
      case GroupKind::sym: {
        std::vector<bool> seen(width, false);
        bool any = false;
        for (std::size_t start = 0; start < width; ++start) {
          if (seen[start] || static_cast<unsigned char>(p[start]) == start) continue;
          any = true;
          os << '(';
          std::size_t i = start;
          bool first = true;
          while (!seen[i]) {
            seen[i] = true;
            if (!first) os << ' ';
            os << i + 1;
            first = false;
            i = static_cast<unsigned char>(p[i]);
          }
          os << ')';
        }
        if (!any) os << "()";
        break;
      }
      case GroupKind::dihedral:
        os << "r^" << read_be(p.substr(0, rot_width)) << " s^" << (p.back() != 0 ? 1 : 0);
        break;
      case GroupKind::prod:
        os << '(' << factors[0].node().format(left_part(p)) << ", "
           << factors[1].node().format(right_part(p)) << ')';
        break;
    }
    return os.str();
  }
};

namespace {

std::shared_ptr<GroupHandle::Node> new_node(GroupKind kind, std::uint64_t param) {
  auto n = std::make_shared<GroupHandle::Node>();
  n->kind = kind;
  n->param = param;
  return n;
}

}  // namespace

GroupHandle GroupHandle::zmod(std::uint64_t n) {
  if (n < 2) throw ParseError("zmod modulus must be at least 2, got " + std::to_string(n));
  auto node = new_node(GroupKind::zmod, n);
  node->order = n;
  node->width = byte_width(n - 1);
  node->abelian = true;
  node->spec = "zmod:" + std::to_string(n);
  return GroupHandle(std::move(node));
}

GroupHandle GroupHandle::xor_bits(unsigned bits) {
  if (bits < 1) throw ParseError("xor width must be at least 1 bit");
  if (bits > 63) throw CapacityError("xor:" + std::to_string(bits) + " has order above 2^63");
  auto node = new_node(GroupKind::xor_bits, bits);
  node->order = std::uint64_t{1} << bits;
  node->width = (bits + 7) / 8;
  node->abelian = true;
  node->spec = "xor:" + std::to_string(bits);
  return GroupHandle(std::move(node));
}

GroupHandle GroupHandle::sym(unsigned points) {
  if (points < 2) throw ParseError("sym degree must be at least 2, got " + std::to_string(points));
  if (points > kMaxSymPoints) {
    throw CapacityError("sym degree above " + std::to_string(kMaxSymPoints) + " cannot be encoded");
  }
  auto node = new_node(GroupKind::sym, points);
  std::uint64_t order = 1;
  for (unsigned i = 2; i <= points; ++i) order = checked_mul(order, i, "sym:" + std::to_string(points));
  node->order = order;
  node->width = points;
  node->abelian = points <= 2;
  node->spec = "sym:" + std::to_string(points);
  return GroupHandle(std::move(node));
}

GroupHandle GroupHandle::dihedral(std::uint64_t m) {
  if (m < 2) throw ParseError("dihedral degree must be at least 2, got " + std::to_string(m));
  auto node = new_node(GroupKind::dihedral, m);
  node->order = checked_mul(m, 2, "dihedral:" + std::to_string(m));
  node->rot_width = byte_width(m - 1);
  node->width = node->rot_width + 1;
  node->abelian = m <= 2;
  node->spec = "dihedral:" + std::to_string(m);
  return GroupHandle(std::move(node));
}

GroupHandle GroupHandle::product(const GroupHandle& left, const GroupHandle& right) {
  auto node = new_node(GroupKind::prod, 0);
  node->spec = "prod:(" + left.spec() + "," + right.spec() + ")";
  node->order = checked_mul(left.order(), right.order(), node->spec);
  if (left.encoded_width() > 0xffff || right.encoded_width() > 0xffff) {
    throw CapacityError("factor encoding too wide for " + node->spec);
  }
  node->width = 4 + left.encoded_width() + right.encoded_width();
  node->abelian = left.is_abelian() && right.is_abelian();
  node->factors = {left, right};
  return GroupHandle(std::move(node));
}

GroupKind GroupHandle::kind() const { return node().kind; }
std::uint64_t GroupHandle::parameter() const { return node().param; }
std::uint64_t GroupHandle::order() const { return node().order; }
std::string GroupHandle::spec() const { return node().spec; }
bool GroupHandle::is_abelian() const { return node().abelian; }
std::size_t GroupHandle::encoded_width() const { return node().width; }

const GroupHandle& GroupHandle::left_factor() const {
  if (kind() != GroupKind::prod) throw DomainError(spec() + " is not a product group");
  return node().factors[0];
}

const GroupHandle& GroupHandle::right_factor() const {
  if (kind() != GroupKind::prod) throw DomainError(spec() + " is not a product group");
  return node().factors[1];
}

bool operator==(const GroupHandle& a, const GroupHandle& b) {
  return a.node_ == b.node_ || a.node_->spec == b.node_->spec;
}

void GroupHandle::require(const Element& a, const char* what) const {
  if (!node().valid(a.bytes)) {
    throw DomainError(std::string(what) + ": element is not valid for " + spec());
  }
}

Element GroupHandle::identity() const { return Element{node().identity()}; }

Element GroupHandle::op(const Element& a, const Element& b) const {
  require(a, "group op");
  require(b, "group op");
  return Element{node().op(a.bytes, b.bytes)};
}

Element GroupHandle::inv(const Element& a) const {
  require(a, "group inverse");
  return Element{node().inv(a.bytes)};
}

bool GroupHandle::contains(const Element& a) const { return node().valid(a.bytes); }

Element GroupHandle::sample(Rng& rng) const { return Element{node().sample(rng)}; }

std::vector<Element> GroupHandle::enumerate(std::uint64_t cap) const {
  if (order() > cap) {
    throw CapacityError(spec() + " has order " + std::to_string(order()) +
                        ", above the enumeration cap " + std::to_string(cap));
  }
  std::vector<Element> out;
  out.reserve(order());
  for (std::uint64_t i = 0; i < order(); ++i) out.push_back(Element{node().element_at(i)});
  return out;
}

Element GroupHandle::element_at(std::uint64_t index) const {
  if (index >= order()) throw DomainError("index out of range for " + spec());
  return Element{node().element_at(index)};
}

std::uint64_t GroupHandle::index_of(const Element& a) const {
  require(a, "index_of");
  return node().index_of(a.bytes);
}

std::string GroupHandle::encode(const Element& a) const {
  require(a, "encode");
  return a.bytes;
}

Element GroupHandle::decode(std::string_view bytes) const {
  if (!node().valid(bytes)) throw CodecError("not a canonical encoding for " + spec());
  return Element{std::string(bytes)};
}

std::string GroupHandle::format(const Element& a) const {
  require(a, "format");
  return node().format(a.bytes);
}

Element GroupHandle::from_integer(std::uint64_t value) const {
  if (kind() != GroupKind::zmod && kind() != GroupKind::xor_bits) {
    throw DomainError("from_integer is only defined for zmod and xor groups, not " + spec());
  }
  if (value >= order()) throw DomainError(std::to_string(value) + " is out of range for " + spec());
  std::string out;
  write_be(out, value, encoded_width());
  return Element{std::move(out)};
}

std::uint64_t GroupHandle::to_integer(const Element& a) const {
  if (kind() != GroupKind::zmod && kind() != GroupKind::xor_bits) {
    throw DomainError("to_integer is only defined for zmod and xor groups, not " + spec());
  }
  require(a, "to_integer");
  return read_be(a.bytes);
}

Element GroupHandle::from_images(std::span<const unsigned> images) const {
  if (kind() != GroupKind::sym) throw DomainError("from_images requires a sym group, not " + spec());
  std::string out;
  for (unsigned v : images) {
    if (v > 0xff) throw DomainError("image out of range for " + spec());
    out.push_back(static_cast<char>(v));
  }
  Element e{std::move(out)};
  require(e, "from_images");
  return e;
}

Element GroupHandle::from_rotation(std::uint64_t rotation, bool reflection) const {
  if (kind() != GroupKind::dihedral) {
    throw DomainError("from_rotation requires a dihedral group, not " + spec());
  }
  if (rotation >= parameter()) throw DomainError("rotation out of range for " + spec());
  return Element{node().dihedral_elem(rotation, reflection)};
}

Element GroupHandle::join(const Element& left, const Element& right) const {
  left_factor().require(left, "join");
  right_factor().require(right, "join");
  return Element{node().make_pair(left.bytes, right.bytes)};
}

std::pair<Element, Element> GroupHandle::split(const Element& a) const {
  if (kind() != GroupKind::prod) throw DomainError(spec() + " is not a product group");
  require(a, "split");
  return {Element{std::string(node().left_part(a.bytes))},
          Element{std::string(node().right_part(a.bytes))}};
}

// ---------------------------------------------------------------------------
// Spec parser

namespace {

class SpecParser {
 public:
  explicit SpecParser(std::string_view text) : text_(text) {}

  GroupHandle parse_all() {
    GroupHandle g = parse_spec();
    if (pos_ != text_.size()) fail("trailing input");
    return g;
  }

 private:
  [[noreturn]] void fail(std::string_view why) const {
    std::string token = pos_ < text_.size() ? std::string(1, text_[pos_]) : std::string("<end>");
    throw ParseError("group spec '" + std::string(text_) + "': " + std::string(why) +
                     " at position " + std::to_string(pos_) + " (token '" + token + "')");
  }

  void expect(char c) {
    if (pos_ >= text_.size() || text_[pos_] != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  std::string identifier() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isalpha(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (start == pos_) fail("expected a group kind");
    return std::string(text_.substr(start, pos_ - start));
  }

  std::uint64_t number() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (start == pos_) fail("expected a decimal integer");
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(text_.data() + start, text_.data() + pos_, v);
    if (ec != std::errc{}) {
      pos_ = start;
      fail("integer out of range");
    }
    if (v < 2) {
      pos_ = start;
      fail("parameter must be at least 2");
    }
    return v;
  }

  GroupHandle parse_spec() {
    const std::size_t kind_pos = pos_;
    const std::string kind = identifier();
    static constexpr std::array<std::string_view, 5> kKinds = {"zmod", "xor", "sym", "dihedral",
                                                               "prod"};
    if (std::find(kKinds.begin(), kKinds.end(), kind) == kKinds.end()) {
      throw UnsupportedKindError("unsupported group kind '" + kind + "' at position " +
                                 std::to_string(kind_pos));
    }
    expect(':');
    if (kind == "prod") {
      expect('(');
      GroupHandle a = parse_spec();
      expect(',');
      GroupHandle b = parse_spec();
      expect(')');
      return GroupHandle::product(a, b);
    }
    const std::size_t num_pos = pos_;
    const std::uint64_t n = number();
    if (kind == "zmod") return GroupHandle::zmod(n);
    if (kind == "dihedral") return GroupHandle::dihedral(n);
    if (n > 0xffff) {
      pos_ = num_pos;
      fail("parameter too large");
    }
    if (kind == "xor") return GroupHandle::xor_bits(static_cast<unsigned>(n));
    return GroupHandle::sym(static_cast<unsigned>(n));
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

GroupHandle parse_group_spec(std::string_view spec) { return SpecParser(spec).parse_all(); }

}  // namespace gemlab
