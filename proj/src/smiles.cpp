//
// Project chemid - Copyright 2026 chemid authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "chemid/smiles.h"

#include <algorithm>
#include <array>
#include <cctype>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "chemid/element.h"

namespace chemid {

SmilesError::SmilesError(const std::string &what, size_t offset)
    : Error(what + " at offset " + std::to_string(offset)), offset_(offset) { }

namespace {

using Kind = SmilesToken::Kind;

bool is_lower(char c) {
  return std::islower(static_cast<unsigned char>(c)) != 0;
}

bool is_upper(char c) {
  return std::isupper(static_cast<unsigned char>(c)) != 0;
}

bool is_digit(char c) {
  return std::isdigit(static_cast<unsigned char>(c)) != 0;
}

std::string capitalized(std::string_view sym) {
  std::string s(sym);
  if (!s.empty()) {
    s[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(s[0])));
  }
  return s;
}

class Lexer {
public:
  explicit Lexer(std::string_view text): text_(text) { }

  std::vector<SmilesToken> run() {
    std::vector<SmilesToken> out;
    while (pos_ < text_.size()) {
      out.push_back(next());
    }
    return out;
  }

private:
  char peek(size_t ahead = 0) const {
    return pos_ + ahead < text_.size() ? text_[pos_ + ahead] : '\0';
  }

  SmilesToken simple(Kind kind) {
    SmilesToken t;
    t.kind = kind;
    t.offset = pos_++;
    return t;
  }

  SmilesToken next() {
    const char c = peek();
    switch (c) {
    case '[':
      return bracket();
    case '(':
      return simple(Kind::kBranchOpen);
    case ')':
      return simple(Kind::kBranchClose);
    case '.':
      return simple(Kind::kDot);
    case '-':
    case '=':
    case '#':
    case ':':
    case '/':
    case '\\': {
      SmilesToken t = simple(Kind::kBond);
      t.bond = c;
      return t;
    }
    case '%': {
      SmilesToken t;
    t.kind = Kind::kRingClosure;
      t.offset = pos_;
      if (!is_digit(peek(1)) || !is_digit(peek(2))) {
        throw SmilesError("expected two digits after '%'", pos_);
      }
      t.ring = (peek(1) - '0') * 10 + (peek(2) - '0');
      pos_ += 3;
      return t;
    }
    default:
      break;
    }

    if (is_digit(c)) {
      SmilesToken t = simple(Kind::kRingClosure);
      t.ring = c - '0';
      return t;
    }
    return organic();
  }

  SmilesToken organic() {
    SmilesToken t;
    t.kind = Kind::kOrganicAtom;
    t.offset = pos_;
    const char c = peek();
    const char d = peek(1);
    if ((c == 'C' && d == 'l') || (c == 'B' && d == 'r')) {
      t.symbol = std::string { c, d };
      pos_ += 2;
      return t;
    }
    switch (c) {
    case 'B':
    case 'C':
    case 'N':
    case 'O':
    case 'P':
    case 'S':
    case 'F':
    case 'I':
      t.symbol = std::string(1, c);
      break;
    case 'b':
    case 'c':
    case 'n':
    case 'o':
    case 'p':
    case 's':
      t.symbol = std::string(1, static_cast<char>(c - 'a' + 'A'));
      t.aromatic = true;
      break;
    default:
      throw SmilesError(std::string("unexpected character '") + c + "'", pos_);
    }
    ++pos_;
    return t;
  }

  int read_number() {
    int v = 0;
    while (is_digit(peek())) {
      v = v * 10 + (peek() - '0');
      if (v > 100000) {
        throw SmilesError("number too large", pos_);
      }
      ++pos_;
    }
    return v;
  }

  SmilesToken bracket() {
    SmilesToken t;
    t.kind = Kind::kBracketAtom;
    t.offset = pos_;
    ++pos_;

    if (is_digit(peek())) {
      t.isotope = read_number();
    }

    const size_t sym_at = pos_;
    const char c = peek();
    if (is_upper(c)) {
      std::string two { c, peek(1) };
      if (is_lower(peek(1)) && atomic_number(two) != 0) {
        t.symbol = two;
        pos_ += 2;
      } else {
        t.symbol = std::string(1, c);
        ++pos_;
      }
    } else if (is_lower(c)) {
      std::string two { c, peek(1) };
      if (two == "se" || two == "as" || two == "te") {
        t.symbol = capitalized(two);
        pos_ += 2;
      } else if (std::string_view("bcnops").find(c) != std::string_view::npos) {
        t.symbol = capitalized(std::string(1, c));
        ++pos_;
      } else {
        throw SmilesError("unknown aromatic element", sym_at);
      }
      t.aromatic = true;
    } else {
      throw SmilesError("expected element symbol", sym_at);
    }
    if (atomic_number(t.symbol) == 0) {
      throw SmilesError("unknown element '" + t.symbol + "'", sym_at);
    }

    if (peek() == '@') {
      ++pos_;
      t.chirality = ChiralTag::kCounterClockwise;
      if (peek() == '@') {
        ++pos_;
        t.chirality = ChiralTag::kClockwise;
      }
      if (is_upper(peek()) && peek() != 'H') {
        throw SmilesError("unsupported chirality class", pos_);
      }
    }

    if (peek() == 'H') {
      ++pos_;
      t.hcount = is_digit(peek()) ? read_number() : 1;
    }

    if (peek() == '+' || peek() == '-') {
      const char sign = peek();
      const int unit = sign == '+' ? 1 : -1;
      ++pos_;
      if (is_digit(peek())) {
        t.charge = unit * read_number();
      } else {
        t.charge = unit;
        while (peek() == sign) {
          t.charge += unit;
          ++pos_;
        }
      }
    }

    if (peek() == ':') {
      throw SmilesError("atom classes are not supported", pos_);
    }
    if (peek() != ']') {
      throw SmilesError("expected ']'", pos_);
    }
    ++pos_;
    return t;
  }

  std::string_view text_;
  size_t pos_ = 0;
};

// Placeholder in a written neighbor order for a ring bond not yet closed.
constexpr int kOpenRing = -2;

struct RingOpen {
  bool open = false;
  int atom = -1;
  char bond = 0;
  size_t slot = 0;
  size_t offset = 0;
};

BondDir flip(BondDir d) {
  switch (d) {
  case BondDir::kUp:
    return BondDir::kDown;
  case BondDir::kDown:
    return BondDir::kUp;
  default:
    return BondDir::kNone;
  }
}

class Parser {
public:
  Parser(std::string_view text, const ParseOptions &options)
      : text_(text), options_(options) { }

  MolGraph run() {
    if (text_.empty()) {
      throw SmilesError("empty SMILES", 0);
    }
    for (const SmilesToken &t: tokenize_smiles(text_)) {
      consume(t);
    }
    finish();
    return std::move(g_);
  }

private:
  void consume(const SmilesToken &t) {
    switch (t.kind) {
    case Kind::kOrganicAtom:
    case Kind::kBracketAtom:
      add_atom(t);
      break;
    case Kind::kBond:
      if (prev_ < 0) {
        throw SmilesError("bond without a preceding atom", t.offset);
      }
      if (pending_) {
        throw SmilesError("two consecutive bond symbols", t.offset);
      }
      pending_ = t.bond;
      pending_offset_ = t.offset;
      break;
    case Kind::kRingClosure:
      ring_closure(t);
      break;
    case Kind::kBranchOpen:
      if (prev_ < 0) {
        throw SmilesError("branch without a preceding atom", t.offset);
      }
      if (pending_) {
        throw SmilesError("bond symbol before '('", pending_offset_);
      }
      branches_.push_back({ prev_, t.offset });
      break;
    case Kind::kBranchClose:
      if (branches_.empty()) {
        throw SmilesError("unbalanced ')'", t.offset);
      }
      if (pending_) {
        throw SmilesError("dangling bond symbol", pending_offset_);
      }
      prev_ = branches_.back().atom;
      branches_.pop_back();
      break;
    case Kind::kDot:
      if (pending_) {
        throw SmilesError("dangling bond symbol", pending_offset_);
      }
      prev_ = -1;
      break;
    }
  }

  void add_atom(const SmilesToken &t) {
    Atom a;
    a.z = atomic_number(t.symbol);
    a.aromatic = t.aromatic;
    if (t.kind == Kind::kBracketAtom) {
      a.isotope = t.isotope;
      a.charge = t.charge;
      a.num_hs = t.hcount;
      a.chiral_tag = t.chirality;
    }
    const int id = g_.add_atom(a);
    organic_.push_back(t.kind == Kind::kOrganicAtom);
    offsets_.push_back(t.offset);
    has_prev_.push_back(prev_ >= 0);
    order_.emplace_back();
    if (prev_ >= 0) {
      order_.back().push_back(prev_);
    }
    for (int k = 0; k < a.num_hs; ++k) {
      order_.back().push_back(hydrogen_token(0));
    }

    if (prev_ >= 0) {
      make_bond(prev_, id, pending_, pending_offset_);
      order_[static_cast<size_t>(prev_)].push_back(id);
    } else if (pending_) {
      throw SmilesError("bond without a preceding atom", pending_offset_);
    }
    pending_ = 0;
    prev_ = id;
  }

  void make_bond(int a, int b, char sym, size_t offset) {
    if (g_.find_bond(a, b)) {
      throw SmilesError("duplicate bond", offset);
    }
    BondOrder order = kSingleBond;
    bool aromatic = false;
    BondDir dir = BondDir::kNone;
    switch (sym) {
    case '=':
      order = kDoubleBond;
      break;
    case '#':
      order = kTripleBond;
      break;
    case ':':
      order = kAromaticBond;
      aromatic = true;
      break;
    case '/':
      dir = BondDir::kUp;
      break;
    case '\\':
      dir = BondDir::kDown;
      break;
    case 0:
      if (g_.atom(a).aromatic && g_.atom(b).aromatic) {
        order = kAromaticBond;
        aromatic = true;
      }
      break;
    default:
      break;
    }
    const int id = g_.add_bond(a, b, order);
    g_.bond(id).aromatic = aromatic;
    g_.bond(id).dir = dir;
  }

  void ring_closure(const SmilesToken &t) {
    if (prev_ < 0) {
      throw SmilesError("ring closure without a preceding atom", t.offset);
    }
    RingOpen &r = rings_[static_cast<size_t>(t.ring)];
    if (!r.open) {
      r = RingOpen { true, prev_, pending_, order_[static_cast<size_t>(prev_)].size(),
                     t.offset };
      order_[static_cast<size_t>(prev_)].push_back(kOpenRing);
      pending_ = 0;
      return;
    }

    if (r.atom == prev_) {
      throw SmilesError("ring closure to the same atom", t.offset);
    }
    if (pending_ && r.bond && pending_ != r.bond) {
      throw SmilesError("conflicting ring-closure bond symbols", t.offset);
    }
    if (pending_) {
      make_bond(prev_, r.atom, pending_, t.offset);
    } else {
      make_bond(r.atom, prev_, r.bond, t.offset);
    }
    order_[static_cast<size_t>(r.atom)][r.slot] = prev_;
    order_[static_cast<size_t>(prev_)].push_back(r.atom);
    r.open = false;
    pending_ = 0;
  }

  void finish() {
    if (pending_) {
      throw SmilesError("dangling bond symbol", pending_offset_);
    }
    if (!branches_.empty()) {
      throw SmilesError("unbalanced '('", branches_.back().offset);
    }
    for (const RingOpen &r: rings_) {
      if (r.open) {
        throw SmilesError("unmatched ring closure", r.offset);
      }
    }

    for (int i = 0; i < g_.num_atoms(); ++i) {
      assign_hydrogens(i);
    }
    for (int i = 0; i < g_.num_atoms(); ++i) {
      normalize_chirality(i);
    }
    resolve_double_bond_stereo();
    perceive_rings(g_);
  }

  // Bond order sum in whole units with aromatic bonds counted once.
  int bond_units(int i) const {
    int sum = 0;
    for (const Neighbor &n: g_.adjacency(i)) {
      const int h = g_.bond(n.bond).order.halves();
      sum += h == kAromaticBond.halves() ? 1 : h / 2;
    }
    return sum;
  }

  void assign_hydrogens(int i) {
    Atom &a = g_.atom(i);
    const size_t offset = offsets_[static_cast<size_t>(i)];
    const int s = bond_units(i);

    if (!organic_[static_cast<size_t>(i)]) {
      if (s + a.num_hs > options_.max_valence) {
        throw SmilesError("valence exceeds limit", offset);
      }
      auto iso = isoelectronic_valences(a.z, a.charge);
      if (!a.aromatic && !iso.empty()) {
        const int bonded = (bond_order_sum_halves(g_, i) + 1) / 2 + a.num_hs;
        a.num_radicals = std::max(0, iso.front() - bonded);
      }
      return;
    }

    auto valences = smiles_default_valences(a.z);
    if (a.aromatic) {
      const int lowest = valences.front();
      if (s > valences.back()) {
        throw SmilesError("aromatic atom exceeds its valence", offset);
      }
      a.num_hs = s + 1 <= lowest ? lowest - s - 1 : std::max(0, lowest - s);
      return;
    }
    auto it = std::find_if(valences.begin(), valences.end(),
                           [s](int v) { return v >= s; });
    if (it == valences.end()) {
      throw SmilesError("atom exceeds its allowed valence", offset);
    }
    a.num_hs = *it - s;
  }

  void normalize_chirality(int i) {
    Atom &a = g_.atom(i);
    if (a.chiral_tag == ChiralTag::kNone) {
      return;
    }
    std::vector<int> written = order_[static_cast<size_t>(i)];
    if (a.degree + a.num_hs == 3 && may_have_stereo_lone_pair(a.z)) {
      written.insert(written.begin() + (has_prev_[static_cast<size_t>(i)] ? 1 : 0),
                     kLonePairToken);
    }
    const std::vector<int> reference = chirality_reference(g_, i);
    if (written.size() < 3 || written.size() > 4
        || written.size() != reference.size()) {
      a.chiral_tag = ChiralTag::kNone;
      return;
    }
    if (permutation_parity(written, reference) == 1) {
      a.chiral_tag = invert(a.chiral_tag);
    }
  }

  // First directional single bond on atom x other than the double bond `db`.
  std::optional<Neighbor> directional_neighbor(int x, int db) const {
    for (const Neighbor &n: g_.adjacency(x)) {
      if (n.bond != db && g_.bond(n.bond).dir != BondDir::kNone) {
        return n;
      }
    }
    return std::nullopt;
  }

  BondDir side(int x, const Neighbor &n) const {
    const Bond &b = g_.bond(n.bond);
    return b.begin == x ? b.dir : flip(b.dir);
  }

  void resolve_double_bond_stereo() {
    for (int id: g_.live_bonds()) {
      Bond &b = g_.bond(id);
      if (b.order != kDoubleBond || b.aromatic) {
        continue;
      }
      auto na = directional_neighbor(b.begin, id);
      auto nb = directional_neighbor(b.end, id);
      if (!na || !nb) {
        continue;
      }
      b.stereo = side(b.begin, *na) == side(b.end, *nb) ? BondStereo::kCis
                                                        : BondStereo::kTrans;
      b.stereo_atoms = { na->atom, nb->atom };
    }
  }

  struct BranchOpen {
    int atom;
    size_t offset;
  };

  std::string_view text_;
  ParseOptions options_;
  MolGraph g_;
  int prev_ = -1;
  char pending_ = 0;
  size_t pending_offset_ = 0;
  std::vector<BranchOpen> branches_;
  std::array<RingOpen, 100> rings_ {};
  std::vector<bool> organic_;
  std::vector<bool> has_prev_;
  std::vector<size_t> offsets_;
  std::vector<std::vector<int>> order_;
};

// Writer.

std::string bracket_atom(const Atom &a) {
  std::string s = "[";
  if (a.isotope > 0) {
    s += std::to_string(a.isotope);
  }
  s += element_symbol(a.z);
  if (a.num_hs > 0) {
    s += 'H';
    if (a.num_hs > 1) {
      s += std::to_string(a.num_hs);
    }
  }
  if (a.charge != 0) {
    s += a.charge > 0 ? '+' : '-';
    const int m = a.charge > 0 ? a.charge : -a.charge;
    if (m > 1) {
      s += std::to_string(m);
    }
  }
  s += ']';
  return s;
}

char bond_symbol(const Bond &b) {
  switch (b.order.halves()) {
  case 3:
    return ':';
  case 4:
    return '=';
  case 6:
    return '#';
  default:
    return '-';
  }
}

std::string ring_label(int r) {
  if (r < 10) {
    return std::string(1, static_cast<char>('0' + r));
  }
  return "%" + std::to_string(r);
}

class Writer {
public:
  explicit Writer(const MolGraph &g)
      : g_(g), order_(static_cast<size_t>(g.num_atoms()), -1),
        tree_parent_(static_cast<size_t>(g.num_atoms()), -1),
        ring_digit_(static_cast<size_t>(g.num_bond_slots()), -1) { }

  std::string run() {
    std::string out;
    for (const auto &frag: fragments(g_)) {
      if (!out.empty()) {
        out += '.';
      }
      number(frag.front());
      emit(frag.front(), out);
    }
    return out;
  }

private:
  // Pass 1: DFS visit order and tree edges.
  void number(int root) {
    tree_parent_[static_cast<size_t>(root)] = -1;
    std::vector<std::pair<int, size_t>> frames { { root, 0 } };
    order_[static_cast<size_t>(root)] = counter_++;
    while (!frames.empty()) {
      auto &[u, next] = frames.back();
      auto adj = g_.adjacency(u);
      if (next >= adj.size()) {
        frames.pop_back();
        continue;
      }
      const Neighbor n = adj[next++];
      if (order_[static_cast<size_t>(n.atom)] >= 0) {
        continue;
      }
      order_[static_cast<size_t>(n.atom)] = counter_++;
      tree_parent_[static_cast<size_t>(n.atom)] = n.bond;
      frames.push_back({ n.atom, 0 });
    }
  }

  bool is_tree_child(int u, const Neighbor &n) const {
    return tree_parent_[static_cast<size_t>(n.atom)] == n.bond
           && order_[static_cast<size_t>(n.atom)] > order_[static_cast<size_t>(u)];
  }

  bool is_tree_parent(int u, const Neighbor &n) const {
    return tree_parent_[static_cast<size_t>(u)] == n.bond;
  }

  int take_digit() {
    for (int r = 1; r < 100; ++r) {
      if (!digit_used_[static_cast<size_t>(r)]) {
        digit_used_[static_cast<size_t>(r)] = true;
        return r;
      }
    }
    throw Error("write_smiles: more than 99 open rings");
  }

  // Pass 2: emission in the same visit order.
  void emit(int u, std::string &out) {
    out += bracket_atom(g_.atom(u));

    std::vector<int> children;
    for (const Neighbor &n: g_.adjacency(u)) {
      if (is_tree_parent(u, n)) {
        continue;
      }
      if (is_tree_child(u, n)) {
        children.push_back(n.atom);
        continue;
      }
      const auto bid = static_cast<size_t>(n.bond);
      if (ring_digit_[bid] >= 0) {
        out += bond_symbol(g_.bond(n.bond));
        out += ring_label(ring_digit_[bid]);
        digit_used_[static_cast<size_t>(ring_digit_[bid])] = false;
      } else {
        ring_digit_[bid] = take_digit();
        out += ring_label(ring_digit_[bid]);
      }
    }

    for (size_t k = 0; k < children.size(); ++k) {
      const int v = children[k];
      const bool branch = k + 1 < children.size();
      if (branch) {
        out += '(';
      }
      out += bond_symbol(g_.bond(*g_.find_bond(u, v)));
      emit(v, out);
      if (branch) {
        out += ')';
      }
    }
  }

  const MolGraph &g_;
  std::vector<int> order_;
  std::vector<int> tree_parent_;
  std::vector<int> ring_digit_;
  std::array<bool, 100> digit_used_ {};
  int counter_ = 0;
};

}  // namespace

std::vector<SmilesToken> tokenize_smiles(std::string_view text) {
  return Lexer(text).run();
}

MolGraph parse_smiles(std::string_view text, const ParseOptions &options) {
  return Parser(text, options).run();
}

std::string write_smiles(const MolGraph &g) {
  return Writer(g).run();
}

}  // namespace chemid
