#include "csazkp/codec.hpp"

#include <initializer_list>

#include "csazkp/errors.hpp"
#include "json.hpp"

namespace csazkp {
namespace {

using Json = nlohmann::ordered_json;
using Kind = DecodeError::Kind;

constexpr const char* kPublicFormat = "csazkp-public";
constexpr const char* kSecretFormat = "csazkp-secret";
constexpr const char* kSignatureFormat = "csazkp-signature";
constexpr unsigned kFormatVersion = 1;

// ---- encoding ------------------------------------------------------------

Json rat_json(const Rational& q) { return to_string(q); }

Json rats_json(const RatVector& v) {
  Json out = Json::array();
  for (const Rational& q : v) out.push_back(rat_json(q));
  return out;
}

Json matrix_json(const RatMatrix& m) {
  Json j;
  j["rows"] = m.rows();
  j["cols"] = m.cols();
  j["entries"] = rats_json(m.entries());
  return j;
}

Json algebra_json(const Algebra& a) {
  Json j;
  j["dim"] = a.dim();
  j["gamma"] = rats_json(a.structure_constants());
  return j;
}

Json sparse_algebra_json(const Algebra& a) {
  const std::size_t m = a.dim();
  Json entries = Json::array();
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t jj = 0; jj < m; ++jj)
      for (std::size_t k = 0; k < m; ++k) {
        const Rational& g = a.gamma(i, jj, k);
        if (g != 0) entries.push_back(Json::array({i, jj, k, to_string(g)}));
      }
  Json j;
  j["dim"] = m;
  j["gamma_sparse"] = std::move(entries);
  return j;
}

Json element_json(const AlgElement& x) {
  Json j;
  j["coords"] = rats_json(x.coords);
  return j;
}

Json iso_json(const Isomorphism& f) {
  Json j;
  j["matrix"] = matrix_json(f.matrix);
  return j;
}

Json public_json(const PublicKey& pk) {
  Json j;
  j["format"] = kPublicFormat;
  j["version"] = kFormatVersion;
  j["variant"] = to_string(pk.variant);
  j["k"] = pk.k;
  j["height"] = pk.height;
  j["a0"] = algebra_json(pk.a0);
  j["a1"] = algebra_json(pk.a1);
  j["element"] = pk.public_element ? element_json(*pk.public_element) : Json(nullptr);
  if (pk.order) {
    Json o;
    o["scale"] = to_string(pk.order->scale);
    o["bound"] = pk.order->bound;
    j["order"] = std::move(o);
  } else {
    j["order"] = nullptr;
  }
  return j;
}

// ---- decoding ------------------------------------------------------------

class Reader {
 public:
  explicit Reader(std::string_view text) : text_(text) {}

  [[noreturn]] void fail(Kind kind, std::string_view near, const std::string& what) const {
    throw DecodeError(kind, locate(near), what);
  }

  std::size_t locate(std::string_view key) const {
    if (key.empty()) return 0;
    const std::string needle = "\"" + std::string(key) + "\":";
    const std::size_t at = text_.find(needle);
    return at == std::string_view::npos ? 0 : at;
  }

  Json parse() const {
    guard_nesting();
    Json j;
    try {
      j = Json::parse(text_.begin(), text_.end());
    } catch (const nlohmann::json::parse_error& e) {
      throw DecodeError(Kind::syntax, e.byte > 0 ? e.byte - 1 : 0, "malformed JSON");
    }
    std::string again;
    try {
      again = j.dump();
    } catch (const nlohmann::json::exception&) {
      throw DecodeError(Kind::syntax, 0, "invalid UTF-8 in string");
    }
    if (again != text_) {
      std::size_t at = 0;
      while (at < again.size() && at < text_.size() && again[at] == text_[at]) ++at;
      throw DecodeError(Kind::syntax, at, "non-canonical encoding");
    }
    return j;
  }

  void keys(const Json& j, std::initializer_list<const char*> expected, std::string_view where) const {
    if (!j.is_object()) fail(Kind::syntax, where, std::string(where) + ": expected an object");
    if (j.size() != expected.size()) fail(Kind::syntax, where, std::string(where) + ": wrong set of keys");
    auto it = j.begin();
    for (const char* name : expected) {
      if (it.key() != name) fail(Kind::syntax, where, std::string(where) + ": expected key '" + name + "'");
      ++it;
    }
  }

  std::uint64_t unsigned_at(const Json& j, const char* key) const {
    const Json& v = j.at(key);
    if (!v.is_number_unsigned()) fail(Kind::syntax, key, std::string("'") + key + "' must be a non-negative integer");
    return v.get<std::uint64_t>();
  }

  std::string string_at(const Json& j, const char* key) const {
    const Json& v = j.at(key);
    if (!v.is_string()) fail(Kind::syntax, key, std::string("'") + key + "' must be a string");
    return v.get<std::string>();
  }

  Rational rational(const Json& v, std::string_view near) const {
    if (!v.is_string()) fail(Kind::syntax, near, "rational must be a string");
    try {
      return parse_rational(v.get_ref<const std::string&>());
    } catch (const DecodeError& e) {
      fail(Kind::syntax, near, e.what());
    }
  }

  RatVector rationals(const Json& v, const char* key) const {
    if (!v.is_array()) fail(Kind::syntax, key, std::string("'") + key + "' must be an array");
    RatVector out;
    out.reserve(v.size());
    for (const Json& e : v) out.push_back(rational(e, key));
    return out;
  }

  RatMatrix matrix(const Json& j) const {
    keys(j, {"rows", "cols", "entries"}, "rows");
    const std::uint64_t r = unsigned_at(j, "rows");
    const std::uint64_t c = unsigned_at(j, "cols");
    if (r == 0 || c == 0 || r > kMaxMatrixSide || c > kMaxMatrixSide)
      fail(Kind::dimension, "rows", "matrix side out of range");
    const Json& e = j.at("entries");
    if (!e.is_array()) fail(Kind::syntax, "entries", "'entries' must be an array");
    if (e.size() != r * c) fail(Kind::dimension, "entries", "expected " + std::to_string(r * c) + " entries, got " + std::to_string(e.size()));
    RatMatrix m(r, c);
    std::size_t idx = 0;
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t k = 0; k < c; ++k) m(i, k) = rational(e[idx++], "entries");
    return m;
  }

  Algebra algebra(const Json& j) const {
    if (!j.is_object() || j.size() != 2) fail(Kind::syntax, "dim", "algebra must have two keys");
    const bool sparse = j.contains("gamma_sparse");
    if (sparse) {
      keys(j, {"dim", "gamma_sparse"}, "dim");
    } else {
      keys(j, {"dim", "gamma"}, "dim");
    }
    const std::uint64_t m = unsigned_at(j, "dim");
    if (m == 0 || m > kMaxAlgebraDim) fail(Kind::dimension, "dim", "algebra dimension out of range");
    const std::size_t total = m * m * m;
    RatVector gamma;
    if (!sparse) {
      const Json& g = j.at("gamma");
      if (!g.is_array()) fail(Kind::syntax, "gamma", "'gamma' must be an array");
      if (g.size() != total)
        fail(Kind::dimension, "gamma", "expected " + std::to_string(total) + " constants, got " + std::to_string(g.size()));
      gamma = rationals(g, "gamma");
    } else {
      const Json& g = j.at("gamma_sparse");
      if (!g.is_array()) fail(Kind::syntax, "gamma_sparse", "'gamma_sparse' must be an array");
      if (g.size() > total) fail(Kind::dimension, "gamma_sparse", "too many sparse entries");
      gamma.assign(total, Rational(0));
      std::size_t previous = 0;
      bool first = true;
      for (const Json& e : g) {
        if (!e.is_array() || e.size() != 4) fail(Kind::syntax, "gamma_sparse", "sparse entry must be [i,j,k,value]");
        std::size_t idx[3];
        for (int t = 0; t < 3; ++t) {
          if (!e[t].is_number_unsigned()) fail(Kind::syntax, "gamma_sparse", "sparse index must be a non-negative integer");
          const std::uint64_t v = e[t].get<std::uint64_t>();
          if (v >= m) fail(Kind::dimension, "gamma_sparse", "sparse index out of range");
          idx[t] = v;
        }
        const std::size_t flat = (idx[0] * m + idx[1]) * m + idx[2];
        if (!first && flat <= previous) fail(Kind::syntax, "gamma_sparse", "sparse entries must be strictly increasing");
        Rational q = rational(e[3], "gamma_sparse");
        if (q == 0) fail(Kind::syntax, "gamma_sparse", "sparse entries must be nonzero");
        gamma[flat] = std::move(q);
        previous = flat;
        first = false;
      }
    }
    try {
      return new_algebra(m, std::move(gamma));
    } catch (const Error& e) {
      fail(Kind::validation, sparse ? "gamma_sparse" : "gamma", e.what());
    }
  }

  AlgElement element(const Json& j, std::size_t expected_dim) const {
    keys(j, {"coords"}, "coords");
    const Json& c = j.at("coords");
    if (!c.is_array()) fail(Kind::syntax, "coords", "'coords' must be an array");
    if (c.empty() || c.size() > kMaxAlgebraDim) fail(Kind::dimension, "coords", "element size out of range");
    if (expected_dim != 0 && c.size() != expected_dim)
      fail(Kind::dimension, "coords", "element has " + std::to_string(c.size()) + " coordinates, expected " + std::to_string(expected_dim));
    return AlgElement{rationals(c, "coords")};
  }

  Isomorphism iso(const Json& j, std::size_t expected_dim) const {
    keys(j, {"matrix"}, "matrix");
    RatMatrix m = matrix(j.at("matrix"));
    if (expected_dim != 0 && (m.rows() != expected_dim || m.cols() != expected_dim))
      fail(Kind::dimension, "matrix", "isomorphism must be " + std::to_string(expected_dim) + "x" + std::to_string(expected_dim));
    return Isomorphism{std::move(m)};
  }

  bool boolean_at(const Json& j, const char* key) const {
    const Json& v = j.at(key);
    if (!v.is_boolean()) fail(Kind::syntax, key, std::string("'") + key + "' must be a boolean");
    return v.get<bool>();
  }

  void header(const Json& j, const char* format) const {
    if (string_at(j, "format") != format) fail(Kind::validation, "format", std::string("expected format ") + format);
    if (unsigned_at(j, "version") != kFormatVersion) fail(Kind::validation, "version", "unsupported format version");
  }

 private:
  void guard_nesting() const {
    std::size_t depth = 0;
    bool in_string = false;
    bool escaped = false;
    for (std::size_t i = 0; i < text_.size(); ++i) {
      const char c = text_[i];
      if (in_string) {
        if (escaped) {
          escaped = false;
        } else if (c == '\\') {
          escaped = true;
        } else if (c == '"') {
          in_string = false;
        }
        continue;
      }
      if (c == '"') {
        in_string = true;
      } else if (c == '{' || c == '[') {
        if (++depth > kMaxNesting) throw DecodeError(Kind::syntax, i, "nesting too deep");
      } else if ((c == '}' || c == ']') && depth > 0) {
        --depth;
      }
    }
  }

  std::string_view text_;
};

PublicKey public_from(const Reader& r, const Json& j) {
  r.keys(j, {"format", "version", "variant", "k", "height", "a0", "a1", "element", "order"}, "format");
  r.header(j, kPublicFormat);
  const auto variant = parse_variant(r.string_at(j, "variant"));
  if (!variant) r.fail(Kind::validation, "variant", "unknown variant");
  const std::uint64_t k = r.unsigned_at(j, "k");
  const std::uint64_t height = r.unsigned_at(j, "height");
  if (k < 1 || k * k > kMaxAlgebraDim) r.fail(Kind::dimension, "k", "k out of range");
  if (height < 1 || height > (1U << 30)) r.fail(Kind::validation, "height", "height out of range");
  Algebra a0 = r.algebra(j.at("a0"));
  Algebra a1 = r.algebra(j.at("a1"));
  if (a0.dim() != k * k || a1.dim() != k * k) r.fail(Kind::dimension, "a0", "public algebras must have dimension k^2");
  std::optional<AlgElement> element;
  if (!j.at("element").is_null()) element = r.element(j.at("element"), a1.dim());
  std::optional<OrderData> order;
  const Json& o = j.at("order");
  if (!o.is_null()) {
    r.keys(o, {"scale", "bound"}, "scale");
    OrderData data;
    if (!parse_integer(r.string_at(o, "scale"), data.scale) || data.scale < 1)
      r.fail(Kind::syntax, "scale", "scale must be a positive integer string");
    const std::uint64_t bound = r.unsigned_at(o, "bound");
    if (bound < 1 || bound > (1U << 30)) r.fail(Kind::validation, "bound", "bound out of range");
    data.bound = static_cast<long>(bound);
    order = std::move(data);
  }
  if ((*variant == Variant::order) != order.has_value())
    r.fail(Kind::validation, "order", "order data must be present exactly for the order variant");
  if (*variant == Variant::order && (!a0.is_integral() || !a1.is_integral()))
    r.fail(Kind::validation, "a0", "order keys need integral structure constants");
  return PublicKey{*variant, static_cast<unsigned>(k), static_cast<long>(height), std::move(a0), std::move(a1),
                   std::move(element), std::move(order)};
}

}  // namespace

// ---- public API ------------------------------------------------------------

std::string encode(const Rational& q) { return to_string(q); }
std::string encode(const RatMatrix& m) { return matrix_json(m).dump(); }
std::string encode(const Algebra& a) { return algebra_json(a).dump(); }

std::string encode_compact(const Algebra& a) {
  std::size_t zeros = 0;
  for (const Rational& g : a.structure_constants())
    if (g == 0) ++zeros;
  const std::size_t total = a.structure_constants().size();
  return 3 * zeros >= 2 * total ? sparse_algebra_json(a).dump() : encode(a);
}

std::string encode(const AlgElement& x) { return element_json(x).dump(); }
std::string encode(const Isomorphism& f) { return iso_json(f).dump(); }
std::string encode(const PublicKey& pk) { return public_json(pk).dump(); }

std::string encode_secret(const KeyPair& key) {
  Json j;
  j["format"] = kSecretFormat;
  j["version"] = kFormatVersion;
  j["phi"] = iso_json(key.secret_phi);
  return j.dump();
}

std::string encode(const Signature& sig) {
  Json j;
  j["format"] = kSignatureFormat;
  j["version"] = kFormatVersion;
  j["hash"] = std::string(kHashName);
  j["commitment"] = algebra_json(sig.commitment);
  j["response"] = element_json(sig.response);
  j["seed"] = to_hex(sig.challenge_seed);
  return j.dump();
}

std::string encode(const Transcript1& t) {
  Json j;
  j["commitment"] = algebra_json(t.commitment);
  j["challenge"] = t.challenge;
  j["response"] = iso_json(t.response);
  j["accepted"] = t.accepted;
  return j.dump();
}

std::string encode(const Transcript2& t) {
  Json j;
  j["commitment"] = algebra_json(t.commitment);
  j["challenge_algebra"] = algebra_json(t.challenge.algebra);
  j["delta"] = iso_json(t.challenge.delta);
  j["response"] = element_json(t.response);
  j["accepted"] = t.accepted;
  return j.dump();
}

std::string encode(const P2Challenge& c) {
  Json j;
  j["algebra"] = algebra_json(c.algebra);
  j["delta"] = iso_json(c.delta);
  return j.dump();
}

Rational decode_rational(std::string_view text) { return parse_rational(text); }

RatMatrix decode_matrix(std::string_view text) {
  Reader r(text);
  return r.matrix(r.parse());
}

Algebra decode_algebra(std::string_view text) {
  Reader r(text);
  return r.algebra(r.parse());
}

AlgElement decode_element(std::string_view text) {
  Reader r(text);
  return r.element(r.parse(), 0);
}

Isomorphism decode_isomorphism(std::string_view text) {
  Reader r(text);
  return r.iso(r.parse(), 0);
}

PublicKey decode_public_key(std::string_view text) {
  Reader r(text);
  return public_from(r, r.parse());
}

Isomorphism decode_secret_key(std::string_view text, const PublicKey& pk) {
  Reader r(text);
  const Json j = r.parse();
  r.keys(j, {"format", "version", "phi"}, "format");
  r.header(j, kSecretFormat);
  return r.iso(j.at("phi"), pk.a0.dim());
}

Signature decode_signature(std::string_view text) {
  Reader r(text);
  const Json j = r.parse();
  r.keys(j, {"format", "version", "hash", "commitment", "response", "seed"}, "format");
  r.header(j, kSignatureFormat);
  if (r.string_at(j, "hash") != kHashName) r.fail(Kind::validation, "hash", "unsupported hash function");
  Algebra b = r.algebra(j.at("commitment"));
  AlgElement a = r.element(j.at("response"), b.dim());
  const auto seed = digest_from_hex(r.string_at(j, "seed"));
  if (!seed) r.fail(Kind::syntax, "seed", "seed must be 64 lowercase hex digits");
  return Signature{std::move(b), std::move(a), *seed};
}

Transcript1 decode_transcript1(std::string_view text) {
  Reader r(text);
  const Json j = r.parse();
  r.keys(j, {"commitment", "challenge", "response", "accepted"}, "commitment");
  Algebra b = r.algebra(j.at("commitment"));
  const std::uint64_t bit = r.unsigned_at(j, "challenge");
  if (bit > 1) r.fail(Kind::validation, "challenge", "challenge must be 0 or 1");
  Isomorphism delta = r.iso(j.at("response"), b.dim());
  const bool accepted = r.boolean_at(j, "accepted");
  return Transcript1{std::move(b), static_cast<int>(bit), std::move(delta), accepted};
}

Transcript2 decode_transcript2(std::string_view text) {
  Reader r(text);
  const Json j = r.parse();
  r.keys(j, {"commitment", "challenge_algebra", "delta", "response", "accepted"}, "commitment");
  Algebra b = r.algebra(j.at("commitment"));
  Algebra c = r.algebra(j.at("challenge_algebra"));
  if (c.dim() != b.dim()) r.fail(Kind::dimension, "challenge_algebra", "challenge dimension differs from commitment");
  Isomorphism delta = r.iso(j.at("delta"), b.dim());
  AlgElement a = r.element(j.at("response"), c.dim());
  const bool accepted = r.boolean_at(j, "accepted");
  return Transcript2{std::move(b), P2Challenge{std::move(c), std::move(delta)}, std::move(a), accepted};
}

P2Challenge decode_p2_challenge(std::string_view text, std::size_t expected_dim) {
  Reader r(text);
  const Json j = r.parse();
  r.keys(j, {"algebra", "delta"}, "algebra");
  Algebra c = r.algebra(j.at("algebra"));
  if (expected_dim != 0 && c.dim() != expected_dim) r.fail(Kind::dimension, "algebra", "challenge algebra has the wrong dimension");
  Isomorphism delta = r.iso(j.at("delta"), c.dim());
  return P2Challenge{std::move(c), std::move(delta)};
}

}  // namespace csazkp
