#include "momentkit/json_io.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "json.hpp"
#include "momentkit/error.hpp"

namespace momentkit {

namespace {

using json = nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
  raise(ErrorCode::kParseError, path + ": " + msg);
}

json parse_text(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    raise(ErrorCode::kParseError, std::string("$: invalid JSON: ") + e.what());
  }
}

const json& field(const json& obj, const std::string& path, const char* name) {
  if (!obj.is_object()) fail(path, "expected an object");
  const auto it = obj.find(name);
  if (it == obj.end()) fail(path + "." + name, "missing required field");
  return *it;
}

const json* optional_field(const json& obj, const char* name) {
  const auto it = obj.find(name);
  return it == obj.end() || it->is_null() ? nullptr : &*it;
}

const json& array_field(const json& obj, const std::string& path, const char* name) {
  const json& a = field(obj, path, name);
  if (!a.is_array()) fail(path + "." + name, "expected an array");
  return a;
}

std::string at(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

double number(const json& j, const std::string& path) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    try {
      return to_double(parse_rational(j.get<std::string>()));
    } catch (const Error&) {
    }
  }
  fail(path, "expected a number");
}

long long integer(const json& j, const std::string& path) {
  if (!j.is_number_integer()) fail(path, "expected an integer");
  return j.get<long long>();
}

BigInt big_integer(const json& j, const std::string& path) {
  if (j.is_number_integer()) {
    if (j.is_number_unsigned()) return BigInt(std::to_string(j.get<unsigned long long>()));
    return BigInt(std::to_string(j.get<long long>()));
  }
  if (j.is_string()) {
    try {
      return BigInt(j.get<std::string>());
    } catch (const std::invalid_argument&) {
    }
  }
  fail(path, "expected an integer or a decimal integer string");
}

Rational rational(const json& j, const std::string& path) {
  try {
    if (j.is_number_integer()) return Rational(big_integer(j, path));
    if (j.is_number_float()) return parse_rational(j.dump());
    if (j.is_string()) return parse_rational(j.get<std::string>());
  } catch (const Error&) {
  }
  fail(path, "expected a rational (integer, decimal or \"p/q\" string)");
}

std::vector<double> number_list(const json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array of numbers");
  std::vector<double> v;
  for (std::size_t i = 0; i < j.size(); ++i) v.push_back(number(j[i], at(path, i)));
  return v;
}

std::vector<Rational> rational_list(const json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array of rationals");
  std::vector<Rational> v;
  for (std::size_t i = 0; i < j.size(); ++i) v.push_back(rational(j[i], at(path, i)));
  return v;
}

MultiIndex multi_index(const json& j, const std::string& path, std::size_t n) {
  if (!j.is_array()) fail(path, "expected an array of nonnegative integers");
  if (j.size() != n) fail(path, "has " + std::to_string(j.size()) + " entries, dimension is " + std::to_string(n));
  std::vector<int> e;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const long long v = integer(j[i], at(path, i));
    if (v < 0 || v > std::numeric_limits<int>::max()) fail(at(path, i), "must be a nonnegative int");
    e.push_back(static_cast<int>(v));
  }
  return MultiIndex(std::move(e));
}

json integer_json(const BigInt& z) {
  if (z.fits_slong_p()) return z.get_si();
  return z.get_str();
}

Box box(const json& j, const std::string& path, std::size_t n) {
  Box b{rational_list(field(j, path, "lower"), path + ".lower"), rational_list(field(j, path, "upper"), path + ".upper")};
  if (b.lower.size() != n || b.upper.size() != n) fail(path, "corners must have " + std::to_string(n) + " entries");
  for (std::size_t i = 0; i < n; ++i) {
    if (!(b.lower[i] < b.upper[i])) fail(path + ".lower", "must be below upper in every coordinate");
  }
  return b;
}

Polynomial polynomial(const json& j, const std::string& path, std::size_t n) {
  if (j.is_array()) {
    if (n != 1) fail(path, "coefficient lists are only valid in dimension 1");
    return Polynomial::univariate(rational_list(j, path));
  }
  const json& terms = array_field(j, path, "terms");
  Polynomial p(n);
  for (std::size_t i = 0; i < terms.size(); ++i) {
    const std::string tp = at(path + ".terms", i);
    p.add_term(multi_index(field(terms[i], tp, "exponent"), tp + ".exponent", n),
               rational(field(terms[i], tp, "coefficient"), tp + ".coefficient"));
  }
  return p;
}

std::size_t dimension_of(const json& j, const std::string& path, std::size_t fallback) {
  if (const json* d = optional_field(j, "dimension")) {
    const long long n = integer(*d, path + ".dimension");
    if (n < 1) fail(path + ".dimension", "must be at least 1");
    return static_cast<std::size_t>(n);
  }
  return fallback;
}

DensitySpec density(const json& j, const std::string& path) {
  const json& k = field(j, path, "kind");
  if (!k.is_string()) fail(path + ".kind", "expected a string");
  const std::string kind = k.get<std::string>();
  if (kind == "indicator") {
    const std::size_t n = dimension_of(j, path, field(field(j, path, "box"), path + ".box", "lower").size());
    return DensitySpec::indicator(box(field(j, path, "box"), path + ".box", n));
  }
  if (kind == "piecewise") {
    const json& pieces = array_field(j, path, "pieces");
    if (pieces.empty()) fail(path + ".pieces", "needs at least one piece");
    const std::size_t n0 = field(field(pieces[0], at(path + ".pieces", 0), "box"), at(path + ".pieces", 0) + ".box", "lower").size();
    const std::size_t n = dimension_of(j, path, n0);
    std::vector<PolynomialPiece> ps;
    for (std::size_t i = 0; i < pieces.size(); ++i) {
      const std::string pp = at(path + ".pieces", i);
      ps.push_back({box(field(pieces[i], pp, "box"), pp + ".box", n),
                    polynomial(field(pieces[i], pp, "polynomial"), pp + ".polynomial", n)});
    }
    return DensitySpec::piecewise(std::move(ps));
  }
  if (kind == "gaussian") {
    std::vector<double> mean = number_list(field(j, path, "mean"), path + ".mean");
    std::vector<double> var = number_list(field(j, path, "variance"), path + ".variance");
    if (mean.size() != var.size() || mean.empty()) fail(path + ".variance", "must match mean in length");
    for (std::size_t i = 0; i < var.size(); ++i) {
      if (!(var[i] > 0.0)) fail(at(path + ".variance", i), "must be positive");
    }
    std::optional<Box> trunc;
    if (const json* t = optional_field(j, "truncation")) trunc = box(*t, path + ".truncation", mean.size());
    return DensitySpec::gaussian(std::move(mean), std::move(var), std::move(trunc));
  }
  if (kind == "closed-form") {
    const json& id = field(j, path, "id");
    const std::size_t n = dimension_of(j, path, 1);
    if (id == "bump") return DensitySpec::closed_form(ClosedFormId::kBump, n);
    if (id == "semicircle") return DensitySpec::closed_form(ClosedFormId::kSemicircle, n);
    fail(path + ".id", "expected \"bump\" or \"semicircle\"");
  }
  if (kind == "mixture") {
    const json& comps = array_field(j, path, "components");
    if (comps.empty()) fail(path + ".components", "needs at least one component");
    std::vector<MixtureComponent> cs;
    for (std::size_t i = 0; i < comps.size(); ++i) {
      const std::string cp = at(path + ".components", i);
      cs.push_back({rational(field(comps[i], cp, "weight"), cp + ".weight"),
                    std::make_shared<const DensitySpec>(density(field(comps[i], cp, "spec"), cp + ".spec"))});
    }
    try {
      return DensitySpec::mixture(std::move(cs));
    } catch (const Error& e) {
      fail(path + ".components", e.what());
    }
  }
  fail(path + ".kind", "unknown kind '" + kind + "' (expected indicator, piecewise, gaussian, closed-form or mixture)");
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

std::vector<Rational> rationals_from_csv(std::string_view s, const std::string& what) {
  std::vector<Rational> v;
  for (const auto& part : split(s, ',')) {
    try {
      v.push_back(parse_rational(part));
    } catch (const Error&) {
      raise(ErrorCode::kParseError, what + ": '" + part + "' is not a rational");
    }
  }
  return v;
}

}  // namespace

std::string sequence_to_json(const MomentSequence& s, int indent) {
  json j;
  j["dimension"] = s.dimension();
  j["max_degree"] = s.max_degree();
  j["exact"] = s.is_exact();
  json entries = json::array();
  for (std::size_t p = 0; p < s.size(); ++p) {
    const auto v = s.value_at(p);
    json e;
    e["alpha"] = s.indices().at(p).entries();
    e["re"] = std::isfinite(v.real()) ? json(v.real()) : json(nullptr);
    if (v.imag() != 0.0) e["im"] = v.imag();
    entries.push_back(std::move(e));
  }
  j["entries"] = std::move(entries);
  if (s.is_exact()) {
    json rats = json::array();
    for (std::size_t p = 0; p < s.size(); ++p) {
      const Rational& q = s.exact_at(p);
      rats.push_back({{"alpha", s.indices().at(p).entries()},
                      {"num", integer_json(q.get_num())},
                      {"den", integer_json(q.get_den())}});
    }
    j["rationals"] = std::move(rats);
  }
  return j.dump(indent);
}

MomentSequence sequence_from_json(std::string_view text) {
  const json j = parse_text(text);
  const std::string root = "$";
  const long long n = integer(field(j, root, "dimension"), "$.dimension");
  if (n < 1) fail("$.dimension", "must be at least 1");
  const long long D = integer(field(j, root, "max_degree"), "$.max_degree");
  if (D < 0 || D > 100000) fail("$.max_degree", "must be between 0 and 100000");
  bool exact = false;
  if (const json* e = optional_field(j, "exact")) {
    if (!e->is_boolean()) fail("$.exact", "expected a boolean");
    exact = e->get<bool>();
  }
  const auto set = index_set(static_cast<std::size_t>(n), static_cast<int>(D));
  std::vector<bool> seen(set->size(), false);

  const auto position = [&](const json& alpha, const std::string& path) {
    const MultiIndex a = multi_index(alpha, path, static_cast<std::size_t>(n));
    if (a.total() > D) fail(path, "total degree " + std::to_string(a.total()) + " exceeds max_degree");
    const std::size_t p = set->position(a);
    if (seen[p]) fail(path, "duplicate multi-index " + a.to_string());
    seen[p] = true;
    return p;
  };
  const auto require_complete = [&](const std::string& path) {
    for (std::size_t p = 0; p < seen.size(); ++p) {
      if (!seen[p]) fail(path, "missing multi-index " + set->at(p).to_string());
    }
  };

  if (exact) {
    const json& rats = array_field(j, root, "rationals");
    std::vector<Rational> values(set->size());
    for (std::size_t i = 0; i < rats.size(); ++i) {
      const std::string rp = at("$.rationals", i);
      const std::size_t p = position(field(rats[i], rp, "alpha"), rp + ".alpha");
      const BigInt num = big_integer(field(rats[i], rp, "num"), rp + ".num");
      const BigInt den = big_integer(field(rats[i], rp, "den"), rp + ".den");
      if (den == 0) fail(rp + ".den", "must be nonzero");
      values[p] = Rational(num, den);
      values[p].canonicalize();
    }
    require_complete("$.rationals");
    return MomentSequence::from_exact_values(static_cast<std::size_t>(n), static_cast<int>(D), std::move(values));
  }

  const json& entries = array_field(j, root, "entries");
  std::vector<std::complex<double>> values(set->size());
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const std::string ep = at("$.entries", i);
    const std::size_t p = position(field(entries[i], ep, "alpha"), ep + ".alpha");
    const double re = number(field(entries[i], ep, "re"), ep + ".re");
    double im = 0.0;
    if (const json* v = optional_field(entries[i], "im")) im = number(*v, ep + ".im");
    values[p] = {re, im};
  }
  require_complete("$.entries");
  return MomentSequence::from_values(static_cast<std::size_t>(n), static_cast<int>(D), std::move(values));
}

DensitySpec density_from_json(std::string_view text) { return density(parse_text(text), "$"); }

DensitySpec density_from_shorthand(std::string_view text) {
  const std::string s(text);
  if (s == "bump") return DensitySpec::closed_form(ClosedFormId::kBump);
  if (s == "semicircle") return DensitySpec::closed_form(ClosedFormId::kSemicircle);
  const auto colon = s.find(':');
  if (colon == std::string::npos) {
    raise(ErrorCode::kParseError, "density '" + s + "': expected indicator:a,b, gaussian:m,v, polynomial:c0,..@a,b, bump or semicircle");
  }
  const std::string kind = s.substr(0, colon), args = s.substr(colon + 1);
  if (kind == "indicator") {
    const auto v = rationals_from_csv(args, "indicator");
    if (v.size() != 2 || !(v[0] < v[1])) raise(ErrorCode::kParseError, "indicator: expected a,b with a < b");
    return DensitySpec::indicator(Box{{v[0]}, {v[1]}});
  }
  if (kind == "gaussian") {
    const auto v = rationals_from_csv(args, "gaussian");
    if (v.size() < 2 || v.size() > 3 || !(v[1] > 0)) {
      raise(ErrorCode::kParseError, "gaussian: expected mean,variance[,half-width] with variance > 0");
    }
    std::optional<Box> trunc;
    if (v.size() == 3) {
      if (!(v[2] > 0)) raise(ErrorCode::kParseError, "gaussian: half-width must be positive");
      trunc = Box{{v[0] - v[2]}, {v[0] + v[2]}};
    }
    return DensitySpec::gaussian({to_double(v[0])}, {to_double(v[1])}, std::move(trunc));
  }
  if (kind == "polynomial") {
    const auto amp = args.find('@');
    if (amp == std::string::npos) raise(ErrorCode::kParseError, "polynomial: expected c0,c1,...@a,b");
    const auto c = rationals_from_csv(args.substr(0, amp), "polynomial");
    const auto ab = rationals_from_csv(args.substr(amp + 1), "polynomial interval");
    if (ab.size() != 2 || !(ab[0] < ab[1])) raise(ErrorCode::kParseError, "polynomial: interval must be a,b with a < b");
    return DensitySpec::polynomial_on(Polynomial::univariate(c), ab[0], ab[1]);
  }
  raise(ErrorCode::kParseError, "density: unknown kind '" + kind + "'");
}

TruncatedFunctional functional_from_json(std::string_view text) {
  const json j = parse_text(text);
  TruncatedFunctional L;
  const json& dom = field(j, "$", "domain");
  L.domain.lower = number_list(field(dom, "$.domain", "lower"), "$.domain.lower");
  L.domain.upper = number_list(field(dom, "$.domain", "upper"), "$.domain.upper");
  const std::size_t n = L.domain.lower.size();
  if (n == 0 || L.domain.upper.size() != n) fail("$.domain", "lower and upper must be nonempty and equally long");
  for (std::size_t i = 0; i < n; ++i) {
    if (!(L.domain.lower[i] < L.domain.upper[i])) fail("$.domain.lower", "must be below upper in every coordinate");
  }

  const json& basis = array_field(j, "$", "basis");
  if (basis.empty()) fail("$.basis", "needs at least one function");
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const std::string bp = at("$.basis", i);
    const json& b = basis[i];
    if (!b.is_object()) fail(bp, "expected an object");
    std::optional<BasisFunction> f;
    if (const json* p = optional_field(b, "polynomial")) {
      f = BasisFunction::polynomial(polynomial(*p, bp + ".polynomial", n));
    } else if (const json* name = optional_field(b, "builtin")) {
      if (*name != "discontinuous_f2") fail(bp + ".builtin", "unknown builtin (expected \"discontinuous_f2\")");
      if (n != 1) fail(bp + ".builtin", "discontinuous_f2 is one-dimensional");
      f = discontinuous_f2();
    } else {
      fail(bp, "expected a \"polynomial\" or \"builtin\" field");
    }
    if (const json* ov = optional_field(b, "overrides")) {
      if (!ov->is_array()) fail(bp + ".overrides", "expected an array");
      for (std::size_t k = 0; k < ov->size(); ++k) {
        const std::string op = at(bp + ".overrides", k);
        auto point = number_list(field((*ov)[k], op, "at"), op + ".at");
        if (point.size() != n) fail(op + ".at", "must have " + std::to_string(n) + " coordinates");
        f->with_override(std::move(point), number(field((*ov)[k], op, "value"), op + ".value"));
      }
    }
    if (const json* label = optional_field(b, "label")) {
      if (!label->is_string()) fail(bp + ".label", "expected a string");
    }
    L.basis.push_back(std::move(*f));
  }
  L.values = number_list(field(j, "$", "values"), "$.values");
  if (L.values.size() != L.basis.size()) {
    fail("$.values", "has " + std::to_string(L.values.size()) + " entries for " + std::to_string(L.basis.size()) +
                         " basis functions");
  }
  return L;
}

std::string atomic_to_json(const AtomicRepresentation& r, int indent) {
  json atoms = json::array();
  for (const auto& a : r.atoms) atoms.push_back({{"x", a.x}, {"weight", a.weight}});
  json j{{"atoms", atoms}, {"residual", r.residual}, {"lp_feasible", r.lp_feasible}, {"refined", r.refined}};
  return j.dump(indent);
}

AtomicRepresentation atomic_from_json(std::string_view text) {
  const json j = parse_text(text);
  AtomicRepresentation r;
  const json& atoms = array_field(j, "$", "atoms");
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    const std::string ap = at("$.atoms", i);
    Atom a{number_list(field(atoms[i], ap, "x"), ap + ".x"), number(field(atoms[i], ap, "weight"), ap + ".weight")};
    if (!(a.weight > 0.0)) fail(ap + ".weight", "must be positive");
    r.atoms.push_back(std::move(a));
  }
  if (const json* res = optional_field(j, "residual")) r.residual = number(*res, "$.residual");
  return r;
}

std::vector<std::vector<double>> points_from_json(std::string_view text) {
  const json j = parse_text(text);
  const json* arr = &j;
  std::string path = "$";
  if (j.is_object()) {
    arr = &array_field(j, "$", "points");
    path = "$.points";
  }
  if (!arr->is_array()) fail(path, "expected an array of points");
  std::vector<std::vector<double>> pts;
  for (std::size_t i = 0; i < arr->size(); ++i) pts.push_back(number_list((*arr)[i], at(path, i)));
  for (std::size_t i = 1; i < pts.size(); ++i) {
    if (pts[i].size() != pts[0].size()) fail(at(path, i), "dimension differs from the first point");
  }
  return pts;
}

}  // namespace momentkit
