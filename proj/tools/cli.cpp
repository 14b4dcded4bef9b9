#include "cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "momentkit/charfn.hpp"
#include "momentkit/density.hpp"
#include "momentkit/error.hpp"
#include "momentkit/fourier.hpp"
#include "momentkit/hausdorff.hpp"
#include "momentkit/json_io.hpp"
#include "momentkit/named_sequences.hpp"
#include "momentkit/parallel.hpp"
#include "momentkit/richter.hpp"
#include "momentkit/sequence_ops.hpp"

namespace momentkit::cli {

namespace {

using json = nlohmann::json;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(ErrorCode::kParseError, path + ": cannot open file");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Parse errors from a file are prefixed with its path.
template <typename F>
auto with_path(const std::string& path, F&& f) {
  try {
    return f(read_file(path));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kParseError && std::string(e.what()).rfind("ParseError: " + path, 0) != 0) {
      raise(ErrorCode::kParseError, path + ": " + std::string(e.what()).substr(std::string("ParseError: ").size()));
    }
    throw;
  }
}

// Writes to a temporary sibling and renames it over the target.
void write_atomically(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  std::random_device rd;
  const fs::path tmp = target.string() + ".tmp-" + std::to_string(rd());
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) raise(ErrorCode::kParseError, path + ": cannot open for writing");
    f << content;
    f.flush();
    if (!f) {
      std::error_code ec;
      fs::remove(tmp, ec);
      raise(ErrorCode::kParseError, path + ": write failed");
    }
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    raise(ErrorCode::kParseError, path + ": rename failed");
  }
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

double parse_double(const std::string& text, const std::string& what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used == text.size()) return v;
  } catch (const std::exception&) {
  }
  raise(ErrorCode::kParseError, what + ": '" + text + "' is not a number");
}

std::vector<double> parse_doubles(const std::string& text, const std::string& what) {
  std::vector<double> v;
  for (const auto& p : split(text, ',')) v.push_back(parse_double(p, what));
  if (v.empty()) raise(ErrorCode::kParseError, what + ": empty list");
  return v;
}

// "lo:hi:step" -> inclusive regular 1-d grid.
std::vector<double> parse_range(const std::string& text, const std::string& what) {
  const auto parts = split(text, ':');
  if (parts.size() != 3) raise(ErrorCode::kParseError, what + ": expected lo:hi:step");
  const double lo = parse_double(parts[0], what), hi = parse_double(parts[1], what), step = parse_double(parts[2], what);
  if (!(step > 0.0) || hi < lo) raise(ErrorCode::kParseError, what + ": need step > 0 and lo <= hi");
  std::vector<double> out;
  for (const auto& p : linear_grid(lo, hi, step)) out.push_back(p[0]);
  return out;
}

// Tensor product of the same 1-d grid in n coordinates (first coordinate fastest).
std::vector<std::vector<double>> tensor_grid(const std::vector<double>& axis, std::size_t n) {
  std::size_t total = 1;
  for (std::size_t j = 0; j < n; ++j) total *= axis.size();
  std::vector<std::vector<double>> g(total, std::vector<double>(n));
  for (std::size_t i = 0; i < total; ++i) {
    std::size_t rest = i;
    for (std::size_t j = 0; j < n; ++j) {
      g[i][j] = axis[rest % axis.size()];
      rest /= axis.size();
    }
  }
  return g;
}

std::string format_double(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

std::string coordinate_header(const std::string& name, std::size_t n) {
  if (n == 1) return name;
  std::string h;
  for (std::size_t j = 0; j < n; ++j) h += (j ? "," : "") + name + std::to_string(j + 1);
  return h;
}

json exact_json(const std::optional<Rational>& q) { return q ? json(to_string(*q)) : json(nullptr); }

json report_json(const HausdorffReport& r) {
  json j;
  j["sums"] = r.sums;
  json exact = json::array();
  for (const auto& q : r.exact_sums) exact.push_back(exact_json(q));
  j["exact_sums"] = exact;
  j["levels"] = r.levels;
  json degrees = json::array();
  for (const auto& d : r.degrees) degrees.push_back(d.entries());
  j["degrees"] = degrees;
  j["classification"] = classification_name(r.classification);
  if (r.growth_fit) {
    j["growth_fit"] = {{"exponent", r.growth_fit->exponent},
                       {"coefficient", r.growth_fit->coefficient},
                       {"early_exponent", r.growth_fit->early_exponent},
                       {"late_exponent", r.growth_fit->late_exponent}};
  } else {
    j["growth_fit"] = nullptr;
  }
  j["condition"] = r.condition;
  j["last_quartile_variation"] = r.last_quartile_variation;
  j["note"] = r.note;
  return j;
}

json verdict_json(const RegularityVerdict& v) {
  return {{"verdict", v.positive ? "positive" : "negative"}, {"first", report_json(v.first)},
          {"second", report_json(v.second)}};
}

int exit_code_for(ErrorCode c) {
  switch (c) {
    case ErrorCode::kNotConverged:
    case ErrorCode::kSmoothingFailed:
    case ErrorCode::kOscillationUnderresolved: return kNumericalFailure;
    case ErrorCode::kInfeasible:
    case ErrorCode::kNegativeEvenMoment: return kNegative;
    default: return kInputError;
  }
}

struct Context {
  std::ostream& out;
  std::ostream& err;
  std::string output;  // empty or "-" = standard output
  unsigned threads = 0;

  void emit(const std::string& content) const {
    if (output.empty() || output == "-") {
      out << content;
      out.flush();
    } else {
      write_atomically(output, content);
    }
  }
  void emit(const json& j) const { emit(j.dump(2) + "\n"); }
  void log(const std::string& cmd, const std::string& params) const { err << "momentkit " << cmd << ": " << params << "\n"; }
};

MomentSequence load_sequence(const std::string& path) {
  return with_path(path, [](const std::string& t) { return sequence_from_json(t); });
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Moment sequence analysis: Hausdorff tests, characteristic functions, reconstruction, atomic fits",
               "momentkit"};
  app.require_subcommand(1, 1);
  app.fallthrough();
  app.set_help_all_flag("--help-all", "Show help for all subcommands");
  std::string output;
  unsigned threads = 0;
  app.add_option("-o,--output", output, "Output path (default standard output); written atomically");
  app.add_option("--threads", threads, "Worker threads (default: MOMENTKIT_THREADS or hardware concurrency)");

  std::map<CLI::App*, std::function<int(const Context&)>> handlers;
  std::string input;
  const auto add_input = [&](CLI::App* sub) {
    sub->add_option("-i,--input", input, "Moment sequence JSON")->required()->check(CLI::ExistingFile);
  };

  // moments
  auto* moments = app.add_subcommand("moments", "Moments of a density or a named sequence");
  std::string density, density_file, named;
  int max_degree = 0;
  std::size_t dimension = 1;
  bool floating = false;
  moments->add_option("--density", density, "indicator:a,b | gaussian:m,v[,half-width] | polynomial:c0,..@a,b | bump | semicircle");
  moments->add_option("--density-file", density_file, "Density JSON")->check(CLI::ExistingFile);
  moments->add_option("--named", named, "gaussian-cf | quartic-cf | cosine | dirac:c1,..,cn");
  moments->add_option("--dimension", dimension, "Dimension for named sequences")->check(CLI::PositiveNumber);
  moments->add_option("--max-degree", max_degree, "Maximal total degree D")->required()->check(CLI::NonNegativeNumber);
  moments->add_flag("--floating", floating, "Force the quadrature path");
  handlers[moments] = [&](const Context& ctx) {
    const int given = !density.empty() + !density_file.empty() + !named.empty();
    if (given != 1) raise(ErrorCode::kInvalidArgument, "give exactly one of --density, --density-file, --named");
    std::optional<MomentSequence> s;
    if (!named.empty()) {
      if (named == "gaussian-cf") {
        s = gaussian_cf_sequence(dimension, max_degree);
      } else if (named == "quartic-cf") {
        s = quartic_cf_sequence(dimension, max_degree);
      } else if (named == "cosine") {
        s = cosine_sequence(max_degree);
      } else if (named.rfind("dirac:", 0) == 0) {
        std::vector<Rational> c;
        for (const auto& p : split(named.substr(6), ',')) {
          try {
            c.push_back(parse_rational(p));
          } catch (const Error&) {
            raise(ErrorCode::kParseError, "--named: '" + p + "' is not a rational");
          }
        }
        s = dirac_sequence(c, max_degree);
      } else {
        raise(ErrorCode::kParseError, "--named: unknown sequence '" + named + "'");
      }
    } else {
      const DensitySpec spec = density.empty()
                                   ? with_path(density_file, [](const std::string& t) { return density_from_json(t); })
                                   : density_from_shorthand(density);
      s = moments_from_density(spec, max_degree, floating ? MomentPath::kFloating : MomentPath::kAuto);
    }
    ctx.emit(sequence_to_json(*s) + "\n");
    return kOk;
  };

  // dseq
  auto* dseq = app.add_subcommand("dseq", "Distributional derivative, affine pushforward or mirror of a sequence");
  add_input(dseq);
  std::string beta, affine_a, affine_b, mirror;
  dseq->add_option("--beta", beta, "Derivative multi-index, comma separated");
  dseq->add_option("--affine-a", affine_a, "Pushforward shift a (x -> a + b x), comma separated rationals");
  dseq->add_option("--affine-b", affine_b, "Pushforward scale b, comma separated rationals");
  dseq->add_option("--mirror", mirror, "Sign vector, comma separated +1/-1");
  handlers[dseq] = [&](const Context& ctx) {
    MomentSequence s = load_sequence(input);
    const std::size_t n = s.dimension();
    const auto rationals = [&](const std::string& text, const char* what) {
      std::vector<Rational> v;
      for (const auto& p : split(text, ',')) {
        try {
          v.push_back(parse_rational(p));
        } catch (const Error&) {
          raise(ErrorCode::kParseError, std::string(what) + ": '" + p + "' is not a rational");
        }
      }
      if (v.size() != n) raise(ErrorCode::kDimensionMismatch, std::string(what) + ": need " + std::to_string(n) + " entries");
      return v;
    };
    if (!affine_a.empty() || !affine_b.empty()) {
      const auto a = affine_a.empty() ? std::vector<Rational>(n, 0) : rationals(affine_a, "--affine-a");
      const auto b = affine_b.empty() ? std::vector<Rational>(n, 1) : rationals(affine_b, "--affine-b");
      s = affine_pushforward(s, a, b);
    }
    if (!mirror.empty()) {
      std::vector<int> sigma;
      for (const auto& r : rationals(mirror, "--mirror")) {
        if (r != 1 && r != -1) raise(ErrorCode::kInvalidArgument, "--mirror entries must be +1 or -1");
        sigma.push_back(r > 0 ? 1 : -1);
      }
      s = mirror_seq(s, sigma);
    }
    if (!beta.empty()) {
      std::vector<int> e;
      for (const auto& r : rationals(beta, "--beta")) {
        if (r < 0 || r.get_den() != 1) raise(ErrorCode::kInvalidArgument, "--beta entries must be nonnegative integers");
        e.push_back(static_cast<int>(r.get_num().get_si()));
      }
      s = derivative_seq(s, MultiIndex(std::move(e)));
    }
    ctx.emit(sequence_to_json(s) + "\n");
    return kOk;
  };

  // hausdorff / abscont / cr-test / mirror-verify
  int d_max = 0, r_order = 0;
  bool full_orthant = false;
  auto* hausdorff = app.add_subcommand("hausdorff", "Signed Hausdorff sums up to degree d-max");
  add_input(hausdorff);
  hausdorff->add_option("--d-max", d_max, "Largest degree")->required()->check(CLI::NonNegativeNumber);
  hausdorff->add_flag("--full-orthant", full_orthant, "All degree vectors instead of the diagonal");
  handlers[hausdorff] = [&](const Context& ctx) {
    const auto s = load_sequence(input);
    const auto rep = signed_hausdorff_test(s, d_max, {full_orthant, ctx.threads});
    json j = report_json(rep);
    j["parameters"] = {{"d_max", d_max}, {"full_orthant", full_orthant}};
    ctx.emit(j);
    return kOk;
  };

  auto* abscont = app.add_subcommand("abscont", "Absolute-continuity test (s and its derivative bounded)");
  add_input(abscont);
  abscont->add_option("--d-max", d_max, "Largest degree")->required()->check(CLI::NonNegativeNumber);
  abscont->add_flag("--full-orthant", full_orthant, "All degree vectors instead of the diagonal");
  handlers[abscont] = [&](const Context& ctx) {
    const auto v = abs_cont_test(load_sequence(input), d_max, {full_orthant, ctx.threads});
    json j = verdict_json(v);
    j["parameters"] = {{"d_max", d_max}, {"full_orthant", full_orthant}};
    ctx.emit(j);
    return v.positive ? kOk : kNegative;
  };

  auto* cr = app.add_subcommand("cr-test", "C^r regularity test");
  add_input(cr);
  cr->add_option("--r", r_order, "Regularity order r")->required()->check(CLI::NonNegativeNumber);
  cr->add_option("--d-max", d_max, "Largest degree")->required()->check(CLI::NonNegativeNumber);
  cr->add_flag("--full-orthant", full_orthant, "All degree vectors instead of the diagonal");
  handlers[cr] = [&](const Context& ctx) {
    const auto v = cr_test(load_sequence(input), r_order, d_max, {full_orthant, ctx.threads});
    json j = verdict_json(v);
    j["parameters"] = {{"r", r_order}, {"d_max", d_max}, {"full_orthant", full_orthant}};
    ctx.emit(j);
    return v.positive ? kOk : kNegative;
  };

  auto* mirror_verify = app.add_subcommand("mirror-verify", "Check a sign-orthant decomposition and C^r of each part");
  add_input(mirror_verify);
  std::string components_file;
  mirror_verify->add_option("--components", components_file,
                            "JSON { \"components\": [ { \"sigma\": [..], \"sequence\": {..} } ] }")
      ->required()
      ->check(CLI::ExistingFile);
  mirror_verify->add_option("--r", r_order, "Regularity order r")->check(CLI::NonNegativeNumber);
  mirror_verify->add_option("--d-max", d_max, "Largest degree")->required()->check(CLI::NonNegativeNumber);
  handlers[mirror_verify] = [&](const Context& ctx) {
    const auto s = load_sequence(input);
    std::map<std::vector<int>, MomentSequence> parts;
    with_path(components_file, [&](const std::string& text) {
      json j;
      try {
        j = json::parse(text);
      } catch (const json::parse_error& e) {
        raise(ErrorCode::kParseError, std::string("$: invalid JSON: ") + e.what());
      }
      if (!j.is_object() || !j.contains("components") || !j["components"].is_array()) {
        raise(ErrorCode::kParseError, "$.components: expected an array");
      }
      for (std::size_t i = 0; i < j["components"].size(); ++i) {
        const std::string path = "$.components[" + std::to_string(i) + "]";
        const json& c = j["components"][i];
        if (!c.is_object() || !c.contains("sigma") || !c["sigma"].is_array()) {
          raise(ErrorCode::kParseError, path + ".sigma: expected an array of +1/-1");
        }
        std::vector<int> sigma;
        for (const auto& v : c["sigma"]) {
          if (!v.is_number_integer() || (v.get<int>() != 1 && v.get<int>() != -1)) {
            raise(ErrorCode::kParseError, path + ".sigma: entries must be +1 or -1");
          }
          sigma.push_back(v.get<int>());
        }
        if (!c.contains("sequence")) raise(ErrorCode::kParseError, path + ".sequence: missing required field");
        try {
          parts.emplace(sigma, sequence_from_json(c["sequence"].dump()));
        } catch (const Error& e) {
          const std::string msg = e.what();
          const auto colon = msg.find(": $");
          raise(ErrorCode::kParseError, path + ".sequence" + (colon == std::string::npos ? ": " + msg : msg.substr(colon + 3)));
        }
      }
      return 0;
    });
    const auto rep = verify_mirror_decomposition(parts, s, r_order, d_max, {false, ctx.threads});
    json per = json::array();
    for (const auto& [sigma, v] : rep.per_sigma) {
      json e = verdict_json(v);
      e["sigma"] = sigma;
      per.push_back(e);
    }
    json j{{"defect", rep.defect}, {"exact_defect", exact_json(rep.exact_defect)}, {"per_sigma", per},
           {"verdict", rep.positive ? "positive" : "negative"},
           {"parameters", {{"r", r_order}, {"d_max", d_max}}}};
    ctx.emit(j);
    return rep.positive ? kOk : kNegative;
  };

  // charfn / radius / bochner
  double tol = 0.0;
  std::string z_grid, z_points;
  auto* charfn = app.add_subcommand("charfn", "Evaluate the truncated characteristic series on a z-grid (CSV)");
  add_input(charfn);
  charfn->add_option("--z-grid", z_grid, "lo:hi:step per coordinate (tensor grid)");
  charfn->add_option("--z-file", z_points, "Points JSON")->check(CLI::ExistingFile);
  charfn->add_option("--tol", tol, "Series tolerance (default 1e-12)");
  handlers[charfn] = [&](const Context& ctx) {
    const auto s = load_sequence(input);
    if (z_grid.empty() == z_points.empty()) raise(ErrorCode::kInvalidArgument, "give exactly one of --z-grid, --z-file");
    const auto pts = z_grid.empty() ? with_path(z_points, [](const std::string& t) { return points_from_json(t); })
                                    : tensor_grid(parse_range(z_grid, "--z-grid"), s.dimension());
    const double t = tol > 0.0 ? tol : 1e-12;
    ctx.log("charfn", "tol=" + format_double(t) + " points=" + std::to_string(pts.size()));
    const CharSeries c(s);
    std::vector<std::string> rows(pts.size());
    parallel_for(
        pts.size(),
        [&](std::size_t i) {
          if (pts[i].size() != s.dimension()) raise(ErrorCode::kDimensionMismatch, "z point has wrong dimension");
          EvalDiagnostics d;
          const auto v = char_eval(c, pts[i], &d, t);
          std::string row;
          for (double z : pts[i]) row += format_double(z) + ",";
          rows[i] = row + format_double(v.real()) + "," + format_double(v.imag()) + "," + format_double(d.cancellation);
        },
        ctx.threads);
    std::string csv = coordinate_header("z", s.dimension()) + ",re,im,cancellation\n";
    for (const auto& r : rows) csv += r + "\n";
    ctx.emit(csv);
    return kOk;
  };

  int k_min = 1, k_max = 0;
  auto* radius = app.add_subcommand("radius", "Support radius estimate from even moment growth");
  add_input(radius);
  radius->add_option("--k-min", k_min, "Smallest k")->check(CLI::PositiveNumber);
  radius->add_option("--k-max", k_max, "Largest k (default D/2)")->check(CLI::NonNegativeNumber);
  handlers[radius] = [&](const Context& ctx) {
    const auto est = radius_estimate(load_sequence(input), k_min, k_max);
    json trend = json::array();
    for (auto t : est.trend) trend.push_back(trend_name(t));
    json j{{"ks", est.ks},           {"values", est.values}, {"max_value", est.max_value},
           {"tail_slope", est.tail_slope}, {"trend", trend},       {"c_hat", est.c_hat},
           {"note", est.note},       {"parameters", {{"k_min", k_min}, {"k_max", est.ks.empty() ? 0 : est.ks.back()}}}};
    ctx.emit(j);
    return kOk;
  };

  std::string points_file;
  std::size_t random_count = 0;
  std::uint64_t seed = 1;
  double lo = -3.0, hi = 3.0;
  bool rescale = false;
  auto* bochner = app.add_subcommand("bochner", "Positive-semidefiniteness of (f(z_j - z_k))");
  add_input(bochner);
  bochner->add_option("--points-file", points_file, "Points JSON")->check(CLI::ExistingFile);
  bochner->add_option("--random", random_count, "Number of seeded uniform points in [lo, hi]^n");
  bochner->add_option("--seed", seed, "Seed for --random (echoed in the report)");
  bochner->add_option("--lo", lo, "Lower end for --random");
  bochner->add_option("--hi", hi, "Upper end for --random");
  bochner->add_option("--tol", tol, "PSD tolerance per point (default 1e-8)");
  bochner->add_flag("--rescale", rescale, "Divide by s_0 instead of rejecting s_0 != 1");
  handlers[bochner] = [&](const Context& ctx) {
    const auto s = load_sequence(input);
    if (points_file.empty() == (random_count == 0)) {
      raise(ErrorCode::kInvalidArgument, "give exactly one of --points-file, --random");
    }
    if (!(hi > lo)) raise(ErrorCode::kInvalidArgument, "--hi must exceed --lo");
    const auto pts = points_file.empty() ? random_points(random_count, s.dimension(), lo, hi, seed)
                                         : with_path(points_file, [](const std::string& t) { return points_from_json(t); });
    BochnerOptions o;
    if (tol > 0.0) o.tol = tol;
    o.rescale = rescale;
    o.threads = ctx.threads;
    const auto rep = bochner_test(s, pts, o);
    json j{{"points", rep.points},
           {"min_eigenvalue_full", rep.min_eigenvalue_full},
           {"min_eigenvalue_even", rep.min_eigenvalue_even},
           {"min_eigenvalue_diff", rep.min_eigenvalue_diff},
           {"psd_full", rep.psd_full},
           {"psd_even", rep.psd_even},
           {"psd_diff", rep.psd_diff},
           {"threshold", rep.threshold},
           {"hermitian_defect", rep.hermitian_defect},
           {"s0", rep.s0},
           {"rescaled", rep.rescaled},
           {"max_degree_used", rep.max_degree_used},
           {"precision_bits", rep.precision_bits},
           {"verdict", rep.psd_full && rep.psd_even && rep.psd_diff ? "positive" : "negative"}};
    json params{{"tol", o.tol}, {"series_tol", o.series_tol}};
    if (points_file.empty()) {
      params["seed"] = seed;
      params["random"] = random_count;
      params["lo"] = lo;
      params["hi"] = hi;
    }
    j["parameters"] = params;
    ctx.emit(j);
    return rep.psd_full && rep.psd_even && rep.psd_diff ? kOk : kNegative;
  };

  // reconstruct / levy / smooth-mass
  double R = 3.0;
  std::string grid_spec = "-4:4:0.1", damping = "none";
  double nonneg_tol = -1.0;
  auto* reconstruct = app.add_subcommand("reconstruct", "Density by inverse Fourier transform of the series (CSV)");
  add_input(reconstruct);
  reconstruct->add_option("--R", R, "Frequency cutoff per coordinate");
  reconstruct->add_option("--grid", grid_spec, "lo:hi:step per coordinate (tensor grid)");
  reconstruct->add_option("--damping", damping, "none | fejer");
  reconstruct->add_option("--tol", tol, "Series tolerance (default 1e-8)");
  reconstruct->add_option("--nonneg-tol", nonneg_tol, "Exit 1 when min g < -tol");
  handlers[reconstruct] = [&](const Context& ctx) {
    const auto s = load_sequence(input);
    ReconstructionOptions o;
    o.R = R;
    if (tol > 0.0) o.tol = tol;
    o.damping = parse_damping(damping);
    o.threads = ctx.threads;
    const auto grid = tensor_grid(parse_range(grid_spec, "--grid"), s.dimension());
    const auto r = reconstruct_density(s, grid, o);
    ctx.log("reconstruct", "R=" + format_double(o.R) + " tol=" + format_double(o.tol) + " damping=" +
                               std::string(damping_name(o.damping)) + " points_per_unit=" +
                               std::to_string(r.quadrature_points_per_unit) + " nodes=" +
                               std::to_string(r.diagnostics.nodes) + " max_imag_residue=" +
                               format_double(r.diagnostics.max_imag_residue) + " clean=" + (r.clean ? "true" : "false"));
    std::string csv = coordinate_header("x", s.dimension()) + ",g,imag_residue\n";
    for (std::size_t i = 0; i < grid.size(); ++i) {
      for (double x : grid[i]) csv += format_double(x) + ",";
      csv += format_double(r.values[i]) + "," + format_double(r.imag_residue[i]) + "\n";
    }
    ctx.emit(csv);
    if (nonneg_tol >= 0.0) {
      const auto v = nonnegativity_check(r, nonneg_tol);
      ctx.log("reconstruct", "min=" + format_double(v.min_value) + " nonnegative=" + (v.nonnegative ? "true" : "false"));
      return v.nonnegative ? kOk : kNegative;
    }
    return kOk;
  };

  double a = 0.0, b = 1.0, T = 200.0;
  auto* levy = app.add_subcommand("levy", "Interval mass by Levy inversion (n = 1)");
  add_input(levy);
  levy->add_option("--a", a, "Left end")->required();
  levy->add_option("--b", b, "Right end")->required();
  levy->add_option("--T", T, "Frequency cutoff");
  levy->add_option("--tol", tol, "Series tolerance (default 1e-8)");
  handlers[levy] = [&](const Context& ctx) {
    LevyOptions o;
    if (tol > 0.0) o.tol = tol;
    o.threads = ctx.threads;
    const auto m = levy_interval_mass(load_sequence(input), a, b, T, o);
    json j{{"mass", m.value}, {"imag_residue", m.imag_residue}, {"nodes", m.nodes}, {"degree_used", m.degree_used},
           {"precision_bits", m.precision_bits}, {"frequency", m.frequency},
           {"parameters", {{"a", a}, {"b", b}, {"T", T}, {"tol", o.tol}}}};
    ctx.emit(j);
    return kOk;
  };

  std::string x0_text = "0";
  double sigma = 0.1;
  auto* smooth_mass = app.add_subcommand("smooth-mass", "Integral of the N(x0, sigma^2) density against the measure");
  add_input(smooth_mass);
  smooth_mass->add_option("--x0", x0_text, "Center, comma separated");
  smooth_mass->add_option("--sigma", sigma, "Standard deviation")->required();
  smooth_mass->add_option("--R", R, "Frequency cutoff per coordinate");
  smooth_mass->add_option("--tol", tol, "Series tolerance (default 1e-8)");
  handlers[smooth_mass] = [&](const Context& ctx) {
    TestMassOptions o;
    if (tol > 0.0) o.tol = tol;
    o.threads = ctx.threads;
    const auto x0 = parse_doubles(x0_text, "--x0");
    const auto m = gaussian_test_mass(load_sequence(input), x0, sigma, R, o);
    json j{{"mass", m.value}, {"imag_residue", m.imag_residue}, {"nodes", m.nodes}, {"degree_used", m.degree_used},
           {"precision_bits", m.precision_bits},
           {"parameters", {{"x0", x0}, {"sigma", sigma}, {"R", R}, {"tol", o.tol}}}};
    ctx.emit(j);
    return kOk;
  };

  // richter / smooth
  std::string functional_file, atoms_file, family = "gaussian", sigma_grid;
  std::size_t grid_points = 0;
  double weight_floor = 1e-10;
  const auto atomic_json = [](const AtomicRepresentation& r) {
    json atoms = json::array();
    std::vector<double> weights;
    for (const auto& at : r.atoms) {
      atoms.push_back({{"x", at.x}, {"weight", at.weight}});
      weights.push_back(at.weight);
    }
    return json{{"atoms", atoms}, {"weights", weights}, {"residual", r.residual},
                {"diagnostics", {{"lp_feasible", r.lp_feasible}, {"refined", r.refined}, {"lp_iterations", r.lp_iterations}}}};
  };
  const auto load_functional = [&]() {
    return with_path(functional_file, [](const std::string& t) { return functional_from_json(t); });
  };

  auto* richter = app.add_subcommand("richter", "Atomic representation of a truncated functional");
  richter->add_option("--functional", functional_file, "Functional JSON")->required()->check(CLI::ExistingFile);
  richter->add_option("--grid-points", grid_points, "Candidate points per axis (default 201 in 1-d, 21 otherwise)");
  richter->add_option("--tol", tol, "Residual tolerance (default 1e-10)");
  handlers[richter] = [&](const Context& ctx) {
    const auto L = load_functional();
    AtomicOptions o;
    if (tol > 0.0) o.tol = tol;
    const auto rep = atomic_decompose(L, make_candidate_grid(L, grid_points), o);
    json j = atomic_json(rep);
    j["parameters"] = {{"tol", o.tol}, {"grid_points", grid_points}};
    ctx.emit(j);
    return kOk;
  };

  auto* smooth = app.add_subcommand("smooth", "Absolutely continuous representation by smoothing atoms");
  smooth->add_option("--functional", functional_file, "Functional JSON")->required()->check(CLI::ExistingFile);
  smooth->add_option("--atoms", atoms_file, "Atomic representation JSON (default: computed)")->check(CLI::ExistingFile);
  smooth->add_option("--family", family, "gaussian | mollifier | box");
  smooth->add_option("--sigma-grid", sigma_grid, "Comma separated sigma values (default 0.1,...,0.001)");
  smooth->add_option("--tol", tol, "Residual tolerance (default 1e-8)");
  smooth->add_option("--weight-floor", weight_floor, "Smallest accepted weight");
  handlers[smooth] = [&](const Context& ctx) {
    const auto L = load_functional();
    AtomicRepresentation atomic;
    if (atoms_file.empty()) {
      atomic = atomic_decompose(L, make_candidate_grid(L));
    } else {
      atomic = with_path(atoms_file, [](const std::string& t) { return atomic_from_json(t); });
      atomic.residual = atomic_residual(L, atomic.atoms);
    }
    DiracFamily fam{parse_family(family), sigma_grid.empty() ? DiracFamily::default_sigmas()
                                                               : parse_doubles(sigma_grid, "--sigma-grid")};
    SmoothOptions o;
    if (tol > 0.0) o.tol = tol;
    o.weight_floor = weight_floor;
    const auto sweep_json = [](const std::vector<SweepEntry>& sweep) {
      json arr = json::array();
      for (const auto& e : sweep) {
        arr.push_back({{"sigma", e.sigma}, {"residual", e.residual}, {"min_weight", e.min_weight},
                       {"atoms", e.atoms}, {"accepted", e.accepted}});
      }
      return arr;
    };
    json params{{"family", family_name(fam.kind)}, {"sigma_grid", fam.sigmas}, {"tol", o.tol},
                {"weight_floor", o.weight_floor}};
    try {
      const auto r = smooth_representation(atomic, L, fam, o);
      json atoms = json::array();
      std::vector<double> weights, sigmas;
      for (const auto& at : r.atoms) {
        atoms.push_back({{"x", at.x}, {"sigma", at.sigma}, {"weight", at.weight}});
        weights.push_back(at.weight);
        sigmas.push_back(at.sigma);
      }
      json j{{"family", family_name(r.family)},
             {"atoms", atoms},
             {"weights", weights},
             {"sigmas", sigmas},
             {"residual", r.residual},
             {"diagnostics",
              {{"condition", r.condition}, {"min_weight", r.min_weight}, {"ridge", r.ridge},
               {"added_atoms", r.added_atoms}, {"atomic", atomic_json(atomic)}, {"sweep", sweep_json(r.sweep)}}},
             {"parameters", params}};
      ctx.emit(j);
      return kOk;
    } catch (const SmoothingFailedError& e) {
      json j{{"error", "SmoothingFailed"},
             {"message", e.what()},
             {"diagnostics", {{"atomic", atomic_json(atomic)}, {"sweep", sweep_json(e.sweep())}}},
             {"parameters", params}};
      ctx.emit(j);
      ctx.err << e.what() << "\n";
      return kNumericalFailure;
    }
  };

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInputError;
  }

  const Context ctx{out, err, output, threads};
  for (auto& [sub, handler] : handlers) {
    if (!sub->parsed()) continue;
    try {
      return handler(ctx);
    } catch (const Error& e) {
      err << "momentkit " << sub->get_name() << ": " << e.what() << "\n";
      return exit_code_for(e.code());
    } catch (const std::exception& e) {
      err << "momentkit " << sub->get_name() << ": " << e.what() << "\n";
      return kInputError;
    }
  }
  return kInputError;
}

}  // namespace momentkit::cli
