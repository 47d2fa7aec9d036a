#include "culift/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <thread>

#include "culift/io.hpp"
#include "culift/lifting.hpp"
#include "culift/metrics.hpp"

namespace culift::experiment {

using nlohmann::json;

namespace {

constexpr const char* kShapes[] = {"disk", "segment", "annulus"};
constexpr double kPi = 3.14159265358979323846;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

bool known_shape(std::string_view s) {
  return s == "mixed" || std::find(std::begin(kShapes), std::end(kShapes), s) != std::end(kShapes);
}

}  // namespace

std::string format_real(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return {buf, res.ptr};
}

void ExperimentConfig::validate() const {
  if (n_range.lo < 1 || n_range.lo > n_range.hi) throw std::invalid_argument("config: bad n_range");
  if (atom_range.lo < 1 || atom_range.lo > atom_range.hi) throw std::invalid_argument("config: bad atom_range");
  if (delta_list.empty()) throw std::invalid_argument("config: delta_list is empty");
  for (double d : delta_list)
    if (!(d > 0.0) || !std::isfinite(d)) throw std::invalid_argument("config: deltas must be positive");
  if (!(grid.h > 0.0) || !std::isfinite(grid.h)) throw std::invalid_argument("config: h must be positive");
  if (!known_shape(grid.shape)) throw std::invalid_argument("config: unknown grid shape " + grid.shape);
  if (threads < 1) throw std::invalid_argument("config: threads must be at least 1");
}

ExperimentConfig config_from_json(const json& j) {
  ExperimentConfig c;
  try {
    if (!j.is_object()) throw std::invalid_argument("config: expected an object");
    if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("trials")) c.trials = j.at("trials").get<std::size_t>();
    auto range = [&](const char* key, IntRange& r) {
      if (!j.contains(key)) return;
      const auto& v = j.at(key);
      if (!v.is_array() || v.size() != 2) throw std::invalid_argument(std::string("config: ") + key + " must be [lo, hi]");
      r = {v[0].get<std::int64_t>(), v[1].get<std::int64_t>()};
    };
    range("n_range", c.n_range);
    range("atom_range", c.atom_range);
    if (j.contains("delta_list")) c.delta_list = j.at("delta_list").get<std::vector<double>>();
    if (j.contains("grid")) {
      const auto& g = j.at("grid");
      if (g.contains("shape")) c.grid.shape = g.at("shape").get<std::string>();
      if (g.contains("h")) c.grid.h = g.at("h").get<double>();
    }
    if (j.contains("out")) c.out = j.at("out").get<std::string>();
    if (j.contains("threads")) c.threads = j.at("threads").get<std::size_t>();
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("config: ") + e.what());
  }
  c.validate();
  return c;
}

json to_json(const ExperimentConfig& c) {
  return {
      {"seed", c.seed},
      {"trials", c.trials},
      {"n_range", {c.n_range.lo, c.n_range.hi}},
      {"atom_range", {c.atom_range.lo, c.atom_range.hi}},
      {"delta_list", c.delta_list},
      {"grid", {{"shape", c.grid.shape}, {"h", c.grid.h}}},
  };
}

double Rng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

std::int64_t Rng::integer(std::int64_t lo, std::int64_t hi) {
  if (lo > hi) throw std::invalid_argument("rng: empty range");
  const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
  if (span == 0) return static_cast<std::int64_t>(engine_());
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % span;
  std::uint64_t v;
  do {
    v = engine_();
  } while (v >= limit);
  return lo + static_cast<std::int64_t>(v % span);
}

double Rng::normal() {
  const double u = 1.0 - uniform();
  const double v = uniform();
  return std::sqrt(-2.0 * std::log(u)) * std::cos(2.0 * kPi * v);
}

Complex Rng::in_disk(double radius) {
  const double r = radius * std::sqrt(uniform());
  return std::polar(r, 2.0 * kPi * uniform());
}

std::uint64_t derive_seed(std::uint64_t seed, std::string_view suite, std::uint64_t id) {
  return splitmix64(splitmix64(seed ^ fnv1a(suite)) + id);
}

RegionPtr make_region(std::string_view shape, double h) {
  if (!(h > 0.0)) throw std::invalid_argument("make_region: h must be positive");
  if (shape == "disk" || shape == "annulus") {
    // lattice plus boundary points covers to about 0.75 spacing; shrink until the measured radius fits
    for (double spacing = h / 0.76;; spacing *= 0.98) {
      auto r = shape == "disk" ? Region::disk(0.0, 1.0, spacing) : Region::annulus(0.0, 0.5, 1.0, spacing);
      if (r->resolution() <= h) return r;
    }
  }
  if (shape == "segment") {
    const auto count = static_cast<std::size_t>(std::ceil(2.0 / (2.0 * h))) + 1;
    return Region::segment(Complex{-1.0, 0.0}, Complex{1.0, 0.0}, std::max<std::size_t>(count, 2));
  }
  throw std::invalid_argument("make_region: unknown shape " + std::string(shape));
}

RankMeasure random_measure(Rng& rng, const RegionPtr& region, std::uint64_t n, std::uint64_t mass, std::size_t atoms,
                           double jitter) {
  if (!(jitter >= 0.0)) throw std::invalid_argument("random_measure: negative jitter");
  if (mass == 0) return {region, n, {}};
  if (atoms == 0 || atoms > mass || atoms > region->size())
    throw std::invalid_argument("random_measure: bad atom count");
  // Partial Fisher-Yates for distinct grid points.
  std::vector<std::size_t> idx(region->size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  for (std::size_t i = 0; i < atoms; ++i) {
    const auto j = static_cast<std::size_t>(rng.integer(static_cast<std::int64_t>(i), static_cast<std::int64_t>(idx.size() - 1)));
    std::swap(idx[i], idx[j]);
  }
  // Random composition: atoms-1 distinct cut points in [1, mass-1].
  std::vector<std::uint64_t> cuts;
  while (cuts.size() + 1 < atoms) {
    const auto c = static_cast<std::uint64_t>(rng.integer(1, static_cast<std::int64_t>(mass) - 1));
    if (std::find(cuts.begin(), cuts.end(), c) == cuts.end()) cuts.push_back(c);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.insert(cuts.begin(), 0);
  cuts.push_back(mass);

  std::vector<Atom> out;
  for (std::size_t i = 0; i < atoms; ++i) {
    Complex z = region->point(idx[i]);
    if (jitter > 0.0) z += rng.in_disk(jitter);
    out.push_back({z, cuts[i + 1] - cuts[i]});
  }
  return {region, n, std::move(out)};
}

CMatrix random_unitary(Rng& rng, Eigen::Index n) {
  CMatrix g(n, n);
  for (Eigen::Index r = 0; r < n; ++r)
    for (Eigen::Index c = 0; c < n; ++c) g(r, c) = {rng.normal(), rng.normal()};
  Eigen::HouseholderQR<CMatrix> qr(g);
  return qr.householderQ() * CMatrix::Identity(n, n);
}

NormalMatrix random_normal(Rng& rng, Eigen::Index n, double radius) {
  std::vector<Complex> eig;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!eig.empty() && rng.uniform() < 0.3)
      eig.push_back(eig[static_cast<std::size_t>(rng.integer(0, static_cast<std::int64_t>(eig.size()) - 1))]);
    else
      eig.push_back(rng.in_disk(radius));
  }
  return NormalMatrix::from_spectrum(std::move(eig), random_unitary(rng, n));
}

std::vector<ContinuousFunction> function_basket() {
  const double inf = std::numeric_limits<double>::infinity();
  return {
      {"z", [](Complex z) { return z; }, 1.0},
      {"conj", [](Complex z) { return std::conj(z); }, 1.0},
      {"re", [](Complex z) { return Complex{z.real(), 0.0}; }, 1.0},
      {"abs", [](Complex z) { return Complex{std::abs(z), 0.0}; }, 1.0},
      {"abs2", [](Complex z) { return Complex{std::norm(z), 0.0}; }, 4.0},
      {"exp", [](Complex z) { return std::exp(z); }, std::exp(2.0)},
      {"cube", [](Complex z) { return z * z * z; }, 12.0},
      {"sqrt_abs", [](Complex z) { return Complex{std::sqrt(std::abs(z)), 0.0}; }, inf},
      {"z_conj2", [](Complex z) { return z * std::conj(z) * std::conj(z); }, 12.0},
      {"trig", [](Complex z) { return Complex{std::sin(3.0 * z.real()), std::cos(2.0 * z.imag())}; }, 3.0},
  };
}

std::size_t SuiteReport::passed() const {
  return static_cast<std::size_t>(std::count_if(rows.begin(), rows.end(), [](const Row& r) { return r.pass; }));
}

std::size_t SuiteReport::covers() const {
  return std::accumulate(rows.begin(), rows.end(), std::size_t{0}, [](std::size_t s, const Row& r) { return s + r.covers; });
}

std::size_t SuiteReport::cover_failures() const {
  return std::accumulate(rows.begin(), rows.end(), std::size_t{0},
                         [](std::size_t s, const Row& r) { return s + r.cover_failures; });
}

bool SuiteReport::ok() const { return !rows.empty() && passed() == rows.size() && cover_failures() == 0; }

// ---------------------------------------------------------------------------
// Suites

namespace {

struct Context {
  const ExperimentConfig& cfg;
  std::map<std::string, RegionPtr, std::less<>> regions;

  const RegionPtr& region(std::string_view shape) const { return regions.find(shape)->second; }
  std::string shape_for(std::uint64_t id) const {
    return cfg.grid.shape == "mixed" ? kShapes[id % 3] : cfg.grid.shape;
  }
  std::uint64_t draw_n(Rng& rng) const {
    return static_cast<std::uint64_t>(rng.integer(cfg.n_range.lo, cfg.n_range.hi));
  }
  std::size_t draw_atoms(Rng& rng, std::uint64_t mass, std::size_t cap) const {
    const auto top = std::min<std::int64_t>({cfg.atom_range.hi, static_cast<std::int64_t>(mass), static_cast<std::int64_t>(cap)});
    const auto bottom = std::min<std::int64_t>(cfg.atom_range.lo, top);
    return static_cast<std::size_t>(rng.integer(bottom, top));
  }
};

std::string str(std::uint64_t v) { return std::to_string(v); }

double nudge(const RegionPtr& region) { return 0.45 * region->resolution(); }
std::string str(bool b) { return b ? "1" : "0"; }

// The same multiset, split into random pieces and shuffled.
RankMeasure resplit(Rng& rng, const RankMeasure& a) {
  std::vector<Atom> pieces;
  for (const auto& at : a.atoms()) {
    auto left = at.weight;
    while (left > 0) {
      const auto take = static_cast<std::uint64_t>(rng.integer(1, static_cast<std::int64_t>(left)));
      pieces.push_back({at.z, take});
      left -= take;
    }
  }
  for (std::size_t i = pieces.size(); i > 1; --i)
    std::swap(pieces[i - 1], pieces[static_cast<std::size_t>(rng.integer(0, static_cast<std::int64_t>(i) - 1))]);
  return {a.region(), a.target_dim(), std::move(pieces)};
}

Row lift_bound_trial(const Context& ctx, std::uint64_t id, Rng& rng) {
  Row row;
  const auto shape = ctx.shape_for(id);
  const auto& region = ctx.region(shape);
  const auto n = ctx.draw_n(rng);
  const auto k = ctx.draw_atoms(rng, n, region->size());
  const bool jitter = id % 2 == 1;
  const double delta = ctx.cfg.delta_list[id % ctx.cfg.delta_list.size()] * region->diameter();
  // off-grid atoms stay within delta/4 of a grid point, or no grid-centred cover can see them
  const auto alpha = random_measure(rng, region, n, n, k, jitter ? std::min(nudge(region), delta / 8.0) : 0.0);
  row.values = {shape, str(region->size()), str(n), str(k), str(jitter), format_real(delta)};

  const auto result = lift(alpha, delta);
  // Measured again from the returned homomorphism, not taken from the lift.
  const double measured = d_cu(cu_of_hom(result.phi, region), alpha).value;
  std::size_t sets = 0;
  for (const auto& comp : result.components) {
    ++row.covers;
    const RestrictedRank local(alpha, comp.cover.domain);
    if (!verify_cover(local, comp.cover).all()) ++row.cover_failures;
    sets += comp.cover.sets.size();
  }
  row.values.insert(row.values.end(), {format_real(measured), format_real(measured / delta),
                                       str(result.components.size()), str(sets)});
  row.pass = measured < 6.0 * delta && row.cover_failures == 0;
  return row;
}

Row metric_axioms_trial(const Context& ctx, std::uint64_t id, Rng& rng) {
  Row row;
  const auto shape = ctx.shape_for(id);
  const auto& region = ctx.region(shape);
  const auto n = static_cast<std::uint64_t>(rng.integer(1, 12));
  auto draw = [&] {
    const auto k = static_cast<std::size_t>(rng.integer(1, static_cast<std::int64_t>(std::min<std::uint64_t>(6, n))));
    return random_measure(rng, region, n, n, k, rng.uniform() < 0.5 ? nudge(region) : 0.0);
  };
  const auto a = draw();
  const auto b = rng.uniform() < 0.25 ? resplit(rng, a) : draw();
  const auto c = draw();
  const auto a2 = resplit(rng, a);

  const double ab = d_cu(a, b).value, ba = d_cu(b, a).value;
  const double bc = d_cu(b, c).value, cb = d_cu(c, b).value;
  const double ac = d_cu(a, c).value, ca = d_cu(c, a).value;
  const bool symmetric = ab == ba && bc == cb && ac == ca;

  constexpr double kTol = 1e-9;
  int violations = 0;
  violations += ac > ab + bc + kTol;
  violations += ab > ac + cb + kTol;
  violations += bc > ba + ac + kTol;

  auto zero_iff_equal = [](const RankMeasure& x, const RankMeasure& y, double d) {
    return (d <= 1e-12) == same_multiset(x, y, 1e-12);
  };
  const double aa2 = d_cu(a, a2).value;
  const bool identity = aa2 == 0.0 && same_multiset(a, a2, 1e-12) && zero_iff_equal(a, b, ab) &&
                        zero_iff_equal(b, c, bc) && zero_iff_equal(a, c, ac);

  row.values = {shape, str(n), format_real(ab), format_real(bc), format_real(ac), str(symmetric),
                std::to_string(violations), str(identity)};
  row.pass = symmetric && violations == 0 && identity;
  return row;
}

RegionPtr small_region(Rng& rng, std::uint64_t id) {
  switch (id % 3) {
    case 0:
      return Region::segment(Complex{0.0, 0.0}, Complex{1.0, 0.0}, static_cast<std::size_t>(rng.integer(5, 40)));
    case 1:
      return Region::disk(0.0, 1.0, 0.42);
    default:
      return Region::annulus(0.0, 0.5, 1.0, 0.4);
  }
}

Row oracle_trial(const Context&, std::uint64_t id, Rng& rng) {
  Row row;
  const auto region = small_region(rng, id);
  const auto n = static_cast<std::uint64_t>(rng.integer(1, 10));
  const auto cap = std::min<std::uint64_t>({8, n, region->size()});
  const auto ka = static_cast<std::size_t>(rng.integer(1, static_cast<std::int64_t>(cap)));
  const auto kb = static_cast<std::size_t>(rng.integer(1, static_cast<std::int64_t>(cap)));
  const bool jitter = rng.uniform() < 0.5;
  const auto a = random_measure(rng, region, n, n, ka, jitter ? nudge(region) : 0.0);
  const auto b = random_measure(rng, region, n, n, kb, jitter ? nudge(region) : 0.0);

  const double matched = d_cu(a, b).value;
  const auto family = oracle_family(a, b, 1e-9 * std::max(1.0, region->diameter()));
  const double brute = d_cu_bruteforce(a, b, family);
  const double h = region->resolution();
  row.values = {str(region->size()), format_real(h), str(n), str(ka), str(kb), format_real(matched),
                format_real(brute), str(family.size())};
  row.pass = std::abs(matched - brute) <= h;
  return row;
}

Row marriage_trial(const Context& ctx, std::uint64_t id, Rng& rng) {
  Row row;
  const auto shape = ctx.shape_for(id);
  const auto& region = ctx.region(shape);
  const auto k = static_cast<std::size_t>(rng.integer(1, 5));
  std::vector<RankMeasure> alphas, betas;
  std::string dims;
  for (std::size_t i = 0; i < k; ++i) {
    const auto n = static_cast<std::uint64_t>(rng.integer(1, 6));
    const auto m = static_cast<std::uint64_t>(rng.integer(0, static_cast<std::int64_t>(n)));
    auto atoms = [&] { return m == 0 ? std::size_t{0} : static_cast<std::size_t>(rng.integer(1, static_cast<std::int64_t>(std::min<std::uint64_t>(3, m)))); };
    alphas.push_back(random_measure(rng, region, n, m, atoms(), rng.uniform() < 0.5 ? nudge(region) : 0.0));
    betas.push_back(random_measure(rng, region, n, m, atoms(), rng.uniform() < 0.5 ? nudge(region) : 0.0));
    dims += (i ? ";" : "") + str(m) + "/" + str(n);
  }
  const auto check = marriage_check(alphas, betas);
  row.values = {shape, str(k), dims, format_real(check.lhs), format_real(check.rhs)};
  row.pass = check.holds();
  return row;
}

Row du_trial(const Context& ctx, std::uint64_t id, Rng& rng) {
  Row row;
  const auto& region = ctx.region("disk");
  const auto n = static_cast<Eigen::Index>(rng.integer(1, 16));
  const auto x = random_normal(rng, n, 0.95);
  std::optional<NormalMatrix> y;
  if (id % 2 == 0) {
    y = random_normal(rng, n, 0.95);
  } else {
    // A nearby matrix: perturbed spectrum in a fresh basis.
    auto eig = x.eigenvalues();
    for (auto& l : eig) l += rng.in_disk(0.04);
    y = NormalMatrix::from_spectrum(std::move(eig), random_unitary(rng, n));
  }
  const auto bracket = d_u_bracket(x, *y);
  const double dw = d_w(x, *y, region);
  constexpr double kTol = 1e-9;
  const bool ordered = bracket.lower <= bracket.upper + kTol;
  const bool witnessed =
      std::abs(bracket.residual - bracket.upper) <= kTol && unitarity_defect(bracket.witness) <= kTol;
  const bool hausdorff = bracket.lower <= dw + kTol;
  const bool within = bracket.upper <= 2.0 * dw + kTol;
  row.values = {str(static_cast<std::uint64_t>(n)), format_real(bracket.lower), format_real(bracket.upper),
                format_real(bracket.residual), format_real(dw), str(ordered), str(witnessed), str(hausdorff),
                str(within)};
  row.pass = ordered && witnessed && hausdorff && within;
  return row;
}

Row exact_lift_trial(const Context& ctx, std::uint64_t id, Rng& rng) {
  Row row;
  const auto shape = ctx.shape_for(id);
  const auto& region = ctx.region(shape);
  const auto n = ctx.draw_n(rng);
  const auto k = ctx.draw_atoms(rng, n, region->size());
  const auto alpha = random_measure(rng, region, n, n, k, 0.0);
  const auto result = exact_lift(alpha);
  const double h = region->resolution();
  const double decay = result.average_decay();
  const double defect = result.x.normality_defect();
  row.covers = result.covers;
  row.values = {shape, str(region->size()), str(n), str(k), str(result.deltas.size()), format_real(decay),
                format_real(result.decay_before_stationary()), format_real(defect),
                format_real(result.final_distance), format_real(h)};
  row.pass = decay >= 1.8 && defect <= 1e-10 && result.final_distance <= 2.0 * h;
  return row;
}

Row cover_trial(const Context& ctx, std::uint64_t id, Rng& rng) {
  Row row;
  const auto shape = ctx.shape_for(id);
  const auto& region = ctx.region(shape);
  const auto n = ctx.draw_n(rng);
  const auto k = ctx.draw_atoms(rng, n, region->size());
  const double delta = ctx.cfg.delta_list[id % ctx.cfg.delta_list.size()] * region->diameter();
  const auto alpha = random_measure(rng, region, n, n, k, id % 2 == 1 ? std::min(nudge(region), delta / 8.0) : 0.0);
  const auto cover = build_cover(alpha, delta);
  const auto cert = verify_cover(alpha, cover);
  row.covers = 1;
  row.cover_failures = cert.all() ? 0 : 1;
  row.values = {shape, str(n), str(k), format_real(delta), str(cover.sets.size()), str(cert.dense),
                str(cert.small), str(cert.separated), str(cert.dominated)};
  row.pass = cert.all();
  return row;
}

CMatrix cayley(const CMatrix& a) {
  const auto id = CMatrix::Identity(a.rows(), a.cols());
  return (id - a) * (id + a).inverse();
}

CMatrix monomial(const CMatrix& x, int s, int t) {
  CMatrix out = CMatrix::Identity(x.rows(), x.cols());
  const CMatrix xs = x.adjoint();
  for (int i = 0; i < s; ++i) out = out * xs;
  for (int i = 0; i < t; ++i) out = out * x;
  return out;
}

Row fc_trial(const Context&, std::uint64_t, Rng& rng) {
  Row row;
  const auto n = static_cast<Eigen::Index>(rng.integer(1, 12));
  const auto x = random_normal(rng, n, 0.95);
  std::vector<Complex> xi;
  for (Eigen::Index i = 0; i < n; ++i) xi.push_back(rng.in_disk(1.0));
  CMatrix a(n, n);
  for (Eigen::Index r = 0; r < n; ++r)
    for (Eigen::Index c = 0; c < n; ++c) a(r, c) = {rng.normal(), rng.normal()};
  a = (0.5 * (a - a.adjoint())).eval();
  a /= std::max(1.0, operator_norm(a));

  std::vector<NormalMatrix> seq;
  for (int k = 1; k <= 30; ++k) {
    const double t = std::ldexp(1.0, -k);
    auto eig = x.eigenvalues();
    for (std::size_t i = 0; i < eig.size(); ++i) eig[i] += t * xi[i];
    seq.push_back(conjugate(NormalMatrix::from_spectrum(std::move(eig), x.eigenbasis()), cayley(t * a)));
  }
  const auto basket = function_basket();
  std::size_t first = 0;
  std::string note;
  try {
    first = convergence_check(seq, x, basket, 1e-3);
  } catch (const std::runtime_error& e) {
    note = e.what();
  }

  double big_m = std::max(1.0, x.norm());
  for (const auto& xk : seq) big_m = std::max(big_m, xk.norm());
  int violations = 0;
  double worst_ratio = 0.0;
  for (const auto& xk : seq) {
    const double dist = operator_norm(xk.entries() - x.entries());
    for (int s = 0; s <= 3; ++s) {
      for (int t = 0; t <= 3; ++t) {
        if (s + t == 0) continue;
        const double lhs = operator_norm(monomial(xk.entries(), s, t) - monomial(x.entries(), s, t));
        const double rhs = (s + t) * std::pow(big_m, s + t) * dist;
        if (lhs > rhs * (1.0 + 1e-12) + 1e-15) ++violations;
        if (rhs > 0.0) worst_ratio = std::max(worst_ratio, lhs / rhs);
      }
    }
  }
  row.values = {str(static_cast<std::uint64_t>(n)), str(first), format_real(big_m), format_real(worst_ratio),
                std::to_string(violations)};
  row.note = note;
  row.pass = first > 0 && violations == 0;
  return row;
}

struct SuiteDef {
  const char* name;
  std::size_t trials;
  std::vector<std::string> columns;
  Row (*run)(const Context&, std::uint64_t, Rng&);
};

const std::vector<SuiteDef>& suites() {
  static const std::vector<SuiteDef> defs{
      {"lift-bound", 240,
       {"shape", "grid", "n", "atoms", "jitter", "delta", "dcu", "dcu_over_delta", "components", "sets"},
       lift_bound_trial},
      {"metric-axioms", 1000,
       {"shape", "n", "d_ab", "d_bc", "d_ac", "symmetric", "triangle_violations", "identity"},
       metric_axioms_trial},
      {"oracle-equivalence", 120, {"grid", "h", "n", "atoms_a", "atoms_b", "matched", "brute_force", "family"},
       oracle_trial},
      {"marriage", 500, {"shape", "k", "mass_dims", "lhs", "rhs"}, marriage_trial},
      {"du-bracket", 500,
       {"n", "lower", "upper", "residual", "d_w", "ordered", "witnessed", "hausdorff_le_dw", "upper_le_2dw"},
       du_trial},
      {"exact-lift", 60, {"shape", "grid", "n", "atoms", "steps", "decay", "decay_before_stationary", "defect", "final_dcu", "h"},
       exact_lift_trial},
      {"cover-certificates", 200,
       {"shape", "n", "atoms", "delta", "sets", "dense", "small", "separated", "dominated"}, cover_trial},
      {"fc-continuity", 20, {"n", "first_index", "M", "worst_ratio", "monomial_violations"}, fc_trial},
  };
  return defs;
}

const SuiteDef& find_suite(std::string_view name) {
  for (const auto& d : suites())
    if (d.name == name) return d;
  throw std::invalid_argument("unknown suite " + std::string(name));
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& d : suites()) out.emplace_back(d.name);
    return out;
  }();
  return names;
}

std::size_t default_trials(std::string_view suite) { return find_suite(suite).trials; }

SuiteReport run_suite(std::string_view suite, const ExperimentConfig& config, std::optional<std::uint64_t> only_id) {
  config.validate();
  const auto& def = find_suite(suite);
  Context ctx{config, {}};
  for (const char* shape : kShapes) ctx.regions.emplace(shape, make_region(shape, config.grid.h));

  std::vector<std::uint64_t> ids;
  if (only_id) {
    ids.push_back(*only_id);
  } else {
    ids.resize(config.trials ? config.trials : def.trials);
    std::iota(ids.begin(), ids.end(), std::uint64_t{0});
  }

  SuiteReport report;
  report.suite = def.name;
  report.seed = config.seed;
  report.columns = def.columns;
  report.rows.resize(ids.size());

  auto one = [&](std::size_t slot) {
    const auto id = ids[slot];
    const auto seed = derive_seed(config.seed, def.name, id);
    Rng rng(seed);
    Row row;
    try {
      row = def.run(ctx, id, rng);
    } catch (const std::exception& e) {
      row = Row{};
      row.note = e.what();
    }
    row.values.resize(def.columns.size());
    row.id = id;
    row.seed = seed;
    report.rows[slot] = std::move(row);
  };

  const auto workers = std::min(config.threads, ids.size());
  if (workers <= 1) {
    for (std::size_t i = 0; i < ids.size(); ++i) one(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (std::size_t i; (i = next.fetch_add(1)) < ids.size();) one(i);
      });
    for (auto& t : pool) t.join();
  }
  return report;
}

void write_csv(const SuiteReport& report, std::ostream& out) {
  auto clean = [](std::string s) {
    std::replace(s.begin(), s.end(), ',', ';');
    std::replace(s.begin(), s.end(), '\n', ' ');
    return s;
  };
  out << "id,seed";
  for (const auto& c : report.columns) out << ',' << c;
  out << ",pass,note\n";
  for (const auto& r : report.rows) {
    out << r.id << ',' << r.seed;
    for (const auto& v : r.values) out << ',' << clean(v);
    out << ',' << (r.pass ? "pass" : "fail") << ',' << clean(r.note) << '\n';
  }
}

json summary_json(const SuiteReport& report) {
  json failed = json::array();
  for (const auto& r : report.rows)
    if (!r.pass) failed.push_back(r.id);
  return {
      {"suite", report.suite},
      {"seed", report.seed},
      {"trials", report.rows.size()},
      {"passed", report.passed()},
      {"failed_ids", std::move(failed)},
      {"covers_checked", report.covers()},
      {"cover_failures", report.cover_failures()},
      {"ok", report.ok()},
  };
}

void write_report(const SuiteReport& report, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  const auto csv_path = dir / (report.suite + ".csv");
  std::ofstream csv(csv_path);
  if (!csv) throw std::runtime_error("cannot write " + csv_path.string());
  write_csv(report, csv);
  if (!csv) throw std::runtime_error("write failed for " + csv_path.string());
  io::write_file(dir / (report.suite + ".json"), summary_json(report));
}

std::vector<std::filesystem::path> generate(const ExperimentConfig& config, const std::filesystem::path& dir) {
  config.validate();
  const std::string shape = config.grid.shape == "mixed" ? "disk" : config.grid.shape;
  const auto region = make_region(shape, config.grid.h);
  std::vector<std::filesystem::path> written;
  written.push_back(dir / "region.json");
  io::write_file(written.back(), io::to_json(*region));

  const std::size_t count = config.trials ? config.trials : 4;
  for (std::size_t i = 0; i < count; ++i) {
    Rng rng(derive_seed(config.seed, "gen", i));
    const auto n = static_cast<std::uint64_t>(rng.integer(config.n_range.lo, config.n_range.hi));
    const auto top = std::min<std::int64_t>({config.atom_range.hi, static_cast<std::int64_t>(n),
                                             static_cast<std::int64_t>(region->size())});
    const auto k = static_cast<std::size_t>(rng.integer(std::min<std::int64_t>(config.atom_range.lo, top), top));
    const auto alpha = random_measure(rng, region, n, n, k, 0.0);
    written.push_back(dir / ("morphism_" + std::to_string(i) + ".json"));
    io::write_file(written.back(), io::to_json(alpha));

    const auto dim = static_cast<Eigen::Index>(rng.integer(1, 8));
    const auto x = random_normal(rng, dim, 0.95);
    written.push_back(dir / ("matrix_" + std::to_string(i) + ".json"));
    io::write_file(written.back(), io::to_json(x.entries()));
  }
  return written;
}

}  // namespace culift::experiment
