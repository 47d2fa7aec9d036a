#include "culift/io.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace culift::io {

namespace {

template <class F>
auto guarded(const char* what, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string(what) + ": " + e.what());
  }
}

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

}  // namespace

json to_json(Complex z) { return json::array({z.real(), z.imag()}); }

Complex complex_from_json(const json& j) {
  require(j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number(),
          "complex: expected [re, im]");
  return {j[0].get<double>(), j[1].get<double>()};
}

json real_to_json(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

double real_from_json(const json& j) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    throw std::invalid_argument("real: unknown sentinel " + s);
  }
  require(j.is_number(), "real: expected a number");
  return j.get<double>();
}

json to_json(const Region& region) {
  json pts = json::array();
  for (const auto& p : region.points()) pts.push_back(to_json(p));
  return {{"points", std::move(pts)}, {"h", region.resolution()}};
}

RegionPtr region_from_json(const json& j) {
  return guarded("region", [&] {
    require(j.is_object() && j.contains("points") && j.contains("h"), "region: expected {points, h}");
    std::vector<Complex> pts;
    for (const auto& p : j.at("points")) pts.push_back(complex_from_json(p));
    return Region::from_points(std::move(pts), j.at("h").get<double>());
  });
}

json to_json(const Ball& ball) { return {{"c", to_json(ball.center)}, {"r", ball.radius}}; }

Ball ball_from_json(const json& j) {
  return guarded("ball", [&] {
    require(j.is_object() && j.contains("c") && j.contains("r"), "ball: expected {c, r}");
    return Ball{complex_from_json(j.at("c")), j.at("r").get<double>()};
  });
}

json to_json(const LscFn& f) {
  json out = json::object();
  for (std::size_t i = 0; i < f.size(); ++i) {
    const auto v = f[i];
    if (v.is_infinite())
      out[std::to_string(i)] = "inf";
    else if (v.value() > 0)
      out[std::to_string(i)] = v.value();
  }
  return out;
}

LscFn lsc_from_json(const RegionPtr& region, const json& j) {
  return guarded("lsc", [&] {
    require(j.is_object(), "lsc: expected an object");
    std::vector<ExtNat> values(region->size());
    for (const auto& [key, v] : j.items()) {
      std::size_t pos = 0;
      const auto idx = std::stoul(key, &pos);
      require(pos == key.size() && idx < values.size(), "lsc: bad point index");
      if (v.is_string()) {
        require(v.get<std::string>() == "inf", "lsc: unknown sentinel");
        values[idx] = ExtNat::infinity();
      } else {
        require(v.is_number_unsigned(), "lsc: values must be non-negative integers");
        values[idx] = v.get<std::uint64_t>();
      }
    }
    return LscFn(region, std::move(values));
  });
}

json to_json(const RankMeasure& alpha, bool with_region) {
  json atoms = json::array();
  for (const auto& a : alpha.atoms()) atoms.push_back({{"z", to_json(a.z)}, {"m", a.weight}});
  json out{{"n", alpha.target_dim()}, {"atoms", std::move(atoms)}};
  if (with_region) out["region"] = to_json(*alpha.region());
  return out;
}

RankMeasure morphism_from_json(const json& j, const RegionPtr& fallback) {
  return guarded("morphism", [&] {
    require(j.is_object() && j.contains("n") && j.contains("atoms"), "morphism: expected {n, atoms}");
    const auto region = j.contains("region") ? region_from_json(j.at("region")) : fallback;
    require(region != nullptr, "morphism: no region given");
    std::vector<Atom> atoms;
    for (const auto& a : j.at("atoms")) {
      require(a.contains("z") && a.contains("m") && a.at("m").is_number_unsigned(), "morphism: bad atom");
      atoms.push_back({complex_from_json(a.at("z")), a.at("m").get<std::uint64_t>()});
    }
    require(j.at("n").is_number_unsigned(), "morphism: n must be a non-negative integer");
    return RankMeasure(region, j.at("n").get<std::uint64_t>(), std::move(atoms));
  });
}

json to_json(const CMatrix& m) {
  json re = json::array(), im = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json rr = json::array(), ii = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      rr.push_back(m(r, c).real());
      ii.push_back(m(r, c).imag());
    }
    re.push_back(std::move(rr));
    im.push_back(std::move(ii));
  }
  return {{"n", m.rows()}, {"re", std::move(re)}, {"im", std::move(im)}};
}

CMatrix matrix_from_json(const json& j) {
  return guarded("matrix", [&] {
    require(j.is_object() && j.contains("n") && j.contains("re") && j.contains("im"), "matrix: expected {n, re, im}");
    const auto n = j.at("n").get<Eigen::Index>();
    require(n > 0, "matrix: n must be positive");
    const auto& re = j.at("re");
    const auto& im = j.at("im");
    require(re.size() == static_cast<std::size_t>(n) && im.size() == static_cast<std::size_t>(n),
            "matrix: row count mismatch");
    CMatrix m(n, n);
    for (Eigen::Index r = 0; r < n; ++r) {
      require(re[r].size() == static_cast<std::size_t>(n) && im[r].size() == static_cast<std::size_t>(n),
              "matrix: column count mismatch");
      for (Eigen::Index c = 0; c < n; ++c) m(r, c) = {re[r][c].get<double>(), im[r][c].get<double>()};
    }
    return m;
  });
}

json to_json(const MatchingResult& r) {
  json pairing = json::array();
  for (const auto& p : r.pairing) pairing.push_back({p.alpha_index, p.beta_index, p.mass});
  return {{"value", real_to_json(r.value)}, {"pairing", std::move(pairing)}};
}

json to_json(const DuBracket& b) {
  return {{"lower", b.lower}, {"upper", b.upper}, {"residual", b.residual}, {"witness", to_json(b.witness)}};
}

json to_json(const DeltaCover& cover, const Region& region) {
  json sets = json::array();
  for (std::size_t i = 0; i < cover.sets.size(); ++i) {
    const auto c = cover.centers[cover.origin[i]];
    json pts = json::array();
    for (auto p : cover.members[i]) pts.push_back(to_json(region.point(p)));
    sets.push_back({{"center", to_json(c)}, {"s", cover.annuli[cover.origin[i]].s}, {"grid_points", std::move(pts)}});
  }
  const auto& cert = cover.certificates;
  return {
      {"delta", cover.delta},
      {"eta", cover.eta},
      {"sigma", cover.sigma},
      {"separation", real_to_json(cover.separation)},
      {"sets", std::move(sets)},
      {"certificates",
       {{"dense", cert.dense}, {"small", cert.small}, {"separated", cert.separated}, {"dominated", cert.dominated}}},
  };
}

json to_json(const LiftResult& r) {
  json pairs = json::array();
  for (const auto& p : r.phi.pairs) pairs.push_back({{"z", to_json(p.z)}, {"m", p.weight}});
  return {{"pairs", std::move(pairs)}, {"bound", r.bound}, {"delta", r.delta}};
}

json read_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  return guarded("json", [&] { return json::parse(in); });
}

void write_file(const std::filesystem::path& path, const json& j) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << j.dump(2) << '\n';
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

}  // namespace culift::io
