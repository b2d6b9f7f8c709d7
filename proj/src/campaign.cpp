#include "modbanach/campaign.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <initializer_list>
#include <sstream>

#include "modbanach/error.hpp"
#include "modbanach/rng.hpp"

namespace modbanach {

namespace {

struct Context {
  CampaignResult& result;
  std::uint64_t seed;
  std::size_t jobs;

  void check(std::string name, bool holds, std::string detail) {
    result.checks.push_back({std::move(name), holds, std::move(detail)});
  }
};

using Runner = std::function<Json(Context&)>;

struct Prepared {
  Json normalized;
  Runner run;
};

void allow_only(const JsonReader& r, std::initializer_list<const char*> allowed) {
  if (!r.node().is_object()) r.fail("", "must be an object");
  for (const auto& [key, value] : r.node().items()) {
    (void)value;
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; })) {
      std::string list;
      for (const char* a : allowed) list += (list.empty() ? "" : ", ") + std::string(a);
      r.fail(key, "unknown field (allowed here: " + list + ")");
    }
  }
}

void require(bool ok, const JsonReader& r, const std::string& key, const std::string& what) {
  if (!ok) r.fail(key, what);
}

std::string num(double v) { return format_double(v); }

std::string space_kind(const FiniteNormedSpace& s) {
  if (std::holds_alternative<LpKind>(s.kind())) return "lp";
  if (std::holds_alternative<SchattenKind>(s.kind())) return "schatten";
  if (std::holds_alternative<EuclidKind>(s.kind())) return "euclid";
  if (std::holds_alternative<TwoSumKind>(s.kind())) return "two_sum";
  return "custom";
}

FiniteNormedSpace read_space(const JsonReader& r, const std::string& key) {
  return space_from_json(r.child(key).node(), r.at(key));
}

// ---- norm ---------------------------------------------------------------

void collect_leaves(const ConvexModular& theta, std::vector<bool>& nakano_leaf) {
  std::visit(
      [&](const auto& k) {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, ConvexModular::DirectSum>)
          for (const auto& p : k.parts) collect_leaves(p, nakano_leaf);
        else
          nakano_leaf.push_back(std::is_same_v<K, ConvexModular::NakanoRef>);
      },
      theta.kind());
}

Prepared prepare_norm(const JsonReader& r, Json base) {
  allow_only(r, {"command", "seed", "jobs", "expect", "space", "modular", "points"});
  require(r.has("space") != r.has("modular"), r, "space", "give exactly one of \"space\" or \"modular\"");
  const JsonReader pts = r.child("points");
  require(pts.node().is_array() && !pts.node().empty(), pts, "", "must be a non-empty array of points");

  if (r.has("space")) {
    auto space = read_space(r, "space");
    std::vector<Vector> points;
    for (std::size_t i = 0; i < pts.node().size(); ++i) {
      points.push_back(vector_from_json(pts.node()[i], pts.element(i).path()));
      require(points.back().dim() == space.dim(), pts.element(i), "",
              "has dimension " + std::to_string(points.back().dim()) + ", the space needs " +
                  std::to_string(space.dim()));
      require(!points.back().is_complex() || space.accepts_complex(), pts.element(i), "",
              "complex entries are only accepted by Schatten spaces");
    }
    base["space"] = to_json(space);
    Json echo = Json::array();
    for (const auto& p : points) echo.push_back(to_json(p));
    base["points"] = echo;
    return {base, [space, points](Context&) {
              Json norms = Json::array();
              for (const auto& p : points) norms.push_back(json_number(space.norm(p)));
              return Json{{"norms", norms}};
            }};
  }

  auto theta = modular_from_json(r.child("modular").node(), r.at("modular"));
  std::vector<bool> leaves;
  collect_leaves(theta, leaves);
  std::vector<ModularPoint> points;
  Json echo = Json::array();
  for (std::size_t i = 0; i < pts.node().size(); ++i) {
    const JsonReader pr = pts.element(i);
    require(pr.node().is_array() && pr.node().size() == leaves.size(), pr, "",
            "must list one coordinate per modular leaf (" + std::to_string(leaves.size()) + ")");
    ModularPoint p;
    Json pe = Json::array();
    for (std::size_t k = 0; k < leaves.size(); ++k) {
      const JsonReader cr = pr.element(k);
      if (leaves[k]) {
        auto b = block_vector_from_json(cr.node(), cr.path());
        pe.push_back(to_json(b));
        p.coords.emplace_back(std::move(b));
      } else {
        auto v = vector_from_json(cr.node(), cr.path());
        pe.push_back(to_json(v));
        p.coords.emplace_back(std::move(v));
      }
    }
    try {
      (void)modular_terms(theta, p);
    } catch (const std::invalid_argument& e) {
      pr.fail("", e.what());
    }
    points.push_back(std::move(p));
    echo.push_back(pe);
  }
  base["modular"] = to_json(theta);
  base["points"] = echo;
  return {base, [theta, points](Context& ctx) {
            Json norms = Json::array(), values = Json::array();
            double worst = 0.0;
            for (const auto& p : points) {
              const double n = luxemburg_norm(theta, p);
              norms.push_back(json_number(n));
              values.push_back(json_number(modular_eval(theta, p)));
              if (n > 0.0) worst = std::max(worst, std::abs(modular_eval(theta, p.scaled(1.0 / n)) - 1.0));
            }
            ctx.check("luxemburg_residual", worst <= 1e-10, "max |Theta(x/||x||) - 1| = " + num(worst));
            return Json{{"norms", norms}, {"modular_values", values}, {"max_residual", json_number(worst)}};
          }};
}

// ---- jvn ----------------------------------------------------------------

Prepared prepare_jvn(const JsonReader& r, Json base) {
  allow_only(r, {"command", "seed", "jobs", "expect", "space", "budget", "max_steps"});
  auto space = read_space(r, "space");
  const std::size_t budget = r.count("budget", 64);
  require(budget >= 1, r, "budget", "must be at least 1");
  const std::size_t steps = r.count("max_steps", 200);
  base["space"] = to_json(space);
  base["budget"] = budget;
  base["max_steps"] = steps;
  return {base, [space, budget, steps](Context& ctx) {
            JvnOptions opt;
            opt.max_steps = steps;
            opt.jobs = ctx.jobs;
            const auto est = jvn_lower_bound(space, budget, ctx.seed, opt);
            double upper = 2.0;
            const auto kind = space_kind(space);
            if (kind == "lp" || kind == "schatten" || kind == "euclid") upper = block_jvn_upper_bound(space);
            const bool ok = est.lower_bound >= 1.0 - 1e-12 && est.lower_bound <= upper + 1e-9;
            ctx.check("jvn_within_bounds", ok,
                      "1 <= " + num(est.lower_bound) + " <= " + num(upper) + " (upper bound + 1e-9)");
            return Json{{"estimate", to_json(est)}, {"upper_bound", json_number(upper)}};
          }};
}

// ---- verify -------------------------------------------------------------

Prepared prepare_verify(const JsonReader& r, Json base) {
  allow_only(r, {"command", "seed", "jobs", "expect", "check", "space", "side", "samples", "tolerance", "p", "c",
                 "grid", "x", "y", "lambda_grid"});
  const auto check = r.text("check");
  base["check"] = check;
  const std::size_t samples = r.count("samples", 10000);
  require(samples >= 1, r, "samples", "must be at least 1");

  if (check == "beckner") {
    const double p = r.number("p");
    require(p >= 2.0 && std::isfinite(p), r, "p", "must lie in [2, inf) for the Beckner grid, got " + num(p));
    BecknerGrid grid;
    if (r.has("grid")) {
      const JsonReader g = r.child("grid");
      allow_only(g, {"points", "radius"});
      grid.points = g.count("points", grid.points);
      grid.radius = g.number("radius", grid.radius);
      require(grid.points >= 2, g, "points", "must be at least 2");
      require(grid.radius > 0.0 && std::isfinite(grid.radius), g, "radius", "must be positive and finite");
    }
    const double tol = r.number("tolerance", 1e-12);
    base["p"] = json_number(p);
    base["grid"] = Json{{"points", grid.points}, {"radius", json_number(grid.radius)}};
    base["tolerance"] = json_number(tol);
    return {base, [p, grid, tol](Context& ctx) {
              auto rep = verify_beckner(p, grid, tol);
              ctx.check(rep.check, rep.holds(), "max_violation " + num(rep.max_violation) + " vs " + num(tol));
              ctx.result.reports.push_back(rep);
              return Json{{"report", to_json(rep)}};
            }};
  }

  const double tol = r.number("tolerance", 1e-10);
  require(tol >= 0.0, r, "tolerance", "must be non-negative");
  base["tolerance"] = json_number(tol);

  if (check == "schatten_inf") {
    const std::size_t side = r.count("side");
    require(side >= 1, r, "side", "must be at least 1");
    base["side"] = side;
    base["samples"] = samples;
    return {base, [side, samples, tol](Context& ctx) {
              auto rep = verify_schatten_inf(side, {samples, ctx.seed, ctx.jobs}, tol);
              ctx.check(rep.check, rep.holds(), "max_violation " + num(rep.max_violation) + " vs " + num(tol));
              ctx.result.reports.push_back(rep);
              return Json{{"report", to_json(rep)}};
            }};
  }

  auto space = read_space(r, "space");
  const auto kind = space_kind(space);
  base["space"] = to_json(space);

  if (check == "lp_pair") {
    const double p = r.number("p");
    require(p >= 1.0 && std::isfinite(p), r, "p", "must lie in [1, inf)");
    auto x = vector_from_json(r.child("x").node(), r.at("x"));
    auto y = vector_from_json(r.child("y").node(), r.at("y"));
    require(x.dim() == space.dim(), r, "x", "dimension does not match the space");
    require(y.dim() == space.dim(), r, "y", "dimension does not match the space");
    require(std::abs(space.norm(x) - 1.0) <= 1e-10, r, "x", "must have norm 1 (got " + num(space.norm(x)) + ")");
    auto grid = r.has("lambda_grid") ? r.numbers("lambda_grid") : default_lambda_grid();
    require(!grid.empty(), r, "lambda_grid", "must not be empty");
    base["p"] = json_number(p);
    base["x"] = to_json(x);
    base["y"] = to_json(y);
    Json g = Json::array();
    for (double l : grid) g.push_back(json_number(l));
    base["lambda_grid"] = g;
    return {base, [space, p, x, y, grid, tol](Context& ctx) {
              auto rep = verify_lp_pair(space, x, y, p, grid, tol);
              ctx.check(rep.check, rep.holds(), "max_violation " + num(rep.max_violation) + " vs " + num(tol));
              ctx.result.reports.push_back(rep);
              return Json{{"report", to_json(rep)}};
            }};
  }

  base["samples"] = samples;
  std::function<ViolationReport(const SamplingOptions&)> fn;
  if (check == "clarkson_lower" || check == "clarkson_upper") {
    require(kind == "lp" || kind == "schatten", r, "space", check + " needs an lp or schatten space");
    const double p = *space.exponent();
    if (check == "clarkson_lower") {
      require(p > 2.0, r, "space", "clarkson_lower needs p > 2, got " + num(p));
      fn = [space, tol](const SamplingOptions& o) { return verify_clarkson_lower(space, o, tol); };
    } else {
      require(p < 2.0, r, "space", "clarkson_upper needs 1 <= p < 2, got " + num(p));
      fn = [space, tol](const SamplingOptions& o) { return verify_clarkson_upper(space, o, tol); };
    }
  } else if (check == "2smooth") {
    const double p = r.number("p");
    require(p >= 2.0 && std::isfinite(p), r, "p", "must lie in [2, inf)");
    std::optional<double> c;
    if (r.has("c")) {
      c = r.number("c");
      require(*c > 0.0 && std::isfinite(*c), r, "c", "must be positive and finite");
      base["c"] = json_number(*c);
    }
    base["p"] = json_number(p);
    fn = [space, p, c, tol](const SamplingOptions& o) { return verify_2smooth(space, p, c, o, tol); };
  } else if (check == "parallelogram") {
    fn = [space, tol](const SamplingOptions& o) { return verify_parallelogram(space, o, tol); };
  } else if (check == "endpoint_2") {
    require(space.exponent() && *space.exponent() == 2.0, r, "space", "endpoint_2 needs an exponent-2 space");
    fn = [space, tol](const SamplingOptions& o) { return verify_endpoint_2(space, o, tol); };
  } else {
    r.fail("check", "unknown check \"" + check +
                        "\" (expected clarkson_lower, clarkson_upper, 2smooth, schatten_inf, parallelogram, "
                        "endpoint_2, beckner or lp_pair)");
  }
  return {base, [fn, samples, tol](Context& ctx) {
            auto rep = fn({samples, ctx.seed, ctx.jobs});
            ctx.check(rep.check, rep.holds(), "max_violation " + num(rep.max_violation) + " vs " + num(tol));
            ctx.result.reports.push_back(rep);
            return Json{{"report", to_json(rep)}};
          }};
}

// ---- nakano -------------------------------------------------------------

Prepared prepare_nakano(const JsonReader& r, Json base) {
  allow_only(r, {"command", "seed", "jobs", "expect", "exponents", "c_grid", "window", "margin", "terms"});
  auto exps = exponents_from_json(r.child("exponents").node(), r.at("exponents"));
  std::vector<double> grid = r.has("c_grid") ? r.numbers("c_grid") : std::vector<double>{0.3, 0.5, 0.7, 0.9};
  require(!grid.empty(), r, "c_grid", "must not be empty");
  for (double c : grid) require(c > 0.0 && c < 1.0, r, "c_grid", "every c must lie in (0, 1), got " + num(c));
  TailWindow window;
  if (r.has("window")) {
    const JsonReader w = r.child("window");
    allow_only(w, {"first", "last", "points"});
    window.first = w.count("first", window.first);
    window.last = w.count("last", window.last);
    window.points = w.count("points", window.points);
    require(window.first >= 1 && window.first < window.last, w, "first", "need 1 <= first < last");
    require(window.points >= 2, w, "points", "must be at least 2");
  }
  const double margin = r.number("margin", 0.1);
  require(margin >= 0.0 && margin < 1.0, r, "margin", "must lie in [0, 1)");
  std::optional<std::pair<double, std::size_t>> terms;
  if (r.has("terms")) {
    const JsonReader t = r.child("terms");
    allow_only(t, {"c", "count"});
    const double c = t.number("c");
    require(c > 0.0 && c < 1.0, t, "c", "must lie in (0, 1)");
    const std::size_t count = t.count("count", 64);
    require(count >= 1, t, "count", "must be at least 1");
    terms = std::make_pair(c, count);
  }
  // Every exponent the run will touch must exist and differ from 2.
  std::vector<std::size_t> touched = log_spaced_indices(window);
  if (terms)
    for (std::size_t n = 1; n <= terms->second; ++n) touched.push_back(n);
  for (std::size_t n : touched) {
    double p = 0.0;
    try {
      p = exps.at(n);
    } catch (const std::invalid_argument& e) {
      r.fail("exponents", e.what());
    }
    require(p != 2.0, r, "exponents", "p_" + std::to_string(n) + " = 2, so the series term is undefined");
  }

  base["exponents"] = to_json(exps);
  Json g = Json::array();
  for (double c : grid) g.push_back(json_number(c));
  base["c_grid"] = g;
  base["window"] = Json{{"first", window.first}, {"last", window.last}, {"points", window.points}};
  base["margin"] = json_number(margin);
  if (terms) base["terms"] = Json{{"c", json_number(terms->first)}, {"count", terms->second}};
  return {base, [exps, grid, window, margin, terms](Context& ctx) {
            const auto res = nakano_condition_verdict(exps, grid, window, margin);
            Json out{{"verdict", to_json(res)}};
            if (terms) {
              const auto t = nakano_condition_terms(exps, terms->first, terms->second);
              out["terms"] = to_json(t);
              CsvTable table{{"n", "term", "log_slope"}, {}};
              for (std::size_t i = 0; i < t.index.size(); ++i)
                table.rows.push_back({static_cast<double>(t.index[i]), t.term[i], t.log_slope[i]});
              ctx.result.series["nakano_terms"] = std::move(table);
            }
            return out;
          }};
}

// ---- asymptotics --------------------------------------------------------

Prepared prepare_asymptotics(const JsonReader& r, Json base) {
  allow_only(r, {"command", "seed", "jobs", "expect", "spec", "horizon", "tail"});
  auto spec = spec_from_json(r.child("spec").node(), r.at("spec"));
  const std::size_t horizon = r.count("horizon", 1000);
  require(horizon >= 1, r, "horizon", "must be at least 1");
  if (spec.exponents.length() != SIZE_MAX)
    require(horizon <= spec.exponents.length(), r, "horizon", "exceeds the explicit exponent list");
  for (std::size_t n = 1; n <= horizon; ++n) {
    try {
      (void)spec.exponent(n);
      (void)block_jvn_upper_bound(spec.block(n));
    } catch (const std::invalid_argument& e) {
      r.fail("spec", std::string("block ") + std::to_string(n) + ": " + e.what());
    }
  }
  struct Tail {
    std::size_t cutoff, samples, window;
  };
  std::optional<Tail> tail;
  if (r.has("tail")) {
    const JsonReader t = r.child("tail");
    allow_only(t, {"cutoff", "samples", "window"});
    tail = Tail{t.count("cutoff", 10), t.count("samples", 1000), t.count("window", 8)};
    require(tail->cutoff >= 1, t, "cutoff", "must be at least 1");
    require(tail->samples >= 1, t, "samples", "must be at least 1");
    require(tail->window >= 1, t, "window", "must be at least 1");
    require(tail->cutoff <= horizon, t, "cutoff", "must not exceed the horizon");
    if (spec.exponents.length() != SIZE_MAX)
      require(tail->cutoff + tail->window - 1 <= spec.exponents.length(), t, "window",
              "reaches past the explicit exponent list");
  }
  base["spec"] = to_json(spec);
  base["horizon"] = horizon;
  if (tail) base["tail"] = Json{{"cutoff", tail->cutoff}, {"samples", tail->samples}, {"window", tail->window}};
  return {base, [spec, horizon, tail](Context& ctx) {
            const auto rep = alpha_beta_clarkson(spec, horizon);
            bool mono = true;
            for (std::size_t i = 1; i < rep.beta.size(); ++i) mono = mono && rep.beta[i] <= rep.beta[i - 1];
            ctx.check("beta_nonincreasing", mono, "beta_1 = " + num(rep.beta.front()) + ", beta_H = " +
                                                      num(rep.beta.back()));
            CsvTable table{{"n", "alpha", "beta"}, {}};
            for (std::size_t i = 0; i < rep.alpha.size(); ++i)
              table.rows.push_back({static_cast<double>(i + 1), rep.alpha[i], rep.beta[i]});
            ctx.result.series["asymptotics"] = std::move(table);
            Json out{{"alpha_beta", to_json(rep)}};
            if (tail) {
              const auto t = tail_parallelogram_defect(spec, tail->cutoff, tail->samples, ctx.seed, tail->window,
                                                       ctx.jobs);
              ctx.check("tail_within_beta", t.max_ratio <= t.beta + 1e-9,
                        "max ratio " + num(t.max_ratio) + " vs beta " + num(t.beta) + " + 1e-9");
              out["tail"] = to_json(t);
            }
            return out;
          }};
}

// ---- summand ------------------------------------------------------------

Prepared prepare_summand(const JsonReader& r, Json base) {
  allow_only(r, {"command", "seed", "jobs", "expect", "space", "budget"});
  auto space = read_space(r, "space");
  const std::size_t budget = r.count("budget", 32);
  require(budget >= 1, r, "budget", "must be at least 1");
  base["space"] = to_json(space);
  base["budget"] = budget;
  return {base, [space, budget](Context& ctx) {
            const auto s = find_one_dim_two_summand(space, budget, ctx.seed, ctx.jobs);
            return Json{{"search", to_json(s)}};
          }};
}

// ---- iterate ------------------------------------------------------------

Prepared prepare_iterate(const JsonReader& r, Json base) {
  allow_only(r, {"command", "seed", "jobs", "expect", "embedding", "x", "n_max", "limit", "isometry_samples"});
  const JsonReader e = r.child("embedding");
  allow_only(e, {"kind", "params"});
  const auto kind = e.text("kind");
  const JsonReader params = e.child("params");
  std::optional<LinearMap> t;
  Json echo;
  if (kind == "counterexample") {
    allow_only(params, {"e1", "h_dim"});
    auto e1 = read_space(params, "e1");
    const std::size_t h = params.count("h_dim", 4);
    require(h >= 1, params, "h_dim", "must be at least 1");
    t = build_counterexample_embedding(e1, h);
    echo = Json{{"kind", kind}, {"params", {{"e1", to_json(e1)}, {"h_dim", h}}}};
  } else if (kind == "inclusion") {
    allow_only(params, {"e0", "h_dim", "perm", "signs"});
    auto e0 = read_space(params, "e0");
    const std::size_t h = params.count("h_dim", 4);
    require(h >= 1, params, "h_dim", "must be at least 1");
    require(params.has("perm") == params.has("signs"), params, "perm", "give both perm and signs, or neither");
    Json p{{"e0", to_json(e0)}, {"h_dim", h}};
    std::optional<Matrix> iso;
    if (params.has("perm")) {
      const JsonReader pr = params.child("perm");
      require(pr.node().is_array(), pr, "", "must be an array of indices");
      std::vector<std::size_t> perm;
      for (std::size_t i = 0; i < pr.node().size(); ++i) {
        const Json& v = pr.node()[i];
        require(v.is_number_unsigned() || (v.is_number_integer() && v.get<long long>() >= 0), pr.element(i), "",
                "must be a non-negative integer");
        perm.push_back(v.get<std::size_t>());
      }
      const auto signs = params.numbers("signs");
      require(perm.size() == e0.dim(), params, "perm", "must have one entry per coordinate of e0");
      try {
        iso = signed_permutation(perm, signs);
      } catch (const std::invalid_argument& err) {
        params.fail("perm", err.what());
      }
      p["perm"] = perm;
      Json s = Json::array();
      for (double v : signs) s.push_back(json_number(v));
      p["signs"] = s;
    }
    t = LinearMap::inclusion(e0, h, iso);
    echo = Json{{"kind", kind}, {"params", p}};
  } else if (kind == "matrix") {
    // Any real map E0 -> E0 (+)_2 H given row by row; isometry is checked, not assumed.
    allow_only(params, {"e0", "h_dim", "rows"});
    auto e0 = read_space(params, "e0");
    const std::size_t h = params.count("h_dim", 4);
    require(h >= 1, params, "h_dim", "must be at least 1");
    const JsonReader rows = params.child("rows");
    const std::size_t d = e0.dim();
    require(rows.node().is_array() && rows.node().size() == d + h, rows, "",
            "must be an array of " + std::to_string(d + h) + " rows (dim e0 + h_dim)");
    std::vector<double> data;
    Json echo_rows = Json::array();
    for (std::size_t i = 0; i < d + h; ++i) {
      const Json& row = rows.node()[i];
      const JsonReader ri = rows.element(i);
      require(row.is_array() && row.size() == d, ri, "", "must have " + std::to_string(d) + " entries");
      Json er = Json::array();
      for (std::size_t j = 0; j < d; ++j) {
        const double v = number_from_json(row[j], ri.path() + "[" + std::to_string(j) + "]");
        require(std::isfinite(v), ri, "", "entries must be finite");
        data.push_back(v);
        er.push_back(json_number(v));
      }
      echo_rows.push_back(er);
    }
    t = LinearMap::embedding(Matrix(d + h, d, std::move(data)), e0, h);
    echo = Json{{"kind", kind}, {"params", {{"e0", to_json(e0)}, {"h_dim", h}, {"rows", echo_rows}}}};
  } else {
    e.fail("kind", "unknown embedding kind \"" + kind + "\" (expected counterexample, inclusion or matrix)");
  }
  auto x = vector_from_json(r.child("x").node(), r.at("x"));
  require(x.dim() == t->domain.dim(), r, "x",
          "has dimension " + std::to_string(x.dim()) + ", the domain needs " + std::to_string(t->domain.dim()));
  require(!x.is_complex(), r, "x", "must be real");
  const std::size_t n_max = r.count("n_max", 50);
  require(n_max >= 5, r, "n_max", "must be at least 5 for the Cauchy check");
  std::size_t lim_samples = 32, budget = 16;
  double lim_tol = 1e-9;
  if (r.has("limit")) {
    const JsonReader l = r.child("limit");
    allow_only(l, {"samples", "tolerance", "summand_budget"});
    lim_samples = l.count("samples", lim_samples);
    lim_tol = l.number("tolerance", lim_tol);
    budget = l.count("summand_budget", budget);
    require(lim_tol >= 0.0, l, "tolerance", "must be non-negative");
    require(budget >= 1, l, "summand_budget", "must be at least 1");
  }
  const std::size_t iso_samples = r.count("isometry_samples", 1000);

  base["embedding"] = echo;
  base["x"] = to_json(x);
  base["n_max"] = n_max;
  base["limit"] = Json{{"samples", lim_samples}, {"tolerance", json_number(lim_tol)}, {"summand_budget", budget}};
  base["isometry_samples"] = iso_samples;
  const LinearMap map = *t;
  return {base, [map, x, n_max, lim_samples, lim_tol, budget, iso_samples](Context& ctx) {
            const auto iso = is_isometric_embedding(map, iso_samples, ctx.seed, 1e-12, ctx.jobs);
            ctx.check("isometric_embedding", iso.isometric, "max deviation " + num(iso.max_deviation));
            const auto tr = pt_iterate(map, x, n_max);
            const double defect = *std::max_element(tr.telescoping_defects.begin(), tr.telescoping_defects.end());
            ctx.check("telescoping_identity", defect <= 1e-10, "max defect " + num(defect));
            bool mono = true;
            for (std::size_t i = 1; i < tr.norms.size(); ++i) mono = mono && tr.norms[i] <= tr.norms[i - 1] + 1e-12;
            ctx.check("norms_nonincreasing", mono, "||(PT)^n x|| over n <= " + std::to_string(n_max));

            CsvTable table{{"n", "norm", "residual", "defect"}, {}};
            for (std::size_t n = 0; n < tr.norms.size(); ++n)
              table.rows.push_back({static_cast<double>(n), tr.norms[n], n == 0 ? 0.0 : tr.residuals[n - 1],
                                    tr.telescoping_defects[n]});
            ctx.result.series["trace"] = std::move(table);

            std::vector<Vector> samples{x};
            for (auto& s : sample_suite(map.domain, lim_samples, derive_seed(ctx.seed, 1))) samples.push_back(s);
            const auto lim = limit_isometry_check(map, samples, n_max, lim_tol, budget, ctx.seed);
            const auto range = range_intersection_dim(map);
            Json out{{"isometry", {{"isometric", iso.isometric}, {"max_deviation", json_number(iso.max_deviation)}}},
                     {"trace", to_json(tr)},
                     {"limit", to_json(lim)},
                     {"range_intersection", to_json(range)}};
            for (std::size_t i = 0; i < lim.samples.size(); ++i)
              if (lim.samples[i].status == LimitStatus::non_cauchy) {
                ctx.result.numerical_failure = true;
                ctx.result.failure = "non-Cauchy iteration at sample " + std::to_string(i) + " (gap " +
                                     num(lim.samples[i].cauchy_gap) + " after n_max = " + std::to_string(n_max) + ")";
                break;
              }
            return out;
          }};
}

// ---- expectations -------------------------------------------------------

struct Expectation {
  std::string path;
  std::optional<Json> equals;
  std::optional<double> min, max;
  double tolerance = 0.0;
};

std::vector<Expectation> read_expectations(const JsonReader& r, Json& base) {
  std::vector<Expectation> out;
  if (!r.has("expect")) return out;
  const JsonReader ex = r.child("expect");
  require(ex.node().is_array(), ex, "", "must be an array of {\"path\", \"equals\"|\"min\"|\"max\"} objects");
  Json echo = Json::array();
  for (std::size_t i = 0; i < ex.node().size(); ++i) {
    const JsonReader e = ex.element(i);
    allow_only(e, {"path", "equals", "min", "max", "tolerance"});
    Expectation x;
    x.path = e.text("path");
    require(!x.path.empty() && x.path.front() == '/', e, "path", "must be a JSON pointer such as \"/search/found\"");
    try {
      (void)Json::json_pointer(x.path);
    } catch (const std::exception& err) {
      e.fail("path", err.what());
    }
    if (e.has("equals")) x.equals = e.node().at("equals");
    if (e.has("min")) x.min = e.number("min");
    if (e.has("max")) x.max = e.number("max");
    x.tolerance = e.number("tolerance", 0.0);
    require(x.equals || x.min || x.max, e, "", "needs at least one of equals, min or max");
    require(x.tolerance >= 0.0, e, "tolerance", "must be non-negative");
    Json ej{{"path", x.path}};
    if (x.equals) ej["equals"] = *x.equals;
    if (x.min) ej["min"] = json_number(*x.min);
    if (x.max) ej["max"] = json_number(*x.max);
    ej["tolerance"] = json_number(x.tolerance);
    echo.push_back(ej);
    out.push_back(std::move(x));
  }
  base["expect"] = echo;
  return out;
}

void evaluate(const Expectation& x, const Json& payload, Context& ctx) {
  const Json::json_pointer ptr(x.path);
  const std::string name = "expect " + x.path;
  if (!payload.contains(ptr)) {
    ctx.check(name, false, "path not present in the payload");
    return;
  }
  const Json& v = payload.at(ptr);
  const bool numeric = v.is_number() || v.is_string();
  double d = 0.0;
  if (x.min || x.max || (x.equals && (x.equals->is_number() || x.equals->is_string()))) {
    try {
      d = number_from_json(v, x.path);
    } catch (const ConfigError&) {
      if (x.min || x.max || x.equals->is_number()) {
        ctx.check(name, false, "value " + v.dump() + " is not a number");
        return;
      }
    }
  }
  bool ok = true;
  std::ostringstream detail;
  detail << "value " << v.dump();
  if (x.equals) {
    if (x.equals->is_number() && numeric)
      ok = ok && std::abs(d - x.equals->get<double>()) <= x.tolerance;
    else
      ok = ok && v == *x.equals;
    detail << ", equals " << x.equals->dump() << " +- " << num(x.tolerance);
  }
  if (x.min) {
    ok = ok && d >= *x.min;
    detail << ", min " << num(*x.min);
  }
  if (x.max) {
    ok = ok && d <= *x.max;
    detail << ", max " << num(*x.max);
  }
  ctx.check(name, ok, detail.str());
}

struct Plan {
  Prepared prepared;
  std::vector<Expectation> expectations;
  std::string command;
  std::uint64_t seed;
  std::size_t jobs;
};

Plan prepare(const Json& document) {
  if (!document.is_object()) throw ConfigError("$: the configuration must be a JSON object");
  const JsonReader r(document, "$");
  Plan plan;
  plan.command = r.text("command");
  plan.seed = r.u64("seed");
  plan.jobs = r.count("jobs", 1);
  require(plan.jobs >= 1, r, "jobs", "must be at least 1");
  Json base{{"command", plan.command}, {"seed", plan.seed}, {"jobs", plan.jobs}};
  plan.expectations = read_expectations(r, base);
  const auto& c = plan.command;
  try {
    if (c == "norm") plan.prepared = prepare_norm(r, base);
    else if (c == "jvn") plan.prepared = prepare_jvn(r, base);
    else if (c == "verify") plan.prepared = prepare_verify(r, base);
    else if (c == "nakano") plan.prepared = prepare_nakano(r, base);
    else if (c == "asymptotics") plan.prepared = prepare_asymptotics(r, base);
    else if (c == "summand") plan.prepared = prepare_summand(r, base);
    else if (c == "iterate") plan.prepared = prepare_iterate(r, base);
    else
      r.fail("command", "unknown command \"" + c +
                            "\" (expected norm, jvn, verify, nakano, asymptotics, summand or iterate)");
  } catch (const ConfigError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("$: ") + e.what());
  }
  // Keep "expect" last in the echo for readability.
  if (plan.prepared.normalized.contains("expect")) {
    Json ex = plan.prepared.normalized["expect"];
    plan.prepared.normalized.erase("expect");
    plan.prepared.normalized["expect"] = ex;
  }
  return plan;
}

}  // namespace

CampaignConfig validate_config(const Json& document) {
  Plan plan = prepare(document);
  return CampaignConfig{plan.prepared.normalized, plan.command, plan.seed, plan.jobs};
}

bool CampaignResult::passed() const {
  return !numerical_failure &&
         std::all_of(checks.begin(), checks.end(), [](const CampaignCheck& c) { return c.holds; });
}

int CampaignResult::exit_code() const {
  if (numerical_failure) return 3;
  return passed() ? 0 : 1;
}

Json CampaignResult::document() const {
  return Json{{"version", version}, {"config", config}, {"payload", payload}, {"wall_seconds", wall_seconds}};
}

std::string CampaignResult::summary_csv() const {
  std::ostringstream out;
  out << "command,check,holds,detail\n";
  const std::string command = config.value("command", "");
  auto field = [](const std::string& s) {
    std::string q = "\"";
    for (char ch : s) {
      if (ch == '"') q += '"';
      q += ch;
    }
    return q + "\"";
  };
  for (const auto& c : checks) out << command << "," << field(c.name) << "," << (c.holds ? "true" : "false") << ","
                                   << field(c.detail) << "\n";
  if (numerical_failure) out << command << ",numerical_failure,false," << field(failure) << "\n";
  return out.str();
}

CampaignResult run_campaign(const CampaignConfig& config) {
  Plan plan = prepare(config.document);
  CampaignResult result;
  result.config = plan.prepared.normalized;
  Context ctx{result, plan.seed, plan.jobs};
  const auto start = std::chrono::steady_clock::now();
  Json body;
  try {
    body = plan.prepared.run(ctx);
  } catch (const NumericalError& e) {
    result.numerical_failure = true;
    result.failure = e.what();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("$: ") + e.what());
  }
  result.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  Json payload{{"command", plan.command}, {"seed", plan.seed}};
  for (auto& [k, v] : body.items()) payload[k] = v;
  for (const auto& x : plan.expectations) evaluate(x, payload, ctx);
  Json checks = Json::array();
  for (const auto& c : result.checks) checks.push_back(Json{{"name", c.name}, {"holds", c.holds}, {"detail", c.detail}});
  payload["checks"] = checks;
  if (result.numerical_failure) payload["failure"] = result.failure;
  payload["passed"] = result.passed();
  result.payload = std::move(payload);
  return result;
}

std::string emit_plot_data(const CampaignResult& result, const std::string& kind) {
  const auto it = result.series.find(kind);
  if (it == result.series.end()) {
    std::string have;
    for (const auto& [k, v] : result.series) have += (have.empty() ? "" : ", ") + k;
    throw std::invalid_argument("emit_plot_data: the result carries no \"" + kind + "\" series (available: " +
                                (have.empty() ? "none" : have) + ")");
  }
  return it->second.render();
}

}  // namespace modbanach
