#include <algorithm>
#include <cmath>
#include <functional>
#include <future>

#include "confmass/cli.hpp"
#include "confmass/sampling.hpp"

namespace confmass {

namespace {

json array(const Vector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(number(v[i]));
  return out;
}

json extrapolation_json(const Extrapolation& e) {
  return {{"limit", number(e.limit)},
          {"coefficient", number(e.coefficient)},
          {"exponent", number(e.exponent)},
          {"residual", number(e.residual)},
          {"error_estimate", number(e.error_estimate)},
          {"converged", e.converged}};
}

// Everything a suite needs, resolved once from the configuration.
struct Context {
  explicit Context(const RunConfig& c) : config(c) {}

  const RunConfig& config;
  int n = 3;
  bool hyperbolic = false;
  InitialData data;
  AHMetric metric;
  MetricFieldPtr g;
  SymTensorFieldPtr k;
  ScalarFieldPtr f;
  std::vector<double> schedule;
  SphereRule rule;
  SphereRule validation_rule;
  std::vector<Point> sample;
  // identity[b][q]: residuals for beta b at sample point q.
  std::vector<std::vector<IdentityResiduals>> identity;
};

using Records = std::vector<Record>;

Record make_record(const std::string& check, const std::string& anchor, json inputs = json::object()) {
  Record r;
  r.check = check;
  r.anchor = anchor;
  r.inputs = std::move(inputs);
  return r;
}

const std::vector<double>& betas(const Context& ctx) { return ctx.config.conformal->beta; }

void require_conformal(const Context& ctx, const std::string& suite) {
  if (!ctx.config.conformal) throw ConfigError("suite " + suite + " needs a 'conformal' block");
}

void require_flat_end(const Context& ctx, const std::string& what) {
  if (ctx.hyperbolic) throw ConfigError(what + " needs an asymptotically flat family");
}

void require_hyperbolic(const Context& ctx, const std::string& what) {
  if (!ctx.hyperbolic) throw ConfigError(what + " needs an asymptotically hyperbolic family");
}

Records identity_records(const Context& ctx, const std::string& anchor,
                         const std::vector<std::pair<std::string, double IdentityResiduals::*>>& fields) {
  Records out;
  for (std::size_t b = 0; b < betas(ctx).size(); ++b) {
    for (const auto& [name, member] : fields) {
      Record r = make_record(name, anchor, {{"beta", betas(ctx)[b]}, {"points", ctx.sample.size()}});
      double worst = 0.0;
      for (std::size_t q = 0; q < ctx.sample.size(); ++q) {
        const double e = ctx.identity[b][q].*member;
        worst = std::max(worst, e);
        r.series.push_back({{"x", array(ctx.sample[q])}, {"relative_error", number(e)}});
      }
      r.values = {{"max_relative_error", number(worst)}};
      r.residual = worst;
      r.tolerance = ctx.config.tolerances.identity;
      r.pass = worst <= r.tolerance;
      out.push_back(std::move(r));
    }
  }
  return out;
}

Records suite_lemma21(const Context& ctx) {
  return identity_records(ctx, "lemma2.1",
                          {{"christoffel", &IdentityResiduals::christoffel},
                           {"ricci", &IdentityResiduals::ricci},
                           {"scalar", &IdentityResiduals::scalar}});
}

Records suite_lemma23(const Context& ctx) {
  return identity_records(ctx, "lemma2.3", {{"mu", &IdentityResiduals::mu}, {"J", &IdentityResiduals::J}});
}

Records suite_corollary25(const Context& ctx) {
  Records out = identity_records(ctx, "corollary2.5",
                                 {{"mu_convex", &IdentityResiduals::mu_convex}, {"J_convex", &IdentityResiduals::J_convex}});
  for (std::size_t b = 0; b < betas(ctx).size(); ++b) {
    Record r = make_record("J_bound", "corollary2.5", {{"beta", betas(ctx)[b]}, {"points", ctx.sample.size()}});
    std::size_t violations = 0;
    for (std::size_t q = 0; q < ctx.sample.size(); ++q)
      if (!ctx.identity[b][q].J_bound_holds) ++violations;
    r.values = {{"violations", violations}};
    r.residual = static_cast<double>(violations);
    r.pass = violations == 0;
    out.push_back(std::move(r));
  }
  return out;
}

Records suite_lemma34(const Context& ctx) {
  return identity_records(ctx, "lemma3.4",
                          {{"scalar_convex", &IdentityResiduals::scalar_convex}, {"G", &IdentityResiduals::G}});
}

json energy_momentum_json(const EnergyMomentum& em) {
  return {{"E", number(em.E)},
          {"P", array(em.P)},
          {"error_estimate", number(em.error_estimate())},
          {"converged", em.converged}};
}

Records suite_lemma27(const Context& ctx) {
  Records out;
  const Tolerances& tol = ctx.config.tolerances;
  for (double beta : betas(ctx)) {
    const MassLinearity lin =
        check_mass_linearity(ctx.data, ctx.f, beta, ctx.schedule, ctx.rule, tol.extrapolation, Execution::parallel);
    const bool converged = lin.base.converged && lin.deformed.converged && lin.full.converged;
    const json masses = {{"base", energy_momentum_json(lin.base)},
                         {"deformed", energy_momentum_json(lin.deformed)},
                         {"full", energy_momentum_json(lin.full)},
                         {"extrapolation_error", number(lin.extrapolation_error)}};

    Record e = make_record("energy_linearity", "lemma2.7", {{"beta", beta}});
    e.values = masses;
    e.residual = lin.energy_residual;
    e.tolerance = tol.linearity;
    e.converged = converged;
    e.pass = converged && e.residual <= e.tolerance;
    out.push_back(std::move(e));

    Record p = make_record("momentum_linearity", "lemma2.7", {{"beta", beta}});
    p.values = {{"bar", number(lin.momentum_residual_bar)}, {"tilde", number(lin.momentum_residual_tilde)}};
    p.residual = std::max(lin.momentum_residual_bar, lin.momentum_residual_tilde);
    p.tolerance = tol.momentum;
    p.converged = converged;
    p.pass = converged && p.residual <= p.tolerance;
    out.push_back(std::move(p));
  }
  return out;
}

std::string theorem_status(bool hypothesis, bool conclusion) {
  if (!hypothesis) return "hypothesis not satisfied";
  return conclusion ? "conclusion holds" : "violation";
}

Records suite_theorem28(const Context& ctx) {
  Records out;
  const Tolerances& tol = ctx.config.tolerances;
  for (double beta : betas(ctx)) {
    const SpacetimeTheoremReport rep = check_theorem_spacetime(ctx.data, ctx.f, beta, ctx.sample, ctx.schedule, ctx.rule,
                                                               tol.theorem, Execution::parallel);
    const MassLinearity& m = rep.masses;
    Record r = make_record("theorem_spacetime", "theorem2.8", {{"beta", beta}, {"points", ctx.sample.size()}});
    r.values = {{"status", theorem_status(rep.hypothesis_holds, rep.conclusion_holds)},
                {"hypothesis_holds", rep.hypothesis_holds},
                {"min_slack", number(rep.min_slack)},
                {"noise", number(rep.noise)},
                {"combined_energy", number(rep.combined_energy)},
                {"momentum_norm", number(rep.momentum_norm)},
                {"conclusion_slack", number(rep.conclusion_slack)},
                {"conclusion_holds", rep.conclusion_holds},
                {"rigid", rep.rigid}};
    for (std::size_t q = 0; q < ctx.sample.size(); ++q)
      r.series.push_back({{"x", array(ctx.sample[q])}, {"slack", number(rep.slack[q])}});
    r.residual = rep.conclusion_slack;
    r.tolerance = tol.theorem;
    r.converged = m.base.converged && m.full.converged;
    r.pass = !rep.violation;
    out.push_back(std::move(r));
  }
  return out;
}

json mass_vector_json(const AHMassVector& m) {
  return {{"M", array(m.M)},
          {"classification", m.classification},
          {"error_estimate", number(m.error_estimate())},
          {"converged", m.converged}};
}

Records suite_lemma35(const Context& ctx) {
  Records out;
  const Tolerances& tol = ctx.config.tolerances;
  for (double beta : betas(ctx)) {
    const AHLinearity lin =
        check_ah_linearity(ctx.metric, ctx.f, beta, ctx.schedule, ctx.rule, tol.extrapolation, Execution::parallel);
    Record r = make_record("ah_linearity", "lemma3.5", {{"beta", beta}});
    r.values = {{"base", mass_vector_json(lin.base)},
                {"deformed", mass_vector_json(lin.deformed)},
                {"full", mass_vector_json(lin.full)},
                {"residual", array(lin.residual)},
                {"extrapolation_error", number(lin.extrapolation_error)}};
    r.residual = max_abs(lin.residual);
    r.tolerance = tol.ah_linearity;
    r.converged = lin.base.converged && lin.deformed.converged && lin.full.converged;
    r.pass = r.converged && r.residual <= r.tolerance;
    out.push_back(std::move(r));
  }
  return out;
}

Records suite_theorem36(const Context& ctx) {
  Records out;
  const Tolerances& tol = ctx.config.tolerances;
  for (double beta : betas(ctx)) {
    const AHTheoremReport rep = check_theorem_ah(ctx.metric, ctx.f, beta, ctx.sample, ctx.config.boundary, ctx.schedule,
                                                 ctx.rule, tol.extrapolation, Execution::parallel);
    const bool boundary_holds = !rep.boundary || rep.boundary->holds;
    Record r = make_record("theorem_ah", "theorem3.6", {{"beta", beta}, {"points", ctx.sample.size()}});
    r.values = {{"status", theorem_status(rep.hypothesis_holds && boundary_holds, rep.conclusion_holds)},
                {"hypothesis_holds", rep.hypothesis_holds},
                {"min_slack", number(rep.min_slack)},
                {"noise", number(rep.noise)},
                {"combined_mass", array(rep.combined_mass)},
                {"classification", rep.classification},
                {"conclusion_holds", rep.conclusion_holds},
                {"base", mass_vector_json(rep.base)},
                {"full", mass_vector_json(rep.full)}};
    if (rep.boundary) {
      const BoundaryCheck& b = *rep.boundary;
      r.values["boundary"] = {{"area_term", number(b.area_term)},     {"rhs", number(b.rhs)},
                              {"max_lhs", number(b.max_lhs)},         {"slack", number(b.slack)},
                              {"slack_opposite", number(b.slack_opposite)}, {"holds", b.holds}};
    }
    for (std::size_t q = 0; q < ctx.sample.size(); ++q)
      r.series.push_back({{"x", array(ctx.sample[q])}, {"slack", number(rep.slack[q])}});
    const double m0 = rep.combined_mass.size() > 0 ? rep.combined_mass[0] : 0.0;
    const double spatial = rep.combined_mass.size() > 1 ? rep.combined_mass.tail(ctx.n).norm() : 0.0;
    r.residual = m0 * m0 - spatial * spatial;
    r.tolerance = tol.band;
    r.converged = rep.base.converged && rep.full.converged;
    r.pass = !rep.violation;
    out.push_back(std::move(r));
  }
  return out;
}

Records suite_killing(const Context& ctx) {
  const int n = ctx.n;
  const double tol = ctx.config.tolerances.killing;
  const HyperbolicMetric b(n);
  Record frame = make_record("frame_orthonormality", "killing-data", {{"points", ctx.sample.size()}});
  Record divergence = make_record("killing_divergence", "killing-data", {{"points", ctx.sample.size()}});
  Record killing = make_record("conformal_killing", "killing-data", {{"points", ctx.sample.size()}});
  std::vector<double> e_frame(ctx.sample.size());
  std::vector<double> e_div(ctx.sample.size());
  std::vector<double> e_ck(ctx.sample.size());
  for_each_index(
      ctx.sample.size(),
      [&](std::size_t q) {
        const Point& y = ctx.sample[q];
        const Matrix e = hyperbolic_frame(y);
        e_frame[q] = max_abs(Matrix(e.transpose() * b.evaluate(y, 0).g * e - Matrix::Identity(n, n)));
        double div = 0.0;
        double ck = 0.0;
        for (int i = 0; i <= n; ++i) {
          const double nv = n * lapse(i, y);
          div = std::max(div, std::abs(killing_divergence(i, y) - nv) / std::max(1.0, std::abs(nv)));
          ck = std::max(ck, conformal_killing_residual(i, y));
        }
        e_div[q] = div;
        e_ck[q] = ck;
      },
      Execution::parallel);
  Records out;
  for (auto [rec, errs] : {std::pair{&frame, &e_frame}, std::pair{&divergence, &e_div}, std::pair{&killing, &e_ck}}) {
    double worst = 0.0;
    for (std::size_t q = 0; q < ctx.sample.size(); ++q) {
      worst = std::max(worst, (*errs)[q]);
      rec->series.push_back({{"x", array(ctx.sample[q])}, {"error", number((*errs)[q])}});
    }
    rec->values = {{"max_error", number(worst)}};
    rec->residual = worst;
    rec->tolerance = tol;
    rec->pass = worst <= tol;
    out.push_back(std::move(*rec));
  }
  return out;
}

Records decay_records(const DecayReport& rep, const std::string& anchor, const std::string& prefix) {
  Records out;
  for (const DecayQuantity& q : rep.quantities) {
    Record r = make_record(prefix + q.name, anchor);
    r.values = {{"slope", number(q.slope)},
                {"threshold", number(q.threshold)},
                {"fit_residual", number(q.fit_residual)},
                {"vanishes", q.vanishes}};
    for (std::size_t k = 0; k < q.radii.size(); ++k)
      r.series.push_back({{"radius", q.radii[k]}, {"max", number(q.maxima[k])}});
    r.residual = q.slope;
    r.tolerance = q.threshold;
    r.pass = q.pass;
    out.push_back(std::move(r));
  }
  Record summary = make_record(prefix + "summary", anchor);
  summary.values = {{"notes", rep.notes}, {"pass", rep.pass}};
  summary.pass = rep.pass;
  out.push_back(std::move(summary));
  return out;
}

Records suite_asymptotics(const Context& ctx) {
  Records out =
      decay_records(ah_asymptotics(ctx.metric, ctx.schedule, ctx.validation_rule, Execution::parallel), "asymptotics",
                    "asymptotics.");
  const double tol = ctx.config.tolerances.extrapolation;
  const AHMassVector metric = ah_mass(ctx.metric, ctx.schedule, ctx.rule, tol, FluxNormal::metric, Execution::parallel);
  const AHMassVector background =
      ah_mass(ctx.metric, ctx.schedule, ctx.rule, tol, FluxNormal::background, Execution::parallel);
  Record r = make_record("background_normal", "asymptotics");
  r.values = {{"metric", mass_vector_json(metric)}, {"background", mass_vector_json(background)}};
  r.residual = max_abs(Vector(metric.M - background.M));
  r.tolerance = std::max(1e-8, metric.error_estimate() + background.error_estimate());
  r.converged = metric.converged && background.converged;
  r.pass = r.converged && r.residual <= r.tolerance;
  out.push_back(std::move(r));
  return out;
}

using Suite = std::function<Records(const Context&)>;

struct SuiteEntry {
  Suite run;
  bool needs_conformal = false;
  int end = 0;  // 0 either, 1 flat only, 2 hyperbolic only
  bool needs_identity = false;
};

SuiteEntry suite_entry(const std::string& id) {
  if (id == "lemma2.1") return {suite_lemma21, true, 0, true};
  if (id == "lemma2.3") return {suite_lemma23, true, 0, true};
  if (id == "corollary2.5") return {suite_corollary25, true, 0, true};
  if (id == "lemma2.7") return {suite_lemma27, true, 1, false};
  if (id == "theorem2.8") return {suite_theorem28, true, 1, false};
  if (id == "lemma3.4") return {suite_lemma34, true, 0, true};
  if (id == "lemma3.5") return {suite_lemma35, true, 2, false};
  if (id == "theorem3.6") return {suite_theorem36, true, 2, false};
  if (id == "killing-data") return {suite_killing, false, 2, false};
  if (id == "asymptotics") return {suite_asymptotics, false, 2, false};
  throw ConfigError("unknown suite '" + id + "'");
}

Records command_af_mass(const Context& ctx) {
  require_flat_end(ctx, "af-mass");
  const EnergyMomentum em =
      adm_energy_momentum(ctx.data, ctx.schedule, ctx.rule, ctx.config.tolerances.extrapolation, Execution::parallel);
  const double tol = ctx.config.tolerances.extrapolation;
  Record e = make_record("E", "adm-energy-momentum");
  e.values = {{"E", number(em.E)}, {"fit", extrapolation_json(em.E_fit)}};
  for (std::size_t k = 0; k < em.radii.size(); ++k)
    e.series.push_back({{"radius", em.radii[k]}, {"E", number(em.flux[k].E)}});
  e.residual = em.E_fit.error_estimate;
  e.tolerance = tol * std::max(1.0, std::abs(em.E));
  e.converged = em.E_fit.converged;
  e.pass = e.converged;

  Record p = make_record("P", "adm-energy-momentum");
  json fits = json::array();
  double worst = 0.0;
  bool converged = true;
  for (const Extrapolation& f : em.P_fit) {
    fits.push_back(extrapolation_json(f));
    worst = std::max(worst, f.error_estimate);
    converged = converged && f.converged;
  }
  p.values = {{"P", array(em.P)}, {"fit", fits}};
  for (std::size_t k = 0; k < em.radii.size(); ++k)
    p.series.push_back({{"radius", em.radii[k]}, {"P", array(em.flux[k].P)}});
  p.residual = worst;
  p.tolerance = tol * std::max(1.0, max_abs(em.P));
  p.converged = converged;
  p.pass = converged;
  return {e, p};
}

Records command_ah_mass(const Context& ctx) {
  require_hyperbolic(ctx, "ah-mass");
  const AHMassVector m = ah_mass(ctx.metric, ctx.schedule, ctx.rule, ctx.config.tolerances.extrapolation,
                                 FluxNormal::metric, Execution::parallel);
  Record r = make_record("M", "ah-mass-vector");
  json fits = json::array();
  for (const Extrapolation& f : m.fits) fits.push_back(extrapolation_json(f));
  r.values = {{"M", array(m.M)}, {"classification", classify_mass(m.M, ctx.config.tolerances.band)}, {"fit", fits}};
  for (std::size_t k = 0; k < m.rhos.size(); ++k)
    r.series.push_back({{"rho", m.rhos[k]}, {"flux", array(m.flux[k])}});
  r.residual = m.error_estimate();
  r.tolerance = ctx.config.tolerances.extrapolation * std::max(1.0, max_abs(m.M));
  r.converged = m.converged;
  r.pass = m.converged;
  return {r};
}

Records command_constraints(const Context& ctx) {
  std::vector<ConstraintPair> pairs(ctx.sample.size());
  for_each_index(
      ctx.sample.size(), [&](std::size_t q) { pairs[q] = compute_mu_J(*ctx.g, *ctx.k, ctx.sample[q]); },
      Execution::parallel);
  Record mu = make_record("mu", "constraint-densities", {{"points", ctx.sample.size()}});
  Record J = make_record("J", "constraint-densities", {{"points", ctx.sample.size()}});
  double mu_min = HUGE_VAL;
  double j_max = 0.0;
  for (std::size_t q = 0; q < ctx.sample.size(); ++q) {
    const MetricAtPoint m(ctx.g->evaluate(ctx.sample[q], 0).g);
    const double jn = norm(m, pairs[q].J);
    mu_min = std::min(mu_min, pairs[q].mu);
    j_max = std::max(j_max, jn);
    mu.series.push_back({{"x", array(ctx.sample[q])}, {"mu", number(pairs[q].mu)}, {"scale", number(pairs[q].mu_scale)}});
    J.series.push_back(
        {{"x", array(ctx.sample[q])}, {"J", array(pairs[q].J.c)}, {"norm", number(jn)}, {"scale", number(pairs[q].J_scale)}});
  }
  mu.values = {{"min", number(mu_min)}};
  J.values = {{"max_norm", number(j_max)}};
  return {mu, J};
}

Records command_validate(const Context& ctx) {
  if (ctx.hyperbolic)
    return decay_records(validate_ah(ctx.metric, ctx.schedule, ctx.validation_rule, Execution::parallel),
                         "decay-validation", "decay.");
  double f_tau = 0.0;
  if (ctx.config.conformal) {
    const auto it = ctx.config.conformal->params.find("tau");
    if (it != ctx.config.conformal->params.end() && it->second.size() == 1) f_tau = it->second.front();
  }
  return decay_records(validate_af(ctx.data, ctx.f, ctx.schedule, ctx.validation_rule, f_tau, Execution::parallel),
                       "decay-validation", "decay.");
}

void compute_identities(Context& ctx) {
  const auto& bs = betas(ctx);
  ctx.identity.assign(bs.size(), std::vector<IdentityResiduals>(ctx.sample.size()));
  for (std::size_t b = 0; b < bs.size(); ++b)
    for_each_index(
        ctx.sample.size(),
        [&](std::size_t q) { ctx.identity[b][q] = conformal_identity_residuals(ctx.g, ctx.k, ctx.f, bs[b], ctx.sample[q]); },
        Execution::parallel);
}

}  // namespace

Report run(const RunConfig& config) {
  Context ctx(config);
  ctx.n = config.dimension;
  const FamilyResult fam = make_family(config.family);
  if (const auto* d = std::get_if<InitialData>(&fam)) {
    ctx.data = *d;
    if (config.extrinsic) ctx.data = InitialData(d->g, make_extrinsic(*config.extrinsic), d->tau, d->eps);
    ctx.g = ctx.data.g;
    ctx.k = ctx.data.K;
  } else {
    ctx.hyperbolic = true;
    ctx.metric = std::get<AHMetric>(fam);
    ctx.g = ctx.metric.g;
    ctx.k = std::make_shared<ZeroTensor>(ctx.n);
  }
  if (config.conformal) ctx.f = make_factor(FamilySpec{config.conformal->family, ctx.n, config.conformal->params});

  const ScheduleConfig& s = config.schedule;
  ctx.schedule = s.ratio ? geometric_schedule(s.start, *s.ratio, s.count) : arithmetic_schedule(s.start, *s.step, s.count);
  ctx.rule = sphere_rule(ctx.n, config.order);
  ctx.validation_rule = sphere_rule(ctx.n, config.validation_order);

  // Keep the sample strictly inside the chart.
  const double rmin = std::max(config.sample.min, 1.01 * ctx.g->chart().radial_min);
  const double rmax = std::max(config.sample.max, rmin);
  ctx.sample = random_shell_points(ctx.n, config.sample.count, config.sample.seed, rmin, rmax);

  Report report;
  report.command = config.command;
  report.environment = config_to_json(config);
  report.environment["chart"] = ctx.hyperbolic ? "polar_hyperbolic" : "cartesian_end";
  report.environment["sphere_nodes"] = ctx.rule.size();
  report.environment["schedule_values"] = ctx.schedule;
  report.environment["sample_radii"] = {rmin, rmax};

  if (config.command == "af-mass") {
    report.records = command_af_mass(ctx);
  } else if (config.command == "ah-mass") {
    report.records = command_ah_mass(ctx);
  } else if (config.command == "constraints") {
    report.records = command_constraints(ctx);
  } else if (config.command == "validate") {
    report.records = command_validate(ctx);
  } else if (config.command == "verify") {
    std::vector<SuiteEntry> entries;
    bool identities = false;
    for (const std::string& id : config.suites) {
      SuiteEntry e = suite_entry(id);
      if (e.needs_conformal) require_conformal(ctx, id);
      if (e.end == 1) require_flat_end(ctx, "suite " + id);
      if (e.end == 2) require_hyperbolic(ctx, "suite " + id);
      identities = identities || e.needs_identity;
      entries.push_back(std::move(e));
    }
    if (identities) compute_identities(ctx);
    // Suites run concurrently; records are appended in declaration order.
    std::vector<std::future<Records>> pending;
    for (const SuiteEntry& e : entries)
      pending.push_back(std::async(std::launch::async, [&ctx, run = e.run] { return run(ctx); }));
    for (auto& p : pending) {
      Records r = p.get();
      report.records.insert(report.records.end(), std::make_move_iterator(r.begin()), std::make_move_iterator(r.end()));
    }
  } else {
    throw ConfigError("unknown command '" + config.command + "'");
  }
  return report;
}

}  // namespace confmass
