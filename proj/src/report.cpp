#include "holodyn/report.hpp"

namespace holodyn::report {

Json complex_json(Complex z) { return Json{{"re", z.real()}, {"im", z.imag()}}; }

Json box_json(const Box& b) {
  return Json{{"re_min", b.re_min}, {"re_max", b.re_max}, {"im_min", b.im_min}, {"im_max", b.im_max}};
}

Json fate_json(const Fate& f) {
  Json j{{"kind", to_string(f.kind)}};
  switch (f.kind) {
    case Fate::Kind::ConvergedTo: j["limit"] = complex_json(f.point); break;
    case Fate::Kind::CycleOfPeriod:
      j["period"] = f.period;
      j["representative"] = complex_json(f.point);
      break;
    case Fate::Kind::Escaped:
    case Fate::Kind::HitPole: j["step_index"] = f.step; break;
    case Fate::Kind::Undecided: break;
  }
  return j;
}

Json orbit_json(const OrbitRecord& r, bool include_points) {
  Json j{{"seed", complex_json(r.seed)}, {"length", r.points.size()}, {"fate", fate_json(r.fate)}};
  if (include_points) {
    Json pts = Json::array();
    for (Complex z : r.points) pts.push_back(Json::array({z.real(), z.imag()}));
    j["points"] = std::move(pts);
  }
  return j;
}

Json preimage_json(const PreimageSet& s) {
  Json j;
  j["target"] = s.target.is_infinite() ? Json("infinity") : complex_json(s.target.value());
  j["depth"] = s.depth;
  j["count"] = s.points.size();
  Json pts = Json::array();
  for (Complex z : s.points) pts.push_back(complex_json(z));
  j["points"] = std::move(pts);
  Json fails = Json::object();
  for (std::size_t i = 0; i < s.failures.size(); ++i)
    if (s.failures[i]) fails[to_string(static_cast<NewtonResult::Status>(i))] = s.failures[i];
  j["seed_failures"] = std::move(fails);
  j["outside_box"] = s.outside_box;
  return j;
}

Json periodic_point_json(const PeriodicPoint& p) {
  Json st{{"kind", to_string(p.stability.kind)}};
  if (p.stability.kind == Stability::RationallyIndifferent) st["q"] = p.stability.q;
  Json cyc = Json::array();
  for (Complex z : p.cycle) cyc.push_back(complex_json(z));
  return Json{{"location", complex_json(p.location)},
              {"minimal_period", p.minimal_period},
              {"multiplier", complex_json(p.multiplier)},
              {"multiplier_abs", std::abs(p.multiplier)},
              {"stability", std::move(st)},
              {"residual", p.residual},
              {"cycle", std::move(cyc)}};
}

Json periodic_search_json(const PeriodicSearch& s) {
  Json arr = Json::array();
  for (const auto& p : s.cycles) arr.push_back(periodic_point_json(p));
  Json fails = Json::object();
  for (std::size_t i = 0; i < s.newton_failures.size(); ++i)
    if (s.newton_failures[i]) fails[to_string(static_cast<NewtonResult::Status>(i))] = s.newton_failures[i];
  return Json{{"count", s.cycles.size()},
              {"cycles", std::move(arr)},
              {"seed_failures", std::move(fails)},
              {"outside_box", s.outside_box},
              {"residual_rejected", s.residual_rejected},
              {"not_minimal", s.not_minimal}};
}

Json rate_check_json(const RateCheck& r) {
  return Json{{"sequence", to_string(r.sequence)},
              {"fitted_slope", r.fitted_slope},
              {"intercept", r.intercept},
              {"max_residual", r.max_residual},
              {"verdict", r.pass ? "pass" : "fail"},
              {"points_used", r.points_used},
              {"growth_exponent", r.growth_exponent}};
}

Json fate_label_json(const FateLabel& l) {
  Json j{{"kind", to_string(l.kind)}};
  Json ev = Json::object();
  ev["orbit_fate"] = to_string(l.orbit_fate);
  ev["orbit_length"] = l.orbit_length;
  switch (l.kind) {
    case FateKind::AttractingBasin:
      if (l.at_infinity) j["point"] = "infinity";
      else j["point"] = complex_json(l.point);
      j["period"] = l.period;
      ev["multiplier"] = complex_json(l.multiplier);
      break;
    case FateKind::LeauCandidate:
      j["point"] = complex_json(l.point);
      j["period"] = l.period;
      ev["multiplier"] = complex_json(l.multiplier);
      ev["q"] = l.q;
      ev["decay_slope"] = l.decay_slope;
      break;
    case FateKind::RotationCandidate:
      j["center"] = complex_json(l.point);
      j["period"] = l.period;
      ev["multiplier"] = complex_json(l.multiplier);
      ev["mean_rotation"] = l.mean_rotation;
      ev["rotation_spread"] = l.rotation_spread;
      break;
    case FateKind::BakerCandidate:
    case FateKind::WanderingCandidate:
    case FateKind::JuliaOrUndecided:
      if (l.period > 0) j["period"] = l.period;
      break;
  }
  if (l.kind == FateKind::BakerCandidate || l.kind == FateKind::WanderingCandidate ||
      (l.kind == FateKind::JuliaOrUndecided && l.period > 0)) {
    ev["mean_log_derivative"] = l.mean_log_derivative;
    ev["median_step"] = l.median_step;
    ev["drift"] = complex_json(l.drift);
    ev["probes_agreeing"] = l.probes_agreeing;
  }
  if (l.rate) ev["rate_check"] = rate_check_json(*l.rate);
  if (!l.note.empty()) ev["note"] = l.note;
  j["evidence"] = std::move(ev);
  return j;
}

Json raster_sidecar_json(const RasterGrid& g, const Json& parameters) {
  Json counts = Json::object();
  for (auto k : {CellCode::Kind::Undecided, CellCode::Kind::EscapeStep, CellCode::Kind::Converged,
                 CellCode::Kind::PoleHit, CellCode::Kind::JNear})
    counts[to_string(k)] = g.count(k);
  Json attr = Json::array();
  for (Complex z : g.attractors) attr.push_back(complex_json(z));
  return Json{{"format", "PGM P5, 8-bit, row-major, top row = max Im"},
              {"box", box_json(g.box)},
              {"width", g.width},
              {"height", g.height},
              {"parameters", parameters},
              {"legend",
               Json{{"Undecided", 0},
                    {"PoleHit", 16},
                    {"Converged", "32 + 16 * (attractor id mod 4)"},
                    {"EscapeStep", "96..254, histogram-equalized escape step"},
                    {"JNear", 255}}},
              {"cell_counts", std::move(counts)},
              {"attractors", std::move(attr)}};
}

Json newton_setup_json(const NewtonSetup& s) {
  Json roots = Json::array();
  for (const auto& r : s.roots)
    roots.push_back(Json{{"location", complex_json(r.location)},
                         {"multiplicity", r.multiplicity},
                         {"multiplier", complex_json(r.multiplier)},
                         {"multiplicity_from_multiplier", r.multiplicity_from_multiplier}});
  Json j{{"g", s.target->describe()}, {"h", complex_json(s.h)}};
  if (s.f_h) j["f_h"] = s.f_h->to_string();
  j["roots"] = std::move(roots);
  if (!s.warning.empty()) j["warning"] = s.warning;
  return j;
}

Json smale_json(const SmaleReport& r) {
  Json pts = Json::array();
  for (const auto& s : r.singular) {
    Json e{{"point", complex_json(s.point)}, {"fate", fate_json(s.fate)}};
    if (s.root_index >= 0) e["root_index"] = s.root_index;
    pts.push_back(std::move(e));
  }
  Json cyc = Json::array();
  for (const auto& c : r.obstructing_cycles) cyc.push_back(periodic_point_json(c));
  return Json{{"verdict", to_string(r.verdict)},
              {"singular_points", std::move(pts)},
              {"obstructing_cycles", std::move(cyc)}};
}

Json flow_json(const FlowOutcome& f) {
  Json j{{"kind", to_string(f.kind)}};
  if (f.root_index >= 0) j["root_index"] = f.root_index;
  j["terminal"] = complex_json(f.terminal);
  j["t"] = f.t;
  j["steps"] = f.steps;
  return j;
}

Json basin_json(const BasinReport& r) {
  Json roots = Json::array();
  for (Complex z : r.roots) roots.push_back(complex_json(z));
  Json cyc = Json::array();
  for (const auto& c : r.off_root_cycles) cyc.push_back(periodic_point_json(c));
  Json j{{"h", complex_json(r.h)},
         {"box", box_json(r.box)},
         {"width", r.width},
         {"height", r.height},
         {"max_iters", r.max_iters},
         {"roots", std::move(roots)},
         {"iteration_fractions", r.iteration_fractions},
         {"iteration_nonconvergent", r.iteration_nonconvergent}};
  if (r.flow_computed) {
    j["flow_fractions"] = r.flow_fractions;
    j["flow_nonconvergent"] = r.flow_nonconvergent;
  }
  j["off_root_cycles"] = std::move(cyc);
  return j;
}

Json bouquet_config_json(const BouquetConfig& c) {
  return Json{{"lambda", c.lambda}, {"N", c.N}, {"c", c.c}, {"q", c.q}};
}

Json itinerary_json(const ItineraryResult& r) {
  Json j{{"complete", r.complete}, {"symbols", r.symbols}};
  if (!r.complete) j["exit_step"] = r.exit_step;
  return j;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace holodyn::report
