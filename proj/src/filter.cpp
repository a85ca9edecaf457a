#include "rfs/filter.hpp"

#include <chrono>
#include <map>
#include <unordered_map>

namespace rfs {

const char* to_string(FilterVariant v) {
  switch (v) {
    case FilterVariant::kPmbm: return "pmbm";
    case FilterVariant::kPmb: return "pmb";
    case FilterVariant::kAMbm: return "a-mbm";
    case FilterVariant::kAMb: return "a-mb";
  }
  return "?";
}

std::optional<FilterVariant> parse_filter_variant(std::string_view name) {
  if (name == "pmbm") return FilterVariant::kPmbm;
  if (name == "pmb") return FilterVariant::kPmb;
  if (name == "a-mbm" || name == "ambm") return FilterVariant::kAMbm;
  if (name == "a-mb" || name == "amb") return FilterVariant::kAMb;
  return std::nullopt;
}

PmbmDensity make_empty_density() {
  PmbmDensity d;
  d.globals.push_back({0.0, {}});
  return d;
}

PmbmDensity predict(const PmbmDensity& d, const FilterConfig& cfg,
                    const FilterModels& models, int step,
                    std::span<const VecXd> prev_measurements) {
  if (cfg.is_adaptive_variant() && !cfg.adaptive.has_value()) {
    throw std::invalid_argument(
        "predict: adaptive-birth variant requires an AdaptiveBirthConfig");
  }

  PmbmDensity out;
  out.step = step;
  out.next_track_id = d.next_track_id;
  out.globals = d.globals;

  out.tracks.reserve(d.tracks.size());
  for (const auto& t : d.tracks) {
    TrackRecord nt = t;
    for (auto& lh : nt.locals) lh.bern = predict_bernoulli(lh.bern, models.motion);
    out.tracks.push_back(std::move(nt));
  }

  PoissonIntensityd birth;
  if (cfg.uses_bayesian_birth()) birth = birth_intensity_at(models.birth, step);
  out.ppp = predict_ppp(d.ppp, models.motion, birth, cfg.prune_ppp);

  if (cfg.adaptive.has_value() && !prev_measurements.empty()) {
    if (prev_measurements.size() != d.pending_r_u.size()) {
      throw std::invalid_argument(
          "predict: previous measurements do not match the recorded r_U list");
    }
    const auto& acfg = *cfg.adaptive;
    for (std::size_t i = 0; i < prev_measurements.size(); ++i) {
      const double r = birth_existence(d.pending_r_u, static_cast<int>(i), acfg, step);
      if (r < cfg.prune_bernoulli) continue;
      TrackRecord rec;
      rec.id = out.next_track_id++;
      rec.birth_step = step;
      rec.origin = TrackOrigin::kAdaptiveBirth;
      rec.origin_measurement = static_cast<int>(i);
      auto bern = make_birth_bernoulli(prev_measurements[i], r, acfg,
                                       models.sensor.H, step, static_cast<int>(i));
      bern.track_id = rec.id;
      rec.locals.push_back({std::move(bern)});
      out.tracks.push_back(std::move(rec));
      for (auto& g : out.globals) g.selectors.push_back(0);
    }
  }
  return out;
}

namespace {

struct LocalChildren {
  BernoulliUpdateResult<double> mis;
  // Detection children per measurement; unset = outside the gate.
  std::vector<std::optional<BernoulliUpdateResult<double>>> det;
};

struct ChildHypothesis {
  double log_weight = 0.0;
  std::vector<int> selectors;
  Assignment assignment;
  bool has_assignment = false;
};

void normalize(std::vector<ChildHypothesis>& children) {
  std::vector<double> lws;
  lws.reserve(children.size());
  for (const auto& c : children) lws.push_back(c.log_weight);
  const double lse = log_sum_exp(std::span<const double>(lws));
  if (!std::isfinite(lse)) {
    throw std::runtime_error("update: all association hypotheses have zero weight");
  }
  for (auto& c : children) c.log_weight -= lse;
}

}  // namespace

PmbmDensity update(const PmbmDensity& d, std::span<const VecXd> measurements,
                   const FilterConfig& cfg, const FilterModels& models) {
  const auto& sensor = models.sensor;
  const int m = static_cast<int>(measurements.size());
  const int n_existing = static_cast<int>(d.tracks.size());

  PmbmDensity out;
  out.step = d.step;
  out.next_track_id = d.next_track_id;
  out.ppp = update_ppp_misdetection(d.ppp, sensor, cfg.prune_ppp);

  // New-track candidates from the predicted PPP, one per measurement. With an
  // empty PPP (A-variants) r is 0 and the column degenerates to clutter-only.
  VecXd new_col_logw(m);
  std::vector<std::optional<BernoulliTrackd>> candidates(m);
  std::vector<int> candidate_slot(m, -1);
  for (int i = 0; i < m; ++i) {
    auto init = init_bernoulli_from_measurement(d.ppp, measurements[i], sensor,
                                                cfg.gate_gamma);
    new_col_logw(i) = init.log_assoc_weight;
    if (init.track.r >= cfg.prune_bernoulli) {
      init.track.birth_time = d.step;
      init.track.origin_measurement = i;
      candidates[i] = std::move(init.track);
    }
  }

  // Misdetection and gated detection children for every existing local.
  std::vector<std::vector<LocalChildren>> table(n_existing);
  for (int t = 0; t < n_existing; ++t) {
    const auto& locals = d.tracks[t].locals;
    table[t].resize(locals.size());
    for (std::size_t h = 0; h < locals.size(); ++h) {
      auto& cell = table[t][h];
      cell.mis = update_bernoulli_misdetection(locals[h].bern, sensor);
      cell.det.resize(m);
      for (int i = 0; i < m; ++i) {
        if (!gate(locals[h].bern.density, measurements[i], sensor, cfg.gate_gamma))
          continue;
        cell.det[i] =
            update_bernoulli_detection(locals[h].bern, measurements[i], sensor);
      }
    }
  }

  // Output track records: existing tracks (locals filled on demand), then one
  // record per new-track candidate.
  out.tracks.reserve(n_existing + m);
  for (const auto& t : d.tracks) {
    TrackRecord rec = t;
    rec.locals.clear();
    out.tracks.push_back(std::move(rec));
  }
  for (int i = 0; i < m; ++i) {
    if (!candidates[i]) continue;
    TrackRecord rec;
    rec.id = out.next_track_id++;
    rec.birth_step = d.step;
    rec.origin = TrackOrigin::kBayesNew;
    rec.origin_measurement = i;
    auto bern = *candidates[i];
    bern.track_id = rec.id;
    rec.locals.push_back({std::move(bern)});
    candidate_slot[i] = static_cast<int>(out.tracks.size());
    out.tracks.push_back(std::move(rec));
  }
  const int n_total = static_cast<int>(out.tracks.size());

  // Local-hypothesis dedup across parents: (track, parent local, assoc) maps
  // to one child local. assoc is -1 for misdetection, else the measurement.
  std::vector<std::unordered_map<long long, int>> local_index(n_existing);
  auto child_local = [&](int t, int parent_h, int assoc) {
    const long long key =
        static_cast<long long>(parent_h) * (m + 1) + (assoc + 1);
    auto [it, inserted] = local_index[t].try_emplace(key, -1);
    if (inserted) {
      const auto& cell = table[t][parent_h];
      const auto& res = assoc < 0 ? cell.mis : *cell.det[assoc];
      out.tracks[t].locals.push_back({res.track});
      it->second = static_cast<int>(out.tracks[t].locals.size()) - 1;
    }
    return it->second;
  };

  std::vector<ChildHypothesis> children;
  for (const auto& parent : d.globals) {
    std::vector<int> cols;  // track indices present in this hypothesis
    for (int t = 0; t < n_existing; ++t)
      if (parent.selectors[t] >= 0) cols.push_back(t);
    const int n_h = static_cast<int>(cols.size());

    double mis_base = parent.log_weight;
    for (int t : cols)
      mis_base += floored_log(table[t][parent.selectors[t]].mis.log_assoc_weight);

    if (m == 0) {
      ChildHypothesis child;
      child.log_weight = mis_base;
      child.selectors.assign(n_total, -1);
      for (int t : cols)
        child.selectors[t] = child_local(t, parent.selectors[t], -1);
      children.push_back(std::move(child));
      continue;
    }

    MatXd det_logw = MatXd::Constant(m, n_h, kNegInf);
    VecXd mis_logw(n_h);
    for (int j = 0; j < n_h; ++j) {
      const auto& cell = table[cols[j]][parent.selectors[cols[j]]];
      mis_logw(j) = cell.mis.log_assoc_weight;
      for (int i = 0; i < m; ++i)
        if (cell.det[i]) det_logw(i, j) = cell.det[i]->log_assoc_weight;
    }
    const AssocCostMatrix cost =
        assemble_cost_matrix(det_logw, mis_logw, new_col_logw);
    const int k = kbest_budget(parent.log_weight, cfg.max_hypotheses);

    for (auto& a : murty_kbest(cost, k)) {
      ChildHypothesis child;
      child.log_weight = mis_base - a.total_cost;
      child.selectors.assign(n_total, -1);
      std::vector<int> col_row(n_h, -1);
      for (int i = 0; i < m; ++i)
        if (a.mapping[i] < n_h) col_row[a.mapping[i]] = i;
      for (int j = 0; j < n_h; ++j) {
        const int t = cols[j];
        child.selectors[t] = child_local(t, parent.selectors[t], col_row[j]);
      }
      for (int i = 0; i < m; ++i) {
        if (a.mapping[i] >= n_h && candidate_slot[i] >= 0)
          child.selectors[candidate_slot[i]] = 0;
      }
      child.assignment = std::move(a);
      child.has_assignment = true;
      children.push_back(std::move(child));
    }
  }

  normalize(children);

  // Threshold pruning, N_h cap, renormalization.
  const double prune_lw = std::log(cfg.prune_hypothesis);
  std::erase_if(children, [&](const ChildHypothesis& c) {
    return c.log_weight < prune_lw;
  });
  std::stable_sort(children.begin(), children.end(),
                   [](const ChildHypothesis& a, const ChildHypothesis& b) {
                     return a.log_weight > b.log_weight;
                   });
  if (static_cast<int>(children.size()) > cfg.max_hypotheses)
    children.resize(cfg.max_hypotheses);
  normalize(children);

  // r_U per measurement, from the surviving renormalized hypotheses (Eq. (6)).
  std::vector<double> r_u(m, 0.0);
  if (m > 0) {
    std::vector<std::pair<double, Assignment>> hyps;
    hyps.reserve(children.size());
    for (const auto& c : children) hyps.push_back({c.log_weight, c.assignment});
    for (int i = 0; i < m; ++i)
      r_u[i] = association_probability(
          i, std::span<const std::pair<double, Assignment>>(hyps));
  }

  // Bernoulli pruning: drop locals with r < Gamma_b from the hypotheses that
  // reference them, then merge hypotheses that became identical.
  for (auto& c : children) {
    for (int t = 0; t < n_total; ++t) {
      const int s = c.selectors[t];
      if (s >= 0 && out.tracks[t].locals[s].bern.r < cfg.prune_bernoulli)
        c.selectors[t] = -1;
    }
  }
  {
    std::map<std::vector<int>, int> seen;
    std::vector<ChildHypothesis> merged;
    merged.reserve(children.size());
    for (auto& c : children) {
      auto [it, inserted] = seen.try_emplace(c.selectors, -1);
      if (inserted) {
        it->second = static_cast<int>(merged.size());
        merged.push_back(std::move(c));
      } else {
        auto& dst = merged[it->second];
        dst.log_weight = log_sum_exp(dst.log_weight, c.log_weight);
      }
    }
    children = std::move(merged);
    std::stable_sort(children.begin(), children.end(),
                     [](const ChildHypothesis& a, const ChildHypothesis& b) {
                       return a.log_weight > b.log_weight;
                     });
  }

  // Garbage-collect unreferenced locals and empty tracks.
  std::vector<std::vector<int>> local_map(n_total);
  for (int t = 0; t < n_total; ++t)
    local_map[t].assign(out.tracks[t].locals.size(), -1);
  for (const auto& c : children)
    for (int t = 0; t < n_total; ++t)
      if (c.selectors[t] >= 0) local_map[t][c.selectors[t]] = 0;

  std::vector<int> track_map(n_total, -1);
  std::vector<TrackRecord> kept_tracks;
  for (int t = 0; t < n_total; ++t) {
    std::vector<LocalHypothesis> kept;
    int next = 0;
    for (std::size_t h = 0; h < out.tracks[t].locals.size(); ++h) {
      if (local_map[t][h] < 0) continue;
      local_map[t][h] = next++;
      kept.push_back(std::move(out.tracks[t].locals[h]));
    }
    if (kept.empty()) continue;
    track_map[t] = static_cast<int>(kept_tracks.size());
    out.tracks[t].locals = std::move(kept);
    kept_tracks.push_back(std::move(out.tracks[t]));
  }
  out.tracks = std::move(kept_tracks);

  out.globals.clear();
  out.globals.reserve(children.size());
  for (const auto& c : children) {
    GlobalHypothesis g;
    g.log_weight = c.log_weight;
    g.selectors.assign(out.tracks.size(), -1);
    for (int t = 0; t < n_total; ++t) {
      if (c.selectors[t] >= 0 && track_map[t] >= 0)
        g.selectors[track_map[t]] = local_map[t][c.selectors[t]];
    }
    out.globals.push_back(std::move(g));
  }

  if (cfg.adaptive.has_value()) {
    out.pending_birth_measurements.assign(measurements.begin(), measurements.end());
    out.pending_r_u = std::move(r_u);
  }
  return out;
}

PmbmDensity reduce_to_pmb(const PmbmDensity& d, double prune_bernoulli) {
  PmbmDensity out;
  out.ppp = d.ppp;
  out.step = d.step;
  out.next_track_id = d.next_track_id;
  out.pending_birth_measurements = d.pending_birth_measurements;
  out.pending_r_u = d.pending_r_u;

  for (std::size_t t = 0; t < d.tracks.size(); ++t) {
    double r_merged = 0.0;
    std::vector<double> log_w;
    std::vector<Gaussiand> dens;
    for (const auto& g : d.globals) {
      const int s = g.selectors[t];
      if (s < 0) continue;
      const auto& bern = d.tracks[t].locals[s].bern;
      const double w = std::exp(g.log_weight) * bern.r;
      r_merged += w;
      if (w > 0.0) {
        log_w.push_back(g.log_weight + std::log(bern.r));
        dens.push_back(bern.density);
      }
    }
    if (r_merged < prune_bernoulli || log_w.empty()) continue;

    TrackRecord rec = d.tracks[t];
    BernoulliTrackd bern = rec.locals.front().bern;
    bern.r = std::min(r_merged, 1.0);
    bern.density = moment_match(std::span<const double>(log_w),
                                std::span<const Gaussiand>(dens));
    rec.locals.clear();
    rec.locals.push_back({std::move(bern)});
    out.tracks.push_back(std::move(rec));
  }

  GlobalHypothesis g;
  g.log_weight = 0.0;
  g.selectors.assign(out.tracks.size(), 0);
  out.globals.push_back(std::move(g));
  return out;
}

std::vector<Estimate> estimate(const PmbmDensity& d, const FilterConfig& cfg) {
  std::vector<Estimate> out;
  if (d.globals.empty()) return out;
  const auto& best = d.globals.front();  // globals kept weight-descending
  for (std::size_t t = 0; t < d.tracks.size(); ++t) {
    const int s = best.selectors[t];
    if (s < 0) continue;
    const auto& bern = d.tracks[t].locals[s].bern;
    if (bern.r > cfg.estimator_threshold)
      out.push_back({d.tracks[t].id, bern.density.mean});
  }
  return out;
}

FilterRunResult run_filter(const FilterConfig& cfg, const FilterModels& models,
                           std::span<const std::vector<VecXd>> measurement_sequence) {
  if (cfg.is_adaptive_variant() && !cfg.adaptive.has_value()) {
    throw std::invalid_argument(
        "run_filter: adaptive-birth variant requires an AdaptiveBirthConfig");
  }
  FilterRunResult out;
  PmbmDensity d = make_empty_density();
  for (std::size_t k = 1; k <= measurement_sequence.size(); ++k) {
    const auto t0 = std::chrono::steady_clock::now();
    std::span<const VecXd> prev;
    if (k > 1) prev = measurement_sequence[k - 2];
    d = predict(d, cfg, models, static_cast<int>(k), prev);
    d = update(d, measurement_sequence[k - 1], cfg, models);
    if (cfg.reduces_to_single_hypothesis())
      d = reduce_to_pmb(d, cfg.prune_bernoulli);
    out.estimates.push_back(estimate(d, cfg));

    StepDiagnostics diag;
    diag.step = static_cast<int>(k);
    diag.num_global_hypotheses = static_cast<int>(d.globals.size());
    diag.num_tracks = static_cast<int>(d.tracks.size());
    diag.num_ppp_terms = static_cast<int>(d.ppp.terms.size());
    diag.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    out.diagnostics.push_back(diag);
  }
  return out;
}

}  // namespace rfs
