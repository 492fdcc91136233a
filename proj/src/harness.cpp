#include "wearnet/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <limits>
#include <mutex>
#include <ostream>
#include <stdexcept>
#include <thread>

namespace wearnet {

namespace {

constexpr std::size_t kBlock = 256;
constexpr std::uint64_t kSceneStream = 0;
constexpr std::uint64_t kBlockageStream = 1;
constexpr std::uint64_t kGainStream = 2;

// Running mean and sum of squared deviations; merge() is Chan's update, so a
// fixed merge order gives fixed bits.
struct Moments {
  double n{0};
  double mean{0};
  double m2{0};

  void add(double x) {
    n += 1;
    const double d = x - mean;
    mean += d / n;
    m2 += d * (x - mean);
  }
  void merge(const Moments& o) {
    if (o.n == 0) return;
    if (n == 0) {
      *this = o;
      return;
    }
    const double total = n + o.n;
    const double d = o.mean - mean;
    mean += d * o.n / total;
    m2 += o.m2 + d * d * n * o.n / total;
    n = total;
  }
  MeanEstimate estimate() const {
    const double sd = n > 1 ? std::sqrt(m2 / (n - 1)) : 0.0;
    return {mean, n > 1 ? 1.959963984540054 * sd / std::sqrt(n) : 0.0, static_cast<std::size_t>(n)};
  }
};

std::size_t block_count(std::size_t reps) { return (reps + kBlock - 1) / kBlock; }

// Evaluates per-block accumulators in parallel and merges them in block order.
template <typename Acc, typename PerRep>
Acc reduce_blocks(std::size_t reps, unsigned workers, const Acc& init, PerRep&& per_rep) {
  const std::size_t blocks = block_count(reps);
  std::vector<Acc> partial(blocks, init);
  parallel_for(blocks, workers, [&](std::size_t b) {
    const std::size_t end = std::min(reps, (b + 1) * kBlock);
    for (std::size_t rep = b * kBlock; rep < end; ++rep) per_rep(partial[b], rep);
  });
  Acc total = init;
  for (const auto& p : partial) total.merge(p);
  return total;
}

struct MomentGrid {
  std::vector<Moments> cells;
  explicit MomentGrid(std::size_t n = 0) : cells(n) {}
  void merge(const MomentGrid& o) {
    for (std::size_t i = 0; i < cells.size(); ++i) cells[i].merge(o.cells[i]);
  }
};

std::string num(double x) {
  if (std::isnan(x)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

void write_header(std::ostream& os, const CsvContext& ctx, std::string_view columns) {
  os << "# wearnet " << ctx.experiment << " seed=" << ctx.seed << " config_hash=" << ctx.config_hash
     << " columns: " << columns << '\n'
     << columns << '\n';
}

std::vector<SlabMaterial<double>> materials_for(const std::vector<Reflectivity>& refl, double wavelength) {
  std::vector<SlabMaterial<double>> out;
  for (auto r : refl) out.push_back(reflectivity_preset(r, wavelength));
  return out;
}

template <typename T>
void require_nonempty(const std::vector<T>& v, const char* name) {
  if (v.empty()) throw std::invalid_argument(std::string(name) + " grid must be nonempty");
}

}  // namespace

std::string_view to_string(ExperimentId id) {
  switch (id) {
    case ExperimentId::kFig5: return "fig5";
    case ExperimentId::kFig6: return "fig6";
    case ExperimentId::kFig8a: return "fig8a";
    case ExperimentId::kFig8b: return "fig8b";
    case ExperimentId::kFig9: return "fig9";
    case ExperimentId::kFig10: return "fig10";
    case ExperimentId::kCustom: return "custom";
  }
  return "custom";
}

ExperimentId parse_experiment_id(std::string_view name) {
  for (auto id : {ExperimentId::kFig5, ExperimentId::kFig6, ExperimentId::kFig8a, ExperimentId::kFig8b,
                  ExperimentId::kFig9, ExperimentId::kFig10, ExperimentId::kCustom})
    if (name == to_string(id)) return id;
  throw std::invalid_argument("experiment id must be one of fig5, fig6, fig8a, fig8b, fig9, fig10, custom; got \"" +
                              std::string(name) + "\"");
}

std::string_view to_string(ModeSelection m) {
  switch (m) {
    case ModeSelection::kExact: return "exact";
    case ModeSelection::kStochastic: return "stochastic";
    case ModeSelection::kBoth: return "both";
  }
  return "both";
}

ModeSelection parse_mode_selection(std::string_view name) {
  if (name == "exact") return ModeSelection::kExact;
  if (name == "stochastic") return ModeSelection::kStochastic;
  if (name == "both") return ModeSelection::kBoth;
  throw std::invalid_argument("mode must be \"exact\", \"stochastic\" or \"both\", got \"" + std::string(name) + "\"");
}

std::vector<BlockageMode> modes_of(ModeSelection m) {
  switch (m) {
    case ModeSelection::kExact: return {BlockageMode::kExact};
    case ModeSelection::kStochastic: return {BlockageMode::kStochastic};
    case ModeSelection::kBoth: return {BlockageMode::kExact, BlockageMode::kStochastic};
  }
  return {};
}

void ExperimentSpec::validate() const {
  if (replications < 1) throw std::invalid_argument("replications must be >= 1");
  if (workers < 1) throw std::invalid_argument("workers must be >= 1");
  for (int k : interferers)
    if (k < 0) throw std::invalid_argument("interferer grid values must be >= 0");
  for (double r : wearable_offsets)
    if (!(r >= 0)) throw std::invalid_argument("wearable offset grid values must be >= 0");
  for (int n : array_elements)
    if (n < 1) throw std::invalid_argument("array element grid values must be >= 1");
  for (double b : bandwidths)
    if (!(b > 0)) throw std::invalid_argument("bandwidth grid values must be > 0");
  for (double b : onbody_betas)
    if (!(b >= 0 && b <= 1)) throw std::invalid_argument("onbody beta grid values must lie in [0, 1]");
  for (double l : shadow_losses_db)
    if (!(l >= 0) || !std::isfinite(l)) throw std::invalid_argument("shadow loss grid values must be finite and >= 0 dB");
  if (!std::is_sorted(shadow_losses_db.begin(), shadow_losses_db.end()))
    throw std::invalid_argument("shadow loss grid must be ascending");
}

ExperimentSpec default_experiment(ExperimentId id) {
  ExperimentSpec s;
  s.id = id;
  s.reflectivities = {Reflectivity::kHigh};
  s.placements = {ReceiverPlacement::kCenter};
  switch (id) {
    case ExperimentId::kFig5:
      s.interferers = {5, 10, 15, 20, 25, 30, 35, 40, 45, 50};
      s.wearable_offsets = {0.02, 0.1};
      break;
    case ExperimentId::kFig6:
      s.interferers = {20};
      s.onbody_betas = {1, 0};
      s.reflectivities = {Reflectivity::kLow, Reflectivity::kHigh};
      break;
    case ExperimentId::kFig8a:
      s.interferers = {0, 5, 10, 20, 40};
      s.bandwidths = {0.25e9, 0.5e9, 1e9, 2e9, 4e9, 8e9};
      s.onbody_betas = {1, 0};
      break;
    case ExperimentId::kFig8b:
      s.interferers = {0, 5, 10, 15, 20, 25, 30, 35, 40, 45, 50};
      s.wearable_offsets = {0.02, 0.1};
      s.onbody_betas = {0};
      s.placements = {ReceiverPlacement::kCenter, ReceiverPlacement::kCorner};
      break;
    case ExperimentId::kFig9:
      s.mode = ModeSelection::kExact;
      s.interferers = {40};
      s.array_elements = {1, 4, 9, 16};
      s.reflectivities = {Reflectivity::kLow, Reflectivity::kHigh};
      break;
    case ExperimentId::kFig10:
      s.mode = ModeSelection::kExact;
      s.interferers = {10, 40};
      s.array_elements = {4, 9, 16};
      s.reflectivities = {Reflectivity::kLow, Reflectivity::kHigh};
      for (int l = 0; l <= 40; ++l) s.shadow_losses_db.push_back(l);
      break;
    case ExperimentId::kCustom: break;
  }
  return s;
}

ScenarioConfig default_scenario(ExperimentId id) {
  ScenarioConfig c;
  if (id == ExperimentId::kFig9 || id == ExperimentId::kFig10) {
    c.steering = SteeringPolicy::kCeiling;
    c.interferers = 40;
  }
  return c;
}

void fill_defaults(ExperimentSpec& spec) {
  const ExperimentSpec d = default_experiment(spec.id);
  auto fill = [](auto& v, const auto& dv) {
    if (v.empty()) v = dv;
  };
  fill(spec.interferers, d.interferers);
  fill(spec.wearable_offsets, d.wearable_offsets);
  fill(spec.array_elements, d.array_elements);
  fill(spec.bandwidths, d.bandwidths);
  fill(spec.onbody_betas, d.onbody_betas);
  fill(spec.shadow_losses_db, d.shadow_losses_db);
  fill(spec.reflectivities, d.reflectivities);
  fill(spec.placements, d.placements);
}

void parallel_for(std::size_t n, unsigned workers, const std::function<void(std::size_t)>& fn) {
  if (n == 0) return;
  const unsigned threads = static_cast<unsigned>(std::min<std::size_t>(std::max(workers, 1u), n));
  if (threads == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto work = [&] {
    for (std::size_t i = next++; i < n && !failed; i = next++) {
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        failed = true;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work);
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

// ---- Blockage validation -------------------------------------------------

namespace {

constexpr std::size_t kClassCount = 4;
constexpr std::array<const char*, kClassCount> kClassNames{"direct", "wall", "ceiling", "signal-wall"};

struct ValidationAcc {
  std::array<Moments, kClassCount> exact_scene;  // per-scene blocked fraction
  std::array<double, kClassCount> exact_sum{};
  std::array<double, kClassCount> stochastic_sum{};
  std::array<std::size_t, kClassCount> trials{};
  std::size_t clamps{0};

  void merge(const ValidationAcc& o) {
    for (std::size_t c = 0; c < kClassCount; ++c) {
      exact_scene[c].merge(o.exact_scene[c]);
      exact_sum[c] += o.exact_sum[c];
      stochastic_sum[c] += o.stochastic_sum[c];
      trials[c] += o.trials[c];
    }
    clamps += o.clamps;
  }
};

}  // namespace

BlockageValidation run_blockage_validation(const ScenarioConfig& base, const ExperimentSpec& spec) {
  spec.validate();
  require_nonempty(spec.interferers, "interferer");
  require_nonempty(spec.wearable_offsets, "wearable offset");
  BlockageValidation out;
  std::uint64_t point = 0;
  for (double rw : spec.wearable_offsets) {
    for (int k : spec.interferers) {
      ScenarioConfig cfg = base;
      cfg.wearable_offset = rw;
      cfg.interferers = k;
      cfg.validate();
      const BlockageParams params = cfg.blockage_params();
      const auto& enc = cfg.enclosure;
      const std::uint64_t pt = point++;
      const auto acc = reduce_blocks(spec.replications, spec.workers, ValidationAcc{}, [&](ValidationAcc& a,
                                                                                          std::size_t rep) {
        Rng rng(spec.seed, {pt, rep, kSceneStream});
        const Scene scene = sample_scene(cfg, rng);
        const Eigen::Vector3d& rx = scene.receiver.position;
        const auto centers = scene.body_centers();
        const BlockerField field(rx, centers, cfg.body_diameter, enc, cfg.occlusion);
        ClampTally tally;
        std::array<double, kClassCount> blocked{};
        std::array<double, kClassCount> prob{};
        std::array<std::size_t, kClassCount> count{};

        const auto sig_images = image_set(scene.transmitter.position, rx, enc);
        const auto sig_state = field.signal(sig_images, 1.0);
        const double sig_planar = project_to_plane(scene.transmitter.position, rx).distance;
        for (Surface w : kWalls) {
          blocked[3] += sig_state.reflected(w) == 0 ? 1 : 0;
          prob[3] += p_signal_wall_blocked(project_to_plane(sig_images.point(w), rx).distance, sig_planar, params,
                                           &tally);
          ++count[3];
        }
        for (const auto& w : scene.interferers) {
          const auto images = image_set(w.position, rx, enc);
          const auto state = field.interferer(w.position, images, cfg.body_height);
          const double planar = project_to_plane(w.position, rx).distance;
          blocked[0] += state.direct() == 0 ? 1 : 0;
          prob[0] += p_direct_blocked(planar, params, &tally);
          ++count[0];
          for (Surface s : kWalls) {
            blocked[1] += state.reflected(s) == 0 ? 1 : 0;
            prob[1] += p_wall_reflection_blocked(project_to_plane(images.point(s), rx).distance, params, &tally);
            ++count[1];
          }
          const auto reach = ceiling_reach(rx.z(), w.position.z(), images.angle(Surface::kCeiling), cfg.body_height,
                                           enc);
          blocked[2] += state.reflected(Surface::kCeiling) == 0 ? 1 : 0;
          prob[2] += p_ceiling_components(reach, params, &tally).blocked();
          ++count[2];
        }
        for (std::size_t c = 0; c < kClassCount; ++c) {
          if (count[c] == 0) continue;
          a.exact_scene[c].add(blocked[c] / static_cast<double>(count[c]));
          a.exact_sum[c] += blocked[c];
          a.stochastic_sum[c] += prob[c];
          a.trials[c] += count[c];
        }
        a.clamps += tally.count;
      });
      out.clamps += acc.clamps;
      for (std::size_t c = 0; c < kClassCount; ++c) {
        if (acc.trials[c] == 0) continue;
        const double n = static_cast<double>(acc.trials[c]);
        const auto scene_est = acc.exact_scene[c].estimate();
        out.rows.push_back({k, rw, kClassNames[c], acc.exact_sum[c] / n, acc.stochastic_sum[c] / n,
                            scene_est.half_width / 1.959963984540054, acc.trials[c]});
      }
    }
  }
  return out;
}

// ---- SINR CDFs ------------------------------------------------------------

std::vector<SinrSeries> run_sinr_cdf(const ScenarioConfig& base, const ExperimentSpec& spec) {
  spec.validate();
  require_nonempty(spec.interferers, "interferer");
  require_nonempty(spec.onbody_betas, "onbody beta");
  require_nonempty(spec.reflectivities, "reflectivity");
  const auto modes = modes_of(spec.mode);
  std::vector<SinrSeries> out;
  std::uint64_t point = 0;
  for (int k : spec.interferers) {
    ScenarioConfig cfg = base;
    cfg.interferers = k;
    cfg.validate();
    const auto materials = materials_for(spec.reflectivities, cfg.wavelength);
    const RadioConstants radio = cfg.radio();
    const AntennaPattern pattern = cfg.pattern();
    const std::size_t nb = spec.onbody_betas.size();
    const std::size_t nr = materials.size();
    const std::size_t first = out.size();
    for (auto mode : modes)
      for (auto refl : spec.reflectivities)
        for (double b : spec.onbody_betas)
          out.push_back({k, mode, b, refl, std::vector<double>(spec.replications)});
    const std::uint64_t pt = point++;
    parallel_for(spec.replications, spec.workers, [&](std::size_t rep) {
      Rng rng(spec.seed, {pt, rep, kSceneStream});
      const Scene scene = sample_scene(cfg, rng);
      const SceneLinks links = scene_links(scene, cfg.enclosure);
      Rng gain_rng(spec.seed, {pt, rep, kGainStream, static_cast<std::uint64_t>(cfg.array_elements)});
      const SceneGains gains = scene_gains(scene, links, pattern, cfg.stochastic_transmit_gains, &gain_rng);
      std::vector<SceneFields> fields;
      for (const auto& m : materials) fields.push_back(scene_fields(links, m));
      for (std::size_t mi = 0; mi < modes.size(); ++mi) {
        Rng brng(spec.seed, {pt, rep, kBlockageStream});
        const SceneBlockage blockage = scene_blockage(modes[mi], scene, links, cfg, brng);
        for (std::size_t ri = 0; ri < nr; ++ri) {
          const SceneOutcome o = evaluate_scene(fields[ri], blockage, gains, radio);
          for (std::size_t bi = 0; bi < nb; ++bi)
            out[first + (mi * nr + ri) * nb + bi].sinr[rep] = o.sinr(spec.onbody_betas[bi], radio);
        }
      }
    });
    for (std::size_t s = first; s < out.size(); ++s) std::sort(out[s].sinr.begin(), out[s].sinr.end());
  }
  return out;
}

// ---- Mean spectral efficiency sweeps --------------------------------------

std::vector<MeanSeRow> run_mean_se_sweeps(const ScenarioConfig& base, const ExperimentSpec& spec) {
  spec.validate();
  require_nonempty(spec.interferers, "interferer");
  ExperimentSpec s = spec;
  if (s.wearable_offsets.empty()) s.wearable_offsets = {base.wearable_offset};
  if (s.bandwidths.empty()) s.bandwidths = {base.bandwidth};
  if (s.onbody_betas.empty()) s.onbody_betas = {base.onbody_beta};
  if (s.reflectivities.empty()) s.reflectivities = {base.reflectivity};
  if (s.placements.empty()) s.placements = {base.placement};
  const auto modes = modes_of(s.mode);
  const std::size_t nm = modes.size(), nr = s.reflectivities.size(), nbw = s.bandwidths.size(),
                    nb = s.onbody_betas.size();
  auto cell = [&](std::size_t ri, std::size_t mi, std::size_t wi, std::size_t bi) {
    return ((ri * nm + mi) * nbw + wi) * nb + bi;
  };
  std::vector<MeanSeRow> out;
  std::uint64_t point = 0;
  for (auto placement : s.placements) {
    for (double rw : s.wearable_offsets) {
      for (int k : s.interferers) {
        ScenarioConfig cfg = base;
        cfg.placement = placement;
        cfg.wearable_offset = rw;
        cfg.interferers = k;
        cfg.validate();
        const auto materials = materials_for(s.reflectivities, cfg.wavelength);
        const AntennaPattern pattern = cfg.pattern();
        std::vector<RadioConstants> radios;
        for (double bw : s.bandwidths) {
          ScenarioConfig c = cfg;
          c.bandwidth = bw;
          radios.push_back(c.radio());
        }
        const std::uint64_t pt = point++;
        const auto acc = reduce_blocks(s.replications, s.workers, MomentGrid(nr * nm * nbw * nb),
                                       [&](MomentGrid& g, std::size_t rep) {
          Rng rng(s.seed, {pt, rep, kSceneStream});
          const Scene scene = sample_scene(cfg, rng);
          const SceneLinks links = scene_links(scene, cfg.enclosure);
          Rng gain_rng(s.seed, {pt, rep, kGainStream, static_cast<std::uint64_t>(cfg.array_elements)});
          const SceneGains gains = scene_gains(scene, links, pattern, cfg.stochastic_transmit_gains, &gain_rng);
          std::vector<SceneBlockage> blockages;
          for (auto mode : modes) {
            Rng brng(s.seed, {pt, rep, kBlockageStream});
            blockages.push_back(scene_blockage(mode, scene, links, cfg, brng));
          }
          for (std::size_t ri = 0; ri < nr; ++ri) {
            const SceneFields fields = scene_fields(links, materials[ri]);
            for (std::size_t mi = 0; mi < nm; ++mi) {
              const SceneOutcome o = evaluate_scene(fields, blockages[mi], gains, radios.front());
              for (std::size_t wi = 0; wi < nbw; ++wi)
                for (std::size_t bi = 0; bi < nb; ++bi)
                  g.cells[cell(ri, mi, wi, bi)].add(spectral_efficiency(o.sinr(s.onbody_betas[bi], radios[wi])));
            }
          }
        });
        for (std::size_t ri = 0; ri < nr; ++ri)
          for (std::size_t mi = 0; mi < nm; ++mi)
            for (std::size_t wi = 0; wi < nbw; ++wi)
              for (std::size_t bi = 0; bi < nb; ++bi)
                out.push_back({placement, rw, k, s.bandwidths[wi], s.onbody_betas[bi], s.reflectivities[ri],
                               modes[mi], acc.cells[cell(ri, mi, wi, bi)].estimate()});
      }
    }
  }
  return out;
}

// ---- Antenna CDFs ---------------------------------------------------------

std::vector<SeSeries> run_antenna_cdf(const ScenarioConfig& base, const ExperimentSpec& spec) {
  spec.validate();
  require_nonempty(spec.interferers, "interferer");
  require_nonempty(spec.array_elements, "array element");
  require_nonempty(spec.reflectivities, "reflectivity");
  const auto modes = modes_of(spec.mode);
  const std::size_t nn = spec.array_elements.size(), nr = spec.reflectivities.size(), nm = modes.size();
  std::vector<SeSeries> out;
  std::uint64_t point = 0;
  for (int k : spec.interferers) {
    ScenarioConfig cfg = base;
    cfg.interferers = k;
    cfg.validate();
    const auto materials = materials_for(spec.reflectivities, cfg.wavelength);
    const RadioConstants radio = cfg.radio();
    std::vector<AntennaPattern> patterns;
    for (int n : spec.array_elements) patterns.push_back(upa_pattern(n));
    const std::size_t first = out.size();
    for (int n : spec.array_elements)
      for (auto refl : spec.reflectivities)
        for (auto mode : modes)
          for (bool stochastic : {false, true})
            out.push_back({k, n, refl, mode, stochastic, std::vector<double>(spec.replications)});
    auto index = [&](std::size_t ni, std::size_t ri, std::size_t mi, std::size_t gi) {
      return first + ((ni * nr + ri) * nm + mi) * 2 + gi;
    };
    const std::uint64_t pt = point++;
    parallel_for(spec.replications, spec.workers, [&](std::size_t rep) {
      Rng rng(spec.seed, {pt, rep, kSceneStream});
      const Scene scene = sample_scene(cfg, rng);
      const SceneLinks links = scene_links(scene, cfg.enclosure);
      std::vector<SceneBlockage> blockages;
      for (auto mode : modes) {
        Rng brng(spec.seed, {pt, rep, kBlockageStream});
        blockages.push_back(scene_blockage(mode, scene, links, cfg, brng));
      }
      std::vector<SceneFields> fields;
      for (const auto& m : materials) fields.push_back(scene_fields(links, m));
      for (std::size_t ni = 0; ni < nn; ++ni) {
        Rng gain_rng(spec.seed, {pt, rep, kGainStream, static_cast<std::uint64_t>(spec.array_elements[ni])});
        const SceneGains exact = scene_gains(scene, links, patterns[ni]);
        const SceneGains drawn = scene_gains(scene, links, patterns[ni], true, &gain_rng);
        for (std::size_t ri = 0; ri < nr; ++ri)
          for (std::size_t mi = 0; mi < nm; ++mi)
            for (std::size_t gi = 0; gi < 2; ++gi) {
              const SceneOutcome o = evaluate_scene(fields[ri], blockages[mi], gi == 0 ? exact : drawn, radio);
              out[index(ni, ri, mi, gi)].se[rep] = spectral_efficiency(o.sinr(cfg.onbody_beta, radio));
            }
      }
    });
    for (std::size_t s = first; s < out.size(); ++s) std::sort(out[s].se.begin(), out[s].se.end());
  }
  return out;
}

// ---- Shadow-loss crossover ------------------------------------------------

double zero_crossing(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw std::invalid_argument("zero crossing needs equally long x and y");
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (y[i] < 0) continue;
    if (i == 0) return x[0];
    return x[i - 1] + (x[i] - x[i - 1]) * (-y[i - 1]) / (y[i] - y[i - 1]);
  }
  return std::numeric_limits<double>::quiet_NaN();
}

ShadowSweep run_shadow_crossover(const ScenarioConfig& base, const ExperimentSpec& spec) {
  spec.validate();
  require_nonempty(spec.interferers, "interferer");
  require_nonempty(spec.array_elements, "array element");
  require_nonempty(spec.reflectivities, "reflectivity");
  require_nonempty(spec.shadow_losses_db, "shadow loss");
  const auto modes = modes_of(spec.mode);
  const std::size_t nn = spec.array_elements.size(), nr = spec.reflectivities.size(), nm = modes.size(),
                    nl = spec.shadow_losses_db.size();
  std::vector<double> betas;
  for (double l : spec.shadow_losses_db) betas.push_back(std::pow(10.0, -l / 20));
  // Cells: (n, r, m, l) x {ceiling, on-body, difference}.
  auto cell = [&](std::size_t ni, std::size_t ri, std::size_t mi, std::size_t li, std::size_t q) {
    return ((((ni * nr + ri) * nm + mi) * nl + li) * 3) + q;
  };
  ShadowSweep out;
  std::uint64_t point = 0;
  for (int k : spec.interferers) {
    ScenarioConfig cfg = base;
    cfg.interferers = k;
    cfg.validate();
    const auto materials = materials_for(spec.reflectivities, cfg.wavelength);
    const RadioConstants radio = cfg.radio();
    std::vector<AntennaPattern> patterns;
    for (int n : spec.array_elements) patterns.push_back(upa_pattern(n));
    const std::uint64_t pt = point++;
    const auto acc = reduce_blocks(spec.replications, spec.workers, MomentGrid(nn * nr * nm * nl * 3),
                                   [&](MomentGrid& g, std::size_t rep) {
      Rng rng(spec.seed, {pt, rep, kSceneStream});
      Scene ceiling = sample_scene(cfg, rng);
      steer_reference(ceiling, SteeringPolicy::kCeiling, cfg.enclosure);
      Scene on_body = ceiling;
      steer_reference(on_body, SteeringPolicy::kOnBody, cfg.enclosure);
      const SceneLinks links = scene_links(ceiling, cfg.enclosure);
      std::vector<SceneBlockage> blockages;
      for (auto mode : modes) {
        Rng brng(spec.seed, {pt, rep, kBlockageStream});
        blockages.push_back(scene_blockage(mode, ceiling, links, cfg, brng));
      }
      std::vector<SceneFields> fields;
      for (const auto& m : materials) fields.push_back(scene_fields(links, m));
      for (std::size_t ni = 0; ni < nn; ++ni) {
        Rng gain_rng(spec.seed, {pt, rep, kGainStream, static_cast<std::uint64_t>(spec.array_elements[ni])});
        Rng gain_rng_o = gain_rng;
        const SceneGains gc = scene_gains(ceiling, links, patterns[ni], cfg.stochastic_transmit_gains, &gain_rng);
        const SceneGains go = scene_gains(on_body, links, patterns[ni], cfg.stochastic_transmit_gains, &gain_rng_o);
        for (std::size_t ri = 0; ri < nr; ++ri)
          for (std::size_t mi = 0; mi < nm; ++mi) {
            const SceneOutcome oc = evaluate_scene(fields[ri], blockages[mi], gc, radio);
            const SceneOutcome oo = evaluate_scene(fields[ri], blockages[mi], go, radio);
            for (std::size_t li = 0; li < nl; ++li) {
              const double c = spectral_efficiency(oc.sinr(betas[li], radio));
              const double o = spectral_efficiency(oo.sinr(betas[li], radio));
              g.cells[cell(ni, ri, mi, li, 0)].add(c);
              g.cells[cell(ni, ri, mi, li, 1)].add(o);
              g.cells[cell(ni, ri, mi, li, 2)].add(c - o);
            }
          }
      }
    });
    for (std::size_t ni = 0; ni < nn; ++ni)
      for (std::size_t ri = 0; ri < nr; ++ri)
        for (std::size_t mi = 0; mi < nm; ++mi) {
          std::vector<double> diff;
          for (std::size_t li = 0; li < nl; ++li) {
            ShadowRow row{k,
                          spec.array_elements[ni],
                          spec.reflectivities[ri],
                          modes[mi],
                          spec.shadow_losses_db[li],
                          acc.cells[cell(ni, ri, mi, li, 0)].estimate(),
                          acc.cells[cell(ni, ri, mi, li, 1)].estimate(),
                          acc.cells[cell(ni, ri, mi, li, 2)].estimate()};
            diff.push_back(row.difference.mean);
            out.rows.push_back(row);
          }
          out.crossings.push_back({k, spec.array_elements[ni], spec.reflectivities[ri], modes[mi],
                                   zero_crossing(spec.shadow_losses_db, diff)});
        }
  }
  return out;
}

// ---- Custom ---------------------------------------------------------------

CustomRun run_custom(const ScenarioConfig& cfg, const ExperimentSpec& spec) {
  spec.validate();
  cfg.validate();
  const auto modes = modes_of(spec.mode);
  const auto material = cfg.material();
  const RadioConstants radio = cfg.radio();
  const AntennaPattern pattern = cfg.pattern();
  CustomRun run;
  run.records.resize(spec.replications * modes.size());
  std::vector<std::size_t> resamples(spec.replications);
  std::vector<std::size_t> clamps(spec.replications);
  parallel_for(spec.replications, spec.workers, [&](std::size_t rep) {
    Rng rng(spec.seed, {0, rep, kSceneStream});
    const Scene scene = sample_scene(cfg, rng);
    resamples[rep] = scene.direction_resamples;
    const SceneLinks links = scene_links(scene, cfg.enclosure);
    Rng gain_rng(spec.seed, {0, rep, kGainStream, static_cast<std::uint64_t>(cfg.array_elements)});
    const SceneGains gains = scene_gains(scene, links, pattern, cfg.stochastic_transmit_gains, &gain_rng);
    const SceneFields fields = scene_fields(links, material);
    ClampTally tally;
    for (std::size_t mi = 0; mi < modes.size(); ++mi) {
      Rng brng(spec.seed, {0, rep, kBlockageStream});
      const SceneBlockage blockage = scene_blockage(modes[mi], scene, links, cfg, brng, &tally);
      const SceneOutcome o = evaluate_scene(fields, blockage, gains, radio);
      run.records[rep * modes.size() + mi] = {rep, modes[mi], o.sinr(cfg.onbody_beta, radio)};
    }
    clamps[rep] = tally.count;
  });
  for (std::size_t mi = 0; mi < modes.size(); ++mi) {
    Moments m;
    for (std::size_t rep = 0; rep < spec.replications; ++rep)
      m.add(spectral_efficiency(run.records[rep * modes.size() + mi].sinr));
    run.mean_se.push_back(m.estimate());
  }
  for (std::size_t rep = 0; rep < spec.replications; ++rep) {
    run.direction_resamples += resamples[rep];
    run.clamps += clamps[rep];
  }
  return run;
}

// ---- CSV ------------------------------------------------------------------

double plot_db(double linear) { return linear > 0 ? std::max(linear_to_db(linear), -60.0) : -60.0; }

void write_blockage_csv(std::ostream& os, const CsvContext& ctx, const BlockageValidation& v) {
  write_header(os, ctx, "K,r_w_m,path_class,p_exact,p_stochastic,exact_std_error,trials");
  for (const auto& r : v.rows)
    os << r.interferers << ',' << num(r.wearable_offset) << ',' << r.path_class << ',' << num(r.p_exact) << ','
       << num(r.p_stochastic) << ',' << num(r.exact_std_error) << ',' << r.trials << '\n';
}

void write_sinr_csv(std::ostream& os, const CsvContext& ctx, const std::vector<SinrSeries>& series) {
  write_header(os, ctx, "K,mode,beta0,reflectivity,sinr_db,sinr_linear,cdf");
  for (const auto& s : series) {
    const auto levels = ecdf_levels(s.sinr.size());
    for (std::size_t i = 0; i < s.sinr.size(); ++i)
      os << s.interferers << ',' << to_string(s.mode) << ',' << num(s.onbody_beta) << ',' << to_string(s.reflectivity)
         << ',' << num(plot_db(s.sinr[i])) << ',' << num(s.sinr[i]) << ',' << num(levels[i]) << '\n';
  }
}

void write_mean_se_csv(std::ostream& os, const CsvContext& ctx, const std::vector<MeanSeRow>& rows) {
  write_header(os, ctx, "placement,r_w_m,K,bandwidth_hz,beta0,reflectivity,mode,mean_se,half_width,count");
  for (const auto& r : rows)
    os << to_string(r.placement) << ',' << num(r.wearable_offset) << ',' << r.interferers << ',' << num(r.bandwidth)
       << ',' << num(r.onbody_beta) << ',' << to_string(r.reflectivity) << ',' << to_string(r.mode) << ','
       << num(r.se.mean) << ',' << num(r.se.half_width) << ',' << r.se.count << '\n';
}

void write_antenna_csv(std::ostream& os, const CsvContext& ctx, const std::vector<SeSeries>& series) {
  write_header(os, ctx, "K,N,reflectivity,mode,tx_gains,se,cdf");
  for (const auto& s : series) {
    const auto levels = ecdf_levels(s.se.size());
    for (std::size_t i = 0; i < s.se.size(); ++i)
      os << s.interferers << ',' << s.array_elements << ',' << to_string(s.reflectivity) << ',' << to_string(s.mode)
         << ',' << (s.stochastic_gains ? "stochastic" : "exact") << ',' << num(s.se[i]) << ',' << num(levels[i])
         << '\n';
  }
}

void write_shadow_csv(std::ostream& os, const CsvContext& ctx, const ShadowSweep& sweep) {
  write_header(os, ctx,
               "K,N,reflectivity,mode,shadow_loss_db,mean_se_ceiling,mean_se_onbody,difference,"
               "difference_half_width,count");
  for (const auto& r : sweep.rows)
    os << r.interferers << ',' << r.array_elements << ',' << to_string(r.reflectivity) << ',' << to_string(r.mode)
       << ',' << num(r.shadow_loss_db) << ',' << num(r.ceiling.mean) << ',' << num(r.on_body.mean) << ','
       << num(r.difference.mean) << ',' << num(r.difference.half_width) << ',' << r.difference.count << '\n';
}

void write_shadow_crossings_csv(std::ostream& os, const CsvContext& ctx, const ShadowSweep& sweep) {
  write_header(os, ctx, "K,N,reflectivity,mode,crossing_db");
  for (const auto& c : sweep.crossings)
    os << c.interferers << ',' << c.array_elements << ',' << to_string(c.reflectivity) << ',' << to_string(c.mode)
       << ',' << num(c.crossing_db) << '\n';
}

void write_custom_csv(std::ostream& os, const CsvContext& ctx, const CustomRun& run) {
  write_header(os, ctx, "replication,mode,sinr_linear,sinr_db,se");
  for (const auto& r : run.records)
    os << r.replication << ',' << to_string(r.mode) << ',' << num(r.sinr) << ',' << num(plot_db(r.sinr)) << ','
       << num(spectral_efficiency(r.sinr)) << '\n';
}

}  // namespace wearnet
