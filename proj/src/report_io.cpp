#include "moran/report_io.hpp"

#include <iomanip>
#include <ostream>
#include <string>

#include "moran/rng.hpp"

namespace moran {

namespace {

Json interval_json(double lower, double upper) { return Json::array({lower, upper}); }

Json moment_json(const MomentEstimate& m) {
  Json j;
  j["label"] = m.label;
  j["exponents"] = m.exponents;
  j["estimate"] = m.normal.mean;
  j["std_error"] = m.normal.std_error;
  j["normal_ci"] = interval_json(m.normal.lower, m.normal.upper);
  j["bootstrap_ci"] = interval_json(m.bootstrap.lower, m.bootstrap.upper);
  j["p_value"] = m.normal.p_value;
  return j;
}

}  // namespace

Json metadata_json(std::string_view command) {
  Json j;
  j["tool"] = "moran-weights";
  j["version"] = MORAN_VERSION;
  j["rng"] = std::string(Rng::algorithm);
  j["command"] = std::string(command);
  return j;
}

Json model_json(const ModelConfig& config) {
  Json j;
  j["N"] = config.population_size;
  j["m"] = config.parent_count;
  j["variant"] = std::string(to_string(config.variant));
  j["seed"] = config.seed;
  return j;
}

Json exact_report_json(const LumpedChain& chain, const StationaryResult& stationary) {
  Json j;
  j["N"] = chain.population_size;
  j["m"] = chain.parent_count;
  j["k"] = chain.order;
  j["arithmetic"] = chain.has_exact() ? "exact" : "floating";
  j["method"] = std::string(to_string(stationary.method));

  Json states = Json::array();
  Json labels = Json::array();
  for (const auto& s : chain.states) {
    states.push_back(s.parts());
    labels.push_back(s.label());
  }
  j["states"] = std::move(states);
  j["labels"] = std::move(labels);

  if (chain.has_exact()) {
    Json matrix = Json::array();
    for (const auto& row : chain.exact) {
      Json r = Json::array();
      for (const auto& v : row) r.push_back(to_string(v));
      matrix.push_back(std::move(r));
    }
    j["matrix"] = std::move(matrix);
  }
  j["matrix_float"] = chain.matrix;

  Json nu = Json::object();
  Json nu_float = Json::object();
  Json nu_vector = Json::object();
  Json moments = Json::object();
  Json k_values = Json::object();
  const auto n = chain.population_size;
  for (std::size_t i = 0; i < chain.states.size(); ++i) {
    const auto& c = chain.states[i];
    const auto label = c.label();
    nu_float[label] = stationary.nu[i];
    const auto moment = joint_moment(stationary, n, c.parts());
    Json mj;
    mj["exponents"] = c.parts();
    mj["value"] = moment.value;
    if (stationary.exact) {
      const auto& exact = (*stationary.exact)[i];
      nu[label] = to_string(exact);
      nu_vector[label] = to_string(lift_to_vector(exact, c, n));
      mj["exact"] = to_string(*moment.exact);
    } else {
      nu[label] = stationary.nu[i];
      nu_vector[label] = lift_to_vector(stationary.nu[i], c, n);
    }
    moments[label] = std::move(mj);
    k_values[label] = to_string(K_closed_form(c, chain.parent_count));
  }
  j["nu"] = std::move(nu);
  j["nu_float"] = std::move(nu_float);
  j["nu_vector"] = std::move(nu_vector);
  j["residual"] = stationary.residual;
  j["moments"] = std::move(moments);
  j["K"] = std::move(k_values);
  return j;
}

void write_samples_csv(std::ostream& out, const SampleSet& samples) {
  const auto& spec = samples.spec;
  out << "# tool=moran-weights version=" << MORAN_VERSION << " rng=" << Rng::algorithm << '\n';
  out << "# N=" << spec.model.population_size << " m=" << spec.model.parent_count
      << " variant=" << to_string(spec.model.variant) << " seed=" << spec.model.seed
      << " replicates=" << spec.replicates << " tracked=" << spec.tracked
      << " epsilon=" << spec.epsilon << " max_steps=" << spec.effective_max_steps() << '\n';
  out << "replicate,seed,j,M_inf,extinct,converged,steps\n" << std::setprecision(17);
  for (std::size_t r = 0; r < samples.replicates(); ++r) {
    const auto& rec = samples.records[r];
    for (std::size_t j = 0; j < samples.tracked(); ++j) {
      out << r + 1 << ',' << rec.seed << ',' << j + 1 << ',' << samples.at(r, j) << ','
          << int(rec.extinct[j] != 0) << ',' << int(rec.converged[j] != 0) << ',' << rec.steps
          << '\n';
    }
  }
}

Json summary_json(const SampleSet& samples, const Summary& summary, const LayerReport& layers) {
  const auto& spec = samples.spec;
  Json j;
  j["model"] = model_json(spec.model);
  Json experiment;
  experiment["replicates"] = spec.replicates;
  experiment["tracked"] = spec.tracked;
  experiment["epsilon"] = spec.epsilon;
  experiment["max_steps"] = spec.effective_max_steps();
  experiment["seed_scheme"] = "derive_seed(master, replicate_index)";
  j["experiment"] = std::move(experiment);
  j["confidence"] = summary.confidence;
  j["nonconverged"] = summary.nonconverged;

  Json mean = Json::object();
  Json mean_ci = Json::object();
  Json zero = Json::object();
  Json ks = Json::object();
  Json moments = Json::array();
  for (std::size_t a = 0; a < summary.tracked; ++a) {
    const auto key = std::to_string(a + 1);
    const auto& first = summary.per_ancestor[a].front();
    mean[key] = first.normal.mean;
    mean_ci[key] = interval_json(first.bootstrap.lower, first.bootstrap.upper);
    zero[key] = summary.zero_fraction[a];
    ks[key] = summary.ks_distance[a];
    for (const auto& m : summary.per_ancestor[a]) moments.push_back(moment_json(m));
  }
  j["mean_M"] = std::move(mean);
  j["mean_M_ci"] = std::move(mean_ci);
  j["moments"] = std::move(moments);
  Json cross = Json::array();
  for (const auto& m : summary.cross) cross.push_back(moment_json(m));
  j["cross_moments"] = std::move(cross);
  j["covariance"] = summary.covariance;
  j["correlation"] = summary.correlation;
  j["zero_fraction"] = std::move(zero);
  j["pooled_zero_fraction"] = summary.pooled_zero_fraction;
  j["near_zero"] = summary.near_zero;
  j["ks_distance"] = std::move(ks);
  j["pooled_ks_distance"] = summary.pooled_ks_distance;

  Json rows = Json::array();
  for (const auto& row : layers.rows) {
    Json r;
    r["label"] = row.label;
    r["exponents"] = row.exponents;
    r["monte_carlo"] = row.monte_carlo.normal.mean;
    r["ci"] = interval_json(row.monte_carlo.bootstrap.lower, row.monte_carlo.bootstrap.upper);
    if (row.exact) {
      r["exact"] = *row.exact;
    } else {
      r["exact"] = nullptr;
    }
    r["exact_rational"] = row.exact_rational ? Json(to_string(*row.exact_rational)) : Json(nullptr);
    r["limit"] = to_string(row.limit);
    r["covered"] = row.covered;
    rows.push_back(std::move(r));
  }
  j["layers"] = std::move(rows);
  return j;
}

}  // namespace moran
