#include "lagcast/ardl.hpp"
#include "lagcast/error.hpp"
#include "lagcast/evaluation.hpp"
#include "lagcast/forecasting.hpp"
#include "lagcast/ingest.hpp"
#include "lagcast/json_io.hpp"
#include "lagcast/pipeline.hpp"
#include "lagcast/series.hpp"
#include "lagcast/stats.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace lagcast;

namespace {

TimeSeries make_series(const std::string& role, const std::string& start_iso,
                       std::vector<double> values) {
    return TimeSeries{Role::from_name(role), Date::parse_iso(start_iso), std::move(values)};
}

py::dict series_to_dict(const TimeSeries& s) {
    py::dict d;
    d["role"] = s.role.name();
    d["start_date"] = s.start_date.to_iso();
    d["values"] = s.values;
    return d;
}

LagSpec make_spec(int q, const std::vector<std::pair<std::string, int>>& exog,
                  const std::vector<std::string>& removed, bool intercept) {
    LagSpec spec;
    spec.q = q;
    for (const auto& [role, p] : exog) spec.exog.emplace_back(Role::from_name(role), p);
    spec.removed.insert(removed.begin(), removed.end());
    spec.include_intercept = intercept;
    return spec;
}

py::dict fit_to_dict(const ArdlFit& fit) {
    py::dict d;
    py::list terms;
    for (const auto& t : fit.terms) {
        py::dict row;
        row["label"] = t.label;
        row["estimate"] = t.coefficient;
        row["std_error"] = t.std_error;
        row["t_value"] = t.t_value;
        row["p_value"] = t.p_value;
        terms.append(row);
    }
    d["terms"] = terms;
    d["residual_std_error"] = fit.residual_std_error;
    d["r_squared"] = fit.r_squared;
    d["adj_r_squared"] = fit.adj_r_squared;
    d["f_statistic"] = py::make_tuple(fit.f_statistic.value, fit.f_statistic.df1,
                                      fit.f_statistic.df2, fit.f_statistic.p_value);
    d["n_obs"] = fit.n_obs;
    d["residuals"] = fit.residuals;
    d["json"] = ardl_fit_to_json(fit).dump();  // report document, reloadable
    return d;
}

py::dict metrics_to_dict(const MetricsReport& r) {
    py::dict d;
    d["me"] = r.me;
    d["rmse"] = r.rmse;
    d["mae"] = r.mae;
    d["mpe"] = r.mpe ? py::object(py::float_(*r.mpe)) : py::none();
    d["mape"] = r.mape ? py::object(py::float_(*r.mape)) : py::none();
    d["n"] = r.n;
    d["band"] = r.band ? py::object(py::str(band_name(*r.band))) : py::none();
    return d;
}

FeatureMatrix make_features(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                            const std::vector<std::string>& labels) {
    FeatureMatrix f;
    f.X = X;
    f.y = y;
    f.labels = labels;
    return f;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Distributed-lag regression, four ML regressors and recursive forecasting "
              "for coupled epidemic count series";

    py::register_exception<Error>(m, "LagcastError");

    // series
    m.def("cumulative_to_daily", [](const std::string& role, const std::string& start,
                                    std::vector<double> values) {
        return series_to_dict(cumulative_to_daily(make_series(role, start, std::move(values))));
    });
    m.def("daily_to_cumulative", [](const std::string& role, const std::string& start,
                                    std::vector<double> values) {
        return series_to_dict(daily_to_cumulative(make_series(role, start, std::move(values))));
    });
    m.def("split_series", [](const std::string& role, const std::string& start,
                             std::vector<double> values, double ratio) {
        auto [train, test] =
            split(make_series(role, start, std::move(values)), SplitSpec::ratio(ratio));
        return py::make_tuple(series_to_dict(train), series_to_dict(test));
    });

    // ingest
    m.def("load_snapshot",
          [](const std::string& deaths, const std::string& recovered, const std::string& confirmed,
             const std::string& window_start, const std::string& window_end) {
              SnapshotManifest manifest;
              manifest.sources[Role::deaths()] = SnapshotSource::local(deaths);
              manifest.sources[Role::recovered()] = SnapshotSource::local(recovered);
              manifest.sources[Role::confirmed()] = SnapshotSource::local(confirmed);
              manifest.offline = true;
              if (!window_start.empty()) {
                  manifest.date_window = {
                      {Date::parse_iso(window_start), Date::parse_iso(window_end)}};
              }
              py::dict out;
              for (const auto& [role, series] : fetch(manifest)) {
                  out[py::str(role.name())] = series_to_dict(series);
              }
              return out;
          },
          py::arg("deaths"), py::arg("recovered"), py::arg("confirmed"),
          py::arg("window_start") = "", py::arg("window_end") = "");

    // inference
    m.def("student_t_sf", &stats::student_t_sf, py::arg("t"), py::arg("df"));
    m.def("f_sf", &stats::f_sf, py::arg("f"), py::arg("df1"), py::arg("df2"));

    m.def("ols_fit", [](const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                        const std::vector<std::string>& labels) {
        return fit_to_dict(ols_fit(X, y, labels));
    });

    m.def("fit_ardl",
          [](py::dict y, std::vector<py::dict> exog, int q,
             std::vector<std::pair<std::string, int>> orders,
             std::vector<std::string> removed, double prune_alpha) {
              TimeSeries response = make_series(y["role"].cast<std::string>(),
                                                y["start_date"].cast<std::string>(),
                                                y["values"].cast<std::vector<double>>());
              std::vector<TimeSeries> others;
              for (auto& e : exog) {
                  others.push_back(make_series(e["role"].cast<std::string>(),
                                               e["start_date"].cast<std::string>(),
                                               e["values"].cast<std::vector<double>>()));
              }
              LagSpec spec = make_spec(q, orders, removed, true);
              if (prune_alpha > 0.0) {
                  PruneResult result = prune_insignificant(response, others, spec, prune_alpha);
                  py::dict d = fit_to_dict(result.fit);
                  d["removed"] = std::vector<std::string>(result.spec.removed.begin(),
                                                          result.spec.removed.end());
                  return d;
              }
              return fit_to_dict(lagcast::fit_ardl(response, others, spec));
          },
          py::arg("y"), py::arg("exog"), py::arg("q"), py::arg("orders"),
          py::arg("removed") = std::vector<std::string>{}, py::arg("prune_alpha") = 0.0);

    // regressors
    m.def("fit_predict",
          [](const std::string& kind, const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
             const std::vector<std::string>& labels, const Eigen::MatrixXd& X_query,
             std::uint64_t seed, std::vector<int> hidden) {
              FeatureMatrix train = make_features(X, y, labels);
              RegressorConfig config;
              switch (regressor_kind_from_name(kind)) {
                  case RegressorKind::RF: {
                      RfConfig c;
                      c.seed = seed;
                      config = c;
                      break;
                  }
                  case RegressorKind::SVR: config = SvrConfig{}; break;
                  case RegressorKind::KNN: config = KnnConfig{}; break;
                  case RegressorKind::MLP: {
                      MlpConfig c;
                      c.seed = seed;
                      if (!hidden.empty()) c.hidden_layers = hidden;
                      config = c;
                      break;
                  }
              }
              TrainedRegressor model = fit_regressor(config, train);
              FeatureMatrix query = make_features(X_query, Eigen::VectorXd(), labels);
              query.allow_constant_columns = true;
              return predict(model, query);
          },
          py::arg("kind"), py::arg("X"), py::arg("y"), py::arg("labels"), py::arg("X_query"),
          py::arg("seed") = 0, py::arg("hidden") = std::vector<int>{});

    // evaluation
    m.def("metrics", [](const Eigen::VectorXd& actual, const Eigen::VectorXd& predicted) {
        return metrics_to_dict(metrics(actual, predicted));
    });
    m.def("band_of", [](double mape) { return std::string(band_name(band_of(mape))); });
    m.def("k_fold", [](std::size_t n, int k, const std::string& scheme, std::uint64_t seed) {
        auto folds = k_fold(n, k,
                            scheme == "blocks" ? FoldScheme::ContiguousBlocks
                                               : FoldScheme::Shuffled,
                            seed);
        py::list out;
        for (const auto& fold : folds) {
            out.append(py::make_tuple(fold.train, fold.validation));
        }
        return out;
    });

    // forecasting
    m.def("univariate_forecast",
          [](const std::string& fit_json, py::dict history, int horizon) {
              ArdlFit fit = ardl_fit_from_json(nlohmann::json::parse(fit_json));
              TimeSeries h = make_series(history["role"].cast<std::string>(),
                                         history["start_date"].cast<std::string>(),
                                         history["values"].cast<std::vector<double>>());
              auto points = univariate_forecast(ForecastBackend{fit}, h.role, h, horizon);
              py::list out;
              for (const auto& p : points) {
                  out.append(py::make_tuple(p.date.to_iso(), p.value));
              }
              return out;
          });

    // pipeline
    m.def("run_pipeline", [](const std::string& config_path) {
        RunConfig config = load_config_file(config_path);
        run_pipeline(config, parse_role_filter("all"));
    });

    m.attr("__version__") = "0.1.0";
}
