#include "hybridcast/pipeline.hpp"

#include <map>
#include <numeric>

#include "hybridcast/error.hpp"

namespace hybridcast {

namespace {

constexpr std::size_t kMinTrainRows = 24;

// Scaled indicator values, one column per indicator, one row per panel row.
Matrix scaled_indicators(const PipelineModel& model, const Panel& panel) {
    Matrix out(static_cast<Eigen::Index>(panel.rows()), static_cast<Eigen::Index>(model.indicators.size()));
    for (std::size_t j = 0; j < model.indicators.size(); ++j) {
        const auto& values = panel.column(model.indicators[j]).values;
        for (std::size_t r = 0; r < panel.rows(); ++r) {
            out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(j)) = model.indicator_scaling[j].apply(values[r]);
        }
    }
    return out;
}

Matrix columns_of(const Matrix& m, const std::vector<int>& cols) {
    Matrix out(m.rows(), static_cast<Eigen::Index>(cols.size()));
    for (std::size_t j = 0; j < cols.size(); ++j) out.col(static_cast<Eigen::Index>(j)) = m.col(cols[j]);
    return out;
}

Matrix features_from_scaled(const PipelineModel& model, const Matrix& scaled) {
    Matrix out(scaled.rows(), model.feature_width());
    Eigen::Index at = 0;
    for (std::size_t c = 0; c < model.kpca.size(); ++c) {
        const Matrix proj = kpca_transform(model.kpca[c], columns_of(scaled, model.cluster_columns[c]));
        out.middleCols(at, proj.cols()) = proj;
        at += proj.cols();
    }
    return out;
}

}  // namespace

std::vector<int> PipelineModel::components() const {
    std::vector<int> out;
    for (const auto& m : kpca) out.push_back(m.components());
    return out;
}

int PipelineModel::feature_width() const {
    const auto c = components();
    return std::accumulate(c.begin(), c.end(), 0);
}

Matrix indicator_series(const PipelineModel& model, const Panel& panel) {
    return scaled_indicators(model, panel).transpose();
}

PipelineModel pipeline_fit(const Panel& full, const PipelineConfig& config) {
    PipelineModel model;
    model.config = config;
    Panel train;

    try {
        full.validate();
        if (config.lag < 1) throw ValidationError("lag must be at least 1");
        std::size_t rows = full.rows();
        if (config.train_end) {
            rows = static_cast<std::size_t>(
                std::upper_bound(full.dates.begin(), full.dates.end(), *config.train_end) - full.dates.begin());
        }
        if (rows < kMinTrainRows) {
            throw ValidationError("need at least " + std::to_string(kMinTrainRows) + " training rows, have " +
                                  std::to_string(rows));
        }
        train = full.slice(0, rows);
        model.target = train.target().name;
        for (const auto& c : train.columns) {
            if (c.tag != Provenance::target) model.indicators.push_back(c.name);
        }
        if (model.indicators.empty()) throw ValidationError("panel has no indicator columns");
    } catch (...) {
        rethrow_with_stage("panel");
    }

    try {
        for (const auto& name : model.indicators) {
            try {
                model.indicator_scaling.push_back(MinMax::fit(train.column(name).values));
            } catch (const ValidationError& e) {
                throw ValidationError("column '" + name + "': " + e.what());
            }
        }
        model.target_scaling = MinMax::fit(train.target().values);
    } catch (...) {
        rethrow_with_stage("normalize");
    }
    const Matrix scaled = scaled_indicators(model, train);

    try {
        const Matrix series = scaled.transpose();
        const int n = static_cast<int>(series.rows());
        int k = 1;
        if (config.clusters) {
            k = *config.clusters;
        } else {
            const int hi = std::min(config.elbow_max, n);
            if (hi - config.elbow_min + 1 >= 3) {
                model.elbow = elbow_select(series, config.elbow_min, hi, config.seed, config.kmeans);
                k = model.elbow->k;
                if (model.elbow->flat) model.warnings.push_back("elbow curve is flat; using the smallest interior k");
            } else {
                model.warnings.push_back("too few indicators for the elbow rule; using k = 1");
            }
        }
        model.clusters = kmeans_fit(series, k, config.seed, config.kmeans);
        model.cluster_columns = model.clusters.members();
    } catch (...) {
        rethrow_with_stage("clustering");
    }

    try {
        for (std::size_t c = 0; c < model.cluster_columns.size(); ++c) {
            const Matrix x = columns_of(scaled, model.cluster_columns[c]);
            const double width = config.kpca_sigma ? *config.kpca_sigma : median_pairwise_distance(x);
            model.kpca.push_back(kpca_fit(x, Kernel::gaussian(width), config.selection));
        }
    } catch (...) {
        rethrow_with_stage("kpca");
    }

    try {
        const Matrix features = features_from_scaled(model, scaled);
        std::map<int, std::size_t> row_of;
        for (std::size_t r = 0; r < train.rows(); ++r) row_of[train.dates[r].index()] = r;
        const auto& target = train.target().values;

        std::vector<Eigen::Index> sources;
        std::vector<double> targets;
        for (std::size_t r = 0; r < train.rows(); ++r) {
            const auto it = row_of.find(train.dates[r].index() + config.lag);
            if (it == row_of.end()) continue;
            sources.push_back(static_cast<Eigen::Index>(r));
            targets.push_back(model.target_scaling.apply(target[it->second]));
        }
        if (sources.size() < 2) throw ValidationError("fewer than 2 training pairs at lag " + std::to_string(config.lag));
        model.train_pairs = static_cast<int>(sources.size());

        Matrix x(static_cast<Eigen::Index>(sources.size()), features.cols());
        Matrix y(x.rows(), 1);
        for (std::size_t i = 0; i < sources.size(); ++i) {
            x.row(static_cast<Eigen::Index>(i)) = features.row(sources[i]);
            y(static_cast<Eigen::Index>(i), 0) = targets[i];
        }

        if (config.regressor == FinalRegressor::kelm) {
            model.kelm_kernel = Kernel::gaussian(config.sigma ? *config.sigma : median_pairwise_distance(x));
            model.kelm = kelm_fit(x, y, model.kelm_kernel, config.c);
        } else {
            model.elm = elm_fit(x, y, {config.hidden, config.c, config.seed});
        }
    } catch (...) {
        rethrow_with_stage(config.regressor == FinalRegressor::kelm ? "kelm" : "elm");
    }
    return model;
}

Matrix pipeline_features(const PipelineModel& model, const Panel& panel) {
    return features_from_scaled(model, scaled_indicators(model, panel));
}

std::vector<Forecast> pipeline_predict(const PipelineModel& model, const Panel& panel) {
    const Matrix features = pipeline_features(model, panel);
    const Matrix out = model.config.regressor == FinalRegressor::kelm ? kelm_predict(model.kelm, features)
                                                                      : elm_predict(model.elm, features);
    std::vector<Forecast> forecasts;
    forecasts.reserve(panel.rows());
    for (std::size_t r = 0; r < panel.rows(); ++r) {
        const double v = out(static_cast<Eigen::Index>(r), 0);
        forecasts.push_back({panel.dates[r].plus(model.config.lag), v, model.target_scaling.invert(v)});
    }
    return forecasts;
}

}  // namespace hybridcast
