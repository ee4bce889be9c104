#include "cancoord/agent.hpp"

#include <algorithm>
#include <cmath>

namespace cancoord {

Predictor::Predictor(ParameterGrid grid, std::vector<double> predictions)
    : grid_(std::move(grid)), predictions_(std::move(predictions)) {
    if (grid_.values.size() != predictions_.size())
        throw ValidationError("predictor: table must cover the full grid");
    for (double p : predictions_)
        if (!std::isfinite(p))
            throw ValidationError("predictor: predictions must be finite");
}

double Predictor::predict(double x) const {
    if (predictions_.empty())
        throw ValidationError("predictor: not trained");
    const auto& xs = grid_.values;
    if (x <= xs.front())
        return predictions_.front();
    if (x >= xs.back())
        return predictions_.back();
    const auto hi = std::upper_bound(xs.begin(), xs.end(), x);
    const std::size_t i = static_cast<std::size_t>(hi - xs.begin());
    const double t = (x - xs[i - 1]) / (xs[i] - xs[i - 1]);
    return predictions_[i - 1] + t * (predictions_[i] - predictions_[i - 1]);
}

std::vector<double> Predictor::predict_many(const std::vector<double>& xs) const {
    std::vector<double> out;
    out.reserve(xs.size());
    for (double x : xs)
        out.push_back(predict(x));
    return out;
}

Predictor train(const std::vector<KpiSample>& samples, const ParameterGrid& grid) {
    if (samples.size() < 2)
        throw InsufficientDataError("train: need at least 2 samples");

    std::vector<double> sums(grid.size(), 0.0);
    std::vector<std::size_t> counts(grid.size(), 0);
    for (const KpiSample& s : samples) {
        const std::size_t i = grid_index(grid, snap_to_grid(grid, s.parameter_value));
        sums[i] += s.objective_value;
        counts[i] += 1;
    }

    std::vector<double> table(grid.size());
    // Populated points get the sample mean; gaps interpolate between the
    // nearest populated neighbors, endpoints copy the nearest one.
    std::vector<std::size_t> populated;
    for (std::size_t i = 0; i < grid.size(); ++i)
        if (counts[i] > 0) {
            table[i] = sums[i] / static_cast<double>(counts[i]);
            populated.push_back(i);
        }

    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (counts[i] > 0)
            continue;
        const auto right = std::lower_bound(populated.begin(), populated.end(), i);
        if (right == populated.begin()) {
            table[i] = table[*right];
        } else if (right == populated.end()) {
            table[i] = table[*(right - 1)];
        } else {
            const std::size_t lo = *(right - 1);
            const std::size_t hi = *right;
            const double t = (grid.values[i] - grid.values[lo]) /
                             (grid.values[hi] - grid.values[lo]);
            table[i] = table[lo] + t * (table[hi] - table[lo]);
        }
    }
    return Predictor(grid, std::move(table));
}

CfAgent::CfAgent(CfConfig config, ParameterGrid grid)
    : config_(std::move(config)), grid_(std::move(grid)) {
    validate(config_.descriptor);
    validate(config_.scale);
    if (!(config_.threshold_pct > 0.0 && config_.threshold_pct < 100.0))
        throw ValidationError("cf '" + config_.descriptor.cf_id +
                              "': threshold_pct must be in (0, 100)");
    if (!config_.descriptor.params_written.count(grid_.spec.name))
        throw ValidationError("cf '" + config_.descriptor.cf_id +
                              "': grid parameter is not among params_written");
    parameter_ = grid_.spec.name;
}

void CfAgent::initial_train(const std::vector<KpiSample>& samples) {
    samples_.insert(samples_.end(), samples.begin(), samples.end());
    predictor_ = train(samples_, grid_);
}

UtilityTable CfAgent::utility_on(const std::vector<double>& grid_values) const {
    if (!trained())
        throw ValidationError("cf '" + id() + "': not trained yet");
    std::vector<KpiSample> predicted;
    predicted.reserve(grid_values.size());
    for (double x : grid_values)
        predicted.push_back({x, predictor_.predict(x)});
    if (config_.minimizing)
        predicted = invert_for_minimization(std::move(predicted));
    return normalize_linear(parameter_, std::move(predicted), config_.scale);
}

std::optional<CoordMessage> CfAgent::learning_cycle(const std::vector<KpiSample>& fresh) {
    samples_.insert(samples_.end(), fresh.begin(), fresh.end());
    predictor_ = train(samples_, grid_);

    const UtilityTable table = utility_on(grid_.values);
    const OptimalConfigRange range = optimal_config_range(table, config_.threshold_pct);

    const bool changed = last_range_.has_value() && !ranges_identical(range, *last_range_);
    last_range_ = range;
    ++cycle_index_;
    if (changed)
        return make_recalc_request(id(), parameter_);
    return std::nullopt;
}

InfoPayload CfAgent::answer_info_request(const std::string& parameter,
                                         const std::vector<double>& announced_grid) const {
    if (!config_.descriptor.params_written.count(parameter))
        throw ProtocolError("cf '" + id() + "' does not write parameter '" + parameter + "'");
    if (parameter != parameter_)
        throw ProtocolError("cf '" + id() + "' has no predictor for '" + parameter + "'");
    InfoPayload payload;
    payload.table = utility_on(announced_grid);
    payload.range = optimal_config_range(payload.table, config_.threshold_pct);
    return payload;
}

std::vector<Outbound> CfAgent::handle(const CoordMessage& msg) {
    switch (msg.kind) {
    case MessageKind::InfoRequest: {
        try {
            const auto parameter = msg.payload.at("parameter").get<std::string>();
            const auto grid_values = msg.payload.at("grid").get<std::vector<double>>();
            const InfoPayload payload = answer_info_request(parameter, grid_values);
            return {{kControllerId, make_info_response(msg.request_id, id(), payload)}};
        } catch (const Error& e) {
            return {{kControllerId, make_protocol_error(msg.request_id, id(), e.what())}};
        }
    }
    case MessageKind::ConfigUpdate:
        return {{kControllerId, make_ack(msg.request_id, id())}};
    default:
        return {};
    }
}

nlohmann::json CfAgent::state_json() const {
    nlohmann::json j{{"descriptor", config_.descriptor},
                     {"scale", config_.scale},
                     {"threshold_pct", config_.threshold_pct},
                     {"minimizing", config_.minimizing},
                     {"cycle_index", cycle_index_},
                     {"samples", samples_},
                     {"predictor", trained() ? nlohmann::json(predictor_.predictions())
                                             : nlohmann::json(nullptr)},
                     {"last_range", last_range_ ? nlohmann::json(*last_range_)
                                                : nlohmann::json(nullptr)}};
    return j;
}

} // namespace cancoord
