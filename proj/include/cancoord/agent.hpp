#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "cancoord/domain.hpp"
#include "cancoord/message.hpp"
#include "cancoord/utility.hpp"

namespace cancoord {

/// Objective predictions tabulated on the parameter grid, queried anywhere
/// in between by piecewise-linear interpolation.
class Predictor {
  public:
    Predictor() = default;
    Predictor(ParameterGrid grid, std::vector<double> predictions);

    const ParameterGrid& grid() const { return grid_; }
    const std::vector<double>& predictions() const { return predictions_; }

    double predict(double x) const;
    std::vector<double> predict_many(const std::vector<double>& xs) const;

  private:
    ParameterGrid grid_;
    std::vector<double> predictions_;
};

/// Fits a table predictor: per grid point the mean of the samples snapping
/// to it, gaps filled by linear interpolation between populated neighbors
/// (constant extension past the outermost populated points). At least two
/// samples are required.
Predictor train(const std::vector<KpiSample>& samples, const ParameterGrid& grid);

/// Per-CF settings as declared in a scenario.
struct CfConfig {
    CfDescriptor descriptor;
    bool minimizing = false;    // objective is pushed down (load), not up (coverage)
    double threshold_pct = 5.0; // optimal-config-range width knob
    UtilityScale scale{};
};

/// CF runtime: owns the accumulated observations, the predictor, and the
/// last computed optimal-config-range. Never writes configuration; its only
/// outputs are protocol messages.
class CfAgent {
  public:
    CfAgent(CfConfig config, ParameterGrid grid);

    const std::string& id() const { return config_.descriptor.cf_id; }
    const CfDescriptor& descriptor() const { return config_.descriptor; }
    const std::string& parameter() const { return parameter_; }
    long cycle_index() const { return cycle_index_; }
    const std::optional<OptimalConfigRange>& last_range() const { return last_range_; }
    const Predictor& predictor() const { return predictor_; }
    bool trained() const { return !predictor_.predictions().empty(); }

    /// Pre-operational training; does not baseline an optimal-config-range.
    void initial_train(const std::vector<KpiSample>& samples);

    /// One learning cycle: retrain on accumulated + fresh samples, recompute
    /// the optimal-config-range, and request a recalculation when it moved.
    /// The very first computed range is recorded as baseline silently.
    std::optional<CoordMessage> learning_cycle(const std::vector<KpiSample>& fresh);

    /// Range plus utility table tabulated on the controller-announced grid.
    /// Read-only. Throws ProtocolError for a parameter this CF does not write.
    InfoPayload answer_info_request(const std::string& parameter,
                                    const std::vector<double>& announced_grid) const;

    /// Protocol behavior: InfoRequest -> InfoResponse (or ProtocolError),
    /// ConfigUpdate -> Ack. Everything else is ignored.
    std::vector<Outbound> handle(const CoordMessage& msg);

    /// Full serialized state; used to assert read-only guarantees.
    nlohmann::json state_json() const;

  private:
    UtilityTable utility_on(const std::vector<double>& grid_values) const;

    CfConfig config_;
    ParameterGrid grid_;
    std::string parameter_;
    std::vector<KpiSample> samples_;
    Predictor predictor_;
    std::optional<OptimalConfigRange> last_range_;
    long cycle_index_ = 0;
};

} // namespace cancoord
