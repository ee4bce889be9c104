#pragma once

#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "cancoord/domain.hpp"
#include "cancoord/message.hpp"
#include "cancoord/nswf.hpp"

namespace cancoord {

// Event kinds appearing in the controller's append-only log.
namespace event_kind {
inline constexpr const char* config_preloaded = "config_preloaded";
inline constexpr const char* cf_registered = "cf_registered";
inline constexpr const char* recalc_request = "recalc_request";
inline constexpr const char* info_request_sent = "info_request_sent";
inline constexpr const char* info_response = "info_response";
inline constexpr const char* config_update = "config_update";
inline constexpr const char* transaction_aborted = "transaction_aborted";
inline constexpr const char* ack = "ack";
inline constexpr const char* protocol_error = "protocol_error";
inline constexpr const char* warning = "warning";
} // namespace event_kind

/// One entry of the audit trail. seq is strictly increasing; tick is the
/// controller's logical clock at emission time.
struct CoordEvent {
    long seq = 0;
    long tick = 0;
    std::string kind;
    std::string source; // originating cf_id, or "controller"
    nlohmann::json payload = nlohmann::json::object();

    friend bool operator==(const CoordEvent&, const CoordEvent&) = default;
};

void to_json(nlohmann::json& j, const CoordEvent& event);
void from_json(const nlohmann::json& j, CoordEvent& event);

/// Externally visible controller state, also the result of an event-log
/// replay.
struct ControllerSnapshot {
    Configuration config;
    std::set<std::string> cf_ids;

    friend bool operator==(const ControllerSnapshot&, const ControllerSnapshot&) = default;
};

/// The coordination authority: owns the configuration (nothing else may
/// write it), serializes recalculation transactions per parameter, polls
/// the conflict group, and applies the welfare-optimal value.
///
/// The controller is a single logical actor; callers must present messages
/// one at a time (the carriers do).
class Controller {
  public:
    Controller(Configuration preloaded, std::map<std::string, ParameterGrid> grids,
               long timeout_ticks = 10);

    void register_cf(const CfDescriptor& descriptor);

    /// Processes one inbound message, returns what to send.
    std::vector<Outbound> handle(const CoordMessage& msg);

    /// Advances the logical clock; expires overdue collections (aborting
    /// them) and dispatches queued recalculation requests.
    std::vector<Outbound> advance_to(long tick);

    /// Aborts every in-flight collection (e.g. on shutdown). Queued
    /// requests are dropped; the configuration is untouched.
    void abort_active(const std::string& reason);

    long now() const { return now_; }
    bool busy() const; // any transaction not idle
    const Configuration& current_config() const { return config_; }
    const std::vector<CoordEvent>& events() const { return events_; }
    const std::optional<WelfareResult>& latest_result() const { return latest_result_; }
    ControllerSnapshot snapshot() const;

    /// CFs polled for a parameter: every registered CF that writes it.
    std::vector<std::string> poll_group(const std::string& parameter) const;

    /// Invoked on every appended event; used to stream the log to disk.
    void set_event_sink(std::function<void(const CoordEvent&)> sink);

  private:
    enum class Phase { Idle, Collecting, Applying };

    struct Transaction {
        Phase phase = Phase::Idle;
        std::string request_id;
        long started = 0;
        std::set<std::string> pending;
        std::map<std::string, InfoPayload> received;
        std::deque<std::string> queued; // cf_ids waiting for this parameter, FIFO
    };

    const CoordEvent& log(const std::string& kind, const std::string& source,
                          nlohmann::json payload);
    void start_collecting(Transaction& txn, const std::string& parameter,
                          std::vector<Outbound>& out);
    void complete(Transaction& txn, const std::string& parameter, std::vector<Outbound>& out);
    void dispatch_queued(Transaction& txn, const std::string& parameter,
                         std::vector<Outbound>& out);
    Transaction* transaction_by_request_id(const std::string& request_id, std::string& parameter);

    Configuration config_;
    std::map<std::string, ParameterGrid> grids_;
    std::map<std::string, CfDescriptor> cfs_;
    std::map<std::string, Transaction> txns_; // keyed by parameter
    std::vector<CoordEvent> events_;
    std::function<void(const CoordEvent&)> sink_;
    std::optional<WelfareResult> latest_result_;
    long timeout_ticks_;
    long now_ = 0;
    long next_seq_ = 0;
    long next_txn_ = 0;
};

} // namespace cancoord
