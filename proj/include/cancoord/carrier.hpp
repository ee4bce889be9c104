#pragma once

#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cancoord/message.hpp"

namespace cancoord {

/// Scripted delivery behavior, matched against (kind, sender, recipient).
/// Empty strings match anything. `uses` limits how many messages the rule
/// consumes; -1 means unlimited.
struct DeliveryRule {
    std::optional<MessageKind> kind;
    std::string sender;
    std::string to;
    long extra_delay_ticks = 0;
    bool drop = false;
    int uses = -1;
};

/// Deterministic in-process message carrier for tests and the scenario
/// runner. Each hop takes one logical tick by default; scripted rules can
/// delay or drop to exercise timeouts. Delivery order is strict FIFO by
/// (due tick, enqueue sequence), so identical scripts yield identical runs.
class InProcessCarrier {
  public:
    using Handler = std::function<std::vector<Outbound>(const CoordMessage&)>;

    void attach(const std::string& name, Handler handler);
    void add_rule(DeliveryRule rule);

    /// Enqueues for delivery at now + 1 (+ any rule delay).
    void post(const std::string& to, const CoordMessage& msg);

    /// Delivers everything due at the new tick; cascading sends from
    /// handlers are enqueued for later ticks. Returns delivered count.
    std::size_t advance_tick();

    long now() const { return now_; }
    bool idle() const { return queue_.empty(); }
    std::size_t dropped() const { return dropped_; }

    /// "to <- sender kind" lines in delivery order, for reproducibility checks.
    const std::vector<std::string>& delivery_trace() const { return trace_; }

  private:
    struct Pending {
        long due;
        long seq;
        std::string to;
        CoordMessage msg;
    };

    std::map<std::string, Handler> handlers_;
    std::vector<DeliveryRule> rules_;
    std::deque<Pending> queue_;
    std::vector<std::string> trace_;
    long now_ = 0;
    long seq_ = 0;
    std::size_t dropped_ = 0;
};

} // namespace cancoord
