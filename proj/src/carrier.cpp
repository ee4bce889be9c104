#include "cancoord/carrier.hpp"

#include <algorithm>
#include <tuple>

namespace cancoord {

void InProcessCarrier::attach(const std::string& name, Handler handler) {
    if (handlers_.count(name))
        throw ValidationError("carrier: endpoint '" + name + "' already attached");
    handlers_[name] = std::move(handler);
}

void InProcessCarrier::add_rule(DeliveryRule rule) {
    rules_.push_back(std::move(rule));
}

void InProcessCarrier::post(const std::string& to, const CoordMessage& msg) {
    long delay = 1;
    for (DeliveryRule& rule : rules_) {
        if (rule.uses == 0)
            continue;
        if (rule.kind && *rule.kind != msg.kind)
            continue;
        if (!rule.sender.empty() && rule.sender != msg.sender)
            continue;
        if (!rule.to.empty() && rule.to != to)
            continue;
        if (rule.uses > 0)
            --rule.uses;
        if (rule.drop) {
            ++dropped_;
            return;
        }
        delay += rule.extra_delay_ticks;
        break;
    }
    queue_.push_back({now_ + delay, seq_++, to, msg});
}

std::size_t InProcessCarrier::advance_tick() {
    ++now_;
    std::vector<Pending> due;
    for (auto it = queue_.begin(); it != queue_.end();) {
        if (it->due <= now_) {
            due.push_back(std::move(*it));
            it = queue_.erase(it);
        } else {
            ++it;
        }
    }
    std::sort(due.begin(), due.end(), [](const Pending& a, const Pending& b) {
        return std::tie(a.due, a.seq) < std::tie(b.due, b.seq);
    });

    for (const Pending& p : due) {
        trace_.push_back(p.to + " <- " + p.msg.sender + " " + to_string(p.msg.kind));
        auto handler = handlers_.find(p.to);
        if (handler == handlers_.end())
            continue; // unattached endpoint: message is lost
        for (Outbound& out : handler->second(p.msg))
            post(out.to, out.msg);
    }
    return due.size();
}

} // namespace cancoord
