#include "cancoord/controller.hpp"

#include <algorithm>

namespace cancoord {

void to_json(nlohmann::json& j, const CoordEvent& event) {
    j = {{"seq", event.seq},
         {"tick", event.tick},
         {"kind", event.kind},
         {"source", event.source},
         {"payload", event.payload}};
}

void from_json(const nlohmann::json& j, CoordEvent& event) {
    j.at("seq").get_to(event.seq);
    j.at("tick").get_to(event.tick);
    j.at("kind").get_to(event.kind);
    j.at("source").get_to(event.source);
    event.payload = j.at("payload");
}

Controller::Controller(Configuration preloaded, std::map<std::string, ParameterGrid> grids,
                       long timeout_ticks)
    : config_(std::move(preloaded)), grids_(std::move(grids)), timeout_ticks_(timeout_ticks) {
    if (timeout_ticks_ <= 0)
        throw ValidationError("controller: timeout_ticks must be positive");
    validate_configuration(config_, grids_);
    log(event_kind::config_preloaded, kControllerId, {{"configuration", config_}});
}

void Controller::set_event_sink(std::function<void(const CoordEvent&)> sink) {
    sink_ = std::move(sink);
}

const CoordEvent& Controller::log(const std::string& kind, const std::string& source,
                                  nlohmann::json payload) {
    CoordEvent event;
    event.seq = next_seq_++;
    event.tick = now_;
    event.kind = kind;
    event.source = source;
    event.payload = std::move(payload);
    events_.push_back(std::move(event));
    if (sink_)
        sink_(events_.back());
    return events_.back();
}

void Controller::register_cf(const CfDescriptor& descriptor) {
    validate(descriptor);
    if (cfs_.count(descriptor.cf_id))
        throw ValidationError("controller: cf '" + descriptor.cf_id + "' already registered");
    cfs_[descriptor.cf_id] = descriptor;
    log(event_kind::cf_registered, kControllerId, {{"descriptor", descriptor}});
}

std::vector<std::string> Controller::poll_group(const std::string& parameter) const {
    std::vector<std::string> group;
    for (const auto& [id, descriptor] : cfs_)
        if (descriptor.params_written.count(parameter))
            group.push_back(id);
    return group; // map order: already sorted by cf_id
}

bool Controller::busy() const {
    return std::any_of(txns_.begin(), txns_.end(),
                       [](const auto& kv) { return kv.second.phase != Phase::Idle; });
}

ControllerSnapshot Controller::snapshot() const {
    ControllerSnapshot snap;
    snap.config = config_;
    for (const auto& [id, _] : cfs_)
        snap.cf_ids.insert(id);
    return snap;
}

void Controller::start_collecting(Transaction& txn, const std::string& parameter,
                                  std::vector<Outbound>& out) {
    txn.phase = Phase::Collecting;
    txn.request_id = "txn-" + std::to_string(++next_txn_);
    txn.started = now_;
    txn.received.clear();
    txn.pending.clear();

    const auto group = poll_group(parameter);
    const auto& grid = grids_.at(parameter);
    for (const std::string& cf_id : group) {
        txn.pending.insert(cf_id);
        out.push_back({cf_id, make_info_request(txn.request_id, parameter, grid.values)});
        log(event_kind::info_request_sent, kControllerId,
            {{"request_id", txn.request_id}, {"parameter", parameter}, {"to", cf_id}});
    }
}

std::vector<Outbound> Controller::handle(const CoordMessage& msg) {
    std::vector<Outbound> out;
    switch (msg.kind) {
    case MessageKind::RecalcRequest: {
        const auto cf_id = msg.payload.at("cf_id").get<std::string>();
        const auto parameter = msg.payload.at("parameter").get<std::string>();
        if (!cfs_.count(cf_id)) {
            log(event_kind::protocol_error, msg.sender,
                {{"detail", "recalc request from unregistered cf"}, {"cf_id", cf_id}});
            out.push_back({msg.sender, make_protocol_error("", kControllerId,
                                                           "unregistered cf '" + cf_id + "'")});
            return out;
        }
        if (!grids_.count(parameter)) {
            log(event_kind::protocol_error, msg.sender,
                {{"detail", "recalc request for unknown parameter"}, {"parameter", parameter}});
            out.push_back({msg.sender, make_protocol_error("", kControllerId,
                                                           "unknown parameter '" + parameter + "'")});
            return out;
        }
        if (!cfs_.at(cf_id).params_written.count(parameter)) {
            log(event_kind::protocol_error, msg.sender,
                {{"detail", "recalc request for a parameter the cf does not write"},
                 {"cf_id", cf_id},
                 {"parameter", parameter}});
            out.push_back({msg.sender,
                           make_protocol_error("", kControllerId,
                                               "cf '" + cf_id + "' does not write '" + parameter + "'")});
            return out;
        }

        Transaction& txn = txns_[parameter];
        if (txn.phase == Phase::Idle) {
            log(event_kind::recalc_request, cf_id,
                {{"cf_id", cf_id}, {"parameter", parameter}, {"disposition", "started"}});
            start_collecting(txn, parameter, out);
        } else if (std::find(txn.queued.begin(), txn.queued.end(), cf_id) == txn.queued.end()) {
            txn.queued.push_back(cf_id);
            log(event_kind::recalc_request, cf_id,
                {{"cf_id", cf_id}, {"parameter", parameter}, {"disposition", "queued"}});
        } else {
            log(event_kind::recalc_request, cf_id,
                {{"cf_id", cf_id}, {"parameter", parameter}, {"disposition", "duplicate"}});
        }
        return out;
    }

    case MessageKind::InfoResponse: {
        std::string parameter;
        Transaction* txn = transaction_by_request_id(msg.request_id, parameter);
        if (txn == nullptr) {
            log(event_kind::warning, msg.sender,
                {{"detail", "info response with stale request_id"},
                 {"request_id", msg.request_id}});
            return out;
        }
        if (!txn->pending.count(msg.sender)) {
            log(event_kind::protocol_error, msg.sender,
                {{"detail", "info response from cf not pending"},
                 {"request_id", msg.request_id},
                 {"cf_id", msg.sender}});
            return out;
        }
        InfoPayload payload;
        try {
            payload = info_payload_of(msg);
            if (payload.table.parameter != parameter || payload.range.parameter != parameter)
                throw ValidationError("payload parameter does not match the transaction");
            if (payload.table.grid != grids_.at(parameter).values)
                throw ValidationError("payload grid does not match the announced grid");
        } catch (const Error& e) {
            // The cf stays pending; the transaction will time out if it
            // never sends a usable response.
            log(event_kind::protocol_error, msg.sender,
                {{"detail", std::string("unusable info response: ") + e.what()},
                 {"request_id", msg.request_id},
                 {"cf_id", msg.sender}});
            return out;
        }
        txn->received[msg.sender] = std::move(payload);
        txn->pending.erase(msg.sender);
        log(event_kind::info_response, msg.sender,
            {{"request_id", msg.request_id},
             {"cf_id", msg.sender},
             {"range", txn->received.at(msg.sender).range},
             {"utility_table", txn->received.at(msg.sender).table}});
        if (txn->pending.empty())
            complete(*txn, parameter, out);
        return out;
    }

    case MessageKind::Ack:
        log(event_kind::ack, msg.sender,
            {{"request_id", msg.request_id}, {"cf_id", msg.sender}});
        return out;

    default:
        log(event_kind::protocol_error, msg.sender,
            {{"detail", "unexpected message kind " + to_string(msg.kind)}});
        out.push_back({msg.sender, make_protocol_error(msg.request_id, kControllerId,
                                                       "unexpected " + to_string(msg.kind))});
        return out;
    }
}

void Controller::complete(Transaction& txn, const std::string& parameter,
                          std::vector<Outbound>& out) {
    txn.phase = Phase::Applying;

    std::vector<OptimalConfigRange> ranges;
    std::vector<CfUtility> tables;
    for (const auto& [cf_id, payload] : txn.received) {
        ranges.push_back(payload.range);
        tables.push_back({cf_id, payload.table});
    }

    try {
        const auto candidates = candidate_set(ranges, grids_.at(parameter));
        const WelfareResult result = nswf_optimize(tables, candidates);
        config_.entries[parameter] = result.chosen_value;
        latest_result_ = result;
        log(event_kind::config_update, kControllerId,
            {{"request_id", txn.request_id},
             {"parameter", parameter},
             {"value", result.chosen_value},
             {"welfare", result.welfare},
             {"utilities", result.per_cf_utilities},
             {"utility_spread", result.utility_spread},
             {"candidate_count", result.candidate_count}});
        const CoordMessage update = make_config_update(txn.request_id, parameter, result);
        for (const std::string& cf_id : poll_group(parameter))
            out.push_back({cf_id, update});
    } catch (const Error& e) {
        log(event_kind::transaction_aborted, kControllerId,
            {{"request_id", txn.request_id},
             {"parameter", parameter},
             {"reason", std::string("optimization failed: ") + e.what()}});
    }

    txn.phase = Phase::Idle;
    txn.request_id.clear();
    txn.pending.clear();
    txn.received.clear();
    dispatch_queued(txn, parameter, out);
}

void Controller::dispatch_queued(Transaction& txn, const std::string& parameter,
                                 std::vector<Outbound>& out) {
    if (txn.phase != Phase::Idle || txn.queued.empty())
        return;
    const std::string cf_id = txn.queued.front();
    txn.queued.pop_front();
    log(event_kind::recalc_request, cf_id,
        {{"cf_id", cf_id}, {"parameter", parameter}, {"disposition", "redispatched"}});
    start_collecting(txn, parameter, out);
}

Controller::Transaction* Controller::transaction_by_request_id(const std::string& request_id,
                                                               std::string& parameter) {
    for (auto& [param, txn] : txns_) {
        if (txn.phase == Phase::Collecting && txn.request_id == request_id) {
            parameter = param;
            return &txn;
        }
    }
    return nullptr;
}

void Controller::abort_active(const std::string& reason) {
    for (auto& [parameter, txn] : txns_) {
        if (txn.phase != Phase::Idle) {
            log(event_kind::transaction_aborted, kControllerId,
                {{"request_id", txn.request_id},
                 {"parameter", parameter},
                 {"reason", reason},
                 {"unanswered",
                  std::vector<std::string>(txn.pending.begin(), txn.pending.end())}});
            txn.phase = Phase::Idle;
            txn.request_id.clear();
            txn.pending.clear();
            txn.received.clear();
        }
        txn.queued.clear();
    }
}

std::vector<Outbound> Controller::advance_to(long tick) {
    std::vector<Outbound> out;
    if (tick < now_)
        throw ValidationError("controller: logical clock must not move backwards");
    now_ = tick;
    for (auto& [parameter, txn] : txns_) {
        if (txn.phase == Phase::Collecting && now_ - txn.started >= timeout_ticks_) {
            log(event_kind::transaction_aborted, kControllerId,
                {{"request_id", txn.request_id},
                 {"parameter", parameter},
                 {"reason", "collect timeout"},
                 {"unanswered", std::vector<std::string>(txn.pending.begin(), txn.pending.end())}});
            txn.phase = Phase::Idle;
            txn.request_id.clear();
            txn.pending.clear();
            txn.received.clear();
            dispatch_queued(txn, parameter, out);
        }
    }
    return out;
}

} // namespace cancoord
