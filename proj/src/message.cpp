#include "cancoord/message.hpp"

#include <cmath>

namespace cancoord {

std::string to_string(MessageKind kind) {
    switch (kind) {
    case MessageKind::RecalcRequest: return "RecalcRequest";
    case MessageKind::InfoRequest: return "InfoRequest";
    case MessageKind::InfoResponse: return "InfoResponse";
    case MessageKind::ConfigUpdate: return "ConfigUpdate";
    case MessageKind::Ack: return "Ack";
    case MessageKind::ProtocolErrorMsg: return "ProtocolError";
    }
    throw ValidationError("unknown message kind");
}

MessageKind message_kind_from_string(const std::string& s) {
    if (s == "RecalcRequest") return MessageKind::RecalcRequest;
    if (s == "InfoRequest") return MessageKind::InfoRequest;
    if (s == "InfoResponse") return MessageKind::InfoResponse;
    if (s == "ConfigUpdate") return MessageKind::ConfigUpdate;
    if (s == "Ack") return MessageKind::Ack;
    if (s == "ProtocolError") return MessageKind::ProtocolErrorMsg;
    throw ProtocolError("unknown message kind '" + s + "'");
}

namespace {

void require_finite(const nlohmann::json& j, const std::string& where) {
    if (j.is_number_float() && !std::isfinite(j.get<double>()))
        throw ValidationError("message payload: non-finite number at " + where);
    if (j.is_object())
        for (const auto& [key, value] : j.items())
            require_finite(value, where + "." + key);
    if (j.is_array())
        for (const auto& value : j)
            require_finite(value, where + "[]");
}

void require_field(const CoordMessage& msg, const char* field,
                   nlohmann::json::value_t type) {
    if (!msg.payload.contains(field) || msg.payload.at(field).type() != type) {
        // numbers may arrive as integers or floats
        if (type == nlohmann::json::value_t::number_float && msg.payload.contains(field) &&
            msg.payload.at(field).is_number())
            return;
        throw ValidationError("message " + to_string(msg.kind) + ": payload field '" + field +
                              "' missing or mistyped");
    }
}

constexpr auto kString = nlohmann::json::value_t::string;
constexpr auto kNumber = nlohmann::json::value_t::number_float;
constexpr auto kArray = nlohmann::json::value_t::array;
constexpr auto kObject = nlohmann::json::value_t::object;

} // namespace

void validate(const CoordMessage& msg) {
    if (msg.sender.empty())
        throw ValidationError("message: sender must not be empty");
    if (msg.kind == MessageKind::RecalcRequest && !msg.request_id.empty())
        throw ValidationError("RecalcRequest must not carry a request_id");
    if (msg.kind != MessageKind::RecalcRequest && msg.request_id.empty())
        throw ValidationError("message " + to_string(msg.kind) + " requires a request_id");
    if (!msg.payload.is_object())
        throw ValidationError("message payload must be a JSON object");
    require_finite(msg.payload, "payload");

    switch (msg.kind) {
    case MessageKind::RecalcRequest:
        require_field(msg, "cf_id", kString);
        require_field(msg, "parameter", kString);
        break;
    case MessageKind::InfoRequest:
        require_field(msg, "parameter", kString);
        require_field(msg, "grid", kArray);
        for (const auto& v : msg.payload.at("grid"))
            if (!v.is_number())
                throw ValidationError("InfoRequest: grid must contain numbers");
        break;
    case MessageKind::InfoResponse:
        require_field(msg, "range", kObject);
        require_field(msg, "utility_table", kObject);
        break;
    case MessageKind::ConfigUpdate:
        require_field(msg, "parameter", kString);
        require_field(msg, "value", kNumber);
        require_field(msg, "welfare", kNumber);
        require_field(msg, "utilities", kObject);
        for (const auto& [_, v] : msg.payload.at("utilities").items())
            if (!v.is_number())
                throw ValidationError("ConfigUpdate: utilities must map to numbers");
        break;
    case MessageKind::Ack:
        break;
    case MessageKind::ProtocolErrorMsg:
        require_field(msg, "detail", kString);
        break;
    }
}

std::string encode(const CoordMessage& msg) {
    validate(msg);
    nlohmann::json j{{"kind", to_string(msg.kind)}, {"sender", msg.sender},
                     {"payload", msg.payload}};
    if (msg.kind != MessageKind::RecalcRequest)
        j["request_id"] = msg.request_id;
    return j.dump() + "\n";
}

CoordMessage decode(std::string_view line) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
        throw FrameError(std::string("unparseable frame: ") + e.what());
    }
    if (!j.is_object())
        throw FrameError("frame is not a JSON object");

    CoordMessage msg;
    try {
        msg.kind = message_kind_from_string(j.at("kind").get<std::string>());
        msg.sender = j.at("sender").get<std::string>();
        msg.request_id = j.value("request_id", "");
        msg.payload = j.at("payload");
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("message envelope: ") + e.what());
    }
    validate(msg);
    return msg;
}

CoordMessage make_recalc_request(const std::string& cf_id, const std::string& parameter) {
    CoordMessage msg;
    msg.kind = MessageKind::RecalcRequest;
    msg.sender = cf_id;
    msg.payload = {{"cf_id", cf_id}, {"parameter", parameter}};
    return msg;
}

CoordMessage make_info_request(const std::string& request_id, const std::string& parameter,
                               const std::vector<double>& grid_values) {
    CoordMessage msg;
    msg.kind = MessageKind::InfoRequest;
    msg.request_id = request_id;
    msg.sender = kControllerId;
    msg.payload = {{"parameter", parameter}, {"grid", grid_values}};
    return msg;
}

CoordMessage make_info_response(const std::string& request_id, const std::string& cf_id,
                                const InfoPayload& payload) {
    CoordMessage msg;
    msg.kind = MessageKind::InfoResponse;
    msg.request_id = request_id;
    msg.sender = cf_id;
    msg.payload = {{"range", payload.range}, {"utility_table", payload.table}};
    return msg;
}

CoordMessage make_config_update(const std::string& request_id, const std::string& parameter,
                                const WelfareResult& result) {
    CoordMessage msg;
    msg.kind = MessageKind::ConfigUpdate;
    msg.request_id = request_id;
    msg.sender = kControllerId;
    msg.payload = {{"parameter", parameter},
                   {"value", result.chosen_value},
                   {"welfare", result.welfare},
                   {"utilities", result.per_cf_utilities}};
    return msg;
}

CoordMessage make_ack(const std::string& request_id, const std::string& sender) {
    CoordMessage msg;
    msg.kind = MessageKind::Ack;
    msg.request_id = request_id;
    msg.sender = sender;
    return msg;
}

CoordMessage make_protocol_error(const std::string& request_id, const std::string& sender,
                                 const std::string& detail) {
    CoordMessage msg;
    msg.kind = MessageKind::ProtocolErrorMsg;
    msg.request_id = request_id.empty() ? "unsolicited" : request_id;
    msg.sender = sender;
    msg.payload = {{"detail", detail}};
    return msg;
}

InfoPayload info_payload_of(const CoordMessage& msg) {
    if (msg.kind != MessageKind::InfoResponse)
        throw ValidationError("info_payload_of: message is not an InfoResponse");
    InfoPayload payload;
    try {
        msg.payload.at("range").get_to(payload.range);
        msg.payload.at("utility_table").get_to(payload.table);
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("InfoResponse payload: ") + e.what());
    }
    return payload;
}

} // namespace cancoord
