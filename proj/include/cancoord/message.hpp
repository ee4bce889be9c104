#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "cancoord/nswf.hpp"
#include "cancoord/utility.hpp"

namespace cancoord {

// Entity name the CFs address their messages to.
inline constexpr const char* kControllerId = "controller";

enum class MessageKind {
    RecalcRequest,
    InfoRequest,
    InfoResponse,
    ConfigUpdate,
    Ack,
    ProtocolErrorMsg
};

std::string to_string(MessageKind kind);
MessageKind message_kind_from_string(const std::string& s);

/// One protocol message. request_id is empty exactly for RecalcRequest;
/// everywhere else it echoes the InfoRequest that opened the transaction.
struct CoordMessage {
    MessageKind kind = MessageKind::Ack;
    std::string request_id;
    std::string sender;
    nlohmann::json payload = nlohmann::json::object();

    friend bool operator==(const CoordMessage&, const CoordMessage&) = default;
};

/// A message together with the endpoint it is addressed to.
struct Outbound {
    std::string to;
    CoordMessage msg;
};

/// The two artifacts a CF ships on request: its optimal-config-range and
/// its utility table on the announced grid.
struct InfoPayload {
    OptimalConfigRange range;
    UtilityTable table;
};

/// Kind/payload consistency plus finiteness of all numbers.
void validate(const CoordMessage& msg);

/// Canonical JSON (sorted keys, no insignificant whitespace) plus one
/// trailing newline. decode(encode(m)) == m.
std::string encode(const CoordMessage& msg);

/// Parses one complete line. Throws FrameError on malformed JSON,
/// ProtocolError on an unknown kind, ValidationError on a kind/payload
/// mismatch.
CoordMessage decode(std::string_view line);

CoordMessage make_recalc_request(const std::string& cf_id, const std::string& parameter);
CoordMessage make_info_request(const std::string& request_id, const std::string& parameter,
                               const std::vector<double>& grid_values);
CoordMessage make_info_response(const std::string& request_id, const std::string& cf_id,
                                const InfoPayload& payload);
CoordMessage make_config_update(const std::string& request_id, const std::string& parameter,
                                const WelfareResult& result);
CoordMessage make_ack(const std::string& request_id, const std::string& sender);
CoordMessage make_protocol_error(const std::string& request_id, const std::string& sender,
                                 const std::string& detail);

InfoPayload info_payload_of(const CoordMessage& msg);

} // namespace cancoord
