#pragma once

#include <string>
#include <string_view>

#include "relfid/channels.hpp"
#include "relfid/protosim.hpp"

namespace relfid {

/// Channel-pair specification as JSON.
///
///   {"family": "pauli_x", "params": {"p": 0.0975}}
///   {"family": "unitary_power_x", "params": {"theta": 0.2}}
///   {"family": "eb_measure_rotate", "params": {"delta_theta": 0.5236}}
///   {"family": "amplitude_damping", "params": {"gamma1": 0.2, "gamma2": 0.6}}
///   {"family": "raw_kraus",
///    "matrices":  [ [[[re,im], ...], ...], ... ],   // Kraus set of C2, row-major
///    "reference": [ ... ]}                          // optional C1, default identity
///
/// Errors are ValidationError with the line/column of a syntax error or the
/// JSON path of the offending field.
FamilySpec parse_family_spec(std::string_view text);
FamilySpec load_family_spec(const std::string& path);
std::string family_spec_to_json(const FamilySpec& spec, int indent = 2);

/// {"kind": "...", "uses": N, "ancilla_qubits": a, "params": [...]}
std::string protocol_spec_to_json(const ProtocolSpec& spec, int indent = 2);
ProtocolSpec parse_protocol_spec(std::string_view text);

}  // namespace relfid
