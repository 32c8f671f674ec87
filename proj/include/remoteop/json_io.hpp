#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "remoteop/protocol.hpp"
#include "remoteop/verify.hpp"

// JSON encodings shared by the CLI and its tests. Complex numbers are
// [re, im] pairs; matrices are row-major. Malformed input raises ParseError.

namespace remoteop::io {

using Json = nlohmann::json;

Json state_to_json(const StateVector &s);
StateVector state_from_json(const Json &j);

Json matrix_to_json(const CMatrix &m);
CMatrix matrix_from_json(const Json &j);

Json restricted_op_to_json(const RestrictedOp &op);
RestrictedOp restricted_op_from_json(const Json &j);

Json ledger_to_json(const ResourceLedger &l);
Json decomposition_to_json(const Decomposition &d);
Json trace_report_to_json(const TraceCheckReport &r);

/// Run report with one entry per branch; `fidelities` aligns with `results`.
Json run_report(std::string_view protocol, std::size_t n, std::size_t m, const std::vector<RunResult> &results,
                const std::vector<double> &fidelities);

/// Branch table: branch,b,a,teleports,probability,fidelity.
void write_branch_csv(std::ostream &os, const std::vector<RunResult> &results, const std::vector<double> &fidelities);

Json read_json_file(const std::string &path);

} // namespace remoteop::io
