#include "remoteop/json_io.hpp"

#include <fstream>
#include <ostream>

#include "remoteop/error.hpp"

namespace remoteop::io {

namespace {

template <class F>
auto parse_guard(const char *what, F &&f) -> decltype(f()) {
    try {
        return f();
    } catch (const Json::exception &e) {
        fail(ErrorKind::ParseError, std::string(what) + ": " + e.what());
    }
}

Json complex_to_json(Complex c) { return Json::array({c.real(), c.imag()}); }

Complex complex_from_json(const Json &j) {
    if (j.is_number()) {
        return {j.get<double>(), 0.0};
    }
    if (!j.is_array() || j.size() != 2) {
        fail(ErrorKind::ParseError, "complex number must be [re, im]");
    }
    return {j.at(0).get<double>(), j.at(1).get<double>()};
}

Json bits_to_json(const Bits &bits) {
    Json out = Json::array();
    for (Bit b : bits) {
        out.push_back(static_cast<int>(b));
    }
    return out;
}

} // namespace

Json state_to_json(const StateVector &s) {
    Json amps = Json::array();
    for (Complex a : s.amplitudes()) {
        amps.push_back(complex_to_json(a));
    }
    return {{"num_qubits", s.num_qubits()}, {"amplitudes", amps}};
}

StateVector state_from_json(const Json &j) {
    return parse_guard("state", [&] {
        const auto n = j.at("num_qubits").get<std::size_t>();
        std::vector<Complex> amps;
        for (const Json &a : j.at("amplitudes")) {
            amps.push_back(complex_from_json(a));
        }
        return StateVector(n, std::move(amps));
    });
}

Json matrix_to_json(const CMatrix &m) {
    Json rows = Json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        Json row = Json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            row.push_back(complex_to_json(m(r, c)));
        }
        rows.push_back(std::move(row));
    }
    return {{"dim", m.rows()}, {"entries", rows}};
}

CMatrix matrix_from_json(const Json &j) {
    return parse_guard("matrix", [&] {
        const auto dim = j.at("dim").get<Eigen::Index>();
        const Json &rows = j.at("entries");
        if (dim <= 0 || !rows.is_array() || static_cast<Eigen::Index>(rows.size()) != dim) {
            fail(ErrorKind::ParseError, "matrix must have 'dim' rows");
        }
        CMatrix m(dim, dim);
        for (Eigen::Index r = 0; r < dim; ++r) {
            const Json &row = rows.at(static_cast<std::size_t>(r));
            if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != dim) {
                fail(ErrorKind::ParseError, "matrix row " + std::to_string(r) + " must have 'dim' entries");
            }
            for (Eigen::Index c = 0; c < dim; ++c) {
                m(r, c) = complex_from_json(row.at(static_cast<std::size_t>(c)));
            }
        }
        return m;
    });
}

Json restricted_op_to_json(const RestrictedOp &op) {
    Json out{{"variant", op.name()}, {"unitary_mode", op.unitary_mode()}};
    if (const auto *h = std::get_if<HpvOp>(&op.variant())) {
        out["d"] = h->d;
        out["u"] = Json::array({complex_to_json(h->u[0]), complex_to_json(h->u[1])});
        return out;
    }
    out["N"] = op.n();
    out["perm"] = op.permutation().values();
    if (const auto *w = std::get_if<WangOp>(&op.variant())) {
        Json t = Json::array();
        for (Complex v : w->t) {
            t.push_back(complex_to_json(v));
        }
        out["t"] = t;
        return out;
    }
    const auto &hy = std::get<HybridOp>(op.variant());
    out["M"] = hy.m;
    Json blocks = Json::array();
    for (const CMatrix &g : hy.blocks) {
        blocks.push_back(matrix_to_json(g));
    }
    out["blocks"] = blocks;
    return out;
}

RestrictedOp restricted_op_from_json(const Json &j) {
    return parse_guard("restricted op", [&] {
        const auto variant = j.at("variant").get<std::string>();
        const bool unitary_mode = j.value("unitary_mode", true);
        if (variant == "hpv") {
            const auto d = j.at("d").get<int>();
            const Json &u = j.at("u");
            if (!u.is_array() || u.size() != 2 || (d != 0 && d != 1)) {
                fail(ErrorKind::ParseError, "hpv needs d in {0,1} and two entries in u");
            }
            return RestrictedOp::hpv(static_cast<Bit>(d), {complex_from_json(u[0]), complex_from_json(u[1])},
                                     unitary_mode);
        }
        Permutation x(j.at("perm").get<std::vector<std::size_t>>());
        if (j.contains("N") && j.at("N").get<std::size_t>() != x.num_qubits()) {
            fail(ErrorKind::ParseError, "'N' disagrees with the permutation length");
        }
        if (variant == "wang") {
            std::vector<Complex> t;
            for (const Json &v : j.at("t")) {
                t.push_back(complex_from_json(v));
            }
            return RestrictedOp::wang(std::move(x), std::move(t), unitary_mode);
        }
        if (variant == "hybrid") {
            std::vector<CMatrix> blocks;
            for (const Json &b : j.at("blocks")) {
                blocks.push_back(matrix_from_json(b));
            }
            const std::size_t n = x.num_qubits();
            return RestrictedOp::hybrid(n, j.at("M").get<std::size_t>(), std::move(x), std::move(blocks),
                                        unitary_mode);
        }
        fail(ErrorKind::ParseError, "unknown variant '" + variant + "'");
    });
}

Json ledger_to_json(const ResourceLedger &l) {
    return {{"ebits", l.ebits_consumed},
            {"cbits", l.cbits()},
            {"cbits_b2a", l.cbits_bob_to_alice},
            {"cbits_a2b", l.cbits_alice_to_bob},
            {"setup_bits", l.setup_bits}};
}

Json decomposition_to_json(const Decomposition &d) {
    Json blocks = Json::array();
    for (const CMatrix &g : d.blocks) {
        blocks.push_back(matrix_to_json(g));
    }
    return {{"N", d.n}, {"M", d.m}, {"perm", d.x.values()}, {"blocks", blocks}, {"ebit_cost", d.ebit_cost}};
}

Json trace_report_to_json(const TraceCheckReport &r) {
    Json points = Json::array();
    for (const Checkpoint &c : r.checkpoints) {
        points.push_back({{"label", c.label}, {"deviation", c.deviation}, {"pass", c.pass}});
    }
    Json to_alice = Json::array();
    for (const Bits &b : r.outcomes.to_alice) {
        to_alice.push_back(bits_to_json(b));
    }
    Json to_bob = Json::array();
    for (const Bits &b : r.outcomes.to_bob) {
        to_bob.push_back(bits_to_json(b));
    }
    return {{"outcomes",
             {{"b", bits_to_json(r.outcomes.b)},
              {"teleports_to_alice", to_alice},
              {"a", bits_to_json(r.outcomes.a)},
              {"teleports_to_bob", to_bob}}},
            {"checkpoints", points},
            {"pass", r.passed()}};
}

Json run_report(std::string_view protocol, std::size_t n, std::size_t m, const std::vector<RunResult> &results,
                const std::vector<double> &fidelities) {
    Json branches = Json::array();
    for (std::size_t i = 0; i < results.size(); ++i) {
        const RunResult &r = results[i];
        Json teleports = Json::array();
        for (const TeleportRecord &t : r.transcript.teleports) {
            teleports.push_back({{"sender", to_string(t.sender)},
                                 {"pair", t.pair},
                                 {"bell_outcome", bits_to_json(t.bell_outcome)},
                                 {"correction", t.correction},
                                 {"ebits", t.ebits_used},
                                 {"cbits", t.cbits_used}});
        }
        branches.push_back({{"id", r.branch_id},
                            {"b", bits_to_json(r.transcript.b)},
                            {"a", bits_to_json(r.transcript.a)},
                            {"teleports", teleports},
                            {"probability", r.probability},
                            {"fidelity", fidelities.at(i)}});
    }
    Json report{{"protocol", protocol}, {"N", n}, {"M", m}, {"branches", branches}};
    if (!results.empty()) {
        report["ledger"] = ledger_to_json(results.front().ledger);
        report["setup"] = bits_to_json(results.front().transcript.setup);
    }
    return report;
}

void write_branch_csv(std::ostream &os, const std::vector<RunResult> &results, const std::vector<double> &fidelities) {
    auto join = [](const Bits &bits) {
        std::string s;
        for (Bit b : bits) {
            s += b ? '1' : '0';
        }
        return s;
    };
    os << "branch,b,a,teleports,probability,fidelity\n";
    os.precision(17);
    for (std::size_t i = 0; i < results.size(); ++i) {
        const RunResult &r = results[i];
        std::string tele;
        for (const TeleportRecord &t : r.transcript.teleports) {
            if (!tele.empty()) {
                tele += ' ';
            }
            tele += join(t.bell_outcome);
        }
        os << r.branch_id << ',' << join(r.transcript.b) << ',' << join(r.transcript.a) << ',' << tele << ','
           << r.probability << ',' << fidelities.at(i) << '\n';
    }
}

Json read_json_file(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        fail(ErrorKind::ConfigError, "cannot open '" + path + "'");
    }
    return parse_guard("json file", [&] { return Json::parse(in); });
}

} // namespace remoteop::io
