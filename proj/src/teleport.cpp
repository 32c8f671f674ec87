#include "remoteop/teleport.hpp"

#include <string>

#include "remoteop/error.hpp"
#include "remoteop/gates.hpp"

namespace remoteop {

namespace {

struct Roles {
    Party sender;
    Party receiver;
    std::size_t pair;
};

Roles check_roles(const LoccState &state, Qubit source, Qubit bell_a, Qubit bell_b) {
    const Registers &regs = state.registers();
    if (source == bell_a || source == bell_b || bell_a == bell_b) {
        fail(ErrorKind::QubitCollision, "teleport source coincides with a pair qubit");
    }
    const std::size_t pair = regs.pair_of(bell_a, bell_b);
    if (pair == 0) {
        fail(ErrorKind::InsufficientEntanglement, regs.label(bell_a) + " and " + regs.label(bell_b) +
                                                      " do not share a Bell pair");
    }
    if (state.pair_consumed(pair)) {
        fail(ErrorKind::EntanglementAlreadyConsumed, "pair " + std::to_string(pair) + " was already used");
    }
    const Party sender = regs.owner(source);
    if (regs.owner(bell_a) != sender || regs.owner(bell_b) == sender) {
        fail(ErrorKind::LocalityViolation, "teleport roles do not match qubit ownership");
    }
    return {sender, other(sender), pair};
}

LoccState bell_rotate(const LoccState &state, const Roles &roles, Qubit source, Qubit bell_a) {
    LoccState s = state;
    s.consume_pair(roles.pair);
    s.apply(roles.sender, cnot(), {source, bell_a}, "teleport-cnot");
    s.apply(roles.sender, hadamard(), {source}, "teleport-h");
    return s;
}

TeleportBranch finish(LoccState s, const Roles &roles, Qubit bell_b, const Bits &outcome) {
    s.send(roles.sender, outcome, "teleport");
    if (outcome[0]) {
        s.apply(roles.receiver, sigma(3), {bell_b}, "teleport-z");
    }
    if (outcome[1]) {
        s.apply(roles.receiver, sigma(1), {bell_b}, "teleport-x");
    }
    TeleportRecord rec{roles.sender, roles.pair, outcome, teleport_correction_index(outcome), 1, 2};
    return {std::move(s), std::move(rec)};
}

} // namespace

int teleport_correction_index(const Bits &bell_outcome) {
    const bool z = bell_outcome.at(0) != 0;
    const bool x = bell_outcome.at(1) != 0;
    if (z && x) {
        return 2;
    }
    return x ? 1 : (z ? 3 : 0);
}

std::vector<TeleportBranch> teleport(const LoccState &state, Qubit source, Qubit bell_a, Qubit bell_b) {
    const Roles roles = check_roles(state, source, bell_a, bell_b);
    const LoccState rotated = bell_rotate(state, roles, source, bell_a);
    std::vector<TeleportBranch> out;
    for (auto &[next, bits] : rotated.measure(roles.sender, {source, bell_a})) {
        out.push_back(finish(std::move(next), roles, bell_b, bits));
    }
    return out;
}

TeleportBranch teleport(const LoccState &state, Qubit source, Qubit bell_a, Qubit bell_b, const Bits &outcome) {
    const Roles roles = check_roles(state, source, bell_a, bell_b);
    const LoccState rotated = bell_rotate(state, roles, source, bell_a);
    return finish(rotated.measure_as(roles.sender, {source, bell_a}, outcome), roles, bell_b, outcome);
}

std::vector<BqstBranch> bqst(const LoccState &state, const CMatrix &op, const QubitList &targets,
                             GateCheck check) {
    const Registers &regs = state.registers();
    const std::size_t m = targets.size();
    if (m == 0 || op.rows() != (Eigen::Index{1} << m) || op.cols() != op.rows()) {
        fail(ErrorKind::DimensionMismatch, "operation does not act on the listed targets");
    }
    for (Qubit q : targets) {
        if (regs.owner(q) != Party::Bob) {
            fail(ErrorKind::LocalityViolation, "BQST targets must be held by Bob");
        }
    }
    std::vector<std::size_t> free_pairs;
    for (std::size_t p = 1; p <= regs.pairs() && free_pairs.size() < 2 * m; ++p) {
        if (!state.pair_consumed(p)) {
            free_pairs.push_back(p);
        }
    }
    if (free_pairs.size() < 2 * m) {
        fail(ErrorKind::InsufficientEntanglement,
             "BQST on " + std::to_string(m) + " qubits needs " + std::to_string(2 * m) + " unused pairs");
    }

    // Outbound: target k -> A of pair k. Inbound: that A -> B of pair m + k.
    std::vector<BqstBranch> frontier{{state, {}, {}}};
    for (std::size_t k = 0; k < m; ++k) {
        const std::size_t p = free_pairs[k];
        std::vector<BqstBranch> next;
        for (const BqstBranch &br : frontier) {
            for (TeleportBranch &tb : teleport(br.state, targets[k], regs.b(p), regs.a(p))) {
                auto records = br.teleports;
                records.push_back(tb.record);
                next.push_back({std::move(tb.state), std::move(records), {}});
            }
        }
        frontier = std::move(next);
    }
    QubitList alice_qubits;
    for (std::size_t k = 0; k < m; ++k) {
        alice_qubits.push_back(regs.a(free_pairs[k]));
    }
    for (BqstBranch &br : frontier) {
        br.state.apply(Party::Alice, op, alice_qubits, "bqst-op", check);
    }
    for (std::size_t k = 0; k < m; ++k) {
        const std::size_t p = free_pairs[m + k];
        std::vector<BqstBranch> next;
        for (const BqstBranch &br : frontier) {
            for (TeleportBranch &tb : teleport(br.state, alice_qubits[k], regs.a(p), regs.b(p))) {
                auto records = br.teleports;
                records.push_back(tb.record);
                next.push_back({std::move(tb.state), std::move(records), {}});
            }
        }
        frontier = std::move(next);
    }
    for (BqstBranch &br : frontier) {
        for (std::size_t k = 0; k < m; ++k) {
            br.output.push_back(regs.b(free_pairs[m + k]));
        }
    }
    return frontier;
}

std::vector<RunResult> run_bqst(const CMatrix &op, const StateVector &xi, GateCheck check) {
    const std::size_t m = xi.num_qubits();
    const LoccState start = LoccState::with_bell_pairs(Registers::hybrid_layout(0, m), xi);
    std::vector<RunResult> results;
    std::size_t id = 0;
    for (BqstBranch &br : bqst(start, op, start.registers().y_range(1, m), check)) {
        RunResult r{id++,
                    extract_subsystem(br.state.state(), br.output),
                    br.state.probability(),
                    Transcript{{}, {}, {}, std::move(br.teleports)},
                    br.state.ledger(),
                    br.state.events().size(),
                    count_locality_violations(br.state.events(), br.state.registers())};
        results.push_back(std::move(r));
    }
    return results;
}

} // namespace remoteop
