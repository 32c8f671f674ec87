#include "remoteop/locc.hpp"

#include <cmath>
#include <optional>
#include <string>

#include "remoteop/error.hpp"

namespace remoteop {

std::string_view to_string(Party p) { return p == Party::Alice ? "alice" : "bob"; }

Registers::Registers(std::size_t pairs, std::size_t targets) : pairs_(pairs), targets_(targets) {
    if (total_qubits() == 0) {
        fail(ErrorKind::DimensionMismatch, "empty register layout");
    }
}

Qubit Registers::a(std::size_t i) const {
    if (i < 1 || i > pairs_) {
        fail(ErrorKind::TargetOutOfRange, "no qubit A_" + std::to_string(i));
    }
    return 2 * (i - 1);
}

Qubit Registers::b(std::size_t i) const {
    if (i < 1 || i > pairs_) {
        fail(ErrorKind::TargetOutOfRange, "no qubit B_" + std::to_string(i));
    }
    return 2 * (i - 1) + 1;
}

Qubit Registers::y(std::size_t j) const {
    if (j < 1 || j > targets_) {
        fail(ErrorKind::TargetOutOfRange, "no qubit Y_" + std::to_string(j));
    }
    return 2 * pairs_ + (j - 1);
}

QubitList Registers::y_range(std::size_t first, std::size_t count) const {
    QubitList out;
    for (std::size_t j = first; j < first + count; ++j) {
        out.push_back(y(j));
    }
    return out;
}

QubitList Registers::a_range(std::size_t first, std::size_t count) const {
    QubitList out;
    for (std::size_t i = first; i < first + count; ++i) {
        out.push_back(a(i));
    }
    return out;
}

QubitList Registers::b_range(std::size_t first, std::size_t count) const {
    QubitList out;
    for (std::size_t i = first; i < first + count; ++i) {
        out.push_back(b(i));
    }
    return out;
}

Party Registers::owner(Qubit q) const {
    if (q >= total_qubits()) {
        fail(ErrorKind::TargetOutOfRange, "qubit " + std::to_string(q) + " outside layout");
    }
    return (q < 2 * pairs_ && q % 2 == 0) ? Party::Alice : Party::Bob;
}

std::size_t Registers::pair_of(Qubit q1, Qubit q2) const {
    if (q1 >= 2 * pairs_ || q2 >= 2 * pairs_ || q1 / 2 != q2 / 2 || q1 == q2) {
        return 0;
    }
    return q1 / 2 + 1;
}

std::string Registers::label(Qubit q) const {
    if (q < 2 * pairs_) {
        return (q % 2 == 0 ? "A" : "B") + std::to_string(q / 2 + 1);
    }
    return "Y" + std::to_string(q - 2 * pairs_ + 1);
}

void ClassicalChannel::append(Message msg) {
    for (Bit b : msg.bits) {
        if (b > 1) {
            fail(ErrorKind::DimensionMismatch, "classical message carries a non-bit value");
        }
    }
    log_.push_back(std::move(msg));
}

LoccState::LoccState(StateVector state, Registers registers)
    : state_(std::move(state)), registers_(registers), consumed_(registers.pairs(), false) {
    if (state_.num_qubits() != registers_.total_qubits()) {
        fail(ErrorKind::DimensionMismatch, "state size does not match the register layout");
    }
}

LoccState LoccState::with_bell_pairs(Registers registers, const StateVector &targets) {
    if (targets.num_qubits() != registers.targets()) {
        fail(ErrorKind::DimensionMismatch, "target state has " + std::to_string(targets.num_qubits()) +
                                               " qubits, layout expects " + std::to_string(registers.targets()));
    }
    const double s = 1.0 / std::sqrt(2.0);
    const StateVector bell(2, {s, 0.0, 0.0, s});
    std::optional<StateVector> global;
    for (std::size_t i = 0; i < registers.pairs(); ++i) {
        global = global ? tensor(*global, bell) : bell;
    }
    return {global ? tensor(*global, targets) : targets, registers};
}

std::size_t LoccState::unconsumed_pairs() const {
    std::size_t free = 0;
    for (bool c : consumed_) {
        free += c ? 0 : 1;
    }
    return free;
}

void LoccState::check_owned(Party actor, const QubitList &qubits) const {
    for (Qubit q : qubits) {
        if (registers_.owner(q) != actor) {
            fail(ErrorKind::LocalityViolation,
                 std::string(to_string(actor)) + " cannot act on " + registers_.label(q));
        }
    }
}

void LoccState::apply(Party actor, const CMatrix &gate, const QubitList &targets, const std::string &what,
                      GateCheck check) {
    check_owned(actor, targets);
    state_ = apply_gate(state_, gate, targets, check);
    events_.push_back({actor, targets, what});
}

std::vector<std::pair<LoccState, Bits>> LoccState::measure(Party actor, const QubitList &qubits) const {
    check_owned(actor, qubits);
    std::vector<std::pair<LoccState, Bits>> out;
    for (Branch &br : remoteop::measure(state_, qubits)) {
        LoccState next = *this;
        next.state_ = std::move(br.post_state);
        next.probability_ *= br.probability;
        next.events_.push_back({actor, qubits, "measure"});
        out.emplace_back(std::move(next), std::move(br.outcome_bits));
    }
    return out;
}

LoccState LoccState::measure_as(Party actor, const QubitList &qubits, const Bits &outcome) const {
    check_owned(actor, qubits);
    Branch br = project_outcome(state_, qubits, outcome);
    LoccState next = *this;
    next.state_ = std::move(br.post_state);
    next.probability_ *= br.probability;
    next.events_.push_back({actor, qubits, "measure"});
    return next;
}

void LoccState::send(Party sender, Bits bits, std::string purpose) {
    const std::size_t count = bits.size();
    channel_.append({sender, std::move(bits), purpose});
    if (purpose == "setup") {
        ledger_.setup_bits += count;
    } else if (sender == Party::Bob) {
        ledger_.cbits_bob_to_alice += count;
    } else {
        ledger_.cbits_alice_to_bob += count;
    }
}

void LoccState::consume_pair(std::size_t pair) {
    if (pair < 1 || pair > consumed_.size()) {
        fail(ErrorKind::InsufficientEntanglement, "no shared pair " + std::to_string(pair));
    }
    if (consumed_[pair - 1]) {
        fail(ErrorKind::EntanglementAlreadyConsumed, "pair " + std::to_string(pair) + " was already used");
    }
    consumed_[pair - 1] = true;
    ++ledger_.ebits_consumed;
}

std::size_t count_locality_violations(const std::vector<LocalEvent> &events, const Registers &registers) {
    std::size_t violations = 0;
    for (const LocalEvent &e : events) {
        for (Qubit q : e.qubits) {
            // A-qubits sit at even positions below 2 * pairs.
            const bool alice_owned = q < 2 * registers.pairs() && q % 2 == 0;
            if (alice_owned != (e.actor == Party::Alice)) {
                ++violations;
            }
        }
    }
    return violations;
}

} // namespace remoteop
