#pragma once

#include <string>
#include <utility>
#include <vector>

#include "remoteop/state.hpp"

namespace remoteop {

enum class Party { Alice, Bob };

std::string_view to_string(Party p);
inline Party other(Party p) { return p == Party::Alice ? Party::Bob : Party::Alice; }

/// Global register layout. Pairs are interleaved A_1 B_1 A_2 B_2 ... followed
/// by the target qubits Y_1 ... Y_k. A-qubits belong to Alice; B- and
/// Y-qubits belong to Bob. Labels passed to a(), b() and y() are 1-indexed.
class Registers {
  public:
    Registers(std::size_t pairs, std::size_t targets);

    /// N + 2M shared pairs and N + M target qubits.
    static Registers hybrid_layout(std::size_t n, std::size_t m) { return {n + 2 * m, n + m}; }

    [[nodiscard]] std::size_t pairs() const noexcept { return pairs_; }
    [[nodiscard]] std::size_t targets() const noexcept { return targets_; }
    [[nodiscard]] std::size_t total_qubits() const noexcept { return 2 * pairs_ + targets_; }

    [[nodiscard]] Qubit a(std::size_t i) const;
    [[nodiscard]] Qubit b(std::size_t i) const;
    [[nodiscard]] Qubit y(std::size_t j) const;
    [[nodiscard]] QubitList y_range(std::size_t first, std::size_t count) const;
    [[nodiscard]] QubitList a_range(std::size_t first, std::size_t count) const;
    [[nodiscard]] QubitList b_range(std::size_t first, std::size_t count) const;

    [[nodiscard]] Party owner(Qubit q) const;
    /// 1-indexed pair holding both qubits, or 0 when they are not a pair.
    [[nodiscard]] std::size_t pair_of(Qubit q1, Qubit q2) const;
    [[nodiscard]] std::string label(Qubit q) const;

  private:
    std::size_t pairs_;
    std::size_t targets_;
};

struct Message {
    Party sender = Party::Bob;
    Bits bits;
    std::string purpose; // "setup", "b", "a" or "teleport"
};

/// Append-only classical message log.
class ClassicalChannel {
  public:
    void append(Message msg);
    [[nodiscard]] const std::vector<Message> &messages() const noexcept { return log_; }

  private:
    std::vector<Message> log_;
};

struct ResourceLedger {
    std::size_t ebits_consumed = 0;
    std::size_t cbits_bob_to_alice = 0;
    std::size_t cbits_alice_to_bob = 0;
    std::size_t setup_bits = 0;

    [[nodiscard]] std::size_t cbits() const noexcept { return cbits_bob_to_alice + cbits_alice_to_bob; }
    friend bool operator==(const ResourceLedger &, const ResourceLedger &) = default;
};

/// One local action: a gate or a measurement on the listed qubits.
struct LocalEvent {
    Party actor = Party::Bob;
    QubitList qubits;
    std::string what;
};

struct TeleportRecord {
    Party sender = Party::Bob;
    std::size_t pair = 0;   // 1-indexed
    Bits bell_outcome;      // (source bit, sender-half bit)
    int correction = 0;     // Pauli index applied by the receiver (up to phase)
    std::size_t ebits_used = 1;
    std::size_t cbits_used = 2;
};

struct Transcript {
    Bits setup;
    Bits b;
    Bits a;
    std::vector<TeleportRecord> teleports;
};

/// Snapshot of a two-party computation along one measurement path. Every
/// operation goes through apply/measure, which enforce qubit ownership.
class LoccState {
  public:
    LoccState(StateVector state, Registers registers);

    /// Bell pairs on every A_i B_i tensored with `targets` on the Y register.
    static LoccState with_bell_pairs(Registers registers, const StateVector &targets);

    [[nodiscard]] const StateVector &state() const noexcept { return state_; }
    [[nodiscard]] const Registers &registers() const noexcept { return registers_; }
    [[nodiscard]] const ClassicalChannel &channel() const noexcept { return channel_; }
    [[nodiscard]] const ResourceLedger &ledger() const noexcept { return ledger_; }
    [[nodiscard]] const std::vector<LocalEvent> &events() const noexcept { return events_; }
    [[nodiscard]] double probability() const noexcept { return probability_; }
    [[nodiscard]] bool pair_consumed(std::size_t pair) const { return consumed_.at(pair - 1); }
    [[nodiscard]] std::size_t unconsumed_pairs() const;

    /// Throws LocalityViolation if any target is owned by the other party.
    void apply(Party actor, const CMatrix &gate, const QubitList &targets, const std::string &what,
               GateCheck check = GateCheck::Unitary);
    std::vector<std::pair<LoccState, Bits>> measure(Party actor, const QubitList &qubits) const;
    LoccState measure_as(Party actor, const QubitList &qubits, const Bits &outcome) const;
    void send(Party sender, Bits bits, std::string purpose);
    void consume_pair(std::size_t pair);

  private:
    void check_owned(Party actor, const QubitList &qubits) const;

    StateVector state_;
    Registers registers_;
    std::vector<bool> consumed_;
    ClassicalChannel channel_;
    ResourceLedger ledger_;
    std::vector<LocalEvent> events_;
    double probability_ = 1.0;
};

/// Count of recorded actions that touched a qubit the actor does not own,
/// recomputed from the event log.
std::size_t count_locality_violations(const std::vector<LocalEvent> &events, const Registers &registers);

struct RunResult {
    std::size_t branch_id = 0;
    StateVector final_y_state;
    double probability = 0.0;
    Transcript transcript;
    ResourceLedger ledger;
    std::size_t local_events = 0;
    std::size_t locality_violations = 0;
};

} // namespace remoteop
