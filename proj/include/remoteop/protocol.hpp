#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "remoteop/locc.hpp"
#include "remoteop/restricted.hpp"
#include "remoteop/teleport.hpp"

namespace remoteop {

enum class Stage { Init, Prepared, SentB, AliceDone, SentA, Recovered };

std::string_view to_string(Stage s);

/// Bits Alice spends announcing the restricted set before the run:
/// ceil(log2((2^N)!)) for a permutation label; the HPV set index costs 1.
std::size_t setup_bit_count(std::size_t n);

/// Predicted per-run cost of the hybrid protocol: N + 2M e-bits, 2N + 4M bits.
ResourceLedger predicted_ledger(std::string_view protocol, std::size_t n, std::size_t m);

/// One measurement path through the five-step protocol. Every transition is
/// a const member returning the successor session(s); calling a step out of
/// order throws StageViolation.
///
///   Init --announce, bob_prepare--> Prepared --teleport_to_alice--> SentB
///        --alice_send--> AliceDone --teleport_to_bob--> SentA
///        --bob_recover--> Recovered
class ProtocolSession {
  public:
    /// N + 2M Bell pairs followed by xi on Y_1 ... Y_{N+M}; ledger zeroed.
    static ProtocolSession init_hybrid(std::size_t n, std::size_t m, const StateVector &xi);

    [[nodiscard]] Stage stage() const noexcept { return stage_; }
    [[nodiscard]] std::size_t n() const noexcept { return n_; }
    [[nodiscard]] std::size_t m() const noexcept { return m_; }
    [[nodiscard]] const LoccState &locc() const noexcept { return locc_; }
    [[nodiscard]] const StateVector &state() const noexcept { return locc_.state(); }
    [[nodiscard]] const Registers &registers() const noexcept { return locc_.registers(); }
    [[nodiscard]] const Transcript &transcript() const noexcept { return transcript_; }
    [[nodiscard]] const ResourceLedger &ledger() const noexcept { return locc_.ledger(); }
    [[nodiscard]] double probability() const noexcept { return locc_.probability(); }
    /// Global state after R_N(x) and r(a) but before the swaps.
    [[nodiscard]] const std::optional<StateVector> &pre_swap_state() const noexcept { return pre_swap_; }

    /// Alice tells Bob which restricted set the operation comes from.
    [[nodiscard]] ProtocolSession announce(const RestrictedOp &op) const;

    /// Step 1: CNOT(Y_m -> B_m) and measurement of B_1..B_N; b is sent to Alice.
    [[nodiscard]] std::vector<ProtocolSession> bob_prepare() const;
    [[nodiscard]] ProtocolSession bob_prepare(const Bits &b) const;

    /// Step 2: Y_{N+n} teleported to A_{N+n} through pair N+n.
    [[nodiscard]] std::vector<ProtocolSession> teleport_to_alice() const;
    [[nodiscard]] ProtocolSession teleport_to_alice(const std::vector<Bits> &outcomes) const;

    /// Step 3: sigma_b on A_1..A_N, the operation on A_1..A_{N+M}, H on
    /// A_1..A_N, then measurement of A_1..A_N; a is sent to Bob.
    [[nodiscard]] std::vector<ProtocolSession> alice_send(const RestrictedOp &op) const;
    [[nodiscard]] ProtocolSession alice_send(const RestrictedOp &op, const Bits &a) const;

    /// Step 4: A_{N+n} teleported to B_{N+M+n} through pair N+M+n.
    [[nodiscard]] std::vector<ProtocolSession> teleport_to_bob() const;
    [[nodiscard]] ProtocolSession teleport_to_bob(const std::vector<Bits> &outcomes) const;

    /// Step 5: R_N(x) on Y_1..Y_N (sigma_d for HPV), r(a_m) on Y_m, then
    /// swaps E(Y_{N+n}, B_{N+M+n}).
    [[nodiscard]] ProtocolSession bob_recover() const;

    /// Reduced state on Y_1 ... Y_{N+M}; only valid once Recovered.
    [[nodiscard]] StateVector final_y_state() const;
    [[nodiscard]] RunResult result(std::size_t branch_id) const;

  private:
    ProtocolSession(std::size_t n, std::size_t m, LoccState locc) : n_(n), m_(m), locc_(std::move(locc)) {}

    void expect(Stage s, const char *step) const;
    ProtocolSession prepared(LoccState next, Bits b) const;
    ProtocolSession sent(LoccState next, Bits a) const;
    LoccState alice_rotate(const RestrictedOp &op) const;

    std::size_t n_ = 0;
    std::size_t m_ = 0;
    LoccState locc_;
    Stage stage_ = Stage::Init;
    Transcript transcript_;
    std::optional<Permutation> announced_x_;
    std::optional<Bit> announced_hpv_d_;
    std::optional<StateVector> pre_swap_;
};

/// Every measurement path of the protocol matching op's family, depth-first
/// in increasing outcome order. Branch ids number the paths in that order.
std::vector<RunResult> run_protocol(const RestrictedOp &op, const StateVector &xi);

/// A single path drawn with a seeded generator.
RunResult sample_protocol(const RestrictedOp &op, const StateVector &xi, std::uint64_t seed);

std::vector<RunResult> run_hpv(Bit d, std::array<Complex, 2> u, const StateVector &xi);
std::vector<RunResult> run_wang(const Permutation &x, std::vector<Complex> t, const StateVector &xi);
std::vector<RunResult> run_hybrid(std::size_t n, std::size_t m, const Permutation &x, std::vector<CMatrix> blocks,
                                  const StateVector &xi);

} // namespace remoteop
