#include "remoteop/protocol.hpp"

#include <cmath>
#include <random>
#include <string>

#include "remoteop/error.hpp"

namespace remoteop {

std::string_view to_string(Stage s) {
    switch (s) {
    case Stage::Init: return "Init";
    case Stage::Prepared: return "Prepared";
    case Stage::SentB: return "SentB";
    case Stage::AliceDone: return "AliceDone";
    case Stage::SentA: return "SentA";
    case Stage::Recovered: return "Recovered";
    }
    return "?";
}

std::size_t setup_bit_count(std::size_t n) {
    // log2((2^n)!) summed term by term; (2^n)! is a power of two only for n <= 1.
    double bits = 0.0;
    for (std::size_t k = 2; k <= (std::size_t{1} << n); ++k) {
        bits += std::log2(static_cast<double>(k));
    }
    return static_cast<std::size_t>(std::ceil(bits - 1e-9));
}

ResourceLedger predicted_ledger(std::string_view protocol, std::size_t n, std::size_t m) {
    if (protocol == "hpv") {
        if (n != 1 || m != 0) {
            fail(ErrorKind::ConfigError, "hpv is defined for N = 1, M = 0");
        }
        return {1, 1, 1, 1};
    }
    if (protocol == "wang") {
        if (m != 0) {
            fail(ErrorKind::ConfigError, "wang is defined for M = 0");
        }
        return {n, n, n, setup_bit_count(n)};
    }
    if (protocol == "hybrid") {
        return {n + 2 * m, n + 2 * m, n + 2 * m, setup_bit_count(n)};
    }
    if (protocol == "bqst") {
        const std::size_t q = n + m;
        return {2 * q, 2 * q, 2 * q, 0};
    }
    fail(ErrorKind::ConfigError, "unknown protocol '" + std::string(protocol) + "'");
}

ProtocolSession ProtocolSession::init_hybrid(std::size_t n, std::size_t m, const StateVector &xi) {
    if (xi.num_qubits() != n + m) {
        fail(ErrorKind::DimensionMismatch, "xi has " + std::to_string(xi.num_qubits()) + " qubits, expected N + M = " +
                                               std::to_string(n + m));
    }
    return {n, m, LoccState::with_bell_pairs(Registers::hybrid_layout(n, m), xi)};
}

void ProtocolSession::expect(Stage s, const char *step) const {
    if (stage_ != s) {
        fail(ErrorKind::StageViolation, std::string(step) + " requires stage " + std::string(to_string(s)) +
                                            ", session is at " + std::string(to_string(stage_)));
    }
}

ProtocolSession ProtocolSession::announce(const RestrictedOp &op) const {
    expect(Stage::Init, "announce");
    if (announced_x_) {
        fail(ErrorKind::StageViolation, "restricted set already announced");
    }
    if (op.n() != n_ || op.m() != m_) {
        fail(ErrorKind::DimensionMismatch, "operation split does not match the session");
    }
    ProtocolSession next = *this;
    Bits bits;
    if (const auto *hpv = std::get_if<HpvOp>(&op.variant())) {
        next.announced_hpv_d_ = hpv->d;
        bits = {hpv->d};
    } else {
        bits = index_to_bits(static_cast<std::size_t>(op.permutation().label() - 1), setup_bit_count(n_));
    }
    next.announced_x_ = op.permutation();
    next.transcript_.setup = bits;
    next.locc_.send(Party::Alice, std::move(bits), "setup");
    return next;
}

ProtocolSession ProtocolSession::prepared(LoccState next_locc, Bits b) const {
    ProtocolSession next = *this;
    next.locc_ = std::move(next_locc);
    if (!b.empty()) {
        next.locc_.send(Party::Bob, b, "b");
    }
    next.transcript_.b = std::move(b);
    next.stage_ = Stage::Prepared;
    return next;
}

std::vector<ProtocolSession> ProtocolSession::bob_prepare() const {
    expect(Stage::Init, "bob_prepare");
    if (!announced_x_) {
        fail(ErrorKind::StageViolation, "bob_prepare before the restricted set was announced");
    }
    LoccState s = locc_;
    const Registers &regs = s.registers();
    for (std::size_t i = 1; i <= n_; ++i) {
        s.consume_pair(i);
        s.apply(Party::Bob, cnot(), {regs.y(i), regs.b(i)}, "prepare-cnot");
    }
    std::vector<ProtocolSession> out;
    if (n_ == 0) {
        out.push_back(prepared(std::move(s), {}));
        return out;
    }
    for (auto &[next, bits] : s.measure(Party::Bob, regs.b_range(1, n_))) {
        out.push_back(prepared(std::move(next), std::move(bits)));
    }
    return out;
}

ProtocolSession ProtocolSession::bob_prepare(const Bits &b) const {
    expect(Stage::Init, "bob_prepare");
    if (!announced_x_) {
        fail(ErrorKind::StageViolation, "bob_prepare before the restricted set was announced");
    }
    if (b.size() != n_) {
        fail(ErrorKind::DimensionMismatch, "expected " + std::to_string(n_) + " preparation bits");
    }
    LoccState s = locc_;
    const Registers &regs = s.registers();
    for (std::size_t i = 1; i <= n_; ++i) {
        s.consume_pair(i);
        s.apply(Party::Bob, cnot(), {regs.y(i), regs.b(i)}, "prepare-cnot");
    }
    if (n_ == 0) {
        return prepared(std::move(s), {});
    }
    return prepared(s.measure_as(Party::Bob, regs.b_range(1, n_), b), b);
}

std::vector<ProtocolSession> ProtocolSession::teleport_to_alice() const {
    expect(Stage::Prepared, "teleport_to_alice");
    std::vector<ProtocolSession> frontier{*this};
    for (std::size_t k = 1; k <= m_; ++k) {
        std::vector<ProtocolSession> next;
        for (const ProtocolSession &s : frontier) {
            const Registers &regs = s.registers();
            for (TeleportBranch &tb : teleport(s.locc_, regs.y(n_ + k), regs.b(n_ + k), regs.a(n_ + k))) {
                ProtocolSession child = s;
                child.locc_ = std::move(tb.state);
                child.transcript_.teleports.push_back(tb.record);
                next.push_back(std::move(child));
            }
        }
        frontier = std::move(next);
    }
    for (ProtocolSession &s : frontier) {
        s.stage_ = Stage::SentB;
    }
    return frontier;
}

ProtocolSession ProtocolSession::teleport_to_alice(const std::vector<Bits> &outcomes) const {
    expect(Stage::Prepared, "teleport_to_alice");
    if (outcomes.size() != m_) {
        fail(ErrorKind::DimensionMismatch, "expected " + std::to_string(m_) + " teleport outcomes");
    }
    ProtocolSession next = *this;
    const Registers regs = registers();
    for (std::size_t k = 1; k <= m_; ++k) {
        TeleportBranch tb = teleport(next.locc_, regs.y(n_ + k), regs.b(n_ + k), regs.a(n_ + k), outcomes[k - 1]);
        next.locc_ = std::move(tb.state);
        next.transcript_.teleports.push_back(tb.record);
    }
    next.stage_ = Stage::SentB;
    return next;
}

LoccState ProtocolSession::alice_rotate(const RestrictedOp &op) const {
    expect(Stage::SentB, "alice_send");
    if (op.n() != n_ || op.m() != m_) {
        fail(ErrorKind::DimensionMismatch, "operation split does not match the session");
    }
    LoccState s = locc_;
    const Registers &regs = s.registers();
    for (std::size_t i = 1; i <= n_; ++i) {
        if (transcript_.b[i - 1]) {
            s.apply(Party::Alice, sigma(1), {regs.a(i)}, "send-sigma-b");
        }
    }
    s.apply(Party::Alice, build(op), regs.a_range(1, n_ + m_), "send-op",
            op.unitary_mode() ? GateCheck::Unitary : GateCheck::None);
    for (std::size_t i = 1; i <= n_; ++i) {
        s.apply(Party::Alice, hadamard(), {regs.a(i)}, "send-h");
    }
    return s;
}

ProtocolSession ProtocolSession::sent(LoccState next_locc, Bits a) const {
    ProtocolSession next = *this;
    next.locc_ = std::move(next_locc);
    if (!a.empty()) {
        next.locc_.send(Party::Alice, a, "a");
    }
    next.transcript_.a = std::move(a);
    next.stage_ = Stage::AliceDone;
    return next;
}

std::vector<ProtocolSession> ProtocolSession::alice_send(const RestrictedOp &op) const {
    LoccState s = alice_rotate(op);
    std::vector<ProtocolSession> out;
    if (n_ == 0) {
        out.push_back(sent(std::move(s), {}));
        return out;
    }
    for (auto &[next, bits] : s.measure(Party::Alice, s.registers().a_range(1, n_))) {
        out.push_back(sent(std::move(next), std::move(bits)));
    }
    return out;
}

ProtocolSession ProtocolSession::alice_send(const RestrictedOp &op, const Bits &a) const {
    LoccState s = alice_rotate(op);
    if (a.size() != n_) {
        fail(ErrorKind::DimensionMismatch, "expected " + std::to_string(n_) + " sending bits");
    }
    if (n_ == 0) {
        return sent(std::move(s), {});
    }
    return sent(s.measure_as(Party::Alice, s.registers().a_range(1, n_), a), a);
}

std::vector<ProtocolSession> ProtocolSession::teleport_to_bob() const {
    expect(Stage::AliceDone, "teleport_to_bob");
    std::vector<ProtocolSession> frontier{*this};
    for (std::size_t k = 1; k <= m_; ++k) {
        std::vector<ProtocolSession> next;
        for (const ProtocolSession &s : frontier) {
            const Registers &regs = s.registers();
            for (TeleportBranch &tb : teleport(s.locc_, regs.a(n_ + k), regs.a(n_ + m_ + k), regs.b(n_ + m_ + k))) {
                ProtocolSession child = s;
                child.locc_ = std::move(tb.state);
                child.transcript_.teleports.push_back(tb.record);
                next.push_back(std::move(child));
            }
        }
        frontier = std::move(next);
    }
    for (ProtocolSession &s : frontier) {
        s.stage_ = Stage::SentA;
    }
    return frontier;
}

ProtocolSession ProtocolSession::teleport_to_bob(const std::vector<Bits> &outcomes) const {
    expect(Stage::AliceDone, "teleport_to_bob");
    if (outcomes.size() != m_) {
        fail(ErrorKind::DimensionMismatch, "expected " + std::to_string(m_) + " teleport outcomes");
    }
    ProtocolSession next = *this;
    const Registers regs = registers();
    for (std::size_t k = 1; k <= m_; ++k) {
        TeleportBranch tb =
            teleport(next.locc_, regs.a(n_ + k), regs.a(n_ + m_ + k), regs.b(n_ + m_ + k), outcomes[k - 1]);
        next.locc_ = std::move(tb.state);
        next.transcript_.teleports.push_back(tb.record);
    }
    next.stage_ = Stage::SentA;
    return next;
}

ProtocolSession ProtocolSession::bob_recover() const {
    expect(Stage::SentA, "bob_recover");
    if (!announced_x_) {
        fail(ErrorKind::StageViolation, "bob_recover without an announced restricted set");
    }
    ProtocolSession next = *this;
    LoccState &s = next.locc_;
    const Registers regs = registers();
    if (announced_hpv_d_) {
        if (*announced_hpv_d_) {
            s.apply(Party::Bob, sigma(1), {regs.y(1)}, "recover-sigma-d");
        }
    } else if (n_ > 0 && !announced_x_->is_identity()) {
        s.apply(Party::Bob, r_n(*announced_x_), regs.y_range(1, n_), "recover-rn");
    }
    for (std::size_t i = 1; i <= n_; ++i) {
        if (transcript_.a[i - 1]) {
            s.apply(Party::Bob, r_gate(1), {regs.y(i)}, "recover-r");
        }
    }
    next.pre_swap_ = s.state();
    for (std::size_t k = 1; k <= m_; ++k) {
        s.apply(Party::Bob, swap_e(), {regs.y(n_ + k), regs.b(n_ + m_ + k)}, "recover-swap");
    }
    next.stage_ = Stage::Recovered;
    return next;
}

StateVector ProtocolSession::final_y_state() const {
    expect(Stage::Recovered, "final_y_state");
    return extract_subsystem(state(), registers().y_range(1, n_ + m_));
}

RunResult ProtocolSession::result(std::size_t branch_id) const {
    return {branch_id,
            final_y_state(),
            probability(),
            transcript_,
            ledger(),
            locc_.events().size(),
            count_locality_violations(locc_.events(), registers())};
}

namespace {

template <class Visit>
void for_each_path(const RestrictedOp &op, const StateVector &xi, Visit &&visit) {
    const ProtocolSession start = ProtocolSession::init_hybrid(op.n(), op.m(), xi).announce(op);
    for (const ProtocolSession &p : start.bob_prepare()) {
        for (const ProtocolSession &t : p.teleport_to_alice()) {
            for (const ProtocolSession &s : t.alice_send(op)) {
                for (const ProtocolSession &r : s.teleport_to_bob()) {
                    visit(r.bob_recover());
                }
            }
        }
    }
}

template <class Step>
ProtocolSession pick(const ProtocolSession &parent, Step &&step, std::mt19937_64 &rng) {
    std::vector<ProtocolSession> children = step(parent);
    const double u = std::uniform_real_distribution<double>(0.0, parent.probability())(rng);
    double cumulative = 0.0;
    for (ProtocolSession &c : children) {
        cumulative += c.probability();
        if (u < cumulative) {
            return std::move(c);
        }
    }
    return std::move(children.back());
}

} // namespace

std::vector<RunResult> run_protocol(const RestrictedOp &op, const StateVector &xi) {
    std::vector<RunResult> results;
    for_each_path(op, xi, [&](const ProtocolSession &done) { results.push_back(done.result(results.size())); });
    return results;
}

RunResult sample_protocol(const RestrictedOp &op, const StateVector &xi, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    ProtocolSession s = ProtocolSession::init_hybrid(op.n(), op.m(), xi).announce(op);
    s = pick(s, [](const ProtocolSession &p) { return p.bob_prepare(); }, rng);
    s = pick(s, [](const ProtocolSession &p) { return p.teleport_to_alice(); }, rng);
    s = pick(s, [&](const ProtocolSession &p) { return p.alice_send(op); }, rng);
    s = pick(s, [](const ProtocolSession &p) { return p.teleport_to_bob(); }, rng);
    return s.bob_recover().result(0);
}

std::vector<RunResult> run_hpv(Bit d, std::array<Complex, 2> u, const StateVector &xi) {
    return run_protocol(RestrictedOp::hpv(d, u), xi);
}

std::vector<RunResult> run_wang(const Permutation &x, std::vector<Complex> t, const StateVector &xi) {
    return run_protocol(RestrictedOp::wang(x, std::move(t)), xi);
}

std::vector<RunResult> run_hybrid(std::size_t n, std::size_t m, const Permutation &x, std::vector<CMatrix> blocks,
                                  const StateVector &xi) {
    return run_protocol(RestrictedOp::hybrid(n, m, x, std::move(blocks)), xi);
}

} // namespace remoteop
