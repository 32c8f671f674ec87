#include "remoteop/verify.hpp"

#include <cmath>
#include <limits>

#include "remoteop/error.hpp"

namespace remoteop {

StateVector direct_apply(const RestrictedOp &op, const StateVector &xi) {
    if (xi.num_qubits() != op.num_qubits()) {
        fail(ErrorKind::DimensionMismatch, "state and operation sizes differ");
    }
    const CVector out = build(op) * xi.to_eigen();
    return StateVector::normalized(xi.num_qubits(), std::vector<Complex>(out.data(), out.data() + out.size()));
}

std::vector<XiTerm> expand_xi(const StateVector &xi, std::size_t n, std::size_t m) {
    if (xi.num_qubits() != n + m) {
        fail(ErrorKind::DimensionMismatch, "xi does not have N + M qubits");
    }
    const std::size_t block = std::size_t{1} << m;
    std::vector<XiTerm> terms;
    for (std::size_t level = 0; level < (std::size_t{1} << n); ++level) {
        std::vector<Complex> eta(xi.amplitudes().begin() + static_cast<std::ptrdiff_t>(level * block),
                                 xi.amplitudes().begin() + static_cast<std::ptrdiff_t>((level + 1) * block));
        double norm = 0.0;
        std::size_t pivot = 0;
        for (std::size_t i = 0; i < eta.size(); ++i) {
            norm += std::norm(eta[i]);
            if (std::abs(eta[i]) > std::abs(eta[pivot])) {
                pivot = i;
            }
        }
        norm = std::sqrt(norm);
        if (norm == 0.0) {
            std::vector<Complex> zero(block);
            zero[0] = 1.0;
            terms.push_back({0.0, std::move(zero)});
            continue;
        }
        for (Complex &e : eta) {
            e /= norm;
        }
        terms.push_back({norm, std::move(eta)});
    }
    return terms;
}

Bits permutation_bits(const Permutation &x, std::size_t m) { return index_to_bits(x(m) - 1, x.num_qubits()); }

std::vector<PathOutcomes> all_outcomes(std::size_t n, std::size_t m) {
    std::vector<PathOutcomes> out;
    const std::size_t n_paths = std::size_t{1} << (2 * n + 4 * m);
    for (std::size_t code = 0; code < n_paths; ++code) {
        Bits bits = index_to_bits(code, 2 * n + 4 * m);
        auto it = bits.begin();
        auto take = [&](std::size_t k) {
            Bits b(it, it + static_cast<std::ptrdiff_t>(k));
            it += static_cast<std::ptrdiff_t>(k);
            return b;
        };
        PathOutcomes p;
        p.b = take(n);
        for (std::size_t k = 0; k < m; ++k) {
            p.to_alice.push_back(take(2));
        }
        p.a = take(n);
        for (std::size_t k = 0; k < m; ++k) {
            p.to_bob.push_back(take(2));
        }
        out.push_back(std::move(p));
    }
    return out;
}

bool TraceCheckReport::passed() const {
    for (const Checkpoint &c : checkpoints) {
        if (!c.pass) {
            return false;
        }
    }
    return !checkpoints.empty();
}

double TraceCheckReport::max_deviation() const {
    double worst = 0.0;
    for (const Checkpoint &c : checkpoints) {
        worst = std::max(worst, c.deviation);
    }
    return worst;
}

namespace {

struct Factor {
    QubitList qubits;
    std::vector<Complex> amps;
};

class ClosedForm {
  public:
    explicit ClosedForm(std::size_t num_qubits) : num_qubits_(num_qubits), amps_(std::size_t{1} << num_qubits) {}

    void add_term(Complex coeff, const std::vector<Factor> &factors) {
        if (coeff == Complex{0.0, 0.0}) {
            return;
        }
        for (std::size_t i = 0; i < amps_.size(); ++i) {
            Complex v = coeff;
            for (const Factor &f : factors) {
                std::size_t sub = 0;
                for (Qubit q : f.qubits) {
                    sub = (sub << 1) | ((i >> (num_qubits_ - 1 - q)) & 1U);
                }
                v *= f.amps[sub];
                if (v == Complex{0.0, 0.0}) {
                    break;
                }
            }
            amps_[i] += v;
        }
    }

    [[nodiscard]] StateVector state() const { return StateVector::normalized(num_qubits_, amps_); }

  private:
    std::size_t num_qubits_;
    std::vector<Complex> amps_;
};

Factor basis(Qubit q, Bit bit) { return {{q}, bit ? std::vector<Complex>{0.0, 1.0} : std::vector<Complex>{1.0, 0.0}}; }

Factor bell(const Registers &regs, std::size_t pair) {
    const double s = 1.0 / std::sqrt(2.0);
    return {{regs.a(pair), regs.b(pair)}, {s, 0.0, 0.0, s}};
}

enum class Point { Psi1, Psi2, Psi3, Psi4, Psi5, Final };

StateVector closed_form(Point point, const HybridOp &op, const std::vector<XiTerm> &terms, const Registers &regs,
                        const PathOutcomes &out) {
    const std::size_t n = op.n;
    const std::size_t m = op.m;
    const auto at_least = [&](Point p) { return static_cast<int>(point) >= static_cast<int>(p); };

    ClosedForm form(regs.total_qubits());
    for (std::size_t level = 1; level <= terms.size(); ++level) {
        const Bits k = index_to_bits(level - 1, n);
        const Bits l = index_to_bits(op.x(level) - 1, n);
        std::vector<Factor> factors;

        // Bell pairs not yet consumed.
        const std::size_t first_free = at_least(Point::Psi4) ? n + 2 * m + 1
                                       : at_least(Point::Psi2) ? n + m + 1
                                                               : n + 1;
        for (std::size_t p = first_free; p <= n + 2 * m; ++p) {
            factors.push_back(bell(regs, p));
        }
        for (std::size_t i = 1; i <= n; ++i) {
            factors.push_back(basis(regs.b(i), out.b[i - 1]));
        }
        if (at_least(Point::Psi2)) {
            for (std::size_t j = 1; j <= m; ++j) {
                const std::size_t held_by_b = at_least(Point::Final) ? regs.b(n + m + j) : regs.y(n + j);
                factors.push_back(basis(held_by_b, out.to_alice[j - 1][0]));
                factors.push_back(basis(regs.b(n + j), out.to_alice[j - 1][1]));
            }
        }
        if (at_least(Point::Psi4)) {
            for (std::size_t j = 1; j <= m; ++j) {
                factors.push_back(basis(regs.a(n + j), out.to_bob[j - 1][0]));
                factors.push_back(basis(regs.a(n + m + j), out.to_bob[j - 1][1]));
            }
        }

        Complex coeff = terms[level - 1].y;
        std::vector<Complex> tail = terms[level - 1].eta;
        if (at_least(Point::Psi3)) {
            for (std::size_t i = 1; i <= n; ++i) {
                factors.push_back(basis(regs.a(i), out.a[i - 1]));
            }
            const CVector g_eta = op.blocks[level - 1] *
                                  Eigen::Map<const CVector>(tail.data(), static_cast<Eigen::Index>(tail.size()));
            tail.assign(g_eta.data(), g_eta.data() + g_eta.size());
        } else {
            for (std::size_t i = 1; i <= n; ++i) {
                factors.push_back(basis(regs.a(i), static_cast<Bit>(k[i - 1] ^ out.b[i - 1])));
            }
        }
        if (point == Point::Psi3 || point == Point::Psi4) {
            int parity = 0;
            for (std::size_t i = 0; i < n; ++i) {
                parity ^= out.a[i] & l[i];
            }
            coeff *= parity ? -1.0 : 1.0;
        }
        const Bits &y_bits = at_least(Point::Psi5) ? l : k;
        for (std::size_t i = 1; i <= n; ++i) {
            factors.push_back(basis(regs.y(i), y_bits[i - 1]));
        }

        QubitList tail_qubits;
        if (m > 0) {
            if (!at_least(Point::Psi2)) {
                tail_qubits = regs.y_range(n + 1, m);
            } else if (!at_least(Point::Psi4)) {
                tail_qubits = regs.a_range(n + 1, m);
            } else if (!at_least(Point::Final)) {
                tail_qubits = regs.b_range(n + m + 1, m);
            } else {
                tail_qubits = regs.y_range(n + 1, m);
            }
            factors.push_back({tail_qubits, tail});
        } else {
            coeff *= tail[0];
        }
        form.add_term(coeff, factors);
    }
    return form.state();
}

} // namespace

TraceCheckReport step_trace(const RestrictedOp &op, const StateVector &xi, const PathOutcomes &outcomes,
                                double tolerance) {
    const HybridOp h = op.as_hybrid();
    const std::vector<XiTerm> terms = expand_xi(xi, h.n, h.m);

    TraceCheckReport report;
    report.outcomes = outcomes;
    auto check = [&](const char *label, Point point, const StateVector &engine, const Registers &regs) {
        const StateVector expected = closed_form(point, h, terms, regs, outcomes);
        const double dev = phase_aligned_deviation(expected, engine);
        report.checkpoints.push_back({label, dev, dev < tolerance});
    };

    const ProtocolSession start = ProtocolSession::init_hybrid(h.n, h.m, xi).announce(op);
    const Registers &regs = start.registers();
    const ProtocolSession s1 = start.bob_prepare(outcomes.b);
    check("Psi1", Point::Psi1, s1.state(), regs);
    const ProtocolSession s2 = s1.teleport_to_alice(outcomes.to_alice);
    check("Psi2", Point::Psi2, s2.state(), regs);
    const ProtocolSession s3 = s2.alice_send(op, outcomes.a);
    check("Psi3", Point::Psi3, s3.state(), regs);
    const ProtocolSession s4 = s3.teleport_to_bob(outcomes.to_bob);
    check("Psi4", Point::Psi4, s4.state(), regs);
    const ProtocolSession s5 = s4.bob_recover();
    check("Psi5", Point::Psi5, *s5.pre_swap_state(), regs);
    check("Final", Point::Final, s5.state(), regs);

    // The final Y register must also match the direct application.
    const double direct = phase_aligned_deviation(direct_apply(op, xi), s5.final_y_state());
    Checkpoint &final_point = report.checkpoints.back();
    final_point.deviation = std::max(final_point.deviation, direct);
    final_point.pass = final_point.deviation < tolerance;
    return report;
}

double mixed_state_check(const RestrictedOp &op, const DensityMatrix &rho) {
    if (!op.unitary_mode()) {
        fail(ErrorKind::NonUnitaryMode, "mixed-state recombination requires a unitary operation");
    }
    if (rho.num_qubits() != op.num_qubits()) {
        fail(ErrorKind::DimensionMismatch, "density matrix and operation sizes differ");
    }
    const Eigen::SelfAdjointEigenSolver<CMatrix> eig(rho.entries());
    const auto dim = rho.entries().rows();
    CMatrix recombined = CMatrix::Zero(dim, dim);
    for (Eigen::Index k = 0; k < dim; ++k) {
        const double lambda = eig.eigenvalues()(k);
        if (lambda <= 1e-14) {
            continue;
        }
        const CVector v = eig.eigenvectors().col(k);
        const StateVector xi = StateVector::normalized(rho.num_qubits(), std::vector<Complex>(v.data(), v.data() + v.size()));
        for (const RunResult &r : run_protocol(op, xi)) {
            const CVector out = r.final_y_state.to_eigen();
            recombined += lambda * r.probability * out * out.adjoint();
        }
    }
    QubitList all(rho.num_qubits());
    for (Qubit q = 0; q < all.size(); ++q) {
        all[q] = q;
    }
    const DensityMatrix expected = apply_channel(rho, build(op), all);
    return (recombined - expected.entries()).cwiseAbs().maxCoeff();
}

std::vector<double> branch_fidelities(const RestrictedOp &op, const StateVector &xi,
                                      const std::vector<RunResult> &results) {
    const StateVector target = direct_apply(op, xi);
    std::vector<double> out;
    out.reserve(results.size());
    for (const RunResult &r : results) {
        out.push_back(fidelity(target, r.final_y_state));
    }
    return out;
}

namespace {

Bits path_key(const RunResult &r) {
    Bits key = r.transcript.b;
    for (const TeleportRecord &t : r.transcript.teleports) {
        key.insert(key.end(), t.bell_outcome.begin(), t.bell_outcome.end());
    }
    key.insert(key.end(), r.transcript.a.begin(), r.transcript.a.end());
    return key;
}

} // namespace

double compare_runs(const std::vector<RunResult> &lhs, const std::vector<RunResult> &rhs) {
    constexpr double kMismatch = std::numeric_limits<double>::infinity();
    if (lhs.size() != rhs.size()) {
        return kMismatch;
    }
    double worst = 0.0;
    for (std::size_t i = 0; i < lhs.size(); ++i) {
        const RunResult &l = lhs[i];
        const RunResult &r = rhs[i];
        if (path_key(l) != path_key(r) || !(l.ledger.ebits_consumed == r.ledger.ebits_consumed &&
                                            l.ledger.cbits() == r.ledger.cbits()) ||
            std::abs(l.probability - r.probability) > tol::kState ||
            l.final_y_state.num_qubits() != r.final_y_state.num_qubits()) {
            return kMismatch;
        }
        worst = std::max(worst, phase_aligned_deviation(l.final_y_state, r.final_y_state));
    }
    return worst;
}

} // namespace remoteop
