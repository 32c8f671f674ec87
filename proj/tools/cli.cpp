#include "cli.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "remoteop/error.hpp"
#include "remoteop/json_io.hpp"
#include "remoteop/random.hpp"
#include "remoteop/verify.hpp"

namespace remoteop::cli {

namespace {

using io::Json;

struct Options {
    std::string protocol = "hybrid";
    std::size_t n = 0;
    std::size_t m = 0;
    int d = 0;
    std::string perm;
    std::string blocks_file;
    std::string op_file;
    std::string op_json;
    std::string state_file;
    std::size_t basis = 0;
    std::vector<std::uint64_t> seeds;
    std::uint64_t op_seed = 0;
    std::uint64_t state_seed = 0;
    std::uint64_t sample_seed = 0;
    std::size_t sample = 0;
    std::string out;
    std::string csv;
};

struct Flags {
    CLI::Option *n = nullptr;
    CLI::Option *m = nullptr;
    CLI::Option *d = nullptr;
    CLI::Option *perm = nullptr;
    CLI::Option *blocks_file = nullptr;
    CLI::Option *op_file = nullptr;
    CLI::Option *op_json = nullptr;
    CLI::Option *random_op = nullptr;
    CLI::Option *state_file = nullptr;
    CLI::Option *random_state = nullptr;
    CLI::Option *basis = nullptr;
    CLI::Option *seed = nullptr;
    CLI::Option *op_seed = nullptr;
    CLI::Option *state_seed = nullptr;
    CLI::Option *sample_seed = nullptr;
    CLI::Option *sample = nullptr;
};

// The operation and input state a run or verify command works on.
struct Problem {
    std::string protocol;
    std::size_t n = 0;
    std::size_t m = 0;
    std::optional<RestrictedOp> op; // every protocol except bqst
    CMatrix matrix;                 // bqst
    bool unitary = true;
    StateVector xi = StateVector::basis(1, 0);
    std::optional<std::uint64_t> sample_seed;
};

void add_common(CLI::App *sub, Options &o, Flags &f) {
    sub->add_option("--protocol", o.protocol, "hpv | wang | hybrid | bqst")
        ->check(CLI::IsMember({"hpv", "wang", "hybrid", "bqst"}));
    f.n = sub->add_option("--n", o.n, "qubits handled by the permutation part");
    f.m = sub->add_option("--m", o.m, "qubits handled by the block part");
    f.d = sub->add_option("--d", o.d, "HPV set: 0 diagonal, 1 antidiagonal")->check(CLI::Range(0, 1));
    f.perm = sub->add_option("--perm", o.perm, "1-indexed permutation, e.g. 3,1,4,2");
    f.blocks_file = sub->add_option("--blocks-file", o.blocks_file, "JSON array of block matrices");
    f.op_file = sub->add_option("--op-file", o.op_file, "operation JSON file");
    f.op_json = sub->add_option("--op-json", o.op_json, "operation JSON text");
    f.random_op = sub->add_flag("--random-op", "draw a random operation");
    f.state_file = sub->add_option("--state-file", o.state_file, "input state JSON file");
    f.random_state = sub->add_flag("--random-state", "draw a random input state");
    f.basis = sub->add_option("--basis", o.basis, "computational basis input index");
    f.seed = sub->add_option("--seed", o.seeds, "seed for the preceding random source");
    f.op_seed = sub->add_option("--op-seed", o.op_seed);
    f.state_seed = sub->add_option("--state-seed", o.state_seed);
    f.sample_seed = sub->add_option("--sample-seed", o.sample_seed);
    auto *enumerate = sub->add_flag("--enumerate", "enumerate every branch (default)");
    f.sample = sub->add_option("--sample", o.sample, "draw K branches instead")->check(CLI::PositiveNumber);
    enumerate->excludes(f.sample);
    sub->add_option("--out", o.out, "write the JSON report here instead of stdout");
}

double env_tolerance() {
    const char *raw = std::getenv("REMOTEOP_TOL");
    if (raw == nullptr || *raw == '\0') {
        return 1e-9;
    }
    try {
        std::size_t used = 0;
        const double v = std::stod(raw, &used);
        if (used == std::string(raw).size() && v > 0.0 && std::isfinite(v)) {
            return v;
        }
    } catch (const std::exception &) {
    }
    fail(ErrorKind::ConfigError, std::string("REMOTEOP_TOL is not a positive number: ") + raw);
}

struct Seeds {
    std::optional<std::uint64_t> op;
    std::optional<std::uint64_t> state;
    std::optional<std::uint64_t> sample;
};

// Each --seed binds to the closest random source flag before it; a seed
// with no preceding source goes to every source still unseeded.
Seeds bind_seeds(const CLI::App &sub, const Options &o, const Flags &f) {
    Seeds s;
    auto assign = [](std::optional<std::uint64_t> &slot, std::uint64_t v, const char *what) {
        if (slot) {
            fail(ErrorKind::ConfigError, std::string("more than one seed for ") + what);
        }
        slot = v;
    };
    std::vector<std::uint64_t> unbound;
    const CLI::Option *last = nullptr;
    std::size_t next = 0;
    for (const CLI::Option *opt : sub.parse_order()) {
        if (opt == f.random_op || opt == f.random_state || opt == f.sample) {
            last = opt;
        } else if (opt == f.seed && next < o.seeds.size()) {
            const std::uint64_t v = o.seeds[next++];
            if (last == f.random_op) {
                assign(s.op, v, "the operation");
            } else if (last == f.random_state) {
                assign(s.state, v, "the state");
            } else if (last == f.sample) {
                assign(s.sample, v, "sampling");
            } else {
                unbound.push_back(v);
            }
        }
    }
    if (f.op_seed->count() > 0) {
        assign(s.op, o.op_seed, "the operation");
    }
    if (f.state_seed->count() > 0) {
        assign(s.state, o.state_seed, "the state");
    }
    if (f.sample_seed->count() > 0) {
        assign(s.sample, o.sample_seed, "sampling");
    }
    for (std::uint64_t v : unbound) {
        if (!s.op) {
            s.op = v;
        }
        if (!s.state) {
            s.state = v;
        }
        if (!s.sample) {
            s.sample = v;
        }
    }
    return s;
}

Permutation parse_perm(const std::string &text) {
    std::vector<std::size_t> values;
    std::string token;
    std::istringstream in(text);
    while (std::getline(in, token, ',')) {
        std::istringstream words(token);
        std::string word;
        while (words >> word) {
            std::size_t used = 0;
            unsigned long v = 0;
            try {
                v = std::stoul(word, &used);
            } catch (const std::exception &) {
                used = 0;
            }
            if (used != word.size() || word.empty()) {
                fail(ErrorKind::ConfigError, "--perm entry '" + word + "' is not a positive integer");
            }
            values.push_back(v);
        }
    }
    try {
        return Permutation(values);
    } catch (const Error &e) {
        fail(ErrorKind::ConfigError, std::string("--perm: ") + e.what());
    }
}

void require_seed(const std::optional<std::uint64_t> &seed, const char *what) {
    if (!seed) {
        fail(ErrorKind::ConfigError, std::string(what) + " needs a seed (--seed after the flag or a dedicated seed option)");
    }
}

RestrictedOp as_protocol(const std::string &protocol, const RestrictedOp &op) {
    if (protocol == op.name()) {
        return op;
    }
    if (protocol == "hybrid") {
        const HybridOp h = op.as_hybrid();
        return RestrictedOp::hybrid(h.n, h.m, h.x, h.blocks, op.unitary_mode());
    }
    fail(ErrorKind::ConfigError, "operation is a " + std::string(op.name()) + " op but --protocol is " + protocol);
}

Problem resolve(const Options &o, const Flags &f, const Seeds &seeds) {
    Problem p;
    p.protocol = o.protocol;
    const std::size_t sources = f.op_file->count() + f.op_json->count() + f.random_op->count() +
                                f.blocks_file->count();
    if (sources != 1) {
        fail(ErrorKind::ConfigError, "give exactly one of --op-file, --op-json, --random-op, --blocks-file");
    }
    const std::size_t states = f.state_file->count() + f.random_state->count() + f.basis->count();
    if (states != 1) {
        fail(ErrorKind::ConfigError, "give exactly one of --state-file, --random-state, --basis");
    }
    if (f.d->count() > 0 && o.protocol != "hpv") {
        fail(ErrorKind::ConfigError, "--d only applies to --protocol hpv");
    }

    std::optional<std::size_t> n;
    std::optional<std::size_t> m;
    if (f.n->count() > 0) {
        n = o.n;
    }
    if (f.m->count() > 0) {
        m = o.m;
    }
    if (o.protocol == "hpv") {
        if ((n && *n != 1) || (m && *m != 0)) {
            fail(ErrorKind::ConfigError, "hpv is defined for N = 1, M = 0");
        }
        n = 1;
        m = 0;
    } else if (o.protocol == "wang") {
        if (m && *m != 0) {
            fail(ErrorKind::ConfigError, "wang is defined for M = 0");
        }
        m = 0;
    } else if (o.protocol == "bqst" && !n) {
        n = 0;
    }
    std::optional<Permutation> x;
    if (f.perm->count() > 0) {
        x = parse_perm(o.perm);
        if (n && *n != x->num_qubits()) {
            fail(ErrorKind::ConfigError, "--perm acts on " + std::to_string(x->num_qubits()) + " qubits, --n is " +
                                             std::to_string(*n));
        }
        n = x->num_qubits();
    }

    if (f.op_file->count() > 0 || f.op_json->count() > 0) {
        const Json j = f.op_file->count() > 0 ? io::read_json_file(o.op_file) : [&] {
            try {
                return Json::parse(o.op_json);
            } catch (const Json::exception &e) {
                fail(ErrorKind::ParseError, std::string("--op-json: ") + e.what());
            }
        }();
        if (o.protocol == "bqst") {
            p.matrix = j.contains("variant") ? build(io::restricted_op_from_json(j)) : io::matrix_from_json(j);
            p.unitary = is_unitary(p.matrix);
        } else {
            p.op = as_protocol(o.protocol, io::restricted_op_from_json(j));
            if (x && !(p.op->permutation() == *x)) {
                fail(ErrorKind::ConfigError, "--perm disagrees with the operation file");
            }
        }
    } else if (f.blocks_file->count() > 0) {
        if (o.protocol == "hpv" || o.protocol == "bqst") {
            fail(ErrorKind::ConfigError, "--blocks-file applies to wang and hybrid; use --op-file");
        }
        const Json j = io::read_json_file(o.blocks_file);
        const Json &list = j.is_object() && j.contains("blocks") ? j.at("blocks") : j;
        if (!list.is_array()) {
            fail(ErrorKind::ParseError, "blocks file must hold an array of matrices");
        }
        std::vector<CMatrix> blocks;
        for (const Json &b : list) {
            blocks.push_back(io::matrix_from_json(b));
        }
        if (!x) {
            if (n && *n != 0) {
                fail(ErrorKind::ConfigError, "--blocks-file needs --perm");
            }
            x = Permutation::identity(0);
        }
        const bool unitary = !(j.is_object() && j.value("unitary_mode", true) == false);
        if (o.protocol == "wang") {
            std::vector<Complex> t;
            for (const CMatrix &b : blocks) {
                if (b.rows() != 1) {
                    fail(ErrorKind::ConfigError, "wang blocks must be 1x1");
                }
                t.push_back(b(0, 0));
            }
            p.op = RestrictedOp::wang(*x, t, unitary);
        } else {
            const std::size_t dim = blocks.empty() ? 1 : static_cast<std::size_t>(blocks.front().rows());
            std::size_t block_qubits = 0;
            while ((std::size_t{1} << block_qubits) < dim) {
                ++block_qubits;
            }
            p.op = RestrictedOp::hybrid(x->num_qubits(), block_qubits, *x, blocks, unitary);
        }
    } else {
        require_seed(seeds.op, "--random-op");
        random::Engine rng(*seeds.op);
        if (o.protocol == "hpv") {
            if (f.d->count() == 0) {
                fail(ErrorKind::ConfigError, "--random-op with hpv needs --d");
            }
            p.op = random::hpv_op(static_cast<Bit>(o.d), rng);
        } else if (o.protocol == "wang") {
            if (!n) {
                fail(ErrorKind::ConfigError, "--random-op with wang needs --n or --perm");
            }
            p.op = x ? random::wang_op(*x, rng) : random::wang_op(*n, rng);
        } else if (o.protocol == "hybrid") {
            if (!n || !m) {
                fail(ErrorKind::ConfigError, "--random-op with hybrid needs --n and --m");
            }
            p.op = random::hybrid_op(*n, *m, rng);
            if (x) {
                p.op = RestrictedOp::hybrid(*n, *m, *x, p.op->as_hybrid().blocks);
            }
        } else {
            if (!m) {
                fail(ErrorKind::ConfigError, "--random-op with bqst needs --m");
            }
            p.matrix = random::unitary(std::size_t{1} << (*n + *m), rng);
        }
    }

    if (p.op) {
        if ((n && *n != p.op->n()) || (m && *m != p.op->m())) {
            fail(ErrorKind::ConfigError, "operation has N = " + std::to_string(p.op->n()) + ", M = " +
                                             std::to_string(p.op->m()) + ", which disagrees with --n/--m");
        }
        p.n = p.op->n();
        p.m = p.op->m();
        p.unitary = p.op->unitary_mode();
    } else {
        std::size_t q = 0;
        while ((Eigen::Index{1} << q) < p.matrix.rows()) {
            ++q;
        }
        if ((Eigen::Index{1} << q) != p.matrix.rows() || p.matrix.rows() != p.matrix.cols()) {
            fail(ErrorKind::ConfigError, "bqst operation must be square with a power-of-two dimension");
        }
        if (m && *n + *m != q) {
            fail(ErrorKind::ConfigError, "operation acts on " + std::to_string(q) + " qubits, --n + --m is " +
                                             std::to_string(*n + *m));
        }
        p.n = *n;
        p.m = q - *n;
    }
    if (p.n + p.m == 0) {
        fail(ErrorKind::ConfigError, "N + M must be at least 1");
    }

    const std::size_t q = p.n + p.m;
    if (f.state_file->count() > 0) {
        p.xi = io::state_from_json(io::read_json_file(o.state_file));
        if (p.xi.num_qubits() != q) {
            fail(ErrorKind::ConfigError, "state has " + std::to_string(p.xi.num_qubits()) + " qubits, expected " +
                                             std::to_string(q));
        }
    } else if (f.basis->count() > 0) {
        if (o.basis >= (std::size_t{1} << q)) {
            fail(ErrorKind::ConfigError, "--basis index out of range for " + std::to_string(q) + " qubits");
        }
        p.xi = StateVector::basis(q, o.basis);
    } else {
        require_seed(seeds.state, "--random-state");
        random::Engine rng(*seeds.state);
        p.xi = random::state(q, rng);
    }
    if (f.sample->count() > 0) {
        require_seed(seeds.sample, "--sample");
        p.sample_seed = seeds.sample;
    }
    return p;
}

void emit(const Json &report, const std::string &path, std::ostream &out) {
    const std::string text = report.dump(2) + "\n";
    if (path.empty()) {
        out << text;
        return;
    }
    std::ofstream file(path, std::ios::binary);
    if (!file) {
        fail(ErrorKind::ConfigError, "cannot write " + path);
    }
    file << text;
}

int cmd_run(const Options &o, const Flags &f, const CLI::App &sub, std::ostream &out, std::ostream &err) {
    const Problem p = resolve(o, f, bind_seeds(sub, o, f));
    const double tolerance = env_tolerance();
    std::vector<RunResult> results;
    std::vector<double> fidelities;
    if (p.protocol == "bqst") {
        results = run_bqst(p.matrix, p.xi, p.unitary ? GateCheck::Unitary : GateCheck::None);
        if (p.sample_seed) {
            std::mt19937_64 rng(*p.sample_seed);
            std::vector<RunResult> drawn;
            for (std::size_t i = 0; i < o.sample; ++i) {
                const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
                double cumulative = 0.0;
                std::size_t pick = results.size() - 1;
                for (std::size_t k = 0; k < results.size(); ++k) {
                    cumulative += results[k].probability;
                    if (u < cumulative) {
                        pick = k;
                        break;
                    }
                }
                drawn.push_back(results[pick]);
                drawn.back().branch_id = i;
            }
            results = std::move(drawn);
        }
        const StateVector target = StateVector::normalized(p.xi.num_qubits(), [&] {
            const CVector v = p.matrix * p.xi.to_eigen();
            return std::vector<Complex>(v.data(), v.data() + v.size());
        }());
        for (const RunResult &r : results) {
            fidelities.push_back(fidelity(r.final_y_state, target));
        }
    } else {
        if (p.sample_seed) {
            for (std::size_t i = 0; i < o.sample; ++i) {
                results.push_back(sample_protocol(*p.op, p.xi, *p.sample_seed + i));
                results.back().branch_id = i;
            }
        } else {
            results = run_protocol(*p.op, p.xi);
        }
        fidelities = branch_fidelities(*p.op, p.xi, results);
    }

    double min_fidelity = 1.0;
    std::size_t violations = 0;
    for (std::size_t i = 0; i < results.size(); ++i) {
        min_fidelity = std::min(min_fidelity, fidelities[i]);
        violations += results[i].locality_violations;
    }
    const bool passed = min_fidelity >= 1.0 - tolerance && violations == 0;

    Json report = io::run_report(p.protocol, p.n, p.m, results, fidelities);
    report["mode"] = p.sample_seed ? "sample" : "enumerate";
    report["tolerance"] = tolerance;
    report["min_fidelity"] = min_fidelity;
    report["locality_violations"] = violations;
    report["passed"] = passed;
    emit(report, o.out, out);
    if (!o.csv.empty()) {
        std::ofstream file(o.csv, std::ios::binary);
        if (!file) {
            fail(ErrorKind::ConfigError, "cannot write " + o.csv);
        }
        io::write_branch_csv(file, results, fidelities);
    }
    if (!passed) {
        err << "verification failed: min fidelity " << min_fidelity << ", locality violations " << violations
            << "\n";
        return kVerificationFailure;
    }
    return kOk;
}

int cmd_verify(const Options &o, const Flags &f, const CLI::App &sub, std::ostream &out, std::ostream &err) {
    const Problem p = resolve(o, f, bind_seeds(sub, o, f));
    if (!p.op) {
        fail(ErrorKind::ConfigError, "verify traces the hpv, wang and hybrid protocols; bqst has no trace");
    }
    const double tolerance = env_tolerance();
    std::vector<PathOutcomes> paths = all_outcomes(p.n, p.m);
    if (p.sample_seed) {
        std::mt19937_64 rng(*p.sample_seed);
        std::uniform_int_distribution<std::size_t> pick(0, paths.size() - 1);
        std::vector<PathOutcomes> drawn;
        for (std::size_t i = 0; i < o.sample; ++i) {
            drawn.push_back(paths[pick(rng)]);
        }
        paths = std::move(drawn);
    }
    Json reports = Json::array();
    std::size_t failed = 0;
    double worst = 0.0;
    for (const PathOutcomes &path : paths) {
        const TraceCheckReport rep = step_trace(*p.op, p.xi, path, tolerance);
        failed += rep.passed() ? 0 : 1;
        worst = std::max(worst, rep.max_deviation());
        reports.push_back(io::trace_report_to_json(rep));
    }
    const Json report{{"protocol", p.protocol}, {"N", p.n},           {"M", p.m},
                      {"tolerance", tolerance}, {"paths", paths.size()}, {"failed", failed},
                      {"max_deviation", worst}, {"passed", failed == 0}, {"reports", reports}};
    emit(report, o.out, out);
    if (failed > 0) {
        err << "verification failed on " << failed << " of " << paths.size() << " paths\n";
        return kVerificationFailure;
    }
    return kOk;
}

int cmd_classify(const std::string &matrix_file, const std::string &out_path, std::ostream &out) {
    const CMatrix u = io::matrix_from_json(io::read_json_file(matrix_file));
    const std::vector<Decomposition> found = classify(u);
    Json list = Json::array();
    for (const Decomposition &d : found) {
        list.push_back(io::decomposition_to_json(d));
    }
    Json report{{"dim", u.rows()}, {"decompositions", list}};
    report["best"] = list.front();
    emit(report, out_path, out);
    return kOk;
}

int cmd_resources(const std::string &protocol, std::size_t n, std::size_t m, const std::string &out_path,
                  std::ostream &out) {
    Json report = io::ledger_to_json(predicted_ledger(protocol, n, m));
    report["protocol"] = protocol;
    report["N"] = n;
    report["M"] = m;
    emit(report, out_path, out);
    return kOk;
}

} // namespace

double acceptance_tolerance() { return env_tolerance(); }

int run_cli(int argc, const char *const *argv, std::ostream &out, std::ostream &err) {
    CLI::App app{"Simulate remote implementation of restricted quantum operations"};
    app.name("remoteop");
    app.require_subcommand(1);

    Options run_opts;
    Flags run_flags;
    CLI::App *run = app.add_subcommand("run", "run a protocol and report every branch");
    add_common(run, run_opts, run_flags);
    run->add_option("--csv", run_opts.csv, "also write the branch table as CSV");

    Options verify_opts;
    Flags verify_flags;
    CLI::App *verify = app.add_subcommand("verify", "check each protocol step against its closed form");
    add_common(verify, verify_opts, verify_flags);

    std::string matrix_file;
    std::string classify_out;
    CLI::App *cls = app.add_subcommand("classify", "list the restricted-set decompositions of a matrix");
    cls->add_option("matrix,--matrix-file", matrix_file, "matrix JSON file")->required();
    cls->add_option("--out", classify_out);

    std::string res_protocol = "hybrid";
    std::size_t res_n = 0;
    std::size_t res_m = 0;
    std::string res_out;
    CLI::App *res = app.add_subcommand("resources", "predicted entanglement and communication cost");
    res->add_option("--protocol", res_protocol)->check(CLI::IsMember({"hpv", "wang", "hybrid", "bqst"}));
    auto *res_n_opt = res->add_option("--n", res_n);
    res->add_option("--m", res_m);
    res->add_option("--out", res_out);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        return app.exit(e, out, err) == 0 ? kOk : kConfigError;
    }

    try {
        if (run->parsed()) {
            return cmd_run(run_opts, run_flags, *run, out, err);
        }
        if (verify->parsed()) {
            return cmd_verify(verify_opts, verify_flags, *verify, out, err);
        }
        if (cls->parsed()) {
            return cmd_classify(matrix_file, classify_out, out);
        }
        if (res_protocol == "hpv" && res_n_opt->count() == 0) {
            res_n = 1;
        }
        return cmd_resources(res_protocol, res_n, res_m, res_out, out);
    } catch (const Error &e) {
        err << "error: " << e.what() << "\n";
        return kConfigError;
    }
}

} // namespace remoteop::cli
