// tripart: tensor-method toolkit for k-set cover and three-way partitioning.
//
// Subcommands: solve, partition3, convolve, verify, analyze, bench.
// Exit codes: 0 = YES/OK, 1 = NO, 2 = error or failed verification,
// 3 = oracle disagreement (with --oracle).
//
// All randomness is derived from --seed; identical seeds and inputs give
// byte-identical output at any --threads value.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "tripart/io.hpp"

using nlohmann::json;
using namespace tripart;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Rational parse_rational(const std::string& s) { return RationalRing{}.parse(s); }

bool is_prime_tag(RingTag t) { return t != RingTag::Q; }

std::string hp_str(const HighPrec& v) { return v.str(30); }

constexpr const char* kPrecisionNote = "30 of 50 working decimal digits shown";

struct SolveOptions {
    std::string instance_path;
    std::string backend = "exact";
    std::string ring = "gf2";
    std::string sigma = "1/1000", tau = "1/1000";
    std::string decomp_path;
    unsigned d = 1;
    int q = -1;
    std::uint64_t seed = 1;
    std::uint64_t repeats = 0;
    unsigned threads = 1;
    bool oracle = false, as_json = false, skip_verify = false;
};

template <unsigned P>
ThreeWayBackend make_broken_backend(const SolveOptions& o, std::uint64_t* consumed) {
    BrokenBackendOptions<P> opt;
    Gf<P> field;
    if (!o.decomp_path.empty()) {
        std::istringstream in(slurp(o.decomp_path));
        opt.dec = read_q_decomposition(in, field);
    } else {
        opt.dec = trivial_q_decomposition(field, o.d);
    }
    if (!o.skip_verify && !opt.dec.verify())
        throw std::runtime_error(
            "decomposition failed verification (use --skip-verify to force)");
    opt.sigma = parse_rational(o.sigma);
    opt.tau = parse_rational(o.tau);
    if (o.q >= 0) opt.q_override = static_cast<unsigned>(o.q);
    if (o.repeats > 0) opt.repeats_override = o.repeats;
    opt.seed = o.seed;
    opt.threads = o.threads;
    opt.repeats_consumed = consumed;
    return broken_randomized_backend<P>(std::move(opt));
}

int cmd_solve(const SolveOptions& o) {
    std::istringstream in(slurp(o.instance_path));
    auto inst = read_instance(in);
    std::uint64_t repeats_consumed = 0;

    ThreeWayBackend backend;
    if (o.backend == "exact") {
        backend = exact_trilinear_backend();
    } else if (o.backend == "broken") {
        RingTag tag = parse_ring_tag(o.ring);
        if (!is_prime_tag(tag))
            throw std::runtime_error("the broken backend needs a prime-field ring");
        backend = with_ring(tag, [&](auto ring) -> ThreeWayBackend {
            using R = decltype(ring);
            if constexpr (std::is_same_v<R, RationalRing>) {
                throw std::runtime_error("unreachable");
            } else {
                return make_broken_backend<R::characteristic>(o, &repeats_consumed);
            }
        });
    } else {
        throw std::runtime_error("unknown backend '" + o.backend + "'");
    }

    auto outcome = solve_setcover(inst, backend, parse_rational(o.tau));

    int exit_code = outcome.yes ? 0 : 1;
    bool oracle_disagrees = false;
    if (o.oracle) {
        bool want = baseline_bellman(inst);
        oracle_disagrees = want != outcome.yes;
        if (oracle_disagrees) exit_code = 3;
    }

    if (o.as_json) {
        json j{{"command", "solve"},
               {"answer", outcome.yes ? "YES" : "NO"},
               {"n", inst.n},
               {"m", inst.family.size()},
               {"t", inst.t},
               {"k", inst.k},
               {"backend", o.backend},
               {"route", outcome.route},
               {"seed", o.seed},
               {"repeats", repeats_consumed}};
        if (outcome.route == "triple")
            j["triple"] = {outcome.triple[0], outcome.triple[1], outcome.triple[2]};
        else
            j["triple"] = nullptr;
        if (o.oracle) j["oracle_agrees"] = !oracle_disagrees;
        std::cout << j.dump() << '\n';
    } else {
        std::cout << (outcome.yes ? "YES" : "NO") << '\n';
        if (oracle_disagrees)
            std::cout << "oracle disagreement: baseline says "
                      << (outcome.yes ? "NO" : "YES") << '\n';
    }
    return exit_code;
}

struct Partition3Options {
    std::string f_path, g_path, h_path;
    std::string ring = "gf2";
    std::string sigma = "1/1000", tau = "1/1000";
    std::string decomp_path;
    unsigned d = 1;
    int q = -1;
    std::uint64_t seed = 1;
    std::uint64_t repeats = 0;
    unsigned threads = 1;
    bool exact = false, as_json = false, skip_verify = false;
};

int cmd_partition3(const Partition3Options& o) {
    std::istringstream fin(slurp(o.f_path)), gin(slurp(o.g_path)), hin(slurp(o.h_path));
    auto F = read_family(fin), G = read_family(gin), H = read_family(hin);
    if (F.n != G.n || G.n != H.n)
        throw std::runtime_error("families live in different universes");

    if (o.exact) {
        RationalRing q;
        auto count = trilinear_partition_count(q, F, G, H);
        bool yes = !count.is_zero();
        if (o.as_json) {
            json j{{"command", "partition3"}, {"answer", yes ? "YES" : "NO"},
                   {"n", F.n},               {"backend", "exact"},
                   {"count", q.to_string(count)}};
            std::cout << j.dump() << '\n';
        } else {
            std::cout << "count " << q.to_string(count) << '\n'
                      << "result " << (yes ? "YES" : "NO") << '\n';
        }
        return yes ? 0 : 1;
    }

    RingTag tag = parse_ring_tag(o.ring);
    if (!is_prime_tag(tag))
        throw std::runtime_error("the randomized pipeline needs a prime-field ring");
    unsigned q_blocks;
    if (o.q >= 0) {
        q_blocks = static_cast<unsigned>(o.q);
    } else {
        Rational qs = parse_rational(o.sigma) * F.n / o.d;
        q_blocks = static_cast<unsigned>(numerator(qs) / denominator(qs));
    }
    auto bs = BlockStructure::for_universe(F.n, o.d, q_blocks);
    std::uint64_t s = o.repeats;
    if (s == 0) {
        if (q_blocks == 0) {
            s = 1;
        } else {
            BigInt reps = repeat_count(
                F.n, theta_value(parse_rational(o.sigma), parse_rational(o.tau)));
            s = reps > 1'000'000 ? 1'000'000ull : static_cast<std::uint64_t>(reps);
        }
    }

    auto result = with_ring(tag, [&](auto ring) -> WrapperResult {
        using R = decltype(ring);
        if constexpr (std::is_same_v<R, RationalRing>) {
            throw std::runtime_error("unreachable");
        } else {
            constexpr unsigned P = R::characteristic;
            QDecomposition<Gf<P>> dec;
            if (!o.decomp_path.empty()) {
                std::istringstream in(slurp(o.decomp_path));
                dec = read_q_decomposition(in, ring);
            } else {
                dec = trivial_q_decomposition(ring, o.d);
            }
            if (dec.d != o.d)
                throw std::runtime_error("decomposition d differs from --d");
            if (!o.skip_verify && !dec.verify())
                throw std::runtime_error(
                    "decomposition failed verification (use --skip-verify to force)");
            return random_permutation_wrapper<P>(F, G, H, bs, dec, s, o.seed,
                                                 o.threads);
        }
    });

    if (o.as_json) {
        json j{{"command", "partition3"},
               {"answer", result.found ? "YES" : "NO"},
               {"n", F.n},
               {"backend", "broken"},
               {"ring", o.ring},
               {"d", o.d},
               {"q", q_blocks},
               {"seed", o.seed},
               {"repeats_used", result.repeats_used},
               {"repeats_total", s},
               {"modulus", modulus_to_string(result.modulus)}};
        std::cout << j.dump() << '\n';
    } else {
        std::cout << "modulus " << modulus_to_string(result.modulus) << '\n'
                  << "result " << (result.found ? "YES" : "NO") << '\n'
                  << "repeats " << result.repeats_used << '/' << s << '\n';
    }
    return result.found ? 0 : 1;
}

struct ConvolveOptions {
    std::string u_path, v_path;
    bool oracle = false;
};

int cmd_convolve(const ConvolveOptions& o) {
    std::string u_text = slurp(o.u_path), v_text = slurp(o.v_path);
    std::istringstream peek(u_text);
    RingTag tag = peek_vector_ring(peek);
    return with_ring(tag, [&](auto ring) -> int {
        std::istringstream uin(u_text), vin(v_text);
        auto u = read_vector(uin, ring), v = read_vector(vin, ring);
        auto w = subset_convolution(u, v);
        if (o.oracle) {
            auto slow = brute_subset_convolution(u, v);
            for (std::size_t i = 0; i < w.v.size(); ++i)
                if (!ring.equal(w.v[i], slow.v[i])) {
                    std::cout << "oracle mismatch at index " << i << '\n';
                    return 3;
                }
        }
        write_vector(std::cout, w);
        return 0;
    });
}

struct VerifyOptions {
    std::string kind;
    std::vector<std::string> paths;
};

int cmd_verify(const VerifyOptions& o) {
    auto ok = [](const std::string& what) {
        std::cout << "OK " << what << '\n';
        return 0;
    };
    auto fail = [](const std::string& what) {
        std::cout << "FAIL " << what << '\n';
        return 2;
    };

    if (o.kind == "tensor") {
        if (o.paths.size() != 1) throw std::runtime_error("verify tensor <file>");
        std::string text = slurp(o.paths[0]);
        std::istringstream peek(text);
        RingTag tag = peek_tensor_ring(peek);
        return with_ring(tag, [&](auto ring) {
            std::istringstream in(text);
            auto T = read_tensor(in, ring);
            std::ostringstream what;
            what << "tensor " << T.m << "x" << T.n << "x" << T.p << " over "
                 << ring_tag_name(ring_tag_of<decltype(ring)>::value) << ", support "
                 << support(T).size();
            return ok(what.str());
        });
    }
    if (o.kind == "decomp") {
        if (o.paths.size() != 2)
            throw std::runtime_error("verify decomp <decomp-file> <tensor-file>");
        std::string dtext = slurp(o.paths[0]), ttext = slurp(o.paths[1]);
        std::istringstream peek(ttext);
        RingTag tag = peek_tensor_ring(peek);
        return with_ring(tag, [&](auto ring) {
            std::istringstream din(dtext), tin(ttext);
            auto D = read_decomposition(din, ring);
            auto T = read_tensor(tin, ring);
            return verify_rank_decomposition(D, T)
                       ? ok("rank decomposition, r = " + std::to_string(D.rank()))
                       : fail("rank decomposition does not reassemble the tensor");
        });
    }
    if (o.kind == "border") {
        if (o.paths.size() != 2)
            throw std::runtime_error("verify border <border-file> <tensor-file>");
        std::string dtext = slurp(o.paths[0]), ttext = slurp(o.paths[1]);
        std::istringstream peek(ttext);
        RingTag tag = peek_tensor_ring(peek);
        return with_ring(tag, [&](auto ring) {
            std::istringstream din(dtext), tin(ttext);
            auto D = read_border_decomposition(din, ring);
            auto T = read_tensor(tin, ring);
            return verify_border_decomposition(D, T)
                       ? ok("border decomposition, r = " + std::to_string(D.rank()) +
                            ", degree " + std::to_string(D.degree))
                       : fail("border decomposition identity does not hold");
        });
    }
    if (o.kind == "pborder") {
        if (o.paths.size() != 1) throw std::runtime_error("verify pborder <file>");
        std::string text = slurp(o.paths[0]);
        std::istringstream peek(text);
        RingTag tag = peek_decomp_ring(peek, "borderdecomp", 5);
        return with_ring(tag, [&](auto ring) {
            std::istringstream in(text);
            auto D = read_border_decomposition(in, ring);
            return verify_border_decomposition(D, build_P(ring))
                       ? ok("border decomposition of P, r = " +
                            std::to_string(D.rank()))
                       : fail("not a border decomposition of P");
        });
    }
    if (o.kind == "qdecomp") {
        if (o.paths.size() != 1) throw std::runtime_error("verify qdecomp <file>");
        std::string text = slurp(o.paths[0]);
        std::istringstream peek(text);
        RingTag tag = peek_decomp_ring(peek, "qdecomp", 2);
        return with_ring(tag, [&](auto ring) {
            std::istringstream in(text);
            auto D = read_q_decomposition(in, ring);
            std::ostringstream what;
            what << "decomposition of the degree-" << D.d << " power, r = " << D.rank();
            return D.verify() ? ok(what.str())
                              : fail("does not reassemble the target tensor");
        });
    }
    throw std::runtime_error("unknown verify kind '" + o.kind +
                             "' (tensor, decomp, border, pborder, qdecomp)");
}

struct AnalyzeOptions {
    std::string sigma = "1/1000", tau = "1/1000", rho = "1/1000";
    unsigned n = 100;
    std::string kappa, beta;
    bool as_json = false;
};

int cmd_analyze(const AnalyzeOptions& o) {
    Rational sigma = parse_rational(o.sigma), tau = parse_rational(o.tau),
             rho = parse_rational(o.rho);
    auto theta = theta_value(sigma, tau);
    auto s = repeat_count(o.n, theta);
    auto [b1, b2] = runtime_exponent_bases(sigma, tau, rho);
    HighPrec margin = 2 - std::max(b1, b2);
    auto entropy = binary_entropy(Rational(1, 3) + tau);

    std::optional<Rational> eps;
    if (!o.kappa.empty() && !o.beta.empty())
        eps = validate_constants(parse_rational(o.kappa), parse_rational(o.beta));

    RationalRing qr;
    if (o.as_json) {
        json j{{"command", "analyze"},
               {"sigma", qr.to_string(sigma)},
               {"tau", qr.to_string(tau)},
               {"rho", qr.to_string(rho)},
               {"n", o.n},
               {"theta_base", qr.to_string(theta.base)},
               {"theta", hp_str(theta.value())},
               {"repeats", s.str()},
               {"b1", hp_str(b1)},
               {"b2", hp_str(b2)},
               {"margin", hp_str(margin)},
               {"entropy_third_plus_tau", hp_str(entropy)},
               {"precision", kPrecisionNote}};
        if (!o.kappa.empty() && !o.beta.empty())
            j["epsilon"] = eps ? json(qr.to_string(*eps)) : json(nullptr);
        std::cout << j.dump() << '\n';
    } else {
        std::cout << "sigma = " << qr.to_string(sigma) << ", tau = " << qr.to_string(tau)
                  << ", rho = " << qr.to_string(rho) << ", n = " << o.n << '\n';
        std::cout << "theta = (" << qr.to_string(theta.base) << ")^("
                  << qr.to_string(theta.exponent) << ") ~= " << hp_str(theta.value())
                  << "  [" << kPrecisionNote << "]\n";
        std::cout << "repeats s = ceil(theta^-n * n) = " << s.str() << '\n';
        std::cout << "H(1/3+tau) ~= " << hp_str(entropy) << '\n';
        std::cout << "b1 ~= " << hp_str(b1) << '\n';
        std::cout << "b2 ~= " << hp_str(b2) << '\n';
        std::cout << "margin 2 - max(b1,b2) ~= " << hp_str(margin)
                  << (margin > 0 ? "  (strictly below 2)" : "  (NOT below 2)") << '\n';
        if (!o.kappa.empty() && !o.beta.empty()) {
            if (eps)
                std::cout << "largest epsilon = " << qr.to_string(*eps)
                          << " with (2-beta) 2^kappa 2^H(kappa) < 2-epsilon\n";
            else
                std::cout << "no epsilon of the form 10^-j satisfies the inequality\n";
        }
    }
    return margin > 0 ? 0 : 1;
}

struct BenchOptions {
    unsigned max_n = 12;
    std::uint64_t seed = 1;
};

int cmd_bench(const BenchOptions& o) {
    using clock = std::chrono::steady_clock;
    std::cout << "subset convolution, random 0/1 vectors (times in ms)\n";
    std::cout << "n  gf2_ms  rational_ms\n";
    for (unsigned n = 6; n <= o.max_n; ++n) {
        SplitMix64 g(derive_seed(o.seed, n));
        auto run = [&](auto ring) {
            IndicatorVector<decltype(ring)> u(ring, n), v(ring, n);
            for (auto& e : u.v) e = bounded(g, 2) ? ring.one() : ring.zero();
            for (auto& e : v.v) e = bounded(g, 2) ? ring.one() : ring.zero();
            auto t0 = clock::now();
            auto w = subset_convolution(u, v);
            auto t1 = clock::now();
            (void)w;
            return std::chrono::duration<double, std::milli>(t1 - t0).count();
        };
        double ms2 = run(Gf2{});
        double msq = run(RationalRing{});
        std::printf("%-2u %7.2f %12.2f\n", n, ms2, msq);
    }
    std::cout << "\nyates multiplication counts, square b x b factors\n";
    std::cout << "b  p  count  bound(2*b^(p+1)*p)\n";
    Gf3 gf;
    SplitMix64 g(derive_seed(o.seed, 0x77));
    for (unsigned b : {2u, 3u}) {
        for (unsigned p = 1; p <= 6; ++p) {
            std::vector<Matrix<Gf3>> fs;
            std::size_t len = 1;
            for (unsigned l = 0; l < p; ++l) {
                Matrix<Gf3> M(gf, b, b);
                for (auto& e : M.a) e = static_cast<std::uint8_t>(bounded(g, 3));
                fs.push_back(M);
                len *= b;
            }
            std::vector<Gf3::Elem> x;
            for (std::size_t i = 0; i < len; ++i)
                x.push_back(static_cast<std::uint8_t>(bounded(g, 3)));
            auto r = yates_matvec(gf, fs, x);
            std::uint64_t bound = 2 * p;
            for (unsigned e = 0; e < p + 1; ++e) bound *= b;
            std::printf("%u  %u  %6llu %8llu\n", b, p,
                        static_cast<unsigned long long>(r.mults),
                        static_cast<unsigned long long>(bound));
        }
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"tensor-method toolkit for set cover and three-way partitioning"};
    app.require_subcommand(1);

    SolveOptions so;
    auto* solve = app.add_subcommand("solve", "decide a set-cover instance");
    solve->add_option("instance", so.instance_path, "instance file")->required();
    solve->add_option("--backend", so.backend, "exact or broken (default exact)");
    solve->add_option("--ring", so.ring, "base field for the broken backend");
    solve->add_option("--sigma", so.sigma, "block-density constant");
    solve->add_option("--tau", so.tau, "size-cap constant");
    solve->add_option("--d", so.d, "Kronecker power of the 7x7x7 tensor");
    solve->add_option("--q", so.q, "number of d-fold blocks (default sigma-derived)");
    solve->add_option("--decomp", so.decomp_path, "qdecomp file to plug in");
    solve->add_flag("--skip-verify", so.skip_verify, "trust the decomposition file");
    solve->add_option("--repeats", so.repeats, "override the repeat count");
    solve->add_option("--seed", so.seed, "master seed");
    solve->add_option("--threads", so.threads, "parallel repeats");
    solve->add_flag("--oracle", so.oracle, "cross-check with the subset DP baseline");
    solve->add_flag("--json", so.as_json, "machine-readable output");

    Partition3Options po;
    auto* part = app.add_subcommand("partition3", "three-way partitioning of [n]");
    part->add_option("F", po.f_path, "family file")->required();
    part->add_option("G", po.g_path, "family file")->required();
    part->add_option("H", po.h_path, "family file")->required();
    part->add_flag("--exact", po.exact, "exact rational count instead of the wrapper");
    part->add_option("--ring", po.ring, "base field (gf2, gf3, gf5, gf7)");
    part->add_option("--sigma", po.sigma, "block-density constant");
    part->add_option("--tau", po.tau, "repeat-count constant");
    part->add_option("--d", po.d, "Kronecker power of the 7x7x7 tensor");
    part->add_option("--q", po.q, "number of d-fold blocks (default sigma-derived)");
    part->add_option("--decomp", po.decomp_path, "qdecomp file to plug in");
    part->add_flag("--skip-verify", po.skip_verify, "trust the decomposition file");
    part->add_option("--repeats", po.repeats, "override the repeat count");
    part->add_option("--seed", po.seed, "master seed");
    part->add_option("--threads", po.threads, "parallel repeats");
    part->add_flag("--json", po.as_json, "machine-readable output");

    ConvolveOptions co;
    auto* conv = app.add_subcommand("convolve", "subset convolution of two vectors");
    conv->add_option("u", co.u_path, "vector file")->required();
    conv->add_option("v", co.v_path, "vector file")->required();
    conv->add_flag("--oracle", co.oracle, "cross-check with direct summation");

    VerifyOptions vo;
    auto* verify = app.add_subcommand("verify", "check files and decompositions");
    verify->add_option("kind", vo.kind, "tensor | decomp | border | pborder | qdecomp")
        ->required();
    verify->add_option("files", vo.paths, "input files")->expected(1, 2);

    AnalyzeOptions ao;
    auto* analyze = app.add_subcommand("analyze", "constants and exponents");
    analyze->add_option("--sigma", ao.sigma, "block-density constant");
    analyze->add_option("--tau", ao.tau, "size-cap constant");
    analyze->add_option("--rho", ao.rho, "rank-excess constant");
    analyze->add_option("--n", ao.n, "universe size for the repeat count");
    analyze->add_option("--kappa", ao.kappa, "set-size constant to validate");
    analyze->add_option("--beta", ao.beta, "speedup constant to validate");
    analyze->add_flag("--json", ao.as_json, "machine-readable output");

    BenchOptions bo;
    auto* bench = app.add_subcommand("bench", "timing and operation counts");
    bench->add_option("--max-n", bo.max_n, "largest universe for convolution timing");
    bench->add_option("--seed", bo.seed, "master seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*solve) return cmd_solve(so);
        if (*part) return cmd_partition3(po);
        if (*conv) return cmd_convolve(co);
        if (*verify) return cmd_verify(vo);
        if (*analyze) return cmd_analyze(ao);
        if (*bench) return cmd_bench(bo);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 2;
}
