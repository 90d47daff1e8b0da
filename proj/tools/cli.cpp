#include "cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <CLI11.hpp>

#include "commands.hpp"

namespace idemfactor::cli {

namespace {

int exit_code(ErrorKind kind)
{
    switch (kind) {
    case ErrorKind::NotApplicable:
    case ErrorKind::WrongClass:
    case ErrorKind::RangeNotContained:
    case ErrorKind::FactorNotIdempotent:
    case ErrorKind::ProductMismatch:
    case ErrorKind::Singular:
    case ErrorKind::InternalNormalizationFailure: return 1;
    default: return 2;
    }
}

template <class F>
Json with_field_tag(const std::string& tag, F&& f)
{
    if (tag == "Q")
        return f.template operator()<Rational>();
    if (tag == "F64")
        return f.template operator()<double>();
    if (tag == "GF2")
        return f.template operator()<Gf2>();
    if (tag == "GF3")
        return f.template operator()<Gf3>();
    if (tag == "GF5")
        return f.template operator()<Gf5>();
    throw Error(ErrorKind::FieldUnsupported, "unknown field \"" + tag + "\"");
}

struct VerifyArgs
{
    std::string cert;
    double tol = 1e-9;
};

Json verify(const VerifyArgs& a)
{
    const Json doc = load_json(a.cert);
    auto one = [&](const Json& c) {
        if (!c.is_object() || !c.contains("target"))
            throw Error(ErrorKind::InvalidInput, "certificate needs a \"target\"");
        return with_field_tag(field_of(c["target"]), [&]<class S>() {
            return to_json(verify_certificate(certificate_from_json<S>(c), a.tol));
        });
    };
    Json out;
    if (doc.is_object() && doc.contains("certificates")) {
        if (!doc["certificates"].is_array())
            throw Error(ErrorKind::InvalidInput, "\"certificates\" must be an array");
        Json reports = Json::array();
        bool all = true;
        for (const auto& c : doc["certificates"]) {
            reports.push_back(one(c));
            all = all && reports.back()["passed"].get<bool>();
        }
        out = Json{{"passed", all}, {"reports", std::move(reports)}};
    } else {
        out = one(doc);
    }
    if (!out["passed"].get<bool>())
        throw Negative{out, "certificate does not verify"};
    return out;
}

struct IndexArgs
{
    std::string field;
    std::optional<int> n;
    std::optional<std::string> matrix;
    bool all = false;
    int tmax = 8;
    std::optional<int> threads;
    bool check = false;
};

int field_prime(std::string f)
{
    std::transform(f.begin(), f.end(), f.begin(), [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
    if (f == "gf2")
        return 2;
    if (f == "gf3")
        return 3;
    if (f == "gf5")
        return 5;
    throw Error(ErrorKind::FieldUnsupported, "index search runs over gf2, gf3 or gf5, not \"" + f + "\"");
}

unsigned thread_count(const std::optional<int>& flag)
{
    long n = 1;
    if (flag) {
        n = *flag;
    } else if (const char* env = std::getenv("IDEMFACTOR_THREADS"); env && *env) {
        char* end = nullptr;
        n = std::strtol(env, &end, 10);
        if (*end != '\0')
            throw Error(ErrorKind::InvalidInput, "IDEMFACTOR_THREADS is not an integer");
    }
    if (n < 1 || n > 256)
        throw Error(ErrorKind::BadParameter, "thread count must lie in [1, 256]");
    return static_cast<unsigned>(n);
}

Json index(const IndexArgs& a)
{
    const int p = field_prime(a.field);
    if (a.all == a.matrix.has_value())
        throw Error(ErrorKind::InvalidInput, "index needs exactly one of --matrix and --all");
    const unsigned threads = thread_count(a.threads);

    if (a.all) {
        if (!a.n)
            throw Error(ErrorKind::InvalidInput, "--all needs --n");
        const auto atlas = build_atlas(*a.n, p, a.tmax, threads);
        Json hist = Json::object();
        for (std::size_t t = 0; t < atlas.layers().size(); ++t)
            hist[std::to_string(t + 1)] = atlas.layers()[t].size();
        Json out{{"field", "GF" + std::to_string(p)},
                 {"n", *a.n},
                 {"t_max", a.tmax},
                 {"closed", atlas.closed()},
                 {"total", atlas.space().size()},
                 {"idempotents", atlas.idempotents().size()},
                 {"reachable", atlas.reachable_size()},
                 {"unreached", atlas.space().size() - atlas.reachable_size()},
                 {"histogram", std::move(hist)}};
        if (a.check) {
            const auto structure = verify_minimal_structure(atlas);
            const auto splits = check_layer_splits(atlas, std::min(a.tmax, 6));
            out["structure"] = to_json(structure);
            out["layer_splits"] = to_json(splits);
            if (!structure.ok() || !splits.ok())
                throw Negative{out, "structural check failed"};
        }
        return out;
    }

    const Json doc = load_json(*a.matrix);
    return with_field_tag("GF" + std::to_string(p), [&]<class S>() -> Json {
        if constexpr (!is_gf_v<S>) {
            throw Error(ErrorKind::FieldUnsupported, "index search needs a finite field");
        } else {
            const Mat<S> m = matrix_from_json<S>(doc);
            require_square(m, "matrix");
            const int n = static_cast<int>(m.rows());
            if (a.n && *a.n != n)
                throw Error(ErrorKind::DimensionMismatch, "--n is " + std::to_string(*a.n) + " but the matrix is " +
                                                              shape_of(m));
            const auto atlas = build_atlas(n, p, a.tmax, threads);
            const MatrixKey key = atlas.space().key_of<S::characteristic>(m);
            const auto idx = atlas.index_of(key);
            Json witness = Json::array();
            for (MatrixKey f : atlas.witness(key))
                witness.push_back(to_json(atlas.space().to_matrix<S>(f)));
            const bool trivial = key == atlas.space().zero() || key == atlas.space().identity();
            Json out{{"matrix", to_json(m)},
                     {"index", idx ? Json(*idx) : Json(nullptr)},
                     {"status", idx ? "finite" : (atlas.closed() ? "infinite" : "exceeds_tmax")},
                     {"trivial", trivial},
                     {"witness", std::move(witness)}};
            if (!idx)
                throw Negative{out, atlas.closed() ? "not a finite product of idempotents"
                                                   : "no factorization within --tmax factors"};
            return out;
        }
    });
}

Json opcheck(const std::string& name)
{
    StructuredOperator op;
    if (name == "right-shift")
        op = right_shift();
    else if (name == "left-shift")
        op = left_shift();
    else if (name == "diag-harmonic")
        op = harmonic_diagonal();
    else
        op = operator_from_json(load_json(name));
    return Json{{"operator", to_json(op)},
                {"kernel_trivial", kernel_trivial(op)},
                {"range", to_json(range_classification(op))},
                {"membership", to_json(membership_report(op))}};
}

}  // namespace

Json load_json(const std::string& arg)
{
    try {
        if (!arg.empty() && arg.front() == '{')
            return Json::parse(arg);
        std::ifstream in(arg);
        if (!in)
            throw Error(ErrorKind::InvalidInput, "cannot open \"" + arg + "\"");
        return Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw Error(ErrorKind::InvalidInput, "malformed JSON in \"" + arg + "\": " + e.what());
    }
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Idempotent factorization toolkit. Results are JSON on stdout; exit 0 established, 1 fails, 2 bad "
                 "input.",
                 "idemfactor"};
    app.require_subcommand(1);
    std::function<Json()> action;

    BlockrepArgs br;
    auto* c_br = app.add_subcommand("blockrep", "Block representation of T and its idempotent class");
    c_br->add_option("--input", br.input, "Matrix JSON (file or inline)")->required();
    c_br->add_option("--K", br.k, "Basis of K (columns); local form unless --L is also given");
    c_br->add_option("--L", br.l, "Basis of a complement L");
    c_br->add_flag("--mirror", br.mirror, "Use L = R(T) so the top blocks vanish");
    c_br->callback([&] { action = [&] { return blockrep(br); }; });

    FactorArgs fa;
    auto* c_f = app.add_subcommand("factor", "Certificate writing T as a product of idempotents");
    c_f->add_option("--input", fa.input, "Matrix JSON (file or inline)")->required();
    c_f->add_option("--method", fa.method,
                    "auto, idempotent, range_swallow, range_swallow_mirror, embed, kernel_shift, "
                    "kernel_shift_idempotent, projector_tail, projector_tail_alt, invertible_pair, lift, peel")
        ->capture_default_str();
    c_f->add_option("--samples", fa.samples, "Number of distinct certificates (sampling recipes only)")
        ->capture_default_str();
    c_f->add_option("--seed", fa.seed, "Seed for sampled parameters")->capture_default_str();
    c_f->add_option("--K", fa.k, "Basis of K containing R(T); default K = R(T)");
    c_f->add_option("--L", fa.l, "Basis of a complement L");
    c_f->add_option("--B", fa.b, "B block (peel)");
    c_f->add_option("--C", fa.c, "C block (kernel_shift_idempotent, invertible_pair, peel)");
    c_f->add_option("--D", fa.d, "D block (projector_tail, invertible_pair, peel)");
    c_f->add_option("--J", fa.j, "Injection K -> L (embed)");
    c_f->add_option("--V", fa.v, "V block (kernel_shift, kernel_shift_idempotent)");
    c_f->callback([&] { action = [&] { return factor(fa); }; });

    VerifyArgs va;
    auto* c_v = app.add_subcommand("verify", "Recompute every residual of a certificate");
    c_v->add_option("--cert", va.cert, "Certificate JSON, or {\"certificates\": [...]}")->required();
    c_v->add_option("--tol", va.tol, "Relative tolerance for F64 certificates")->capture_default_str();
    c_v->callback([&] { action = [&] { return verify(va); }; });

    ConsistencyArgs ca;
    auto* c_c = app.add_subcommand("consistency", "Check the peeling equations for (B, C, D) against T = [T1, T2; 0, 0]");
    c_c->add_option("--T1", ca.t1)->required();
    c_c->add_option("--T2", ca.t2)->required();
    c_c->add_option("--B", ca.b)->required();
    c_c->add_option("--C", ca.c)->required();
    c_c->add_option("--D", ca.d)->required();
    c_c->callback([&] { action = [&] { return consistency(ca); }; });

    DouglasArgs da;
    auto* c_d = app.add_subcommand("douglas", "Minimal-kernel solution W0 of U = V W0");
    c_d->add_option("--U", da.u)->required();
    c_d->add_option("--V", da.v)->required();
    c_d->callback([&] { action = [&] { return douglas(da); }; });

    IndexArgs ia;
    auto* c_i = app.add_subcommand("index", "Exact idempotent index over a small finite field");
    c_i->add_option("--field", ia.field, "gf2, gf3 or gf5")->required();
    c_i->add_option("--n", ia.n, "Matrix size (required with --all)");
    c_i->add_option("--matrix", ia.matrix, "Matrix JSON to look up");
    c_i->add_flag("--all", ia.all, "Histogram of every layer");
    c_i->add_option("--tmax", ia.tmax, "Deepest layer to build")->capture_default_str();
    c_i->add_option("--threads", ia.threads, "Worker threads (default $IDEMFACTOR_THREADS or 1)");
    c_i->add_flag("--check", ia.check, "Also re-verify witnesses and layer splits (with --all)");
    c_i->callback([&] { action = [&] { return index(ia); }; });

    std::string op_name;
    auto* c_o = app.add_subcommand("opcheck", "Annihilator and regularity verdicts for a weighted shift or diagonal");
    c_o->add_option("--op", op_name, "right-shift, left-shift, diag-harmonic, or an operator JSON file")->required();
    c_o->callback([&] { action = [&] { return opcheck(op_name); }; });

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? 0 : 2;
    }

    try {
        const Json result = action();
        out << result.dump(2) << '\n';
        return 0;
    } catch (const Negative& n) {
        out << n.report.dump(2) << '\n';
        err << n.message << '\n';
        return 1;
    } catch (const Error& e) {
        const int code = exit_code(e.kind());
        if (code == 1)
            out << Json{{"error", std::string(to_string(e.kind()))}, {"message", e.detail()}}.dump(2) << '\n';
        err << e.what() << '\n';
        return code;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }
}

}  // namespace idemfactor::cli
