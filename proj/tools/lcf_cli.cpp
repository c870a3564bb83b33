// lcf: command-line front end for the Levi-Civita field toolkit.
//
// Exit codes: 0 success / all checks pass, 1 mathematical failure
// (verifier, certificate, arithmetic domain errors), 2 malformed input.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lcf/lcf.hpp"

namespace {

using lcf::io::json;

constexpr int kExitOk = 0;
constexpr int kExitMathFailure = 1;
constexpr int kExitBadInput = 2;

std::string read_input(const std::string& path) {
    if (path == "-") {
        std::ostringstream ss;
        ss << std::cin.rdbuf();
        return ss.str();
    }
    std::ifstream f(path);
    if (!f) throw lcf::SchemaError(path, "cannot open file");
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

json load_json(const std::string& path) {
    return lcf::io::parse_text(read_input(path), path);
}

void write_output(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text << "\n";
        return;
    }
    std::ofstream f(path);
    if (!f) throw lcf::SchemaError(path, "cannot open file for writing");
    f << text << "\n";
}

struct ReportOptions {
    std::string format = "json"; // json | text
    std::optional<double> eta;   // numeric base for display-only distances
};

std::string render_distance(const lcf::Exponent& g, const ReportOptions& opts) {
    std::string s = "eta^{-" + g.str() + "}";
    if (opts.eta && !g.is_inf()) {
        const double num = std::pow(*opts.eta, -(double(g.finite().num()) / double(g.finite().den())));
        s += " = " + std::to_string(num);
    }
    if (g.is_inf()) s = "0";
    return s;
}

lcf::CharMode parse_mode(const std::string& mode, std::uint32_t p) {
    try {
        if (mode == "equal") return lcf::CharMode::equal(p);
        if (mode == "mixed") return lcf::CharMode::mixed(p);
    } catch (const lcf::DomainError& e) {
        throw lcf::SchemaError("--p", e.what());
    }
    throw lcf::SchemaError("--mode", "expected equal or mixed");
}

int cmd_verify(const std::string& file, const ReportOptions& opts) {
    const lcf::UltraSpace space = lcf::io::space_from_json(load_json(file));
    const auto check = lcf::verify_ultrametric(space);
    if (check.ok) {
        if (opts.format == "text")
            std::cout << "ok: " << space.size() << " points satisfy the ultrametric law\n";
        else
            std::cout << json{{"ok", true}, {"points", space.size()}}.dump() << "\n";
        return kExitOk;
    }
    if (opts.format == "text")
        std::cout << "violation at (" << space.labels()[check.x] << ", " << space.labels()[check.y]
                  << ", " << space.labels()[check.z] << ")\n";
    else
        std::cout << json{{"ok", false},
                          {"triple", {space.labels()[check.x], space.labels()[check.y],
                                      space.labels()[check.z]}}}
                         .dump()
                  << "\n";
    return kExitMathFailure;
}

int cmd_embed(const std::string& file, const std::string& mode, std::uint32_t p,
              const std::string& out, const ReportOptions& opts) {
    const lcf::UltraSpace space = lcf::io::space_from_json(load_json(file));
    const lcf::EmbedState st = lcf::embed_space(space, parse_mode(mode, p));
    if (opts.format == "text") {
        std::ostringstream ss;
        for (const auto& label : st.order())
            ss << label << " -> " << lcf::series_str(st.image(label)) << "\n";
        ss << "generators used: " << st.generators_used();
        write_output(out, ss.str());
    } else {
        write_output(out, lcf::io::embed_state_to_json(st).dump(2));
    }
    return kExitOk;
}

int cmd_check(const std::string& images_file, const std::string& space_file,
              const ReportOptions& opts) {
    const lcf::EmbedState st = lcf::io::embed_state_from_json(load_json(images_file));
    const lcf::UltraSpace space = lcf::io::space_from_json(load_json(space_file));
    const lcf::EmbedCertificate cert = lcf::check_certificate(st, space);
    if (opts.format == "text") {
        for (const auto& c : cert.conditions) {
            std::cout << (c.passed ? "pass " : "FAIL ") << c.name;
            if (!c.witness.empty()) std::cout << ": " << c.witness;
            std::cout << "\n";
        }
    } else {
        json items = json::array();
        for (const auto& c : cert.conditions)
            items.push_back(json{{"name", c.name}, {"passed", c.passed}, {"witness", c.witness}});
        std::cout << json{{"all_passed", cert.all_passed()}, {"conditions", items}}.dump(2) << "\n";
    }
    return cert.all_passed() ? kExitOk : kExitMathFailure;
}

int cmd_extend(const std::string& images_file, const std::string& space_file,
               const std::string& out, const ReportOptions&) {
    const lcf::EmbedState st = lcf::io::embed_state_from_json(load_json(images_file));
    const lcf::UltraSpace enlarged = lcf::io::space_from_json(load_json(space_file));
    if (enlarged.size() != st.space().size() + 1)
        throw lcf::InconsistentPrefix("space must add exactly one point to the embedded set");
    for (std::size_t i = 0; i < st.space().size(); ++i)
        if (enlarged.labels()[i] != st.space().labels()[i])
            throw lcf::InconsistentPrefix("point " + std::to_string(i) +
                                          " does not match the embedded prefix");
    const std::string& label = enlarged.labels().back();
    std::vector<lcf::Exponent> dist;
    for (std::size_t i = 0; i < st.space().size(); ++i)
        dist.push_back(enlarged.g(i, enlarged.size() - 1));
    const lcf::EmbedState next = lcf::stream_embed(st, label, dist);
    write_output(out, lcf::io::embed_state_to_json(next).dump(2));
    return kExitOk;
}

int cmd_teich(std::uint32_t p, std::uint32_t a, std::uint32_t n, const ReportOptions& opts) {
    const lcf::PadicInt w = lcf::teichmuller(a, p, n);
    const auto digits = lcf::teich_digits(w);
    // verification: omega(a)^(p-1) == 1 mod p^N for a != 0
    bool unit_ok = true;
    if (a != 0) {
        lcf::PadicInt acc(p, n, 1);
        for (std::uint32_t i = 0; i + 1 < p; ++i) acc = lcf::padic_mul(acc, w);
        unit_ok = acc.value() == 1;
    }
    if (opts.format == "text") {
        std::cout << "omega(" << a << ") mod " << p << "^" << n << " = " << w.value() << "\n";
        std::cout << "teichmuller digits:";
        for (auto d : digits) std::cout << " " << d;
        std::cout << "\n";
        if (a != 0)
            std::cout << "verification: " << w.value() << "^" << (p - 1) << " == 1 mod " << p
                      << "^" << n << ": " << (unit_ok ? "ok" : "FAILED") << "\n";
    } else {
        std::cout << json{{"p", p},
                          {"a", a},
                          {"N", n},
                          {"lift", w.value()},
                          {"digits", digits},
                          {"unit_law", unit_ok}}
                         .dump()
                  << "\n";
    }
    return unit_ok ? kExitOk : kExitMathFailure;
}

int cmd_normalize(const std::string& file, const std::string& trunc_flag, const std::string& out,
                  const ReportOptions& opts) {
    const lcf::io::RawSeries raw = lcf::io::raw_series_from_json(load_json(file));
    const lcf::Exponent trunc =
        trunc_flag.empty() ? raw.trunc : lcf::Exponent::parse(trunc_flag);
    const lcf::Series norm = lcf::normalize_padic(raw.terms, raw.p, trunc);
    if (opts.format == "text")
        write_output(out, lcf::series_str(norm));
    else
        write_output(out, lcf::io::series_to_json(norm).dump(2));
    return kExitOk;
}

int cmd_arith(const std::string& op, const std::string& xfile, const std::string& yfile,
              const std::string& order_str, const std::string& out, const ReportOptions& opts) {
    const lcf::Series x = lcf::io::series_from_json(load_json(xfile));
    std::optional<lcf::Series> result;
    if (op == "invert") {
        lcf::Exponent order;
        if (!order_str.empty()) {
            order = lcf::Exponent::parse(order_str);
        } else if (!x.trunc().is_inf()) {
            order = x.trunc() - lcf::valuation(x);
        } else {
            order = lcf::Exponent(lcf::Rational(8)); // default display depth
        }
        result = x.mode().is_mixed() ? lcf::pseries_invert(x, order)
                                     : lcf::series_invert(x, order);
    } else {
        if (yfile.empty()) throw lcf::SchemaError("y", "binary operation needs two operands");
        const lcf::Series y = lcf::io::series_from_json(load_json(yfile));
        if (x.mode().is_mixed()) {
            if (op == "add") result = lcf::pseries_add(x, y);
            else if (op == "sub") result = lcf::pseries_sub(x, y);
            else if (op == "mul") result = lcf::pseries_mul(x, y);
        } else {
            if (op == "add") result = lcf::series_add(x, y);
            else if (op == "sub") result = lcf::series_sub(x, y);
            else if (op == "mul") result = lcf::series_mul(x, y);
        }
        if (!result) throw lcf::SchemaError("op", "expected add | sub | mul | invert");
    }
    if (opts.format == "text")
        write_output(out, lcf::series_str(*result));
    else
        write_output(out, lcf::io::series_to_json(*result).dump(2));
    return kExitOk;
}

int cmd_urysohn_delta(const std::string& ffile, const std::string& gfile,
                      const ReportOptions& opts) {
    const lcf::UrysohnPoint f = lcf::io::urysohn_from_json(load_json(ffile));
    const lcf::UrysohnPoint g = lcf::io::urysohn_from_json(load_json(gfile));
    const lcf::Exponent d = lcf::delta(f, g);
    if (opts.format == "text")
        std::cout << "delta exponent " << d.str() << ", distance " << render_distance(d, opts)
                  << "\n";
    else
        std::cout << json{{"exponent", d.str()}}.dump() << "\n";
    return kExitOk;
}

int cmd_urysohn_piece(const std::string& xfile, const std::string& sfile,
                      const ReportOptions& opts) {
    const lcf::Series x = lcf::io::series_from_json(load_json(xfile));
    const lcf::ExponentSet S = lcf::io::exponent_set_from_json(load_json(sfile));
    const lcf::PetalDistance pd = lcf::petal_distance(x, S);
    if (opts.format == "text") {
        std::cout << "distance to piece: " << render_distance(pd.exponent, opts) << "\n";
        std::cout << "witness: " << lcf::series_str(pd.witness) << "\n";
    } else {
        std::cout << json{{"exponent", pd.exponent.str()},
                          {"witness", lcf::io::series_to_json(pd.witness)}}
                         .dump(2)
                  << "\n";
    }
    return kExitOk;
}

int cmd_urysohn_extend(const std::string& afile, const std::string& bfile,
                       const std::string& out, const ReportOptions&) {
    const json aj = load_json(afile);
    const json& pts = lcf::io::jdetail::expect(aj, "points", afile);
    if (!pts.is_array()) throw lcf::SchemaError(afile + "/points", "expected an array");
    std::vector<lcf::UrysohnPoint> prefix;
    for (std::size_t i = 0; i < pts.size(); ++i)
        prefix.push_back(lcf::io::urysohn_from_json(pts[i], "/points/" + std::to_string(i)));
    const lcf::UltraSpace B = lcf::io::space_from_json(load_json(bfile));
    const lcf::UrysohnPoint ext = lcf::injective_extend(prefix, B);
    write_output(out, lcf::io::urysohn_to_json(ext).dump(2));
    return kExitOk;
}

int cmd_broughan(const std::string& file, std::uint32_t p, const std::string& out,
                 const ReportOptions& opts) {
    if (!lcf::is_prime(p)) throw lcf::SchemaError("--p", "must be prime");
    const lcf::UltraSpace space = lcf::io::space_from_json(load_json(file));
    const lcf::EmbedState st = lcf::broughan_embed(space, p);
    if (opts.format == "text") {
        std::ostringstream ss;
        ss << "embedded " << space.size() << " points into the p-adic Levi-Civita field, p = "
           << p << "\n";
        for (const auto& label : st.order())
            ss << label << " -> " << lcf::series_str(st.image(label)) << "\n";
        ss << "transcendence degree required: " << st.generators_used();
        write_output(out, ss.str());
    } else {
        write_output(out, lcf::io::embed_state_to_json(st).dump(2));
    }
    return kExitOk;
}

int cmd_gen(std::size_t n, std::size_t depth, std::uint64_t seed, std::int64_t max_denom,
            const std::string& out, const ReportOptions&) {
    lcf::UltraSpace space = lcf::random_ultrametric(n, depth, seed);
    if (max_denom > 1) {
        // relabel the integer tree depths with random rationals of bounded
        // denominator, drawn deterministically from the seed
        std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
        std::set<lcf::Rational> levels;
        std::uniform_int_distribution<std::int64_t> num(-16, 16);
        std::uniform_int_distribution<std::int64_t> den(1, max_denom);
        while (levels.size() < depth + 1) levels.insert(lcf::Rational(num(rng), den(rng)));
        space = lcf::remap_exponents(space,
                                     std::vector<lcf::Rational>(levels.begin(), levels.end()));
    }
    write_output(out, lcf::io::space_to_json(space).dump(2));
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Levi-Civita field toolkit: exact non-Archimedean arithmetic and "
                 "isometric embeddings of finite ultrametric spaces"};
    app.require_subcommand(1);

    ReportOptions report;
    app.add_option("--report", report.format, "Output format: json or text")
        ->check(CLI::IsMember({"json", "text"}));
    double eta_value = 0.0;
    auto* eta_opt = app.add_option("--eta", eta_value, "Numeric eta for display-only distances");

    std::string file, yfile, out;
    std::string mode = "equal";
    std::uint32_t p = 0;
    std::string op_name;
    std::uint32_t tp = 2, ta = 0, tn = 1;
    std::size_t gn = 8, gdepth = 4;
    std::uint64_t gseed = 0;
    std::int64_t gdenom = 1;

    auto* verify = app.add_subcommand("verify", "Check the ultrametric law on a space");
    verify->add_option("space", file)->required();

    auto* embed = app.add_subcommand("embed", "Isometrically embed a space");
    embed->add_option("space", file)->required();
    embed->add_option("--mode", mode, "equal or mixed");
    embed->add_option("--p", p, "residue characteristic");
    embed->add_option("-o,--out", out, "output file (default stdout)");

    auto* check = app.add_subcommand("check", "Verify an embedding certificate");
    check->add_option("images", file)->required();
    check->add_option("space", yfile)->required();

    auto* extend = app.add_subcommand("extend", "Extend an embedding by one streamed point");
    extend->add_option("images", file)->required();
    extend->add_option("space", yfile)->required();
    extend->add_option("-o,--out", out);

    auto* teich = app.add_subcommand("teich", "Teichmuller lift and digits");
    teich->add_option("p", tp)->required();
    teich->add_option("a", ta)->required();
    teich->add_option("N", tn)->required();

    auto* normalize = app.add_subcommand("normalize", "Standard representation of a raw element");
    normalize->add_option("raw", file)->required();
    std::string trunc_flag;
    normalize->add_option("--trunc", trunc_flag, "override the truncation order");
    normalize->add_option("-o,--out", out);

    auto* arith = app.add_subcommand("arith", "Series arithmetic");
    arith->add_option("op", op_name)->required()->check(CLI::IsMember({"add", "sub", "mul", "invert"}));
    arith->add_option("x", file)->required();
    arith->add_option("y", yfile);
    std::string order_flag;
    arith->add_option("--order", order_flag, "target order for invert");
    arith->add_option("-o,--out", out);

    auto* ury = app.add_subcommand("urysohn", "Urysohn universal-space operations");
    ury->require_subcommand(1);
    auto* ury_delta = ury->add_subcommand("delta", "Distance of two points");
    ury_delta->add_option("f", file)->required();
    ury_delta->add_option("g", yfile)->required();
    auto* ury_piece = ury->add_subcommand("piece-dist", "Distance to a petal piece");
    ury_piece->add_option("x", file)->required();
    ury_piece->add_option("S", yfile)->required();
    auto* ury_ext = ury->add_subcommand("extend", "Injectivity extension by one point");
    ury_ext->add_option("A", file)->required();
    ury_ext->add_option("B", yfile)->required();
    ury_ext->add_option("-o,--out", out);

    auto* broughan = app.add_subcommand("broughan", "Embed an H_p-valued space over G = Z");
    broughan->add_option("space", file)->required();
    broughan->add_option("--p", p, "prime")->required();
    broughan->add_option("-o,--out", out);

    auto* gen = app.add_subcommand("gen", "Generate a random ultrametric space");
    gen->add_option("--n", gn, "number of points");
    gen->add_option("--depth", gdepth, "tree depth");
    gen->add_option("--seed", gseed, "random seed");
    gen->add_option("--max-denom", gdenom, "remap exponents to rationals with denominator <= D");
    gen->add_option("-o,--out", out);

    // global flags (--report, --eta) may appear after the subcommand
    for (CLI::App* sub : {verify, embed, check, extend, teich, normalize, arith, ury, ury_delta,
                          ury_piece, ury_ext, broughan, gen})
        sub->fallthrough();

    CLI11_PARSE(app, argc, argv);
    if (*eta_opt) report.eta = eta_value;

    try {
        if (*verify) return cmd_verify(file, report);
        if (*embed) return cmd_embed(file, mode, p, out, report);
        if (*check) return cmd_check(file, yfile, report);
        if (*extend) return cmd_extend(file, yfile, out, report);
        if (*teich) return cmd_teich(tp, ta, tn, report);
        if (*normalize) return cmd_normalize(file, trunc_flag, out, report);
        if (*arith) return cmd_arith(op_name, file, yfile, order_flag, out, report);
        if (*ury_delta) return cmd_urysohn_delta(file, yfile, report);
        if (*ury_piece) return cmd_urysohn_piece(file, yfile, report);
        if (*ury_ext) return cmd_urysohn_extend(file, yfile, out, report);
        if (*broughan) return cmd_broughan(file, p, out, report);
        if (*gen) return cmd_gen(gn, gdepth, gseed, gdenom, out, report);
    } catch (const lcf::SchemaError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitBadInput;
    } catch (const lcf::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitMathFailure;
    }
    return kExitBadInput;
}
