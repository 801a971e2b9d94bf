// Command-line front end: factorization into elementary links, identity
// checks, degree triples, polynomial composition, corpus generation, and the
// threefold threshold report.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>

#include "cremona/rational_map.hpp"

using namespace cremona;
using nlohmann::ordered_json;

namespace {

RationalMap load_map(const std::string& path) {
    nlohmann::json j;
    if (path == "-") {
        std::cin >> j;
    } else {
        std::ifstream in(path);
        require(in.good(), errc::invalid_input, "cannot open map file: " + path);
        in >> j;
    }
    return map_from_json(j);
}

void print_trace_text(const LinkTrace& tr) {
    std::cout << "input: " << homaloidal_str(tr.input) << "\n";
    for (size_t i = 0; i < tr.steps.size(); ++i) {
        const auto& s = tr.steps[i];
        std::cout << (i + 1) << ". " << link_name(s.kind);
        if (s.center) std::cout << " at " << *s.center;
        std::cout << " -> " << s.surface_after.str() << "  H ~ " << rat_str(s.a_after)
                  << "*(-K)" << (s.surface_after.is_p2 ? "" : " + " + rat_str(s.b_after) + "*f")
                  << "  degree (" << rat_str(s.degree_after.mu) << ", "
                  << rat_str(s.degree_after.lambda) << ", " << int_str(s.degree_after.e)
                  << ")\n";
    }
    std::cout << "links: " << tr.steps.size() << "\n";
}

int cmd_factor(const std::string& type_str, const std::string& map_path, bool json,
               bool verify) {
    HomaloidalType t;
    std::optional<RationalMap> m;
    if (!map_path.empty()) {
        m = load_map(map_path);
        t = homaloidal_type_of(*m);
    } else {
        t = parse_homaloidal(type_str);
    }
    LinkTrace tr = factorize(t);
    if (verify) {
        HomaloidalType back = recompose(tr);
        require(same_type(t, back), errc::internal_invariant_violation,
                "recompose fails to round-trip the factorization");
        if (m) {
            auto factors = factor_by_quadratics(*m);
            RationalMap acc = *m;
            for (const auto& q : factors) acc = compose(acc, q);
            require(is_projective_linear(acc).has_value(),
                    errc::internal_invariant_violation,
                    "quadratic factors fail to linearize the map");
        }
    }
    if (json)
        std::cout << trace_to_json(tr).dump() << "\n";
    else
        print_trace_text(tr);
    return 0;
}

int cmd_check(const std::string& type_str) {
    HomaloidalType t = parse_homaloidal(type_str);
    Int n = t.n;
    Int s1 = t.cluster.sum_mult(), s2 = t.cluster.sum_mult_sq();
    bool eq2 = s2 == n * n - 1;
    bool eq3 = s1 == 3 * n - 3;
    bool cluster_ok = n >= 1;
    try {
        validate_cluster(t.cluster);
    } catch (const error&) {
        cluster_ok = false;
    }
    std::cout << "cluster admissible: " << (cluster_ok ? "pass" : "fail") << "\n";
    std::cout << "sum nu^2 = n^2 - 1: " << (eq2 ? "pass" : "fail") << "\n";
    std::cout << "sum nu = 3n - 3: " << (eq3 ? "pass" : "fail") << "\n";
    if (n > 1 && cluster_ok && eq2 && eq3) {
        std::cout << "noether inequality: " << (noether_inequality(t) ? "pass" : "fail")
                  << "\n";
    }
    if (!(cluster_ok && eq2 && eq3)) fail(errc::not_homaloidal, "type is not homaloidal");
    return 0;
}

int cmd_degree(const std::string& type_str) {
    auto d = sarkisov_degree(from_homaloidal(parse_homaloidal(type_str)));
    ordered_json j{{"mu", rat_str(d.mu)}, {"lambda", rat_str(d.lambda)}, {"e", int_str(d.e)}};
    std::cout << j.dump() << "\n";
    return 0;
}

int cmd_compose(const std::vector<std::string>& paths) {
    RationalMap f = load_map(paths[0]);
    RationalMap g = load_map(paths[1]);
    std::cout << map_to_json(compose(f, g)).dump() << "\n";
    return 0;
}

int cmd_corpus(unsigned long long seed, int k, int height) {
    auto corpus = random_corpus(seed, k, height);
    for (const auto& [m, t] : corpus) {
        ordered_json line{{"map", map_to_json(m)}, {"type", homaloidal_to_json(t)}};
        std::cout << line.dump() << "\n";
    }
    return 0;
}

std::vector<Rat> parse_rat_list(const std::string& s) {
    std::vector<Rat> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(parse_rat(item));
    }
    return out;
}

int cmd_fano3(const std::string& n, int r, const std::string& hcube,
              const std::string& curves, const std::string& points,
              const std::string& infnear) {
    Fano3Data d;
    d.n = Int(n);
    d.r = r;
    d.Hcube = Int(hcube);
    std::stringstream cs(curves);
    std::string item;
    while (std::getline(cs, item, ',')) {
        if (item.empty()) continue;
        auto colon = item.find(':');
        require(colon != std::string::npos, errc::invalid_input,
                "curve entries look like degree:multiplicity");
        d.curve_data.emplace_back(Int(item.substr(0, colon)),
                                  parse_rat(item.substr(colon + 1)));
    }
    d.point_data = parse_rat_list(points);
    d.infnear_data = parse_rat_list(infnear);
    auto rep = fano3_classify(d);
    ordered_json cj = ordered_json::array(), pj = ordered_json::array(),
                 ij = ordered_json::array();
    for (bool b : rep.curve_open) cj.push_back(b);
    for (bool b : rep.point_open) pj.push_back(b);
    for (bool b : rep.infnear_open) ij.push_back(b);
    ordered_json j{{"curve_threshold", rat_str(rep.curve_threshold)},
                   {"point_threshold", rat_str(rep.point_threshold)},
                   {"curve_degree_bound", int_str(rep.curve_degree_bound)},
                   {"curve_open", cj},
                   {"point_open", pj},
                   {"infnear_open", ij},
                   {"infnear_note", rep.infnear_note},
                   {"any_open", rep.any_open()}};
    std::cout << j.dump() << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact factorization of plane Cremona maps into elementary links"};
    app.require_subcommand(1);

    std::string type_str, map_path;
    bool json = false, verify = false;
    auto* factor = app.add_subcommand("factor", "factor a homaloidal type into links");
    factor->add_option("--type", type_str, "homaloidal type, e.g. \"2; 1,1,1\"");
    factor->add_option("--map", map_path, "map JSON file (or - for stdin)");
    factor->add_flag("--json", json, "emit the trace as JSON");
    factor->add_flag("--verify", verify, "re-run recompose (and the polynomial oracle)");

    std::string check_type;
    auto* check = app.add_subcommand("check", "verify the homaloidal identities");
    check->add_option("--type", check_type)->required();

    std::string deg_type;
    auto* degree = app.add_subcommand("degree", "print the degree triple (mu, lambda, e)");
    degree->add_option("--type", deg_type)->required();

    std::vector<std::string> map_paths;
    auto* comp = app.add_subcommand("compose", "compose two maps and reduce");
    comp->add_option("--map", map_paths, "map JSON file (twice; - for stdin)");

    unsigned long long seed = 0;
    int k = 1, height = 5;
    auto* corpus = app.add_subcommand("corpus", "emit a seeded corpus as JSON lines");
    corpus->add_option("--seed", seed)->required();
    corpus->add_option("--k", k)->required();
    corpus->add_option("--height", height)->required();

    std::string f_n, f_hcube = "1", f_curves, f_points, f_infnear;
    int f_r = 1;
    auto* fano3 = app.add_subcommand("fano3", "threefold threshold report");
    fano3->add_option("--n", f_n)->required();
    fano3->add_option("--r", f_r)->required();
    fano3->add_option("--hcube", f_hcube)->required();
    fano3->add_option("--curves", f_curves, "comma list of degree:multiplicity");
    fano3->add_option("--points", f_points, "comma list of multiplicities");
    fano3->add_option("--infnear", f_infnear, "comma list of multiplicities");

    try {
        app.parse(argc, argv);
        if (factor->parsed()) {
            if (type_str.empty() == map_path.empty())
                throw CLI::ValidationError("factor needs exactly one of --type / --map");
            return cmd_factor(type_str, map_path, json, verify);
        }
        if (check->parsed()) return cmd_check(check_type);
        if (degree->parsed()) return cmd_degree(deg_type);
        if (comp->parsed()) {
            if (map_paths.size() != 2)
                throw CLI::ValidationError("compose needs --map given exactly twice");
            return cmd_compose(map_paths);
        }
        if (corpus->parsed()) return cmd_corpus(seed, k, height);
        if (fano3->parsed())
            return cmd_fano3(f_n, f_r, f_hcube, f_curves, f_points, f_infnear);
        return 2;
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const error& e) {
        std::cout << ordered_json{{"error", e.name()}, {"detail", e.what()}}.dump() << "\n";
        return 1;
    } catch (const nlohmann::json::exception& e) {
        std::cout << ordered_json{{"error", "invalid_input"}, {"detail", e.what()}}.dump()
                  << "\n";
        return 1;
    }
}
