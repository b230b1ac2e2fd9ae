#include "sil/model_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace sil {

using ordered_json = nlohmann::ordered_json;

namespace {

ordered_json rotation_to_json(const RotationNumber& rho) {
    ordered_json j;
    if (rho.is_rational()) {
        j["type"] = "rational";
        j["p"] = static_cast<long>(rho.exact_value().get_num().get_si());
        j["q"] = static_cast<long>(rho.exact_value().get_den().get_si());
        return j;
    }
    std::string decimal = rho.decimal();
    int digits = rho.digits();
    if (decimal.empty()) {
        // Derived enclosure: emit the widest truncation that still encloses it.
        ExactReal v = rho.value();
        for (int d = std::max(digits, RotationNumber::kMinDigits);
             d >= RotationNumber::kMinDigits; --d) {
            Int den = 1;
            mpz_ui_pow_ui(den.get_mpz_t(), 10, d);
            Int num = floor_q(v.lo() * Rat(den));
            Rat lo(num, den);
            lo.canonicalize();
            Rat ulp(Int(1), den);
            ulp.canonicalize();
            if (lo + ulp >= v.hi()) {
                std::string s = num.get_str();
                if (static_cast<int>(s.size()) < d) s.insert(0, d - s.size(), '0');
                decimal = "0." + s;
                digits = d;
                break;
            }
        }
        if (decimal.empty())
            throw PrecisionError("cannot serialize rotation enclosure at " +
                                 std::to_string(RotationNumber::kMinDigits) +
                                 "+ digits");
    }
    j["type"] = "irrational";
    j["decimal"] = decimal;
    j["digits"] = digits;
    return j;
}

RotationNumber rotation_from_json(const ordered_json& j, const std::string& id) {
    std::string type = j.at("type").get<std::string>();
    if (type == "rational") {
        long p = j.at("p").get<long>();
        long q = j.at("q").get<long>();
        auto r = RotationNumber::rational(Rat(static_cast<long>(p),
                                              static_cast<long>(q)));
        r.set_id(id);
        return r;
    }
    if (type == "irrational")
        return RotationNumber::irrational(j.at("decimal").get<std::string>(),
                                          j.at("digits").get<int>(), id);
    throw ParseError("unknown rotation type: " + type);
}

ordered_json block_to_json(const BasicBlock& b) {
    ordered_json j;
    if (const auto* n1 = std::get_if<BlockN1>(&b)) {
        j["type"] = "N1";
        j["lambda"] = n1->lambda;
        j["b"] = n1->b;
    } else if (const auto* d = std::get_if<BlockD>(&b)) {
        j["type"] = "D";
        j["sign"] = d->sign > 0 ? "+" : "-";
    } else if (const auto* r = std::get_if<BlockR>(&b)) {
        j["type"] = "R";
        j["rho"] = rotation_to_json(r->rho);
    } else if (const auto* n2 = std::get_if<BlockN2>(&b)) {
        j["type"] = "N2";
        j["rho"] = rotation_to_json(n2->rho);
        j["trivial"] = n2->trivial;
    } else {
        j["type"] = "OffCircle";
        j["halfDim"] = std::get<BlockOffCircle>(b).half_dim;
    }
    return j;
}

BasicBlock block_from_json(const ordered_json& j, const std::string& rho_id) {
    std::string type = j.at("type").get<std::string>();
    if (type == "N1")
        return BlockN1{j.at("lambda").get<int>(), j.at("b").get<int>()};
    if (type == "D") {
        std::string s = j.at("sign").get<std::string>();
        if (s != "+" && s != "-") throw ParseError("D sign must be '+' or '-'");
        return BlockD{s == "+" ? 1 : -1};
    }
    if (type == "R") return BlockR{rotation_from_json(j.at("rho"), rho_id)};
    if (type == "N2")
        return BlockN2{rotation_from_json(j.at("rho"), rho_id),
                       j.at("trivial").get<bool>()};
    if (type == "OffCircle") return BlockOffCircle{j.at("halfDim").get<int>()};
    throw ParseError("unknown block type: " + type);
}

std::string rho_id_for(const std::string& orbit, size_t block_index) {
    return orbit + "." + std::to_string(block_index);
}

} // namespace

std::string content_hash(const std::string& bytes) {
    unsigned long h = 0xcbf29ce484222325ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    std::ostringstream os;
    os << "fnv1a64:" << std::hex << h;
    return os.str();
}

SurfaceModel parse_model(const std::string& json_text) {
    ordered_json j;
    try {
        j = ordered_json::parse(json_text);
    } catch (const std::exception& e) {
        throw ParseError(std::string("model file is not valid JSON: ") + e.what());
    }
    try {
        if (j.value("format", std::string()) != "sil-model")
            throw ParseError("not a sil-model file");
        int n = j.at("n").get<int>();
        std::vector<PrimeCharacteristic> chars;
        for (const auto& cj : j.at("characteristics")) {
            PrimeCharacteristic c;
            c.name = cj.at("name").get<std::string>();
            long idx = cj.at("initial_index").get<long>();
            std::vector<BasicBlock> blocks;
            size_t bi = 0;
            for (const auto& bj : cj.at("blocks"))
                blocks.push_back(block_from_json(bj, rho_id_for(c.name, bi++)));
            c.germ = PathGerm{idx, NormalForm(std::move(blocks)), c.name};
            chars.push_back(std::move(c));
        }
        std::vector<Relation> relations;
        if (j.contains("relations")) {
            for (const auto& rj : j.at("relations")) {
                Relation rel;
                for (const auto& tj : rj.at("terms")) {
                    std::string orbit = tj.at("orbit").get<std::string>();
                    size_t block = tj.at("block").get<size_t>();
                    Rat coeff = rat_from_string(tj.at("coeff").is_string()
                                                    ? tj.at("coeff").get<std::string>()
                                                    : std::to_string(tj.at("coeff").get<long>()));
                    rel.terms.emplace_back(coeff, rho_id_for(orbit, block));
                }
                rel.rhs = rat_from_string(rj.at("rhs").is_string()
                                              ? rj.at("rhs").get<std::string>()
                                              : std::to_string(rj.at("rhs").get<long>()));
                relations.push_back(std::move(rel));
            }
        }
        return SurfaceModel(n, std::move(chars), RelationSet(std::move(relations)));
    } catch (const ordered_json::exception& e) {
        throw ParseError(std::string("malformed model file: ") + e.what());
    }
}

std::string emit_model(const SurfaceModel& model, const std::string& name) {
    ordered_json j;
    j["format"] = "sil-model";
    j["version"] = 1;
    if (!name.empty()) j["metadata"] = ordered_json{{"name", name}};
    j["n"] = model.n();
    j["characteristics"] = ordered_json::array();
    for (const auto& c : model.characteristics()) {
        ordered_json cj;
        cj["name"] = c.name;
        cj["initial_index"] = c.germ.initial_index;
        cj["blocks"] = ordered_json::array();
        for (const auto& b : c.germ.end_form.blocks())
            cj["blocks"].push_back(block_to_json(b));
        j["characteristics"].push_back(std::move(cj));
    }
    if (!model.relations().empty()) {
        j["relations"] = ordered_json::array();
        for (const auto& rel : model.relations().relations()) {
            ordered_json rj;
            rj["terms"] = ordered_json::array();
            for (const auto& [coeff, id] : rel.terms) {
                auto dot = id.rfind('.');
                ordered_json tj;
                tj["orbit"] = id.substr(0, dot);
                tj["block"] = std::stoul(id.substr(dot + 1));
                tj["coeff"] = rat_to_string(coeff);
                rj["terms"].push_back(std::move(tj));
            }
            rj["rhs"] = rat_to_string(rel.rhs);
            j["relations"].push_back(std::move(rj));
        }
    }
    return j.dump(2) + "\n";
}

SurfaceModel parse_model_file(const std::string& path, std::string* raw) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open model file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    if (raw) *raw = buf.str();
    return parse_model(buf.str());
}

void write_file(const std::string& path, const std::string& bytes) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write file: " + path);
    out << bytes;
}

AbstractJumpInstance parse_abstract_instance(const std::string& json_text,
                                             Rat default_delta) {
    ordered_json j;
    try {
        j = ordered_json::parse(json_text);
    } catch (const std::exception& e) {
        throw ParseError(std::string("instance file is not valid JSON: ") + e.what());
    }
    try {
        Rat delta = j.contains("delta")
                        ? rat_from_string(j.at("delta").get<std::string>())
                        : default_delta;
        std::vector<AbstractRow> rows;
        int ri = 0;
        for (const auto& rj : j.at("rows")) {
            AbstractRow row;
            row.beta = rj.at("beta").get<long>();
            row.label = rj.value("label", "row" + std::to_string(ri + 1));
            int ai = 0;
            if (rj.contains("alphas")) {
                for (const auto& aj : rj.at("alphas")) {
                    if (aj.at("type").get<std::string>() == "rational") {
                        row.alphas.push_back(AlphaValue::from_rat(
                            rat_from_string(aj.at("value").get<std::string>())));
                    } else {
                        long whole = aj.value("whole", 0ll);
                        RotationNumber frac = RotationNumber::irrational(
                            aj.at("decimal").get<std::string>(),
                            aj.at("digits").get<int>(),
                            row.label + ".alpha" + std::to_string(ai));
                        ExactReal v = frac.value() + ExactReal(Rat(whole));
                        row.alphas.push_back(AlphaValue::from_irrational(
                            v, row.label + ".alpha" + std::to_string(ai)));
                    }
                    ai++;
                }
            }
            rows.push_back(std::move(row));
            ri++;
        }
        return AbstractJumpInstance(std::move(rows), delta);
    } catch (const ordered_json::exception& e) {
        throw ParseError(std::string("malformed instance file: ") + e.what());
    }
}

namespace {

ordered_json checks_to_json(const std::vector<CheckRecord>& checks) {
    ordered_json arr = ordered_json::array();
    for (const auto& c : checks) {
        ordered_json cj;
        cj["display"] = c.display;
        if (!c.orbit.empty()) cj["orbit"] = c.orbit;
        if (c.m != 0) cj["m"] = c.m;
        cj["lhs"] = c.lhs;
        cj["rhs"] = c.rhs;
        cj["pass"] = c.pass;
        arr.push_back(std::move(cj));
    }
    return arr;
}

} // namespace

std::string emit_certificate(const JumpCertificate& cert,
                             const std::string& model_hash) {
    ordered_json j;
    j["format"] = "sil-certificate";
    j["tool"] = kToolVersion;
    j["model_hash"] = model_hash;
    j["N"] = cert.N.get_str();
    j["M"] = cert.M.get_str();
    j["mbar"] = cert.mbar;
    j["delta"] = rat_to_string(cert.delta);
    j["eps"] = rat_to_string(cert.eps);
    j["eps_achieved"] = rat_to_string(cert.eps_achieved);
    j["varrho"] = cert.varrho;
    j["chi"] = cert.chi;
    j["chi_rot"] = cert.chi_rot;
    j["m"] = ordered_json::array();
    for (const auto& m : cert.m) j["m"].push_back(m.get_str());
    j["Delta"] = cert.Delta;
    j["C"] = cert.C;
    j["Q"] = ordered_json::array();
    for (const auto& qmap : cert.Q) {
        ordered_json qa = ordered_json::array();
        for (const auto& [m, v] : qmap)
            qa.push_back(ordered_json{{"m", m}, {"value", v}});
        j["Q"].push_back(std::move(qa));
    }
    j["checks"] = checks_to_json(cert.checks);
    return j.dump(2) + "\n";
}

JumpCertificate parse_certificate(const std::string& json_text,
                                  std::string* model_hash) {
    ordered_json j;
    try {
        j = ordered_json::parse(json_text);
    } catch (const std::exception& e) {
        throw ParseError(std::string("certificate is not valid JSON: ") + e.what());
    }
    try {
        if (j.value("format", std::string()) != "sil-certificate")
            throw ParseError("not a sil-certificate file");
        if (model_hash) *model_hash = j.value("model_hash", std::string());
        JumpCertificate cert;
        cert.N = Int(j.at("N").get<std::string>());
        cert.M = Int(j.at("M").get<std::string>());
        cert.mbar = j.at("mbar").get<long>();
        cert.delta = rat_from_string(j.at("delta").get<std::string>());
        cert.eps = rat_from_string(j.at("eps").get<std::string>());
        cert.eps_achieved = rat_from_string(j.at("eps_achieved").get<std::string>());
        cert.varrho = j.at("varrho").get<std::vector<int>>();
        cert.chi = j.at("chi").get<std::vector<int>>();
        cert.chi_rot = j.at("chi_rot").get<std::vector<std::vector<int>>>();
        for (const auto& mj : j.at("m")) cert.m.push_back(Int(mj.get<std::string>()));
        cert.Delta = j.at("Delta").get<std::vector<long>>();
        cert.C = j.at("C").get<std::vector<long>>();
        for (const auto& qa : j.at("Q")) {
            std::map<long, long> qmap;
            for (const auto& qj : qa)
                qmap[qj.at("m").get<long>()] = qj.at("value").get<long>();
            cert.Q.push_back(std::move(qmap));
        }
        return cert;
    } catch (const ordered_json::exception& e) {
        throw ParseError(std::string("malformed certificate: ") + e.what());
    }
}

std::string emit_report(const LedgerReport& report, const std::string& model_hash) {
    ordered_json j;
    j["format"] = "sil-report";
    j["tool"] = kToolVersion;
    j["model_hash"] = model_hash;
    j["window"] = ordered_json{{"lo", report.window_lo}, {"hi", report.window_hi}};
    j["N"] = report.cert.N.get_str();
    j["N_dual"] = report.dual.N.get_str();
    j["eps_halvings"] = report.eps_halvings;
    j["counts"] = ordered_json{{"plus_even", report.counts.plus_even},
                               {"plus_odd", report.counts.plus_odd},
                               {"minus_even", report.counts.minus_even},
                               {"minus_odd", report.counts.minus_odd}};
    j["counts_dual"] = ordered_json{{"plus_even", report.counts_dual.plus_even},
                                    {"plus_odd", report.counts_dual.plus_odd},
                                    {"minus_even", report.counts_dual.minus_even},
                                    {"minus_odd", report.counts_dual.minus_odd}};
    j["morse_alternating_sum"] = report.morse_alt_sum.get_str();
    j["betti_alternating_sum"] = report.betti_alt_sum.get_str();
    ordered_json morse = ordered_json::array();
    for (const auto& [p, c] : report.morse)
        morse.push_back(ordered_json{{"p", p}, {"count", c}});
    j["morse_numbers"] = std::move(morse);
    j["multiplicity_bound"] = report.multiplicity_bound;
    j["non_hyperbolic"] = report.non_hyperbolic;
    j["log"] = report.log;
    return j.dump(2) + "\n";
}

std::string emit_ellipsoid_model(const EllipsoidSpec& spec) {
    SurfaceModel model = ellipsoid(spec);
    return emit_model(model, "ellipsoid");
}

} // namespace sil
