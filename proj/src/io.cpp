#include "cms/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "cms/errors.hpp"

namespace cms {

namespace {

using nlohmann::json;

std::string cell(double v) {
    return std::isfinite(v) ? fmt17(v) : std::string();
}

void append_number_array(std::string& out, const std::vector<double>& v) {
    out += '[';
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i)
            out += ", ";
        out += fmt17(v[i]);
    }
    out += ']';
}

const char* piece_type_name(PieceKind kind) {
    switch (kind) {
    case PieceKind::polynomial: return "polynomial";
    case PieceKind::reciprocal_polynomial: return "reciprocal-polynomial";
    case PieceKind::tabulated: return "tabulated";
    }
    return "polynomial";
}

PieceKind piece_type_from_name(const std::string& name) {
    if (name == "polynomial")
        return PieceKind::polynomial;
    if (name == "reciprocal-polynomial")
        return PieceKind::reciprocal_polynomial;
    if (name == "tabulated")
        return PieceKind::tabulated;
    throw validation_error("weight spec: unknown piece type \"" + name + "\"");
}

std::vector<double> number_array(const json& j, const std::string& what) {
    if (!j.is_array())
        throw validation_error("weight spec: " + what + " must be an array");
    std::vector<double> out;
    out.reserve(j.size());
    for (const auto& e : j) {
        if (!e.is_number())
            throw validation_error("weight spec: " + what + " must hold numbers");
        out.push_back(e.get<double>());
    }
    return out;
}

double number_field(const json& j, const std::string& key) {
    if (!j.contains(key) || !j[key].is_number())
        throw validation_error("weight spec: missing numeric field \"" + key + "\"");
    return j[key].get<double>();
}

std::vector<std::string> split_line(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

double parse_double(const std::string& s, const std::string& what) {
    if (s.empty())
        return std::nan("");
    const char* p = s.c_str();
    char* end = nullptr;
    double v = std::strtod(p, &end);
    if (end == p)
        throw validation_error("cannot parse number \"" + s + "\" in " + what);
    return v;
}

// key=value pairs from a "# name k1=v1 k2=v2" comment line
double header_value(const std::string& line, const std::string& key, const std::string& what) {
    std::string needle = " " + key + "=";
    auto pos = line.find(needle);
    if (pos == std::string::npos)
        throw validation_error(what + ": header missing " + key);
    return parse_double(line.substr(pos + needle.size(),
                                    line.find(' ', pos + needle.size()) - pos - needle.size()),
                        what);
}

} // namespace

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string weight_spec_to_text(const WeightSpec& spec) {
    std::string out = "{\n  \"pieces\": [\n";
    for (std::size_t i = 0; i < spec.pieces.size(); ++i) {
        const Piece& piece = spec.pieces[i];
        out += "    {\"type\": \"";
        out += piece_type_name(piece.kind);
        out += "\", \"lo\": " + fmt17(piece.lo) + ", \"hi\": " + fmt17(piece.hi);
        if (piece.kind == PieceKind::tabulated) {
            out += ", \"samples_t\": ";
            append_number_array(out, piece.sample_t);
            out += ", \"samples_v\": ";
            append_number_array(out, piece.sample_v);
        } else {
            out += ", \"coeffs\": ";
            append_number_array(out, piece.coeffs);
        }
        out += (i + 1 < spec.pieces.size()) ? "},\n" : "}\n";
    }
    out += "  ],\n  \"breakpoints\": ";
    append_number_array(out, breakpoints(spec));
    out += ",\n  \"m\": " + fmt17(spec.m) + ",\n  \"M\": " + fmt17(spec.M);
    out += ",\n  \"regularity\": {\"kind\": \"";
    switch (spec.regularity.kind) {
    case RegularityKind::lipschitz:
        out += "lipschitz\", \"constant\": " + fmt17(spec.regularity.lip_constant);
        break;
    case RegularityKind::sobolev:
        out += "sobolev\", \"p\": " + fmt17(spec.regularity.sobolev_p) +
               ", \"norm\": " + fmt17(spec.regularity.sobolev_norm);
        break;
    case RegularityKind::piecewise_abs_cont:
        out += "piecewise-abs-cont\"";
        break;
    }
    out += "}\n}\n";
    return out;
}

WeightSpec weight_spec_from_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const std::exception& e) {
        throw validation_error(std::string("weight spec: JSON parse failure: ") + e.what());
    }
    if (!j.is_object() || !j.contains("pieces") || !j["pieces"].is_array())
        throw validation_error("weight spec: top level must be an object with a pieces array");

    std::vector<Piece> pieces;
    for (const auto& jp : j["pieces"]) {
        if (!jp.is_object() || !jp.contains("type") || !jp["type"].is_string())
            throw validation_error("weight spec: each piece needs a string type");
        Piece piece;
        piece.kind = piece_type_from_name(jp["type"].get<std::string>());
        piece.lo = number_field(jp, "lo");
        piece.hi = number_field(jp, "hi");
        if (piece.kind == PieceKind::tabulated) {
            piece.sample_t = number_array(jp.value("samples_t", json::array()), "samples_t");
            piece.sample_v = number_array(jp.value("samples_v", json::array()), "samples_v");
        } else {
            piece.coeffs = number_array(jp.value("coeffs", json::array()), "coeffs");
        }
        pieces.push_back(std::move(piece));
    }

    Regularity reg;
    if (j.contains("regularity")) {
        const json& jr = j["regularity"];
        if (!jr.is_object() || !jr.contains("kind") || !jr["kind"].is_string())
            throw validation_error("weight spec: regularity needs a string kind");
        std::string kind = jr["kind"].get<std::string>();
        if (kind == "lipschitz") {
            reg.kind = RegularityKind::lipschitz;
            reg.lip_constant = number_field(jr, "constant");
        } else if (kind == "sobolev") {
            reg.kind = RegularityKind::sobolev;
            reg.sobolev_p = number_field(jr, "p");
            reg.sobolev_norm = number_field(jr, "norm");
        } else if (kind == "piecewise-abs-cont") {
            reg.kind = RegularityKind::piecewise_abs_cont;
        } else {
            throw validation_error("weight spec: unknown regularity kind \"" + kind + "\"");
        }
    }

    WeightSpec spec = make_weight_spec(std::move(pieces), number_field(j, "m"),
                                       number_field(j, "M"), reg);

    if (j.contains("breakpoints")) {
        std::vector<double> declared = number_array(j["breakpoints"], "breakpoints");
        std::vector<double> actual = breakpoints(spec);
        if (declared != actual)
            throw validation_error(
                "weight spec: breakpoints field disagrees with the piece boundaries");
    }
    return spec;
}

void write_weight_spec(const WeightSpec& spec, const std::string& path) {
    write_text_file(path, weight_spec_to_text(spec));
}

WeightSpec read_weight_spec(const std::string& path) {
    return weight_spec_from_text(read_text_file(path));
}

std::string profile_to_csv(const Profile& prof) {
    std::string out = "x,pi,pi_lower,lambda,pi_prime,w,excluded\n";
    for (const ProfileRow& row : prof.rows) {
        out += fmt17(row.x);
        out += ',';
        out += row.ok ? cell(row.pi) : std::string();
        out += ',';
        out += row.ok ? cell(row.pi_lower) : std::string();
        out += ',';
        out += row.ok ? cell(row.lambda) : std::string();
        out += ',';
        out += (row.ok && !row.excluded) ? cell(row.pi_prime) : std::string();
        out += ',';
        out += cell(row.w);
        out += ',';
        out += row.excluded ? '1' : '0';
        out += '\n';
    }
    return out;
}

void write_profile_csv(const Profile& prof, const std::string& path) {
    write_text_file(path, profile_to_csv(prof));
}

std::string rep_to_csv(const CanonicalRep& rep) {
    double a = rep.param.a;
    double inv = std::isinf(a) ? 0.0 : (a == 0.0 ? std::numeric_limits<double>::infinity() : 1.0 / a);
    int sign = (a > 0) - (a < 0);
    std::string out = "# canonical-rep n=" + std::to_string(rep.n) +
                      " r=" + std::to_string(rep.param.r) + " a=" + fmt17(a) +
                      " a_sign=" + std::to_string(sign) + " inv_a=" + fmt17(inv) + "\n";
    out += "node,weight,index\n";
    for (const NodeEntry& e : rep.nodes)
        out += fmt17(e.t) + "," + fmt17(e.weight) + "," + std::to_string(e.index) + "\n";
    return out;
}

void write_rep_csv(const CanonicalRep& rep, const std::string& path) {
    write_text_file(path, rep_to_csv(rep));
}

CanonicalRep rep_from_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line.rfind("# canonical-rep", 0) != 0)
        throw validation_error("rep csv: missing \"# canonical-rep\" header");
    CanonicalRep rep;
    rep.n = static_cast<int>(header_value(line, "n", "rep csv"));
    rep.param.r = static_cast<int>(header_value(line, "r", "rep csv"));
    double a = header_value(line, "a", "rep csv");
    double sign = header_value(line, "a_sign", "rep csv");
    double inv = header_value(line, "inv_a", "rep csv");
    if (std::isfinite(a))
        rep.param.a = a;
    else if (inv == 0.0)
        rep.param.a = sign * std::numeric_limits<double>::infinity();
    else
        rep.param.a = 1.0 / inv;
    if (!std::getline(in, line) || line.rfind("node,weight,index", 0) != 0)
        throw validation_error("rep csv: missing node,weight,index header");
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        auto parts = split_line(line, ',');
        if (parts.size() != 3)
            throw validation_error("rep csv: row must have 3 fields");
        NodeEntry e;
        e.t = parse_double(parts[0], "rep csv node");
        e.weight = parse_double(parts[1], "rep csv weight");
        e.index = static_cast<int>(parse_double(parts[2], "rep csv index"));
        rep.nodes.push_back(e);
    }
    return rep;
}

std::string recurrence_to_csv(const RecurrenceTable& table) {
    std::string out = "# recurrence kind=";
    out += (table.kind == WeightKind::plain) ? "plain" : "circle-modified";
    out += " max_degree=" + std::to_string(table.max_degree()) + "\n";
    out += "k,alpha,beta,norm\n";
    for (std::size_t k = 0; k < table.alpha.size(); ++k)
        out += std::to_string(k) + "," + fmt17(table.alpha[k]) + "," + fmt17(table.beta[k]) +
               "," + fmt17(table.norm[k]) + "\n";
    return out;
}

void write_recurrence_csv(const RecurrenceTable& table, const std::string& path) {
    write_text_file(path, recurrence_to_csv(table));
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw validation_error("cannot open file for reading: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw validation_error("cannot open file for writing: " + path);
    out << content;
    if (!out.flush())
        throw validation_error("write failure: " + path);
}

} // namespace cms
