#include "bubbles/io.hpp"

#include <json.hpp>

#include <charconv>
#include <cmath>

namespace bubbles {

namespace {

using json = nlohmann::json;

const char* kModule = "io";

json vec_json(const Vec3& v) { return json::array({v[0], v[1], v[2]}); }

Vec3 json_vec(const json& j)
{
    if (!j.is_array() || j.size() != 3) throw Error(ErrorKind::io, kModule, "expected [x, y, z]");
    return Vec3(j[0].get<double>(), j[1].get<double>(), j[2].get<double>());
}

}  // namespace

std::string format_number(double v)
{
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string csv_escape(const std::string& field)
{
    if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::string>& header)
    : out_(path, std::ios::binary), path_(path), columns_(header.size())
{
    if (!out_) throw Error(ErrorKind::io, kModule, "cannot write '" + path + "'");
    row(header);
}

void CsvWriter::row(const std::vector<std::string>& fields)
{
    if (fields.size() != columns_) throw Error(ErrorKind::io, kModule, "row width mismatch in '" + path_ + "'");
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out_ << ',';
        out_ << csv_escape(fields[i]);
    }
    out_ << "\r\n";
}

void CsvWriter::close()
{
    out_.close();
    if (!out_) throw Error(ErrorKind::io, kModule, "error while writing '" + path_ + "'");
}

void write_far_field_csv(const std::string& path, const FarFieldPattern& p)
{
    CsvWriter w(path, {"dirX", "dirY", "dirZ", "reU", "imU", "absU"});
    for (std::size_t j = 0; j < p.directions.size(); ++j) {
        const Vec3& d = p.directions[j];
        const cplx u = p.values[j];
        w.row({format_number(d[0]), format_number(d[1]), format_number(d[2]), format_number(u.real()), format_number(u.imag()),
               format_number(std::abs(u))});
    }
    w.close();
}

void write_text_file(const std::string& path, const std::string& content)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::io, kModule, "cannot write '" + path + "'");
    out << content;
    if (!out) throw Error(ErrorKind::io, kModule, "error while writing '" + path + "'");
}

std::string cluster_to_json(const Cluster& c)
{
    json j;
    j["a"] = c.realizedStats.a;
    j["s"] = c.s;
    j["t"] = c.t;
    j["seed"] = c.seed;
    j["M"] = c.size();
    j["d"] = std::isfinite(c.realizedStats.d) ? json(c.realizedStats.d) : json(nullptr);
    json list = json::array();
    for (const BubbleShape& b : c.bubbles) {
        json e;
        e["kind"] = to_string(b.kind);
        e["center"] = vec_json(b.center);
        e["scale"] = b.scale;
        json params;
        switch (b.kind) {
        case ShapeKind::sphere: params["radius"] = b.radius; break;
        case ShapeKind::ellipsoid: params["semiAxes"] = vec_json(b.semiAxes); break;
        case ShapeKind::mesh: {
            json v = json::array(), t = json::array();
            for (const Vec3& x : b.mesh->vertices) v.push_back(vec_json(x));
            for (const auto& tri : b.mesh->triangles) t.push_back(json::array({tri[0], tri[1], tri[2]}));
            params["vertices"] = v;
            params["triangles"] = t;
            break;
        }
        }
        e["params"] = params;
        list.push_back(e);
    }
    j["bubbles"] = list;
    return j.dump(2) + "\n";
}

Cluster cluster_from_json(const std::string& text)
{
    try {
        json j = json::parse(text);
        std::vector<BubbleShape> bubbles;
        for (const json& e : j.at("bubbles")) {
            const std::string kind = e.at("kind").get<std::string>();
            const json& p = e.at("params");
            BubbleShape b;
            if (kind == "sphere") b = BubbleShape::sphere(p.at("radius").get<double>());
            else if (kind == "ellipsoid") b = BubbleShape::ellipsoid(json_vec(p.at("semiAxes")));
            else if (kind == "mesh") {
                TriMesh m;
                for (const json& v : p.at("vertices")) m.vertices.push_back(json_vec(v));
                for (const json& t : p.at("triangles")) m.triangles.push_back({t.at(0).get<int>(), t.at(1).get<int>(), t.at(2).get<int>()});
                b = BubbleShape::from_mesh(std::move(m));
            } else throw Error(ErrorKind::io, kModule, "unknown bubble kind '" + kind + "'");
            b.scale = e.value("scale", 1.0);
            b.center = json_vec(e.at("center"));
            bubbles.push_back(std::move(b));
        }
        Cluster c = make_cluster(std::move(bubbles), j.value("s", 0.0), j.value("t", 0.0));
        c.seed = j.value("seed", std::uint64_t{0});
        return c;
    } catch (const json::exception& e) {
        throw Error(ErrorKind::io, kModule, std::string("malformed cluster JSON: ") + e.what());
    }
}

}  // namespace bubbles
