#include "vring/snapshot.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "vring/numfmt.hpp"

namespace vring {

VorticityField FieldSnapshot::vorticity() const {
    if (!strength_cap)
        throw IoError("snapshot '" + name + "' has no strength cap, not a vorticity field");
    return VorticityField::from_values(field.grid, *strength_cap, field.values);
}

void write_snapshot(std::ostream& out, const ScalarField& field, const std::string& name,
                    double time, std::optional<double> strength_cap) {
    nlohmann::ordered_json header;
    header["format"] = "axi-field-v1";
    header["name"] = name;
    header["time"] = time;
    header["nr"] = field.grid.nr;
    header["nz"] = field.grid.nz;
    header["r_max"] = field.grid.r_max;
    header["z_min"] = field.grid.z_min;
    header["z_max"] = field.grid.z_max;
    if (strength_cap)
        header["strength_cap"] = *strength_cap;
    else
        header["strength_cap"] = nullptr;
    out << header.dump() << '\n';
    out << "i,j,r,z,value\n";
    for (int i = 0; i < field.grid.nr; ++i)
        for (int j = 0; j < field.grid.nz; ++j) {
            out << i << ',' << j << ',' << format_double(field.grid.r(i)) << ','
                << format_double(field.grid.z(j)) << ','
                << format_double(field.at(i, j)) << '\n';
        }
}

void write_snapshot(const std::string& path, const ScalarField& field, const std::string& name,
                    double time, std::optional<double> strength_cap) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    write_snapshot(out, field, name, time, strength_cap);
    if (!out) throw IoError("write failed for '" + path + "'");
}

void write_snapshot(const std::string& path, const VorticityField& field,
                    const std::string& name, double time) {
    write_snapshot(path, static_cast<const ScalarField&>(field), name, time,
                   field.strength_cap);
}

FieldSnapshot read_snapshot(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw IoError("snapshot: missing header line");
    nlohmann::json header;
    try {
        header = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
        throw IoError(std::string("snapshot: bad JSON header: ") + e.what());
    }
    if (header.value("format", "") != std::string("axi-field-v1"))
        throw IoError("snapshot: unknown format tag");
    FieldSnapshot snap;
    snap.name = header.value("name", "");
    snap.time = header.value("time", 0.0);
    AxiGrid grid(header.at("nr").get<int>(), header.at("nz").get<int>(),
                 header.at("r_max").get<double>(), header.at("z_min").get<double>(),
                 header.at("z_max").get<double>());
    if (header.contains("strength_cap") && !header["strength_cap"].is_null())
        snap.strength_cap = header["strength_cap"].get<double>();
    if (!std::getline(in, line) || line != "i,j,r,z,value")
        throw IoError("snapshot: missing column header");
    snap.field = ScalarField::zeros(grid);
    for (std::size_t row = 0; row < grid.size(); ++row) {
        if (!std::getline(in, line))
            throw IoError("snapshot: truncated body");
        std::size_t p0 = line.find(',');
        std::size_t p1 = line.find(',', p0 + 1);
        std::size_t p2 = line.find(',', p1 + 1);
        std::size_t p3 = line.find(',', p2 + 1);
        if (p0 == std::string::npos || p1 == std::string::npos || p2 == std::string::npos ||
            p3 == std::string::npos)
            throw IoError("snapshot: malformed row '" + line + "'");
        const long i = parse_long(std::string_view(line).substr(0, p0));
        const long j = parse_long(std::string_view(line).substr(p0 + 1, p1 - p0 - 1));
        if (i < 0 || i >= grid.nr || j < 0 || j >= grid.nz)
            throw IoError("snapshot: node index out of range");
        snap.field.values[grid.index(static_cast<int>(i), static_cast<int>(j))] =
            parse_double(std::string_view(line).substr(p3 + 1));
    }
    return snap;
}

FieldSnapshot read_snapshot(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "' for reading");
    return read_snapshot(in);
}

} // namespace vring
