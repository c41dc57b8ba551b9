#include "epsweep/csv.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace epsweep {

namespace {

std::string idx(std::size_t i) { return "[" + std::to_string(i + 1) + "]"; }

std::vector<std::string> split_row(const std::string& line) {
    std::vector<std::string> out;
    std::size_t pos = 0;
    while (true) {
        const auto c = line.find(',', pos);
        out.push_back(line.substr(pos, c == std::string::npos ? std::string::npos : c - pos));
        if (c == std::string::npos) break;
        pos = c + 1;
    }
    return out;
}

double to_double(const std::string& s, std::size_t line) {
    double x = 0.0;
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
    if (ec != std::errc{} || p != s.data() + s.size())
        throw ValidationError("csv line " + std::to_string(line) + ": bad number '" + s + "'");
    return x;
}

bool next_line(std::istream& in, std::string& line) {
    if (!std::getline(in, line)) return false;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return true;
}

} // namespace

std::vector<std::string> csv_header(std::size_t n, const OutputSelection& sel) {
    std::vector<std::string> h{"a"};
    auto group = [&](bool on, const char* name) {
        if (!on) return;
        for (std::size_t i = 0; i < n; ++i) h.push_back(name + idx(i));
    };
    group(sel.energies, "E");
    group(sel.half_widths, "G2");
    group(sel.rigidity, "r");
    group(sel.norms, "A");
    if (sel.mixing)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) h.push_back("b2" + idx(i) + idx(j));
    return h;
}

std::size_t emit_csv(const SweepResult& result, std::ostream& out, const OutputSelection& sel) {
    if (result.points.empty()) throw ValidationError("empty sweep result");
    const std::size_t n = result.size();
    const auto header = csv_header(n, sel);
    for (std::size_t c = 0; c < header.size(); ++c) out << (c ? "," : "") << header[c];
    out << '\n';

    for (const auto& p : result.points) {
        std::string row = format_double(p.a);
        auto put = [&row](std::optional<double> v) {
            row.push_back(',');
            if (v) row += format_double(*v);
        };
        if (sel.energies)
            for (const auto& b : p.branches) put(b.energy());
        if (sel.half_widths)
            for (const auto& b : p.branches) put(b.half_width());
        if (sel.rigidity)
            for (const auto& b : p.branches) put(b.rigidity);
        if (sel.norms)
            for (const auto& b : p.branches) put(b.norm());
        if (sel.mixing) {
            for (const auto& b : p.branches) {
                const auto m = b.mixing();
                for (std::size_t j = 0; j < n; ++j) put(m ? std::optional<double>(std::norm((*m)[j])) : std::nullopt);
            }
        }
        out << row << '\n';
    }
    if (!out) throw IoError("csv write failed");
    return result.points.size();
}

void emit_events_csv(const SweepResult& result, std::ostream& out) {
    out << "kind,a_start,a_end,branch_i,branch_j\n";
    for (const auto& e : result.events) {
        out << to_string(e.kind) << ',' << format_double(e.a_start) << ',' << format_double(e.a_end) << ','
            << e.branch_i + 1 << ',' << e.branch_j + 1 << '\n';
    }
}

CsvFiles write_csv(const SweepResult& result, const std::filesystem::path& dir, const std::string& stem,
                   const OutputSelection& sel) {
    if (result.points.empty()) throw ValidationError("empty sweep result");
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create '" + dir.string() + "': " + ec.message());

    CsvFiles files{dir / (stem + ".csv"), dir / (stem + ".events.csv")};
    // Render fully before touching the files so a failure leaves nothing behind.
    std::ostringstream data, events;
    emit_csv(result, data, sel);
    emit_events_csv(result, events);
    for (const auto& [path, body] : {std::pair{files.data, data.str()}, std::pair{files.events, events.str()}}) {
        std::ofstream f(path, std::ios::binary);
        if (!f) throw IoError("cannot write '" + path.string() + "'");
        f << body;
        if (!f) throw IoError("write failed for '" + path.string() + "'");
    }
    return files;
}

std::size_t CsvTable::column(const std::string& name) const {
    for (std::size_t c = 0; c < header.size(); ++c)
        if (header[c] == name) return c;
    throw ValidationError("no column '" + name + "'");
}

CsvTable read_csv(std::istream& in) {
    CsvTable t;
    std::string line;
    if (!next_line(in, line)) throw ValidationError("csv: missing header");
    t.header = split_row(line);
    std::size_t lineno = 1;
    while (next_line(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        const auto fields = split_row(line);
        if (fields.size() != t.header.size())
            throw ValidationError("csv line " + std::to_string(lineno) + ": expected " +
                                  std::to_string(t.header.size()) + " fields, got " + std::to_string(fields.size()));
        auto& row = t.rows.emplace_back();
        row.reserve(fields.size());
        for (const auto& f : fields) row.push_back(f.empty() ? std::nullopt : std::optional(to_double(f, lineno)));
    }
    return t;
}

std::vector<EventRow> read_events_csv(std::istream& in) {
    std::string line;
    if (!next_line(in, line) || line != "kind,a_start,a_end,branch_i,branch_j")
        throw ValidationError("events csv: bad header");
    std::vector<EventRow> rows;
    std::size_t lineno = 1;
    while (next_line(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        const auto f = split_row(line);
        if (f.size() != 5) throw ValidationError("events csv line " + std::to_string(lineno) + ": expected 5 fields");
        rows.push_back({f[0], to_double(f[1], lineno), to_double(f[2], lineno),
                        static_cast<std::size_t>(to_double(f[3], lineno)),
                        static_cast<std::size_t>(to_double(f[4], lineno))});
    }
    return rows;
}

} // namespace epsweep
