#include "usgraph/io.hpp"

#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

namespace usgraph {

namespace {

[[noreturn]] void fail(int line_no, const std::string& what) {
    throw std::runtime_error("line " + std::to_string(line_no) + ": " + what);
}

struct Statement {
    std::string kind;
    int i = 0, j = 0;
    double weight = 0.0;
    bool has_weight = false;
};

// Shared line scanner for all graph-style formats.
template <typename Handler>
void scan_graph_lines(std::istream& in, bool weighted, Handler&& handle) {
    std::string line;
    int line_no = 0;
    int n = -1;
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream ls(line);
        std::string kind;
        if (!(ls >> kind) || kind[0] == '#') continue;
        if (kind == "n") {
            if (n != -1) fail(line_no, "duplicate node count");
            if (!(ls >> n) || n < 1 || n > kMaxNodes) fail(line_no, "bad node count");
            handle(line_no, Statement{kind, n, 0, 0.0, false});
            continue;
        }
        if (kind != "edge" && kind != "noedge" && kind != "biedge" && kind != "nobiedge")
            fail(line_no, "unknown statement '" + kind + "'");
        if (n == -1) fail(line_no, "statement before node count");
        Statement s;
        s.kind = kind;
        if (!(ls >> s.i >> s.j)) fail(line_no, "expected two node indices");
        if (s.i < 1 || s.i > n || s.j < 1 || s.j > n) fail(line_no, "node index out of range");
        if (weighted) {
            if (!(ls >> s.weight)) fail(line_no, "expected a weight");
            if (!(s.weight >= 0.0)) fail(line_no, "weight must be >= 0");
            s.has_weight = true;
        }
        std::string extra;
        if (ls >> extra) fail(line_no, "trailing tokens");
        handle(line_no, s);
    }
    if (n == -1) throw std::runtime_error("missing node count line 'n <count>'");
}

template <typename T>
T read_from_file(const std::string& path, T (*reader)(std::istream&)) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    try {
        return reader(in);
    } catch (const std::runtime_error& e) {
        throw std::runtime_error(path + ": " + e.what());
    }
}

}  // namespace

SystemGraph read_system_graph(std::istream& in) {
    SystemGraph g;
    scan_graph_lines(in, false, [&](int line_no, const Statement& s) {
        if (s.kind == "n") {
            g = SystemGraph(s.i);
        } else if (s.kind == "edge") {
            g.set_edge(s.i - 1, s.j - 1);
        } else {
            fail(line_no, "'" + s.kind + "' not allowed in a system graph");
        }
    });
    return g;
}

MeasurementGraph read_measurement_graph(std::istream& in) {
    MeasurementGraph m;
    scan_graph_lines(in, false, [&](int line_no, const Statement& s) {
        if (s.kind == "n") {
            m = MeasurementGraph(s.i);
        } else if (s.kind == "edge") {
            m.set_directed(s.i - 1, s.j - 1);
        } else if (s.kind == "biedge") {
            if (s.i == s.j) fail(line_no, "bidirected self-pair");
            m.set_bidirected(s.i - 1, s.j - 1);
        } else {
            fail(line_no, "'" + s.kind + "' not allowed in a measurement graph");
        }
    });
    return m;
}

EstimatedStructure read_estimated_structure(std::istream& in) {
    EstimatedStructure h;
    scan_graph_lines(in, false, [&](int line_no, const Statement& s) {
        if (s.kind == "n") {
            h = EstimatedStructure(s.i);
        } else if (s.kind == "edge") {
            h.set_directed(s.i - 1, s.j - 1, EdgeStatus::Present);
        } else if (s.kind == "noedge") {
            h.set_directed(s.i - 1, s.j - 1, EdgeStatus::Absent);
        } else {
            if (s.i == s.j) fail(line_no, "bidirected self-pair");
            h.set_bidirected(s.i - 1, s.j - 1,
                             s.kind == "biedge" ? EdgeStatus::Present : EdgeStatus::Absent);
        }
    });
    return h;
}

WeightedMeasurement read_weighted_measurement(std::istream& in) {
    WeightedMeasurement w;
    std::vector<char> dir_seen, bid_seen;
    int n = 0;
    scan_graph_lines(in, true, [&](int line_no, const Statement& s) {
        if (s.kind == "n") {
            n = s.i;
            w = WeightedMeasurement(n);
            dir_seen.assign(static_cast<std::size_t>(n) * n, 0);
            bid_seen.assign(static_cast<std::size_t>(n) * n, 0);
            return;
        }
        const int i = s.i - 1, j = s.j - 1;
        if (s.kind == "edge" || s.kind == "noedge") {
            if (dir_seen[static_cast<std::size_t>(i) * n + j]++)
                fail(line_no, "duplicate directed statement");
            w.set_directed(i, j, s.kind == "edge", s.weight);
        } else {
            if (i == j) fail(line_no, "bidirected self-pair");
            const int a = std::min(i, j), b = std::max(i, j);
            if (bid_seen[static_cast<std::size_t>(a) * n + b]++)
                fail(line_no, "duplicate bidirected statement");
            w.set_bidirected(i, j, s.kind == "biedge", s.weight);
        }
    });
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (!dir_seen[static_cast<std::size_t>(i) * n + j])
                throw std::runtime_error("missing directed statement for pair (" +
                                         std::to_string(i + 1) + "," + std::to_string(j + 1) + ")");
            if (i < j && !bid_seen[static_cast<std::size_t>(i) * n + j])
                throw std::runtime_error("missing bidirected statement for pair (" +
                                         std::to_string(i + 1) + "," + std::to_string(j + 1) + ")");
        }
    return w;
}

void write_system_graph(std::ostream& out, const SystemGraph& g) {
    out << "n " << g.num_nodes() << "\n";
    for (auto [i, j] : g.edges()) out << "edge " << i + 1 << " " << j + 1 << "\n";
}

void write_measurement_graph(std::ostream& out, const MeasurementGraph& m) {
    out << "n " << m.num_nodes() << "\n";
    for (int i = 0; i < m.num_nodes(); ++i)
        for (int j = 0; j < m.num_nodes(); ++j)
            if (m.directed(i, j)) out << "edge " << i + 1 << " " << j + 1 << "\n";
    for (int i = 0; i < m.num_nodes(); ++i)
        for (int j = i + 1; j < m.num_nodes(); ++j)
            if (m.bidirected(i, j)) out << "biedge " << i + 1 << " " << j + 1 << "\n";
}

void write_estimated_structure(std::ostream& out, const EstimatedStructure& h) {
    out << "n " << h.num_nodes() << "\n";
    for (int i = 0; i < h.num_nodes(); ++i)
        for (int j = 0; j < h.num_nodes(); ++j) {
            if (h.directed(i, j) == EdgeStatus::Present)
                out << "edge " << i + 1 << " " << j + 1 << "\n";
            else if (h.directed(i, j) == EdgeStatus::Absent)
                out << "noedge " << i + 1 << " " << j + 1 << "\n";
        }
    for (int i = 0; i < h.num_nodes(); ++i)
        for (int j = i + 1; j < h.num_nodes(); ++j) {
            if (h.bidirected(i, j) == EdgeStatus::Present)
                out << "biedge " << i + 1 << " " << j + 1 << "\n";
            else if (h.bidirected(i, j) == EdgeStatus::Absent)
                out << "nobiedge " << i + 1 << " " << j + 1 << "\n";
        }
}

void write_weighted_measurement(std::ostream& out, const WeightedMeasurement& w) {
    out << "n " << w.num_nodes() << "\n";
    std::ostringstream buf;
    buf << std::setprecision(17);
    for (int i = 0; i < w.num_nodes(); ++i)
        for (int j = 0; j < w.num_nodes(); ++j) {
            const auto& d = w.directed(i, j);
            buf << (d.present ? "edge " : "noedge ") << i + 1 << " " << j + 1 << " " << d.weight
                << "\n";
        }
    for (int i = 0; i < w.num_nodes(); ++i)
        for (int j = i + 1; j < w.num_nodes(); ++j) {
            const auto& b = w.bidirected(i, j);
            buf << (b.present ? "biedge " : "nobiedge ") << i + 1 << " " << j + 1 << " " << b.weight
                << "\n";
        }
    out << buf.str();
}

void write_solutions(std::ostream& out, const SolutionSet& s) {
    bool first = true;
    for (const auto& [g, u] : s.solutions) {
        if (!first) out << "---\n";
        first = false;
        out << "u " << u << "\n";
        write_system_graph(out, g);
    }
}

void write_solutions(std::ostream& out, const OptimalResult& r) {
    bool first = true;
    for (const auto& [g, u, c] : r.solutions) {
        if (!first) out << "---\n";
        first = false;
        out << "u " << u << "\n";
        write_system_graph(out, g);
    }
}

TimeSeries read_csv_matrix(std::istream& in) {
    std::vector<std::vector<double>> rows;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::vector<double> row;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) {
            try {
                row.push_back(std::stod(cell));
            } catch (const std::exception&) {
                fail(line_no, "bad numeric cell '" + cell + "'");
            }
        }
        if (!rows.empty() && row.size() != rows.front().size())
            fail(line_no, "inconsistent column count");
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw std::runtime_error("empty CSV input");
    TimeSeries m(static_cast<Eigen::Index>(rows.size()),
                 static_cast<Eigen::Index>(rows.front().size()));
    for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c)
            m(r, c) = rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
    return m;
}

void write_csv_matrix(std::ostream& out, const TimeSeries& m) {
    std::ostringstream buf;
    buf << std::setprecision(17);
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            if (c) buf << ",";
            buf << m(r, c);
        }
        buf << "\n";
    }
    out << buf.str();
}

SystemGraph read_system_graph_file(const std::string& path) {
    return read_from_file(path, read_system_graph);
}
EstimatedStructure read_estimated_structure_file(const std::string& path) {
    return read_from_file(path, read_estimated_structure);
}
WeightedMeasurement read_weighted_measurement_file(const std::string& path) {
    return read_from_file(path, read_weighted_measurement);
}
TimeSeries read_csv_matrix_file(const std::string& path) {
    return read_from_file(path, read_csv_matrix);
}

}  // namespace usgraph
