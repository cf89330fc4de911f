#include "sgr/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "sgr/error.hpp"

namespace sgr {

namespace {

// Shortest representation that parses back to the same bits.
std::string fmt_double(double v) {
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

bool blank_or_comment(const std::string& line) {
    for (const char c : line) {
        if (c == '#') return true;
        if (!std::isspace(static_cast<unsigned char>(c))) return false;
    }
    return true;
}

}  // namespace

void save_edge_list(std::ostream& os, const Graph& g) {
    os << "n " << g.n << "\n";
    if (g.label) os << "label " << *g.label << "\n";
    for (const Edge& e : edge_list(g)) {
        os << e.u << " " << e.v;
        if (e.w != 1.0) os << " " << fmt_double(e.w);
        os << "\n";
    }
    if (g.features) {
        os << "features " << g.features->cols() << "\n";
        for (std::size_t i = 0; i < g.features->rows(); ++i) {
            for (std::size_t j = 0; j < g.features->cols(); ++j) {
                if (j) os << " ";
                os << fmt_double((*g.features)(i, j));
            }
            os << "\n";
        }
    }
}

void save_edge_list_file(const std::string& path, const Graph& g) {
    std::ofstream out(path);
    require(out.good(), "cannot open ", path, " for writing");
    save_edge_list(out, g);
    require(out.good(), "write failed for ", path);
}

Graph load_edge_list(std::istream& is, const std::string& name) {
    std::string line;
    std::size_t lineno = 0;
    std::size_t n = 0;
    bool have_n = false;
    std::optional<int> label;
    std::vector<Edge> edges;
    std::optional<Matrix> features;
    std::size_t feature_rows_read = 0;

    while (std::getline(is, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (blank_or_comment(line)) continue;
        std::istringstream iss(line);

        if (features && feature_rows_read < n) {
            for (std::size_t j = 0; j < features->cols(); ++j) {
                double v = 0.0;
                require(static_cast<bool>(iss >> v), name, " line ", lineno,
                        ": expected ", features->cols(), " feature values");
                (*features)(feature_rows_read, j) = v;
            }
            std::string extra;
            require(!(iss >> extra), name, " line ", lineno, ": trailing token '", extra, "'");
            ++feature_rows_read;
            continue;
        }

        std::string head;
        iss >> head;
        bool edge_line = false;
        if (!have_n) {
            require(head == "n", name, " line ", lineno, ": expected 'n <count>' header");
            long long count = -1;
            require(static_cast<bool>(iss >> count) && count >= 0, name, " line ", lineno,
                    ": bad node count");
            n = static_cast<std::size_t>(count);
            have_n = true;
        } else if (head == "label") {
            require(!label.has_value(), name, " line ", lineno, ": duplicate label line");
            int value = 0;
            require(static_cast<bool>(iss >> value), name, " line ", lineno, ": bad label");
            label = value;
        } else if (head == "features") {
            require(!features.has_value(), name, " line ", lineno,
                    ": duplicate features block");
            long long cols = -1;
            require(static_cast<bool>(iss >> cols) && cols > 0, name, " line ", lineno,
                    ": bad feature dimension");
            features = Matrix(n, static_cast<std::size_t>(cols));
        } else {
            edge_line = true;
            Edge e;
            std::istringstream es(line);
            long long u = -1, v = -1;
            require(static_cast<bool>(es >> u >> v) && u >= 0 && v >= 0, name, " line ",
                    lineno, ": expected 'u v [weight]'");
            e.u = static_cast<std::size_t>(u);
            e.v = static_cast<std::size_t>(v);
            std::string tail;
            if (es >> tail) {
                char* end = nullptr;
                e.w = std::strtod(tail.c_str(), &end);
                require(end == tail.c_str() + tail.size() && std::isfinite(e.w), name,
                        " line ", lineno, ": bad weight '", tail, "'");
                std::string extra;
                require(!(es >> extra), name, " line ", lineno, ": trailing token '", extra,
                        "'");
            }
            edges.push_back(e);
        }
        if (!edge_line) {
            std::string extra;
            require(!(iss >> extra), name, " line ", lineno, ": trailing token '", extra, "'");
        }
    }
    require(have_n, name, ": missing 'n <count>' header");
    require(!features || feature_rows_read == n, name, ": features block ended after ",
            feature_rows_read, " of ", n, " rows");

    Graph g = build_graph(n, edges);
    g.label = label;
    g.features = std::move(features);
    return g;
}

Graph load_edge_list_file(const std::string& path) {
    std::ifstream in(path);
    require(in.good(), "cannot open ", path);
    return load_edge_list(in, path);
}

namespace {

std::vector<std::string> read_lines(const std::string& path) {
    std::ifstream in(path);
    require(in.good(), "cannot open ", path);
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        lines.push_back(line);
    }
    while (!lines.empty() && blank_or_comment(lines.back())) lines.pop_back();
    return lines;
}

long long parse_int(const std::string& line, const std::string& path, std::size_t lineno) {
    std::istringstream iss(line);
    long long v = 0;
    require(static_cast<bool>(iss >> v), path, " line ", lineno, ": expected an integer");
    return v;
}

}  // namespace

std::vector<Graph> load_tu_dataset(const std::string& dir, const std::string& name) {
    const std::string base = dir + "/" + name;
    const std::vector<std::string> indicator = read_lines(base + "_graph_indicator.txt");
    const std::vector<std::string> label_lines = read_lines(base + "_graph_labels.txt");
    const std::vector<std::string> edge_lines = read_lines(base + "_A.txt");

    const std::size_t total_nodes = indicator.size();
    require(total_nodes > 0, base, "_graph_indicator.txt is empty");
    const std::size_t graph_count = label_lines.size();
    require(graph_count > 0, base, "_graph_labels.txt is empty");

    // graph id and local index per global node
    std::vector<std::size_t> node_graph(total_nodes), node_local(total_nodes);
    std::vector<std::size_t> graph_size(graph_count, 0);
    for (std::size_t i = 0; i < total_nodes; ++i) {
        const long long gid = parse_int(indicator[i], base + "_graph_indicator.txt", i + 1);
        require(gid >= 1 && static_cast<std::size_t>(gid) <= graph_count,
                base, "_graph_indicator.txt line ", i + 1, ": graph id ", gid,
                " outside 1..", graph_count);
        node_graph[i] = static_cast<std::size_t>(gid) - 1;
        node_local[i] = graph_size[node_graph[i]]++;
    }

    // labels remapped to 0..C-1 in sorted order
    std::vector<long long> raw_labels(graph_count);
    std::set<long long> label_values;
    for (std::size_t gi = 0; gi < graph_count; ++gi) {
        raw_labels[gi] = parse_int(label_lines[gi], base + "_graph_labels.txt", gi + 1);
        label_values.insert(raw_labels[gi]);
    }
    std::map<long long, int> remap;
    for (const long long v : label_values) remap[v] = static_cast<int>(remap.size());

    std::vector<std::set<std::pair<std::size_t, std::size_t>>> edges(graph_count);
    for (std::size_t li = 0; li < edge_lines.size(); ++li) {
        if (blank_or_comment(edge_lines[li])) continue;
        std::string cleaned = edge_lines[li];
        std::replace(cleaned.begin(), cleaned.end(), ',', ' ');
        std::istringstream iss(cleaned);
        long long u = 0, v = 0;
        require(static_cast<bool>(iss >> u >> v), base, "_A.txt line ", li + 1,
                ": expected 'u, v'");
        require(u >= 1 && static_cast<std::size_t>(u) <= total_nodes && v >= 1 &&
                    static_cast<std::size_t>(v) <= total_nodes,
                base, "_A.txt line ", li + 1, ": node id outside 1..", total_nodes);
        const std::size_t gu = static_cast<std::size_t>(u) - 1;
        const std::size_t gv = static_cast<std::size_t>(v) - 1;
        require(node_graph[gu] == node_graph[gv], base, "_A.txt line ", li + 1,
                ": edge joins nodes of different graphs");
        require(gu != gv, base, "_A.txt line ", li + 1, ": self loop");
        const std::size_t a = std::min(node_local[gu], node_local[gv]);
        const std::size_t b = std::max(node_local[gu], node_local[gv]);
        edges[node_graph[gu]].insert({a, b});
    }

    std::optional<Matrix> all_attrs;
    {
        std::ifstream probe(base + "_node_attributes.txt");
        if (probe.good()) {
            const std::vector<std::string> attr_lines = read_lines(base + "_node_attributes.txt");
            require(attr_lines.size() == total_nodes, base,
                    "_node_attributes.txt has ", attr_lines.size(), " rows for ", total_nodes,
                    " nodes");
            std::size_t dim = 0;
            for (std::size_t i = 0; i < total_nodes; ++i) {
                std::string cleaned = attr_lines[i];
                std::replace(cleaned.begin(), cleaned.end(), ',', ' ');
                std::istringstream iss(cleaned);
                std::vector<double> row;
                double v = 0.0;
                while (iss >> v) row.push_back(v);
                require(!row.empty(), base, "_node_attributes.txt line ", i + 1, ": no values");
                if (i == 0) {
                    dim = row.size();
                    all_attrs = Matrix(total_nodes, dim);
                }
                require(row.size() == dim, base, "_node_attributes.txt line ", i + 1,
                        ": expected ", dim, " values, got ", row.size());
                for (std::size_t j = 0; j < dim; ++j) (*all_attrs)(i, j) = row[j];
            }
        }
    }

    std::vector<Graph> graphs;
    graphs.reserve(graph_count);
    for (std::size_t gi = 0; gi < graph_count; ++gi) {
        std::vector<Edge> e;
        e.reserve(edges[gi].size());
        for (const auto& [u, v] : edges[gi]) e.push_back(Edge{u, v, 1.0});
        Graph g = build_graph(graph_size[gi], e);
        g.label = remap.at(raw_labels[gi]);
        graphs.push_back(std::move(g));
    }
    if (all_attrs) {
        for (std::size_t gi = 0; gi < graph_count; ++gi)
            graphs[gi].features = Matrix(graph_size[gi], all_attrs->cols());
        for (std::size_t i = 0; i < total_nodes; ++i)
            for (std::size_t j = 0; j < all_attrs->cols(); ++j)
                (*graphs[node_graph[i]].features)(node_local[i], j) = (*all_attrs)(i, j);
    }
    return graphs;
}

namespace {

constexpr char kMagic[8] = {'S', 'G', 'R', 'C', 'K', '0', '0', '1'};

void put_u64(std::ostream& os, std::uint64_t v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof v);
}

void put_string(std::ostream& os, const std::string& s) {
    put_u64(os, s.size());
    os.write(s.data(), static_cast<std::streamsize>(s.size()));
}

std::uint64_t get_u64(std::istream& is, const std::string& path) {
    std::uint64_t v = 0;
    require(static_cast<bool>(is.read(reinterpret_cast<char*>(&v), sizeof v)),
            path, ": truncated checkpoint");
    return v;
}

std::string get_string(std::istream& is, const std::string& path) {
    const std::uint64_t len = get_u64(is, path);
    require(len <= (1u << 20), path, ": unreasonable string length ", len);
    std::string s(len, '\0');
    require(static_cast<bool>(is.read(s.data(), static_cast<std::streamsize>(len))),
            path, ": truncated checkpoint");
    return s;
}

}  // namespace

void save_checkpoint(const std::string& path, const std::string& kind,
                     const ParameterSet& params) {
    std::ofstream out(path, std::ios::binary);
    require(out.good(), "cannot open ", path, " for writing");
    out.write(kMagic, sizeof kMagic);
    put_string(out, kind);
    put_u64(out, params.entries.size());
    for (const auto& [pname, entry] : params.entries) {
        put_string(out, pname);
        put_u64(out, entry.value.rows());
        put_u64(out, entry.value.cols());
        out.write(reinterpret_cast<const char*>(entry.value.raw().data()),
                  static_cast<std::streamsize>(entry.value.raw().size() * sizeof(double)));
    }
    require(out.good(), "write failed for ", path);
}

Checkpoint load_checkpoint(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    require(in.good(), "cannot open ", path);
    char magic[8];
    require(static_cast<bool>(in.read(magic, sizeof magic)) &&
                std::memcmp(magic, kMagic, sizeof kMagic) == 0,
            path, ": not a checkpoint (bad magic)");
    Checkpoint ck;
    ck.kind = get_string(in, path);
    const std::uint64_t count = get_u64(in, path);
    require(count <= 100000, path, ": unreasonable parameter count ", count);
    for (std::uint64_t i = 0; i < count; ++i) {
        const std::string pname = get_string(in, path);
        const std::uint64_t rows = get_u64(in, path);
        const std::uint64_t cols = get_u64(in, path);
        require(rows > 0 && cols > 0 && rows * cols <= (std::uint64_t{1} << 26), path,
                ": unreasonable shape ", rows, "x", cols, " for '", pname, "'");
        Matrix m(static_cast<std::size_t>(rows), static_cast<std::size_t>(cols));
        require(static_cast<bool>(in.read(reinterpret_cast<char*>(m.raw().data()),
                                          static_cast<std::streamsize>(rows * cols *
                                                                       sizeof(double)))),
                path, ": truncated checkpoint");
        require(!ck.params.has(pname), path, ": duplicate parameter '", pname, "'");
        ck.params.add(pname, std::move(m));
    }
    require(in.peek() == std::ifstream::traits_type::eof(), path,
            ": trailing bytes after checkpoint");
    return ck;
}

Checkpoint load_checkpoint(const std::string& path, const std::string& expected_kind) {
    Checkpoint ck = load_checkpoint(path);
    require(ck.kind == expected_kind, path, ": checkpoint kind '", ck.kind, "' where '",
            expected_kind, "' expected");
    return ck;
}

nlohmann::ordered_json make_report(const std::string& command, std::uint64_t seed,
                                   nlohmann::ordered_json config,
                                   nlohmann::ordered_json results) {
    nlohmann::ordered_json j;
    j["command"] = command;
    j["version"] = "0.1.0";
    j["seed"] = seed;
    j["config"] = std::move(config);
    j["results"] = std::move(results);
    return j;
}

nlohmann::ordered_json matrix_json(const Matrix& m) {
    nlohmann::ordered_json j;
    j["rows"] = m.rows();
    j["cols"] = m.cols();
    j["data"] = m.raw();
    return j;
}

Matrix matrix_from_json(const nlohmann::ordered_json& j) {
    require(j.contains("rows") && j.contains("cols") && j.contains("data"),
            "matrix json: missing rows/cols/data");
    const std::size_t rows = j["rows"].get<std::size_t>();
    const std::size_t cols = j["cols"].get<std::size_t>();
    const std::vector<double> data = j["data"].get<std::vector<double>>();
    require(data.size() == rows * cols, "matrix json: data length ", data.size(),
            " does not match ", rows, "x", cols);
    Matrix m(rows, cols);
    std::copy(data.begin(), data.end(), m.raw().begin());
    return m;
}

}  // namespace sgr
