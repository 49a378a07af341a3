#include "graphprobe/io.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <string_view>

#include <json.hpp>

#include "graphprobe/error.hpp"

namespace graphprobe {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> tokens;
  std::size_t pos = 0;
  while (pos < s.size()) {
    const auto start = s.find_first_not_of(" \t\r", pos);
    if (start == std::string_view::npos) break;
    auto end = s.find_first_of(" \t\r", start);
    if (end == std::string_view::npos) end = s.size();
    tokens.push_back(s.substr(start, end - start));
    pos = end;
  }
  return tokens;
}

template <typename Int>
bool parse_int(std::string_view token, Int& out) {
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), out);
  return ec == std::errc() && ptr == token.data() + token.size();
}

bool parse_real(std::string_view token, double& out) {
  if (!token.empty() && token.front() == '+') token.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), out);
  return ec == std::errc() && ptr == token.data() + token.size();
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path.string() + "'");
  return in;
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  return out;
}

// "# n=<count>" header, with optional spaces after '#'.
std::optional<std::size_t> parse_node_count_header(std::string_view line, std::size_t line_no) {
  line.remove_prefix(1);
  line = trim(line);
  if (!line.starts_with("n=")) return std::nullopt;
  std::size_t n = 0;
  if (!parse_int(trim(line.substr(2)), n)) throw ParseError("malformed node-count header", line_no);
  return n;
}

}  // namespace

std::string format_double(double value) {
  std::array<char, 32> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  if (ec != std::errc()) throw Error("cannot format value");
  return std::string(buf.data(), ptr);
}

Graph parse_edge_list(std::istream& in, std::optional<std::vector<ClassLabel>> node_labels) {
  std::optional<std::size_t> declared;
  std::vector<Edge> edges;
  std::vector<std::size_t> edge_lines;
  std::size_t max_index = 0;
  bool any_edge = false;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto text = trim(line);
    if (text.empty()) continue;
    if (text.front() == '#') {
      if (auto n = parse_node_count_header(text, line_no)) {
        if (declared && *declared != *n) throw ParseError("conflicting node-count headers", line_no);
        declared = n;
      }
      continue;
    }
    const auto tokens = split_ws(text);
    NodeId u = 0;
    NodeId v = 0;
    if (tokens.size() != 2 || !parse_int(tokens[0], u) || !parse_int(tokens[1], v)) {
      throw ParseError("expected two non-negative node indices, got '" + std::string(text) + "'", line_no);
    }
    if (u == v) throw ValidationError("self-loop on node " + std::to_string(u), line_no);
    edges.push_back({u, v});
    edge_lines.push_back(line_no);
    max_index = std::max<std::size_t>(max_index, std::max(u, v));
    any_edge = true;
  }
  std::size_t num_nodes = any_edge ? max_index + 1 : 0;
  if (declared) {
    for (std::size_t k = 0; k < edges.size(); ++k) {
      if (edges[k].u >= *declared || edges[k].v >= *declared) {
        throw ValidationError("endpoint out of declared range n=" + std::to_string(*declared), edge_lines[k]);
      }
    }
    num_nodes = *declared;
  }
  return Graph(num_nodes, std::move(edges), std::move(node_labels));
}

std::vector<ClassLabel> parse_labels(std::istream& in) {
  std::vector<ClassLabel> labels;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto text = trim(line);
    if (text.empty()) continue;
    ClassLabel label = 0;
    if (!parse_int(text, label)) throw ParseError("expected an integer class label", line_no);
    labels.push_back(label);
  }
  return labels;
}

std::filesystem::path labels_sidecar_path(const std::filesystem::path& graph_path) {
  auto p = graph_path;
  p.replace_extension(".labels");
  return p;
}

Graph load_graph(const std::filesystem::path& path) {
  auto in = open_input(path);
  std::optional<std::vector<ClassLabel>> labels;
  const auto sidecar = labels_sidecar_path(path);
  if (sidecar != path && std::filesystem::exists(sidecar)) {
    auto lin = open_input(sidecar);
    try {
      labels = parse_labels(lin);
    } catch (const ParseError& e) {
      throw ParseError(sidecar.string() + ": " + e.what());
    }
  }
  try {
    return parse_edge_list(in, std::move(labels));
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  } catch (const ValidationError& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

void write_edge_list(const Graph& graph, std::ostream& out) {
  out << "# n=" << graph.num_nodes() << '\n';
  for (const auto& e : graph.edges()) out << e.u << '\t' << e.v << '\n';
}

void save_graph(const Graph& graph, const std::filesystem::path& path) {
  {
    auto out = open_output(path);
    write_edge_list(graph, out);
  }
  if (graph.node_labels()) {
    auto out = open_output(labels_sidecar_path(path));
    for (const auto label : *graph.node_labels()) out << label << '\n';
  }
}

GraphCollection parse_collection(std::istream& in, std::string name) {
  GraphCollection collection;
  collection.name = std::move(name);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    nlohmann::json obj;
    try {
      obj = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError(std::string("invalid JSON: ") + e.what(), line_no);
    }
    try {
      if (!obj.is_object()) throw ParseError("expected a JSON object", line_no);
      if (!obj.contains("num_nodes") || !obj.contains("edges")) {
        throw ParseError("missing \"num_nodes\" or \"edges\"", line_no);
      }
      const auto num_nodes = obj.at("num_nodes").get<std::size_t>();
      std::vector<Edge> edges;
      for (const auto& pair : obj.at("edges")) {
        if (!pair.is_array() || pair.size() != 2) throw ParseError("edge must be a two-element array", line_no);
        const auto u = pair[0].get<std::int64_t>();
        const auto v = pair[1].get<std::int64_t>();
        if (u < 0 || v < 0 || static_cast<std::size_t>(u) >= num_nodes || static_cast<std::size_t>(v) >= num_nodes) {
          throw ValidationError("edge [" + std::to_string(u) + "," + std::to_string(v) + "] out of range for " +
                                    std::to_string(num_nodes) + " nodes",
                                line_no);
        }
        if (u == v) throw ValidationError("self-loop on node " + std::to_string(u), line_no);
        edges.push_back({static_cast<NodeId>(u), static_cast<NodeId>(v)});
      }
      std::optional<std::vector<ClassLabel>> node_labels;
      if (obj.contains("node_labels") && !obj.at("node_labels").is_null()) {
        node_labels = obj.at("node_labels").get<std::vector<ClassLabel>>();
      }
      std::optional<ClassLabel> graph_label;
      if (obj.contains("label") && !obj.at("label").is_null()) graph_label = obj.at("label").get<ClassLabel>();
      collection.graphs.emplace_back(num_nodes, std::move(edges), std::move(node_labels), std::nullopt, graph_label);
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(std::string("bad field type: ") + e.what(), line_no);
    } catch (const ValidationError& e) {
      if (e.line() != 0) throw;
      throw ValidationError(e.what(), line_no);
    }
  }
  if (collection.graphs.empty()) throw ValidationError("graph collection is empty");
  return collection;
}

GraphCollection load_collection(const std::filesystem::path& path) {
  auto in = open_input(path);
  try {
    return parse_collection(in, path.stem().string());
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  } catch (const ValidationError& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

void write_collection(const GraphCollection& collection, std::ostream& out) {
  for (const auto& g : collection.graphs) {
    nlohmann::json obj;
    obj["num_nodes"] = g.num_nodes();
    auto edges = nlohmann::json::array();
    for (const auto& e : g.edges()) edges.push_back({e.u, e.v});
    obj["edges"] = std::move(edges);
    if (g.graph_label()) obj["label"] = *g.graph_label();
    if (g.node_labels()) obj["node_labels"] = *g.node_labels();
    out << obj.dump() << '\n';
  }
}

void save_collection(const GraphCollection& collection, const std::filesystem::path& path) {
  auto out = open_output(path);
  write_collection(collection, out);
}

EmbeddingMatrix parse_embeddings(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!trim(line).empty()) break;
  }
  const auto header = split_ws(trim(line));
  std::size_t n = 0;
  std::size_t d = 0;
  if (header.size() < 3 || !parse_int(header[0], n) || !parse_int(header[1], d)) {
    throw ParseError("expected header 'n d model_tag'", line_no);
  }
  if (d == 0) throw ValidationError("embedding dimension must be at least 1", line_no);
  const auto tag_start = trim(line).find(header[2]);
  const std::string model_tag(trim(trim(line).substr(tag_start)));

  std::vector<double> values;
  values.reserve(n * d);
  std::size_t row = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto text = trim(line);
    if (text.empty()) continue;
    if (row == n) throw ValidationError("more than the declared " + std::to_string(n) + " rows", line_no);
    const auto tokens = split_ws(text);
    if (tokens.size() != d) {
      throw ValidationError("row " + std::to_string(row) + " has " + std::to_string(tokens.size()) +
                                " columns, expected " + std::to_string(d),
                            line_no);
    }
    for (const auto token : tokens) {
      double x = 0.0;
      if (!parse_real(token, x)) {
        throw ParseError("row " + std::to_string(row) + ": cannot parse '" + std::string(token) + "'", line_no);
      }
      if (!std::isfinite(x)) throw ValidationError("row " + std::to_string(row) + " has a non-finite value", line_no);
      values.push_back(x);
    }
    ++row;
  }
  if (row != n) {
    throw ValidationError("found " + std::to_string(row) + " rows, header declares " + std::to_string(n));
  }
  return EmbeddingMatrix(Matrix(n, d, std::move(values)), model_tag);
}

EmbeddingMatrix load_embeddings(const std::filesystem::path& path) {
  auto in = open_input(path);
  try {
    return parse_embeddings(in);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  } catch (const ValidationError& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

void write_embeddings(const EmbeddingMatrix& embeddings, std::ostream& out) {
  out << embeddings.num_nodes() << ' ' << embeddings.dim() << ' '
      << (embeddings.model_tag().empty() ? std::string("unnamed") : embeddings.model_tag()) << '\n';
  for (std::size_t r = 0; r < embeddings.num_nodes(); ++r) {
    const auto row = embeddings.row(r);
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c != 0) out << ' ';
      out << format_double(row[c]);
    }
    out << '\n';
  }
}

void save_embeddings(const EmbeddingMatrix& embeddings, const std::filesystem::path& path) {
  auto out = open_output(path);
  write_embeddings(embeddings, out);
}

}  // namespace graphprobe
