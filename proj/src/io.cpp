#include "roughmetrics/io.hpp"

#include <fstream>
#include <ostream>
#include <sstream>

#include "roughmetrics/constructions.hpp"
#include "roughmetrics/error.hpp"

namespace roughmetrics {

namespace {

[[noreturn]] void field_error(const std::string& field, const std::string& what) {
  throw ParseError("field '" + field + "': " + what);
}

Eigen::MatrixXd matrix_field(const json& j, const std::string& field, bool square) {
  if (!j.contains(field))
    field_error(field, "missing");
  const json& rows = j.at(field);
  if (!rows.is_array())
    field_error(field, "expected an array of rows");
  const Index n = static_cast<Index>(rows.size());
  Index cols = square ? n : (n > 0 && rows[0].is_array() ? static_cast<Index>(rows[0].size()) : 0);
  Eigen::MatrixXd m(n, cols);
  for (Index i = 0; i < n; ++i) {
    const json& row = rows[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Index>(row.size()) != cols)
      field_error(field, "row " + std::to_string(i) + " must hold " + std::to_string(cols) + " numbers");
    for (Index c = 0; c < cols; ++c) {
      const json& v = row[static_cast<std::size_t>(c)];
      if (!v.is_number())
        field_error(field, "entry (" + std::to_string(i) + ", " + std::to_string(c) + ") is not a number");
      m(i, c) = v.get<double>();
    }
  }
  return m;
}

json matrix_to_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Index c = 0; c < m.cols(); ++c)
      row.push_back(m(i, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<std::string> labels_field(const json& j) {
  std::vector<std::string> labels;
  if (!j.contains("points"))
    return labels;
  if (!j.at("points").is_array())
    field_error("points", "expected an array of strings");
  for (const auto& p : j.at("points")) {
    if (!p.is_string())
      field_error("points", "expected an array of strings");
    labels.push_back(p.get<std::string>());
  }
  return labels;
}

std::string infer_kind(const json& j) {
  if (j.contains("kind")) {
    if (!j.at("kind").is_string())
      field_error("kind", "expected a string");
    return j.at("kind").get<std::string>();
  }
  if (j.contains("family"))
    return "construction";
  if (j.contains("matrix"))
    return "matrix";
  if (j.contains("coords"))
    return "euclidean";
  if (j.contains("base"))
    return "snowflake";
  throw ParseError("cannot tell the kind of space: no kind, matrix, coords, base or family key");
}

} // namespace

FiniteMetricSpace space_from_json(const json& j, const std::filesystem::path& dir) {
  if (!j.is_object())
    throw ParseError("space must be a JSON object");
  const std::string kind = infer_kind(j);
  std::string name;
  if (j.contains("name")) {
    if (!j.at("name").is_string())
      field_error("name", "expected a string");
    name = j.at("name").get<std::string>();
  }
  std::vector<std::string> labels = labels_field(j);

  if (kind == "matrix")
    return FiniteMetricSpace(matrix_field(j, "matrix", true), std::move(labels), std::move(name));
  if (kind == "euclidean" || kind == "taxicab")
    return FiniteMetricSpace::from_coordinates(matrix_field(j, "coords", false), norm_from_string(kind),
                                               std::move(labels), std::move(name));
  if (kind == "snowflake") {
    if (!j.contains("alpha") || !j.at("alpha").is_number())
      field_error("alpha", "expected a number");
    if (!j.contains("base"))
      field_error("base", "missing");
    const json& b = j.at("base");
    FiniteMetricSpace base = b.is_string() ? load_space(dir / b.get<std::string>()) : space_from_json(b, dir);
    FiniteMetricSpace s = snowflake(base, j.at("alpha").get<double>());
    return name.empty() ? s : s.renamed(name);
  }
  if (kind == "construction") {
    if (!j.contains("family") || !j.at("family").is_string())
      field_error("family", "expected a string");
    ConstructionSpec spec{j.at("family").get<std::string>(), j.value("params", json::object())};
    if (!spec.params.is_object())
      field_error("params", "expected an object");
    FiniteMetricSpace s = build(spec);
    if (!labels.empty() && labels.size() != static_cast<std::size_t>(s.size()))
      field_error("points", "label count does not match the construction");
    return name.empty() ? s : s.renamed(name);
  }
  field_error("kind", "unknown kind '" + kind + "'");
}

json space_to_json(const FiniteMetricSpace& space) {
  json j;
  j["name"] = space.name();
  j["kind"] = space.kind();
  j["points"] = space.labels();
  std::visit(
      [&](const auto& src) {
        using T = std::decay_t<decltype(src)>;
        if constexpr (std::is_same_v<T, MatrixSource>) {
          j["matrix"] = matrix_to_json(space.matrix());
        } else if constexpr (std::is_same_v<T, CoordinateSource>) {
          j["coords"] = matrix_to_json(src.coords);
        } else if constexpr (std::is_same_v<T, SnowflakeSource>) {
          j["alpha"] = src.alpha;
          j["base"] = space_to_json(*src.base);
        } else {
          j["family"] = src.family;
          j["params"] = src.params;
        }
      },
      space.source());
  return j;
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in)
    throw ParseError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

FiniteMetricSpace load_space(const std::filesystem::path& path) {
  const json j = read_json_file(path);
  try {
    return space_from_json(j, path.parent_path());
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  } catch (const json::exception& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

void save_space(const FiniteMetricSpace& space, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out)
    throw ParseError("cannot write " + path.string());
  out << dump(space_to_json(space)) << '\n';
}

OrderedSet ordered_set_from_json(const json& j, const std::filesystem::path& dir) {
  if (j.is_object() && !j.contains("space") && !j.contains("order"))
    return OrderedSet::identity(space_from_json(j, dir));
  if (!j.is_object() || !j.contains("space"))
    field_error("space", "missing");
  const json& sj = j.at("space");
  auto space = std::make_shared<const FiniteMetricSpace>(
      sj.is_string() ? load_space(dir / sj.get<std::string>()) : space_from_json(sj, dir));
  std::vector<Index> order;
  if (j.contains("order")) {
    if (!j.at("order").is_array())
      field_error("order", "expected an array of integers");
    for (const auto& v : j.at("order")) {
      if (!v.is_number_integer())
        field_error("order", "expected an array of integers");
      order.push_back(v.get<Index>());
    }
  } else {
    for (Index i = 0; i < space->size(); ++i)
      order.push_back(i);
  }
  return OrderedSet(std::move(space), std::move(order));
}

json ordered_set_to_json(const OrderedSet& s) {
  return json{{"space", space_to_json(s.space())}, {"order", s.order()}};
}

OrderedSet load_ordered_set(const std::filesystem::path& path) {
  const json j = read_json_file(path);
  try {
    return ordered_set_from_json(j, path.parent_path());
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  } catch (const json::exception& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

std::string dump(const json& j) { return j.dump(2); }

void write_triple_table_csv(std::ostream& os, const SraReport& report) {
  os << "i,j,k,required_alpha\n";
  os.precision(17);
  for (const auto& row : report.table)
    os << row.t.i << ',' << row.t.j << ',' << row.t.k << ',' << row.required_alpha << '\n';
}

void write_coords_csv(std::ostream& os, const EmbeddingResult& e) {
  os << "# norm=" << to_string(e.norm) << '\n';
  os.precision(17);
  for (Index i = 0; i < e.coords.rows(); ++i) {
    for (Index c = 0; c < e.coords.cols(); ++c)
      os << (c ? "," : "") << e.coords(i, c);
    os << '\n';
  }
}

} // namespace roughmetrics
