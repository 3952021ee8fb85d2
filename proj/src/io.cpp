#include "sublab/io.hpp"

#include <bit>
#include <cstring>
#include <fstream>

namespace sublab {

static_assert(std::endian::native == std::endian::little,
              "vector block files assume a little-endian host");

json model_to_json(const GroupModel& model) {
  json j;
  switch (model.kind()) {
    case GroupKind::Heisenberg:
      j["kind"] = "heisenberg";
      j["n"] = model.cr_n();
      break;
    case GroupKind::Abelian:
      j["kind"] = "abelian";
      j["d"] = model.ambient_dim();
      break;
    case GroupKind::CarnotStep2: {
      j["kind"] = "carnot_step2";
      j["d1"] = model.carnot_d1();
      j["d2"] = model.carnot_d2();
      json layers = json::array();
      for (const auto& ck : model.structure_constants()) {
        json rows = json::array();
        for (int i = 0; i < ck.rows(); ++i) {
          json row = json::array();
          for (int jj = 0; jj < ck.cols(); ++jj) row.push_back(ck(i, jj));
          rows.push_back(row);
        }
        layers.push_back(rows);
      }
      j["c"] = layers;
      break;
    }
  }
  return j;
}

GroupModel model_from_json(const json& j, const std::string& field) {
  if (!j.is_object() || !j.contains("kind"))
    throw ConfigError(field, "expected an object with a \"kind\"");
  const std::string kind = j.at("kind").get<std::string>();
  try {
    if (kind == "heisenberg") return GroupModel::heisenberg(j.at("n").get<int>());
    if (kind == "abelian") return GroupModel::abelian(j.at("d").get<int>());
    if (kind == "carnot_step2") {
      const int d1 = j.at("d1").get<int>();
      const int d2 = j.at("d2").get<int>();
      const auto& layers = j.at("c");
      if (!layers.is_array())
        throw ConfigError(field + ".c", "expected d2 matrices of size d1 x d1");
      StructureConstants c;
      for (const auto& layer : layers) {
        Eigen::MatrixXd ck(d1, d1);
        for (int i = 0; i < d1; ++i)
          for (int jj = 0; jj < d1; ++jj) ck(i, jj) = layer.at(i).at(jj).get<double>();
        c.push_back(ck);
      }
      return GroupModel::carnot_step2(d1, d2, c);
    }
  } catch (const json::exception& e) {
    throw ConfigError(field, e.what());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(field, e.what());
  }
  throw ConfigError(field + ".kind", "unknown model kind: " + kind);
}

json grid_to_json(const GridDomain& grid) {
  json j;
  json box = json::array();
  for (const auto& b : grid.box()) box.push_back({b[0], b[1]});
  j["box"] = box;
  j["h"] = grid.spacings();
  return j;
}

GridDomain grid_from_json(const json& j, const std::string& field) {
  try {
    std::vector<std::array<double, 2>> box;
    for (const auto& b : j.at("box"))
      box.push_back({b.at(0).get<double>(), b.at(1).get<double>()});
    std::vector<double> h;
    if (j.at("h").is_array())
      h = j.at("h").get<std::vector<double>>();
    else
      h.assign(box.size(), j.at("h").get<double>());
    std::optional<Indicator> ind;
    if (j.contains("indicator")) {
      const auto& ji = j.at("indicator");
      Indicator i;
      const std::string type = ji.at("type").get<std::string>();
      if (type == "box") {
        i.type = Indicator::Type::Box;
        i.lo = ji.at("lo").get<std::vector<double>>();
        i.hi = ji.at("hi").get<std::vector<double>>();
        if (i.lo.size() != box.size() || i.hi.size() != box.size())
          throw ConfigError(field + ".indicator", "box indicator dimension mismatch");
      } else if (type == "ball") {
        i.type = Indicator::Type::Ball;
        i.center = ji.at("center").get<std::vector<double>>();
        i.radius = ji.at("radius").get<double>();
        if (i.center.size() != box.size())
          throw ConfigError(field + ".indicator", "ball center dimension mismatch");
      } else {
        throw ConfigError(field + ".indicator.type", "unknown indicator: " + type);
      }
      ind = std::move(i);
    }
    return build_grid(std::move(box), std::move(h), ind);
  } catch (const json::exception& e) {
    throw ConfigError(field, e.what());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(field, e.what());
  }
}

json spectrum_to_json(const Spectrum& s, const std::string& vectors_file) {
  json j;
  j["eigenvalues"] = s.eigenvalues;
  j["residuals"] = s.residuals;
  j["cell_volume"] = s.cell_volume;
  j["converged"] = s.meta.converged;
  json meta;
  meta["solver"] = s.meta.solver;
  meta["iterations"] = s.meta.iterations;
  meta["matvecs"] = s.meta.matvecs;
  meta["tol"] = s.meta.tol;
  meta["seed"] = s.meta.seed;
  meta["cluster_tol"] = s.meta.cluster_tol;
  meta["potential_min"] = s.meta.potential_min;
  meta["clusters"] = s.meta.clusters;
  meta["model"] = s.meta.model_desc;
  meta["grid"] = s.meta.grid_desc;
  meta["potential"] = s.meta.potential_desc;
  j["meta"] = meta;
  if (vectors_file.empty())
    j["vectors_file"] = nullptr;
  else
    j["vectors_file"] = vectors_file;
  return j;
}

Spectrum spectrum_from_json(const json& j) {
  Spectrum s;
  s.eigenvalues = j.at("eigenvalues").get<std::vector<double>>();
  s.residuals = j.at("residuals").get<std::vector<double>>();
  s.cell_volume = j.at("cell_volume").get<double>();
  const auto& meta = j.at("meta");
  s.meta.converged = j.at("converged").get<bool>();
  s.meta.solver = meta.at("solver").get<std::string>();
  s.meta.iterations = meta.at("iterations").get<int>();
  s.meta.matvecs = meta.at("matvecs").get<int>();
  s.meta.tol = meta.at("tol").get<double>();
  s.meta.seed = meta.at("seed").get<std::uint64_t>();
  s.meta.cluster_tol = meta.at("cluster_tol").get<double>();
  s.meta.potential_min = meta.value("potential_min", 0.0);
  s.meta.clusters = meta.at("clusters").get<std::vector<std::vector<int>>>();
  s.meta.model_desc = meta.at("model").get<std::string>();
  s.meta.grid_desc = meta.at("grid").get<std::string>();
  s.meta.potential_desc = meta.at("potential").get<std::string>();
  return s;
}

json report_to_json(const InequalityReport& r) {
  json j;
  j["family"] = family_name(r.family);
  j["mode"] = r.dim_mode == DimMode::CR ? "cr" : "carnot";
  j["dim_param"] = r.dim_param;
  j["tol_rel"] = r.tol_rel;
  if (!r.offsets_note.empty()) j["offsets"] = r.offsets_note;
  if (r.nonpositive_p_warning) j["nonpositive_p_warning"] = true;
  json rows = json::array();
  for (const auto& row : r.rows) {
    json jr;
    jr["k"] = row.k;
    if (row.has_p) jr["p"] = row.p;
    jr["lhs"] = row.lhs;
    jr["rhs"] = row.rhs;
    jr["margin"] = row.margin;
    jr["rel_margin"] = row.rel_margin;
    jr["verdict"] = row.pass ? "pass" : "fail";
    jr["degenerate"] = row.degenerate;
    rows.push_back(jr);
  }
  j["rows"] = rows;
  j["all_pass"] = r.all_pass();
  return j;
}

void report_rows_to_csv(std::ostream& os, const std::vector<InequalityReport>& reports,
                        bool header) {
  if (header) os << "family,mode,k,p,lhs,rhs,margin,rel_margin,verdict,degenerate\n";
  os.precision(17);
  for (const auto& rep : reports) {
    for (const auto& row : rep.rows) {
      os << family_name(rep.family) << ','
         << (rep.dim_mode == DimMode::CR ? "cr" : "carnot") << ',' << row.k << ',';
      if (row.has_p) os << row.p;
      os << ',' << row.lhs << ',' << row.rhs << ',' << row.margin << ','
         << row.rel_margin << ',' << (row.pass ? "pass" : "fail") << ','
         << (row.degenerate ? 1 : 0) << '\n';
    }
  }
}

void write_vectors_binary(const std::filesystem::path& path, const Mat& vectors) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + path.string());
  const char magic[4] = {'S', 'B', 'S', 'P'};
  const std::uint32_t version = 1;
  const std::uint64_t n = vectors.rows(), k = vectors.cols();
  os.write(magic, 4);
  os.write(reinterpret_cast<const char*>(&version), sizeof version);
  os.write(reinterpret_cast<const char*>(&n), sizeof n);
  os.write(reinterpret_cast<const char*>(&k), sizeof k);
  os.write(reinterpret_cast<const char*>(vectors.data()),
           static_cast<std::streamsize>(sizeof(double) * n * k));
  if (!os) throw std::runtime_error("short write to " + path.string());
}

Mat read_vectors_binary(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open " + path.string());
  char magic[4];
  std::uint32_t version = 0;
  std::uint64_t n = 0, k = 0;
  is.read(magic, 4);
  is.read(reinterpret_cast<char*>(&version), sizeof version);
  is.read(reinterpret_cast<char*>(&n), sizeof n);
  is.read(reinterpret_cast<char*>(&k), sizeof k);
  if (!is || std::memcmp(magic, "SBSP", 4) != 0)
    throw std::runtime_error("not a vector block file: " + path.string());
  if (version != 1)
    throw std::runtime_error("unsupported vector block version");
  Mat m(n, k);
  is.read(reinterpret_cast<char*>(m.data()),
          static_cast<std::streamsize>(sizeof(double) * n * k));
  if (!is) throw std::runtime_error("truncated vector block file");
  return m;
}

json load_json_file(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError(path.string(), "cannot open file");
  try {
    return json::parse(is);
  } catch (const json::exception& e) {
    throw ConfigError(path.string(), e.what());
  }
}

void write_json_file(const std::filesystem::path& path, const json& j) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + path.string());
  os << j.dump(2) << '\n';
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + path.string());
  os << text;
}

}  // namespace sublab
