#include "qplexkit/io.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace qplexkit::io {

namespace {

RMatrix real_grid_from_json(const json& j, Eigen::Index rows,
                            Eigen::Index cols, const std::string& what) {
  if (!j.is_array() || static_cast<Eigen::Index>(j.size()) != rows) {
    throw Error(what + " must be an array of " + std::to_string(rows) +
                " rows");
  }
  RMatrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const json& row = j[static_cast<size_t>(r)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
      throw Error(what + " row " + std::to_string(r) + " must have " +
                  std::to_string(cols) + " entries (ragged input rejected)");
    }
    for (Eigen::Index c = 0; c < cols; ++c) {
      const json& cell = row[static_cast<size_t>(c)];
      if (!cell.is_number()) {
        throw Error(what + " entry (" + std::to_string(r) + "," +
                    std::to_string(c) + ") is not a number");
      }
      m(r, c) = cell.get<Real>();
    }
  }
  return m;
}

RVector real_list_from_json(const json& j, Eigen::Index len,
                            const std::string& what) {
  if (!j.is_array() || static_cast<Eigen::Index>(j.size()) != len) {
    throw Error(what + " must be an array of " + std::to_string(len) +
                " numbers");
  }
  RVector v(len);
  for (Eigen::Index i = 0; i < len; ++i) {
    const json& cell = j[static_cast<size_t>(i)];
    if (!cell.is_number()) {
      throw Error(what + " entry " + std::to_string(i) + " is not a number");
    }
    v(i) = cell.get<Real>();
  }
  return v;
}

int dim_from_json(const json& j) {
  if (!j.contains("d") || !j["d"].is_number_integer()) {
    throw Error("missing integer field \"d\"");
  }
  const int d = j["d"].get<int>();
  if (d < 1) throw Error("\"d\" must be positive");
  return d;
}

std::vector<Real> parse_csv_row(const std::string& line) {
  std::vector<Real> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    size_t used = 0;
    const Real v = std::stod(cell, &used);
    while (used < cell.size() &&
           std::isspace(static_cast<unsigned char>(cell[used]))) {
      ++used;
    }
    if (used != cell.size()) throw Error("malformed CSV cell: " + cell);
    out.push_back(v);
  }
  if (out.empty()) throw Error("empty CSV row");
  return out;
}

}  // namespace

std::string format_real(Real x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

json operator_to_json(const CMatrix& m) {
  json re = json::array();
  json im = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json re_row = json::array();
    json im_row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      re_row.push_back(m(r, c).real());
      im_row.push_back(m(r, c).imag());
    }
    re.push_back(std::move(re_row));
    im.push_back(std::move(im_row));
  }
  return {{"d", m.rows()}, {"re", std::move(re)}, {"im", std::move(im)}};
}

CMatrix operator_from_json(const json& j) {
  const int d = dim_from_json(j);
  if (!j.contains("re") || !j.contains("im")) {
    throw Error("operator needs \"re\" and \"im\" grids");
  }
  const RMatrix re = real_grid_from_json(j["re"], d, d, "\"re\"");
  const RMatrix im = real_grid_from_json(j["im"], d, d, "\"im\"");
  return re.cast<Cplx>() + Cplx(0, 1) * im.cast<Cplx>();
}

json povm_to_json(const Povm& povm) {
  json effects = json::array();
  for (const Effect& e : povm.effects()) {
    effects.push_back(operator_to_json(e.matrix()));
  }
  return {{"d", povm.dim()}, {"effects", std::move(effects)}};
}

Povm povm_from_json(const json& j) {
  const int d = dim_from_json(j);
  if (!j.contains("effects") || !j["effects"].is_array() ||
      j["effects"].empty()) {
    throw Error("POVM needs a nonempty \"effects\" array");
  }
  std::vector<CMatrix> raws;
  raws.reserve(j["effects"].size());
  for (const json& e : j["effects"]) {
    CMatrix m = operator_from_json(e);
    if (m.rows() != d) throw Error("effect dimension != \"d\"");
    raws.push_back(std::move(m));
  }
  return Povm::validate(raws);
}

json sic_fixture_to_json(const CVector& fiducial, int d,
                         bool include_effects) {
  json re = json::array();
  json im = json::array();
  for (Eigen::Index i = 0; i < fiducial.size(); ++i) {
    re.push_back(fiducial(i).real());
    im.push_back(fiducial(i).imag());
  }
  json out = {{"d", d},
              {"fiducial", {{"re", std::move(re)}, {"im", std::move(im)}}}};
  if (include_effects) {
    const SicPovm sic =
        wh_sic_from_fiducial(PureState::validate(fiducial), d);
    out["effects"] = povm_to_json(sic.povm())["effects"];
  }
  return out;
}

std::pair<CVector, int> sic_fixture_fiducial(const json& j) {
  const int d = dim_from_json(j);
  if (!j.contains("fiducial") || !j["fiducial"].contains("re") ||
      !j["fiducial"].contains("im")) {
    throw Error("SIC fixture needs \"fiducial\" with \"re\" and \"im\"");
  }
  const RVector re =
      real_list_from_json(j["fiducial"]["re"], d, "fiducial \"re\"");
  const RVector im =
      real_list_from_json(j["fiducial"]["im"], d, "fiducial \"im\"");
  return {re.cast<Cplx>() + Cplx(0, 1) * im.cast<Cplx>(), d};
}

SicPovm sic_fixture_from_json(const json& j) {
  const auto [fiducial, d] = sic_fixture_fiducial(j);
  SicPovm sic = wh_sic_from_fiducial(PureState::validate(fiducial), d);
  if (j.contains("effects")) {
    const json check = {{"d", d}, {"effects", j["effects"]}};
    const Povm stored = povm_from_json(check);
    if (stored.outcomes() != sic.outcomes()) {
      throw Error("stored effects disagree with the fiducial orbit");
    }
    for (int k = 0; k < sic.outcomes(); ++k) {
      const Real dev = max_abs(stored.effect(k).matrix() -
                               sic.povm().effect(k).matrix());
      if (dev > 1e-12) {
        throw Error("stored effect " + std::to_string(k) +
                    " deviates from the fiducial orbit by " +
                    detail::sci(dev));
      }
    }
  }
  return sic;
}

std::string prob_to_csv(const ProbVector& p) {
  std::string out;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    if (i > 0) out += ',';
    out += format_real(p[i]);
  }
  out += '\n';
  return out;
}

ProbVector prob_from_csv(const std::string& text) {
  std::stringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) {
    if (line.empty()) continue;
    const std::vector<Real> row = parse_csv_row(line);
    RVector v(static_cast<Eigen::Index>(row.size()));
    for (size_t i = 0; i < row.size(); ++i) {
      v(static_cast<Eigen::Index>(i)) = row[i];
    }
    return ProbVector::validate(std::move(v));
  }
  throw Error("no data row in CSV");
}

std::string cond_to_csv(const CondProbMatrix& c) {
  std::string out;
  for (Eigen::Index r = 0; r < c.rows(); ++r) {
    for (Eigen::Index i = 0; i < c.cols(); ++i) {
      if (i > 0) out += ',';
      out += format_real(c.matrix()(r, i));
    }
    out += '\n';
  }
  return out;
}

CondProbMatrix cond_from_csv(const std::string& text) {
  std::stringstream ss(text);
  std::string line;
  std::vector<std::vector<Real>> rows;
  while (std::getline(ss, line)) {
    if (line.empty()) continue;
    rows.push_back(parse_csv_row(line));
    if (rows.back().size() != rows.front().size()) {
      throw Error("ragged CSV rejected");
    }
  }
  if (rows.empty()) throw Error("no data rows in CSV");
  RMatrix m(static_cast<Eigen::Index>(rows.size()),
            static_cast<Eigen::Index>(rows.front().size()));
  for (size_t r = 0; r < rows.size(); ++r) {
    for (size_t c = 0; c < rows[r].size(); ++c) {
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          rows[r][c];
    }
  }
  return CondProbMatrix::validate(std::move(m));
}

json load_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open file: " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw Error("invalid JSON in " + path.string() + ": " + e.what());
  }
  return j;
}

std::string load_text_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open file: " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void save_text_file(const std::filesystem::path& path,
                    const std::string& content) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write file: " + path.string());
  out << content;
  if (!out) throw Error("write failed: " + path.string());
}

}  // namespace qplexkit::io
