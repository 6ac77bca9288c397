#include "qwishart/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace qwishart {

namespace {

void rename_into_place(const std::string& tmp, const std::string& path) {
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    std::remove(tmp.c_str());
    throw Error("io: cannot rename " + tmp + " to " + path);
  }
}

std::ofstream open_tmp(const std::string& tmp) {
  std::ofstream out(tmp, std::ios::trunc);
  if (!out) throw Error("io: cannot open " + tmp + " for writing");
  out.precision(17);
  return out;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("io: cannot open " + path);
  return in;
}

std::vector<double> split_csv_row(const std::string& line, std::size_t expect,
                                  const std::string& path) {
  std::vector<double> fields;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    try {
      fields.push_back(std::stod(cell));
    } catch (const std::exception&) {
      throw Error("io: bad numeric field '" + cell + "' in " + path);
    }
  }
  if (fields.size() != expect)
    throw Error("io: expected " + std::to_string(expect) + " fields per row in " + path);
  return fields;
}

}  // namespace

void write_text_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out = open_tmp(tmp);
    out << content;
    if (!out) throw Error("io: write failed for " + tmp);
  }
  rename_into_place(tmp, path);
}

void write_bloch_csv(const std::string& path, const std::vector<BlochVector>& samples) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out = open_tmp(tmp);
    out << "x,y,z\n";
    for (const auto& b : samples) out << b.x << ',' << b.y << ',' << b.z << '\n';
    if (!out) throw Error("io: write failed for " + tmp);
  }
  rename_into_place(tmp, path);
}

std::vector<BlochVector> read_bloch_csv(const std::string& path) {
  std::ifstream in = open_in(path);
  std::string line;
  if (!std::getline(in, line) || line != "x,y,z")
    throw Error("io: missing 'x,y,z' header in " + path);
  std::vector<BlochVector> samples;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto f = split_csv_row(line, 3, path);
    samples.push_back({f[0], f[1], f[2]});
  }
  return samples;
}

void write_states_jsonl(const std::string& path, const std::vector<DensityMatrix>& states) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out = open_tmp(tmp);
    for (const auto& s : states) {
      // Row-major [re, im] pairs.
      nlohmann::json row = nlohmann::json::array();
      for (int i = 0; i < s.dim(); ++i)
        for (int j = 0; j < s.dim(); ++j)
          row.push_back({s.rho(i, j).real(), s.rho(i, j).imag()});
      out << row.dump() << '\n';
    }
    if (!out) throw Error("io: write failed for " + tmp);
  }
  rename_into_place(tmp, path);
}

std::vector<DensityMatrix> read_states_jsonl(const std::string& path) {
  std::ifstream in = open_in(path);
  std::vector<DensityMatrix> states;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    nlohmann::json row;
    try {
      row = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw Error("io: bad JSONL line in " + path + ": " + e.what());
    }
    if (!row.is_array()) throw Error("io: JSONL line is not an array in " + path);
    int d = static_cast<int>(std::llround(std::sqrt(static_cast<double>(row.size()))));
    if (d < 1 || static_cast<std::size_t>(d) * d != row.size())
      throw Error("io: JSONL line is not a square matrix in " + path);
    Matrix m(d, d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        const auto& cell = row[static_cast<std::size_t>(i) * d + j];
        if (!cell.is_array() || cell.size() != 2)
          throw Error("io: matrix entry is not a [re, im] pair in " + path);
        m(i, j) = Cplx(cell[0].get<double>(), cell[1].get<double>());
      }
    states.emplace_back(std::move(m));
  }
  return states;
}

void write_blr_csv(const std::string& path, const BlrCurve& curve) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out = open_tmp(tmp);
    out << "lambda,size,c_empirical,c_theoretical\n";
    for (std::size_t i = 0; i < curve.lambdas.size(); ++i)
      out << curve.lambdas[i] << ',' << curve.size[i] << ','
          << curve.credibility_empirical[i] << ',' << curve.credibility_theoretical[i]
          << '\n';
    if (!out) throw Error("io: write failed for " + tmp);
  }
  rename_into_place(tmp, path);
}

BlrCurve read_blr_csv(const std::string& path) {
  std::ifstream in = open_in(path);
  std::string line;
  if (!std::getline(in, line) || line != "lambda,size,c_empirical,c_theoretical")
    throw Error("io: missing BLR header in " + path);
  BlrCurve curve;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto f = split_csv_row(line, 4, path);
    curve.lambdas.push_back(f[0]);
    curve.size.push_back(f[1]);
    curve.credibility_empirical.push_back(f[2]);
    curve.credibility_theoretical.push_back(f[3]);
  }
  return curve;
}

}  // namespace qwishart
