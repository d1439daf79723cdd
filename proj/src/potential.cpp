#include "qpsl/potential.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "qpsl/errors.hpp"

namespace qpsl {

Complex TrigEntry::coefficient(int nu) const {
  for (const auto& [n, c] : harmonics)
    if (n == nu) return c;
  return {0.0, 0.0};
}

Complex TrigEntry::evaluate(double x) const {
  Complex v{0.0, 0.0};
  for (const auto& [nu, c] : harmonics)
    v += c * std::exp(Complex(0.0, kTwoPi * nu * x));
  return v;
}

PotentialSpec make_potential(int m, std::vector<std::vector<TrigEntry>> entries,
                             double drop_tol) {
  if (m < 1) throw DimensionError("potential dimension m must be >= 1");
  if (static_cast<int>(entries.size()) != m)
    throw DimensionError("entry grid has " + std::to_string(entries.size()) +
                         " rows, expected " + std::to_string(m));
  for (const auto& row : entries)
    if (static_cast<int>(row.size()) != m)
      throw DimensionError("ragged entry grid: row has " +
                           std::to_string(row.size()) + " entries, expected " +
                           std::to_string(m));

  PotentialSpec spec;
  spec.m = m;
  spec.entries = std::move(entries);
  int V = 0;
  for (auto& row : spec.entries) {
    for (auto& e : row) {
      std::sort(e.harmonics.begin(), e.harmonics.end(),
                [](const auto& a, const auto& b) { return a.first < b.first; });
      // merge duplicates, then drop negligible coefficients
      std::vector<std::pair<int, Complex>> merged;
      for (const auto& h : e.harmonics) {
        if (!merged.empty() && merged.back().first == h.first)
          merged.back().second += h.second;
        else
          merged.push_back(h);
      }
      merged.erase(std::remove_if(merged.begin(), merged.end(),
                                  [&](const auto& h) {
                                    return std::abs(h.second) <= drop_tol;
                                  }),
                   merged.end());
      e.harmonics = std::move(merged);
      for (const auto& [nu, c] : e.harmonics) V = std::max(V, std::abs(nu));
    }
  }
  spec.max_harmonic = V;
  return spec;
}

PotentialSpec parse_potential(const std::string& json_text, double drop_tol) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("potential file is not valid JSON: ") +
                     e.what());
  }
  if (!doc.is_object() || !doc.contains("m"))
    throw ParseError("potential file must be an object with field 'm'");
  if (!doc["m"].is_number_integer())
    throw ParseError("field 'm' must be an integer");
  const int m = doc["m"].get<int>();
  if (m < 1) throw DimensionError("field 'm' must be >= 1");

  std::vector<std::vector<TrigEntry>> entries(
      m >= 1 ? static_cast<size_t>(m) : 0);
  for (auto& row : entries) row.resize(m);

  if (doc.contains("entries") && !doc["entries"].is_null()) {
    const auto& rows = doc["entries"];
    if (!rows.is_array() || static_cast<int>(rows.size()) != m)
      throw DimensionError("'entries' must be a length-m list of rows");
    for (int i = 0; i < m; ++i) {
      const auto& row = rows[i];
      if (!row.is_array() || static_cast<int>(row.size()) != m)
        throw DimensionError("'entries' row " + std::to_string(i) +
                             " has wrong length");
      for (int j = 0; j < m; ++j) {
        const auto& cell = row[j];
        if (cell.is_null()) continue;  // absent entry = zero
        if (!cell.is_array())
          throw ParseError("entry (" + std::to_string(i) + "," +
                           std::to_string(j) + ") must be a list of records");
        for (const auto& rec : cell) {
          if (!rec.is_object() || !rec.contains("nu"))
            throw ParseError("harmonic record must be an object with 'nu'");
          if (!rec["nu"].is_number_integer())
            throw ParseError("harmonic index 'nu' must be an integer");
          const int nu = rec["nu"].get<int>();
          const double re = rec.value("re", 0.0);
          const double im = rec.value("im", 0.0);
          entries[i][j].harmonics.emplace_back(nu, Complex(re, im));
        }
      }
    }
  }
  return make_potential(m, std::move(entries), drop_tol);
}

PotentialSpec load_potential(const std::string& path, double drop_tol) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open potential file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_potential(buf.str(), drop_tol);
}

FourierBlock fourier_block(const PotentialSpec& spec, int nu) {
  FourierBlock fb;
  fb.nu = nu;
  fb.block = Matrix::Zero(spec.m, spec.m);
  if (std::abs(nu) > spec.max_harmonic) return fb;
  for (int i = 0; i < spec.m; ++i)
    for (int j = 0; j < spec.m; ++j)
      fb.block(i, j) = spec.entries[i][j].coefficient(nu);
  return fb;
}

Matrix mean_matrix(const PotentialSpec& spec) {
  return fourier_block(spec, 0).block;
}

PotentialSpec sample_to_spec(const std::vector<Matrix>& samples, int V,
                             double drop_tol) {
  const int G = static_cast<int>(samples.size());
  if (V < 0) throw GridError("max harmonic V must be >= 0");
  if (G < 2 * V + 1)
    throw GridError("grid of size " + std::to_string(G) +
                    " cannot resolve harmonics up to V = " + std::to_string(V) +
                    " (need G >= 2V+1)");
  const int m = static_cast<int>(samples.front().rows());
  for (const auto& S : samples)
    if (S.rows() != m || S.cols() != m)
      throw DimensionError("sample matrices must all be m x m");

  std::vector<std::vector<TrigEntry>> entries(static_cast<size_t>(m));
  for (auto& row : entries) row.resize(m);
  for (int nu = -V; nu <= V; ++nu) {
    Matrix coeff = Matrix::Zero(m, m);
    for (int g = 0; g < G; ++g)
      coeff += samples[g] * std::exp(Complex(0.0, -kTwoPi * nu * g / G));
    coeff /= static_cast<double>(G);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j)
        entries[i][j].harmonics.emplace_back(nu, coeff(i, j));
  }
  return make_potential(m, std::move(entries), drop_tol);
}

Matrix evaluate_potential(const PotentialSpec& spec, double x) {
  Matrix Q(spec.m, spec.m);
  for (int i = 0; i < spec.m; ++i)
    for (int j = 0; j < spec.m; ++j) Q(i, j) = spec.entries[i][j].evaluate(x);
  return Q;
}

PotentialSpec adjoint_spec(const PotentialSpec& spec) {
  std::vector<std::vector<TrigEntry>> entries(static_cast<size_t>(spec.m));
  for (auto& row : entries) row.resize(spec.m);
  for (int i = 0; i < spec.m; ++i)
    for (int j = 0; j < spec.m; ++j)
      for (const auto& [nu, c] : spec.entries[j][i].harmonics)
        entries[i][j].harmonics.emplace_back(-nu, std::conj(c));
  return make_potential(spec.m, std::move(entries), 0.0);
}

bool is_hermitian(const PotentialSpec& spec, double tol) {
  for (int nu = -spec.max_harmonic; nu <= spec.max_harmonic; ++nu) {
    const Matrix a = fourier_block(spec, nu).block;
    const Matrix b = fourier_block(spec, -nu).block;
    if ((a - b.adjoint()).norm() > tol * (1.0 + a.norm())) return false;
  }
  return true;
}

double perturbation_l1_norm(const PotentialSpec& spec) {
  double s = 0.0;
  for (int nu = -spec.max_harmonic; nu <= spec.max_harmonic; ++nu) {
    if (nu == 0) continue;
    s += fourier_block(spec, nu).block.norm();
  }
  return s;
}

}  // namespace qpsl
