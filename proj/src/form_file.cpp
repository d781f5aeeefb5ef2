#include <fstream>
#include <sstream>

#include "kaehler/driver.hpp"
#include "kaehler/error.hpp"

namespace kaehler {

namespace {

using json = nlohmann::ordered_json;

Matrix read_matrix(const json& j, const char* name, Eigen::Index rows, Eigen::Index cols) {
  if (!j.is_array() || static_cast<Eigen::Index>(j.size()) != rows)
    throw Error(ErrorCode::ParseError, std::string(name) + " must have " + std::to_string(rows) + " rows");
  Matrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const json& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols)
      throw Error(ErrorCode::ParseError, std::string(name) + " row " + std::to_string(r) + " has wrong length");
    for (Eigen::Index c = 0; c < cols; ++c) {
      const json& v = row[static_cast<std::size_t>(c)];
      if (!v.is_number()) throw Error(ErrorCode::ParseError, std::string(name) + " entries must be numbers");
      m(r, c) = v.get<double>();
    }
  }
  return m;
}

json write_matrix(const Matrix& m) {
  json out = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    out.push_back(std::move(row));
  }
  return out;
}

bool is_doubled(const Matrix& g) {
  if (g.rows() % 2 != 0) return false;
  const Eigen::Index p = g.rows() / 2;
  return g.topRightCorner(p, p).isZero(0.0) && g.bottomLeftCorner(p, p).isZero(0.0) &&
         (g.topLeftCorner(p, p) + g.bottomRightCorner(p, p)).isZero(0.0);
}

}  // namespace

BilinearMap FormFile::form() const {
  BilinearMap out(dim_v, QuadSpace(gram_w));
  out.values() = values;
  return out;
}

KaehlerPair FormFile::pair(double tol) const {
  if (!describes_alpha()) throw Error(ErrorCode::InvalidArgument, "form file does not describe alpha");
  const Matrix id = Matrix::Identity(dim_v, dim_v);
  return build_pair(form(), ComplexStructure(*J, id, tol), id,
                    Vector(Vector::Unit(gram_w.rows(), *w_index)), tol);
}

ComplexForm FormFile::complex_form(double tol) const {
  if (!J) throw Error(ErrorCode::ParseError, "form file has no complex structure J");
  if (describes_alpha()) return pair(tol).complex_form();
  if (!is_doubled(gram_w))
    throw Error(ErrorCode::ParseError, "form values must lie in a doubled space block-diag(G, -G)");
  return {form(), *J, Matrix::Identity(dim_v, dim_v)};
}

FormFile FormFile::from_form(const BilinearMap& form, std::optional<Matrix> j, std::optional<int> w_index) {
  FormFile f;
  f.dim_v = form.domain_dim();
  const Signature sig = form.target().signature();
  f.w_signature = {sig.n_plus, sig.n_minus};
  f.gram_w = form.target().gram();
  f.values = form.values();
  f.J = std::move(j);
  f.w_index = w_index;
  return f;
}

FormFile FormFile::from_pair(const KaehlerPair& pair) {
  if (!pair.domain_inner().isIdentity(1e-12))
    throw Error(ErrorCode::InvalidArgument, "form files assume an orthonormal domain frame");
  std::optional<int> w_index;
  if (pair.w()) {
    const Vector& w = *pair.w();
    Eigen::Index idx = 0;
    w.cwiseAbs().maxCoeff(&idx);
    if (!w.isApprox(Vector(Vector::Unit(w.size(), idx)), 1e-12))
      throw Error(ErrorCode::InvalidArgument, "w must be a coordinate direction");
    w_index = static_cast<int>(idx);
  }
  return from_form(pair.alpha(), pair.J().matrix(), w_index);
}

FormFile FormFile::parse(const std::string& text, double tol) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
  if (!j.is_object()) throw Error(ErrorCode::ParseError, "form file must be an object");
  FormFile f;
  try {
    f.dim_v = j.at("dim_v").get<int>();
    if (f.dim_v < 1) throw Error(ErrorCode::ParseError, "dim_v must be positive");
    const json& sig = j.at("w_signature");
    if (!sig.is_array() || sig.size() != 2) throw Error(ErrorCode::ParseError, "w_signature must be a pair");
    f.w_signature = {sig[0].get<int>(), sig[1].get<int>()};
    const json& gram = j.at("gram_w");
    if (!gram.is_array() || gram.empty()) throw Error(ErrorCode::ParseError, "gram_w must be a nonempty matrix");
    const auto k = static_cast<Eigen::Index>(gram.size());
    f.gram_w = read_matrix(gram, "gram_w", k, k);
    if ((f.gram_w - f.gram_w.transpose()).cwiseAbs().maxCoeff() > tol * (1.0 + f.gram_w.cwiseAbs().maxCoeff()))
      throw Error(ErrorCode::ParseError, "gram_w must be symmetric");

    const json& tensor = j.at("tensor");
    if (!tensor.is_array() || static_cast<int>(tensor.size()) != f.dim_v)
      throw Error(ErrorCode::ParseError, "tensor must have dim_v slices");
    f.values = Matrix(k, static_cast<Eigen::Index>(f.dim_v) * f.dim_v);
    for (int a = 0; a < f.dim_v; ++a) {
      const Matrix slice = read_matrix(tensor[static_cast<std::size_t>(a)], "tensor slice", f.dim_v, k);
      for (int b = 0; b < f.dim_v; ++b) f.values.col(static_cast<Eigen::Index>(a) * f.dim_v + b) = slice.row(b).transpose();
    }
    if (j.contains("J")) f.J = read_matrix(j.at("J"), "J", f.dim_v, f.dim_v);
    if (j.contains("w_index")) f.w_index = j.at("w_index").get<int>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }

  try {
    const QuadSpace space(f.gram_w, tol);
    const Signature sig = space.signature();
    if (sig.n_plus != f.w_signature[0] || sig.n_minus != f.w_signature[1])
      throw Error(ErrorCode::ParseError, "w_signature does not match gram_w");
    if (f.J) ComplexStructure(*f.J, Matrix::Identity(f.dim_v, f.dim_v), tol);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::ParseError) throw;
    throw Error(ErrorCode::ParseError, e.what());
  }
  if (f.w_index && (*f.w_index < 0 || *f.w_index >= f.gram_w.rows()))
    throw Error(ErrorCode::ParseError, "w_index out of range");
  return f;
}

FormFile FormFile::load(const std::string& path, double tol) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str(), tol);
}

std::string FormFile::dump() const {
  json j;
  j["dim_v"] = dim_v;
  j["w_signature"] = {w_signature[0], w_signature[1]};
  j["gram_w"] = write_matrix(gram_w);
  json tensor = json::array();
  for (int a = 0; a < dim_v; ++a) {
    Matrix slice(dim_v, gram_w.rows());
    for (int b = 0; b < dim_v; ++b) slice.row(b) = values.col(static_cast<Eigen::Index>(a) * dim_v + b).transpose();
    tensor.push_back(write_matrix(slice));
  }
  j["tensor"] = std::move(tensor);
  if (J) j["J"] = write_matrix(*J);
  if (w_index) j["w_index"] = *w_index;
  return j.dump(1) + "\n";
}

void FormFile::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path);
  out << dump();
  if (!out) throw Error(ErrorCode::IoError, "write failed for " + path);
}

}  // namespace kaehler
