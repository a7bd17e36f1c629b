#include "entrocheck/io.hpp"

#include "json.hpp"

#include <fstream>
#include <sstream>

namespace entrocheck::io {

using nlohmann::json;

namespace {

json matrix_json(const Matrix& m) {
  json re = json::array(), im = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json rr = json::array(), ir = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      rr.push_back(m(i, j).real());
      ir.push_back(m(i, j).imag());
    }
    re.push_back(std::move(rr));
    im.push_back(std::move(ir));
  }
  return {{"re", std::move(re)}, {"im", std::move(im)}};
}

json state_json(const DensityMatrix& rho) {
  json j = matrix_json(rho.matrix());
  j["dims"] = rho.dims();
  return j;
}

json ensemble_json(const Ensemble& e) {
  json members = json::array();
  for (const auto& m : e.members()) members.push_back({{"weight", m.weight}, {"state", state_json(m.state)}});
  return {{"members", std::move(members)}};
}

json povm_json(const Povm& p) {
  json els = json::array();
  for (const auto& a : p.elements()) els.push_back(matrix_json(a));
  return {{"elements", std::move(els)}};
}

json channel_json(const StochasticChannel& c) { return {{"rows", c.rows()}, {"cols", c.cols()}, {"p", c.table()}}; }

json parse(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
}

const json& field(const json& j, const char* name) {
  if (!j.is_object() || !j.contains(name)) throw ParseError(std::string("missing field \"") + name + "\"");
  return j.at(name);
}

template <typename T>
T get_as(const json& j, const char* name) {
  try {
    return field(j, name).get<T>();
  } catch (const json::exception&) {
    throw ParseError(std::string("field \"") + name + "\" has the wrong type");
  }
}

Matrix matrix_from(const json& j) {
  const auto re = get_as<std::vector<std::vector<double>>>(j, "re");
  std::vector<std::vector<double>> im;
  if (j.contains("im")) im = get_as<std::vector<std::vector<double>>>(j, "im");
  const auto rows = static_cast<Eigen::Index>(re.size());
  if (rows == 0) throw ParseError("matrix has no rows");
  const auto cols = static_cast<Eigen::Index>(re.front().size());
  if (!im.empty() && im.size() != re.size()) throw ParseError("\"re\" and \"im\" differ in shape");
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const auto& rr = re[static_cast<std::size_t>(i)];
    if (static_cast<Eigen::Index>(rr.size()) != cols) throw ParseError("ragged \"re\" rows");
    const std::vector<double>* ir = im.empty() ? nullptr : &im[static_cast<std::size_t>(i)];
    if (ir && static_cast<Eigen::Index>(ir->size()) != cols) throw ParseError("\"re\" and \"im\" differ in shape");
    for (Eigen::Index k = 0; k < cols; ++k)
      m(i, k) = Complex(rr[static_cast<std::size_t>(k)], ir ? (*ir)[static_cast<std::size_t>(k)] : 0.0);
  }
  return m;
}

DensityMatrix state_from(const json& j) {
  Matrix m = matrix_from(j);
  Dims dims = j.contains("dims") ? get_as<Dims>(j, "dims") : Dims{static_cast<int>(m.rows())};
  return DensityMatrix(std::move(m), std::move(dims));
}

Ensemble ensemble_from(const json& j, std::vector<double>* values) {
  const json& members = field(j, "members");
  if (!members.is_array()) throw ParseError("field \"members\" must be an array");
  std::vector<Ensemble::Member> out;
  for (const auto& m : members) {
    out.push_back({get_as<double>(m, "weight"), state_from(field(m, "state"))});
    if (values) values->push_back(get_as<double>(m, "value"));
  }
  return Ensemble(std::move(out));
}

}  // namespace

std::string to_json(const DensityMatrix& rho) { return state_json(rho).dump(); }
std::string to_json(const Povm& povm) { return povm_json(povm).dump(); }
std::string to_json(const StochasticChannel& channel) { return channel_json(channel).dump(); }
std::string to_json(const Ensemble& ensemble) { return ensemble_json(ensemble).dump(); }

std::string to_json(const ClassicalJoint& joint) {
  return json{{"nx", joint.nx()}, {"ny", joint.ny()}, {"ne", joint.ne()}, {"p", joint.table()}}.dump();
}

std::string to_json(const RelDistResult& r) {
  std::vector<double> w(r.weights.data(), r.weights.data() + r.weights.size());
  return json{{"value", r.value},
              {"weights", w},
              {"state", state_json(r.state)},
              {"converged", r.converged},
              {"iterations", r.iterations}}
      .dump();
}

std::string to_json(const ArrowResult& r) {
  return json{{"value", r.value},
              {"outcomes", r.outcomes},
              {"converged", r.converged},
              {"restarts", r.restarts},
              {"povm", povm_json(r.best_povm)}}
      .dump();
}

std::string to_json(const RoofResult& r) {
  return json{{"value", r.value}, {"converged", r.converged}, {"ensemble", ensemble_json(r.best_ensemble)}}.dump();
}

std::string to_json(const IntrinsicResult& r) {
  return json{{"value", r.value}, {"converged", r.converged}, {"channel", channel_json(r.channel)}}.dump();
}

std::string to_json(const ValuedEnsemble& ve) {
  json j = ensemble_json(ve.ensemble());
  for (std::size_t i = 0; i < ve.size(); ++i) j["members"][i]["value"] = ve.values()[i];
  return j.dump();
}

DensityMatrix state_from_json(const std::string& text) { return state_from(parse(text)); }

Povm povm_from_json(const std::string& text) {
  const json j = parse(text);
  const json& els = field(j, "elements");
  if (!els.is_array()) throw ParseError("field \"elements\" must be an array");
  std::vector<Matrix> out;
  for (const auto& e : els) out.push_back(matrix_from(e));
  return Povm(std::move(out));
}

Ensemble ensemble_from_json(const std::string& text) { return ensemble_from(parse(text), nullptr); }

ValuedEnsemble valued_ensemble_from_json(const std::string& text) {
  std::vector<double> values;
  Ensemble e = ensemble_from(parse(text), &values);
  return ValuedEnsemble(std::move(e), std::move(values));
}

ClassicalJoint joint_from_json(const std::string& text) {
  const json j = parse(text);
  return ClassicalJoint(get_as<int>(j, "nx"), get_as<int>(j, "ny"), get_as<int>(j, "ne"),
                        get_as<std::vector<double>>(j, "p"));
}

ConvexSetSpec convex_set_from_json(const std::string& text) {
  const json j = parse(text);
  const json& gens = field(j, "generators");
  if (!gens.is_array()) throw ParseError("field \"generators\" must be an array");
  std::vector<DensityMatrix> out;
  for (const auto& g : gens) out.push_back(state_from(g));
  const bool append = j.contains("append_maximally_mixed") ? get_as<bool>(j, "append_maximally_mixed") : true;
  return ConvexSetSpec(std::move(out), append);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace entrocheck::io
