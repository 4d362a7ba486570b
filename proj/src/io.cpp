#include "calib/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "calib/error.hpp"

namespace calib::io {

namespace {

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw Error(ErrorCode::ParseError, std::string("missing field \"") + key + "\"");
  }
  return j.at(key);
}

double number(const Json& j, const char* key) {
  const Json& v = field(j, key);
  if (!v.is_number()) throw Error(ErrorCode::ParseError, std::string("\"") + key + "\" is not a number");
  double x = v.get<double>();
  if (!std::isfinite(x)) throw Error(ErrorCode::NonFinite, std::string("\"") + key + "\" is not finite");
  return x;
}

const Json& array(const Json& j, const char* key) {
  const Json& v = field(j, key);
  if (!v.is_array()) throw Error(ErrorCode::ParseError, std::string("\"") + key + "\" is not an array");
  return v;
}

int label(const Json& j) {
  double y = number(j, "y");
  if (y != 0.0 && y != 1.0) throw Error(ErrorCode::AtomOutOfRange, "label must be 0 or 1");
  return static_cast<int>(y);
}

void write_number(std::ostringstream& os, double x) {
  if (!std::isfinite(x)) {
    os << "null";
    return;
  }
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  os << buf;
}

void write(std::ostringstream& os, const Json& j, int indent, int depth) {
  auto newline = [&](int d) {
    if (indent < 0) return;
    os << '\n' << std::string(static_cast<std::size_t>(indent * d), ' ');
  };
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        os << "{}";
        return;
      }
      os << '{';
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) os << ',';
        first = false;
        newline(depth + 1);
        os << Json(it.key()).dump() << (indent < 0 ? ":" : ": ");
        write(os, it.value(), indent, depth + 1);
      }
      newline(depth);
      os << '}';
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        os << "[]";
        return;
      }
      os << '[';
      bool first = true;
      for (const auto& v : j) {
        if (!first) os << ',';
        first = false;
        newline(depth + 1);
        write(os, v, indent, depth + 1);
      }
      newline(depth);
      os << ']';
      return;
    }
    case Json::value_t::number_float:
      write_number(os, j.get<double>());
      return;
    default:
      os << j.dump();
  }
}

}  // namespace

Pld pld_from_json(const Json& j) {
  std::vector<Atom> atoms;
  for (const auto& a : array(j, "atoms")) atoms.push_back({number(a, "p"), label(a), number(a, "mass")});
  return Pld::make(std::move(atoms));
}

FinitePredictionTask task_from_json(const Json& j) {
  std::vector<TaskPoint> pts;
  for (const auto& p : array(j, "points")) {
    pts.push_back({number(p, "weight"), number(p, "bayes"), number(p, "prediction")});
  }
  return make_task(std::move(pts));
}

VMixtureLoss loss_from_json(const Json& j) {
  std::vector<VComponent> comps;
  for (const auto& c : array(j, "v_mixture")) comps.push_back({number(c, "v"), number(c, "lambda")});
  Affine affine;
  if (j.contains("affine")) {
    const Json& a = j.at("affine");
    affine = {number(a, "a"), number(a, "b")};
  }
  return VMixtureLoss::make(std::move(comps), affine);
}

PostProcessing postprocessing_from_json(const Json& j) {
  std::vector<Piece> pieces;
  for (const auto& p : array(j, "pieces")) {
    pieces.push_back({number(p, "lo"), number(p, "hi"), number(p, "slope"), number(p, "intercept")});
  }
  return PostProcessing::make(std::move(pieces));
}

Json to_json(const Pld& pld) {
  Json atoms = Json::array();
  for (const auto& a : pld.atoms()) atoms.push_back({{"p", a.p}, {"y", a.y}, {"mass", a.mass}});
  return {{"atoms", atoms}};
}

Json to_json(const FinitePredictionTask& task) {
  Json pts = Json::array();
  for (const auto& p : task.points) {
    pts.push_back({{"weight", p.weight}, {"bayes", p.bayes}, {"prediction", p.prediction}});
  }
  return {{"points", pts}};
}

Json to_json(const VMixtureLoss& loss) {
  Json comps = Json::array();
  for (const auto& c : loss.components()) comps.push_back({{"v", c.v}, {"lambda", c.lambda}});
  return {{"v_mixture", comps}, {"affine", {{"a", loss.affine().a}, {"b", loss.affine().b}}}};
}

Json to_json(const PostProcessing& kappa) {
  Json pieces = Json::array();
  for (const auto& p : kappa.pieces()) {
    pieces.push_back({{"lo", p.lo}, {"hi", p.hi}, {"slope", p.slope}, {"intercept", p.intercept}});
  }
  return {{"pieces", pieces}};
}

Json to_json(const CouplingTable& coupling) {
  Json entries = Json::array();
  for (const auto& e : coupling.entries) {
    entries.push_back({{"p", e.p}, {"q", e.q}, {"y", e.y}, {"mass", e.mass}});
  }
  return {{"coupling", entries}};
}

Json to_json(const Companion& companion) {
  return std::visit([](const auto& c) { return to_json(c); }, companion);
}

Json to_json(const TransportResult& result) {
  Json plan = Json::array();
  for (const auto& e : result.plan) {
    plan.push_back({{"source", e.source}, {"target", e.target}, {"mass", e.mass}});
  }
  return {{"value", result.value}, {"plan", plan}};
}

Json to_json(const PiecewisePrediction& law) {
  Json pieces = Json::array();
  for (const auto& p : law.pieces) pieces.push_back({{"lo", p.lo}, {"hi", p.hi}, {"density", p.density}});
  return {{"atom0", law.atom0}, {"atom1", law.atom1}, {"pieces", pieces}};
}

Json to_json(const PosteriorFunction& post) {
  Json pieces = Json::array();
  for (const auto& p : post.pieces) pieces.push_back({{"lo", p.lo}, {"hi", p.hi}, {"value", p.value}});
  Json out;
  out["at0"] = post.at0 ? Json(*post.at0) : Json(nullptr);
  out["at1"] = post.at1 ? Json(*post.at1) : Json(nullptr);
  out["pieces"] = pieces;
  return out;
}

Json to_json(const OmniReport& r) {
  Json out = {{"lhs", r.lhs}, {"rhs", r.rhs},     {"regret", r.regret}, {"smce", r.smce},
              {"w", r.w},     {"sigma", r.sigma}, {"bound", r.bound}};
  out["ratio"] = r.bound > 0.0 ? Json(r.ratio) : Json(nullptr);
  return out;
}

Json to_json(const SampleSet& samples) {
  Json draws = Json::array();
  for (const auto& [p, y] : samples.draws) draws.push_back(Json::array({p, y}));
  return {{"draws", draws}, {"seed", samples.seed}, {"source", samples.source}};
}

Json to_json(const DistinguishReport& r) {
  return {{"advantage", r.advantage},
          {"collision_rate", r.collision_rate},
          {"trials", r.trials},
          {"ci_halfwidth", r.ci_halfwidth}};
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, path.string() + ": " + e.what());
  }
}

std::string dump(const Json& j, int indent) {
  std::ostringstream os;
  write(os, j, indent, 0);
  return os.str();
}

void write_json_file(const std::filesystem::path& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::ParseError, "cannot write " + path.string());
  out << dump(j) << '\n';
}

}  // namespace calib::io
