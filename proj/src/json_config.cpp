#include "dfrac/json_config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <iterator>
#include <map>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "dfrac/emit.hpp"
#include "dfrac/errors.hpp"

namespace dfrac {

namespace {

using nlohmann::json;

// ---- value positions -------------------------------------------------------
// nlohmann does not report where a value sits in the text, so the input is
// fed through an iterator that remembers the last non-blank character read;
// on every SAX event that character belongs to the token just scanned.

struct ReadMark {
  std::ptrdiff_t last = 0;
};

class MarkingIterator {
 public:
  using iterator_category = std::input_iterator_tag;
  using value_type = char;
  using difference_type = std::ptrdiff_t;
  using pointer = const char*;
  using reference = const char&;

  MarkingIterator(const char* begin, const char* p, ReadMark* mark) : begin_(begin), p_(p), mark_(mark) {}
  reference operator*() const {
    if (!std::isspace(static_cast<unsigned char>(*p_))) mark_->last = p_ - begin_;
    return *p_;
  }
  MarkingIterator& operator++() {
    ++p_;
    return *this;
  }
  MarkingIterator operator++(int) {
    MarkingIterator old = *this;
    ++p_;
    return old;
  }
  bool operator==(const MarkingIterator& o) const { return p_ == o.p_; }
  bool operator!=(const MarkingIterator& o) const { return p_ != o.p_; }

 private:
  const char* begin_;
  const char* p_;
  ReadMark* mark_;
};

class PositionIndex : public nlohmann::json_sax<json> {
 public:
  PositionIndex(const std::string& text, const ReadMark* mark) : text_(text), mark_(mark) {}

  bool null() override { return value(); }
  bool boolean(bool) override { return value(); }
  bool number_integer(number_integer_t) override { return value(); }
  bool number_unsigned(number_unsigned_t) override { return value(); }
  bool number_float(number_float_t, const string_t&) override { return value(); }
  bool string(string_t&) override { return value(); }
  bool binary(binary_t&) override { return value(); }
  bool start_object(std::size_t) override {
    record();
    frames_.push_back({false, 0, {}});
    return true;
  }
  bool key(string_t& k) override {
    frames_.back().key = escape(k);
    return true;
  }
  bool end_object() override { return close(); }
  bool start_array(std::size_t) override {
    record();
    frames_.push_back({true, 0, {}});
    return true;
  }
  bool end_array() override { return close(); }
  bool parse_error(std::size_t, const std::string&, const nlohmann::detail::exception&) override { return false; }

  /// Line of the value at `pointer`, or of its nearest recorded ancestor.
  int line_of(std::string pointer) const {
    for (;;) {
      const auto it = lines_.find(pointer);
      if (it != lines_.end()) return it->second;
      if (pointer.empty()) return 1;
      pointer.erase(pointer.rfind('/'));
    }
  }

 private:
  struct Frame {
    bool array;
    int index;
    std::string key;
  };

  static std::string escape(const std::string& k) {
    std::string out;
    for (char c : k) {
      if (c == '~') out += "~0";
      else if (c == '/') out += "~1";
      else out += c;
    }
    return out;
  }

  std::string current_pointer() const {
    std::string p;
    for (const auto& f : frames_) p += "/" + (f.array ? std::to_string(f.index) : f.key);
    return p;
  }

  int current_line() const {
    const auto end = text_.begin() + std::min<std::ptrdiff_t>(mark_->last, static_cast<std::ptrdiff_t>(text_.size()));
    return 1 + static_cast<int>(std::count(text_.begin(), end, '\n'));
  }

  void record() { lines_.emplace(current_pointer(), current_line()); }

  bool value() {
    record();
    advance();
    return true;
  }

  bool close() {
    frames_.pop_back();
    advance();
    return true;
  }

  void advance() {
    if (!frames_.empty() && frames_.back().array) ++frames_.back().index;
  }

  const std::string& text_;
  const ReadMark* mark_;
  std::vector<Frame> frames_;
  std::map<std::string, int> lines_;
};

// ---- schema helpers -----------------------------------------------------

class Schema {
 public:
  Schema(std::string source, const PositionIndex& index) : source_(std::move(source)), index_(index) {}

  [[noreturn]] void fail(const std::string& pointer, const std::string& what) const {
    throw ConfigError(source_ + ":" + std::to_string(index_.line_of(pointer)) + ": " +
                      (pointer.empty() ? "/" : pointer) + ": " + what);
  }

  const json& field(const json& obj, const std::string& ptr, const std::string& key) const {
    if (!obj.is_object()) fail(ptr, "expected an object");
    const auto it = obj.find(key);
    if (it == obj.end()) fail(ptr, "missing required field '" + key + "'");
    return *it;
  }

  double number(const json& v, const std::string& ptr) const {
    if (!v.is_number()) fail(ptr, "expected a number");
    return v.get<double>();
  }

  int integer(const json& v, const std::string& ptr) const {
    if (!v.is_number_integer()) fail(ptr, "expected an integer");
    return v.get<int>();
  }

  std::string string(const json& v, const std::string& ptr) const {
    if (!v.is_string()) fail(ptr, "expected a string");
    return v.get<std::string>();
  }

  Eigen::VectorXd vector(const json& v, const std::string& ptr) const {
    if (!v.is_array()) fail(ptr, "expected an array of numbers");
    Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
    for (std::size_t i = 0; i < v.size(); ++i) out(static_cast<Eigen::Index>(i)) = number(v[i], ptr + "/" + std::to_string(i));
    return out;
  }

  Eigen::MatrixXd matrix(const json& v, const std::string& ptr) const {
    if (!v.is_array() || v.empty()) fail(ptr, "expected a nonempty array of rows");
    const std::size_t rows = v.size();
    Eigen::MatrixXd out;
    for (std::size_t r = 0; r < rows; ++r) {
      const std::string rp = ptr + "/" + std::to_string(r);
      const Eigen::VectorXd row = vector(v[r], rp);
      if (r == 0) out.resize(static_cast<Eigen::Index>(rows), row.size());
      if (row.size() != out.cols()) fail(rp, "row length differs from the first row");
      out.row(static_cast<Eigen::Index>(r)) = row.transpose();
    }
    return out;
  }

 private:
  std::string source_;
  const PositionIndex& index_;
};

LinOperator parse_operator(const Schema& s, const json& v, const std::string& ptr) {
  const std::string type = s.string(s.field(v, ptr, "type"), ptr + "/type");
  if (type == "dense") {
    const Eigen::MatrixXd m = s.matrix(s.field(v, ptr, "matrix"), ptr + "/matrix");
    if (m.rows() != m.cols()) s.fail(ptr + "/matrix", "matrix must be square");
    return LinOperator::dense(m);
  }
  if (type == "diagonal") {
    const Eigen::VectorXd m = s.vector(s.field(v, ptr, "multipliers"), ptr + "/multipliers");
    if (m.size() == 0) s.fail(ptr + "/multipliers", "expected at least one multiplier");
    std::vector<double> grid;
    if (v.contains("grid")) {
      const Eigen::VectorXd g = s.vector(v["grid"], ptr + "/grid");
      if (g.size() != m.size()) s.fail(ptr + "/grid", "grid length differs from multipliers");
      grid.assign(g.data(), g.data() + g.size());
    }
    return LinOperator::diagonal(m, grid);
  }
  if (type == "laplacian1d") {
    const double a = v.contains("a") ? s.number(v["a"], ptr + "/a") : 0.0;
    const double b = v.contains("b") ? s.number(v["b"], ptr + "/b") : std::numbers::pi;
    const int points = s.integer(s.field(v, ptr, "points"), ptr + "/points");
    if (points < 1) s.fail(ptr + "/points", "expected points >= 1");
    if (!(b > a)) s.fail(ptr, "expected b > a");
    return LinOperator::laplacian1d(a, b, points);
  }
  s.fail(ptr + "/type", "unknown operator type '" + type + "' (expected dense, diagonal, laplacian1d)");
}

Eigen::VectorXd parse_initial(const Schema& s, const json& root, const std::string& key, Eigen::Index d) {
  const std::string ptr = "/" + key;
  if (!root.contains(key)) return Eigen::VectorXd::Zero(d);
  const json& v = root[key];
  if (v.is_string() && v.get<std::string>() == "zero") return Eigen::VectorXd::Zero(d);
  const Eigen::VectorXd out = s.vector(v, ptr);
  if (out.size() != d) s.fail(ptr, "expected " + std::to_string(d) + " entries");
  return out;
}

StateForcing named_forcing(const Schema& s, const json& payload, const std::string& ptr, const LinOperator& op) {
  const std::string name = s.string(s.field(payload, ptr, "name"), ptr + "/name");
  const double scale = payload.contains("scale") ? s.number(payload["scale"], ptr + "/scale") : 1.0;
  StateForcing f;
  f.label = name;
  if (name == "heat") {
    double dx = 1.0;
    if (const auto* lap = std::get_if<Laplacian1DRepr>(&op.repr())) dx = lap->spacing();
    if (payload.contains("dx")) dx = s.number(payload["dx"], ptr + "/dx");
    const double sdx = std::sqrt(dx);
    f.fn = [scale, sdx](int n, const Eigen::VectorXd& v) -> Eigen::VectorXd {
      return scale * std::sin(static_cast<double>(n)) / (1.0 + std::pow(n, 3.0)) * v / (1.0 + sdx * v.norm());
    };
    f.lipschitz = 2.0 * std::fabs(scale);
    f.bound_m = [scale](int n) { return std::fabs(scale) / (1.0 + std::pow(n, 3.0)); };
    f.bound_w = [sdx](double y) { return y / (1.0 + sdx * y); };
    f.growth_c = 1.0;
  } else if (name == "linear") {
    f.fn = [scale](int, const Eigen::VectorXd& v) -> Eigen::VectorXd { return scale * v; };
    f.lipschitz = std::fabs(scale);
    f.bound_m = [scale](int) { return std::fabs(scale); };
    f.bound_w = [](double y) { return y; };
    f.growth_c = 1.0;
  } else if (name == "tanh") {
    f.fn = [scale](int, const Eigen::VectorXd& v) -> Eigen::VectorXd { return scale * v.array().tanh().matrix(); };
    f.lipschitz = std::fabs(scale);
    f.bound_m = [scale](int) { return std::fabs(scale); };
    f.bound_w = [](double y) { return y; };
    f.growth_c = 1.0;
  } else {
    s.fail(ptr + "/name", "unknown state-dependent forcing '" + name + "' (expected heat, linear, tanh)");
  }
  if (payload.contains("offset")) {
    // Constant source added to every component; f(n, 0) is then nonzero, so
    // the declared growth envelope no longer applies and is dropped.
    const double offset = s.number(payload["offset"], ptr + "/offset");
    f.fn = [base = f.fn, offset](int n, const Eigen::VectorXd& v) -> Eigen::VectorXd {
      return (base(n, v).array() + offset).matrix();
    };
    if (offset != 0.0) {
      f.bound_m = nullptr;
      f.bound_w = nullptr;
      f.growth_c = 0.0;
    }
  }
  if (payload.contains("lipschitz")) f.lipschitz = s.number(payload["lipschitz"], ptr + "/lipschitz");
  return f;
}

}  // namespace

ProblemConfig parse_problem(const std::string& text, const std::string& source) {
  ReadMark mark;
  PositionIndex index(text, &mark);
  const char* b = text.data();
  const char* e = text.data() + text.size();
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& err) {
    const auto byte = std::min<std::size_t>(err.byte, text.size());
    const int line = 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(byte), '\n'));
    std::string what = err.what();
    const auto colon = what.find(": ", what.find("parse error"));
    throw ConfigError(source + ":" + std::to_string(line) + ": invalid JSON" +
                      (colon == std::string::npos ? std::string() : what.substr(colon)));
  }
  json::sax_parse(MarkingIterator(b, b, &mark), MarkingIterator(b, e, &mark), &index);
  const Schema s(source, index);
  if (!root.is_object()) s.fail("", "expected a JSON object");

  ProblemConfig cfg;
  const double alpha = s.number(s.field(root, "", "alpha"), "/alpha");
  if (!(alpha > 1.0 && alpha <= 2.0)) s.fail("/alpha", "alpha must satisfy 1 < alpha <= 2");
  cfg.problem.alpha = FracOrder(alpha);
  cfg.problem.horizon = s.integer(s.field(root, "", "horizon"), "/horizon");
  if (cfg.problem.horizon < 4) s.fail("/horizon", "horizon must be >= 4");
  auto op = std::make_shared<const LinOperator>(parse_operator(s, s.field(root, "", "operator"), "/operator"));
  cfg.problem.op = op;
  const Eigen::Index d = op->dim();
  cfg.problem.u0 = parse_initial(s, root, "u0", d);
  cfg.problem.u1 = parse_initial(s, root, "u1", d);

  if (root.contains("forcing")) {
    const json& f = root["forcing"];
    const std::string type = s.string(s.field(f, "/forcing", "type"), "/forcing/type");
    if (type == "none") {
      cfg.problem.forcing = NoForcing{};
    } else if (type == "sequence") {
      const Eigen::MatrixXd rows = s.matrix(s.field(f, "/forcing", "payload"), "/forcing/payload");
      if (rows.cols() != d) s.fail("/forcing/payload", "each row must have " + std::to_string(d) + " entries");
      if (rows.rows() < cfg.problem.horizon - 1) {
        s.fail("/forcing/payload", "need g(0..N-2), i.e. " + std::to_string(cfg.problem.horizon - 1) + " rows");
      }
      cfg.problem.forcing = VecSeq(Eigen::MatrixXd(rows.transpose()));
    } else if (type == "statedep") {
      cfg.problem.forcing = named_forcing(s, s.field(f, "/forcing", "payload"), "/forcing/payload", *op);
    } else {
      s.fail("/forcing/type", "unknown forcing type '" + type + "' (expected none, sequence, statedep)");
    }
  }

  if (root.contains("weight")) {
    const std::string kind = s.string(s.field(root["weight"], "/weight", "kind"), "/weight/kind");
    try {
      cfg.weight = WeightSpec::parse(kind);
    } catch (const std::exception& e) {
      s.fail("/weight/kind", e.what());
    }
  }
  if (root.contains("method")) {
    cfg.method = s.string(root["method"], "/method");
    if (cfg.method != "auto") {
      try {
        parse_method(cfg.method);
      } catch (const std::exception& e) {
        s.fail("/method", e.what());
      }
    }
  }
  if (root.contains("solver")) {
    cfg.solver = s.string(root["solver"], "/solver");
    if (cfg.solver != "auto" && cfg.solver != "linear" && cfg.solver != "direct" && cfg.solver != "picard") {
      s.fail("/solver", "unknown solver '" + cfg.solver + "' (expected auto, linear, direct, picard)");
    }
  }
  try {
    cfg.problem.validate();
  } catch (const std::exception& e) {
    s.fail("", e.what());
  }
  return cfg;
}

ProblemConfig load_problem(const std::string& path) { return parse_problem(read_file(path), path); }

LinOperator parse_operator_descriptor(const std::string& descriptor, int dim) {
  if (dim < 1) throw UsageError("operator dimension must be >= 1");
  if (descriptor == "zero") return LinOperator::zero(dim);
  if (descriptor == "laplacian") return LinOperator::laplacian1d(0.0, std::numbers::pi, dim);
  const auto colon = descriptor.find(':');
  const std::string head = descriptor.substr(0, colon);
  std::vector<double> values;
  if (colon != std::string::npos) {
    std::stringstream list(descriptor.substr(colon + 1));
    std::string item;
    while (std::getline(list, item, ',')) {
      try {
        values.push_back(std::stod(item));
      } catch (const std::exception&) {
        throw ConfigError("operator descriptor '" + descriptor + "': bad number '" + item + "'");
      }
    }
  }
  if (head == "scalar" && values.size() == 1) return LinOperator::dense(Eigen::MatrixXd::Constant(1, 1, values[0]));
  if (head == "diag" && !values.empty()) {
    return LinOperator::diagonal(Eigen::Map<const Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size())));
  }
  throw ConfigError("operator descriptor '" + descriptor + "' not understood (expected zero, laplacian, scalar:<a>, diag:<m1>,...)");
}

}  // namespace dfrac
