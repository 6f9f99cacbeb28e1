#pragma once

// Gate-level IR. Qubit 0 is the least significant bit of the basis index.
//
// Angle conventions:
//   RZ(t) = exp(-i t Z / 2), RX(t) = exp(-i t X / 2), RY(t) = exp(-i t Y / 2)
//   P(l)  = diag(1, e^{i l}),  GPHASE(t) = e^{i t} I
// A controlled GPHASE multiplies the control-satisfying subspace by e^{i t};
// it has no target. A CNOT is an X with one control.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "schro/errors.hpp"

namespace schro {

enum class GateKind { x, h, phase, rz, rx, ry, global_phase };

inline std::string_view gate_name(GateKind k) {
  switch (k) {
    case GateKind::x: return "X";
    case GateKind::h: return "H";
    case GateKind::phase: return "P";
    case GateKind::rz: return "RZ";
    case GateKind::rx: return "RX";
    case GateKind::ry: return "RY";
    case GateKind::global_phase: return "GPHASE";
  }
  return "?";
}

inline GateKind parse_gate_kind(std::string_view s) {
  if (s == "X") return GateKind::x;
  if (s == "H") return GateKind::h;
  if (s == "P") return GateKind::phase;
  if (s == "RZ") return GateKind::rz;
  if (s == "RX") return GateKind::rx;
  if (s == "RY") return GateKind::ry;
  if (s == "GPHASE") return GateKind::global_phase;
  throw ParseError("unknown gate kind '" + std::string(s) + "'");
}

inline bool has_angle(GateKind k) { return k != GateKind::x && k != GateKind::h; }

struct Control {
  int qubit = 0;
  /// true: fires on |1>, false: fires on |0>.
  bool on_one = true;

  friend bool operator==(const Control&, const Control&) = default;
};

struct Gate {
  GateKind kind = GateKind::x;
  int target = -1;  ///< -1 for GPHASE
  std::vector<Control> controls;
  double angle = 0.0;

  friend bool operator==(const Gate&, const Gate&) = default;

  bool is_cnot() const { return kind == GateKind::x && controls.size() == 1 && controls[0].on_one; }

  Gate dagger() const {
    Gate g = *this;
    if (has_angle(kind)) g.angle = -angle;
    return g;
  }
};

inline Gate make_gate(GateKind kind, int target, double angle = 0.0, std::vector<Control> controls = {}) {
  return Gate{kind, target, std::move(controls), angle};
}

inline Gate global_phase(double angle) { return Gate{GateKind::global_phase, -1, {}, angle}; }

inline Gate cnot(int control, int target) { return Gate{GateKind::x, target, {{control, true}}, 0.0}; }

struct Register {
  std::string name;
  int lo = 0;
  int hi = 0;  ///< inclusive
  int size() const { return hi - lo + 1; }
  friend bool operator==(const Register&, const Register&) = default;
};

class Circuit {
 public:
  Circuit() = default;
  explicit Circuit(int width) : width_(width) {
    if (width < 0) throw RangeError("Circuit: negative width");
  }

  int width() const { return width_; }
  const std::vector<Gate>& gates() const { return gates_; }
  const std::vector<Register>& registers() const { return registers_; }
  std::size_t size() const { return gates_.size(); }

  void add_register(std::string name, int lo, int hi) {
    if (lo > hi || lo < 0 || hi >= width_) throw RangeError("register '" + name + "' outside circuit width");
    for (const auto& r : registers_)
      if (!(hi < r.lo || lo > r.hi)) throw RangeError("register '" + name + "' overlaps '" + r.name + "'");
    registers_.push_back(Register{std::move(name), lo, hi});
  }

  const Register& reg(std::string_view name) const {
    for (const auto& r : registers_)
      if (r.name == name) return r;
    throw RangeError("no register named '" + std::string(name) + "'");
  }

  Circuit& add(Gate g) {
    validate(g);
    gates_.push_back(std::move(g));
    return *this;
  }

  Circuit& append(const Circuit& other) {
    if (other.width_ > width_) throw RangeError("append: circuit is wider than the destination");
    gates_.insert(gates_.end(), other.gates_.begin(), other.gates_.end());
    return *this;
  }

  /// Append `other` with qubit q mapped to map[q].
  Circuit& append_mapped(const Circuit& other, const std::vector<int>& map) {
    if (int(map.size()) != other.width_) throw ShapeError("append_mapped: map size differs from source width");
    gates_.reserve(gates_.size() + other.gates_.size());
    for (Gate g : other.gates_) {
      if (g.target >= 0) g.target = map[std::size_t(g.target)];
      for (auto& c : g.controls) c.qubit = map[std::size_t(c.qubit)];
      add(std::move(g));
    }
    return *this;
  }

  /// Inverse circuit: reversed order, each gate inverted.
  Circuit dagger() const {
    Circuit out(width_);
    out.registers_ = registers_;
    out.gates_.reserve(gates_.size());
    for (auto it = gates_.rbegin(); it != gates_.rend(); ++it) out.gates_.push_back(it->dagger());
    return out;
  }

  /// Every gate gains the extra control.
  Circuit controlled(Control c) const {
    if (c.qubit < 0 || c.qubit >= width_) throw RangeError("controlled: control qubit outside width");
    Circuit out(width_);
    out.registers_ = registers_;
    for (Gate g : gates_) {
      g.controls.push_back(c);
      out.add(std::move(g));
    }
    return out;
  }

  Circuit repeated(long long times) const {
    if (times < 0) throw RangeError("repeated: negative count");
    Circuit out(width_);
    out.registers_ = registers_;
    out.gates_.reserve(gates_.size() * std::size_t(times));
    for (long long i = 0; i < times; ++i) out.gates_.insert(out.gates_.end(), gates_.begin(), gates_.end());
    return out;
  }

  friend bool operator==(const Circuit& a, const Circuit& b) {
    return a.width_ == b.width_ && a.registers_ == b.registers_ && a.gates_ == b.gates_;
  }

 private:
  void validate(const Gate& g) const {
    if (g.kind == GateKind::global_phase) {
      if (g.target != -1) throw RangeError("GPHASE takes no target");
    } else if (g.target < 0 || g.target >= width_) {
      throw RangeError("gate target " + std::to_string(g.target) + " outside width " + std::to_string(width_));
    }
    for (std::size_t i = 0; i < g.controls.size(); ++i) {
      const int q = g.controls[i].qubit;
      if (q < 0 || q >= width_) throw RangeError("control qubit outside width");
      if (q == g.target) throw RangeError("control qubit equals target");
      for (std::size_t k = 0; k < i; ++k)
        if (g.controls[k].qubit == q) throw RangeError("duplicate control qubit");
    }
    if (!std::isfinite(g.angle)) throw RangeError("non-finite gate angle");
  }

  int width_ = 0;
  std::vector<Register> registers_;
  std::vector<Gate> gates_;
};

// ---------------------------------------------------------------------------
// Text dump:
//   QUBITS <n>
//   REG <name> <lo>..<hi>
//   GATE <kind> [target=<q>] [controls=<q:pol,...>] [angle=<17 significant digits>]

inline std::string format_angle(double a) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", a);
  return buf;
}

inline void dump(const Circuit& c, std::ostream& os) {
  os << "QUBITS " << c.width() << '\n';
  for (const auto& r : c.registers()) os << "REG " << r.name << ' ' << r.lo << ".." << r.hi << '\n';
  for (const auto& g : c.gates()) {
    os << "GATE " << gate_name(g.kind);
    if (g.target >= 0) os << " target=" << g.target;
    if (!g.controls.empty()) {
      os << " controls=";
      for (std::size_t i = 0; i < g.controls.size(); ++i) {
        if (i) os << ',';
        os << g.controls[i].qubit << ':' << (g.controls[i].on_one ? 1 : 0);
      }
    }
    if (has_angle(g.kind)) os << " angle=" << format_angle(g.angle);
    os << '\n';
  }
}

inline std::string dump(const Circuit& c) {
  std::ostringstream os;
  dump(c, os);
  return os.str();
}

namespace detail {
inline int parse_int(std::string_view s, int line) {
  int v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw ParseError("line " + std::to_string(line) + ": bad integer '" + std::string(s) + "'");
  return v;
}

inline double parse_double(std::string_view s, int line) {
  std::string tmp(s);
  char* end = nullptr;
  const double v = std::strtod(tmp.c_str(), &end);
  if (tmp.empty() || end != tmp.c_str() + tmp.size())
    throw ParseError("line " + std::to_string(line) + ": bad number '" + tmp + "'");
  return v;
}
}  // namespace detail

inline Circuit parse_circuit(std::istream& is) {
  std::string line;
  int lineno = 0;
  Circuit c;
  bool have_header = false;
  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string word;
    ls >> word;
    if (word == "QUBITS") {
      if (have_header) throw ParseError("line " + std::to_string(lineno) + ": duplicate QUBITS header");
      std::string n;
      ls >> n;
      c = Circuit(detail::parse_int(n, lineno));
      have_header = true;
      continue;
    }
    if (!have_header) throw ParseError("line " + std::to_string(lineno) + ": expected QUBITS header first");
    if (word == "REG") {
      std::string name, span;
      ls >> name >> span;
      const auto dots = span.find("..");
      if (name.empty() || dots == std::string::npos)
        throw ParseError("line " + std::to_string(lineno) + ": malformed REG line");
      c.add_register(name, detail::parse_int(std::string_view(span).substr(0, dots), lineno),
                     detail::parse_int(std::string_view(span).substr(dots + 2), lineno));
    } else if (word == "GATE") {
      std::string kind;
      ls >> kind;
      Gate g;
      g.kind = parse_gate_kind(kind);
      bool got_angle = false;
      std::string field;
      while (ls >> field) {
        const auto eq = field.find('=');
        if (eq == std::string::npos) throw ParseError("line " + std::to_string(lineno) + ": bad field '" + field + "'");
        const std::string_view key = std::string_view(field).substr(0, eq);
        const std::string_view val = std::string_view(field).substr(eq + 1);
        if (key == "target") {
          g.target = detail::parse_int(val, lineno);
        } else if (key == "angle") {
          g.angle = detail::parse_double(val, lineno);
          got_angle = true;
        } else if (key == "controls") {
          std::size_t pos = 0;
          while (pos <= val.size()) {
            auto comma = val.find(',', pos);
            if (comma == std::string_view::npos) comma = val.size();
            const auto item = val.substr(pos, comma - pos);
            const auto colon = item.find(':');
            if (colon == std::string_view::npos)
              throw ParseError("line " + std::to_string(lineno) + ": control needs <q>:<pol>");
            const int pol = detail::parse_int(item.substr(colon + 1), lineno);
            if (pol != 0 && pol != 1) throw ParseError("line " + std::to_string(lineno) + ": polarity must be 0 or 1");
            g.controls.push_back(Control{detail::parse_int(item.substr(0, colon), lineno), pol == 1});
            pos = comma + 1;
          }
        } else {
          throw ParseError("line " + std::to_string(lineno) + ": unknown field '" + std::string(key) + "'");
        }
      }
      if (has_angle(g.kind) && !got_angle)
        throw ParseError("line " + std::to_string(lineno) + ": gate " + kind + " needs an angle");
      try {
        c.add(std::move(g));
      } catch (const RangeError& e) {
        throw ParseError("line " + std::to_string(lineno) + ": " + e.what());
      }
    } else {
      throw ParseError("line " + std::to_string(lineno) + ": unknown record '" + word + "'");
    }
  }
  if (!have_header) throw ParseError("missing QUBITS header");
  return c;
}

inline Circuit parse_circuit(const std::string& text) {
  std::istringstream is(text);
  return parse_circuit(is);
}

}  // namespace schro
