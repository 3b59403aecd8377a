#include "srbb/circuit.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <optional>
#include <sstream>

#include "srbb/errors.hpp"

namespace srbb {

namespace {

constexpr std::string_view kTailMarker = "// global-phase tail";

double literal(const GateInstance& g) {
  if (const auto* v = std::get_if<double>(&g.angle)) return *v;
  throw ValidationError(std::string("gate ") + std::string(gate_name(g.kind)) +
                        " has an unbound parameter slot");
}

void require_bound(const Circuit& c) {
  if (!c.is_bound()) throw ValidationError("circuit has unbound parameter slots");
}

void apply_to_buffer(const GateInstance& g, std::span<Complex> amps, int n) {
  static const Complex kI{0.0, 1.0};
  const int q = g.qubits[0];
  switch (g.kind) {
    case GateKind::CNOT:
      kernel::apply_cnot(amps, n, g.qubits[0], g.qubits[1]);
      return;
    case GateKind::RZ: {
      const double t = literal(g);
      kernel::apply_diag_1q(amps, n, q, std::exp(-kI * (t / 2)), std::exp(kI * (t / 2)));
      return;
    }
    case GateKind::PHASESHIFT:
      kernel::apply_diag_1q(amps, n, q, 1.0, std::exp(kI * literal(g)));
      return;
    case GateKind::S:
      kernel::apply_diag_1q(amps, n, q, 1.0, kI);
      return;
    case GateKind::SDG:
      kernel::apply_diag_1q(amps, n, q, 1.0, -kI);
      return;
    default: {
      const UnitaryMatrix m = gate_matrix(g);
      const Complex mm[4] = {m(0, 0), m(0, 1), m(1, 0), m(1, 1)};
      kernel::apply_1q(amps, n, q, mm);
      return;
    }
  }
}

std::string format_angle(double a) {
  if (a == kPi) return "pi";
  if (a == -kPi) return "-pi";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", a);
  return buf;
}

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void parse_fail(std::size_t line_no, std::string_view line, std::string_view why) {
  throw ValidationError("qasm line " + std::to_string(line_no) + " (" + std::string(line) +
                        "): " + std::string(why));
}

int parse_int(std::string_view s, std::size_t line_no, std::string_view line) {
  int v = 0;
  s = trim(s);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) parse_fail(line_no, line, "bad integer");
  return v;
}

double parse_angle(std::string_view s, std::size_t line_no, std::string_view line) {
  s = trim(s);
  if (s == "pi") return kPi;
  if (s == "-pi") return -kPi;
  // from_chars for double is unavailable in some libstdc++ builds; strtod is fine here.
  const std::string tmp(s);
  char* end = nullptr;
  const double v = std::strtod(tmp.c_str(), &end);
  if (end != tmp.c_str() + tmp.size()) parse_fail(line_no, line, "bad angle");
  return v;
}

int parse_qubit_ref(std::string_view s, std::size_t line_no, std::string_view line) {
  s = trim(s);
  if (s.size() < 4 || s.substr(0, 2) != "q[" || s.back() != ']') {
    parse_fail(line_no, line, "expected q[i]");
  }
  return parse_int(s.substr(2, s.size() - 3), line_no, line);
}

}  // namespace

std::string_view gate_name(GateKind k) {
  switch (k) {
    case GateKind::RY: return "ry";
    case GateKind::RZ: return "rz";
    case GateKind::H: return "h";
    case GateKind::S: return "s";
    case GateKind::SDG: return "sdg";
    case GateKind::X: return "x";
    case GateKind::PHASESHIFT: return "p";
    case GateKind::CNOT: return "cx";
  }
  return "?";
}

// ---- Circuit ---------------------------------------------------------------

Circuit::Circuit(int n_qubits, int slot_count) : n_qubits_(n_qubits), slot_count_(slot_count) {
  if (n_qubits <= 0) throw ValidationError("circuit needs at least one qubit");
  if (slot_count < 0) throw ValidationError("negative slot count");
}

bool Circuit::is_bound() const {
  return std::all_of(gates_.begin(), gates_.end(), [](const auto& g) { return g.is_bound(); });
}

Circuit& Circuit::append(GateInstance g) {
  const int need = arity(g.kind);
  for (int i = 0; i < need; ++i) {
    if (g.qubits[i] < 0 || g.qubits[i] >= n_qubits_) {
      throw ValidationError("gate " + std::string(gate_name(g.kind)) + " qubit " +
                            std::to_string(g.qubits[i]) + " out of range");
    }
  }
  if (need == 1) g.qubits[1] = -1;
  if (need == 2 && g.qubits[0] == g.qubits[1]) {
    throw ValidationError("CNOT control and target must differ");
  }
  const bool has_angle = !std::holds_alternative<std::monostate>(g.angle);
  if (is_rotation(g.kind) != has_angle) {
    throw ValidationError("gate " + std::string(gate_name(g.kind)) +
                          (has_angle ? " takes no angle" : " requires an angle"));
  }
  if (const auto* s = std::get_if<SlotRef>(&g.angle)) {
    if (s->index < 0 || s->index >= slot_count_) throw ValidationError("slot reference out of range");
  }
  if (const auto* v = std::get_if<double>(&g.angle); v && !std::isfinite(*v)) {
    throw ValidationError("non-finite gate angle");
  }
  gates_.push_back(g);
  return *this;
}

int Circuit::add_slots(int count) {
  if (count < 0) throw ValidationError("negative slot count");
  const int first = slot_count_;
  slot_count_ += count;
  return first;
}

Circuit& Circuit::append_circuit(const Circuit& sub, std::span<const int> qubit_map,
                                 int slot_offset) {
  if (static_cast<int>(qubit_map.size()) != sub.n_qubits()) {
    throw ValidationError("qubit map size does not match sub-circuit width");
  }
  for (GateInstance g : sub.gates()) {
    for (int i = 0; i < arity(g.kind); ++i) g.qubits[i] = qubit_map[static_cast<std::size_t>(g.qubits[i])];
    if (auto* s = std::get_if<SlotRef>(&g.angle)) s->index += slot_offset;
    append(g);
  }
  return *this;
}

// ---- operations ------------------------------------------------------------

UnitaryMatrix gate_matrix(const GateInstance& g) {
  switch (g.kind) {
    case GateKind::RY: return gates::RY(literal(g));
    case GateKind::RZ: return gates::RZ(literal(g));
    case GateKind::PHASESHIFT: return gates::PhaseShift(literal(g));
    case GateKind::H: return gates::H();
    case GateKind::S: return gates::S();
    case GateKind::SDG: return gates::Sdg();
    case GateKind::X: return gates::X();
    case GateKind::CNOT: return gates::CNOT();
  }
  throw ValidationError("unknown gate kind");
}

Circuit BindFn::operator()(const Circuit& circuit, std::span<const double> params) const {
  if (static_cast<int>(params.size()) != circuit.slot_count()) {
    throw ValidationError("bind: expected " + std::to_string(circuit.slot_count()) +
                          " parameters, got " + std::to_string(params.size()));
  }
  Circuit out(circuit.n_qubits());
  for (GateInstance g : circuit.gates()) {
    if (const auto* s = std::get_if<SlotRef>(&g.angle)) {
      g.angle = params[static_cast<std::size_t>(s->index)];
    }
    out.append(g);
  }
  return out;
}

StateVector run(const Circuit& circuit, const StateVector& input) {
  if (input.n_qubits() != circuit.n_qubits()) throw ValidationError("run: qubit count mismatch");
  require_bound(circuit);
  std::vector<Complex> amps(input.amplitudes().begin(), input.amplitudes().end());
  for (const auto& g : circuit.gates()) apply_to_buffer(g, amps, circuit.n_qubits());
  return StateVector(std::move(amps));
}

UnitaryMatrix unitary_of(const Circuit& circuit) {
  require_bound(circuit);
  const int n = circuit.n_qubits();
  if (n > 12) throw ValidationError("unitary_of supports at most 12 qubits");
  const auto d = static_cast<Eigen::Index>(dim_of(n));
  ComplexMatrix m = ComplexMatrix::Identity(d, d);
  for (Eigen::Index c = 0; c < d; ++c) {
    std::span<Complex> col(m.col(c).data(), static_cast<std::size_t>(d));
    for (const auto& g : circuit.gates()) apply_to_buffer(g, col, n);
  }
  return UnitaryMatrix(std::move(m));
}

CircuitStats stats(const Circuit& circuit) {
  CircuitStats st;
  std::vector<int> layer(static_cast<std::size_t>(circuit.n_qubits()), 0);
  for (const auto& g : circuit.gates()) {
    if (g.phase_tail) continue;
    int at = 0;
    for (int i = 0; i < arity(g.kind); ++i) at = std::max(at, layer[static_cast<std::size_t>(g.qubits[i])]);
    ++at;
    for (int i = 0; i < arity(g.kind); ++i) layer[static_cast<std::size_t>(g.qubits[i])] = at;
    st.depth = std::max(st.depth, at);
    if (g.kind == GateKind::CNOT) {
      ++st.n_cnot;
    } else if (g.kind == GateKind::RY || g.kind == GateKind::RZ) {
      ++st.n_rot;
    } else {
      ++st.n_other;
    }
  }
  return st;
}

std::string to_qasm(const Circuit& circuit) {
  require_bound(circuit);
  std::ostringstream os;
  os << "OPENQASM 3.0;\ninclude \"stdgates.inc\";\nqubit[" << circuit.n_qubits() << "] q;\n";
  bool in_tail = false;
  for (const auto& g : circuit.gates()) {
    if (g.phase_tail && !in_tail) os << kTailMarker << '\n';
    in_tail = g.phase_tail;
    os << gate_name(g.kind);
    if (const auto* v = std::get_if<double>(&g.angle)) os << '(' << format_angle(*v) << ')';
    os << " q[" << g.qubits[0] << ']';
    if (g.kind == GateKind::CNOT) os << ", q[" << g.qubits[1] << ']';
    os << ";\n";
  }
  return os.str();
}

Circuit parse_qasm(std::string_view text) {
  std::optional<Circuit> circuit;
  bool tail = false;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    const std::string_view raw = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    const std::string_view line = trim(raw);
    if (line.empty()) continue;
    if (line == kTailMarker) {
      tail = true;
      continue;
    }
    if (line.starts_with("//")) continue;
    if (line.starts_with("OPENQASM") || line.starts_with("include")) continue;
    if (line.back() != ';') parse_fail(line_no, line, "missing ';'");
    const std::string_view stmt = trim(line.substr(0, line.size() - 1));
    if (stmt.starts_with("qubit[")) {
      const auto close = stmt.find(']');
      if (close == std::string_view::npos) parse_fail(line_no, line, "bad qubit declaration");
      circuit.emplace(parse_int(stmt.substr(6, close - 6), line_no, line));
      continue;
    }
    if (!circuit) parse_fail(line_no, line, "gate before qubit declaration");

    const auto name_end = stmt.find_first_of("( ");
    if (name_end == std::string_view::npos) parse_fail(line_no, line, "missing operands");
    const std::string_view name = stmt.substr(0, name_end);
    std::string_view rest = stmt.substr(name_end);
    GateInstance g;
    static constexpr GateKind kAll[] = {GateKind::RY, GateKind::RZ, GateKind::H, GateKind::S,
                                        GateKind::SDG, GateKind::X, GateKind::PHASESHIFT,
                                        GateKind::CNOT};
    const auto* hit = std::find_if(std::begin(kAll), std::end(kAll),
                                   [&](GateKind k) { return gate_name(k) == name; });
    if (hit == std::end(kAll)) parse_fail(line_no, line, "unsupported gate");
    g.kind = *hit;
    if (rest.starts_with('(')) {
      const auto close = rest.find(')');
      if (close == std::string_view::npos) parse_fail(line_no, line, "unterminated angle");
      g.angle = parse_angle(rest.substr(1, close - 1), line_no, line);
      rest = rest.substr(close + 1);
    }
    const auto comma = rest.find(',');
    g.qubits[0] = parse_qubit_ref(rest.substr(0, comma), line_no, line);
    if (comma != std::string_view::npos) g.qubits[1] = parse_qubit_ref(rest.substr(comma + 1), line_no, line);
    g.phase_tail = tail;
    circuit->append(g);
  }
  if (!circuit) throw ValidationError("qasm: no qubit declaration");
  return *std::move(circuit);
}

}  // namespace srbb
