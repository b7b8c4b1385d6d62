#include "floq/circuit.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>
#include <stdexcept>
#include <string>

namespace floq {

const char* op_name(OpKind k) {
  switch (k) {
    case OpKind::StatePrep: return "PREP";
    case OpKind::Readout: return "READOUT";
    case OpKind::Clifford1Q: return "GATE";
    case OpKind::ControlledPauli: return "CP";
    case OpKind::ErasureCheck: return "EC";
    case OpKind::ErasureCheckWithReset: return "EC*";
    case OpKind::Reset: return "RESET";
    case OpKind::ProjectiveMeasurePP: return "MPP";
  }
  return "?";
}

ErasureCircuit::ErasureCircuit(uint32_t n_qubits, NoiseParams noise)
    : n_qubits_(n_qubits), noise_(noise), wires_(n_qubits) {
  if (!noise.valid()) throw std::invalid_argument("noise rates must lie in [0, 1]");
}

uint32_t ErasureCircuit::push(Operation op) {
  op.time_index = layer_;
  for (int i = 0; i < op.n_targets(); ++i) {
    uint32_t q = op.targets[size_t(i)];
    if (q >= n_qubits_) throw std::out_of_range("qubit index out of range");
  }
  if (op.n_targets() == 2 && op.targets[0] == op.targets[1])
    throw std::invalid_argument("two-qubit operation with duplicate targets");
  uint32_t index = uint32_t(ops_.size());
  if (op.kind == OpKind::Readout || op.kind == OpKind::ErasureCheck ||
      op.kind == OpKind::ErasureCheckWithReset)
    op.check_outcome = int32_t(n_outcomes_++);
  if (op.kind == OpKind::Readout || op.kind == OpKind::ProjectiveMeasurePP)
    op.outcome = int32_t(n_outcomes_++);
  for (int i = 0; i < op.n_targets(); ++i) wires_[op.targets[size_t(i)]].push_back(index);
  ops_.push_back(op);
  return index;
}

uint32_t ErasureCircuit::prep(uint32_t q, Pauli basis, int sign) {
  if (basis == Pauli::I) throw std::invalid_argument("preparation basis must be X, Y or Z");
  if (sign != +1 && sign != -1) throw std::invalid_argument("preparation sign must be +1 or -1");
  Operation op;
  op.kind = OpKind::StatePrep;
  op.targets[0] = q;
  op.basis = basis;
  op.sign = int8_t(sign);
  return push(op);
}

uint32_t ErasureCircuit::readout(uint32_t q, Pauli basis) {
  if (basis == Pauli::I) throw std::invalid_argument("readout basis must be X, Y or Z");
  Operation op;
  op.kind = OpKind::Readout;
  op.targets[0] = q;
  op.basis = basis;
  return push(op);
}

uint32_t ErasureCircuit::gate1(Gate1Q g, uint32_t q) {
  Operation op;
  op.kind = OpKind::Clifford1Q;
  op.targets[0] = q;
  op.gate = g;
  return push(op);
}

uint32_t ErasureCircuit::controlled_pauli(uint32_t control, uint32_t target, Pauli p) {
  if (p == Pauli::I) throw std::invalid_argument("controlled-Pauli needs a nontrivial Pauli");
  Operation op;
  op.kind = OpKind::ControlledPauli;
  op.targets = {control, target};
  op.basis = p;
  return push(op);
}

uint32_t ErasureCircuit::measure_pp(uint32_t a, uint32_t b, Pauli p) {
  if (p == Pauli::I) throw std::invalid_argument("Pauli-product measurement needs a nontrivial Pauli");
  Operation op;
  op.kind = OpKind::ProjectiveMeasurePP;
  op.targets = {a, b};
  op.basis = p;
  return push(op);
}

uint32_t ErasureCircuit::erasure_check(uint32_t q) {
  Operation op;
  op.kind = OpKind::ErasureCheck;
  op.targets[0] = q;
  return push(op);
}

uint32_t ErasureCircuit::erasure_check_with_reset(uint32_t q) {
  Operation op;
  op.kind = OpKind::ErasureCheckWithReset;
  op.targets[0] = q;
  return push(op);
}

uint32_t ErasureCircuit::reset(uint32_t q) {
  Operation op;
  op.kind = OpKind::Reset;
  op.targets[0] = q;
  return push(op);
}

void ErasureCircuit::tick() { ++layer_; }

uint32_t ErasureCircuit::n_layers() const {
  uint32_t layers = 0;
  for (const auto& op : ops_) layers = std::max(layers, op.time_index + 1);
  return layers;
}

ErasureCircuit insert_erasure_locations(const ErasureCircuit& c) {
  if (c.locations_inserted()) throw std::logic_error("erasure locations already inserted");
  ErasureCircuit out = c;
  for (uint32_t q = 0; q < c.n_qubits(); ++q) {
    const auto& wire = c.wires()[q];
    for (size_t i = 0; i + 1 < wire.size(); ++i)
      out.mutable_locations().push_back({q, wire[i], wire[i + 1], c.noise().e});
  }
  out.mark_locations_inserted();
  return out;
}

ErasureCircuit instrument_noise(const ErasureCircuit& c) {
  return instrument_noise(c, std::vector<uint8_t>());
}

ErasureCircuit instrument_noise(const ErasureCircuit& c, const std::vector<uint8_t>& noisy) {
  if (c.instrumented()) throw std::logic_error("circuit is already instrumented");
  if (!noisy.empty() && noisy.size() != c.ops().size())
    throw std::invalid_argument("noisy-op mask size mismatch");
  ErasureCircuit out = c;
  const double p = c.noise().p;
  const double q = c.noise().q;
  for (size_t i = 0; i < out.mutable_ops().size(); ++i) {
    if (!noisy.empty() && !noisy[i]) continue;
    Operation& op = out.mutable_ops()[i];
    switch (op.kind) {
      case OpKind::StatePrep:
        op.depol = 1.5 * p;
        break;
      case OpKind::Readout:
        op.check_flip = q;
        op.outcome_flip = q;
        break;
      case OpKind::ErasureCheckWithReset:
        op.check_flip = q;
        op.depol = p;
        break;
      case OpKind::ErasureCheck:
        op.check_flip = q;
        break;
      case OpKind::Reset:
        op.depol = p;
        break;
      case OpKind::Clifford1Q:
        break;
      case OpKind::ControlledPauli:
        op.depol = p;
        break;
      case OpKind::ProjectiveMeasurePP:
        op.depol = p;
        op.outcome_flip = q;
        break;
    }
  }
  if (!noisy.empty() && c.locations_inserted()) {
    for (auto& loc : out.mutable_locations())
      if (!noisy[loc.before_op]) loc.rate = 0.0;
  }
  out.mark_instrumented();
  return out;
}

std::vector<std::string> validate(const ErasureCircuit& c) {
  std::vector<std::string> bad;
  auto complain = [&](size_t index, const std::string& what) {
    bad.push_back("op " + std::to_string(index) + ": " + what);
  };
  const auto& ops = c.ops();
  uint32_t layer = 0;
  std::vector<uint32_t> last_use_layer(c.n_qubits(), UINT32_MAX);
  std::vector<uint8_t> outcome_seen(c.n_outcomes(), 0);
  for (size_t i = 0; i < ops.size(); ++i) {
    const Operation& op = ops[i];
    if (op.time_index < layer) complain(i, "layers not monotone");
    layer = op.time_index;
    for (int t = 0; t < op.n_targets(); ++t) {
      uint32_t q = op.targets[size_t(t)];
      if (q >= c.n_qubits()) {
        complain(i, "qubit index out of range");
        continue;
      }
      if (last_use_layer[q] == op.time_index)
        complain(i, "qubit " + std::to_string(q) + " used twice in layer " +
                        std::to_string(op.time_index));
      last_use_layer[q] = op.time_index;
    }
    if (op.n_targets() == 2 && op.targets[0] == op.targets[1]) complain(i, "duplicate target");
    if ((op.kind == OpKind::StatePrep || op.kind == OpKind::Readout) && op.basis == Pauli::I)
      complain(i, "trivial basis");
    if (op_is_entangling(op.kind) && op.basis == Pauli::I) complain(i, "trivial Pauli");
    for (int32_t o : {op.check_outcome, op.outcome}) {
      if (o < 0) continue;
      if (o >= int32_t(c.n_outcomes()) || outcome_seen[size_t(o)])
        complain(i, "outcome index collision");
      else
        outcome_seen[size_t(o)] = 1;
    }
    const bool wants_check = op.kind == OpKind::Readout || op.kind == OpKind::ErasureCheck ||
                             op.kind == OpKind::ErasureCheckWithReset;
    const bool wants_outcome =
        op.kind == OpKind::Readout || op.kind == OpKind::ProjectiveMeasurePP;
    if (wants_check != op.has_check()) complain(i, "check-outcome index missing or spurious");
    if (wants_outcome != op.has_outcome()) complain(i, "outcome index missing or spurious");
    auto rate_ok = [](double r) { return r >= 0.0 && r <= 1.0; };
    if (!rate_ok(op.depol) || !rate_ok(op.check_flip) || !rate_ok(op.outcome_flip))
      complain(i, "noise attribute outside [0, 1]");
  }
  if (c.locations_inserted()) {
    // Recompute the expected gap set and compare.
    std::vector<std::pair<uint32_t, uint64_t>> expect;
    for (uint32_t q = 0; q < c.n_qubits(); ++q) {
      const auto& wire = c.wires()[q];
      for (size_t i = 0; i + 1 < wire.size(); ++i)
        expect.push_back({q, (uint64_t(wire[i]) << 32) | wire[i + 1]});
    }
    std::vector<std::pair<uint32_t, uint64_t>> have;
    for (const auto& loc : c.locations()) {
      have.push_back({loc.qubit, (uint64_t(loc.after_op) << 32) | loc.before_op});
      if (loc.rate < 0.0 || loc.rate > 1.0) bad.push_back("erasure location rate outside [0, 1]");
    }
    std::sort(expect.begin(), expect.end());
    std::sort(have.begin(), have.end());
    if (expect != have) bad.push_back("erasure locations do not match wire gaps");
  }
  return bad;
}

ErasureCircuit adjust_erasure_rates(const ErasureCircuit& c,
                                    const std::map<OpKind, double>& durations, double t_erasure,
                                    double a, double b) {
  if (!(t_erasure > 0.0)) throw std::invalid_argument("erasure time must be positive");
  if (a < 0.0 || a > 1.0 || b < 0.0 || b > 1.0)
    throw std::invalid_argument("duration weights must lie in [0, 1]");
  if (!c.locations_inserted()) throw std::logic_error("insert erasure locations first");
  ErasureCircuit out = c;
  auto duration = [&](OpKind k) {
    auto it = durations.find(k);
    return it == durations.end() ? 0.0 : it->second;
  };
  for (auto& loc : out.mutable_locations()) {
    const Operation& before = c.ops()[loc.after_op];
    const Operation& after = c.ops()[loc.before_op];
    const double wa = op_is_reset_like(before.kind) ? 1.0 : a;
    const double wb = op_is_reset_like(after.kind) ? 1.0 : b;
    const double rate = (wa * duration(before.kind) + wb * duration(after.kind)) / t_erasure;
    if (rate > 1.0)
      throw std::invalid_argument("adjusted erasure rate exceeds 1 at qubit " +
                                  std::to_string(loc.qubit));
    loc.rate = rate;
  }
  return out;
}

namespace {

const char* gate_name(Gate1Q g) {
  switch (g) {
    case Gate1Q::H: return "H";
    case Gate1Q::S: return "S";
    case Gate1Q::SDag: return "SDG";
    case Gate1Q::X: return "X";
    case Gate1Q::Y: return "Y";
    case Gate1Q::Z: return "Z";
  }
  return "?";
}

Gate1Q parse_gate(const std::string& s) {
  if (s == "H") return Gate1Q::H;
  if (s == "S") return Gate1Q::S;
  if (s == "SDG") return Gate1Q::SDag;
  if (s == "X") return Gate1Q::X;
  if (s == "Y") return Gate1Q::Y;
  if (s == "Z") return Gate1Q::Z;
  throw std::invalid_argument("unknown single-qubit gate: " + s);
}

char pauli_letter(Pauli p) {
  switch (p) {
    case Pauli::I: return 'I';
    case Pauli::X: return 'X';
    case Pauli::Y: return 'Y';
    case Pauli::Z: return 'Z';
  }
  return '?';
}

Pauli parse_pauli_letter(const std::string& s) {
  if (s == "X") return Pauli::X;
  if (s == "Y") return Pauli::Y;
  if (s == "Z") return Pauli::Z;
  throw std::invalid_argument("unknown Pauli: " + s);
}

}  // namespace

std::string format_circuit(const ErasureCircuit& c) {
  std::ostringstream os;
  os << "QUBITS " << c.n_qubits() << "\n";
  os << "NOISE e=" << c.noise().e << " p=" << c.noise().p << " q=" << c.noise().q << "\n";
  uint32_t layer = 0;
  for (const auto& op : c.ops()) {
    while (layer < op.time_index) {
      os << "TICK\n";
      ++layer;
    }
    switch (op.kind) {
      case OpKind::StatePrep:
        os << "PREP " << pauli_letter(op.basis) << (op.sign > 0 ? '+' : '-') << " " << op.targets[0];
        break;
      case OpKind::Readout:
        os << "READOUT " << pauli_letter(op.basis) << " " << op.targets[0];
        break;
      case OpKind::Clifford1Q:
        os << "GATE " << gate_name(op.gate) << " " << op.targets[0];
        break;
      case OpKind::ControlledPauli:
        os << "CP " << pauli_letter(op.basis) << " " << op.targets[0] << " " << op.targets[1];
        break;
      case OpKind::ErasureCheck:
        os << "EC " << op.targets[0];
        break;
      case OpKind::ErasureCheckWithReset:
        os << "EC* " << op.targets[0];
        break;
      case OpKind::Reset:
        os << "RESET " << op.targets[0];
        break;
      case OpKind::ProjectiveMeasurePP:
        os << "MPP " << pauli_letter(op.basis) << " " << op.targets[0] << " " << op.targets[1];
        break;
    }
    os << "\n";
  }
  return os.str();
}

ErasureCircuit parse_circuit(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  std::optional<ErasureCircuit> c;
  uint32_t n_qubits = 0;
  NoiseParams noise;
  bool saw_qubits = false;
  size_t line_no = 0;
  auto fail = [&](const std::string& what) {
    throw std::invalid_argument("line " + std::to_string(line_no) + ": " + what);
  };
  while (std::getline(is, line)) {
    ++line_no;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string tok;
    if (!(ls >> tok)) continue;
    std::vector<std::string> args;
    std::string a;
    while (ls >> a) args.push_back(a);
    auto argq = [&](size_t i) -> uint32_t {
      if (i >= args.size()) fail("missing argument");
      return uint32_t(std::stoul(args[i]));
    };
    if (tok == "QUBITS") {
      if (saw_qubits) fail("duplicate QUBITS line");
      n_qubits = argq(0);
      saw_qubits = true;
      continue;
    }
    if (tok == "NOISE") {
      for (const auto& kv : args) {
        auto eq = kv.find('=');
        if (eq == std::string::npos) fail("malformed NOISE entry");
        std::string key = kv.substr(0, eq);
        double val = std::stod(kv.substr(eq + 1));
        if (key == "e") noise.e = val;
        else if (key == "p") noise.p = val;
        else if (key == "q") noise.q = val;
        else fail("unknown noise parameter: " + key);
      }
      continue;
    }
    if (!saw_qubits) fail("QUBITS line must precede operations");
    if (!c) c.emplace(n_qubits, noise);
    if (tok == "TICK") {
      c->tick();
    } else if (tok == "PREP") {
      if (args.empty() || args[0].size() != 2) fail("PREP needs a signed basis like Z+");
      Pauli basis = parse_pauli_letter(args[0].substr(0, 1));
      int sign = args[0][1] == '+' ? +1 : args[0][1] == '-' ? -1 : 0;
      if (sign == 0) fail("PREP sign must be + or -");
      c->prep(argq(1), basis, sign);
    } else if (tok == "READOUT") {
      c->readout(argq(1), parse_pauli_letter(args.at(0)));
    } else if (tok == "GATE") {
      c->gate1(parse_gate(args.at(0)), argq(1));
    } else if (tok == "CP") {
      c->controlled_pauli(argq(1), argq(2), parse_pauli_letter(args.at(0)));
    } else if (tok == "MPP") {
      c->measure_pp(argq(1), argq(2), parse_pauli_letter(args.at(0)));
    } else if (tok == "EC") {
      c->erasure_check(argq(0));
    } else if (tok == "EC*") {
      c->erasure_check_with_reset(argq(0));
    } else if (tok == "RESET") {
      c->reset(argq(0));
    } else {
      fail("unknown instruction: " + tok);
    }
  }
  if (!saw_qubits) throw std::invalid_argument("missing QUBITS line");
  if (!c) c.emplace(n_qubits, noise);
  return *c;
}

}  // namespace floq
