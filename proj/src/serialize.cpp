#include "swnet/serialize.hpp"

#include <stdexcept>

namespace swnet {
namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

json controls_to_json(const std::vector<ControlBit>& controls)
{
    json out = json::array();
    for (const auto& c : controls) out.push_back({c.qubit, c.value});
    return out;
}

std::vector<ControlBit> controls_from_json(const json& j)
{
    std::vector<ControlBit> out;
    for (const auto& c : j) out.push_back({c.at(0).get<int>(), c.at(1).get<int>()});
    return out;
}

json metadata_to_json(const ProgramMetadata& m)
{
    json terms = json::array();
    for (const auto& t : m.link_terms)
        terms.push_back({{"power", t.power}, {"target", t.target}, {"controls", controls_to_json(t.controls)}});
    return {
        {"factor", to_string(m.factor)},
        {"dt", m.dt},
        {"n_s", m.n_s},
        {"L", m.L},
        {"n_p", m.n_p},
        {"sigma", m.sigma},
        {"sigma_scale", m.sigma_scale},
        {"gamma", m.gamma},
        {"density", m.density},
        {"register_angles", m.register_angles},
        {"extra_angles", m.extra_angles},
        {"wiring", m.wiring},
        {"affine_a", m.affine_a},
        {"affine_b", m.affine_b},
        {"link_terms", terms},
    };
}

ProgramMetadata metadata_from_json(const json& j)
{
    ProgramMetadata m;
    m.factor = factor_from_string(j.at("factor").get<std::string>());
    m.dt = j.at("dt").get<double>();
    m.n_s = j.at("n_s").get<int>();
    m.L = j.at("L").get<int>();
    m.n_p = j.at("n_p").get<int>();
    m.sigma = j.at("sigma").get<double>();
    m.sigma_scale = j.at("sigma_scale").get<double>();
    m.gamma = j.at("gamma").get<double>();
    m.density = j.at("density").get<double>();
    m.register_angles = j.at("register_angles").get<std::vector<double>>();
    m.extra_angles = j.at("extra_angles").get<std::vector<double>>();
    m.wiring = j.at("wiring").get<std::vector<std::array<int, 2>>>();
    m.affine_a = j.at("affine_a").get<std::vector<std::uint64_t>>();
    m.affine_b = j.at("affine_b").get<std::vector<std::uint64_t>>();
    for (const auto& t : j.at("link_terms"))
        m.link_terms.push_back({t.at("power").get<int>(), controls_from_json(t.at("controls")), t.at("target").get<int>()});
    return m;
}

} // namespace

json to_json(const ShortcutSet& links)
{
    json pairs = json::array();
    for (const auto& [a, b] : links.pairs) pairs.push_back({a, b});
    return {{"n_r", links.n_qubits}, {"mode", to_string(links.mode)}, {"pairs", pairs}};
}

ShortcutSet shortcuts_from_json(const json& j)
{
    ShortcutSet s;
    s.n_qubits = j.at("n_r").get<int>();
    s.mode = link_mode_from_string(j.at("mode").get<std::string>());
    for (const auto& p : j.at("pairs")) s.pairs.emplace_back(p.at(0).get<std::uint64_t>(), p.at(1).get<std::uint64_t>());
    return s;
}

json to_json(const DisorderField& field) { return {{"width", field.width}, {"energies", field.energies}}; }

DisorderField disorder_from_json(const json& j)
{
    return {j.at("width").get<double>(), j.at("energies").get<std::vector<double>>()};
}

json to_json(const NoiseParams& noise)
{
    return {{"n_r", noise.n_qubits},     {"epsilon", noise.epsilon},     {"tau_g", noise.tau_g},
            {"deltas", noise.deltas}, {"couplings", noise.couplings}};
}

NoiseParams noise_from_json(const json& j)
{
    NoiseParams n;
    n.n_qubits = j.at("n_r").get<int>();
    n.epsilon = j.at("epsilon").get<double>();
    n.tau_g = j.at("tau_g").get<double>();
    n.deltas = j.at("deltas").get<std::vector<double>>();
    n.couplings = j.at("couplings").get<std::vector<double>>();
    return n;
}

json to_json(const Gate& gate)
{
    json j = std::visit(
        overloaded{
            [](const RZ& g) { return json{{"qubit", g.qubit}, {"angle", g.angle}}; },
            [](const Hadamard& g) { return json{{"qubit", g.qubit}}; },
            [](const CNot& g) { return json{{"control", g.control}, {"target", g.target}}; },
            [](const CPhase& g) { return json{{"control", g.control}, {"target", g.target}, {"angle", g.angle}}; },
            [](const MultiControlledRX& g) {
                return json{{"controls", controls_to_json(g.controls)}, {"target", g.target}, {"angle", g.angle}};
            },
            [](const ModAffine& g) { return json{{"a", g.a}, {"b", g.b}, {"inverse", g.inverse}}; },
        },
        gate.op);
    j["gate"] = gate_name(gate);
    if (gate.elementary_count != 1) j["elementary_count"] = gate.elementary_count;
    return j;
}

Gate gate_from_json(const json& j)
{
    const auto name = j.at("gate").get<std::string>();
    Gate g{RZ{0, 0.0}};
    if (name == "RZ")
        g.op = RZ{j.at("qubit").get<int>(), j.at("angle").get<double>()};
    else if (name == "HAD")
        g.op = Hadamard{j.at("qubit").get<int>()};
    else if (name == "CNOT")
        g.op = CNot{j.at("control").get<int>(), j.at("target").get<int>()};
    else if (name == "CPHASE")
        g.op = CPhase{j.at("control").get<int>(), j.at("target").get<int>(), j.at("angle").get<double>()};
    else if (name == "MCRX")
        g.op = MultiControlledRX{controls_from_json(j.at("controls")), j.at("target").get<int>(),
                                 j.at("angle").get<double>()};
    else if (name == "MODAFFINE")
        g.op = ModAffine{j.at("a").get<std::uint64_t>(), j.at("b").get<std::uint64_t>(), j.at("inverse").get<bool>()};
    else
        throw std::invalid_argument("unknown gate: " + name);
    g.elementary_count = j.value("elementary_count", std::int64_t{1});
    return g;
}

json to_json(const GateProgram& program)
{
    json gates = json::array();
    for (const auto& g : program.gates) gates.push_back(to_json(g));
    return {
        {"n_r", program.n_qubits},
        {"declared_gate_count", program.declared_gate_count},
        {"gate_count", program.gates.size()},
        {"elementary_total", program.elementary_total()},
        {"metadata", metadata_to_json(program.metadata)},
        {"gates", gates},
    };
}

GateProgram program_from_json(const json& j)
{
    GateProgram p;
    p.n_qubits = j.at("n_r").get<int>();
    p.declared_gate_count = j.at("declared_gate_count").get<std::int64_t>();
    p.metadata = metadata_from_json(j.at("metadata"));
    for (const auto& g : j.at("gates")) p.gates.push_back(gate_from_json(g));
    return p;
}

json to_json(const TrotterStep& step)
{
    return {
        {"h0_half", to_json(step.h0_half)},
        {"h1_half", to_json(step.h1_half)},
        {"h2", to_json(step.h2)},
        {"elementary_total", step.elementary_total()},
        {"declared_total", step.declared_total()},
    };
}

} // namespace swnet
