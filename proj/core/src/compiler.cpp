#include "cotforge/compiler.hpp"

#include <cmath>

#include "cotforge/rng.hpp"
#include "json.hpp"

namespace cotforge {

BitString feature_map(const BitString& x, int s) {
    if (s < 2) throw UnsupportedSize("feature_map: circuit size must be at least 2");
    const int n = static_cast<int>(x.size());
    const int r = s - 1;
    const int pad = 2 * r;
    BitString phi;
    phi.reserve(static_cast<std::size_t>(compiled_dimension(n, s)));
    phi.insert(phi.end(), static_cast<std::size_t>(pad), 0);
    phi.push_back(1);  // sentinel aligning with biases / blocking weights
    for (int i = n; i >= 1; --i) {
        phi.insert(phi.end(), static_cast<std::size_t>(pad), 0);
        phi.push_back(x[static_cast<std::size_t>(i - 1)]);
    }
    phi.insert(phi.end(), static_cast<std::size_t>(pad), 0);
    return phi;
}

std::vector<BitString> all_phi_images(int n, int s) {
    if (n > 24) throw UnsupportedSize("all_phi_images: 2^n inputs would be too many");
    std::vector<BitString> images;
    images.reserve(1ull << n);
    for (std::uint64_t v = 0; v < (1ull << n); ++v)
        images.push_back(feature_map(bits_of(v, static_cast<std::size_t>(n)), s));
    return images;
}

ThresholdCircuit pad_single_gate(const std::vector<double>& weights, double bias) {
    ThresholdCircuit c;
    c.n = static_cast<int>(weights.size());
    c.hidden_weights.push_back(weights);
    c.hidden_biases.push_back(bias);
    c.output_weights = {1.0};
    c.output_bias = -1.0;  // thr(y1 - 1) = y1
    return c;
}

CompiledGenerator compile(const ThresholdCircuit& c) {
    const int n = c.n;
    const int s = c.size();
    const int r = s - 1;
    if (r < 1) throw UnsupportedSize("compile: circuit size must be at least 2");

    double mass = 0.0;
    for (const auto& row : c.hidden_weights)
        for (double w : row) {
            if (!std::isfinite(w)) throw BadCircuit("compile: non-finite hidden weight");
            mass += std::abs(w);
        }
    for (double w : c.output_weights) {
        if (!std::isfinite(w)) throw BadCircuit("compile: non-finite output weight");
        mass += std::abs(w);
    }
    for (double b : c.hidden_biases) {
        if (!std::isfinite(b)) throw BadCircuit("compile: non-finite bias");
        mass += std::abs(b);
    }
    if (!std::isfinite(c.output_bias)) throw BadCircuit("compile: non-finite bias");
    mass += std::abs(c.output_bias);
    const double B = 1.0 + mass;
    if (B > std::ldexp(1.0, 40))
        throw BadCircuit("compile: blocking magnitude exceeds 2^40; rescale the circuit");

    // Layout, left to right (see the alignment diagram in docs/compiler.md):
    //   [ theta_out, -B x r | theta_r ... theta_1 | 0^{r+1} u_n | ... | 0^{r+1} u_1 | w_out | 0^r ]
    // against the feature map
    //   [ 0^{2r}           | 1                   | 0^{2r} x_n  | ... | 0^{2r} x_1  | 0^{2r}      ]
    // where u_i = (w_r[i], ..., w_1[i]). At step t <= r the sentinel 1 meets
    // theta_t and each x_i meets w_t[i]; at steps r+1..2r it meets a -B; at
    // step 2r+1 it meets theta_out while w_out meets (y_1, ..., y_r).
    std::vector<double> w;
    w.reserve(static_cast<std::size_t>(compiled_dimension(n, s)));
    w.push_back(c.output_bias);
    w.insert(w.end(), static_cast<std::size_t>(r), -B);
    for (int t = r; t >= 1; --t) w.push_back(c.hidden_biases[static_cast<std::size_t>(t - 1)]);
    for (int i = n; i >= 1; --i) {
        w.insert(w.end(), static_cast<std::size_t>(r + 1), 0.0);
        for (int t = r; t >= 1; --t)
            w.push_back(c.hidden_weights[static_cast<std::size_t>(t - 1)][static_cast<std::size_t>(i - 1)]);
    }
    for (int j = 0; j < r; ++j) w.push_back(c.output_weights[static_cast<std::size_t>(j)]);
    w.insert(w.end(), static_cast<std::size_t>(r), 0.0);

    CompiledGenerator cg;
    cg.generator.weights = std::move(w);
    cg.n = n;
    cg.s = s;
    cg.thinking_length = 2 * s - 1;
    cg.blocking_magnitude = B;
    cg.gate_schedule.resize(static_cast<std::size_t>(s));
    for (int t = 1; t <= r; ++t) cg.gate_schedule[static_cast<std::size_t>(t - 1)] = t;
    cg.gate_schedule[static_cast<std::size_t>(s - 1)] = 2 * s - 1;
    cg.special_steps = cg.gate_schedule;
    return cg;
}

namespace {

void check_one(const CompiledGenerator& cg, const ThresholdCircuit& c, const BitString& x,
               VerifyReport& report) {
    const BitString chain = chain_of_thought(cg.generator, feature_map(x, cg.s), cg.thinking_length);
    std::vector<bool> special(static_cast<std::size_t>(cg.thinking_length + 1), false);
    for (int t = 1; t <= cg.s; ++t) {
        const int step = cg.gate_schedule[static_cast<std::size_t>(t - 1)];
        special[static_cast<std::size_t>(step)] = true;
        const int expected = eval_gate(c, t, x);
        const int actual = chain[static_cast<std::size_t>(step - 1)];
        if (actual != expected)
            report.violations.push_back({x, step, "gate_trace", expected, actual});
    }
    for (int step = 1; step <= cg.thinking_length; ++step) {
        if (special[static_cast<std::size_t>(step)]) continue;
        const int actual = chain[static_cast<std::size_t>(step - 1)];
        if (actual != 0) report.violations.push_back({x, step, "nonzero_off_schedule", 0, actual});
    }
    const int expected = eval(c, x);
    const int actual = chain.back();
    if (actual != expected) report.violations.push_back({x, 0, "end_to_end", expected, actual});
    ++report.inputs_checked;
}

}  // namespace

VerifyReport verify_compiled(const CompiledGenerator& cg, const ThresholdCircuit& c,
                             int exhaustive_limit, std::uint64_t seed, std::uint64_t samples) {
    VerifyReport report;
    if (cg.n <= exhaustive_limit) {
        for (std::uint64_t v = 0; v < (1ull << cg.n); ++v)
            check_one(cg, c, bits_of(v, static_cast<std::size_t>(cg.n)), report);
    } else {
        Rng rng(derive_seed(seed, "verify_compiled", 0));
        for (std::uint64_t i = 0; i < samples; ++i)
            check_one(cg, c, random_bits(static_cast<std::size_t>(cg.n), rng), report);
    }
    return report;
}

std::string compiled_to_json(const CompiledGenerator& cg) {
    nlohmann::json j;
    j["n"] = cg.n;
    j["s"] = cg.s;
    j["d"] = cg.d();
    j["T"] = cg.thinking_length;
    j["B"] = cg.blocking_magnitude;
    j["schedule"] = cg.gate_schedule;
    j["special_steps"] = cg.special_steps;
    j["weights"] = cg.generator.weights;
    return j.dump(2);
}

CompiledGenerator compiled_from_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    CompiledGenerator cg;
    cg.n = j.at("n").get<int>();
    cg.s = j.at("s").get<int>();
    cg.thinking_length = j.at("T").get<int>();
    cg.blocking_magnitude = j.at("B").get<double>();
    cg.gate_schedule = j.at("schedule").get<std::vector<int>>();
    cg.special_steps = j.at("special_steps").get<std::vector<int>>();
    cg.generator.weights = j.at("weights").get<std::vector<double>>();
    if (cg.d() != j.at("d").get<int>()) throw BadConfig("compiled generator: d mismatch");
    return cg;
}

}  // namespace cotforge
