#include "lagrax/chart.hpp"

#include <cmath>

namespace lagrax {

ReducedSystem hamilton_equations(const Chart& chart, const DiffPoly& h) {
    ReducedSystem sys{chart, h, {}, {}};
    sys.dq.resize(chart.m * (chart.N + 1));
    sys.dp.resize(chart.m * (chart.N + 1));
    for (size_t i = 0; i < chart.m; ++i)
        for (int j = 0; j <= chart.N; ++j) {
            sys.dq[chart.q_slot(i, j)] = h.derivative(chart.p(i, j));
            sys.dp[chart.q_slot(i, j)] = -h.derivative(chart.q(i, j));
        }
    return sys;
}

DiffPoly poisson_bracket(const Chart& chart, const DiffPoly& h1, const DiffPoly& h2) {
    DiffPoly out;
    for (size_t i = 0; i < chart.m; ++i)
        for (int j = 0; j <= chart.N; ++j) {
            out += h1.derivative(chart.q(i, j)) * h2.derivative(chart.p(i, j));
            out -= h1.derivative(chart.p(i, j)) * h2.derivative(chart.q(i, j));
        }
    return out;
}

namespace {

double eval_chart(const Chart& chart, const DiffPoly& p, const std::vector<double>& st) {
    return p.evaluate([&](const JetKey& k) -> double {
        if (k.kind != JetKey::Kind::jet)
            fail("unbound_symbol", "chart evaluation: unbound parameter or variable");
        size_t field = k.index;
        int level = k.orders[0];
        if (field < chart.m) return st[chart.q_slot(field, level)];
        return st[chart.p_slot(field - chart.m, level)];
    });
}

}  // namespace

Trajectory integrate_reduced(const ReducedSystem& sys, const std::vector<double>& state0,
                             double step, int n_steps) {
    if (step <= 0) fail("bad_argument", "integrate_reduced: step must be positive");
    const Chart& ch = sys.chart;
    if (state0.size() != ch.dim()) fail("shape_mismatch", "integrate_reduced: bad state size");

    size_t half = ch.m * (ch.N + 1);
    auto rhs = [&](const std::vector<double>& y, std::vector<double>& out) {
        for (size_t s = 0; s < half; ++s) {
            out[s] = eval_chart(ch, sys.dq[s], y);
            out[half + s] = eval_chart(ch, sys.dp[s], y);
        }
    };

    Trajectory tr;
    std::vector<double> y = state0;
    std::vector<double> k1(ch.dim()), k2(ch.dim()), k3(ch.dim()), k4(ch.dim()), tmp(ch.dim());
    auto record = [&](double s) {
        tr.s.push_back(s);
        tr.states.push_back(y);
        tr.energy.push_back(eval_chart(ch, sys.h, y));
    };
    record(0.0);
    for (int n = 0; n < n_steps; ++n) {
        rhs(y, k1);
        for (size_t i = 0; i < y.size(); ++i) tmp[i] = y[i] + 0.5 * step * k1[i];
        rhs(tmp, k2);
        for (size_t i = 0; i < y.size(); ++i) tmp[i] = y[i] + 0.5 * step * k2[i];
        rhs(tmp, k3);
        for (size_t i = 0; i < y.size(); ++i) tmp[i] = y[i] + step * k3[i];
        rhs(tmp, k4);
        bool finite = true;
        for (size_t i = 0; i < y.size(); ++i) {
            y[i] += step / 6.0 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
            finite = finite && std::isfinite(y[i]);
        }
        if (!finite) {
            tr.aborted_at = tr.states.size() - 1;
            break;
        }
        record(step * (n + 1));
    }
    return tr;
}

}  // namespace lagrax
