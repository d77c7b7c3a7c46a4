// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

#include "uavcov/extensions.hpp"
#include "uavcov/montecarlo.hpp"

using namespace uavcov;

namespace {

int failures = 0;

void report(int id, bool ok, const std::string& detail)
{
    std::printf("%s criterion %d: %s\n", ok ? "PASS" : "FAIL", id, detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
}

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0)
{
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c, d);
    return buf;
}

NetworkConfig with_kind(ClusterKind k, double size)
{
    NetworkConfig c;
    c.cluster.kind = k;
    if (k == ClusterKind::thomas) c.cluster.sigma = size;
    else c.cluster.radius = size;
    return c;
}

const double gamma_e = db_to_linear(-40.0);

// 1: power-split optimum in the noise-limited regime.
void criterion1()
{
    NetworkConfig c;
    c.conversion_noise = 0.01;  // -10 dB amplitude, squared
    const double gs = db_to_linear(-15.0), tau = c.frame;
    const double rs = optimal_rho(tau, gamma_e, gs, c);
    NetworkModel m(c, without_interference({}));
    const auto a = association_probabilities(m);
    double best = -1, arg = 0;
    for (int i = 1; i <= 99; ++i) {
        const double rho = 0.01 * i;
        const double v = noise_limited_stp(m, a, rho, tau, gamma_e, gs).stp.total;
        if (v > best) best = v, arg = rho;
    }
    const bool ok = std::abs(rs - 0.7603) <= 1e-3 && std::abs(arg - rs) <= 0.02;
    report(1, ok, fmt("rho*=%.6f, scan peak at %.2f (STP %.6f)", rs, arg, best));
}

// 2: analysis against simulation.
void criterion2()
{
    const auto t0 = std::chrono::steady_clock::now();
    bool ok = true;
    std::string worst;
    double worst_widths = 0;
    auto check = [&](const std::string& name, double analytic, const TrialEstimate& mc) {
        const double diff = std::abs(analytic - mc.value);
        const double widths = mc.score_half_width > 0 ? std::abs(analytic - mc.centre) / mc.score_half_width : 0.0;
        const bool pass = diff <= 0.015 && mc.agrees(analytic, 3.0);
        if (!pass) {
            ok = false;
            std::printf("  mismatch %s: analysis %.6f, simulation %.6f +- %.6f\n", name.c_str(), analytic, mc.value,
                        mc.half_width);
        }
        if (widths > worst_widths) worst_widths = widths, worst = name;
    };
    for (auto [kind, size] : {std::pair{ClusterKind::thomas, 10.0}, std::pair{ClusterKind::matern, 20.0}}) {
        const auto c = with_kind(kind, size);
        const std::string tag = to_string(kind);
        AnalysisSettings st;
        NetworkModel m(c, st);
        const auto a = association_probabilities(m);
        const auto rep = successful_transmission(m, a, gamma_e, 1.0, c.frame, 0.5);
        McDownlinkRequest req;
        req.gamma_e = gamma_e;
        req.gamma_sinr = 1.0;
        req.tau = c.frame;
        req.rho = 0.5;
        req.trials = mc_default_trials;
        const auto dl = simulate_downlink(c, st, req);
        for (std::size_t j = 0; j < 3; ++j)
            for (auto s : link_states)
                check(tag + " A(" + std::to_string(j) + "," + to_string(s) + ")", a(j, s),
                      dl.association[j][static_cast<int>(s)]);
        check(tag + " P_E", rep.energy.total, dl.energy);
        check(tag + " P_SINR", rep.sinr.total, dl.sinr);
        check(tag + " P_ST", rep.stp.total, dl.stp);

        const double pa = active_probability(m, a, 0.5, 0.0);
        const auto pa_mc = simulate_active_probability(c, st, 0.5, 0.0, mc_default_trials);
        check(tag + " p_active", pa, pa_mc);
        const double gul = db_to_linear(-20.0);
        const double ul = uplink_sinr_coverage(m, make_uplink_context(m, pa, gul));
        McUplinkRequest ur;
        ur.gamma_ul = gul;
        ur.p_active = pa_mc.value;
        ur.tau = 0.5;
        ur.rho = 0.0;
        ur.trials = mc_default_trials;
        check(tag + " P_UL", ul, simulate_uplink(c, st, ur).coverage);
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    ok = ok && secs <= 600;
    report(2, ok, "22 quantities, worst " + worst + fmt(" at %.2f score widths, %.0f s", worst_widths, secs));
}

// 3: normalisation.
void criterion3()
{
    double worst_a = 0, worst_law = 0, worst_serv = 0;
    for (auto kind : {ClusterKind::thomas, ClusterKind::matern})
        for (double size : {5.0, 10.0, 20.0, 40.0})
            for (double h : {10.0, 50.0, 100.0}) {
                auto c = with_kind(kind, size);
                c.uav_height = h;
                NetworkModel m(c);
                const auto a = association_probabilities(m);
                worst_a = std::max(worst_a, std::abs(a.sum() - 1.0));
                for (std::size_t j = 0; j < m.tier_count(); ++j)
                    for (auto s : link_states) {
                        if (a(j, s) <= 0) continue;
                        const auto sd = serving_distance_pdf(m, j, s);
                        QuadOptions o{1e-10, 1e-15};
                        o.scale = sd.scale;
                        worst_serv = std::max(worst_serv, std::abs(integrate_value(sd.pdf, sd.points, o) - 1.0));
                    }
            }
    for (auto kind : {ClusterKind::thomas, ClusterKind::matern}) {
        const auto c = with_kind(kind, kind == ClusterKind::thomas ? 10.0 : 20.0);
        std::vector<DistanceLaw> laws;
        const auto r0 = law_R0(c);
        laws.push_back(r0.combined);
        for (const auto& d : r0.by_state) laws.push_back(d);
        for (const auto& d : law_RU(c)) laws.push_back(d);
        for (const auto& d : law_RG(c)) laws.push_back(d);
        for (const auto& d : laws) {
            QuadOptions o{1e-12, 1e-15};
            o.scale = 100.0;
            std::vector<double> pts{d.lo};
            for (double x : {d.lo + 5, d.lo + 50, d.lo + 500})
                if (x < d.hi) pts.push_back(x);
            pts.push_back(d.hi);
            worst_law = std::max(worst_law, std::abs(integrate_value(d.pdf, pts, o) - 1.0));
        }
    }
    const bool ok = worst_a <= 1e-3 && worst_law <= 1e-6 && worst_serv <= 1e-4;
    report(3, ok, fmt("max |sum A - 1| = %.2e over 24 points, distance laws %.2e, serving densities %.2e", worst_a,
                      worst_law, worst_serv));
}

// 4: monotonicity and invariances.
void criterion4()
{
    std::vector<std::string> broken;
    NetworkConfig c;
    NetworkModel m(c);
    const auto a = association_probabilities(m);
    double prev = 2;
    for (double rho = 0.1; rho < 0.95; rho += 0.1) {
        const double e = energy_coverage(m, a, gamma_e, 1.0, rho).total;
        if (e > prev) broken.push_back(fmt("P_E rises in rho at %.1f", rho));
        prev = e;
    }
    prev = -1;
    for (double tau = 0.1; tau < 1.05; tau += 0.1) {
        const double e = energy_coverage(m, a, gamma_e, tau, 0.5).total;
        if (e < prev) broken.push_back(fmt("P_E falls in tau at %.1f", tau));
        prev = e;
    }
    const double s_ref = successful_transmission(m, a, gamma_e, 1.0, 1.0, 0.5).sinr.total;
    for (double tau : {0.2, 0.5, 0.8})
        if (successful_transmission(m, a, gamma_e, 1.0, tau, 0.5).sinr.total != s_ref)
            broken.push_back(fmt("P_SINR changes with tau at %.1f", tau));
    prev = -1;
    for (double rho = 0.1; rho < 0.95; rho += 0.1) {
        const double s = sinr_coverage(m, a, 1.0, rho).total;
        if (s < prev) broken.push_back(fmt("P_SINR falls in rho at %.1f", rho));
        prev = s;
    }
    prev = 2;
    for (double sigma : {5.0, 10.0, 20.0, 40.0}) {
        NetworkModel ms(with_kind(ClusterKind::thomas, sigma));
        const double v = successful_transmission(ms, gamma_e, 1.0, 1.0, 0.5).stp.total;
        if (v > prev) broken.push_back(fmt("STP rises with sigma at %.0f", sigma));
        prev = v;
    }
    double excess = 0;
    for (double rho : {0.3, 0.5, 0.7})
        for (double tau : {0.5, 1.0})
            for (double gs_db : {-10.0, 0.0, 10.0}) {
                const auto r = successful_transmission(m, a, gamma_e, db_to_linear(gs_db), tau, rho);
                excess = std::max(excess, r.stp.total - std::min(r.energy.total, r.sinr.total));
            }
    if (excess > 0) broken.push_back(fmt("P_ST exceeds min(P_E, P_SINR) by up to %.2e", excess));
    std::string detail = broken.empty() ? "all orderings hold" : "";
    for (const auto& b : broken) detail += (detail.empty() ? "" : "; ") + b;
    report(4, broken.empty(), detail);
}

// 5: interior optimum in UAV height.
void criterion5()
{
    double best = -1, arg = 0;
    std::string trace;
    for (double h = 0; h <= 100; h += 5) {
        auto c = NetworkConfig{};
        c.uav_height = h;
        NetworkModel m(c);
        const double v = successful_transmission(m, gamma_e, 1.0, 1.0, 0.5).stp.total;
        if (v > best) best = v, arg = h;
        if (static_cast<int>(h) % 25 == 0) trace += fmt(" H=%.0f:%.5f", h, v);
    }
    const bool ok = arg >= 10 && arg <= 35;
    report(5, ok, fmt("STP peaks at H=%.0f m (%.6f);", arg, best) + trace);
}

// 6: interference is negligible for SINR coverage.
void criterion6()
{
    NetworkConfig c;
    NetworkModel full(c), quiet(c, without_interference({}));
    const double a = sinr_coverage(full, association_probabilities(full), 1.0, 0.5).total;
    const double b = sinr_coverage(quiet, association_probabilities(quiet), 1.0, 0.5).total;
    report(6, std::abs(a - b) < 0.01, fmt("P_SINR %.6f with interference, %.6f without", a, b));
}

// 7: closed forms.
void criterion7()
{
    double worst_cf = 0;
    for (auto kind : {ClusterKind::thomas, ClusterKind::matern}) {
        auto c = with_kind(kind, kind == ClusterKind::thomas ? 10.0 : 20.0);
        const auto law = law_R0(c).combined;
        // the regime where the closed form is exact
        auto los = c;
        los.env_c = 1e-9;
        los.path_loss[cluster_slot].los.alpha = 2.0;
        los.nakagami_los = 1;
        NetworkModel m(los, without_interference({}));
        const double unit = uplink_closed_form_constant(1.0, los);
        for (int i = 0; i < 10; ++i) {
            const double cc = 1e-6 * std::pow(10.0, 0.5 * i);
            QuadOptions o{1e-12, 1e-16};
            o.scale = c.cluster.kind == ClusterKind::thomas ? 10.0 : 20.0;
            std::vector<double> pts{law.lo};
            if (std::isfinite(law.hi)) pts.push_back(law.hi);
            else pts.push_back(inf);
            const double quad = integrate_value([&](double r) { return std::exp(-cc * r * r) * law.pdf(r); }, pts, o);
            worst_cf = std::max(worst_cf, std::abs(quad - uplink_closed_form_at(cc, c)));
            const double general = uplink_sinr_coverage(m, make_uplink_context(m, 1.0, cc / unit));
            worst_cf = std::max(worst_cf, std::abs(general - uplink_closed_form_at(cc, los)));
        }
    }
    NetworkConfig c;
    MultiTierSet one{{{c.uav_density, c.uav_power, c.uav_bias, c.uav_height}}, 0};
    NetworkModel m(c);
    const auto a1 = association_probabilities(m);
    const auto a2 = multi_tier_association(c, one);
    const auto r1 = successful_transmission(m, a1, gamma_e, 1.0, 1.0, 0.5);
    const auto r2 = multi_tier_stp(c, one, gamma_e, 1.0, 1.0, 0.5);
    double worst_mt = std::max({std::abs(r1.stp.total - r2.stp.total), std::abs(r1.energy.total - r2.energy.total),
                                std::abs(r1.sinr.total - r2.sinr.total)});
    for (std::size_t j = 0; j < 3; ++j)
        for (auto s : link_states) worst_mt = std::max(worst_mt, std::abs(a1(j, s) - a2(j, s)));
    report(7, worst_cf <= 1e-6 && worst_mt <= 1e-9,
           fmt("closed form within %.2e over 10 C' values per kind; one-tier reduction within %.2e", worst_cf, worst_mt));
}

// 8: tau optimisation.
void criterion8()
{
    NetworkConfig c;
    NetworkModel m(c);
    const auto a = association_probabilities(m);
    const double rho = 0.5, gul = db_to_linear(-20.0), gs = 1.0;
    const double ps = sinr_coverage(m, a, gs, rho).total;
    const double cap = c.bandwidth * std::log2(1.0 + gul) * ps;
    const double r_min = 0.1 * cap;
    const auto opt = optimize_tau(m, a, rho, gul, gs, r_min);
    const int n = 200;
    const double lo = opt.tau_min, hi = c.frame, step = (hi - lo) / (n - 1);
    std::vector<double> rate(n);
    std::size_t arg = 0;
    for (int i = 0; i < n; ++i) {
        rate[i] = average_uplink_throughput(m, a, i + 1 == n ? hi : lo + i * step, rho, gul, ps, r_min).rate_ul;
        if (rate[i] > rate[arg]) arg = i;
    }
    const double brute = lo + arg * step;
    const bool matches = opt.feasible && std::abs(opt.best.tau - brute) <= step && opt.best.rate_ul >= rate[arg] * (1 - 1e-9);
    // one rise then one fall, with the peak strictly inside
    int turns = 0;
    for (int i = 2; i < n; ++i)
        if ((rate[i] - rate[i - 1] < 0) != (rate[i - 1] - rate[i - 2] < 0)) ++turns;
    const bool shape = arg > 0 && arg + 1 < static_cast<std::size_t>(n) && turns == 1 && rate.back() == 0.0;
    const auto below = optimize_tau(m, a, rho, gul, gs, cap * c.frame * (1 - 1e-9), 8);
    const auto above = optimize_tau(m, a, rho, gul, gs, cap * c.frame * (1 + 1e-9), 8);
    const bool infeasible_rule = below.feasible && !above.feasible && !above.binding.empty() && above.tau_min > c.frame;
    report(8, matches && shape && infeasible_rule,
           fmt("tau*=%.5f vs scan %.5f (step %.5f), rate %.4g bit/s", opt.best.tau, brute, step, opt.best.rate_ul) +
               (shape ? ", single interior peak" : ", shape broken") +
               (infeasible_rule ? ", infeasible exactly past the frame" : ", infeasibility rule broken"));
}

// 9: reproducibility.
void criterion9()
{
    NetworkConfig c;
    AnalysisSettings s1, s4;
    s1.threads = 1;
    s4.threads = 4;
    McDownlinkRequest req;
    req.gamma_e = gamma_e;
    req.gamma_sinr = 1.0;
    req.laplace_args = {1e6, 1e7};
    req.ccdf_args = {1e-7};
    req.trials = 5000;
    const auto a = simulate_downlink(c, s1, req), b = simulate_downlink(c, s1, req), d = simulate_downlink(c, s4, req);
    auto same = [](const TrialEstimate& x, const TrialEstimate& y) {
        return x.value == y.value && x.half_width == y.half_width;
    };
    bool ok = true;
    for (const auto* r : {&b, &d}) {
        ok = ok && same(a.energy, r->energy) && same(a.sinr, r->sinr) && same(a.stp, r->stp) &&
             same(a.mean_interference, r->mean_interference);
        for (std::size_t i = 0; i < 2; ++i) ok = ok && same(a.laplace[i], r->laplace[i]);
        ok = ok && same(a.ccdf[0], r->ccdf[0]);
        for (std::size_t j = 0; j < 3; ++j)
            for (int s = 0; s < 2; ++s) ok = ok && same(a.association[j][s], r->association[j][s]);
    }
    McUplinkRequest ur;
    ur.gamma_ul = 0.01;
    ur.trials = 5000;
    const auto u1 = simulate_uplink(c, s1, ur), u2 = simulate_uplink(c, s1, ur), u4 = simulate_uplink(c, s4, ur);
    ok = ok && same(u1.coverage, u2.coverage) && same(u1.coverage, u4.coverage) && same(u1.p_active, u4.p_active) &&
         same(u1.mean_interference, u4.mean_interference);
    report(9, ok, ok ? "downlink and uplink estimates identical across runs and 1/4 workers" : "estimates differ");
}

}  // namespace

int main()
{
    const std::vector<void (*)()> all{criterion1, criterion2, criterion3, criterion4, criterion5,
                                      criterion6, criterion7, criterion8, criterion9};
    for (std::size_t i = 0; i < all.size(); ++i) {
        try {
            all[i]();
        } catch (const std::exception& e) {
            report(static_cast<int>(i + 1), false, std::string("threw: ") + e.what());
        }
    }
    std::printf("%d criteria failed\n", failures);
    return failures ? 1 : 0;
}
