#include "helpers.hpp"

#include "mocsim/errors.hpp"
#include "mocsim/links.hpp"
#include "mocsim/switcher.hpp"

#include <doctest.h>

#include <functional>
#include <limits>
#include <random>

using namespace mocsim;

namespace {

AlignedTraces integer_set(std::mt19937_64& rng, std::size_t providers, std::size_t ticks)
{
    std::uniform_int_distribution<int> rtt(10, 300);
    std::uniform_real_distribution<double> u(0, 1);
    std::vector<LinkTrace> traces;
    for (std::size_t p = 0; p < providers; ++p) {
        std::vector<std::optional<double>> v;
        for (std::size_t k = 0; k < ticks; ++k) {
            if (u(rng) < 0.05) {
                v.push_back(std::nullopt);
            } else {
                v.push_back(static_cast<double>(rtt(rng)));
            }
        }
        traces.push_back(testutil::trace(std::string(1, static_cast<char>('A' + p)), v));
    }
    return align(traces, 3000);
}

// Brute force over every provider assignment to every window.
double exhaustive_best(const AlignedTraces& at, std::int64_t window_ms)
{
    std::vector<std::int64_t> starts;
    for (std::int64_t t : at.timeline) {
        const std::int64_t s = at.timeline.front() + (t - at.timeline.front()) / window_ms * window_ms;
        if (starts.empty() || starts.back() != s) starts.push_back(s);
    }
    const std::size_t np = at.provider_count();
    std::vector<std::size_t> pick(starts.size(), 0);
    double best = std::numeric_limits<double>::infinity();
    std::function<void(std::size_t)> rec = [&](std::size_t w) {
        if (w == starts.size()) {
            Schedule s;
            s.span_start_ms = at.timeline.front();
            s.span_end_ms = at.timeline.back();
            for (std::size_t i = 0; i < starts.size(); ++i) {
                if (s.segments.empty() || s.segments.back().provider_id != at.provider_ids[pick[i]]) {
                    s.segments.push_back({starts[i], at.provider_ids[pick[i]]});
                }
            }
            best = std::min(best, mean_effective_rtt(apply_schedule(s, at)));
            return;
        }
        for (std::size_t p = 0; p < np; ++p) {
            pick[w] = p;
            rec(w + 1);
        }
    };
    rec(0);
    return best;
}

} // namespace

TEST_CASE("policy names and validation")
{
    CHECK(policy_name(policy::Single{"NP1"}) == "single:NP1");
    CHECK(policy_name(policy::WindowedDsm{10, 3, {}}) == "windowed:10");
    CHECK(policy_name(policy::Oracle{2.5}) == "oracle:2.5");
    CHECK_THROWS_AS(validate(Policy{policy::WindowedDsm{1, 3, {}}}), ContractViolation);
    CHECK_THROWS_AS(validate(Policy{policy::Oracle{0}}), ContractViolation);
    CHECK_THROWS_AS(validate(Policy{policy::Single{""}}), ContractViolation);
}

TEST_CASE("rtt cost caps at the availability bound")
{
    Thresholds th;
    CHECK(rtt_cost(testutil::sample(0, "A", 42.0), th) == 42.0);
    CHECK(rtt_cost(testutil::sample(0, "A", std::nullopt), th) == 10000.0);
    CHECK(rtt_cost(testutil::sample(0, "A", 25000.0), th) == 10000.0);
}

TEST_CASE("windowed policy acts on the previous window")
{
    // 10 s windows over 3 s ticks: ticks 0,3,6,9 | 12,15,18 | 21,24,27
    auto a = testutil::trace("A", {50, 50, 50, 50, 300, 300, 300, 300, 300, 300});
    auto b = testutil::trace("B", {100, 100, 100, 100, 100, 100, 100, 20, 20, 20});
    const auto at = align({a, b}, 3000);
    const auto s = windowed_decide(at, 10, "A");
    // window 1 favours A (stay), window 2 favours B -> switch at window 3
    REQUIRE(s.segments.size() == 2);
    CHECK(s.segments[1] == Segment{20000, "B"});
    CHECK(s.switch_count() == 1);
    CHECK(s.provider_at(19999) == "A");
    CHECK(s.provider_at(20000) == "B");
}

TEST_CASE("windowed ties keep the current provider")
{
    auto a = testutil::trace("A", {50, 50, 50, 50, 50, 50});
    auto b = testutil::trace("B", {50, 50, 50, 50, 50, 50});
    const auto at = align({a, b}, 3000);
    CHECK(windowed_decide(at, 6, "B").switch_count() == 0);
    CHECK(oracle_schedule(at, 6).segments.front().provider_id == "A");
}

TEST_CASE("windowed policy skips gaps and timeouts count as the bound")
{
    LinkTrace a = testutil::trace("A", {std::nullopt, std::nullopt, std::nullopt, std::nullopt, 50, 50});
    LinkTrace b = testutil::trace("B", {9000, 9000, 9000, 9000, 50, 50});
    const auto at = align({a, b}, 3000);
    const auto s = windowed_decide(at, 12, "A");
    CHECK(s.segments.back().provider_id == "B");
}

TEST_CASE("oracle matches exhaustive search")
{
    std::mt19937_64 rng(5);
    for (int iter = 0; iter < 40; ++iter) {
        const std::size_t np = 2 + iter % 2;
        // 8 windows of 2 ticks each
        const auto at = integer_set(rng, np, 16);
        const auto oracle = apply_schedule(oracle_schedule(at, 6), at);
        CHECK(mean_effective_rtt(oracle) == exhaustive_best(at, 6000));
    }
}

TEST_CASE("oracle dominates windowed schedules")
{
    std::mt19937_64 rng(9);
    for (int iter = 0; iter < 20; ++iter) {
        const auto at = integer_set(rng, 3, 200);
        const double o = mean_effective_rtt(apply_schedule(oracle_schedule(at, 10), at));
        for (double w : {10.0, 20.0, 30.0, 40.0, 50.0, 60.0}) {
            CHECK(o <= mean_effective_rtt(apply_schedule(windowed_decide(at, w, "A"), at)));
        }
    }
}

TEST_CASE("switch delay walk")
{
    auto a = testutil::trace("A", {10, 20, 30, 40, 50});
    auto b = testutil::trace("B", {1, 2, 3, 4, 5});
    const auto at = align({a, b}, 3000);
    Schedule s;
    s.span_start_ms = 0;
    s.span_end_ms = 12000;
    s.segments = {{0, "A"}, {6000, "B"}};

    auto rtts = [](const LinkTrace& tr) {
        std::vector<double> v;
        for (const auto& x : tr.samples) v.push_back(x.rtt.ms_or(-1));
        return v;
    };
    CHECK(rtts(apply_schedule(s, at)) == std::vector<double>{10, 20, 3, 4, 5});
    ApplyOptions mbb{3000, SwitchMode::MakeBeforeBreak, {}, {}};
    CHECK(rtts(apply_schedule(s, at, mbb)) == std::vector<double>{10, 20, 30, 4, 5});
    ApplyOptions strict{4000, SwitchMode::StrictOutage, {}, {}};
    CHECK(rtts(apply_schedule(s, at, strict)) == std::vector<double>{10, 20, -1, -1, 5});
    CHECK(apply_schedule(s, at).provider_id == "A+B");
}

TEST_CASE("make-before-break can gain from a delay when the old link was better")
{
    // Not a bug: the delay keeps traffic on A exactly while B is congested.
    auto a = testutil::trace("A", {50, 50, 50, 50});
    auto b = testutil::trace("B", {10, 10, 200, 10});
    const auto at = align({a, b}, 3000);
    Schedule s;
    s.span_start_ms = 0;
    s.span_end_ms = 9000;
    s.segments = {{0, "A"}, {6000, "B"}};
    const double d0 = mean_effective_rtt(apply_schedule(s, at));
    const double d3 = mean_effective_rtt(apply_schedule(s, at, {3000, SwitchMode::MakeBeforeBreak, {}, {}}));
    CHECK(d3 < d0);
}

TEST_CASE("gaps in the active provider become timeouts")
{
    auto a = testutil::trace("A", {10, 10, 10, 10, 10, 10});
    a.samples.erase(a.samples.begin() + 2, a.samples.begin() + 5);
    auto b = testutil::trace("B", {1, 1, 1, 1, 1, 1});
    const auto at = align({a, b}, 3000, 0);
    const auto eff = apply_schedule(single_schedule(at, "A"), at);
    CHECK(eff.samples[3].rtt.is_timeout());
    CHECK(eff.samples[3].t_ms == 9000);
}

TEST_CASE("improvement")
{
    auto base = testutil::trace("A", {100, 100});
    auto eff = testutil::trace("X", {50, 50});
    CHECK(improvement(eff, base) == doctest::Approx(50));
    CHECK_THROWS_AS(improvement(testutil::trace("X", {50}), base), ContractViolation);
    CHECK_THROWS_AS(improvement(eff, testutil::trace("Z", {0, 0})), DomainError);
}

TEST_CASE("reactive table shape")
{
    std::mt19937_64 rng(1);
    const auto at = integer_set(rng, 2, 400);
    ReactiveOptions opts;
    const auto t = reactive_table(at, opts);
    REQUIRE(t.rows.size() == 7);
    CHECK(t.baselines == std::vector<std::string>{"A", "B"});
    CHECK_FALSE(t.rows.back().window_s.has_value());
    for (std::size_t i = 0; i < 6; ++i) {
        CHECK(*t.rows[i].window_s == opts.windows_s[i]);
        for (std::size_t b = 0; b < 2; ++b) CHECK(t.rows.back().improvement[b] >= t.rows[i].improvement[b]);
    }
}

TEST_CASE("hindsight delayed by one window is the reactive rule")
{
    // Without gaps, applying the oracle's picks one window late (make-before-break
    // with delay equal to the window) reproduces the windowed schedule's trace.
    std::mt19937_64 rng(21);
    for (int iter = 0; iter < 20; ++iter) {
        std::vector<LinkTrace> traces;
        std::uniform_int_distribution<int> rtt(10, 300);
        for (const char* id : {"A", "B", "C"}) {
            std::vector<std::optional<double>> v;
            for (int k = 0; k < 120; ++k) v.push_back(static_cast<double>(rtt(rng)));
            traces.push_back(testutil::trace(id, v));
        }
        const auto at = align(traces, 3000);
        const auto oracle = oracle_schedule(at, 12);
        const auto windowed = windowed_decide(at, 12, oracle.segments.front().provider_id);
        const auto delayed = apply_schedule(oracle, at, {12000, SwitchMode::MakeBeforeBreak, {}, std::string("x")});
        const auto reactive = apply_schedule(windowed, at, {0, SwitchMode::MakeBeforeBreak, {}, std::string("x")});
        CHECK(delayed == reactive);
    }
}
