#include <gtest/gtest.h>

#include <random>

#include "evfreq/errors.hpp"
#include "evfreq/response_controller.hpp"

using namespace evfreq;

namespace {

ControllerConfig cfg(ControlMode mode, double participation) {
    ControllerConfig c;
    c.mode = mode;
    c.participation = participation;
    return c;
}

const EventLatch kFired = EventLatch::fired_at(0.8);

}  // namespace

TEST(DetectEvent, ThresholdAndLatch) {
    const ControllerConfig c;
    const auto quiet = detect_event(60.0, c, EventLatch{}, 0.5);
    EXPECT_FALSE(quiet.triggered);
    EXPECT_FALSE(quiet.trigger_time_s);

    const auto fired = detect_event(59.69, c, EventLatch{}, 0.8);
    ASSERT_TRUE(fired.triggered);
    EXPECT_DOUBLE_EQ(*fired.trigger_time_s, 0.8);

    const auto held = detect_event(60.1, c, fired, 5.0);
    EXPECT_TRUE(held.triggered);
    EXPECT_DOUBLE_EQ(*held.trigger_time_s, 0.8);

    // Exactly at threshold is not below it.
    EXPECT_FALSE(detect_event(59.7, c, EventLatch{}, 1.0).triggered);
}

TEST(DetectEvent, IdempotentOnceTriggered) {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> f(59.0, 61.0);
    const ControllerConfig c;
    EventLatch latch = kFired;
    for (int i = 0; i < 100; ++i) {
        latch = detect_event(f(rng), c, latch, i);
        EXPECT_TRUE(latch.triggered);
        EXPECT_DOUBLE_EQ(*latch.trigger_time_s, 0.8);
    }
}

TEST(DetectEvent, NonLatchingReleases) {
    ControllerConfig c;
    c.latch = false;
    auto l = detect_event(59.6, c, EventLatch{}, 1.0);
    EXPECT_TRUE(l.triggered);
    l = detect_event(59.65, c, l, 1.5);
    EXPECT_DOUBLE_EQ(*l.trigger_time_s, 1.0);
    l = detect_event(59.8, c, l, 2.0);
    EXPECT_FALSE(l.triggered);
    EXPECT_FALSE(l.trigger_time_s);
}

TEST(ControllerConfig, Validation) {
    EXPECT_THROW(cfg(ControlMode::V1G, 1.2).validate(60.0), DomainError);
    EXPECT_THROW(cfg(ControlMode::V1G, -0.1).validate(60.0), DomainError);
    ControllerConfig c;
    c.threshold_hz = 60.0;
    EXPECT_THROW(c.validate(60.0), DomainError);
    EXPECT_NO_THROW(ControllerConfig{}.validate(60.0));
    EXPECT_THROW(parse_mode("v3g"), DomainError);
}

TEST(EvCommand, Examples) {
    const FleetConfig fleet;
    const FleetState evening = fleet_state_at(TimeOfDay::from_hm(20), fleet);

    EXPECT_EQ(ev_power_command(kFired, cfg(ControlMode::V2G, 0.0), evening, fleet), 0.0);
    EXPECT_EQ(ev_power_command(EventLatch{}, cfg(ControlMode::V2G, 1.0), evening, fleet), 0.0);
    EXPECT_DOUBLE_EQ(ev_power_command(kFired, cfg(ControlMode::V1G, 1.0), evening, fleet), 1500.0);
    EXPECT_DOUBLE_EQ(ev_power_command(kFired, cfg(ControlMode::V2G, 1.0), evening, fleet), 3000.0);

    ControllerConfig no_shed = cfg(ControlMode::V2G, 1.0);
    no_shed.v2g_includes_shed = false;
    EXPECT_DOUBLE_EQ(ev_power_command(kFired, no_shed, evening, fleet), 1500.0);
}

TEST(EvCommand, DelayedFleetAtEveningInjectsOnlyAboveReserve) {
    FleetConfig fleet;
    fleet.strategy = ChargingStrategy::Delayed;
    // Plugged, not charging, SoC 0.2 on arrival.
    const FleetState s = fleet_state_at(TimeOfDay::from_hm(20), fleet);
    EXPECT_EQ(s.plugged_count, 15000);
    EXPECT_EQ(s.charging_kw_per_vehicle, 0.0);
    EXPECT_DOUBLE_EQ(s.mean_soc, 0.2);

    // Default reserve 0.3 blocks injection at SoC 0.2.
    EXPECT_EQ(ev_power_command(kFired, cfg(ControlMode::V2G, 1.0), s, fleet), 0.0);

    fleet.vehicle.soc_reserve = 0.1;
    EXPECT_DOUBLE_EQ(ev_power_command(kFired, cfg(ControlMode::V2G, 1.0), s, fleet), 1500.0);
    EXPECT_EQ(ev_power_command(kFired, cfg(ControlMode::V1G, 1.0), s, fleet), 0.0);
}

TEST(EvCommand, ModeDominanceMonotonicityAndGuard) {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 500; ++trial) {
        FleetConfig fleet;
        fleet.vehicle.soc_reserve = 0.3;
        FleetState s;
        s.plugged_count = static_cast<std::int64_t>(u(rng) * 20000);
        s.charging_kw_per_vehicle = s.plugged_count > 0 ? 100.0 * u(rng) : 0.0;
        s.mean_soc = u(rng);
        const double a = u(rng);
        const double b = a + (1.0 - a) * u(rng);

        const double v1 = ev_power_command(kFired, cfg(ControlMode::V1G, a), s, fleet);
        const double v2 = ev_power_command(kFired, cfg(ControlMode::V2G, a), s, fleet);
        EXPECT_GE(v2, v1);
        const bool blocked = s.mean_soc <= fleet.vehicle.soc_reserve || s.plugged_count == 0 || a == 0.0;
        if (!blocked) {
            EXPECT_GT(v2, v1);
        } else {
            EXPECT_DOUBLE_EQ(v2, v1);
        }
        // Never sheds more than is being drawn.
        EXPECT_LE(v1, s.plugged_count * s.charging_kw_per_vehicle / 1000.0 + 1e-9);
        for (auto mode : kAllModes) {
            EXPECT_LE(ev_power_command(kFired, cfg(mode, a), s, fleet),
                      ev_power_command(kFired, cfg(mode, b), s, fleet) + 1e-12);
            FleetState doubled = s;
            doubled.plugged_count *= 2;
            EXPECT_NEAR(ev_power_command(kFired, cfg(mode, a), doubled, fleet),
                        2.0 * ev_power_command(kFired, cfg(mode, a), s, fleet), 1e-9);
        }
    }
}

TEST(SocRate, Examples) {
    const FleetConfig fleet;
    FleetState idle = fleet_state_at(TimeOfDay::from_hm(5), fleet);
    EXPECT_EQ(soc_rate_under_command(0.0, idle, fleet), 0.0);

    const FleetState evening = fleet_state_at(TimeOfDay::from_hm(20), fleet);
    const double v2g = ev_power_command(kFired, cfg(ControlMode::V2G, 1.0), evening, fleet);
    EXPECT_NEAR(soc_rate_under_command(v2g, evening, fleet), -100.0 / (875.0 * 3600.0), 1e-15);
    EXPECT_NEAR(soc_rate_under_command(v2g, evening, fleet), -3.175e-5, 5e-9);

    const double v1g = ev_power_command(kFired, cfg(ControlMode::V1G, 1.0), evening, fleet);
    EXPECT_EQ(soc_rate_under_command(v1g, evening, fleet), 0.0);

    // No response: the fleet keeps charging.
    EXPECT_NEAR(soc_rate_under_command(0.0, evening, fleet), 100.0 / (875.0 * 3600.0), 1e-15);

    FleetState away = fleet_state_at(TimeOfDay::from_hm(12), fleet);
    EXPECT_EQ(soc_rate_under_command(0.0, away, fleet), 0.0);
}
