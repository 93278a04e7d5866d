#include <gtest/gtest.h>

#include <cmath>

#include "evfreq/errors.hpp"
#include "evfreq/time_of_day.hpp"

using namespace evfreq;

TEST(TimeOfDay, WrapsIntoOneDay) {
    EXPECT_DOUBLE_EQ(TimeOfDay::from_minutes(1500).minutes(), 60.0);
    EXPECT_DOUBLE_EQ(TimeOfDay::from_minutes(-60).minutes(), 1380.0);
    EXPECT_DOUBLE_EQ(TimeOfDay::from_minutes(1440).minutes(), 0.0);
    EXPECT_EQ(TimeOfDay::from_hm(20).to_string(), "20:00");
    EXPECT_THROW(TimeOfDay::from_minutes(std::nan("")), DomainError);
}

TEST(TimeOfDay, IntervalAcrossMidnight) {
    const DailyInterval night{TimeOfDay::from_hm(23), 7 * 60.0};
    EXPECT_TRUE(night.contains(TimeOfDay::from_hm(23)));
    EXPECT_TRUE(night.contains(TimeOfDay::from_hm(2)));
    EXPECT_FALSE(night.contains(TimeOfDay::from_hm(6)));  // half-open
    EXPECT_FALSE(night.contains(TimeOfDay::from_hm(12)));
    EXPECT_DOUBLE_EQ(night.elapsed(TimeOfDay::from_hm(1)), 120.0);
    EXPECT_EQ(night.end(), TimeOfDay::from_hm(6));
}
