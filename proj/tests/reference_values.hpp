#pragma once

// Frozen expected values for the default configuration (delta = 4, K = 3).
// Computed once with an independent high-precision script (mpmath, 50 digits):
// pulse-1 tangency events found by sign-bisection on the connection count of
// the first-hit helix against the unfolding graph, each polished by a
// high-precision Newton iteration on (gap, gap_slope).  Do not edit by hand.

namespace refv {

// pulse-1 tangency parameters, descending, window lambda in [1e-4, 0.5]
inline constexpr double kPulse1Lambda[] = {
    0.197247171307,    //  1st
    0.0690687582523,   //  2nd
    0.024239845037,    //  3rd
    0.00850620762224,  //  4th
    0.00298499725609,  //  5th
    0.00104749465369,  //  6th
    0.000367586622012, //  7th
    0.000128993426516, //  8th
};
inline constexpr int kPulse1Count = 8;

// contact point on Out(w) (lift coordinate and height) per event
inline constexpr double kPulse1X[] = {
    4.706193594, 7.854248561, 10.99556275, 14.13716744,
    17.27875957, 20.42035225, 23.5619449,  26.70353756,
};
inline constexpr double kPulse1Y[] = {
    0.0012220145, 1.8436285e-5, 2.7964155e-7, 4.240617e-9,
    6.4307372e-11, 9.7519683e-13, 1.4788489e-14, 2.2426182e-16,
};

// sign of the graph slope at the contact (alternating flank)
inline constexpr int kPulse1Flank[] = {-1, 1, -1, 1, -1, 1, -1, 1};

// next event just above the window: none may be reported below it
inline constexpr double kPulse1LambdaAbove = 0.537176559424;

// relative tolerance for matching the frozen event parameters
inline constexpr double kPulse1Tol = 1e-6;

}  // namespace refv
