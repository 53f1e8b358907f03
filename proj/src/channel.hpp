#pragma once

#include <functional>

#include "rng.hpp"
#include "scenario.hpp"

namespace scf {

enum class LinkClass { v2i, v2v };

// Composite fading: the squared channel gain follows a Fisher-Snedecor F
// distribution with fading shape m, shadowing shape m_s and mean mean_gain
// (linear units).
struct FadingParams {
  double m = 6.0;
  double m_s = 6.0;
  double mean_gain = 1.0;
};

// Per-link-class radio constants.
struct LinkParams {
  double bandwidth_hz = 1e6;
  double snr_threshold = 1.0;  // linear decoding threshold
  double pathloss_exp = 2.0;   // a
  double ref_loss = 1.0;       // b: pathloss factor at unit distance
  double antenna_gain = 1.0;   // A
  double range_m = 0.0;        // r: beyond this the link cannot exist
};

struct ChannelParams {
  double noise_w = 1e-8;  // total noise power over the link bandwidth
  FadingParams fading;
  LinkParams v2i, v2v;
};

void validate(const ChannelParams& p);

const LinkParams& link_params(const ChannelParams& p, LinkClass c);

// density of the squared-gain distribution at g (g >= 0)
double fading_pdf(double g, double m, double m_s, double mean_gain);

// n-th moment of the squared gain; n may be fractional or negative as long
// as m + n > 0 and m_s - n > 0
double fading_moment(double n, double m, double m_s, double mean_gain);

// E[1/g], the inverse-gain mean that scales every average-power expression
double m_constant(const FadingParams& f);

// Shannon rate at the decoding threshold: B * log2(1 + snr)
double link_rate(double bandwidth_hz, double snr_threshold_linear);

// Average transmit power needed to present the threshold SNR at distance d.
// Strict: d > range errors (no link exists there).
double avg_power(const ChannelParams& p, LinkClass cls, double distance_m);

// Same quantity but total: zero beyond range.  Used by the schedule-energy
// evaluation and the replay engine, where out-of-range means "not
// transmitting" rather than "caller bug".
double avg_power_or_zero(const ChannelParams& p, LinkClass cls, double distance_m);

// One squared-gain draw, built as a scaled ratio of two gamma variates.
double sample_fading(Rng& rng, double m, double m_s, double mean_gain);

// Closed-form energy of a vehicle-to-infrastructure transmission over
// [t_s, t_e], with the vehicle moving at constant speed relative to its
// serving unit.  The window must stay inside [0, dwell].
double energy_v2i_closed(const ChannelParams& p, const VehicleState& v, double t_s,
                         double t_e);

// Closed-form energy of a relay-to-target transmission over [t_s, t_e]; the
// window must lie inside the pair's in-range period.
double energy_v2v_closed(const ChannelParams& p, const RelayTiming& relay, double t_s,
                         double t_e);

// Adaptive-quadrature energy for an arbitrary distance profile; the
// verification oracle for the two closed forms and the workhorse for
// non-constant-speed motion.
double energy_numeric(const ChannelParams& p, LinkClass cls,
                      const std::function<double(double)>& distance_at, double t_s,
                      double t_e, double rel_tol = 1e-10);

// internal-profile variants used by the strategy layer (same math, explicit
// motion constants, optional clamping to the valid domain)
double energy_v2i_profile(const ChannelParams& p, double offset_m, double speed_mps,
                          double t_s, double t_e);
double energy_v2v_profile(const ChannelParams& p, double encounter_s, double window_s,
                          double closing_speed_mps, double t_s, double t_e);

}  // namespace scf
