#pragma once

#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "wransim/config.hpp"
#include "wransim/types.hpp"

namespace wransim {

enum class ListKind { Operating, Backup, Protected, Candidate, Disallowed, Untracked };
const char* to_string(ListKind k);

struct ChannelLists {
  std::set<ChannelId> ocl;  // operating
  std::set<ChannelId> bcl;  // backup, switch-ready
  std::set<ChannelId> pcl;  // protected, incumbent suspected
  std::set<ChannelId> ccl;  // candidate, under observation
  std::set<ChannelId> dcl;  // disallowed by the regulator, static

  ListKind kind_of(ChannelId ch) const;
};

struct PromotionTimer {
  double idle_since = 0.0;   // start of the current uninterrupted idle span
  double last_sensed = 0.0;  // most recent idle sensing
};

struct SwitchEvent {
  CellId cell = 0;
  ChannelId from = 0;  // 0 when resuming onto a channel without vacating one
  ChannelId to = 0;    // 0 when no backup was available (outage)
  double started = 0.0;
  double deadline = 0.0;
};

struct ListTransition {
  double time = 0.0;
  CellId cell = 0;
  ChannelId ch = 0;
  ListKind from = ListKind::Untracked;
  ListKind to = ListKind::Untracked;
  bool initial = false;  // seeding at scenario start
};

struct NotOperating : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NotTracked : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct MgmtTimings {
  double promotion_idle = 30.0;
  double max_sense_gap = 6.0;
  double channel_move_time = 2.0;
};

// Per-cell list keeper. Transitions follow the fixed edge set
//   operating -> protected        (busy verdict, adjacent protection)
//   protected -> candidate        (sensed idle out of band)
//   candidate -> backup           (30 s continuous idle, gaps <= 6 s)
//   candidate/backup -> protected (sensed busy out of band)
//   backup -> operating           (switch)
// plus untracked -> protected for adjacent channels never listed before.
class CellChannelManager {
 public:
  CellChannelManager(CellId cell, int num_channels, std::set<ChannelId> disallowed,
                     MgmtTimings timings);

  // Scenario start seeding; records transitions flagged `initial`.
  void seed_operating(ChannelId ch);
  void seed_backup(ChannelId ch);
  void seed_protected(ChannelId ch, double now = 0.0);

  // In-band busy verdict on an operating channel: the channel and its
  // in-band adjacents become protected (adjacents in other lists stay put),
  // and the head backup, if any, is taken for a switch. Throws NotOperating.
  std::optional<SwitchEvent> on_busy_verdict(ChannelId busy_ch, double now);

  // Out-of-band sensing result for a protected, candidate, or backup
  // channel. Throws NotTracked otherwise.
  void obs_update(ChannelId ch, bool sensed_idle, double now);

  // Takes the head backup for operation when the cell runs below target.
  std::optional<SwitchEvent> resume_operating(double now);
  // Switch completion: the reserved channel starts operating.
  void complete_switch(ChannelId ch, double now);

  // Channels whose backup role now collides with a neighbor's operation
  // are re-protected until observation clears them again.
  void demote_backup(ChannelId ch, double now);
  // Vacates an operating channel without protecting it as busy-adjacent
  // (coexistence conflict resolution); returns the follow-up switch.
  std::optional<SwitchEvent> vacate_operating(ChannelId ch, double now);

  // Promotion gate, refreshed from neighbor snapshots each management
  // cycle; a candidate only becomes backup when the gate passes.
  void set_promotion_gate(std::function<bool(ChannelId)> gate);

  const ChannelLists& lists() const { return lists_; }
  const std::deque<ChannelId>& backup_order() const { return bcl_order_; }
  int pending_switches() const { return pending_; }
  void note_switch_completion() { --pending_; }
  long outages() const { return outages_; }

  std::vector<ListTransition>& transitions() { return transitions_; }

 private:
  void move(ChannelId ch, ListKind to, double now, bool initial = false);
  std::optional<SwitchEvent> take_backup(ChannelId from, double now);

  CellId cell_;
  int num_channels_;
  MgmtTimings timings_;
  ChannelLists lists_;
  std::deque<ChannelId> bcl_order_;  // promotion order, head switches first
  std::map<ChannelId, PromotionTimer> timers_;
  std::function<bool(ChannelId)> gate_;
  std::vector<ListTransition> transitions_;
  int pending_ = 0;
  long outages_ = 0;
};

struct LocalPrioritySets {
  std::set<ChannelId> first;     // own backup/candidate channels no other cell lists
  std::set<ChannelId> second;    // own backup/candidate channels no neighbor operates
  std::set<ChannelId> third;     // channels operated by neighbors
  std::set<ChannelId> selected;  // first non-empty of the above
};

// Priority sets for acquiring channels, from this cell's lists and the
// neighbor snapshots taken at the previous management cycle.
LocalPrioritySets compute_lps(const ChannelLists& own,
                              const std::vector<const ChannelLists*>& neighbors);

struct ListViolation {
  CellId cell = 0;
  CellId other = -1;  // involved neighbor, -1 for single-cell violations
  std::string what;
};

// Structural audit: per-cell list disjointness, operating/disallowed
// overlap, and operating/backup collisions with neighbor operations.
std::vector<ListViolation> validate_lists(const std::vector<ChannelLists>& cells,
                                          const std::vector<std::vector<CellId>>& neighbors);

}  // namespace wransim
