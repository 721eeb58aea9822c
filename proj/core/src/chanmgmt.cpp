#include "wransim/chanmgmt.hpp"

#include <algorithm>
#include <fmt/format.h>

namespace wransim {

namespace {
constexpr double kTimeEps = 1e-9;
}

const char* to_string(ListKind k) {
  switch (k) {
    case ListKind::Operating: return "operating";
    case ListKind::Backup: return "backup";
    case ListKind::Protected: return "protected";
    case ListKind::Candidate: return "candidate";
    case ListKind::Disallowed: return "disallowed";
    case ListKind::Untracked: return "untracked";
  }
  return "?";
}

ListKind ChannelLists::kind_of(ChannelId ch) const {
  if (ocl.contains(ch)) return ListKind::Operating;
  if (bcl.contains(ch)) return ListKind::Backup;
  if (pcl.contains(ch)) return ListKind::Protected;
  if (ccl.contains(ch)) return ListKind::Candidate;
  if (dcl.contains(ch)) return ListKind::Disallowed;
  return ListKind::Untracked;
}

CellChannelManager::CellChannelManager(CellId cell, int num_channels,
                                       std::set<ChannelId> disallowed, MgmtTimings timings)
    : cell_(cell), num_channels_(num_channels), timings_(timings) {
  lists_.dcl = std::move(disallowed);
}

void CellChannelManager::move(ChannelId ch, ListKind to, double now, bool initial) {
  const ListKind from = lists_.kind_of(ch);
  if (from == to) return;
  switch (from) {
    case ListKind::Operating: lists_.ocl.erase(ch); break;
    case ListKind::Backup:
      lists_.bcl.erase(ch);
      std::erase(bcl_order_, ch);
      break;
    case ListKind::Protected: lists_.pcl.erase(ch); break;
    case ListKind::Candidate:
      lists_.ccl.erase(ch);
      timers_.erase(ch);
      break;
    case ListKind::Disallowed: lists_.dcl.erase(ch); break;
    case ListKind::Untracked: break;
  }
  switch (to) {
    case ListKind::Operating: lists_.ocl.insert(ch); break;
    case ListKind::Backup:
      lists_.bcl.insert(ch);
      bcl_order_.push_back(ch);
      break;
    case ListKind::Protected: lists_.pcl.insert(ch); break;
    case ListKind::Candidate:
      lists_.ccl.insert(ch);
      timers_[ch] = {now, now};
      break;
    case ListKind::Disallowed: lists_.dcl.insert(ch); break;
    case ListKind::Untracked: break;
  }
  transitions_.push_back({now, cell_, ch, from, to, initial});
}

void CellChannelManager::seed_operating(ChannelId ch) { move(ch, ListKind::Operating, 0.0, true); }
void CellChannelManager::seed_backup(ChannelId ch) { move(ch, ListKind::Backup, 0.0, true); }
void CellChannelManager::seed_protected(ChannelId ch, double now) {
  move(ch, ListKind::Protected, now, true);
}

std::optional<SwitchEvent> CellChannelManager::take_backup(ChannelId from, double now) {
  // Head of the promotion order that the coexistence gate allows.
  for (auto it = bcl_order_.begin(); it != bcl_order_.end(); ++it) {
    if (gate_ && !gate_(*it)) continue;
    const ChannelId to = *it;
    lists_.bcl.erase(to);
    bcl_order_.erase(it);
    // The channel is reserved while the radio retunes; it reappears in the
    // operating list when complete_switch() fires.
    ++pending_;
    return SwitchEvent{cell_, from, to, now, now + timings_.channel_move_time};
  }
  ++outages_;
  return std::nullopt;
}

std::optional<SwitchEvent> CellChannelManager::on_busy_verdict(ChannelId busy_ch, double now) {
  if (!lists_.ocl.contains(busy_ch))
    throw NotOperating(fmt::format("cell {}: busy verdict on channel {} which is not operating",
                                   cell_, busy_ch));
  for (ChannelId ch : {busy_ch - 1, busy_ch, busy_ch + 1}) {
    if (ch < 1 || ch > num_channels_) continue;
    // The struck channel and never-tracked in-band adjacents move under
    // protection; adjacents already managed in another list stay put.
    const ListKind kind = lists_.kind_of(ch);
    if (ch == busy_ch || kind == ListKind::Untracked)
      move(ch, ListKind::Protected, now);
  }
  return take_backup(busy_ch, now);
}

void CellChannelManager::obs_update(ChannelId ch, bool sensed_idle, double now) {
  const ListKind kind = lists_.kind_of(ch);
  switch (kind) {
    case ListKind::Protected:
      if (sensed_idle) move(ch, ListKind::Candidate, now);
      break;
    case ListKind::Candidate: {
      if (!sensed_idle) {
        move(ch, ListKind::Protected, now);
        break;
      }
      PromotionTimer& t = timers_[ch];
      if (now - t.last_sensed > timings_.max_sense_gap + kTimeEps)
        t.idle_since = now;  // the idle span was interrupted by silence
      t.last_sensed = now;
      if (now - t.idle_since >= timings_.promotion_idle - kTimeEps &&
          (!gate_ || gate_(ch)))
        move(ch, ListKind::Backup, now);
      break;
    }
    case ListKind::Backup:
      if (!sensed_idle) move(ch, ListKind::Protected, now);
      break;
    default:
      throw NotTracked(fmt::format(
          "cell {}: out-of-band update for channel {} in state '{}'", cell_, ch,
          to_string(kind)));
  }
}

std::optional<SwitchEvent> CellChannelManager::resume_operating(double now) {
  if (bcl_order_.empty()) return std::nullopt;
  for (ChannelId ch : bcl_order_) {
    if (gate_ && !gate_(ch)) continue;
    return take_backup(0, now);
  }
  return std::nullopt;
}

void CellChannelManager::complete_switch(ChannelId ch, double now) {
  // Logical backup -> operating edge; the reservation hid it from the lists
  // while the radio moved.
  const ListKind from = lists_.kind_of(ch);
  transitions_.push_back({now, cell_, ch, ListKind::Backup, ListKind::Operating, false});
  if (from != ListKind::Untracked) {
    // Defensive: the channel should not be anywhere while reserved.
    lists_.ocl.erase(ch);
    lists_.bcl.erase(ch);
    std::erase(bcl_order_, ch);
    lists_.pcl.erase(ch);
    lists_.ccl.erase(ch);
    timers_.erase(ch);
  }
  lists_.ocl.insert(ch);
}

void CellChannelManager::demote_backup(ChannelId ch, double now) {
  if (!lists_.bcl.contains(ch)) return;
  move(ch, ListKind::Protected, now);
}

std::optional<SwitchEvent> CellChannelManager::vacate_operating(ChannelId ch, double now) {
  if (!lists_.ocl.contains(ch))
    throw NotOperating(
        fmt::format("cell {}: vacate on channel {} which is not operating", cell_, ch));
  move(ch, ListKind::Protected, now);
  return take_backup(ch, now);
}

void CellChannelManager::set_promotion_gate(std::function<bool(ChannelId)> gate) {
  gate_ = std::move(gate);
}

LocalPrioritySets compute_lps(const ChannelLists& own,
                              const std::vector<const ChannelLists*>& neighbors) {
  LocalPrioritySets out;
  std::set<ChannelId> own_pool;
  own_pool.insert(own.bcl.begin(), own.bcl.end());
  own_pool.insert(own.ccl.begin(), own.ccl.end());

  std::set<ChannelId> others_pool;  // backup or candidate anywhere else
  std::set<ChannelId> others_op;    // operating anywhere else
  for (const ChannelLists* nb : neighbors) {
    others_pool.insert(nb->bcl.begin(), nb->bcl.end());
    others_pool.insert(nb->ccl.begin(), nb->ccl.end());
    others_op.insert(nb->ocl.begin(), nb->ocl.end());
  }

  for (ChannelId ch : own_pool) {
    if (!others_pool.contains(ch) && !others_op.contains(ch)) out.first.insert(ch);
    if (!others_op.contains(ch)) out.second.insert(ch);
  }
  out.third = others_op;

  if (!out.first.empty())
    out.selected = out.first;
  else if (!out.second.empty())
    out.selected = out.second;
  else
    out.selected = out.third;
  return out;
}

std::vector<ListViolation> validate_lists(const std::vector<ChannelLists>& cells,
                                          const std::vector<std::vector<CellId>>& neighbors) {
  std::vector<ListViolation> out;
  for (CellId j = 0; j < static_cast<CellId>(cells.size()); ++j) {
    const ChannelLists& l = cells[j];
    const std::pair<const char*, const std::set<ChannelId>*> named[] = {
        {"operating", &l.ocl}, {"backup", &l.bcl}, {"protected", &l.pcl},
        {"candidate", &l.ccl}, {"disallowed", &l.dcl}};
    for (size_t a = 0; a < std::size(named); ++a)
      for (size_t b = a + 1; b < std::size(named); ++b)
        for (ChannelId ch : *named[a].second)
          if (named[b].second->contains(ch))
            out.push_back({j, -1,
                           fmt::format("channel {} appears in both the {} and {} lists", ch,
                                       named[a].first, named[b].first)});
  }
  for (CellId j = 0; j < static_cast<CellId>(cells.size()); ++j) {
    if (j >= static_cast<CellId>(neighbors.size())) break;
    for (CellId l : neighbors[j]) {
      if (l <= j) continue;  // report each pair once
      for (ChannelId ch : cells[j].ocl)
        if (cells[l].ocl.contains(ch))
          out.push_back({j, l, fmt::format("channel {} operated by both cells", ch)});
      for (ChannelId ch : cells[j].bcl)
        if (cells[l].ocl.contains(ch))
          out.push_back(
              {j, l, fmt::format("backup channel {} is operated by a neighbor", ch)});
      for (ChannelId ch : cells[l].bcl)
        if (cells[j].ocl.contains(ch))
          out.push_back(
              {l, j, fmt::format("backup channel {} is operated by a neighbor", ch)});
    }
  }
  return out;
}

}  // namespace wransim
