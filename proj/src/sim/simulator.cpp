#include "dragoncast/sim/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "dragoncast/config_file.hpp"

namespace dragoncast {

namespace {
constexpr Micros kNoTimer = -1;
}

Simulator::Simulator(const SimConfig& cfg)
    : cfg_(cfg), loss_rng_(Rng::derive(cfg.seed, RngStream::loss)) {
  auto problems = validate_config(cfg_);
  if (!problems.empty()) throw ConfigError(std::move(problems));

  Rng payload_rng = Rng::derive(cfg_.seed, RngStream::payload);
  source_payloads_.resize(cfg_.generation_size);
  for (auto& p : source_payloads_) {
    p.resize(cfg_.payload_size);
    for (auto& b : p) b = payload_rng.byte();
  }

  Rng placement_rng = Rng::derive(cfg_.seed, RngStream::placement);
  std::vector<Vec2> starts(cfg_.n_nodes);
  for (std::size_t i = 0; i < starts.size(); ++i) {
    if (cfg_.placement == Placement::line)
      starts[i] = Vec2{static_cast<double>(i) * cfg_.line_spacing,
                       cfg_.field_height / 2.0};
    else
      starts[i] = Vec2{placement_rng.uniform(0.0, cfg_.field_width),
                       placement_rng.uniform(0.0, cfg_.field_height)};
  }

  nodes_.reserve(cfg_.n_nodes);
  mobility_.reserve(cfg_.n_nodes);
  const RatePolicy policy = cfg_.make_policy();
  for (NodeId id = 0; id < cfg_.n_nodes; ++id) {
    NodeParams params;
    params.id = id;
    params.role = id == 0 ? NodeRole::source : NodeRole::relay;
    params.field = cfg_.field;
    params.generation_size = cfg_.generation_size;
    params.payload_size = cfg_.payload_size;
    params.window = cfg_.window;
    params.lifetime = cfg_.lifetime_micros();
    params.source_rate = cfg_.source_rate;
    params.policy = policy;
    params.jitter = cfg_.jitter;
    nodes_.emplace_back(params, Rng::derive(cfg_.seed, RngStream::coefficients, id),
                        Rng::derive(cfg_.seed, RngStream::jitter, id),
                        id == 0 ? &source_payloads_ : nullptr);
    mobility_.emplace_back(Rng::derive(cfg_.seed, RngStream::mobility, id),
                           cfg_.field_width, cfg_.field_height, cfg_.speed_min,
                           cfg_.speed_max, cfg_.pause_time, starts[id]);
  }

  pushed_data_.assign(cfg_.n_nodes, kNoTimer);
  pushed_advert_.assign(cfg_.n_nodes, kNoTimer);
  checked_rank_.assign(cfg_.n_nodes, 0xffff);

  log_.meta = TraceMeta{cfg_.n_nodes,
                        cfg_.generation_size,
                        static_cast<std::uint32_t>(cfg_.payload_size),
                        cfg_.field,
                        cfg_.window,
                        cfg_.sample_period_micros(),
                        cfg_.seed};
}

void Simulator::push(Micros t, NodeId node, EventKind kind, std::uint32_t tx) {
  queue_.push(Event{t, node, seq_++, kind, tx});
}

void Simulator::sync_timers(NodeId node) {
  const auto data = nodes_[node].next_data_time();
  if (data && *data != pushed_data_[node]) {
    push(*data, node, EventKind::data_timer);
    pushed_data_[node] = *data;
  }
  const auto advert = nodes_[node].next_advert_time();
  if (advert && *advert != pushed_advert_[node]) {
    push(*advert, node, EventKind::advert_timer);
    pushed_advert_[node] = *advert;
  }
}

std::vector<Vec2> Simulator::positions_at(Micros t) {
  std::vector<Vec2> out(nodes_.size());
  for (std::size_t i = 0; i < nodes_.size(); ++i)
    out[i] = mobility_[i].position(t);
  return out;
}

void Simulator::record(NodeId node, TraceKind kind, Micros now, std::uint32_t bytes,
                       std::int64_t aux1, std::int64_t aux2) {
  const Node& n = nodes_[node];
  const DecoderState& d = n.decoder();
  TraceRecord r;
  r.t = now;
  r.node = node;
  r.kind = kind;
  r.rank = d.rank();
  r.low_index = d.decoded_prefix();
  r.low_index_literal = d.low_index_literal();
  r.high_index = std::max(d.high_index(), d.decoded_prefix());
  r.phase = n.phase() == NodePhase::idle ? 'I'
            : n.phase() == NodePhase::active ? 'A'
                                             : 'S';
  r.bytes = bytes;
  r.aux1 = aux1;
  r.aux2 = aux2;
  log_.records.push_back(r);
}

void Simulator::note_phase_changes(NodeId node, NodePhase before, Micros now) {
  const NodePhase after = nodes_[node].phase();
  if (before == after) return;
  if (after == NodePhase::stopped) {
    if (nodes_[node].rank() != cfg_.generation_size)
      throw std::logic_error("node stopped below full rank");
    ++stopped_count_;
  }
  if (before == NodePhase::stopped) --stopped_count_;
  record(node, TraceKind::phase, now);
}

void Simulator::check_conservation(NodeId node, Micros now) const {
  if (node == 0) return;
  if (nodes_[node].rank() > nodes_[0].revealed(now))
    throw std::logic_error("relay rank exceeds the source injection clock");
}

void Simulator::handle_broadcast(NodeId sender, const Broadcast& b, Micros now) {
  const Node& n = nodes_[sender];
  const bool control = b.packet.header.is_control;
  if (!control) {
    const PacketSupport s = support(b.packet.encoding);
    if (s.lowest < b.window_lo || s.highest > b.window_hi)
      throw std::logic_error("transmission support escapes its window");
  }
  if (b.packet.header.sender_rank != n.decoder().rank() ||
      b.packet.header.sender_low_index != n.decoder().decoded_prefix())
    throw std::logic_error("piggyback header is stale at transmission time");

  const auto bytes = serialize_packet(b.packet);
  const auto size = static_cast<std::uint32_t>(bytes.size());
  const Micros duration = std::max<Micros>(
      1, static_cast<Micros>(std::llround(static_cast<double>(size) * 8.0 * 1e6 /
                                          cfg_.bitrate)));

  const auto positions = positions_at(now);
  PendingTx tx{b.packet, sender,
               in_range_nodes(positions, sender, cfg_.radio_range), {}, 0};
  tx.lost.reserve(tx.receivers.size());
  for (std::size_t i = 0; i < tx.receivers.size(); ++i)
    tx.lost.push_back(loss_rng_.bernoulli(cfg_.loss_probability));
  if (cfg_.collision_model == CollisionModel::overlap)
    tx.collision_id = collisions_.begin(now, now + duration, tx.receivers);

  const std::uint32_t id = next_tx_id_++;
  pending_.emplace(id, std::move(tx));
  push(now + duration, sender, EventKind::tx_end, id);

  record(sender, control ? TraceKind::tx_ctrl : TraceKind::tx_data, now, size,
         b.window_lo, b.window_hi);
}

void Simulator::deliver(const Event& ev) {
  auto it = pending_.find(ev.tx);
  if (it == pending_.end()) throw std::logic_error("tx_end for unknown transmission");
  PendingTx tx = std::move(it->second);
  pending_.erase(it);

  for (std::size_t i = 0; i < tx.receivers.size(); ++i) {
    if (tx.lost[i]) continue;
    if (tx.collision_id != 0 && collisions_.collided(tx.collision_id, tx.receivers[i]))
      continue;
    const NodeId r = tx.receivers[i];
    Node& node = nodes_[r];
    const NodePhase before = node.phase();
    const ReceiveResult res = node.on_receive(tx.packet, ev.t);
    const bool innovative =
        res.ingest && *res.ingest == IngestOutcome::innovative;
    record(r, TraceKind::rx, ev.t, 0, innovative ? 1 : 0, tx.sender);
    note_phase_changes(r, before, ev.t);
    check_conservation(r, ev.t);
    // Every decoded payload must match what the source injected.
    for (const auto& pkt : node.take_decoded())
      if (pkt.payload != source_payloads_[pkt.index - 1u])
        throw std::logic_error("decoded payload diverges from the source");
    sync_timers(r);
  }
  if (tx.collision_id != 0) collisions_.finish(tx.collision_id);
}

void Simulator::do_sample(Micros now) {
  if (now == last_sample_) return;
  last_sample_ = now;
  const auto positions = positions_at(now);
  for (NodeId id = 0; id < nodes_.size(); ++id) {
    const auto neighbors =
        in_range_nodes(positions, id, cfg_.radio_range).size();
    const std::int64_t revealed = id == 0 ? nodes_[0].revealed(now) : 0;
    record(id, TraceKind::sample, now, 0,
           static_cast<std::int64_t>(neighbors), revealed);
    check_conservation(id, now);
    // Stored decoder rows only change on innovative ingest, so auditing the
    // row invariants whenever the rank moved covers every mutation without
    // rescanning settled nodes each tick.
    if (nodes_[id].rank() != checked_rank_[id]) {
      nodes_[id].decoder().check_invariants();
      checked_rank_[id] = nodes_[id].rank();
    }
  }
}

RunResult Simulator::run() {
  const Micros horizon = cfg_.horizon_micros();
  const Micros period = cfg_.sample_period_micros();

  push(0, static_cast<NodeId>(nodes_.size()), EventKind::sample);
  for (NodeId id = 0; id < nodes_.size(); ++id) sync_timers(id);

  Micros now = 0;
  bool all_stopped = false;
  while (!queue_.empty()) {
    const Event ev = queue_.top();
    if (ev.t > horizon) {
      now = horizon;
      break;
    }
    queue_.pop();
    now = ev.t;

    switch (ev.kind) {
      case EventKind::data_timer: {
        Node& node = nodes_[ev.node];
        if (node.next_data_time() != std::optional<Micros>(ev.t)) break;  // stale
        const NodePhase before = node.phase();
        const auto broadcast = node.on_data_timer(ev.t);
        if (broadcast) handle_broadcast(ev.node, *broadcast, ev.t);
        note_phase_changes(ev.node, before, ev.t);
        sync_timers(ev.node);
        break;
      }
      case EventKind::advert_timer: {
        Node& node = nodes_[ev.node];
        if (node.next_advert_time() != std::optional<Micros>(ev.t)) break;
        const NodePhase before = node.phase();
        const auto broadcast = node.on_advert_timer(ev.t);
        if (broadcast) handle_broadcast(ev.node, *broadcast, ev.t);
        note_phase_changes(ev.node, before, ev.t);
        sync_timers(ev.node);
        break;
      }
      case EventKind::tx_end:
        deliver(ev);
        break;
      case EventKind::sample:
        do_sample(ev.t);
        if (ev.t + period <= horizon)
          push(ev.t + period, static_cast<NodeId>(nodes_.size()), EventKind::sample);
        break;
    }

    if (stopped_count_ == nodes_.size()) {
      all_stopped = true;
      break;
    }
  }

  // Close the log with the final state so series end exactly at end time.
  do_sample(now);

  RunResult result;
  result.all_stopped = all_stopped;
  result.end_time = now;
  result.trace = std::move(log_);
  return result;
}

}  // namespace dragoncast
