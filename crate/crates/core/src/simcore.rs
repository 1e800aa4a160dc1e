//! Slot-synchronous simulation of coexisting WBANs with collision
//! resolution, ACK/timeout semantics folded into atomic slot exchanges, and
//! energy/deferral accounting for both the CHIM scheme and the ZigBee GTS
//! baseline.
//!
//! A slot carries one full data+ACK exchange per transmitting sensor: the
//! sensor radiates toward its coordinator and the coordinator answers in the
//! same slot on the same channel. An exchange is delivered iff no other
//! same-channel exchange radiates from an entity in range of either of its
//! endpoints; that one predicate covers both the data-packet and the
//! ACK-packet collision scenarios without sub-slot timing, and both failure
//! modes trigger the same recovery (retry in the backup part).
//!
//! One run is strictly single-threaded and deterministic for a given rng.

use std::fmt::Write as _;

use rand::Rng;
use thiserror::Error;

use crate::schedule::{WbanSchedule, ZigbeeGtsSchedule};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SimError {
    #[error("{schedules} schedules for a network of {wbans} wbans")]
    WbanCountMismatch { schedules: usize, wbans: usize },
    #[error("wban {wban} schedule covers {schedule_sensors} sensors, network has {network_sensors}")]
    SensorCountMismatch {
        wban: usize,
        schedule_sensors: usize,
        network_sensors: usize,
    },
    #[error("schedules disagree on channel count, symbol range, or shared channel")]
    InconsistentSchedules,
    #[error("superframe horizon must be at least 1")]
    EmptyHorizon,
    #[error("{got} fixed slot offsets provided for {wbans} wbans")]
    OffsetCountMismatch { got: usize, wbans: usize },
}

/// A node within a WBAN: the coordinator hub or one of its sensors
/// (1-based id).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NodeKind {
    Coordinator,
    Sensor(u16),
}

/// One radio entity in the network.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct EntityId {
    pub wban: u16,
    pub node: NodeKind,
}

impl EntityId {
    pub fn coordinator(wban: usize) -> Self {
        Self {
            wban: wban as u16,
            node: NodeKind::Coordinator,
        }
    }

    pub fn sensor(wban: usize, sensor: usize) -> Self {
        Self {
            wban: wban as u16,
            node: NodeKind::Sensor(sensor as u16),
        }
    }
}

/// Static interference topology: which entities of distinct WBANs are within
/// communication range of each other. Entities of the same WBAN are always
/// in range. The relation is symmetric and sampled once per run.
#[derive(Debug, Clone)]
pub struct NetworkModel {
    wbans: usize,
    sensors: usize,
    stride: usize,
    in_range: Vec<bool>,
}

impl NetworkModel {
    fn blank(wbans: usize, sensors: usize, cross: bool) -> Self {
        assert!(wbans >= 1 && sensors >= 1);
        let stride = sensors + 1;
        let entities = wbans * stride;
        let mut model = Self {
            wbans,
            sensors,
            stride,
            in_range: vec![cross; entities * entities],
        };
        if !cross {
            for a in 0..entities {
                for b in 0..entities {
                    if a / stride == b / stride {
                        model.in_range[a * entities + b] = true;
                    }
                }
            }
        }
        model
    }

    /// Samples each cross-WBAN entity pair independently: in range with
    /// probability `alpha`, symmetric, fixed for the whole run.
    pub fn probabilistic(wbans: usize, sensors: usize, alpha: f64, rng: &mut impl Rng) -> Self {
        assert!((0.0..=1.0).contains(&alpha), "alpha must be in [0, 1]");
        let mut model = Self::blank(wbans, sensors, false);
        let entities = wbans * model.stride;
        for a in 0..entities {
            for b in a + 1..entities {
                if a / model.stride == b / model.stride {
                    continue;
                }
                if rng.random_bool(alpha) {
                    model.in_range[a * entities + b] = true;
                    model.in_range[b * entities + a] = true;
                }
            }
        }
        model
    }

    /// Places each WBAN uniformly in a square of side `area_side` (all of a
    /// WBAN's entities share its position, body-scale being negligible
    /// against room scale) and links two WBANs iff their distance is at most
    /// `radius`.
    pub fn geometric(
        wbans: usize,
        sensors: usize,
        area_side: f64,
        radius: f64,
        rng: &mut impl Rng,
    ) -> Self {
        assert!(area_side > 0.0 && radius >= 0.0);
        let positions: Vec<(f64, f64)> = (0..wbans)
            .map(|_| (rng.random_range(0.0..area_side), rng.random_range(0.0..area_side)))
            .collect();
        let mut model = Self::blank(wbans, sensors, false);
        let entities = wbans * model.stride;
        for wa in 0..wbans {
            for wb in wa + 1..wbans {
                let (dx, dy) = (
                    positions[wa].0 - positions[wb].0,
                    positions[wa].1 - positions[wb].1,
                );
                if dx * dx + dy * dy <= radius * radius {
                    for na in 0..model.stride {
                        for nb in 0..model.stride {
                            let a = wa * model.stride + na;
                            let b = wb * model.stride + nb;
                            model.in_range[a * entities + b] = true;
                            model.in_range[b * entities + a] = true;
                        }
                    }
                }
            }
        }
        model
    }

    /// Every entity in range of every other (the `alpha = 1` extreme).
    pub fn fully_connected(wbans: usize, sensors: usize) -> Self {
        Self::blank(wbans, sensors, true)
    }

    /// No cross-WBAN edges at all (the `alpha = 0` extreme).
    pub fn isolated(wbans: usize, sensors: usize) -> Self {
        Self::blank(wbans, sensors, false)
    }

    pub fn wbans(&self) -> usize {
        self.wbans
    }

    pub fn sensors(&self) -> usize {
        self.sensors
    }

    fn index(&self, e: EntityId) -> usize {
        let node = match e.node {
            NodeKind::Coordinator => 0,
            NodeKind::Sensor(s) => {
                debug_assert!(s >= 1 && s as usize <= self.sensors);
                s as usize
            }
        };
        e.wban as usize * self.stride + node
    }

    pub fn in_range(&self, a: EntityId, b: EntityId) -> bool {
        if a.wban == b.wban {
            return true;
        }
        let entities = self.wbans * self.stride;
        self.in_range[self.index(a) * entities + self.index(b)]
    }
}

/// Superframe phase a transmission belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Phase {
    Tdma,
    Imb,
    Cfp,
}

impl Phase {
    pub fn as_str(&self) -> &'static str {
        match self {
            Phase::Tdma => "TDMA",
            Phase::Imb => "IMB",
            Phase::Cfp => "CFP",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Delivered,
    Collided,
}

impl Outcome {
    pub fn as_str(&self) -> &'static str {
        match self {
            Outcome::Delivered => "delivered",
            Outcome::Collided => "collided",
        }
    }
}

/// One slot exchange: `src` sends to `dst` on `channel`, ACK folded in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SlotTx {
    pub src: EntityId,
    pub dst: EntityId,
    pub channel: u16,
}

/// Resolves all exchanges active in one slot.
///
/// Exchange `t` is delivered iff no other exchange on the same channel has an
/// endpoint in range of either endpoint of `t` (both sides of every exchange
/// radiate within the slot).
pub fn resolve_slot(transmissions: &[SlotTx], net: &NetworkModel) -> Vec<Outcome> {
    let mut out = Vec::with_capacity(transmissions.len());
    resolve_slot_into(transmissions, net, &mut out);
    out
}

fn resolve_slot_into(txs: &[SlotTx], net: &NetworkModel, out: &mut Vec<Outcome>) {
    out.clear();
    'each: for (i, t) in txs.iter().enumerate() {
        for (j, o) in txs.iter().enumerate() {
            if i == j || o.channel != t.channel {
                continue;
            }
            if net.in_range(o.src, t.src)
                || net.in_range(o.src, t.dst)
                || net.in_range(o.dst, t.src)
                || net.in_range(o.dst, t.dst)
            {
                out.push(Outcome::Collided);
                continue 'each;
            }
        }
        out.push(Outcome::Delivered);
    }
}

/// Linear per-attempt energy model: the sensor transmits at `tx_power_dbm`
/// for one slot and the coordinator pays an equal receive cost.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyModel {
    pub tx_power_dbm: f64,
    pub slot_duration_ms: f64,
}

impl Default for EnergyModel {
    fn default() -> Self {
        Self {
            tx_power_dbm: -10.0,
            slot_duration_ms: 1.0,
        }
    }
}

impl EnergyModel {
    pub fn tx_power_mw(&self) -> f64 {
        10f64.powf(self.tx_power_dbm / 10.0)
    }

    /// Joules consumed by one attempt (transmit plus coordinator receive).
    pub fn energy_per_attempt_j(&self) -> f64 {
        2.0 * self.tx_power_mw() * 1e-3 * self.slot_duration_ms * 1e-3
    }
}

/// Per-WBAN slot clock offsets. All analysis assumes `Aligned`; the other
/// modes exist for sensitivity runs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OffsetPolicy {
    Aligned,
    /// Each WBAN draws an offset uniformly from `[0, superframe_len)`.
    Random,
    Fixed(Vec<usize>),
}

impl OffsetPolicy {
    fn materialize(
        &self,
        wbans: usize,
        frame_len: usize,
        rng: &mut impl Rng,
    ) -> Result<Vec<usize>, SimError> {
        match self {
            OffsetPolicy::Aligned => Ok(vec![0; wbans]),
            OffsetPolicy::Random => Ok((0..wbans).map(|_| rng.random_range(0..frame_len)).collect()),
            OffsetPolicy::Fixed(v) => {
                if v.len() != wbans {
                    return Err(SimError::OffsetCountMismatch {
                        got: v.len(),
                        wbans,
                    });
                }
                Ok(v.clone())
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct SimOptions {
    pub superframes: usize,
    /// Trailing inactive slots appended to every superframe.
    pub inactive_slots: usize,
    pub offsets: OffsetPolicy,
    pub energy: EnergyModel,
    /// Record the full transmission log (memory scales with attempts).
    pub record_log: bool,
}

impl SimOptions {
    pub fn new(superframes: usize) -> Self {
        Self {
            superframes,
            inactive_slots: 0,
            offsets: OffsetPolicy::Aligned,
            energy: EnergyModel::default(),
            record_log: false,
        }
    }

    pub fn with_log(mut self) -> Self {
        self.record_log = true;
        self
    }
}

/// One attempted exchange, as recorded in the transmission log.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransmissionRecord {
    pub superframe: u32,
    /// 1-based slot index within the superframe, continuous across phases.
    pub slot: u16,
    pub phase: Phase,
    pub channel: u16,
    pub src: EntityId,
    pub dst: EntityId,
    pub outcome: Outcome,
    pub energy_j: f64,
}

/// Aggregated per-run metrics. `apc`, `aec_mw`, and `dps` are means over
/// (WBAN, superframe) cells; the raw totals are kept alongside.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunMetrics {
    /// Average probability of collision: collided/attempted per cell.
    pub apc: f64,
    /// Average power-equivalent per WBAN in mW (energy per superframe over
    /// superframe duration).
    pub aec_mw: f64,
    /// Average packets per WBAN per superframe that failed both phases.
    pub dps: f64,
    pub attempts: u64,
    pub delivered: u64,
    pub collided: u64,
    pub deferred: u64,
    pub wbans: usize,
    pub superframes: usize,
}

/// A finished run: metrics plus the optional transmission log.
#[derive(Debug, Clone)]
pub struct SimRun {
    pub metrics: RunMetrics,
    pub log: Vec<TransmissionRecord>,
}

#[derive(Clone, Copy)]
struct TxMeta {
    wban: usize,
    sensor: usize,
    phase: Phase,
    superframe: usize,
    local_slot: usize,
}

struct Accounting {
    power_per_attempt_mw: f64,
    energy_per_attempt_j: f64,
    apc_sum: f64,
    aec_sum: f64,
    attempts: u64,
    delivered: u64,
    collided: u64,
    deferred: u64,
    sf_attempts: Vec<u32>,
    sf_collided: Vec<u32>,
}

impl Accounting {
    fn new(wbans: usize, frame_len: usize, energy: &EnergyModel) -> Self {
        Self {
            power_per_attempt_mw: 2.0 * energy.tx_power_mw() / frame_len as f64,
            energy_per_attempt_j: energy.energy_per_attempt_j(),
            apc_sum: 0.0,
            aec_sum: 0.0,
            attempts: 0,
            delivered: 0,
            collided: 0,
            deferred: 0,
            sf_attempts: vec![0; wbans],
            sf_collided: vec![0; wbans],
        }
    }

    fn tally(&mut self, wban: usize, outcome: Outcome) {
        self.attempts += 1;
        self.sf_attempts[wban] += 1;
        match outcome {
            Outcome::Delivered => self.delivered += 1,
            Outcome::Collided => {
                self.collided += 1;
                self.sf_collided[wban] += 1;
            }
        }
    }

    fn finalize_superframe(&mut self, wban: usize, deferred: u64) {
        let attempts = self.sf_attempts[wban];
        debug_assert!(attempts > 0, "every sensor transmits each superframe");
        self.apc_sum += f64::from(self.sf_collided[wban]) / f64::from(attempts);
        self.aec_sum += f64::from(attempts) * self.power_per_attempt_mw;
        self.deferred += deferred;
        self.sf_attempts[wban] = 0;
        self.sf_collided[wban] = 0;
    }

    fn into_metrics(self, wbans: usize, superframes: usize) -> RunMetrics {
        debug_assert_eq!(self.attempts, self.delivered + self.collided);
        let cells = (wbans * superframes) as f64;
        RunMetrics {
            apc: self.apc_sum / cells,
            aec_mw: self.aec_sum / cells,
            dps: self.deferred as f64 / cells,
            attempts: self.attempts,
            delivered: self.delivered,
            collided: self.collided,
            deferred: self.deferred,
            wbans,
            superframes,
        }
    }
}

fn frame_position(
    global: usize,
    offset: usize,
    frame_len: usize,
    horizon: usize,
) -> Option<(usize, usize)> {
    let rel = global.checked_sub(offset)?;
    let sf = rel / frame_len;
    (sf < horizon).then_some((sf, rel % frame_len))
}

fn validate_common(net: &NetworkModel, schedules: usize, superframes: usize) -> Result<(), SimError> {
    if schedules != net.wbans() {
        return Err(SimError::WbanCountMismatch {
            schedules,
            wbans: net.wbans(),
        });
    }
    if superframes == 0 {
        return Err(SimError::EmptyHorizon);
    }
    Ok(())
}

/// Runs the CHIM scheme: every sensor transmits once per superframe in its
/// TDMA slot on the WBAN's default channel; a failed sensor retries once in
/// its backup slot on its backup channel during the IMB part; failing both
/// defers the packet (dropped and regenerated next superframe).
pub fn run_chim(
    net: &NetworkModel,
    schedules: &[WbanSchedule],
    opts: &SimOptions,
    rng: &mut impl Rng,
) -> Result<SimRun, SimError> {
    validate_common(net, schedules.len(), opts.superframes)?;
    let first = &schedules[0];
    for s in schedules {
        if s.sensors() != net.sensors() {
            return Err(SimError::SensorCountMismatch {
                wban: s.wban_id,
                schedule_sensors: s.sensors(),
                network_sensors: net.sensors(),
            });
        }
        if s.channels() != first.channels() || s.symbol_range() != first.symbol_range() {
            return Err(SimError::InconsistentSchedules);
        }
    }

    let n = schedules.len();
    let k = net.sensors();
    let q = first.symbol_range();
    let frame_len = k + q + opts.inactive_slots;
    let offsets = opts.offsets.materialize(n, frame_len, rng)?;

    // Backup slot -> sensor lookup (0 = slot unused); slots are pairwise
    // distinct within a WBAN, so at most one sensor per entry.
    let bkts_sensor: Vec<Vec<u16>> = schedules
        .iter()
        .map(|s| {
            let mut v = vec![0u16; q + 1];
            for sensor in 1..=k {
                v[s.backup_slot_of(sensor) as usize] = sensor as u16;
            }
            v
        })
        .collect();

    let stride = k + 1;
    let mut tdma_failed = vec![false; n * stride];
    let mut recovered = vec![false; n * stride];
    let mut acc = Accounting::new(n, frame_len, &opts.energy);
    let mut log = Vec::new();
    let mut txs: Vec<SlotTx> = Vec::new();
    let mut meta: Vec<TxMeta> = Vec::new();
    let mut outcomes: Vec<Outcome> = Vec::new();

    let max_offset = offsets.iter().copied().max().unwrap_or(0);
    let total_slots = opts.superframes * frame_len + max_offset;
    for g in 0..total_slots {
        txs.clear();
        meta.clear();
        for w in 0..n {
            let Some((sf, local)) = frame_position(g, offsets[w], frame_len, opts.superframes)
            else {
                continue;
            };
            if local < k {
                let sensor = local + 1;
                txs.push(SlotTx {
                    src: EntityId::sensor(w, sensor),
                    dst: EntityId::coordinator(w),
                    channel: schedules[w].default_channel,
                });
                meta.push(TxMeta {
                    wban: w,
                    sensor,
                    phase: Phase::Tdma,
                    superframe: sf,
                    local_slot: local,
                });
            } else if local < k + q {
                let backup_slot = local - k + 1;
                let sensor = bkts_sensor[w][backup_slot] as usize;
                if sensor != 0 && tdma_failed[w * stride + sensor] {
                    txs.push(SlotTx {
                        src: EntityId::sensor(w, sensor),
                        dst: EntityId::coordinator(w),
                        channel: schedules[w].backup_channel_of(sensor),
                    });
                    meta.push(TxMeta {
                        wban: w,
                        sensor,
                        phase: Phase::Imb,
                        superframe: sf,
                        local_slot: local,
                    });
                }
            }
        }
        resolve_slot_into(&txs, net, &mut outcomes);
        apply_outcomes(
            &txs,
            &meta,
            &outcomes,
            stride,
            &mut tdma_failed,
            &mut recovered,
            &mut acc,
            opts.record_log.then_some(&mut log),
        );
        for w in 0..n {
            if let Some((_, local)) = frame_position(g, offsets[w], frame_len, opts.superframes) {
                if local == frame_len - 1 {
                    close_superframe(w, k, stride, &mut tdma_failed, &mut recovered, &mut acc);
                }
            }
        }
    }
    Ok(SimRun {
        metrics: acc.into_metrics(n, opts.superframes),
        log,
    })
}

/// Runs the ZigBee baseline: all WBANs share one channel; sensors that fail
/// in the TDMA part compete for up to `G` guaranteed time-slots in the CFP
/// (ascending sensor order); capacity overflow and CFP collisions both defer.
pub fn run_zigbee(
    net: &NetworkModel,
    schedules: &[ZigbeeGtsSchedule],
    opts: &SimOptions,
    rng: &mut impl Rng,
) -> Result<SimRun, SimError> {
    validate_common(net, schedules.len(), opts.superframes)?;
    let first = &schedules[0];
    for s in schedules {
        if s.sensors() != net.sensors() {
            return Err(SimError::SensorCountMismatch {
                wban: s.wban_id,
                schedule_sensors: s.sensors(),
                network_sensors: net.sensors(),
            });
        }
        if s.shared_channel != first.shared_channel || s.gts_count() != first.gts_count() {
            return Err(SimError::InconsistentSchedules);
        }
    }

    let n = schedules.len();
    let k = net.sensors();
    let gts_count = first.gts_count();
    let channel = first.shared_channel;
    let frame_len = k + gts_count + opts.inactive_slots;
    let offsets = opts.offsets.materialize(n, frame_len, rng)?;

    let stride = k + 1;
    let mut tdma_failed = vec![false; n * stride];
    let mut recovered = vec![false; n * stride];
    // GTS index -> granted sensor (0 = unassigned), refilled per superframe.
    let mut gts_sensor = vec![0u16; n * (gts_count + 1)];
    let mut acc = Accounting::new(n, frame_len, &opts.energy);
    let mut log = Vec::new();
    let mut txs: Vec<SlotTx> = Vec::new();
    let mut meta: Vec<TxMeta> = Vec::new();
    let mut outcomes: Vec<Outcome> = Vec::new();

    let max_offset = offsets.iter().copied().max().unwrap_or(0);
    let total_slots = opts.superframes * frame_len + max_offset;
    for g in 0..total_slots {
        txs.clear();
        meta.clear();
        for w in 0..n {
            let Some((sf, local)) = frame_position(g, offsets[w], frame_len, opts.superframes)
            else {
                continue;
            };
            if local < k {
                let sensor = local + 1;
                txs.push(SlotTx {
                    src: EntityId::sensor(w, sensor),
                    dst: EntityId::coordinator(w),
                    channel,
                });
                meta.push(TxMeta {
                    wban: w,
                    sensor,
                    phase: Phase::Tdma,
                    superframe: sf,
                    local_slot: local,
                });
            } else if local < k + gts_count {
                if local == k {
                    // TDMA part just completed for this WBAN: issue grants.
                    let failed: Vec<usize> =
                        (1..=k).filter(|&s| tdma_failed[w * stride + s]).collect();
                    let base = w * (gts_count + 1);
                    gts_sensor[base..base + gts_count + 1].fill(0);
                    for grant in schedules[w].grant_gts(&failed) {
                        if let Some(gts) = grant.gts {
                            gts_sensor[base + gts] = grant.sensor as u16;
                        }
                    }
                }
                let gts = local - k + 1;
                let sensor = gts_sensor[w * (gts_count + 1) + gts] as usize;
                if sensor != 0 {
                    txs.push(SlotTx {
                        src: EntityId::sensor(w, sensor),
                        dst: EntityId::coordinator(w),
                        channel,
                    });
                    meta.push(TxMeta {
                        wban: w,
                        sensor,
                        phase: Phase::Cfp,
                        superframe: sf,
                        local_slot: local,
                    });
                }
            }
        }
        resolve_slot_into(&txs, net, &mut outcomes);
        apply_outcomes(
            &txs,
            &meta,
            &outcomes,
            stride,
            &mut tdma_failed,
            &mut recovered,
            &mut acc,
            opts.record_log.then_some(&mut log),
        );
        for w in 0..n {
            if let Some((_, local)) = frame_position(g, offsets[w], frame_len, opts.superframes) {
                if local == frame_len - 1 {
                    close_superframe(w, k, stride, &mut tdma_failed, &mut recovered, &mut acc);
                }
            }
        }
    }
    Ok(SimRun {
        metrics: acc.into_metrics(n, opts.superframes),
        log,
    })
}

#[allow(clippy::too_many_arguments)]
fn apply_outcomes(
    txs: &[SlotTx],
    meta: &[TxMeta],
    outcomes: &[Outcome],
    stride: usize,
    tdma_failed: &mut [bool],
    recovered: &mut [bool],
    acc: &mut Accounting,
    mut log: Option<&mut Vec<TransmissionRecord>>,
) {
    for i in 0..txs.len() {
        let m = meta[i];
        let outcome = outcomes[i];
        acc.tally(m.wban, outcome);
        let idx = m.wban * stride + m.sensor;
        match (m.phase, outcome) {
            (Phase::Tdma, Outcome::Collided) => tdma_failed[idx] = true,
            (Phase::Imb | Phase::Cfp, Outcome::Delivered) => recovered[idx] = true,
            _ => {}
        }
        if let Some(log) = log.as_deref_mut() {
            log.push(TransmissionRecord {
                superframe: m.superframe as u32,
                slot: (m.local_slot + 1) as u16,
                phase: m.phase,
                channel: txs[i].channel,
                src: txs[i].src,
                dst: txs[i].dst,
                outcome,
                energy_j: acc.energy_per_attempt_j,
            });
        }
    }
}

fn close_superframe(
    wban: usize,
    sensors: usize,
    stride: usize,
    tdma_failed: &mut [bool],
    recovered: &mut [bool],
    acc: &mut Accounting,
) {
    let base = wban * stride;
    let mut deferred = 0u64;
    for sensor in 1..=sensors {
        if tdma_failed[base + sensor] && !recovered[base + sensor] {
            deferred += 1;
        }
        tdma_failed[base + sensor] = false;
        recovered[base + sensor] = false;
    }
    acc.finalize_superframe(wban, deferred);
}

/// Transmission log CSV: `superframe,slot,phase,channel,src_wban,src_sensor,dst,outcome`.
pub fn write_log_csv(records: &[TransmissionRecord]) -> String {
    let mut out = String::from("superframe,slot,phase,channel,src_wban,src_sensor,dst,outcome\n");
    for r in records {
        let src_sensor = match r.src.node {
            NodeKind::Sensor(s) => s,
            NodeKind::Coordinator => 0,
        };
        let dst = match r.dst.node {
            NodeKind::Coordinator => format!("crd{}", r.dst.wban),
            NodeKind::Sensor(s) => format!("s{}_{}", r.dst.wban, s),
        };
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            r.superframe,
            r.slot,
            r.phase.as_str(),
            r.channel,
            r.src.wban,
            src_sensor,
            dst,
            r.outcome.as_str()
        );
    }
    out
}
