//! Per-WBAN schedules: CHIM backup channel/slot allocation from a Latin
//! rectangle, and the single-channel ZigBee GTS baseline.
//!
//! The symbol decoding rule: sensor `k` owns column `k` of its WBAN's
//! rectangle; its assigned symbol `s_k` occurs exactly once in that column,
//! at some row `i`. The backup time-slot is the symbol value itself
//! (`BKTS = s_k`, an index into the IMB part of `q` slots) and the backup
//! channel is the row (`BKC = i`). Distinct symbols per WBAN give distinct
//! backup slots, so the single-transceiver coordinator can retune per slot.

use rand::Rng;
use thiserror::Error;

use crate::latin::{assign_symbols, LatinRectangle, OrthogonalFamily};

/// Channels in the 2.4 GHz band; the baseline collapses all WBANs onto one
/// of them.
pub const ZIGBEE_CHANNELS: u16 = 16;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ScheduleError {
    #[error("family is {family_rows} channels x {family_cols} sensors, requested {channels} x {sensors}")]
    FamilyMismatch {
        family_rows: usize,
        family_cols: usize,
        channels: usize,
        sensors: usize,
    },
    #[error("at least one wban is required")]
    NoWbans,
}

/// Slot counts of the CHIM active frame plus the trailing inactive frame.
///
/// The IMB part has `q` slots (backup slots are symbol values in `[1, q]`),
/// which is at least the `K` slots of the TDMA part.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SuperframeLayout {
    tdma_slots: usize,
    imb_slots: usize,
    inactive_slots: usize,
}

impl SuperframeLayout {
    pub fn new(tdma_slots: usize, imb_slots: usize, inactive_slots: usize) -> Self {
        assert!(tdma_slots >= 1, "TDMA part cannot be empty");
        assert!(
            imb_slots >= tdma_slots,
            "IMB part ({imb_slots}) must cover at least the TDMA part ({tdma_slots})"
        );
        Self {
            tdma_slots,
            imb_slots,
            inactive_slots,
        }
    }

    pub fn tdma_slots(&self) -> usize {
        self.tdma_slots
    }

    pub fn imb_slots(&self) -> usize {
        self.imb_slots
    }

    pub fn inactive_slots(&self) -> usize {
        self.inactive_slots
    }

    /// Total slots per superframe.
    pub fn total_slots(&self) -> usize {
        self.tdma_slots + self.imb_slots + self.inactive_slots
    }
}

/// One WBAN's CHIM schedule: default channel, identity TDMA slot map, and a
/// backup `(channel, slot)` pair per sensor decoded from the rectangle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WbanSchedule {
    pub wban_id: usize,
    /// Default operation channel in `[1, M]`.
    pub default_channel: u16,
    /// Index of the family member this WBAN picked.
    pub rectangle_index: usize,
    channels: usize,
    symbol_range: usize,
    backup_channel: Vec<u16>,
    backup_slot: Vec<u16>,
}

impl WbanSchedule {
    /// Derives the backup pairs for every sensor from `rect` via the
    /// deterministic symbol assignment.
    pub fn from_rectangle(
        wban_id: usize,
        default_channel: u16,
        rectangle_index: usize,
        rect: &LatinRectangle,
    ) -> Self {
        let assignment = assign_symbols(rect);
        let mut backup_channel = Vec::with_capacity(rect.cols());
        let mut backup_slot = Vec::with_capacity(rect.cols());
        for k in 1..=rect.cols() {
            let symbol = assignment.symbol_for(k);
            let row = rect
                .column(k - 1)
                .position(|s| s == symbol)
                .expect("assigned symbol occurs in its column");
            backup_channel.push(row as u16 + 1);
            backup_slot.push(symbol);
        }
        Self {
            wban_id,
            default_channel,
            rectangle_index,
            channels: rect.rows(),
            symbol_range: rect.symbol_range(),
            backup_channel,
            backup_slot,
        }
    }

    pub fn sensors(&self) -> usize {
        self.backup_channel.len()
    }

    /// Channel count `M` of the underlying rectangle.
    pub fn channels(&self) -> usize {
        self.channels
    }

    /// Symbol range `q`; backup slots index into an IMB part of this length.
    pub fn symbol_range(&self) -> usize {
        self.symbol_range
    }

    /// TDMA slot of 1-based sensor `k` (the identity map).
    pub fn tdma_slot_of(&self, sensor: usize) -> usize {
        sensor
    }

    /// Backup channel of 1-based sensor `k`, in `[1, M]`.
    pub fn backup_channel_of(&self, sensor: usize) -> u16 {
        self.backup_channel[sensor - 1]
    }

    /// Backup time-slot of 1-based sensor `k`, in `[1, q]`.
    pub fn backup_slot_of(&self, sensor: usize) -> u16 {
        self.backup_slot[sensor - 1]
    }

    pub fn superframe_layout(&self, inactive_slots: usize) -> SuperframeLayout {
        SuperframeLayout::new(self.sensors(), self.symbol_range, inactive_slots)
    }
}

/// Stage-1 network setup: every WBAN independently picks a default channel
/// and a family member uniformly at random (with replacement: coordinators
/// do not coordinate, so duplicates are possible), then decodes its backup
/// pairs.
///
/// Per WBAN the draw order is fixed: default channel first, then rectangle
/// index, which makes the result bit-reproducible for a given rng.
pub fn chim_setup(
    wbans: usize,
    sensors: usize,
    channels: usize,
    family: &OrthogonalFamily,
    rng: &mut impl Rng,
) -> Result<Vec<WbanSchedule>, ScheduleError> {
    if wbans == 0 {
        return Err(ScheduleError::NoWbans);
    }
    if family.rows() != channels || family.cols() != sensors {
        return Err(ScheduleError::FamilyMismatch {
            family_rows: family.rows(),
            family_cols: family.cols(),
            channels,
            sensors,
        });
    }
    Ok((0..wbans)
        .map(|id| {
            let dfc = rng.random_range(1..=channels as u16);
            let idx = rng.random_range(0..family.size());
            WbanSchedule::from_rectangle(id, dfc, idx, &family.members()[idx])
        })
        .collect())
}

/// One WBAN's baseline schedule: TDMA on the shared channel plus up to
/// `gts_count` guaranteed time-slots in the contention-free period.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZigbeeGtsSchedule {
    pub wban_id: usize,
    /// The single channel every WBAN shares.
    pub shared_channel: u16,
    sensors: usize,
    gts_count: usize,
}

impl ZigbeeGtsSchedule {
    pub fn sensors(&self) -> usize {
        self.sensors
    }

    pub fn gts_count(&self) -> usize {
        self.gts_count
    }

    /// Grants GTS indices `1..=G` to the first `G` failed sensors in
    /// ascending sensor order; the rest are deferred to the next superframe.
    pub fn grant_gts(&self, failed_sensors: &[usize]) -> Vec<GtsGrant> {
        let mut failed: Vec<usize> = failed_sensors.to_vec();
        failed.sort_unstable();
        failed.dedup();
        debug_assert!(failed.iter().all(|&s| s >= 1 && s <= self.sensors));
        failed
            .into_iter()
            .enumerate()
            .map(|(i, sensor)| GtsGrant {
                sensor,
                gts: (i < self.gts_count).then_some(i + 1),
            })
            .collect()
    }
}

/// Grant outcome for one failed sensor: a 1-based GTS index, or deferral.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GtsGrant {
    pub sensor: usize,
    pub gts: Option<usize>,
}

/// Baseline setup: all WBANs share one channel, drawn once.
pub fn zigbee_setup(
    wbans: usize,
    sensors: usize,
    gts_count: usize,
    rng: &mut impl Rng,
) -> Vec<ZigbeeGtsSchedule> {
    let shared_channel = rng.random_range(1..=ZIGBEE_CHANNELS);
    (0..wbans)
        .map(|wban_id| ZigbeeGtsSchedule {
            wban_id,
            shared_channel,
            sensors,
            gts_count,
        })
        .collect()
}
